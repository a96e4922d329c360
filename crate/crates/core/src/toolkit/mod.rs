//! Generator, file formats, verifier and benchmark harness.

pub mod bench;
pub mod generate;
pub mod io;
pub mod verify;

pub use bench::{bench, BenchOptions, BenchRecord, BenchReport, Method, MethodSummary};
pub use generate::{generate, GeneratorError, GeneratorSpec};
pub use verify::{verify, VerifyError};
