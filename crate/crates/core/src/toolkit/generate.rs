//! Seeded instance generator.
//!
//! Weights are drawn i.i.d. uniform from `[weight_min, weight_max]` by a
//! ChaCha8 stream seeded with `seed`, in row-major order (set outer, item
//! inner). The same spec always yields the same instance.

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{Instance, ModelError, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("T and B must be at least 1 (got T = {sets}, B = {groups})")]
    EmptyShape { sets: usize, groups: usize },
    #[error("weight bounds must satisfy 0 <= min <= max (got [{min}, {max}])")]
    BadBounds { min: Weight, max: Weight },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GeneratorSpec {
    pub sets: usize,
    pub groups: usize,
    pub weight_min: Weight,
    pub weight_max: Weight,
    pub seed: u64,
}

impl GeneratorSpec {
    /// Uniform weights in `[1, 100]`.
    pub fn uniform(sets: usize, groups: usize, seed: u64) -> Self {
        Self {
            sets,
            groups,
            weight_min: 1,
            weight_max: 100,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), GeneratorError> {
        if self.sets == 0 || self.groups == 0 {
            return Err(GeneratorError::EmptyShape {
                sets: self.sets,
                groups: self.groups,
            });
        }
        if self.weight_min < 0 || self.weight_min > self.weight_max {
            return Err(GeneratorError::BadBounds {
                min: self.weight_min,
                max: self.weight_max,
            });
        }
        Ok(())
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<Instance, GeneratorError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let dist = Uniform::new_inclusive(spec.weight_min, spec.weight_max);
    let rows = (0..spec.sets)
        .map(|_| (0..spec.groups).map(|_| dist.sample(&mut rng)).collect())
        .collect();
    Ok(Instance::new(rows)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toolkit::io::matrix;

    #[test]
    fn deterministic() {
        let spec = GeneratorSpec::uniform(2, 2, 42);
        let a = generate(&spec).unwrap();
        assert_eq!(a, generate(&spec).unwrap());
        assert!(matrix(&a).iter().flatten().all(|w| (1..=100).contains(w)));
        assert_ne!(a, generate(&GeneratorSpec { seed: 43, ..spec }).unwrap());
    }

    #[test]
    fn degenerate_bounds() {
        let spec = GeneratorSpec {
            weight_min: 7,
            weight_max: 7,
            ..GeneratorSpec::uniform(4, 3, 9)
        };
        let i = generate(&spec).unwrap();
        assert!(matrix(&i).iter().flatten().all(|&w| w == 7));
        assert_eq!(i.ranges().max, 0);
    }

    #[test]
    fn largest_reported_size() {
        let i = generate(&GeneratorSpec::uniform(20, 300, 1)).unwrap();
        assert_eq!(i.sets() * i.groups(), 6000);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(generate(&GeneratorSpec::uniform(0, 3, 1)).is_err());
        let spec = GeneratorSpec {
            weight_min: 5,
            weight_max: 4,
            ..GeneratorSpec::uniform(1, 1, 1)
        };
        assert_eq!(
            generate(&spec).unwrap_err(),
            GeneratorError::BadBounds { min: 5, max: 4 }
        );
    }
}
