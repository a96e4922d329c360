//! Independent check of a claimed solution.

use thiserror::Error;

use crate::model::{evaluate, Assignment, Instance, LoadVector, ModelError, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("claimed objective {claimed}, actual {actual}")]
    ObjectiveMismatch { claimed: Weight, actual: Weight },
}

/// Recomputes the loads of `assignment` and compares the objective with
/// `claimed_objective`.
pub fn verify(
    instance: &Instance,
    assignment: &Assignment,
    claimed_objective: Weight,
) -> Result<LoadVector, VerifyError> {
    let loads = evaluate(instance, assignment)?;
    let actual = loads.objective();
    if actual != claimed_objective {
        return Err(VerifyError::ObjectiveMismatch {
            claimed: claimed_objective,
            actual,
        });
    }
    Ok(loads)
}
