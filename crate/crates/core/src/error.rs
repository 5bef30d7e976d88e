use thiserror::Error;

use crate::decomposition::DecompositionError;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("list of vertex {vertex} names colour {colour}, target has {k}")]
    UnknownColour { vertex: usize, colour: usize, k: usize },
    #[error("not a path-decomposition of the instance graph")]
    InvalidDecomposition,
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub(crate) fn check_lists(inst: &crate::graph::Instance, k: usize) -> Result<(), SolveError> {
    for v in 0..inst.n() {
        if let Some(&colour) = inst.lists.get(v).iter().find(|&&c| c >= k) {
            return Err(SolveError::UnknownColour { vertex: v, colour, k });
        }
    }
    Ok(())
}
