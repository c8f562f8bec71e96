use alloc::collections::BTreeSet;
use alloc::string::String;

use thiserror::Error;

/// Basis states on which an operator (or one input slot of an operator
/// matrix) cannot be evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("singular on basis states {states:?}{}", slot.map(|s| alloc::format!(" of slot {s}")).unwrap_or_default())]
pub struct DomainError {
    /// 1-based input slot for operator matrices.
    pub slot: Option<usize>,
    pub states: BTreeSet<u64>,
}

impl DomainError {
    pub fn at(n: u64) -> Self {
        DomainError { slot: None, states: BTreeSet::from([n]) }
    }

    pub fn in_slot(mut self, slot: usize) -> Self {
        self.slot = Some(slot);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("operation requires a function of N, operator has shift degrees {0:?}")]
    NotDiagonal(alloc::vec::Vec<i64>),
    #[error("dimension mismatch: {left:?} against {right:?}")]
    DimensionMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("point lies on a Dirac string: {0}")]
    DiracString(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = core::result::Result<T, Error>;
