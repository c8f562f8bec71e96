//! Ladder-operator algebra on the bosonic Fock space, with operator-valued
//! charts of the Jaynes-Cummings Hamiltonian, non-commutative Veronese and
//! spin constructions, and their classical counterparts.
//!
//! Operators are finite sums of weighted shifts `|n> -> c(n)|n + d>` whose
//! weights are exact functions of `N`. Identities are checked on basis grids
//! without truncating the space, and basis states where a weight cannot be
//! evaluated are reported as singular.

#![no_std]

extern crate alloc;

pub mod berry;
pub mod error;
pub mod fock;
pub mod jc;
pub mod opmatrix;
pub mod report;
pub mod spin;
pub mod symbol;
pub mod veronese;

pub use error::{DomainError, Error, Result};
pub use fock::{op_equal, EqualityReport, FockOperator, FockVector, ShiftTerm};
pub use opmatrix::{check_idempotent_hermitian, check_unitary, compare, OpMatrix, StackedState};
pub use report::{CheckOutcome, Criterion, ExcludedStates, GridComparison, GridPoint};
pub use symbol::{Singular, Symbol, DEFAULT_SIGMA};
