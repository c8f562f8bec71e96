//! Matrices whose entries are Fock-space operators.
//!
//! Entry products keep their order: `(AB)[i][k] = sum_j A[i][j] ∘ B[j][k]`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 math shadows this when std is linked
use num_traits::Float;

use crate::error::{DomainError, Error, Result};
use crate::fock::{FockOperator, FockVector};
use crate::report::{compare_columns, CheckOutcome, ColumnEntry, Criterion, ExcludedStates, GridComparison};
use crate::symbol::Singular;

#[derive(Debug, Clone)]
pub struct OpMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<FockOperator>,
}

impl OpMatrix {
    /// Row-major construction.
    pub fn new(rows: usize, cols: usize, entries: Vec<FockOperator>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(OpMatrix { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> FockOperator) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        OpMatrix { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| FockOperator::zero())
    }

    pub fn identity(k: usize) -> Self {
        Self::from_fn(k, k, |i, j| if i == j { FockOperator::identity() } else { FockOperator::zero() })
    }

    pub fn diag(d: Vec<FockOperator>) -> Self {
        let k = d.len();
        let mut out = Self::zeros(k, k);
        for (i, op) in d.into_iter().enumerate() {
            out.entries[i * k + i] = op;
        }
        out
    }

    /// A classical matrix: every entry a multiple of the identity operator.
    pub fn from_scalars(m: &DMatrix<Complex64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| FockOperator::scalar(m[(i, j)]))
    }

    /// `k x 1` column.
    pub fn column_of(ops: Vec<FockOperator>) -> Self {
        let k = ops.len();
        OpMatrix { rows: k, cols: 1, entries: ops }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entry at 0-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &FockOperator {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of {}x{}", self.rows, self.cols);
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, op: FockOperator) {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of {}x{}", self.rows, self.cols);
        self.entries[i * self.cols + j] = op;
    }

    pub fn column(&self, j: usize) -> OpMatrix {
        Self::from_fn(self.rows, 1, |i, _| self.get(i, j).clone())
    }

    pub fn matmul(&self, rhs: &OpMatrix) -> Result<OpMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { left: self.shape(), right: rhs.shape() });
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |i, k| {
            (0..self.cols).fold(FockOperator::zero(), |acc, j| {
                let a = self.get(i, j);
                let b = rhs.get(j, k);
                if a.is_zero() || b.is_zero() {
                    acc
                } else {
                    &acc + &a.compose(b)
                }
            })
        }))
    }

    pub fn adjoint(&self) -> OpMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).adjoint())
    }

    /// `(A ⊗ B)[(i,k)][(j,l)] = A[i][j] ∘ B[k][l]`.
    pub fn kron(&self, rhs: &OpMatrix) -> OpMatrix {
        let (p, q) = rhs.shape();
        Self::from_fn(self.rows * p, self.cols * q, |r, c| {
            let a = self.get(r / p, c / q);
            let b = rhs.get(r % p, c % q);
            if a.is_zero() || b.is_zero() {
                FockOperator::zero()
            } else {
                a.compose(b)
            }
        })
    }

    fn zip(&self, rhs: &OpMatrix, f: impl Fn(&FockOperator, &FockOperator) -> FockOperator) -> Result<OpMatrix> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch { left: self.shape(), right: rhs.shape() });
        }
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| f(a, b)).collect();
        Ok(OpMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn add(&self, rhs: &OpMatrix) -> Result<OpMatrix> {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &OpMatrix) -> Result<OpMatrix> {
        self.zip(rhs, |a, b| a - b)
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> OpMatrix {
        let c = c.into();
        OpMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
        }
    }

    /// Image of the basis state `(slot, |n>)` (0-based slot) as
    /// `(row, m, amplitude)` triples.
    pub fn column_action(&self, slot: usize, n: u64) -> core::result::Result<Vec<ColumnEntry>, Singular> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for (m, v) in self.get(i, slot).column(n)? {
                out.push((i, m, v));
            }
        }
        Ok(out)
    }

    /// Input states `(slot, n)`, `n <= n_max`, on which some entry of the
    /// slot's column is singular. Slots are reported 1-based.
    pub fn singular_states(&self, n_max: u64) -> ExcludedStates {
        let mut out = ExcludedStates::new();
        for j in 0..self.cols {
            for n in 0..=n_max {
                if self.column_action(j, n).is_err() {
                    out.insert(j + 1, n);
                }
            }
        }
        out
    }

    pub fn apply(&self, s: &StackedState) -> Result<StackedState> {
        if s.components.len() != self.cols {
            return Err(Error::DimensionMismatch { left: self.shape(), right: (s.components.len(), 1) });
        }
        let mut out = StackedState::zero(self.rows);
        for (j, v) in s.components.iter().enumerate() {
            let mut bad = BTreeSet::new();
            for i in 0..self.rows {
                match self.get(i, j).apply(v) {
                    Ok(w) => out.components[i] = out.components[i].add(&w),
                    Err(e) => bad.extend(e.states),
                }
            }
            if !bad.is_empty() {
                return Err(DomainError { slot: Some(j + 1), states: bad }.into());
            }
        }
        Ok(out)
    }
}

/// An element of `C^k ⊗ F`: one Fock vector per slot.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StackedState {
    pub components: Vec<FockVector>,
}

impl StackedState {
    pub fn zero(k: usize) -> Self {
        StackedState { components: alloc::vec![FockVector::zero(); k] }
    }

    /// `|n>` in 0-based `slot` of a `k`-slot state.
    pub fn basis(k: usize, slot: usize, n: u64) -> Self {
        let mut s = Self::zero(k);
        s.components[slot] = FockVector::basis(n);
        s
    }

    pub fn new(components: Vec<FockVector>) -> Self {
        StackedState { components }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.components.iter().map(FockVector::norm_sqr).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs_diff(&self, other: &StackedState) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }
}

/// Grid comparison of two matrices of equal shape over inputs `(slot, n)`.
pub fn compare(a: &OpMatrix, b: &OpMatrix, n_max: u64, tol: f64) -> Result<GridComparison> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch { left: a.shape(), right: b.shape() });
    }
    Ok(compare_columns(
        a.cols,
        n_max,
        Some(tol),
        |j, n| a.column_action(j, n).ok(),
        |j, n| b.column_action(j, n).ok(),
    ))
}

/// As [`compare`], but inputs listed in `skip` (1-based slots) are left out
/// and reported as excluded.
pub fn compare_except(a: &OpMatrix, b: &OpMatrix, n_max: u64, tol: f64, skip: &ExcludedStates) -> Result<GridComparison> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch { left: a.shape(), right: b.shape() });
    }
    let side = |m: &OpMatrix, j: usize, n: u64| {
        if skip.contains(j + 1, n) {
            None
        } else {
            m.column_action(j, n).ok()
        }
    };
    Ok(compare_columns(a.cols, n_max, Some(tol), |j, n| side(a, j, n), |j, n| side(b, j, n)))
}

/// Named comparison of `a` against `b`, packaged as a check.
pub fn check_equal(
    name: &str,
    anchor: &str,
    a: &OpMatrix,
    b: &OpMatrix,
    n_max: u64,
    tol: f64,
) -> Result<CheckOutcome> {
    let cmp = compare(a, b, n_max, tol)?;
    Ok(CheckOutcome::new(name, anchor, Criterion::AtMost(tol)).with_comparison(&cmp))
}

/// `M†M = 1` and `MM† = 1` on the grid; exclusions are the union of both.
pub fn check_unitary(m: &OpMatrix, n_max: u64, tol: f64) -> Result<CheckOutcome> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { left: m.shape(), right: (m.cols, m.rows) });
    }
    let id = OpMatrix::identity(m.rows);
    let mdm = m.adjoint().matmul(m)?;
    let mmd = m.matmul(&m.adjoint())?;
    let left = compare(&mdm, &id, n_max, tol)?;
    let right = compare(&mmd, &id, n_max, tol)?;
    let cmp = left.merge(right);
    Ok(CheckOutcome::new("unitary", "M^dagger M = M M^dagger = 1", Criterion::AtMost(tol)).with_comparison(&cmp))
}

/// `M² = M` and `M† = M` on the grid.
pub fn check_idempotent_hermitian(m: &OpMatrix, n_max: u64, tol: f64) -> Result<CheckOutcome> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { left: m.shape(), right: (m.cols, m.rows) });
    }
    let sq = compare(&m.matmul(m)?, m, n_max, tol)?;
    let herm = compare(&m.adjoint(), m, n_max, tol)?;
    let cmp = sq.merge(herm);
    Ok(CheckOutcome::new("projector", "P^2 = P, P^dagger = P", Criterion::AtMost(tol)).with_comparison(&cmp))
}
