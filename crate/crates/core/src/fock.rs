//! Weighted-shift operators on the single-mode Fock space.
//!
//! Every operator is a finite sum of terms `(d, c)` acting as
//! `|n> -> c(n) |n + d>`, with at most one term per shift degree. Products of
//! `a`, `a^dagger` and functions of `N` stay in this form, so identities can be
//! checked on basis states with no truncation of the space itself.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 math shadows this when std is linked
use num_traits::Float;

use crate::error::{DomainError, Error, Result};
use crate::report::{compare_columns, ColumnEntry, GridComparison};
use crate::symbol::{Singular, Symbol};

/// A single weighted shift `|n> -> coeff(n) |n + shift>`.
#[derive(Debug, Clone)]
pub struct ShiftTerm {
    pub shift: i64,
    pub coeff: Symbol,
}

impl ShiftTerm {
    /// Amplitude and target for input `n`. Targets below the vacuum are
    /// returned as `None`, after the coefficient has been evaluated.
    pub fn act(&self, n: u64) -> core::result::Result<Option<(u64, Complex64)>, Singular> {
        let c = self.coeff.eval(n as i64)?;
        let target = n as i64 + self.shift;
        Ok((target >= 0).then_some((target as u64, c)))
    }
}

#[derive(Debug, Clone, Default)]
pub struct FockOperator {
    terms: BTreeMap<i64, Symbol>,
}

impl FockOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::diagonal(Symbol::one())
    }

    pub fn scalar(c: impl Into<Complex64>) -> Self {
        let c = c.into();
        if c == Complex64::new(0.0, 0.0) {
            return Self::zero();
        }
        Self::diagonal(Symbol::constant(c))
    }

    /// The function of `N` given by `f`.
    pub fn diagonal(f: Symbol) -> Self {
        Self::from_term(0, f)
    }

    pub fn from_term(shift: i64, coeff: Symbol) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(shift, coeff);
        FockOperator { terms }
    }

    /// `a|n> = sqrt(n)|n-1>`.
    pub fn annihilation() -> Self {
        Self::from_term(-1, Symbol::number(0).sqrt())
    }

    /// `a^dagger|n> = sqrt(n+1)|n+1>`.
    pub fn creation() -> Self {
        Self::from_term(1, Symbol::number(1).sqrt())
    }

    pub fn number() -> Self {
        Self::diagonal(Symbol::number(0))
    }

    pub fn terms(&self) -> impl Iterator<Item = ShiftTerm> + '_ {
        self.terms.iter().map(|(d, c)| ShiftTerm { shift: *d, coeff: c.clone() })
    }

    pub fn shifts(&self) -> Vec<i64> {
        self.terms.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the operator is a function of `N` only.
    pub fn is_diagonal(&self) -> bool {
        self.terms.keys().all(|&d| d == 0)
    }

    /// The symbol of a function of `N`.
    pub fn diagonal_symbol(&self) -> Result<Symbol> {
        if !self.is_diagonal() {
            return Err(Error::NotDiagonal(self.shifts()));
        }
        Ok(self.terms.get(&0).cloned().unwrap_or_else(Symbol::zero))
    }

    fn insert_term(&mut self, shift: i64, coeff: Symbol) {
        match self.terms.remove(&shift) {
            Some(prev) => {
                self.terms.insert(shift, &prev + &coeff);
            }
            None => {
                self.terms.insert(shift, coeff);
            }
        }
    }

    /// Operator product `self ∘ rhs`: `rhs` acts first.
    pub fn compose(&self, rhs: &FockOperator) -> FockOperator {
        let mut out = FockOperator::zero();
        for (&d2, c2) in &self.terms {
            for (&d1, c1) in &rhs.terms {
                out.insert_term(d1 + d2, &Symbol::at(d1, c2.clone()) * c1);
            }
        }
        out
    }

    pub fn adjoint(&self) -> FockOperator {
        let mut out = FockOperator::zero();
        for (&d, c) in &self.terms {
            out.insert_term(-d, Symbol::at(-d, c.clone()).conj());
        }
        out
    }

    /// Multiply by a scalar. Scaling by exactly zero gives the zero operator.
    pub fn scale(&self, c: impl Into<Complex64>) -> FockOperator {
        let c = c.into();
        if c == Complex64::new(0.0, 0.0) {
            return FockOperator::zero();
        }
        if c == Complex64::new(1.0, 0.0) {
            return self.clone();
        }
        let k = Symbol::constant(c);
        FockOperator {
            terms: self.terms.iter().map(|(d, s)| (*d, &k * s)).collect(),
        }
    }

    /// `f(N)^{-1}`; only defined for functions of `N`.
    pub fn inverse_with(&self, sigma: f64) -> Result<FockOperator> {
        Ok(Self::diagonal(self.diagonal_symbol()?.recip_with(sigma)))
    }

    /// `f(N)^{1/2}`; only defined for functions of `N`.
    pub fn sqrt_with(&self, sigma: f64) -> Result<FockOperator> {
        Ok(Self::diagonal(self.diagonal_symbol()?.sqrt_with(sigma)))
    }

    /// `f(N)^p` for real `p`, evaluated pointwise.
    pub fn powf_with(&self, exponent: f64, sigma: f64) -> Result<FockOperator> {
        Ok(Self::diagonal(self.diagonal_symbol()?.powf_with(exponent, sigma)))
    }

    /// `k`-fold composition with itself.
    pub fn powi(&self, k: u32) -> FockOperator {
        (0..k).fold(FockOperator::identity(), |acc, _| acc.compose(self))
    }

    /// Action on `|n>`: the list of `(m, <m|op|n>)` with `m >= 0`.
    pub fn column(&self, n: u64) -> core::result::Result<Vec<(u64, Complex64)>, Singular> {
        let mut out = Vec::with_capacity(self.terms.len());
        for t in self.terms() {
            if let Some(hit) = t.act(n)? {
                out.push(hit);
            }
        }
        Ok(out)
    }

    pub fn matrix_element(&self, m: u64, n: u64) -> core::result::Result<Complex64, DomainError> {
        let col = self.column(n).map_err(|_| DomainError::at(n))?;
        Ok(col.into_iter().filter(|(t, _)| *t == m).map(|(_, c)| c).sum())
    }

    pub fn is_singular_at(&self, n: u64) -> bool {
        self.column(n).is_err()
    }

    /// Basis states `n <= n_max` on which some term cannot be evaluated.
    pub fn singular_support(&self, n_max: u64) -> BTreeSet<u64> {
        (0..=n_max).filter(|&n| self.is_singular_at(n)).collect()
    }

    pub fn apply(&self, v: &FockVector) -> core::result::Result<FockVector, DomainError> {
        let mut out = FockVector::zero();
        let mut bad = BTreeSet::new();
        for (&n, &amp) in &v.coeffs {
            match self.column(n) {
                Ok(col) => {
                    for (m, c) in col {
                        *out.coeffs.entry(m).or_default() += c * amp;
                    }
                }
                Err(Singular) => {
                    bad.insert(n);
                }
            }
        }
        if bad.is_empty() {
            Ok(out)
        } else {
            Err(DomainError { slot: None, states: bad })
        }
    }
}

impl Add for &FockOperator {
    type Output = FockOperator;
    fn add(self, rhs: &FockOperator) -> FockOperator {
        let mut out = self.clone();
        for (&d, c) in &rhs.terms {
            out.insert_term(d, c.clone());
        }
        out
    }
}

impl Neg for &FockOperator {
    type Output = FockOperator;
    fn neg(self) -> FockOperator {
        FockOperator {
            terms: self.terms.iter().map(|(d, c)| (*d, -c)).collect(),
        }
    }
}

impl Sub for &FockOperator {
    type Output = FockOperator;
    fn sub(self, rhs: &FockOperator) -> FockOperator {
        self + &(-rhs)
    }
}

impl Mul for &FockOperator {
    type Output = FockOperator;
    fn mul(self, rhs: &FockOperator) -> FockOperator {
        self.compose(rhs)
    }
}

macro_rules! forward_owned_op {
    ($tr:ident, $m:ident) => {
        impl $tr for FockOperator {
            type Output = FockOperator;
            fn $m(self, rhs: FockOperator) -> FockOperator {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned_op!(Add, add);
forward_owned_op!(Sub, sub);
forward_owned_op!(Mul, mul);

impl Neg for FockOperator {
    type Output = FockOperator;
    fn neg(self) -> FockOperator {
        -&self
    }
}

/// Comparison of two operators on the grid `m, n <= n_max`.
#[derive(Debug, Clone)]
pub struct EqualityReport {
    pub comparison: GridComparison,
    pub tol: f64,
    pub pass: bool,
}

impl EqualityReport {
    pub fn max_deviation(&self) -> f64 {
        self.comparison.max_deviation
    }

    pub fn excluded(&self) -> BTreeSet<u64> {
        self.comparison.excluded.iter().map(|(_, n)| n).collect()
    }
}

fn op_column(op: &FockOperator, n: u64) -> Option<Vec<ColumnEntry>> {
    op.column(n).ok().map(|c| c.into_iter().map(|(m, v)| (0, m, v)).collect())
}

/// Max `|<m|A - B|n>|` over the grid, skipping inputs where either side is
/// singular.
pub fn op_equal(a: &FockOperator, b: &FockOperator, n_max: u64, tol: f64) -> EqualityReport {
    let comparison =
        compare_columns(1, n_max, Some(tol), |_, n| op_column(a, n), |_, n| op_column(b, n));
    let pass = comparison.max_deviation <= tol;
    EqualityReport { comparison, tol, pass }
}

/// Finitely supported vector in the Fock space.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FockVector {
    coeffs: BTreeMap<u64, Complex64>,
}

impl FockVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(n: u64) -> Self {
        Self::from_pairs([(n, Complex64::new(1.0, 0.0))])
    }

    pub fn from_pairs<I: IntoIterator<Item = (u64, Complex64)>>(pairs: I) -> Self {
        let mut coeffs = BTreeMap::new();
        for (n, c) in pairs {
            *coeffs.entry(n).or_default() += c;
        }
        FockVector { coeffs }
    }

    /// Coherent state `|alpha>` truncated past the peak once amplitudes drop
    /// below `cutoff`.
    pub fn coherent(alpha: Complex64, cutoff: f64) -> Self {
        let r2 = alpha.norm_sqr();
        let mut amp = Complex64::new((-r2 / 2.0).exp(), 0.0);
        let mut coeffs = BTreeMap::new();
        let mut n: u64 = 0;
        loop {
            coeffs.insert(n, amp);
            n += 1;
            amp = amp * alpha / (n as f64).sqrt();
            if n as f64 > r2 && amp.norm() < cutoff {
                break;
            }
        }
        FockVector { coeffs }
    }

    pub fn get(&self, n: u64) -> Complex64 {
        self.coeffs.get(&n).copied().unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.coeffs.iter().map(|(n, c)| (*n, *c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &FockVector) -> Complex64 {
        self.coeffs
            .iter()
            .filter_map(|(n, c)| other.coeffs.get(n).map(|d| c.conj() * d))
            .sum()
    }

    pub fn scale(&self, c: Complex64) -> FockVector {
        FockVector { coeffs: self.coeffs.iter().map(|(n, v)| (*n, v * c)).collect() }
    }

    pub fn add(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        for (n, c) in other.iter() {
            *out.coeffs.entry(n).or_default() += c;
        }
        out
    }

    /// Largest coefficient magnitude of `self - other`.
    pub fn max_abs_diff(&self, other: &FockVector) -> f64 {
        let keys: BTreeSet<u64> = self.support().chain(other.support()).collect();
        keys.into_iter().map(|n| (self.get(n) - other.get(n)).norm()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r_of(offset: i64, theta: f64) -> Symbol {
        (Symbol::number(offset) + theta * theta).sqrt()
    }

    fn sigma(theta: f64) -> f64 {
        1e-12 * (1.0 + theta.abs())
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn ladder_convention() {
        let a = FockOperator::annihilation();
        let v = a.apply(&FockVector::basis(3)).unwrap();
        assert_eq!(v.len(), 1);
        assert!((v.get(2) - c(3f64.sqrt())).norm() < 1e-15);
        assert_eq!(a.apply(&FockVector::basis(0)).unwrap().norm(), 0.0);
        assert!((a.matrix_element(2, 3).unwrap() - c(3f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn inverse_divisor_signals_dirac_string() {
        let theta = -1.0;
        let op = FockOperator::diagonal((r_of(0, theta) + theta).recip_with(sigma(theta)));
        let err = op.apply(&FockVector::basis(0)).unwrap_err();
        assert_eq!(err.states, BTreeSet::from([0]));
    }

    #[test]
    fn compose_ladders() {
        let a = FockOperator::annihilation();
        let ad = FockOperator::creation();
        let aad = a.compose(&ad);
        for n in 0..3u64 {
            assert_eq!(aad.matrix_element(n, n).unwrap(), c((n + 1) as f64));
        }
        assert_eq!(ad.compose(&a).matrix_element(0, 0).unwrap(), c(0.0));
    }

    #[test]
    fn function_of_n_moves_through_creation() {
        let f = |k: i64| FockOperator::diagonal((Symbol::number(k) + 4.0).sqrt());
        let ad = FockOperator::creation();
        let left = f(0).compose(&ad);
        let right = ad.compose(&f(1));
        let expect = 7f64.sqrt() * 3f64.sqrt();
        assert!((expect - 4.5826).abs() < 1e-4);
        for op in [&left, &right] {
            let v = op.apply(&FockVector::basis(2)).unwrap();
            assert!((v.get(3).re - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn adjoint_of_ladder_and_functions() {
        let a = FockOperator::annihilation();
        let ad = FockOperator::creation();
        assert!(op_equal(&a.adjoint(), &ad, 16, 0.0).pass);
        let f = FockOperator::diagonal(r_of(1, 0.4));
        assert!(op_equal(&f.adjoint(), &f, 16, 0.0).pass);
    }

    #[test]
    fn singular_support_examples() {
        let op = |theta: f64, sign: f64| {
            FockOperator::diagonal((r_of(0, theta) + sign * theta).recip_with(sigma(theta)))
        };
        assert_eq!(op(-0.7, 1.0).singular_support(32), BTreeSet::from([0]));
        assert!(op(0.7, 1.0).singular_support(32).is_empty());
        assert_eq!(op(1.3, -1.0).singular_support(32), BTreeSet::from([0]));
    }

    #[test]
    fn r_matrix_elements_on_vacuum() {
        let r = FockOperator::diagonal(r_of(0, 2.0));
        assert_eq!(r.matrix_element(0, 0).unwrap(), c(2.0));
        let r1 = FockOperator::diagonal(r_of(1, 1.0));
        assert!((r1.matrix_element(0, 0).unwrap() - c(2f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn op_equal_examples() {
        let a = FockOperator::annihilation();
        let ad = FockOperator::creation();
        let rep = op_equal(&a.compose(&ad), &(&FockOperator::number() + &FockOperator::identity()), 64, 1e-12);
        assert!(rep.pass);
        assert_eq!(rep.max_deviation(), 0.0);

        let theta = 0.5;
        let s = sigma(theta);
        let lhs = FockOperator::diagonal((r_of(0, theta) + theta).recip_with(s)).compose(&ad);
        let rhs = ad.compose(&FockOperator::diagonal((r_of(1, theta) + theta).recip_with(s)));
        assert!(op_equal(&lhs, &rhs, 48, 1e-14).pass);

        let rep = op_equal(&a, &ad, 8, 1e-12);
        assert!(!rep.pass);
        let first = rep.comparison.first_violation.unwrap();
        assert_eq!((first.m, first.n, first.deviation), (1, 0, 1.0));
        assert!((rep.max_deviation() - 8f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn canonical_commutator_is_exact() {
        let a = FockOperator::annihilation();
        let ad = FockOperator::creation();
        let comm = &a.compose(&ad) - &ad.compose(&a);
        for n in 0..=200u64 {
            let v = comm.apply(&FockVector::basis(n)).unwrap();
            assert_eq!(v.max_abs_diff(&FockVector::basis(n)), 0.0);
        }
    }

    #[test]
    fn inverse_requires_function_of_n() {
        let err = FockOperator::creation().inverse_with(1e-12).unwrap_err();
        assert_eq!(err, Error::NotDiagonal(alloc::vec![1]));
        assert!(FockOperator::number().inverse_with(1e-12).is_ok());
    }

    #[test]
    fn coherent_state_is_normalized() {
        for r in [0.5, 2.0, 8.0] {
            let v = FockVector::coherent(Complex64::new(r, 0.0), 1e-16);
            assert!((v.norm_sqr() - 1.0).abs() < 1e-13, "r = {r}");
            let a = FockOperator::annihilation();
            let ev = v.inner(&a.apply(&v).unwrap());
            assert!((ev - c(r)).norm() < 1e-12);
        }
    }
}
