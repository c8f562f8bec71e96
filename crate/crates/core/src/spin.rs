//! Spin representations of SU(2) for `j = 1/2, 1, 3/2`, their
//! Clebsch-Gordan decompositions, and the operator-valued versions
//! `Φ_1(V)`, `Φ_{3/2}(V)` built from the chart-I unitary.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 math shadows this when std is linked
use num_traits::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::FockOperator;
use crate::jc::{build_chart, ChartLabel, JcParams};
use crate::opmatrix::{check_equal, check_unitary, compare, OpMatrix};
use crate::report::{CheckOutcome, Criterion};
use crate::veronese::{build_family, lift, projector_pn, VeroneseFamily};

const SQRT2: f64 = core::f64::consts::SQRT_2;

/// Spins with an explicit matrix here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Spin {
    #[serde(rename = "1/2")]
    Half,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "3/2")]
    ThreeHalves,
}

impl Spin {
    /// `2j + 1`.
    pub fn dim(self) -> usize {
        match self {
            Spin::Half => 2,
            Spin::One => 3,
            Spin::ThreeHalves => 4,
        }
    }

    /// `2j`.
    pub fn twice(self) -> u32 {
        self.dim() as u32 - 1
    }
}

impl core::fmt::Display for Spin {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Spin::Half => "1/2",
            Spin::One => "1",
            Spin::ThreeHalves => "3/2",
        })
    }
}

/// `[[α, -conj β], [β, conj α]]` with `|α|² + |β|² = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Su2Element {
    pub alpha: Complex64,
    pub beta: Complex64,
}

/// Allowed slack in `|α|² + |β|² = 1`.
pub const SU2_TOL: f64 = 1e-12;

impl Su2Element {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > SU2_TOL {
            return Err(Error::InvalidInput(format!("|alpha|^2 + |beta|^2 = {norm}, expected 1")));
        }
        Ok(Su2Element { alpha, beta })
    }

    pub fn identity() -> Self {
        Su2Element { alpha: Complex64::new(1.0, 0.0), beta: Complex64::new(0.0, 0.0) }
    }

    /// `diag(e^{iφ}, e^{-iφ})`.
    pub fn torus(phi: f64) -> Self {
        Su2Element { alpha: Complex64::from_polar(1.0, phi), beta: Complex64::new(0.0, 0.0) }
    }

    /// Normalize a nonzero first column; the second column is then fixed by
    /// unitarity and `det = 1`.
    pub fn from_column(a: Complex64, b: Complex64) -> Result<Self> {
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidInput("cannot normalize a zero column".into()));
        }
        Ok(Su2Element { alpha: a / n, beta: b / n })
    }

    pub fn matrix(&self) -> DMatrix<Complex64> {
        let (a, b) = (self.alpha, self.beta);
        DMatrix::from_row_slice(2, 2, &[a, -b.conj(), b, a.conj()])
    }

    /// Group product, read off the first column of the matrix product.
    pub fn mul(&self, rhs: &Su2Element) -> Su2Element {
        let m = self.matrix() * rhs.matrix();
        Su2Element { alpha: m[(0, 0)], beta: m[(1, 0)] }
    }

    pub fn det(&self) -> Complex64 {
        self.alpha * self.alpha.conj() + self.beta * self.beta.conj()
    }
}

/// The explicit matrices of `φ_j(A)`.
pub fn spin_rep(g: &Su2Element, j: Spin) -> DMatrix<Complex64> {
    let (a, b) = (g.alpha, g.beta);
    let (ac, bc) = (a.conj(), b.conj());
    let (aa, bb) = (a.norm_sqr(), b.norm_sqr());
    let s3 = 3f64.sqrt();
    match j {
        Spin::Half => g.matrix(),
        Spin::One => DMatrix::from_row_slice(
            3,
            3,
            &[
                a * a,
                -SQRT2 * a * bc,
                bc * bc,
                SQRT2 * a * b,
                Complex64::from(aa - bb),
                -SQRT2 * ac * bc,
                b * b,
                SQRT2 * ac * b,
                ac * ac,
            ],
        ),
        Spin::ThreeHalves => DMatrix::from_row_slice(
            4,
            4,
            &[
                a * a * a,
                -s3 * a * a * bc,
                s3 * a * bc * bc,
                -bc * bc * bc,
                s3 * a * a * b,
                (aa - 2.0 * bb) * a,
                -(2.0 * aa - bb) * bc,
                s3 * ac * bc * bc,
                s3 * a * b * b,
                (2.0 * aa - bb) * b,
                (aa - 2.0 * bb) * ac,
                -s3 * ac * ac * bc,
                b * b * b,
                s3 * ac * b * b,
                s3 * ac * ac * b,
                ac * ac * ac,
            ],
        ),
    }
}

fn real(rows: usize, cols: usize, v: &[f64]) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(rows, cols, v).map(Complex64::from)
}

/// Clebsch-Gordan change of basis for `1/2 ⊗ 1/2 = 0 ⊕ 1`.
pub fn t4() -> DMatrix<Complex64> {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    #[rustfmt::skip]
    let v = [
        0.0, 1.0, 0.0, 0.0,
        h,   0.0, h,   0.0,
        -h,  0.0, h,   0.0,
        0.0, 0.0, 0.0, 1.0,
    ];
    real(4, 4, &v)
}

/// Clebsch-Gordan change of basis for `1/2 ⊗ 1/2 ⊗ 1/2 = 1/2 ⊕ 1/2 ⊕ 3/2`.
pub fn t8() -> DMatrix<Complex64> {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let s6 = 1.0 / 6f64.sqrt();
    let s3 = 1.0 / 3f64.sqrt();
    let t = SQRT2 * s3;
    #[rustfmt::skip]
    let v = [
        0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0,
        h,   0.0, s6,  0.0, 0.0, s3,  0.0, 0.0,
        -h,  0.0, s6,  0.0, 0.0, s3,  0.0, 0.0,
        0.0, 0.0, 0.0, t,   0.0, 0.0, s3,  0.0,
        0.0, 0.0, -t,  0.0, 0.0, s3,  0.0, 0.0,
        0.0, h,   0.0, -s6, 0.0, 0.0, s3,  0.0,
        0.0, -h,  0.0, -s6, 0.0, 0.0, s3,  0.0,
        0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0,
    ];
    real(8, 8, &v)
}

fn block_diag(blocks: &[DMatrix<Complex64>]) -> DMatrix<Complex64> {
    let n = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = DMatrix::zeros(n, n);
    let mut at = 0;
    for b in blocks {
        out.view_mut((at, at), (b.nrows(), b.ncols())).copy_from(b);
        at += b.nrows();
    }
    out
}

fn max_entry(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entry of `M†M - 1`.
pub fn unitarity_defect(m: &DMatrix<Complex64>) -> f64 {
    max_entry(&(m.adjoint() * m - DMatrix::identity(m.nrows(), m.ncols())))
}

/// Largest entry of `φ_j(AB) - φ_j(A) φ_j(B)`.
pub fn homomorphism_defect(a: &Su2Element, b: &Su2Element, j: Spin) -> f64 {
    max_entry(&(spin_rep(&a.mul(b), j) - spin_rep(a, j) * spin_rep(b, j)))
}

/// `T_4† (A ⊗ A) T_4 = diag(1, φ_1(A))`.
pub fn cg_decompose_pair(g: &Su2Element, tol: f64) -> CheckOutcome {
    let a = g.matrix();
    let t = t4();
    let lhs = t.adjoint() * a.kronecker(&a) * &t;
    let one = DMatrix::from_element(1, 1, Complex64::from(1.0));
    let rhs = block_diag(&[one, spin_rep(g, Spin::One)]);
    CheckOutcome::new("cg_pair", "T^dagger (A x A) T = diag(1, phi_1(A))", Criterion::AtMost(tol))
        .with_deviation(max_entry(&(lhs - rhs)))
}

/// `T_8† (A ⊗ A ⊗ A) T_8 = diag(φ_{1/2}(A), φ_{1/2}(A), φ_{3/2}(A))`.
pub fn cg_decompose_triple(g: &Su2Element, tol: f64) -> CheckOutcome {
    let a = g.matrix();
    let t = t8();
    let lhs = t.adjoint() * a.kronecker(&a).kronecker(&a) * &t;
    let rhs = block_diag(&[a.clone(), a, spin_rep(g, Spin::ThreeHalves)]);
    CheckOutcome::new("cg_triple", "T^dagger (A x A x A) T = diag(phi_1/2, phi_1/2, phi_3/2)", Criterion::AtMost(tol))
        .with_deviation(max_entry(&(lhs - rhs)))
}

/// Largest entry of `T†T - 1` for both displayed matrices.
pub fn cg_orthonormality_defect() -> f64 {
    unitarity_defect(&t4()).max(unitarity_defect(&t8()))
}

/// `Φ_1(V)` or `Φ_{3/2}(V)`, every entry in the displayed operator order.
pub fn nc_spin_rep(theta: f64, j: Spin) -> Result<OpMatrix> {
    let f = build_family(theta, 3)?;
    nc_spin_rep_from(&f, j)
}

fn nc_spin_rep_from(f: &VeroneseFamily, j: Spin) -> Result<OpMatrix> {
    let x = |k: u32| f.x_op(k);
    let y = |k: u32| f.y[k as usize].clone();
    let yd = |k: u32| f.y[k as usize].adjoint();
    let s2 = SQRT2;
    let s3 = 3f64.sqrt();
    let m = |ops: &[FockOperator]| ops.iter().skip(1).fold(ops[0].clone(), |acc, o| acc.compose(o));
    match j {
        Spin::Half => Err(Error::InvalidInput("Φ_1/2(V) is V itself; use the chart-I unitary".into())),
        Spin::One => {
            let e = vec![
                m(&[x(0), x(0)]),
                m(&[x(0), yd(0)]).scale(-s2),
                m(&[yd(0), yd(1)]),
                m(&[y(0), x(0)]).scale(s2),
                &m(&[x(1), x(1)]) - &m(&[yd(1), y(1)]),
                m(&[x(1), yd(1)]).scale(-s2),
                m(&[y(1), y(0)]),
                m(&[y(1), x(1)]).scale(s2),
                m(&[x(2), x(2)]),
            ];
            OpMatrix::new(3, 3, e)
        }
        Spin::ThreeHalves => {
            let x1sq = m(&[x(1), x(1)]);
            let y1y1 = m(&[yd(1), y(1)]);
            let x2sq = m(&[x(2), x(2)]);
            let y2y2 = m(&[yd(2), y(2)]);
            // X_{-1}^2 - 2 Y† Y and 2 X_{-1}^2 - Y† Y
            let p1 = &x1sq - &y1y1.scale(2.0);
            let q1 = &x1sq.scale(2.0) - &y1y1;
            let p2 = &x2sq - &y2y2.scale(2.0);
            let e = vec![
                m(&[x(0), x(0), x(0)]),
                m(&[x(0), x(0), yd(0)]).scale(-s3),
                m(&[x(0), yd(0), yd(1)]).scale(s3),
                -m(&[yd(0), yd(1), yd(2)]),
                m(&[y(0), x(0), x(0)]).scale(s3),
                x(1).compose(&p1),
                -q1.compose(&yd(1)),
                m(&[x(1), yd(1), yd(2)]).scale(s3),
                m(&[y(1), y(0), x(0)]).scale(s3),
                y(1).compose(&q1),
                x(2).compose(&p2),
                m(&[x(2), x(2), yd(2)]).scale(-s3),
                m(&[y(2), y(1), y(0)]),
                m(&[y(2), y(1), x(1)]).scale(s3),
                m(&[y(2), x(2), x(2)]).scale(s3),
                m(&[x(3), x(3), x(3)]),
            ];
            OpMatrix::new(4, 4, e)
        }
    }
}

fn named(mut c: CheckOutcome, name: String, anchor: &str) -> CheckOutcome {
    c.name = name;
    c.anchor = anchor.into();
    c
}

/// Unitarity, first column `= A_{2j}`, and `Φ diag(1,0,..) Φ† = P_{2j}`.
pub fn nc_spin_checks(theta: f64, j: Spin, n_max: u64, tol: f64) -> Result<Vec<CheckOutcome>> {
    let phi = nc_spin_rep(theta, j)?;
    let lifted = lift(&build_family(theta, j.twice())?);
    let mut out = Vec::new();
    out.push(named(check_unitary(&phi, n_max, tol)?, format!("phi_{j}_unitary"), "Phi_j(V)^dagger Phi_j(V) = 1"));
    out.push(check_equal(&format!("phi_{j}_first_column"), "first column of Phi_j(V) = A_{2j}", &phi.column(0), &lifted.a, n_max, tol)?);
    let mut e0 = OpMatrix::zeros(j.dim(), j.dim());
    e0.set(0, 0, FockOperator::identity());
    let proj = phi.matmul(&e0)?.matmul(&phi.adjoint())?;
    out.push(check_equal(
        &format!("phi_{j}_projector"),
        "Phi_j(V) diag(1, 0, ..) Phi_j(V)^dagger = A_{2j} A_{2j}^dagger = P_{2j}",
        &proj,
        &projector_pn(&lifted),
        n_max,
        tol,
    )?);
    Ok(out)
}

/// Threshold the tensor-product mismatch has to clear.
pub const BREAKDOWN_THRESHOLD: f64 = 1e-8;

/// `V ⊗ V` in the displayed operator order.
pub fn displayed_v_tensor_v(theta: f64) -> Result<OpMatrix> {
    let f = build_family(theta, 1)?;
    let x0 = f.x_op(0);
    let x1 = f.x_op(1);
    let y0 = f.y[0].clone();
    let y0d = y0.adjoint();
    let e = vec![
        x0.compose(&x0),
        -x0.compose(&y0d),
        -y0d.compose(&x0),
        y0d.compose(&y0d),
        x0.compose(&y0),
        x0.compose(&x1),
        -y0d.compose(&y0),
        -y0d.compose(&x1),
        y0.compose(&x0),
        -y0.compose(&y0d),
        x1.compose(&x0),
        -x1.compose(&y0d),
        y0.compose(&y0),
        y0.compose(&x1),
        x1.compose(&y0),
        x1.compose(&x1),
    ];
    OpMatrix::new(4, 4, e)
}

/// `T_4† (V ⊗ V) T_4` against `diag(1, Φ_1(V))`: expected to differ.
/// Also checks the entry layout of `V ⊗ V` and the scalar control.
pub fn tensor_breakdown_checks(theta: f64, n_max: u64, tol: f64) -> Result<Vec<CheckOutcome>> {
    let v = build_chart(&JcParams::new(theta), ChartLabel::I).unitary;
    let vv = v.kron(&v);
    let t = OpMatrix::from_scalars(&t4());
    let lhs = t.adjoint().matmul(&vv)?.matmul(&t)?;
    let phi = nc_spin_rep(theta, Spin::One)?;
    let rhs = OpMatrix::from_fn(4, 4, |i, j| match (i, j) {
        (0, 0) => FockOperator::identity(),
        (0, _) | (_, 0) => FockOperator::zero(),
        _ => phi.get(i - 1, j - 1).clone(),
    });
    let cmp = compare(&lhs, &rhs, n_max, tol)?;
    let mut breakdown = CheckOutcome::new(
        "tensor_breakdown",
        "T^dagger (V x V) T != diag(1, Phi_1(V))",
        Criterion::Exceeds(BREAKDOWN_THRESHOLD),
    )
    .with_comparison(&cmp);
    if let Some(w) = cmp.worst {
        breakdown = breakdown.note(format!(
            "max |entry| {:e} at row {} |{}>, input slot {} |{}>",
            w.deviation, w.row, w.m, w.col, w.n
        ));
    }
    let layout = check_equal("v_tensor_v_layout", "V x V entries as displayed", &vv, &displayed_v_tensor_v(theta)?, n_max, tol)?;
    let g = Su2Element::from_column(Complex64::new(theta, 0.3), Complex64::new(0.5, -theta))?;
    let mut control = cg_decompose_pair(&g, tol);
    control.name = "tensor_scalar_control".into();
    control.anchor = "T^dagger (A x A) T = diag(1, phi_1(A)) with scalar A".into();
    Ok(vec![breakdown, layout, control])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::ExcludedStates;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn samples() -> Vec<Su2Element> {
        // deterministic spread over the group
        (0..40)
            .map(|k| {
                let t = k as f64;
                Su2Element::from_column(c((0.7 * t).sin() + 0.1, (1.3 * t).cos()), c((2.1 * t).cos(), (0.4 * t + 1.0).sin()))
                    .unwrap()
            })
            .collect()
    }

    // Independent oracle: act on H_J = span{z^{J-1-k} / sqrt((J-1-k)! k!)} by
    // (φ f)(z) = (-conj β z + conj α)^{J-1} f((α z + β)/(-conj β z + conj α)).
    fn poly_mul(p: &[Complex64], q: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![c(0.0, 0.0); p.len() + q.len() - 1];
        for (i, a) in p.iter().enumerate() {
            for (j, b) in q.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        out
    }

    fn poly_pow(p: &[Complex64], k: usize) -> Vec<Complex64> {
        (0..k).fold(vec![c(1.0, 0.0)], |acc, _| poly_mul(&acc, p))
    }

    fn fact(n: usize) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }

    fn oracle(g: &Su2Element, dim: usize) -> DMatrix<Complex64> {
        let (a, b) = (g.alpha, g.beta);
        let num = [b, a]; // β + α z, coefficients by ascending power
        let den = [a.conj(), -b.conj()];
        let deg = dim - 1;
        let norm = |p: usize| (fact(p) * fact(deg - p)).sqrt();
        DMatrix::from_fn(dim, dim, |r, k| {
            let p = deg - k;
            let image = poly_mul(&poly_pow(&num, p), &poly_pow(&den, deg - p));
            let pr = deg - r;
            image[pr] * norm(pr) / norm(p)
        })
    }

    fn max_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
        max_entry(&(a - b))
    }

    #[test]
    fn su2_validation() {
        assert!(Su2Element::new(c(1.0, 0.0), c(0.1, 0.0)).is_err());
        let g = Su2Element::new(c(0.6, 0.0), c(0.0, 0.8)).unwrap();
        assert!((g.det() - c(1.0, 0.0)).norm() < 1e-15);
        assert!((g.matrix().determinant() - c(1.0, 0.0)).norm() < 1e-15);
        assert!(Su2Element::from_column(c(0.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn explicit_matrices_match_defining_action() {
        for g in samples() {
            for j in [Spin::Half, Spin::One, Spin::ThreeHalves] {
                let d = max_diff(&spin_rep(&g, j), &oracle(&g, j.dim()));
                assert!(d < 1e-14, "spin {j}: {d}");
            }
        }
    }

    #[test]
    fn identity_and_torus() {
        for j in [Spin::Half, Spin::One, Spin::ThreeHalves] {
            let m = spin_rep(&Su2Element::identity(), j);
            assert_eq!(m, DMatrix::identity(j.dim(), j.dim()));
        }
        let phi = 0.37;
        let m = spin_rep(&Su2Element::torus(phi), Spin::One);
        let want = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::from_polar(1.0, 2.0 * phi),
            c(1.0, 0.0),
            Complex64::from_polar(1.0, -2.0 * phi),
        ]));
        assert!(max_diff(&m, &want) < 1e-15);
    }

    #[test]
    fn unitary_homomorphism() {
        let s = samples();
        for (a, b) in s.iter().zip(s.iter().rev()) {
            for j in [Spin::Half, Spin::One, Spin::ThreeHalves] {
                assert!(unitarity_defect(&spin_rep(a, j)) <= 1e-12);
                assert!(homomorphism_defect(a, b, j) <= 1e-12);
            }
        }
    }

    #[test]
    fn cg_matrices() {
        assert!(cg_orthonormality_defect() <= 1e-15);
        let id = Su2Element::identity();
        assert!(cg_decompose_pair(&id, 1e-12).max_deviation < 1e-15);
        assert!(cg_decompose_triple(&id, 1e-12).max_deviation < 1e-15);
        for g in samples() {
            let p = cg_decompose_pair(&g, 1e-12);
            assert!(p.pass, "{}", p.max_deviation);
            let t = cg_decompose_triple(&g, 1e-12);
            assert!(t.pass, "{}", t.max_deviation);
        }
    }

    #[test]
    fn pair_corner_is_norm() {
        let g = Su2Element::new(c(0.6, 0.0), c(0.0, 0.8)).unwrap();
        let a = g.matrix();
        let m = t4().adjoint() * a.kronecker(&a) * t4();
        assert!((m[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn triple_torus_phases() {
        let phi = 0.5;
        let t = t8();
        let a = Su2Element::torus(phi).matrix();
        let m = t.adjoint() * a.kronecker(&a).kronecker(&a) * &t;
        let phases = [1.0, -1.0, 1.0, -1.0, 3.0, 1.0, -1.0, -3.0];
        for (k, p) in phases.iter().enumerate() {
            assert!((m[(k, k)] - Complex64::from_polar(1.0, p * phi)).norm() < 1e-15);
        }
    }

    #[test]
    fn nc_reps_pass_on_defined_grid() {
        for theta in [0.5, 1.0, 2.0] {
            for j in [Spin::One, Spin::ThreeHalves] {
                for c in nc_spin_checks(theta, j, 40, 1e-10).unwrap() {
                    assert!(c.pass, "theta {theta} {}: {}", c.name, c.max_deviation);
                }
            }
        }
    }

    #[test]
    fn phi_one_exclusions() {
        // Y_{-1}† reads sqrt((N-1)/N) on the input of the third slot, Y_{-2}†
        // reads sqrt((N-2)/N) on the fourth
        let c = &nc_spin_checks(1.0, Spin::One, 16, 1e-10).unwrap()[0];
        assert_eq!(c.excluded_states, ExcludedStates::from_pairs([(3, 0)]));
        let c = &nc_spin_checks(1.0, Spin::ThreeHalves, 16, 1e-10).unwrap()[0];
        assert_eq!(c.excluded_states, ExcludedStates::from_pairs([(3, 0), (4, 0), (4, 1)]));
    }

    #[test]
    fn nc_half_rejected() {
        assert!(nc_spin_rep(1.0, Spin::Half).is_err());
    }

    #[test]
    fn breakdown_is_real() {
        for theta in [0.5, 1.0, 2.0] {
            let checks = tensor_breakdown_checks(theta, 16, 1e-10).unwrap();
            for c in &checks {
                assert!(c.pass, "theta {theta} {}: {}", c.name, c.max_deviation);
            }
            assert!(checks[0].max_deviation > 1e-3, "{}", checks[0].max_deviation);
            assert!(checks[0].max_deviation < 10.0);
            assert!(checks[2].max_deviation <= 1e-12);
        }
    }

    #[test]
    fn layout_entry_two_three() {
        let v = build_chart(&JcParams::new(1.0), ChartLabel::I).unitary;
        let vv = v.kron(&v);
        let f = build_family(1.0, 1).unwrap();
        let want = -&f.y[0].adjoint().compose(&f.y[0]);
        let d = crate::fock::op_equal(vv.get(1, 2), &want, 32, 1e-12);
        assert!(d.pass, "{}", d.max_deviation());
    }
}
