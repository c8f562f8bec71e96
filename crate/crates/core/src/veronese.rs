//! Veronese lift `CP^1 -> CP^n`, classical and non-commutative.
//!
//! The quantum version replaces `(z1, z2)` by the first column `(X_0; Y_0)` of
//! the chart-I unitary and monomials by ordered products of the shifted
//! operators `X_{-j}`, `Y_{-j}`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 math shadows this when std is linked
use num_traits::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::FockOperator;
use crate::jc::{chart_weight, coherent_expectation, r_sym};
use crate::opmatrix::{check_equal, check_idempotent_hermitian, compare, OpMatrix};
use crate::report::{CheckOutcome, Criterion};
use crate::symbol::Symbol;

/// `nCj` as a float. Exact for the small degrees used here.
pub fn binomial(n: u32, j: u32) -> f64 {
    if j > n {
        return 0.0;
    }
    let j = j.min(n - j);
    (0..j).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// `(z1, z2) -> (sqrt(nCj) z1^{n-j} z2^j)_j`.
pub fn classical_veronese(z1: Complex64, z2: Complex64, n: u32) -> Result<Vec<Complex64>> {
    if z1 == Complex64::new(0.0, 0.0) && z2 == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidInput("homogeneous coordinates (0, 0) do not name a point".into()));
    }
    Ok((0..=n)
        .map(|j| binomial(n, j).sqrt() * z1.powu(n - j) * z2.powu(j))
        .collect())
}

/// The local map `z -> (sqrt(nCj) z^j)_{j=1..n}`.
pub fn classical_local_veronese(z: Complex64, n: u32) -> Vec<Complex64> {
    (1..=n).map(|j| binomial(n, j).sqrt() * z.powu(j)).collect()
}

/// `sqrt((N - j) / N)`; left out for `j = 0`, where it is 1 wherever it is
/// reached and would otherwise read `0/0` on the vacuum.
fn ratio(j: u32, sigma: f64) -> Symbol {
    if j == 0 {
        return Symbol::one();
    }
    (Symbol::number(-i64::from(j)) * Symbol::number(0).recip_with(sigma)).sqrt_with(sigma)
}

/// `X_{-j} = (R(N+1-j) + θ) / sqrt(2 R(N+1-j) (R(N+1-j) + θ))`.
pub fn x_symbol(theta: f64, j: u32, sigma: f64) -> Symbol {
    let k = 1 - i64::from(j);
    (r_sym(theta, k) + theta) * chart_weight(theta, k, 1.0, sigma)
}

/// `Y_{-j} = sqrt((N-j)/N) / sqrt(2 R(N-j) (R(N-j) + θ)) a†`.
pub fn y_operator(theta: f64, j: u32, sigma: f64) -> FockOperator {
    let k = -i64::from(j);
    FockOperator::diagonal(ratio(j, sigma) * chart_weight(theta, k, 1.0, sigma)).compose(&FockOperator::creation())
}

/// `Z_{-j} = sqrt((N-j)/N) (R(N-j) + θ)^{-1} a†`.
pub fn z_operator(theta: f64, j: u32, sigma: f64) -> FockOperator {
    let k = -i64::from(j);
    let inv = (r_sym(theta, k) + theta).recip_with(sigma);
    FockOperator::diagonal(ratio(j, sigma) * inv).compose(&FockOperator::creation())
}

fn sigma_for(theta: f64) -> f64 {
    1e-12 * (1.0 + theta.abs())
}

/// `X_{-j}`, `Y_{-j}`, `Z_{-j}` for `j = 0..=n`.
#[derive(Debug, Clone)]
pub struct VeroneseFamily {
    pub theta: f64,
    pub n: u32,
    pub x: Vec<Symbol>,
    pub y: Vec<FockOperator>,
    pub z: Vec<FockOperator>,
    sigma: f64,
}

impl VeroneseFamily {
    pub fn x_op(&self, j: u32) -> FockOperator {
        FockOperator::diagonal(self.x[j as usize].clone())
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// `Y_{-(j-1)} ... Y_{-1} Y_0`, identity for `j = 0`.
    pub fn y_chain(&self, j: u32) -> FockOperator {
        (0..j).fold(FockOperator::identity(), |acc, k| self.y[k as usize].compose(&acc))
    }

    /// `Z_{-(j-1)} ... Z_{-1} Z_0`, identity for `j = 0`.
    pub fn z_chain(&self, j: u32) -> FockOperator {
        (0..j).fold(FockOperator::identity(), |acc, k| self.z[k as usize].compose(&acc))
    }
}

pub fn build_family(theta: f64, n: u32) -> Result<VeroneseFamily> {
    if n == 0 {
        return Err(Error::InvalidInput("Veronese degree must be at least 1".into()));
    }
    if !theta.is_finite() {
        return Err(Error::InvalidInput(format!("theta must be finite, got {theta}")));
    }
    let sigma = sigma_for(theta);
    Ok(VeroneseFamily {
        theta,
        n,
        x: (0..=n).map(|j| x_symbol(theta, j, sigma)).collect(),
        y: (0..=n).map(|j| y_operator(theta, j, sigma)).collect(),
        z: (0..=n).map(|j| z_operator(theta, j, sigma)).collect(),
        sigma,
    })
}

fn single(op: FockOperator) -> OpMatrix {
    OpMatrix::column_of(vec![op])
}

/// `X_{-j}^2 + Y_{-j}† Y_{-j} = 1`, and for `j >= 1`
/// `Y_{-j}† Y_{-j} = Y_{-j+1} Y_{-j+1}†`.
pub fn useful_formula_checks(family: &VeroneseFamily, n_max: u64, tol: f64) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    for j in 0..=family.n {
        let yj = &family.y[j as usize];
        let yy = yj.adjoint().compose(yj);
        let lhs = &family.x_op(j).powi(2) + &yy;
        out.push(
            check_equal(
                &format!("useful_formula_norm_j{j}"),
                "X_{-j}^2 + Y_{-j}^dagger Y_{-j} = 1",
                &single(lhs),
                &OpMatrix::identity(1),
                n_max,
                tol,
            )
            .expect("1x1"),
        );
        if j >= 1 {
            let prev = &family.y[j as usize - 1];
            out.push(
                check_equal(
                    &format!("useful_formula_shift_j{j}"),
                    "Y_{-j}^dagger Y_{-j} = Y_{-j+1} Y_{-j+1}^dagger",
                    &single(yy),
                    &single(prev.compose(&prev.adjoint())),
                    n_max,
                    tol,
                )
                .expect("1x1"),
            );
        }
    }
    out
}

/// `Y_{-j} X_{-k}^{-1} = X_{-(k+1)}^{-1} Y_{-j}`.
pub fn commutation_check(family: &VeroneseFamily, j: u32, k: u32, n_max: u64, tol: f64) -> Result<CheckOutcome> {
    if j > family.n || k + 1 > family.n {
        return Err(Error::InvalidInput(format!("indices j={j}, k+1={} exceed family degree {}", k + 1, family.n)));
    }
    let s = family.sigma;
    let xk_inv = family.x_op(k).inverse_with(s)?;
    let xk1_inv = family.x_op(k + 1).inverse_with(s)?;
    let yj = &family.y[j as usize];
    Ok(check_equal(
        &format!("commutation_j{j}_k{k}"),
        "Y_{-j} X_{-k}^{-1} = X_{-(k+1)}^{-1} Y_{-j}",
        &single(yj.compose(&xk_inv)),
        &single(xk1_inv.compose(yj)),
        n_max,
        tol,
    )
    .expect("1x1"))
}

/// `A_n` and the local coordinate column `𝒵_n`.
#[derive(Debug, Clone)]
pub struct LiftedColumn {
    pub n: u32,
    /// `(n+1) x 1`, entry `j` is `sqrt(nCj) Y_{-(j-1)} ... Y_0 X_0^{n-j}`.
    pub a: OpMatrix,
    /// `n x 1`, entry `j-1` is `sqrt(nCj) Z_{-(j-1)} ... Z_0`.
    pub z: OpMatrix,
    /// `(1 + Z_0† Z_0)^{-n/2}`.
    pub normalizer: FockOperator,
}

impl LiftedColumn {
    /// `(1; 𝒵_n) (1 + Z_0† Z_0)^{-n/2}`.
    pub fn factored(&self) -> OpMatrix {
        let mut entries = vec![self.normalizer.clone()];
        entries.extend((0..self.n as usize).map(|i| self.z.get(i, 0).compose(&self.normalizer)));
        OpMatrix::column_of(entries)
    }

    /// `1 + 𝒵_n† 𝒵_n`, a function of N.
    pub fn one_plus_zz(&self) -> FockOperator {
        let zz = self.z.adjoint().matmul(&self.z).expect("column");
        &FockOperator::identity() + zz.get(0, 0)
    }
}

pub fn lift(family: &VeroneseFamily) -> LiftedColumn {
    let n = family.n;
    let s = family.sigma;
    let x0 = family.x_op(0);
    let a = (0..=n)
        .map(|j| family.y_chain(j).compose(&x0.powi(n - j)).scale(binomial(n, j).sqrt()))
        .collect();
    let z = (1..=n).map(|j| family.z_chain(j).scale(binomial(n, j).sqrt())).collect();
    let z0 = &family.z[0];
    let base = &FockOperator::identity() + &z0.adjoint().compose(z0);
    let normalizer = base.powf_with(-f64::from(n) / 2.0, s).expect("diagonal");
    LiftedColumn { n, a: OpMatrix::column_of(a), z: OpMatrix::column_of(z), normalizer }
}

/// `𝒫_n = A_n A_n†`.
pub fn projector_pn(lifted: &LiftedColumn) -> OpMatrix {
    lifted.a.matmul(&lifted.a.adjoint()).expect("column times row")
}

/// The block layout `[[W, W 𝒵†], [𝒵 W, 𝒵 W 𝒵†]]` with `W = (1 + 𝒵†𝒵)^{-1}`.
pub fn oike_layout(lifted: &LiftedColumn, sigma: f64) -> Result<OpMatrix> {
    let w = lifted.one_plus_zz().inverse_with(sigma)?;
    let n = lifted.n as usize;
    let col = |i: usize| if i == 0 { FockOperator::identity() } else { lifted.z.get(i - 1, 0).clone() };
    Ok(OpMatrix::from_fn(n + 1, n + 1, |i, j| col(i).compose(&w).compose(&col(j).adjoint())))
}

/// Every Veronese identity for degree `family.n`.
pub fn veronese_checks(family: &VeroneseFamily, n_max: u64, tol: f64) -> Vec<CheckOutcome> {
    let lifted = lift(family);
    let mut out = Vec::new();
    let ata = lifted.a.adjoint().matmul(&lifted.a).expect("row times column");
    out.push(
        check_equal(&format!("lift_unitary_n{}", family.n), "A_n^dagger A_n = 1", &ata, &OpMatrix::identity(1), n_max, tol)
            .expect("1x1"),
    );
    out.push(
        check_equal(
            &format!("lift_factored_n{}", family.n),
            "A_n = (1; Z_n) (1 + Z_0^dagger Z_0)^{-n/2}",
            &lifted.a,
            &lifted.factored(),
            n_max,
            tol,
        )
        .expect("same shape"),
    );
    let z0 = &family.z[0];
    let power = (&FockOperator::identity() + &z0.adjoint().compose(z0)).powi(family.n);
    out.push(
        check_equal(
            &format!("binomial_identity_n{}", family.n),
            "1 + Z_n^dagger Z_n = (1 + Z_0^dagger Z_0)^n",
            &single(lifted.one_plus_zz()),
            &single(power),
            n_max,
            tol,
        )
        .expect("1x1"),
    );
    let p = projector_pn(&lifted);
    let mut proj = check_idempotent_hermitian(&p, n_max, tol).expect("square");
    proj.name = format!("projector_pn_n{}", family.n);
    out.push(proj);
    out.push(
        check_equal(&format!("projector_eigenvector_n{}", family.n), "P_n A_n = A_n", &p.matmul(&lifted.a).expect("shape"), &lifted.a, n_max, tol)
            .expect("same shape"),
    );
    match oike_layout(&lifted, family.sigma) {
        Ok(oike) => out.push(
            check_equal(
                &format!("oike_layout_n{}", family.n),
                "P_n = [[(1+Z^dagger Z)^{-1}, (1+Z^dagger Z)^{-1} Z^dagger], [Z (1+Z^dagger Z)^{-1}, Z (1+Z^dagger Z)^{-1} Z^dagger]]",
                &oike,
                &p,
                n_max,
                tol,
            )
            .expect("same shape"),
        ),
        Err(e) => out.push(
            CheckOutcome::new(format!("oike_layout_n{}", family.n), "P_n Oike layout", Criterion::AtMost(tol))
                .note(format!("{e}"))
                .with_verdict(false),
        ),
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VeroneseLimitRow {
    pub radius: f64,
    /// 1-based index into `𝒵_n`.
    pub component: u32,
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VeroneseClassicalLimit {
    pub theta: f64,
    pub n: u32,
    pub rows: Vec<VeroneseLimitRow>,
    /// Per component, errors strictly decrease with the radius.
    pub monotone: bool,
}

/// Coherent-state expectations of the entries of `𝒵_n` against the local
/// map evaluated at `Z_c`, for real radii `|α|`.
pub fn veronese_classical_limit(family: &VeroneseFamily, radii: &[f64]) -> Result<VeroneseClassicalLimit> {
    let lifted = lift(family);
    let mut rows = Vec::new();
    for &r in radii {
        let alpha = Complex64::new(r, 0.0);
        let target = classical_local_veronese(crate::jc::classical_z(alpha, family.theta), family.n);
        for (i, t) in target.iter().enumerate() {
            let e = coherent_expectation(lifted.z.get(i, 0), alpha)?;
            rows.push(VeroneseLimitRow { radius: r, component: i as u32 + 1, relative_error: (e - t).norm() / t.norm() });
        }
    }
    let monotone = (1..=family.n).all(|c| {
        let errs: Vec<f64> = rows.iter().filter(|r| r.component == c).map(|r| r.relative_error).collect();
        errs.windows(2).all(|w| w[1] < w[0])
    });
    Ok(VeroneseClassicalLimit { theta: family.theta, n: family.n, rows, monotone })
}

/// `A_1 A_1†` against the JC projector built from the chart-I weights.
pub fn degree_one_matches_pjc(theta: f64, n_max: u64, tol: f64) -> Result<CheckOutcome> {
    let family = build_family(theta, 1)?;
    let p1 = projector_pn(&lift(&family));
    let pjc = crate::jc::projector_pjc(&crate::jc::JcParams::new(theta)).weights_left;
    let cmp = compare(&p1, &pjc, n_max, tol)?;
    Ok(CheckOutcome::new("projector_p1_is_pjc", "P_1 = A A^dagger = P_JC", Criterion::AtMost(tol)).with_comparison(&cmp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::ExcludedStates;

    const TOL: f64 = 1e-10;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn r(theta: f64, m: f64) -> f64 {
        (m + theta * theta).sqrt()
    }

    // Plain-float oracle for the weight of Y_{-k} at number eigenvalue m.
    fn y_weight(theta: f64, k: u32, m: f64) -> f64 {
        let k = f64::from(k);
        let rr = r(theta, m - k);
        let ratio = if k == 0.0 { 1.0 } else { ((m - k) / m).sqrt() };
        ratio / (2.0 * rr * (rr + theta)).sqrt()
    }

    fn x_value(theta: f64, k: u32, m: f64) -> f64 {
        let rr = r(theta, m + 1.0 - f64::from(k));
        (rr + theta) / (2.0 * rr * (rr + theta)).sqrt()
    }

    // Entry j of A_n on |m>: amplitude of |m + j>.
    fn a_entry_oracle(theta: f64, n: u32, j: u32, m: u64) -> f64 {
        let m = m as f64;
        let mut amp = binomial(n, j).sqrt() * x_value(theta, 0, m).powi((n - j) as i32);
        for k in 0..j {
            let level = m + f64::from(k) + 1.0;
            amp *= level.sqrt() * y_weight(theta, k, level);
        }
        amp
    }

    // Row j of A_n† (or 𝒵_n†) starts with Y_{-(j-1)}† (Z_{-(j-1)}†), which reads
    // sqrt((N-j+1)/N) on its input: negative below j-1 and 0/0 or -k/0 on the
    // vacuum. For θ <= 0 it also divides by R(0) + θ = 0 on |j-1>.
    fn adjoint_exclusions(theta: f64, n: u32) -> ExcludedStates {
        let mut out = ExcludedStates::new();
        for j in 1..=n as u64 {
            if theta <= 0.0 {
                out.insert(j as usize + 1, j - 1);
            }
        }
        for j in 2..=n as u64 {
            out.insert(j as usize + 1, 0);
            for m in 0..j - 1 {
                out.insert(j as usize + 1, m);
            }
        }
        out
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(4, 0), 1.0);
        assert_eq!(binomial(3, 4), 0.0);
    }

    #[test]
    fn classical_examples() {
        let v = classical_veronese(c(1.0), c(0.0), 3).unwrap();
        assert_eq!(v, vec![c(1.0), c(0.0), c(0.0), c(0.0)]);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let v = classical_veronese(c(h), c(h), 2).unwrap();
        let want = [0.5, core::f64::consts::SQRT_2 / 2.0, 0.5];
        for (a, b) in v.iter().zip(want) {
            assert!((a - c(b)).norm() < 1e-15);
        }
        let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-15);
        assert!(classical_veronese(c(0.0), c(0.0), 2).is_err());
    }

    #[test]
    fn classical_local_map_factors_z1() {
        let z1 = Complex64::new(0.6, 0.2);
        let z2 = Complex64::new(-0.3, 0.5);
        let n = 4;
        let v = classical_veronese(z1, z2, n).unwrap();
        let local = classical_local_veronese(z2 / z1, n);
        let lead = z1.powu(n);
        assert!((v[0] - lead).norm() < 1e-15);
        for (j, l) in local.iter().enumerate() {
            assert!((v[j + 1] - l * lead).norm() < 1e-14);
        }
    }

    #[test]
    fn family_rejects_degree_zero() {
        assert!(build_family(1.0, 0).is_err());
    }

    #[test]
    fn first_formula_j0() {
        let f = build_family(1.0, 1).unwrap();
        let checks = useful_formula_checks(&f, 48, TOL);
        let c = checks.iter().find(|c| c.name == "useful_formula_norm_j0").unwrap();
        assert!(c.pass, "{}", c.max_deviation);
        assert!(c.excluded_states.is_empty());
    }

    #[test]
    fn shift_formula_at_07() {
        let f = build_family(0.7, 2).unwrap();
        let checks = useful_formula_checks(&f, 48, TOL);
        let c = checks.iter().find(|c| c.name == "useful_formula_shift_j1").unwrap();
        assert!(c.pass, "{}", c.max_deviation);
    }

    #[test]
    fn formulas_up_to_four() {
        for theta in [0.5, 1.0, 2.0, -0.5] {
            let f = build_family(theta, 4).unwrap();
            for c in useful_formula_checks(&f, 48, TOL) {
                assert!(c.pass, "theta {theta} {}: {}", c.name, c.max_deviation);
            }
        }
    }

    #[test]
    fn low_states_of_shifted_formula_are_reported() {
        // Y_{-2} on |0> reaches sqrt((N-2)/N) at N = 1: negative radicand.
        let f = build_family(1.0, 2).unwrap();
        let checks = useful_formula_checks(&f, 16, TOL);
        let norm = checks.iter().find(|c| c.name == "useful_formula_norm_j2").unwrap();
        assert_eq!(norm.excluded_states, ExcludedStates::from_pairs([(1, 0)]));
        // on |1> the ratio is sqrt(0/2) = 0
        let y2 = &f.y[2];
        assert_eq!(y2.column(1).unwrap(), vec![(2, c(0.0))]);
        assert!(y2.is_singular_at(0));
        let shift = checks.iter().find(|c| c.name == "useful_formula_shift_j2").unwrap();
        assert_eq!(shift.excluded_states, ExcludedStates::from_pairs([(1, 0)]));
    }

    #[test]
    fn commutation_examples() {
        let f = build_family(1.0, 1).unwrap();
        assert!(commutation_check(&f, 0, 0, 48, TOL).unwrap().pass);
        let f = build_family(0.5, 3).unwrap();
        let c = commutation_check(&f, 1, 2, 48, TOL).unwrap();
        assert!(c.pass, "{}", c.max_deviation);
        let f = build_family(-0.5, 3).unwrap();
        let c = commutation_check(&f, 1, 2, 48, TOL).unwrap();
        assert!(c.pass, "{}", c.max_deviation);
        // X_{-2}^{-1} reads R(N-1) on |0> and divides by R(0) + θ = 0 on |1>
        assert_eq!(c.excluded_states, ExcludedStates::from_pairs([(1, 0), (1, 1)]));
        assert!(commutation_check(&f, 0, 3, 8, TOL).is_err());
    }

    #[test]
    fn lift_matches_oracle() {
        for theta in [1.0, -0.7] {
            let f = build_family(theta, 3).unwrap();
            let l = lift(&f);
            for m in 0..10u64 {
                let col = l.a.column_action(0, m).unwrap();
                for (row, target, v) in col {
                    assert_eq!(target, m + row as u64);
                    let want = a_entry_oracle(theta, 3, row as u32, m);
                    assert!((v - c(want)).norm() < 1e-14, "theta {theta} j {row} m {m}: {v} vs {want}");
                }
            }
        }
    }

    #[test]
    fn lift_n1_is_chart_column() {
        let f = build_family(1.0, 1).unwrap();
        let l = lift(&f);
        let ata = l.a.adjoint().matmul(&l.a).unwrap();
        assert!(compare(&ata, &OpMatrix::identity(1), 48, TOL).unwrap().max_deviation <= TOL);
        // A_2 on |0> at θ = 1: X_0(0)^2, sqrt2 Y_0 X_0, Y_{-1} Y_0
        let l2 = lift(&build_family(1.0, 2).unwrap());
        let x = x_value(1.0, 0, 0.0);
        let y0 = y_weight(1.0, 0, 1.0);
        let y1 = y_weight(1.0, 1, 2.0) * 2f64.sqrt();
        let want = [x * x, 2f64.sqrt() * y0 * x, y1 * y0];
        for (j, w) in want.iter().enumerate() {
            let got = l2.a.column_action(0, 0).unwrap()[j].2;
            assert!((got - c(*w)).norm() < 1e-15);
        }
        // frozen: x0(0)^2 = (sqrt2 + 1)/(2 sqrt2) at θ = 1
        assert!((want[0] - 0.853_553_390_593_273_7).abs() < 1e-15);
        assert!((want[2] - 0.146_446_609_406_726_24).abs() < 1e-15);
    }

    #[test]
    fn lift_identities_all_pass() {
        for theta in [0.5, 1.0, 2.0] {
            for n in 1..=5 {
                let f = build_family(theta, n).unwrap();
                for c in veronese_checks(&f, 32, 1e-9) {
                    assert!(c.pass, "theta {theta} n {n} {}: {}", c.name, c.max_deviation);
                    if c.name.starts_with("lift") || c.name.starts_with("binomial") {
                        assert!(c.excluded_states.is_empty(), "{} {}", c.name, c.excluded_states);
                    }
                    if c.name.starts_with("projector_pn") {
                        assert_eq!(c.excluded_states, adjoint_exclusions(theta, n), "n {n}");
                    }
                }
            }
        }
    }

    #[test]
    fn binomial_identity_n2() {
        let f = build_family(0.8, 2).unwrap();
        let c = veronese_checks(&f, 48, TOL).into_iter().find(|c| c.name == "binomial_identity_n2").unwrap();
        assert!(c.pass, "{}", c.max_deviation);
    }

    #[test]
    fn oike_layout_where_defined() {
        for theta in [0.5, 1.0, 2.0, -1.0] {
            for n in 1..=4 {
                let f = build_family(theta, n).unwrap();
                let c = veronese_checks(&f, 32, TOL).into_iter().find(|c| c.name.starts_with("oike")).unwrap();
                assert!(c.pass, "theta {theta} n {n}: {}", c.max_deviation);
                assert_eq!(c.excluded_states, adjoint_exclusions(theta, n), "theta {theta} n {n}");
            }
        }
    }

    #[test]
    fn p1_reduces_to_pjc() {
        let c = degree_one_matches_pjc(1.0, 48, TOL).unwrap();
        assert!(c.pass, "{}", c.max_deviation);
    }

    #[test]
    fn projector_n2() {
        let f = build_family(1.0, 2).unwrap();
        let l = lift(&f);
        let p = projector_pn(&l);
        assert_eq!(p.shape(), (3, 3));
        assert!(check_idempotent_hermitian(&p, 48, TOL).unwrap().pass);
        let pa = p.matmul(&l.a).unwrap();
        assert!(compare(&pa, &l.a, 48, TOL).unwrap().max_deviation <= TOL);
    }

    #[test]
    fn veronese_limit_decays() {
        let f = build_family(1.0, 3).unwrap();
        let lim = veronese_classical_limit(&f, &[2.0, 4.0, 8.0]).unwrap();
        assert!(lim.monotone, "{:?}", lim.rows);
        assert_eq!(lim.rows.len(), 9);
        // component 1 is sqrt(3) times the JC coordinate: same relative error
        let jc = crate::jc::classical_limit(&crate::jc::JcParams::new(1.0), &[2.0, 4.0, 8.0]).unwrap();
        for (row, jr) in lim.rows.iter().filter(|r| r.component == 1).zip(&jc.rows) {
            assert!((row.relative_error - jr.relative_error).abs() < 1e-12);
        }
    }
}
