//! The classical layer: `H_B = xσ1 + yσ2 + zσ3`, its two chart unitaries,
//! the transition function, the global projector, `CP^n` projectors and
//! the classical values the operator constructions should approach.

use alloc::format;
use alloc::vec::Vec;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 math shadows this when std is linked
use num_traits::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jc::ChartLabel;
use crate::report::{CheckOutcome, Criterion};
use crate::spin::{spin_rep, Spin, Su2Element};
use crate::veronese::{classical_local_veronese, classical_veronese};

/// Relative distance to a Dirac string below which a point counts as on it.
pub const STRING_TOL: f64 = 1e-12;

type C2 = Matrix2<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A point of `R^3 \ {0}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct R3Point {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl R3Point {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite point ({x}, {y}, {z})")));
        }
        if x == 0.0 && y == 0.0 && z == 0.0 {
            return Err(Error::InvalidInput("the origin is a degenerate point".into()));
        }
        Ok(R3Point { x, y, z })
    }

    pub fn r(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// `x + iy`.
    pub fn w(&self) -> Complex64 {
        c(self.x, self.y)
    }

    /// `r + z`, or `r - z` for `sign = -1`, without cancellation near the
    /// string: `r ± z = (x² + y²)/(r ∓ z)` when `±z < 0`.
    pub fn r_plus(&self, sign: f64) -> f64 {
        let r = self.r();
        let z = sign * self.z;
        if z >= 0.0 {
            r + z
        } else {
            (self.x * self.x + self.y * self.y) / (r - z)
        }
    }

    /// Is the point inside the domain of the given chart?
    pub fn in_chart(&self, label: ChartLabel) -> bool {
        let r = self.r();
        match label {
            ChartLabel::I => self.r_plus(1.0) >= STRING_TOL * r,
            ChartLabel::II => self.r_plus(-1.0) >= STRING_TOL * r,
        }
    }

    pub fn off_axis(&self) -> bool {
        self.x.hypot(self.y) >= STRING_TOL * self.r()
    }
}

/// `[[z, x - iy], [x + iy, -z]]`.
pub fn berry_h(p: &R3Point) -> C2 {
    let w = p.w();
    C2::new(c(p.z, 0.0), w.conj(), w, c(-p.z, 0.0))
}

/// `diag(r, -r)`.
pub fn berry_diagonal(p: &R3Point) -> C2 {
    let r = p.r();
    C2::new(c(r, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-r, 0.0))
}

/// `U_I` (undefined on the lower string) or `U_II` (upper string).
pub fn chart_unitary(p: &R3Point, label: ChartLabel) -> Result<C2> {
    if !p.in_chart(label) {
        return Err(Error::DiracString(format!("({}, {}, {}) is off the domain of chart {label}", p.x, p.y, p.z)));
    }
    let r = p.r();
    let w = p.w();
    Ok(match label {
        ChartLabel::I => {
            let rp = p.r_plus(1.0);
            let s = 1.0 / (2.0 * r * rp).sqrt();
            let d = c(rp, 0.0);
            C2::new(d, -w.conj(), w, d) * c(s, 0.0)
        }
        ChartLabel::II => {
            let rm = p.r_plus(-1.0);
            let s = 1.0 / (2.0 * r * rm).sqrt();
            let d = c(rm, 0.0);
            C2::new(w.conj(), -d, d, w) * c(s, 0.0)
        }
    })
}

/// `Φ = diag(x - iy, x + iy) / sqrt(x² + y²)`.
pub fn transition_fn(p: &R3Point) -> Result<C2> {
    if !p.off_axis() {
        return Err(Error::DiracString(format!("({}, {}, {}) lies on the z-axis", p.x, p.y, p.z)));
    }
    let w = p.w() / p.x.hypot(p.y);
    Ok(C2::new(w.conj(), c(0.0, 0.0), c(0.0, 0.0), w))
}

/// `(1/2r) [[r + z, x - iy], [x + iy, r - z]]`, defined on all of `R^3 \ {0}`.
pub fn hopf_projector(p: &R3Point) -> C2 {
    let r = p.r();
    let w = p.w();
    C2::new(c(p.r_plus(1.0), 0.0), w.conj(), w, c(p.r_plus(-1.0), 0.0)) * c(0.5 / r, 0.0)
}

fn p0() -> C2 {
    C2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0))
}

/// Nonzero homogeneous coordinates `[ζ_0 : ... : ζ_n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousPoint {
    zeta: Vec<Complex64>,
}

impl HomogeneousPoint {
    pub fn new(zeta: Vec<Complex64>) -> Result<Self> {
        if zeta.is_empty() || zeta.iter().all(|z| *z == c(0.0, 0.0)) {
            return Err(Error::InvalidInput("homogeneous coordinates must not all vanish".into()));
        }
        Ok(HomogeneousPoint { zeta })
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.zeta
    }

    pub fn scaled(&self, lambda: Complex64) -> Result<Self> {
        Self::new(self.zeta.iter().map(|z| z * lambda).collect())
    }
}

/// `P_ij = ζ_i conj(ζ_j) / |ζ|²`.
pub fn cp_projector(p: &HomogeneousPoint) -> DMatrix<Complex64> {
    let z = &p.zeta;
    let norm: f64 = z.iter().map(|v| v.norm_sqr()).sum();
    DMatrix::from_fn(z.len(), z.len(), |i, j| z[i] * z[j].conj() / norm)
}

/// The two displayed `CP^1` chart projectors: `chart = 0` takes `z = ζ_1/ζ_0`,
/// `chart = 1` takes `w = ζ_0/ζ_1`.
pub fn cp1_chart(chart: usize, u: Complex64) -> Result<DMatrix<Complex64>> {
    let one = c(1.0, 0.0);
    let m = u.norm_sqr();
    let entries = match chart {
        0 => [one, u.conj(), u, c(m, 0.0)],
        1 => [c(m, 0.0), u, u.conj(), one],
        _ => return Err(Error::InvalidInput(format!("CP^1 has charts 0 and 1, not {chart}"))),
    };
    Ok(DMatrix::from_row_slice(2, 2, &entries) / c(1.0 + m, 0.0))
}

/// The three displayed `CP^2` chart projectors in local coordinates `(u1, u2)`.
pub fn cp2_chart(chart: usize, u1: Complex64, u2: Complex64) -> Result<DMatrix<Complex64>> {
    let one = c(1.0, 0.0);
    let (m1, m2) = (c(u1.norm_sqr(), 0.0), c(u2.norm_sqr(), 0.0));
    #[rustfmt::skip]
    let entries = match chart {
        0 => [
            one, u1.conj(), u2.conj(),
            u1, m1, u1 * u2.conj(),
            u2, u2 * u1.conj(), m2,
        ],
        1 => [
            m1, u1, u1 * u2.conj(),
            u1.conj(), one, u2.conj(),
            u2 * u1.conj(), u2, m2,
        ],
        2 => [
            m1, u1 * u2.conj(), u1,
            u2 * u1.conj(), m2, u2,
            u1.conj(), u2.conj(), one,
        ],
        _ => return Err(Error::InvalidInput(format!("CP^2 has charts 0, 1, 2, not {chart}"))),
    };
    Ok(DMatrix::from_row_slice(3, 3, &entries) / (one + m1 + m2))
}

/// Homogeneous coordinates with `1` in position `chart` and the local
/// coordinates elsewhere, in order.
pub fn chart_point(chart: usize, local: &[Complex64]) -> Result<HomogeneousPoint> {
    if chart > local.len() {
        return Err(Error::InvalidInput(format!("chart {chart} out of range for CP^{}", local.len())));
    }
    let mut zeta = local.to_vec();
    zeta.insert(chart, c(1.0, 0.0));
    HomogeneousPoint::new(zeta)
}

/// Classical values the operator constructions are compared against.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalTargets {
    /// `(x + iy) / (r + z)`.
    pub z_c: Complex64,
    /// First column of `U_I`, the normalized `+r` eigenvector.
    pub spinor: [Complex64; 2],
    /// Veronese image of the spinor in `C^{n+1}`.
    pub veronese: Vec<Complex64>,
    /// The local Veronese map at `Z_c`.
    pub local_veronese: Vec<Complex64>,
    /// `φ_1(U_I)`, `φ_{3/2}(U_I)`.
    pub phi_one: DMatrix<Complex64>,
    pub phi_three_halves: DMatrix<Complex64>,
}

pub fn classical_targets(p: &R3Point, n: u32) -> Result<ClassicalTargets> {
    let u = chart_unitary(p, ChartLabel::I)?;
    let z_c = p.w() / p.r_plus(1.0);
    let g = Su2Element { alpha: u[(0, 0)], beta: u[(1, 0)] };
    Ok(ClassicalTargets {
        z_c,
        spinor: [g.alpha, g.beta],
        veronese: classical_veronese(g.alpha, g.beta, n)?,
        local_veronese: classical_local_veronese(z_c, n),
        phi_one: spin_rep(&g, Spin::One),
        phi_three_halves: spin_rep(&g, Spin::ThreeHalves),
    })
}

fn max_entry2(m: &C2) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn max_entry(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Accumulates a worst-case deviation over a point sample.
#[derive(Debug, Clone)]
struct Tally {
    worst: f64,
    at: Option<usize>,
    used: usize,
    skipped: usize,
}

impl Tally {
    fn new() -> Self {
        Tally { worst: 0.0, at: None, used: 0, skipped: 0 }
    }

    fn add(&mut self, i: usize, d: f64) {
        self.used += 1;
        if self.at.is_none() || d > self.worst {
            self.worst = d;
            self.at = Some(i);
        }
    }

    fn finish(self, name: &str, anchor: &str, tol: f64, points: &[R3Point]) -> CheckOutcome {
        let mut out = CheckOutcome::new(name, anchor, Criterion::AtMost(tol)).with_deviation(self.worst);
        out = out.note(format!("{} points checked, {} outside the domain", self.used, self.skipped));
        if let Some(i) = self.at {
            let p = points[i];
            out = out.note(format!("worst at point {i}: ({:e}, {:e}, {:e})", p.x, p.y, p.z));
        }
        if self.used == 0 {
            out = out.with_verdict(false).note("no point inside the domain");
        }
        out
    }
}

/// Chart reconstruction, unitarity, gluing and projector identities over a
/// point sample.
pub fn berry_checks(points: &[R3Point], tol: f64) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    for label in [ChartLabel::I, ChartLabel::II] {
        let mut recon = Tally::new();
        let mut unit = Tally::new();
        let mut push = Tally::new();
        for (i, p) in points.iter().enumerate() {
            let Ok(u) = chart_unitary(p, label) else {
                recon.skipped += 1;
                unit.skipped += 1;
                push.skipped += 1;
                continue;
            };
            let ud = u.adjoint();
            recon.add(i, max_entry2(&(u * berry_diagonal(p) * ud - berry_h(p))));
            unit.add(i, max_entry2(&(ud * u - C2::identity())).max(max_entry2(&(u * ud - C2::identity()))));
            push.add(i, max_entry2(&(u * p0() * ud - hopf_projector(p))));
        }
        out.push(recon.finish(&format!("berry_chart_{label}_reconstruction"), "H_B = U D_B U^dagger", tol, points));
        out.push(unit.finish(&format!("berry_chart_{label}_unitary"), "U^dagger U = U U^dagger = 1", tol, points));
        out.push(push.finish(&format!("berry_chart_{label}_projector"), "P(x,y,z) = U P_0 U^dagger", tol, points));
    }
    let mut glue = Tally::new();
    let mut proj = Tally::new();
    let mut stereo = Tally::new();
    for (i, p) in points.iter().enumerate() {
        match (chart_unitary(p, ChartLabel::I), chart_unitary(p, ChartLabel::II), transition_fn(p)) {
            (Ok(u1), Ok(u2), Ok(phi)) => glue.add(i, max_entry2(&(u1 * phi - u2))),
            _ => glue.skipped += 1,
        }
        let pr = hopf_projector(p);
        let trace = (pr.trace() - c(1.0, 0.0)).norm();
        proj.add(i, max_entry2(&(pr * pr - pr)).max(max_entry2(&(pr.adjoint() - pr))).max(trace));
        match classical_targets(p, 1) {
            Ok(t) => {
                let rel = (t.z_c.norm_sqr() - p.r_plus(-1.0) / p.r_plus(1.0)).abs() / (1.0 + t.z_c.norm_sqr());
                stereo.add(i, rel);
            }
            Err(_) => stereo.skipped += 1,
        }
    }
    out.push(glue.finish("berry_gluing", "U_II = U_I Phi", tol, points));
    out.push(proj.finish("berry_projector", "P^2 = P, P^dagger = P, tr P = 1", tol, points));
    out.push(stereo.finish("berry_stereographic", "|Z_c|^2 = (r - z)/(r + z)", tol, points));
    out
}

/// `cp_projector(λζ) = cp_projector(ζ)` and the projector identities.
pub fn cp_scale_check(points: &[(HomogeneousPoint, Complex64)], tol: f64) -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    for (zeta, lambda) in points {
        let p = cp_projector(zeta);
        let q = cp_projector(&zeta.scaled(*lambda)?);
        let trace = (p.trace() - c(1.0, 0.0)).norm();
        let d = max_entry(&(&q - &p)).max(max_entry(&(&p * &p - &p))).max(max_entry(&(p.adjoint() - &p))).max(trace);
        worst = worst.max(d);
    }
    Ok(CheckOutcome::new("cp_projector_scale", "P(lambda zeta) = P(zeta), P^2 = P, P^dagger = P, tr P = 1", Criterion::AtMost(tol))
        .with_deviation(worst)
        .note(format!("{} samples", points.len())))
}

/// Displayed chart matrices of `CP^1` and `CP^2` against `|ζ><ζ|`.
pub fn cp_chart_checks(tol: f64) -> Vec<CheckOutcome> {
    let spots = [c(1.0, 1.0), c(2.0, 0.0), c(-0.5, 0.25)];
    let mut d1 = 0.0f64;
    for chart in 0..2 {
        for &u in &spots {
            let want = cp_projector(&chart_point(chart, &[u]).expect("nonzero"));
            d1 = d1.max(max_entry(&(cp1_chart(chart, u).expect("chart") - want)));
        }
    }
    let mut d2 = 0.0f64;
    for chart in 0..3 {
        for (&u1, &u2) in spots.iter().zip(spots.iter().rev()) {
            let want = cp_projector(&chart_point(chart, &[u1, u2]).expect("nonzero"));
            d2 = d2.max(max_entry(&(cp2_chart(chart, u1, u2).expect("chart") - want)));
        }
    }
    alloc::vec![
        CheckOutcome::new("cp1_charts", "P(z) = (1+|z|^2)^{-1} [[1, conj z], [z, |z|^2]] and the U_1 form", Criterion::AtMost(tol))
            .with_deviation(d1),
        CheckOutcome::new("cp2_charts", "P on U_0, U_1, U_2 of CP^2", Criterion::AtMost(tol)).with_deviation(d2),
    ]
}

/// `‖v_n‖ = 1` for unit spinors.
pub fn veronese_norm_check(points: &[R3Point], n_max: u32, tol: f64) -> CheckOutcome {
    let mut t = Tally::new();
    for (i, p) in points.iter().enumerate() {
        for n in 1..=n_max {
            match classical_targets(p, n) {
                Ok(v) => {
                    let norm: f64 = v.veronese.iter().map(|z| z.norm_sqr()).sum();
                    t.add(i, (norm - 1.0).abs());
                }
                Err(_) => t.skipped += 1,
            }
        }
    }
    t.finish("classical_veronese_norm", "|v_n| = 1 for |v_1| = 1", tol, points)
}
