use std::time::Instant;

use fockbundle_core::berry::{berry_checks, cp_chart_checks, cp_scale_check, veronese_norm_check, HomogeneousPoint, R3Point};
use fockbundle_core::jc::{
    chart_checks, classical_limit, full_evolution, local_coordinate_checks, projector_checks, propagator_checks,
    propagator_closed_form, JcParams,
};
use fockbundle_core::spin::{
    cg_decompose_pair, cg_decompose_triple, cg_orthonormality_defect, homomorphism_defect, nc_spin_checks, spin_rep,
    tensor_breakdown_checks, unitarity_defect, Spin, Su2Element,
};
use fockbundle_core::veronese::{
    build_family, commutation_check, degree_one_matches_pjc, useful_formula_checks, veronese_checks,
    veronese_classical_limit,
};
use fockbundle_core::opmatrix::check_equal;
use fockbundle_core::{op_equal, CheckOutcome, Criterion, FockOperator, FockVector, Symbol};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::config::{Suite, SuiteConfig};
use crate::sampling::{cp_samples, sphere_points, su2_pairs, CP_SAMPLES, SPHERE_POINTS, SU2_PAIRS};
use crate::Error;

/// Finite-dimensional checks on random samples never use a looser bound.
pub const SAMPLE_TOL: f64 = 1e-12;
/// Coherent amplitudes for the classical-limit sweeps.
pub const CLASSICAL_RADII: [f64; 3] = [2.0, 4.0, 8.0];
pub const MAX_VERONESE_DEGREE: u32 = 5;
/// Degree of the family whose useful formulas are checked (`j <= 4`).
pub const USEFUL_FORMULA_DEGREE: u32 = 4;

pub const THREADS_ENV: &str = "FOCKBUNDLE_THREADS";

/// Random inputs, drawn once per run.
#[derive(Debug, Clone)]
pub struct Samples {
    pub pairs: Vec<(Su2Element, Su2Element)>,
    pub points: Vec<R3Point>,
    pub cp: Vec<(HomogeneousPoint, Complex64)>,
}

impl Samples {
    pub fn draw(seed: u64) -> Self {
        let mut points = sphere_points(seed, SPHERE_POINTS);
        // on-axis points exercise the chart guards
        for z in [-2.0, -0.5, 0.5, 2.0] {
            points.push(R3Point::new(0.0, 0.0, z).expect("off the origin"));
        }
        Samples { pairs: su2_pairs(seed, SU2_PAIRS), points, cp: cp_samples(seed, CP_SAMPLES) }
    }
}

/// One unit of work: a suite's θ-independent part (`theta = None`) or its
/// part at one θ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Job {
    pub suite: Suite,
    pub theta: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct JobOutput {
    pub job: Job,
    pub checks: Vec<CheckOutcome>,
    /// Named scalars for sweeps, e.g. propagator matrix elements.
    pub observables: Vec<(String, f64)>,
    pub elapsed_ms: f64,
}

fn has_global_part(s: Suite) -> bool {
    matches!(s, Suite::Fock | Suite::Spinrep | Suite::Classical)
}

fn has_theta_part(s: Suite) -> bool {
    !matches!(s, Suite::Fock | Suite::All)
}

/// Jobs in report order: per suite, the global part then each θ.
pub fn jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let mut out = Vec::new();
    for s in cfg.suite.expand() {
        if has_global_part(s) {
            out.push(Job { suite: s, theta: None });
        }
        if has_theta_part(s) {
            out.extend(cfg.theta_list.iter().map(|&t| Job { suite: s, theta: Some(t) }));
        }
    }
    out
}

pub fn params(cfg: &SuiteConfig, theta: f64) -> JcParams {
    JcParams { theta, g: cfg.g, t: cfg.t, omega: cfg.omega, delta: cfg.delta }
}

fn thread_cap() -> Result<Option<usize>, Error> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::Config(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        },
    }
}

/// Worker pool honoring [`THREADS_ENV`].
pub fn pool() -> Result<rayon::ThreadPool, Error> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap()? {
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| Error::Config(e.to_string()))
}

/// Run every job in parallel on the current pool; outputs are in job order.
pub fn collect_jobs(cfg: &SuiteConfig, samples: &Samples) -> Result<Vec<JobOutput>, Error> {
    cfg.validate()?;
    jobs(cfg).par_iter().map(|j| run_job(*j, cfg, samples)).collect()
}

pub fn run_jobs(cfg: &SuiteConfig) -> Result<Vec<JobOutput>, Error> {
    cfg.validate()?;
    let samples = Samples::draw(cfg.seed);
    pool()?.install(|| collect_jobs(cfg, &samples))
}

pub fn run_job(job: Job, cfg: &SuiteConfig, samples: &Samples) -> Result<JobOutput, Error> {
    let start = Instant::now();
    let mut observables = Vec::new();
    let checks = match (job.suite, job.theta) {
        (Suite::Fock, _) => fock_checks(cfg.n_max, cfg.tol),
        (Suite::Charts, Some(th)) => chart_suite(&params(cfg, th), cfg.n_max, cfg.tol)?,
        (Suite::Propagator, Some(th)) => {
            let p = params(cfg, th);
            let u = propagator_closed_form(&p);
            let e = u.get(0, 0).matrix_element(0, 0)?;
            observables.push(("u11_00_re".to_string(), e.re));
            observables.push(("u11_00_im".to_string(), e.im));
            propagator_suite(&p, cfg.n_max, cfg.tol)?
        }
        (Suite::Veronese, Some(th)) => veronese_suite(th, cfg.n_max, cfg.tol)?,
        (Suite::Spinrep, None) => sampled_spin_checks(&samples.pairs, cfg.tol.min(SAMPLE_TOL)),
        (Suite::Spinrep, Some(th)) => spin_suite(th, cfg.n_max, cfg.tol)?,
        (Suite::Classical, None) => classical_checks(samples, cfg.tol.min(SAMPLE_TOL))?,
        (Suite::Classical, Some(th)) => classical_limit_checks(&params(cfg, th))?,
        (s, t) => return Err(Error::Config(format!("no job for suite {} at {t:?}", s.name()))),
    };
    Ok(JobOutput { job, checks, observables, elapsed_ms: start.elapsed().as_secs_f64() * 1e3 })
}

fn from_report(name: &str, anchor: &str, tol: f64, r: fockbundle_core::EqualityReport) -> CheckOutcome {
    CheckOutcome::new(name, anchor, Criterion::AtMost(tol)).with_comparison(&r.comparison)
}

/// Ladder-algebra identities on the grid.
pub fn fock_checks(n_max: u64, tol: f64) -> Vec<CheckOutcome> {
    let a = FockOperator::annihilation();
    let ad = FockOperator::creation();
    let n = FockOperator::number();
    let f = |k: i64| FockOperator::diagonal((Symbol::number(k) + 0.5).sqrt());
    let mut out = vec![
        from_report("ccr", "[a, a^dagger] = 1", tol, op_equal(&(&a.compose(&ad) - &ad.compose(&a)), &FockOperator::identity(), n_max, tol)),
        from_report("number_operator", "N = a^dagger a", tol, op_equal(&ad.compose(&a), &n, n_max, tol)),
        from_report("shift_rule", "f(N) a^dagger = a^dagger f(N+1)", tol, op_equal(&f(0).compose(&ad), &ad.compose(&f(1)), n_max, tol)),
        from_report("adjoint_pair", "(a)^dagger = a^dagger", tol, op_equal(&a.adjoint(), &ad, n_max, tol)),
    ];
    let inv = FockOperator::diagonal((Symbol::number(1)).sqrt().recip());
    out.push(from_report(
        "normalized_ladder",
        "(N+1)^{-1/2} a a^dagger (N+1)^{-1/2} = 1",
        tol,
        op_equal(&inv.compose(&a).compose(&ad).compose(&inv), &FockOperator::identity(), n_max, tol),
    ));
    let alpha = Complex64::new(1.5, 0.5);
    let v = FockVector::coherent(alpha, 1e-16);
    let dev = a.apply(&v).map(|w| w.max_abs_diff(&v.scale(alpha))).unwrap_or(f64::NAN);
    out.push(
        CheckOutcome::new("coherent_eigenvector", "a |alpha> = alpha |alpha>", Criterion::AtMost(tol))
            .with_deviation(dev)
            .note(format!("alpha = {alpha}, {} components", v.len())),
    );
    out
}

pub fn chart_suite(p: &JcParams, n_max: u64, tol: f64) -> Result<Vec<CheckOutcome>, Error> {
    let mut out = chart_checks(p, n_max, tol);
    out.extend(projector_checks(p, n_max, tol));
    if p.theta > 0.0 {
        out.extend(local_coordinate_checks(p, n_max, tol)?);
    }
    Ok(out)
}

pub fn propagator_suite(p: &JcParams, n_max: u64, tol: f64) -> Result<Vec<CheckOutcome>, Error> {
    let mut out = propagator_checks(p, n_max, tol);
    if p.omega.is_some() {
        let ev = full_evolution(p)?;
        out.push(check_equal(
            "full_evolution_factors_commute",
            "exp(-i t H1) exp(-i t H2) = exp(-i t H2) exp(-i t H1)",
            &ev.free_first(),
            &ev.free_last(),
            n_max,
            tol,
        )?);
    }
    Ok(out)
}

pub fn veronese_suite(theta: f64, n_max: u64, tol: f64) -> Result<Vec<CheckOutcome>, Error> {
    let mut out = Vec::new();
    for n in 1..=MAX_VERONESE_DEGREE {
        out.extend(veronese_checks(&build_family(theta, n)?, n_max, tol));
    }
    let family = build_family(theta, USEFUL_FORMULA_DEGREE)?;
    out.extend(useful_formula_checks(&family, n_max, tol));
    for (j, k) in [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2)] {
        out.push(commutation_check(&family, j, k, n_max, tol)?);
    }
    out.push(degree_one_matches_pjc(theta, n_max, tol)?);
    if theta > 0.0 {
        let lim = veronese_classical_limit(&build_family(theta, 2)?, &CLASSICAL_RADII)?;
        let last = lim.rows.iter().filter(|r| r.radius == CLASSICAL_RADII[2]).map(|r| r.relative_error).fold(0.0, f64::max);
        let mut c = CheckOutcome::new("veronese_classical_limit", "<alpha| Z_n |alpha> -> v_n(Z_c)", Criterion::Decreasing)
            .with_deviation(last)
            .with_verdict(lim.monotone);
        for r in &lim.rows {
            c = c.note(format!("|alpha| = {}, component {}: {:e}", r.radius, r.component, r.relative_error));
        }
        out.push(c);
    }
    Ok(out)
}

pub fn sampled_spin_checks(pairs: &[(Su2Element, Su2Element)], tol: f64) -> Vec<CheckOutcome> {
    let (mut unit, mut hom, mut pair, mut triple) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (g, h) in pairs {
        for j in [Spin::Half, Spin::One, Spin::ThreeHalves] {
            unit = unit.max(unitarity_defect(&spin_rep(g, j)));
            hom = hom.max(homomorphism_defect(g, h, j));
        }
        pair = pair.max(cg_decompose_pair(g, tol).max_deviation);
        triple = triple.max(cg_decompose_triple(g, tol).max_deviation);
    }
    let n = format!("{} seeded pairs", pairs.len());
    let c = |name: &str, anchor: &str, d: f64| CheckOutcome::new(name, anchor, Criterion::AtMost(tol)).with_deviation(d).note(n.clone());
    vec![
        c("spin_unitary", "phi_j(A)^dagger phi_j(A) = 1", unit),
        c("spin_homomorphism", "phi_j(AB) = phi_j(A) phi_j(B)", hom),
        c("cg_pair", "T_4^dagger (A x A) T_4 = diag(1, phi_1(A))", pair),
        c("cg_triple", "T_8^dagger (A x A x A) T_8 = diag(phi_1/2, phi_1/2, phi_3/2)", triple),
        CheckOutcome::new("cg_orthonormal", "T_4, T_8 unitary", Criterion::AtMost(tol)).with_deviation(cg_orthonormality_defect()),
    ]
}

pub fn spin_suite(theta: f64, n_max: u64, tol: f64) -> Result<Vec<CheckOutcome>, Error> {
    let mut out = nc_spin_checks(theta, Spin::One, n_max, tol)?;
    out.extend(nc_spin_checks(theta, Spin::ThreeHalves, n_max, tol)?);
    out.extend(tensor_breakdown_checks(theta, n_max, tol)?);
    Ok(out)
}

pub fn classical_checks(samples: &Samples, tol: f64) -> Result<Vec<CheckOutcome>, Error> {
    let mut out = berry_checks(&samples.points, tol);
    out.extend(cp_chart_checks(tol));
    out.push(cp_scale_check(&samples.cp, tol)?);
    out.push(veronese_norm_check(&samples.points, MAX_VERONESE_DEGREE, tol));
    Ok(out)
}

/// `<α|Z|α>` against `Z_c`; only defined for θ > 0.
pub fn classical_limit_checks(p: &JcParams) -> Result<Vec<CheckOutcome>, Error> {
    if p.theta <= 0.0 {
        return Ok(Vec::new());
    }
    let lim = classical_limit(p, &CLASSICAL_RADII)?;
    let last = lim.rows.last().map_or(f64::NAN, |r| r.relative_error);
    let mut c = CheckOutcome::new("classical_limit", "<alpha| Z |alpha> -> Z_c = (x + iy)/(r + z)", Criterion::Decreasing)
        .with_deviation(last)
        .with_verdict(lim.monotone);
    for r in &lim.rows {
        c = c.note(format!("|alpha| = {}: {:e}", r.radius, r.relative_error));
    }
    Ok(vec![c])
}
