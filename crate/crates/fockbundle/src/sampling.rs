//! Seeded random inputs. Every consumer draws from its own ChaCha stream,
//! so adding samples to one never shifts another.

use fockbundle_core::berry::{HomogeneousPoint, R3Point};
use fockbundle_core::spin::Su2Element;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

const SU2_STREAM: u64 = 1;
const SPHERE_STREAM: u64 = 2;
const CP_STREAM: u64 = 3;

/// Pairs used for the spin homomorphism checks.
pub const SU2_PAIRS: usize = 100;
/// Points used for the classical chart checks.
pub const SPHERE_POINTS: usize = 1000;
pub const CP_SAMPLES: usize = 200;

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// First column of a complex Gaussian 2x2 matrix, normalized and completed
/// to an SU(2) element.
fn su2(rng: &mut ChaCha8Rng) -> Su2Element {
    loop {
        let (a, b) = (gaussian(rng), gaussian(rng));
        if let Ok(g) = Su2Element::from_column(a, b) {
            return g;
        }
    }
}

pub fn su2_pairs(seed: u64, count: usize) -> Vec<(Su2Element, Su2Element)> {
    let mut rng = stream(seed, SU2_STREAM);
    (0..count).map(|_| (su2(&mut rng), su2(&mut rng))).collect()
}

/// Isotropic directions with radius log-uniform on [0.1, 10].
pub fn sphere_points(seed: u64, count: usize) -> Vec<R3Point> {
    let mut rng = stream(seed, SPHERE_STREAM);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: [f64; 3] = [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let r = rng.random_range(0.1f64.ln()..=10f64.ln()).exp();
        if norm < 1e-8 {
            continue;
        }
        if let Ok(p) = R3Point::new(r * v[0] / norm, r * v[1] / norm, r * v[2] / norm) {
            out.push(p);
        }
    }
    out
}

/// Homogeneous points of CP^1 and CP^2 (alternating) with a rescaling.
pub fn cp_samples(seed: u64, count: usize) -> Vec<(HomogeneousPoint, Complex64)> {
    let mut rng = stream(seed, CP_STREAM);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let dim = 2 + out.len() % 2;
        let zeta: Vec<Complex64> = (0..dim).map(|_| gaussian(&mut rng)).collect();
        let lambda = gaussian(&mut rng);
        if lambda.norm() < 1e-8 {
            continue;
        }
        if let Ok(p) = HomogeneousPoint::new(zeta) {
            out.push((p, lambda));
        }
    }
    out
}
