use clap::ValueEnum;
use serde::Serialize;

use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Fock,
    Charts,
    Propagator,
    Veronese,
    Spinrep,
    Classical,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [Suite::Fock, Suite::Charts, Suite::Propagator, Suite::Veronese, Suite::Spinrep, Suite::Classical];

    /// The concrete suites this selection runs, in report order.
    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => Suite::EACH.to_vec(),
            s => vec![s],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Fock => "fock",
            Suite::Charts => "charts",
            Suite::Propagator => "propagator",
            Suite::Veronese => "veronese",
            Suite::Spinrep => "spinrep",
            Suite::Classical => "classical",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub const DEFAULT_N_MAX: u64 = 48;
pub const DEFAULT_TOL: f64 = 1e-10;
/// Used when neither `--theta` nor `--omega/--delta` is given.
pub const DEFAULT_THETA: f64 = 1.0;

/// A validated run configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub theta_list: Vec<f64>,
    pub n_max: u64,
    pub tol: f64,
    pub g: f64,
    pub t: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suite: Suite::All,
            theta_list: vec![DEFAULT_THETA],
            n_max: DEFAULT_N_MAX,
            tol: DEFAULT_TOL,
            g: 1.0,
            t: 1.0,
            omega: None,
            delta: None,
            seed: 0,
        }
    }
}

impl SuiteConfig {
    pub fn new(suite: Suite, theta_list: Vec<f64>) -> Self {
        SuiteConfig { suite, theta_list, ..Default::default() }
    }

    /// Detuning implied by `omega` and `delta`, if both are set.
    pub fn physical_theta(&self) -> Option<f64> {
        match (self.omega, self.delta) {
            (Some(w), Some(d)) => Some((d - w) / (2.0 * self.g)),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.n_max < 4 {
            return bad(format!("nmax must be at least 4, got {}", self.n_max));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return bad(format!("tol must be positive and finite, got {}", self.tol));
        }
        if self.theta_list.is_empty() {
            return bad("theta list is empty".into());
        }
        for (name, v) in [("g", Some(self.g)), ("t", Some(self.t)), ("omega", self.omega), ("delta", self.delta)] {
            if let Some(v) = v {
                if !v.is_finite() {
                    return bad(format!("{name} must be finite, got {v}"));
                }
            }
        }
        if self.g == 0.0 {
            return bad("g must be nonzero".into());
        }
        if self.omega.is_some() != self.delta.is_some() {
            return bad("omega and delta must be given together".into());
        }
        for &th in &self.theta_list {
            if !th.is_finite() {
                return bad(format!("theta must be finite, got {th}"));
            }
            if let Some(p) = self.physical_theta() {
                if (p - th).abs() > 1e-12 {
                    return bad(format!("theta {th} disagrees with (delta - omega)/2g = {p}"));
                }
            }
        }
        Ok(())
    }
}
