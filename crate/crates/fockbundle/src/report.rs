use std::fmt::Write as _;

use fockbundle_core::CheckOutcome;
use serde::Serialize;

use crate::config::{Format, Suite, SuiteConfig};
use crate::suites::{run_jobs, JobOutput};
use crate::Error;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub suite: Suite,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(flatten)]
    pub outcome: CheckOutcome,
    /// Wall time of the job that produced this check; only with `--timings`,
    /// so that plain reports stay byte-stable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub version: String,
    pub config: SuiteConfig,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
}

impl Report {
    pub fn assemble(config: SuiteConfig, outputs: &[JobOutput], timings: bool) -> Self {
        let checks: Vec<CheckRecord> = outputs
            .iter()
            .flat_map(|o| {
                o.checks.iter().map(move |c| CheckRecord {
                    suite: o.job.suite,
                    theta: o.job.theta,
                    outcome: c.clone(),
                    elapsed_ms: timings.then_some(o.elapsed_ms),
                })
            })
            .collect();
        let pass = checks.iter().all(|c| c.outcome.pass);
        Report { version: VERSION.to_string(), config, checks, pass }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.outcome.pass)
    }

    pub fn to_json(&self) -> Result<String, Error> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_csv(&self) -> Result<String, Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["suite", "theta", "name", "pass", "max_deviation", "criterion", "excluded_states", "worst", "elapsed_ms"])?;
        for c in &self.checks {
            let o = &c.outcome;
            w.write_record([
                c.suite.name().to_string(),
                opt(c.theta),
                o.name.clone(),
                o.pass.to_string(),
                num(o.max_deviation),
                criterion(o),
                o.excluded_states.to_string(),
                o.worst.map(|p| format!("({},{})<-({},{})", p.row, p.m, p.col, p.n)).unwrap_or_default(),
                opt(c.elapsed_ms),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let o = &c.outcome;
            let _ = write!(
                s,
                "{} {:<10} {:<8} {:<36} max_dev={:.3e}",
                if o.pass { "PASS" } else { "FAIL" },
                c.suite.name(),
                c.theta.map(|t| format!("theta={t}")).unwrap_or_default(),
                o.name,
                o.max_deviation,
            );
            if !o.excluded_states.is_empty() {
                let _ = write!(s, " excluded={}", o.excluded_states);
            }
            if let Some(ms) = c.elapsed_ms {
                let _ = write!(s, " {ms:.1}ms");
            }
            s.push('\n');
            for n in &o.notes {
                let _ = writeln!(s, "    {n}");
            }
        }
        let failed = self.failures().count();
        let _ = writeln!(s, "{}: {} checks, {} failed", if self.pass { "PASS" } else { "FAIL" }, self.checks.len(), failed);
        s
    }

    pub fn render(&self, format: Format) -> Result<String, Error> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Text => Ok(self.to_text()),
        }
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// Shortest round-trip form, in exponent notation for very small or large
/// magnitudes.
pub(crate) fn num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e6).contains(&a) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

fn criterion(o: &CheckOutcome) -> String {
    match o.criterion {
        fockbundle_core::Criterion::AtMost(t) => format!("<={t:e}"),
        fockbundle_core::Criterion::Exceeds(t) => format!(">{t:e}"),
        fockbundle_core::Criterion::Decreasing => "decreasing".into(),
    }
}

/// Run the configured suites and assemble the report.
pub fn run(config: &SuiteConfig, timings: bool) -> Result<Report, Error> {
    let outputs = run_jobs(config)?;
    Ok(Report::assemble(config.clone(), &outputs, timings))
}
