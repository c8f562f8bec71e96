use clap::ValueEnum;
use rayon::prelude::*;

use crate::config::SuiteConfig;
use crate::report::num;
use crate::suites::{collect_jobs, pool, JobOutput, Samples};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    Theta,
    T,
    Nmax,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Theta => "theta",
            Axis::T => "t",
            Axis::Nmax => "nmax",
        }
    }
}

/// One config per axis value.
pub fn configs(base: &SuiteConfig, axis: Axis, values: &[f64]) -> Result<Vec<SuiteConfig>, Error> {
    if values.is_empty() {
        return Err(Error::Config("sweep needs at least one value".into()));
    }
    if axis != Axis::Theta && base.theta_list.len() != 1 {
        return Err(Error::Config(format!("a {} sweep takes exactly one theta", axis.name())));
    }
    values
        .iter()
        .map(|&v| {
            let mut c = base.clone();
            match axis {
                Axis::Theta => c.theta_list = vec![v],
                Axis::T => c.t = v,
                Axis::Nmax => {
                    if v.fract() != 0.0 || v < 0.0 {
                        return Err(Error::Config(format!("nmax values must be whole numbers, got {v}")));
                    }
                    c.n_max = v as u64;
                }
            }
            c.validate()?;
            Ok(c)
        })
        .collect()
}

/// Named cells of one row: per check, max deviation and excluded-state
/// count; then observables.
fn cells(outputs: &[JobOutput]) -> (bool, Vec<(String, String)>) {
    let mut pass = true;
    let mut out = Vec::new();
    for o in outputs {
        let s = o.job.suite.name();
        for c in &o.checks {
            pass &= c.pass;
            out.push((format!("{s}.{}", c.name), num(c.max_deviation)));
            out.push((format!("{s}.{}.excluded", c.name), c.excluded_states.len().to_string()));
        }
        for (k, v) in &o.observables {
            out.push((format!("{s}.{k}"), num(*v)));
        }
    }
    (pass, out)
}

/// CSV with one row per axis value. Columns: the axis, overall pass, then
/// for every check `<suite>.<check>` (max deviation) and
/// `<suite>.<check>.excluded` (number of excluded states), then observables.
/// Cells of checks absent at some value are left empty.
pub fn sweep(base: &SuiteConfig, axis: Axis, values: &[f64]) -> Result<String, Error> {
    let cfgs = configs(base, axis, values)?;
    let samples = Samples::draw(base.seed);
    let rows: Vec<(bool, Vec<(String, String)>)> = pool()?.install(|| {
        cfgs.par_iter().map(|c| collect_jobs(c, &samples).map(|o| cells(&o))).collect::<Result<_, _>>()
    })?;
    let mut columns: Vec<String> = Vec::new();
    for (_, row) in &rows {
        for (k, _) in row {
            if !columns.contains(k) {
                columns.push(k.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![axis.name().to_string(), "pass".to_string()];
    header.extend(columns.iter().cloned());
    w.write_record(&header)?;
    for (v, (pass, row)) in values.iter().zip(&rows) {
        let mut rec = vec![num(*v), pass.to_string()];
        rec.extend(columns.iter().map(|k| row.iter().find(|(c, _)| c == k).map(|(_, x)| x.clone()).unwrap_or_default()));
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
