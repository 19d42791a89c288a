use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use ratbound::engine::SweepRow;
use ratbound::{NormEstimate, SuiteReport};
use serde::Serialize;

/// The single writer all results go through: a file when `--out` is given,
/// stdout otherwise.
pub fn open(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("cannot write {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// 17 significant digits, enough to round-trip a double.
pub fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt_float(v: Option<f64>) -> String {
    v.map(float).unwrap_or_default()
}

pub fn json<T: Serialize>(w: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer(&mut *w, value)?;
    writeln!(w)?;
    Ok(())
}

pub fn suite_csv(w: &mut dyn Write, report: &SuiteReport) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record([
        "check_id",
        "instance",
        "theta",
        "beta_re",
        "beta_im",
        "lhs",
        "rhs",
        "slack",
        "tolerance",
        "hypotheses_ok",
        "pass",
        "quarantined",
    ])?;
    for r in &report.reports {
        csv.write_record([
            r.check_id.clone(),
            r.instance.map(|i| i.to_string()).unwrap_or_default(),
            opt_float(r.theta),
            opt_float(r.beta.map(|b| b.re)),
            opt_float(r.beta.map(|b| b.im)),
            float(r.lhs),
            float(r.rhs),
            float(r.slack),
            float(r.tolerance),
            r.hypotheses_ok.to_string(),
            r.pass.to_string(),
            r.quarantined.to_string(),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

pub fn sweep_csv(w: &mut dyn Write, rows: &[SweepRow]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(["instance", "k", "beta_modulus", "beta_arg_deg", "check_id", "min_slack", "argmin_theta"])?;
    for r in rows {
        csv.write_record([
            r.instance.to_string(),
            float(r.k),
            float(r.beta_modulus),
            float(r.beta_arg_deg),
            r.check_id.clone(),
            opt_float(r.min_slack),
            opt_float(r.argmin_theta),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct NormRow {
    pub instance: usize,
    pub rational: NormEstimate,
    pub numerator: NormEstimate,
}

pub fn norm_csv(w: &mut dyn Write, rows: &[NormRow]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(["instance", "function", "value", "argmax_theta", "samples_used", "refined"])?;
    for row in rows {
        for (name, est) in [("rational", &row.rational), ("numerator", &row.numerator)] {
            csv.write_record([
                row.instance.to_string(),
                name.to_string(),
                float(est.value),
                float(est.argmax_theta),
                est.samples_used.to_string(),
                est.refined.to_string(),
            ])?;
        }
    }
    csv.flush()?;
    Ok(())
}
