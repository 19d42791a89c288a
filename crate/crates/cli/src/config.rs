use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use ratbound::generators::InstanceFile;
use ratbound::suites::{PlanOptions, SuiteKind};
use ratbound::{BetaParam, NormConfig, RationalFn, Tolerances};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Parses `re,im`, `mod@deg` or a bare real number.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let num = |t: &str| -> Result<f64> {
        let v: f64 = t.trim().parse().with_context(|| format!("`{t}` is not a number"))?;
        if !v.is_finite() {
            bail!("`{t}` is not finite");
        }
        Ok(v)
    };
    if let Some((m, deg)) = s.split_once('@') {
        return Ok(Complex64::from_polar(num(m)?, num(deg)?.to_radians()));
    }
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(num(re)?, num(im)?)),
        None => Ok(Complex64::new(num(s)?, 0.0)),
    }
}

pub fn parse_beta(s: &str) -> Result<BetaParam> {
    let b = parse_complex(s)?;
    BetaParam::new(b).map_err(|e| anyhow::anyhow!("beta `{s}`: {e}"))
}

/// Flags shared by every subcommand, after validation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub tolerances: Tolerances,
    pub grid: Option<usize>,
    pub instances: Option<usize>,
}

impl RunConfig {
    pub fn new(
        seed: u64,
        format: Format,
        out: Option<PathBuf>,
        tol_slack: Option<f64>,
        tol_identity: Option<f64>,
        grid: Option<usize>,
        instances: Option<usize>,
    ) -> Result<Self> {
        let mut tolerances = Tolerances::default();
        for (name, v, slot) in [("--tol-slack", tol_slack, &mut tolerances.slack), ("--tol-identity", tol_identity, &mut tolerances.identity)] {
            if let Some(v) = v {
                if !(v.is_finite() && v >= 0.0) {
                    bail!("{name} must be a non-negative number, got {v}");
                }
                *slot = v;
            }
        }
        if grid == Some(0) {
            bail!("--grid must be positive");
        }
        Ok(RunConfig { seed, format, out, tolerances, grid, instances })
    }

    pub fn plan_options(&self) -> PlanOptions {
        PlanOptions {
            instances: self.instances,
            grid: self.grid,
            seed: self.seed,
            tolerances: self.tolerances,
            norm: NormConfig::default(),
            ..PlanOptions::default()
        }
    }
}

pub fn check_ks(ks: &[f64]) -> Result<()> {
    if let Some(k) = ks.iter().find(|k| !(k.is_finite() && **k >= 1.0)) {
        bail!("k = {k} must be >= 1");
    }
    Ok(())
}

pub fn parse_suite(s: &str) -> Result<SuiteKind> {
    s.parse::<SuiteKind>().map_err(anyhow::Error::from)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AnyInstances {
    File(InstanceFile),
    List(Vec<RationalFn>),
    One(RationalFn),
}

/// Reads instances from a generated file, a bare list or a single
/// instance. Returns the generating `k` when the file records it.
pub fn read_instances(path: &Path) -> Result<(Vec<RationalFn>, Option<f64>)> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let parsed: AnyInstances =
        serde_json::from_str(&text).with_context(|| format!("{} is not an instance file", path.display()))?;
    Ok(match parsed {
        AnyInstances::File(f) => (f.instances, Some(f.spec.k)),
        AnyInstances::List(v) => (v, None),
        AnyInstances::One(r) => (vec![r], None),
    })
}
