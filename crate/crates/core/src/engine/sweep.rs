use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checks::check_rational;
use super::{BetaParam, CheckId, KRadius, RationalNorms, Statement, Tolerances};
use crate::error::Result;
use crate::norms::{norm_pair, NormConfig};
use crate::rational::{CirclePoint, RationalFn};

/// Smallest slack over the circle grid of one check, for one instance and
/// one `beta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub instance: usize,
    pub k: f64,
    pub beta_modulus: f64,
    pub beta_arg_deg: f64,
    pub check_id: String,
    /// `None` when every grid point was skipped or rejected.
    pub min_slack: Option<f64>,
    pub argmin_theta: Option<f64>,
}

/// `moduli` equally spaced moduli in `[0, 1]` times `phases` equally spaced
/// arguments. Modulus zero appears once.
pub fn polar_beta_grid(moduli: usize, phases: usize) -> Vec<BetaParam> {
    let mut out = vec![BetaParam::zero()];
    for i in 1..moduli {
        let m = i as f64 / (moduli - 1) as f64;
        for j in 0..phases {
            let phase = TAU * j as f64 / phases as f64;
            out.push(BetaParam::new(Complex64::from_polar(m, phase)).expect("|beta| <= 1"));
        }
    }
    out
}

/// For every `(instance, beta)` pair evaluates the zero-based and the
/// coefficient bound on a uniform grid and keeps the minimum slack.
pub fn sweep_beta(
    instances: &[(RationalFn, KRadius)],
    betas: &[BetaParam],
    grid_size: usize,
    norm: &NormConfig,
    tols: &Tolerances,
) -> Result<Vec<SweepRow>> {
    let grid = CirclePoint::grid(grid_size);
    let checks = [CheckId::new(Statement::RootBound), CheckId::new(Statement::CoefficientBound)];
    let per_instance = instances
        .par_iter()
        .enumerate()
        .map(|(idx, (r, k))| -> Result<Vec<SweepRow>> {
            let (rational, numerator) = norm_pair(r, norm)?;
            let norms = RationalNorms { rational, numerator };
            let mut rows = Vec::new();
            for &beta in betas {
                for id in checks {
                    let mut best: Option<(f64, f64)> = None;
                    for z in &grid {
                        let rep = match check_rational(id, r, *k, beta, z, &norms, tols) {
                            Ok(rep) => rep,
                            Err(e) if e.is_singular_point() => continue,
                            Err(e) => return Err(e),
                        };
                        if !rep.hypotheses_ok || rep.slack.is_nan() {
                            continue;
                        }
                        if best.is_none_or(|(s, _)| rep.slack < s) {
                            best = Some((rep.slack, z.theta));
                        }
                    }
                    rows.push(SweepRow {
                        instance: idx,
                        k: k.value(),
                        beta_modulus: beta.value().norm(),
                        beta_arg_deg: beta.value().arg().to_degrees(),
                        check_id: id.to_string(),
                        min_slack: best.map(|b| b.0),
                        argmin_theta: best.map(|b| b.1),
                    });
                }
            }
            Ok(rows)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_instance.into_iter().flatten().collect())
}
