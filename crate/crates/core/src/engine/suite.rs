use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checks::{check_lemma, check_polynomial, check_rational, lemma4_scalar, LemmaArgs};
use super::{BetaParam, CheckId, CheckReport, KRadius, PolynomialNorms, RationalNorms, Statement, Tolerances};
use crate::error::{Error, Result};
use crate::norms::{norm_pair, polynomial_norm, NormConfig};
use crate::poly::Polynomial;
use crate::rational::{CirclePoint, PoleSet, RationalFn};

/// What an instance is about.
#[derive(Debug, Clone, PartialEq)]
pub enum Subject {
    /// A rational function with its zero radius `k` (`k <= 1` for the
    /// interior lower bound, `k >= 1` for everything else).
    Rational { r: RationalFn, k: f64 },
    Polynomial { p: Polynomial, k: f64 },
    Poles(PoleSet),
    /// A single zero for the half-plane inequality.
    Zero(Complex64),
    /// A tuple for the scalar product-ratio inequality.
    Scalars(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub subject: Subject,
    /// Overrides the suite's check list for this instance.
    pub checks: Option<Vec<CheckId>>,
    /// Overrides the uniform circle grid, as angles in radians.
    pub points: Option<Vec<f64>>,
}

impl Instance {
    pub fn new(subject: Subject) -> Self {
        Instance { subject, checks: None, points: None }
    }

    pub fn with_checks(mut self, checks: Vec<CheckId>) -> Self {
        self.checks = Some(checks);
        self
    }

    pub fn at_points(mut self, points: Vec<f64>) -> Self {
        self.points = Some(points);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub label: String,
    /// Default check list for instances without an override.
    pub checks: Vec<CheckId>,
    pub betas: Vec<BetaParam>,
    pub grid_size: usize,
    pub tolerances: Tolerances,
    pub norm: NormConfig,
    pub seed: u64,
    /// Echoed only; instances carry their own `k`.
    pub k_values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub evaluated: usize,
    pub pass: usize,
    pub fail: usize,
    /// Points dropped inside the exclusion radius of a zero.
    pub skipped: usize,
    pub hypotheses_rejected: usize,
    /// Reports of quarantined checks; never counted as pass or fail.
    pub quarantined: usize,
}

impl Counts {
    fn record(&mut self, r: &CheckReport) {
        self.evaluated += 1;
        if r.quarantined {
            self.quarantined += 1;
        } else if !r.hypotheses_ok {
            self.hypotheses_rejected += 1;
        } else if r.pass {
            self.pass += 1;
        } else {
            self.fail += 1;
        }
    }
}

/// Per-check aggregate. `worst_relative_slack` is the minimum of
/// `slack / max(1, |rhs|)` over reports whose hypotheses held.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub check_id: String,
    pub counts: Counts,
    pub worst_relative_slack: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub config: SuiteConfig,
    pub instances: usize,
    pub counts: Counts,
    pub checks: Vec<CheckSummary>,
    pub reports: Vec<CheckReport>,
}

impl SuiteReport {
    /// No failing report among the non-quarantined checks.
    pub fn all_passed(&self) -> bool {
        self.counts.fail == 0
    }

    pub fn summary(&self, check_id: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|s| s.check_id == check_id)
    }

    /// Keeps only reports that did not pass, leaving the counts untouched.
    pub fn retain_failures(&mut self) {
        self.reports.retain(|r| !r.pass);
    }
}

fn applies(id: CheckId, subject: &Subject) -> bool {
    use Statement::*;
    match subject {
        Subject::Rational { k, .. } => match id.statement {
            InteriorLowerBound => *k <= 1.0,
            ConjugatePair => true,
            BlaschkeBernstein | HalfBlaschkeBernstein | PrintedZeroFreeBound | RootBound | RootBoundUnit
            | CoefficientBound | CoefficientBoundUnit | Hierarchy | RefinementTerm => *k >= 1.0,
            _ => false,
        },
        Subject::Polynomial { k, .. } => {
            matches!(id.statement, Bernstein | ErdosLax | Malik | PolynomialBound | PolynomialBoundUnit) && *k >= 1.0
        }
        Subject::Poles(_) => matches!(id.statement, PoleSumIdentity | BlaschkeLogDerivative | Unimodular),
        Subject::Zero(_) => id.statement == HalfPlane,
        Subject::Scalars(_) => id.statement == ProductRatio,
    }
}

struct InstanceOutcome {
    reports: Vec<CheckReport>,
    skipped: BTreeMap<String, usize>,
}

fn evaluate_instance(index: usize, inst: &Instance, cfg: &SuiteConfig) -> Result<InstanceOutcome> {
    let checks: Vec<CheckId> = inst
        .checks
        .as_ref()
        .unwrap_or(&cfg.checks)
        .iter()
        .copied()
        .filter(|&id| applies(id, &inst.subject))
        .collect();
    let points: Vec<CirclePoint> = match &inst.points {
        Some(thetas) => thetas.iter().map(|&t| CirclePoint::new(t)).collect(),
        None => CirclePoint::grid(cfg.grid_size),
    };
    let zero_beta = [BetaParam::zero()];
    let tols = &cfg.tolerances;

    let mut out = InstanceOutcome { reports: Vec::new(), skipped: BTreeMap::new() };
    if checks.is_empty() {
        return Ok(out);
    }

    let rational_norms = match &inst.subject {
        Subject::Rational { r, .. } => {
            let (rational, numerator) = norm_pair(r, &cfg.norm)?;
            Some(RationalNorms { rational, numerator })
        }
        _ => None,
    };
    let poly_norms = match &inst.subject {
        Subject::Polynomial { p, .. } => Some(PolynomialNorms {
            poly: polynomial_norm(p, &cfg.norm)?,
            derivative: polynomial_norm(&p.derivative(), &cfg.norm)?,
        }),
        _ => None,
    };

    for id in checks {
        let betas: &[BetaParam] = if id.statement.depends_on_beta() && !id.sharp { &cfg.betas } else { &zero_beta };
        let pts: &[CirclePoint] = if id.statement.is_global() { &points[..1.min(points.len())] } else { &points };
        for &beta in betas {
            for z in pts {
                let result = match &inst.subject {
                    Subject::Rational { r, k } => match id.statement {
                        Statement::ConjugatePair => {
                            let norm = &rational_norms.as_ref().expect("rational norms").rational;
                            check_lemma(id, &LemmaArgs::ConjugatePair { r, z: *z, norm }, tols)
                        }
                        Statement::InteriorLowerBound => {
                            check_lemma(id, &LemmaArgs::InteriorLowerBound { r, k: *k, z: *z }, tols)
                        }
                        _ => check_rational(
                            id,
                            r,
                            KRadius::new(*k)?,
                            beta,
                            z,
                            rational_norms.as_ref().expect("rational norms"),
                            tols,
                        ),
                    },
                    Subject::Polynomial { p, k } => check_polynomial(
                        id,
                        p,
                        KRadius::new(*k)?,
                        beta,
                        z,
                        poly_norms.as_ref().expect("polynomial norms"),
                        tols,
                    ),
                    Subject::Poles(poles) => {
                        let args = match id.statement {
                            Statement::PoleSumIdentity => LemmaArgs::PoleSum { poles, z: *z },
                            Statement::BlaschkeLogDerivative => LemmaArgs::BlaschkeLogDerivative { poles, z: *z },
                            _ => LemmaArgs::Unimodular { poles, z: *z },
                        };
                        check_lemma(id, &args, tols)
                    }
                    Subject::Zero(zero) => check_lemma(id, &LemmaArgs::HalfPlane { zero: *zero, z: *z }, tols),
                    Subject::Scalars(xs) => lemma4_scalar(xs, tols),
                };
                match result {
                    Ok(mut rep) => {
                        rep.instance = Some(index);
                        if id.statement.depends_on_beta() {
                            rep.beta = Some(beta.value());
                        }
                        out.reports.push(rep);
                    }
                    Err(e) if e.is_singular_point() => {
                        *out.skipped.entry(id.to_string()).or_default() += 1;
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(out)
}

fn theta_key(t: Option<f64>) -> f64 {
    t.unwrap_or(f64::NEG_INFINITY)
}

/// Runs every applicable check of `cfg` on every instance. Violations and
/// rejected hypotheses are data; only malformed configurations error.
///
/// Instances are evaluated in parallel; the report is sorted by
/// `(check_id, instance, theta)` so its content does not depend on
/// scheduling.
pub fn run_suite(instances: &[Instance], cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.norm.validate()?;
    if cfg.grid_size == 0 {
        return Err(Error::invalid("grid size must be positive"));
    }
    if cfg.betas.is_empty() {
        return Err(Error::invalid("at least one beta value is required"));
    }

    let outcomes = instances
        .par_iter()
        .enumerate()
        .map(|(i, inst)| evaluate_instance(i, inst, cfg))
        .collect::<Result<Vec<_>>>()?;

    let mut reports = Vec::new();
    let mut skipped: BTreeMap<String, usize> = BTreeMap::new();
    for o in outcomes {
        reports.extend(o.reports);
        for (id, n) in o.skipped {
            *skipped.entry(id).or_default() += n;
        }
    }
    // stable: reports sharing a key keep their beta order
    reports.sort_by(|a, b| {
        a.check_id
            .cmp(&b.check_id)
            .then(a.instance.cmp(&b.instance))
            .then(theta_key(a.theta).total_cmp(&theta_key(b.theta)))
    });

    let mut counts = Counts::default();
    let mut per_check: BTreeMap<String, (Counts, Option<f64>)> = BTreeMap::new();
    for r in &reports {
        counts.record(r);
        let entry = per_check.entry(r.check_id.clone()).or_default();
        entry.0.record(r);
        if r.hypotheses_ok && !r.slack.is_nan() {
            let rel = r.slack / r.rhs.abs().max(1.0);
            entry.1 = Some(entry.1.map_or(rel, |w: f64| w.min(rel)));
        }
    }
    for (id, n) in &skipped {
        counts.skipped += n;
        per_check.entry(id.clone()).or_default().0.skipped += n;
    }
    let checks = per_check
        .into_iter()
        .map(|(check_id, (counts, worst))| CheckSummary { check_id, counts, worst_relative_slack: worst })
        .collect();

    Ok(SuiteReport { seed: cfg.seed, config: cfg.clone(), instances: instances.len(), counts, checks, reports })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(checks: Vec<CheckId>) -> SuiteConfig {
        SuiteConfig {
            label: "test".into(),
            checks,
            betas: vec![BetaParam::zero()],
            grid_size: 16,
            tolerances: Tolerances::default(),
            norm: NormConfig::default(),
            seed: 0,
            k_values: vec![],
        }
    }

    #[test]
    fn empty_instance_list() {
        let rep = run_suite(&[], &cfg(vec![CheckId::new(Statement::RootBound)])).unwrap();
        assert_eq!(rep.counts, Counts::default());
        assert!(rep.reports.is_empty() && rep.all_passed());
    }

    #[test]
    fn single_extremal_instance_is_sharp() {
        let p = Polynomial::from_roots(&[Complex64::new(-2.0, 0.0)], Complex64::new(1.0, 0.0)).unwrap();
        let r = RationalFn::new(p, PoleSet::repeated(3.0, 1).unwrap()).unwrap();
        let inst = Instance::new(Subject::Rational { r, k: 2.0 }).at_points(vec![0.0]);
        let rep = run_suite(&[inst], &cfg(vec![CheckId::sharp(Statement::RootBound)])).unwrap();
        assert_eq!(rep.counts.evaluated, 1);
        assert_eq!(rep.counts.pass, 1);
        assert_eq!(rep.reports[0].check_id, "sharp_thm21");
    }

    #[test]
    fn zero_on_grid_point_is_skipped() {
        // zero at z = -1, which is grid point 8 of 16
        let p = Polynomial::from_roots(&[Complex64::new(-1.0, 0.0)], Complex64::new(1.0, 0.0)).unwrap();
        let r = RationalFn::new(p, PoleSet::repeated(2.0, 1).unwrap()).unwrap();
        let rep = run_suite(&[Instance::new(Subject::Rational { r, k: 1.0 })], &cfg(vec![CheckId::new(Statement::RootBound)])).unwrap();
        assert_eq!(rep.counts.skipped, 1);
        assert_eq!(rep.counts.evaluated, 15);
        assert_eq!(rep.summary("thm21").unwrap().counts.skipped, 1);
    }

    #[test]
    fn quarantined_failures_do_not_fail_the_suite() {
        let p = Polynomial::from_roots(&[Complex64::new(-2.0, 0.0)], Complex64::new(1.0, 0.0)).unwrap();
        let r = RationalFn::new(p, PoleSet::repeated(3.0, 1).unwrap()).unwrap();
        let rep = run_suite(
            &[Instance::new(Subject::Rational { r, k: 2.0 })],
            &cfg(vec![CheckId::new(Statement::PrintedZeroFreeBound)]),
        )
        .unwrap();
        assert!(rep.counts.quarantined > 0);
        assert!(rep.reports.iter().any(|r| !r.pass));
        assert!(rep.all_passed());
    }

    #[test]
    fn reports_are_sorted() {
        let poles = PoleSet::new(vec![Complex64::new(2.0, 1.0)]).unwrap();
        let insts = vec![Instance::new(Subject::Poles(poles.clone())), Instance::new(Subject::Poles(poles))];
        let rep = run_suite(
            &insts,
            &cfg(vec![CheckId::new(Statement::Unimodular), CheckId::new(Statement::PoleSumIdentity)]),
        )
        .unwrap();
        assert_eq!(rep.reports[0].check_id, "blaschke_unimodular");
        assert_eq!(rep.reports.last().unwrap().check_id, "lemma1");
        assert!(rep.reports.windows(2).all(|w| {
            (w[0].check_id.as_str(), w[0].instance) <= (w[1].check_id.as_str(), w[1].instance)
        }));
        assert!(rep.all_passed());
    }
}
