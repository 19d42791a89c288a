//! Named verification suites: which instances to generate and which checks
//! to run on them.

use std::f64::consts::{FRAC_PI_4, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;

use crate::engine::{BetaParam, CheckId, Instance, Statement, Subject, SuiteConfig, Tolerances};
use crate::error::{Error, Result};
use crate::generators::{
    boundary_cases, default_poles, extremal_instance, gen_instance, gen_interior_instance, gen_pole_set,
    gen_shell_instance, rng_from, split_seed, InstanceSpec,
};
use crate::norms::NormConfig;
use crate::poly::Polynomial;
use crate::rational::RationalFn;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteKind {
    Identities,
    Rational,
    Polynomial,
    Lemmas,
    Sharpness,
    All,
}

impl SuiteKind {
    pub fn name(self) -> &'static str {
        match self {
            SuiteKind::Identities => "identities",
            SuiteKind::Rational => "rational",
            SuiteKind::Polynomial => "polynomial",
            SuiteKind::Lemmas => "lemmas",
            SuiteKind::Sharpness => "sharpness",
            SuiteKind::All => "all",
        }
    }

    fn default_instances(self) -> usize {
        match self {
            SuiteKind::Identities => 500,
            SuiteKind::Rational | SuiteKind::Polynomial => 100,
            SuiteKind::Lemmas => 300,
            SuiteKind::Sharpness | SuiteKind::All => 0,
        }
    }

    fn default_grid(self) -> usize {
        match self {
            SuiteKind::Identities | SuiteKind::Lemmas => 64,
            _ => 128,
        }
    }
}

impl fmt::Display for SuiteKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            SuiteKind::Identities,
            SuiteKind::Rational,
            SuiteKind::Polynomial,
            SuiteKind::Lemmas,
            SuiteKind::Sharpness,
            SuiteKind::All,
        ]
        .into_iter()
        .find(|k| k.name() == s)
        .ok_or_else(|| Error::invalid(format!("unknown suite `{s}`")))
    }
}

/// `0, 0.5, -0.5, 0.5i, 0.7 e^{i pi/4}`.
pub fn default_betas() -> Vec<BetaParam> {
    [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.5, 0.0),
        Complex64::new(-0.5, 0.0),
        Complex64::new(0.0, 0.5),
        Complex64::from_polar(0.7, FRAC_PI_4),
    ]
    .into_iter()
    .map(|b| BetaParam::new(b).expect("|beta| <= 1"))
    .collect()
}

/// Knobs shared by all suites. `None` picks the suite's own default.
#[derive(Debug, Clone, Default)]
pub struct PlanOptions {
    /// Instances per `k` (rational, polynomial) or per statement (lemmas).
    pub instances: Option<usize>,
    pub grid: Option<usize>,
    pub seed: u64,
    pub k_values: Option<Vec<f64>>,
    pub betas: Option<Vec<BetaParam>>,
    /// Degrees; random suites cycle through `1..=8` when unset.
    pub ns: Option<Vec<usize>>,
    /// Pole positions of the extremal family.
    pub a_values: Option<Vec<f64>>,
    pub tolerances: Tolerances,
    pub norm: NormConfig,
    /// Pre-generated instances with their `k`, replacing the random
    /// draws of the rational suite.
    pub input: Option<(Vec<RationalFn>, f64)>,
}

impl PlanOptions {
    fn ks(&self, default: &[f64]) -> Vec<f64> {
        self.k_values.clone().unwrap_or_else(|| default.to_vec())
    }

    fn degree(&self, i: usize) -> usize {
        match &self.ns {
            Some(ns) if !ns.is_empty() => ns[i % ns.len()],
            _ => 1 + i % 8,
        }
    }

    fn validate(&self) -> Result<()> {
        if let Some(ks) = &self.k_values {
            if let Some(k) = ks.iter().find(|k| !(k.is_finite() && **k >= 1.0)) {
                return Err(Error::hypothesis(format!("k = {k} must be >= 1")));
            }
        }
        if let Some(ns) = &self.ns {
            if ns.iter().any(|&n| n == 0 || n > crate::poly::DEFAULT_MAX_DEGREE) {
                return Err(Error::invalid("degrees must lie in 1..=30"));
            }
        }
        if let Some(a) = self.a_values.iter().flatten().find(|a| !(**a > 1.0)) {
            return Err(Error::invalid(format!("pole a = {a} must exceed 1")));
        }
        if self.grid == Some(0) {
            return Err(Error::invalid("grid size must be positive"));
        }
        self.norm.validate()
    }
}

/// Instances plus the configuration to run them with.
#[derive(Debug, Clone)]
pub struct SuitePlan {
    pub instances: Vec<Instance>,
    pub config: SuiteConfig,
}

fn ids(statements: &[Statement]) -> Vec<CheckId> {
    statements.iter().map(|&s| CheckId::new(s)).collect()
}

const RATIONAL_CHECKS: [Statement; 9] = [
    Statement::BlaschkeBernstein,
    Statement::HalfBlaschkeBernstein,
    Statement::PrintedZeroFreeBound,
    Statement::RootBound,
    Statement::RootBoundUnit,
    Statement::CoefficientBound,
    Statement::CoefficientBoundUnit,
    Statement::Hierarchy,
    Statement::RefinementTerm,
];

const POLYNOMIAL_CHECKS: [Statement; 5] = [
    Statement::Bernstein,
    Statement::ErdosLax,
    Statement::Malik,
    Statement::PolynomialBound,
    Statement::PolynomialBoundUnit,
];

const IDENTITY_CHECKS: [Statement; 3] =
    [Statement::PoleSumIdentity, Statement::BlaschkeLogDerivative, Statement::Unimodular];

const LEMMA_CHECKS: [Statement; 4] =
    [Statement::ConjugatePair, Statement::InteriorLowerBound, Statement::HalfPlane, Statement::ProductRatio];

const POLE_SHELL: [f64; 2] = [1.5, 2.5];

/// Per-part instance count of the combined suite when none is given.
pub const ALL_DEFAULT_INSTANCES: usize = 10;

fn identities(o: &PlanOptions, count: usize) -> Result<Vec<Instance>> {
    (0..count)
        .map(|i| {
            let n = o.degree(i);
            let poles = gen_pole_set(n, [1.05, 4.0], split_seed(o.seed, 1, i as u64))?;
            Ok(Instance::new(Subject::Poles(poles)))
        })
        .collect()
}

fn rational(o: &PlanOptions, count: usize, ks: &[f64]) -> Result<Vec<Instance>> {
    if let Some((list, k)) = &o.input {
        return Ok(list.iter().map(|r| Instance::new(Subject::Rational { r: r.clone(), k: *k })).collect());
    }
    let mut out = Vec::new();
    for (ki, &k) in ks.iter().enumerate() {
        for i in 0..count {
            let mut spec = InstanceSpec::new(o.degree(i), k, split_seed(o.seed, 20 + ki as u64, i as u64));
            spec.boundary_prob = 0.25;
            out.push(Instance::new(Subject::Rational { r: gen_instance(&spec)?, k }));
        }
    }
    Ok(out)
}

fn polynomial(o: &PlanOptions, count: usize, ks: &[f64]) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    for (ki, &k) in ks.iter().enumerate() {
        for i in 0..count {
            let mut spec = InstanceSpec::new(o.degree(i), k, split_seed(o.seed, 40 + ki as u64, i as u64));
            spec.boundary_prob = 0.25;
            let p = gen_instance(&spec)?.numerator().clone();
            out.push(Instance::new(Subject::Polynomial { p, k }));
        }
    }
    Ok(out)
}

fn lemmas(o: &PlanOptions, count: usize) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    let conj = CheckId::new(Statement::ConjugatePair);
    let interior = CheckId::new(Statement::InteriorLowerBound);
    for i in 0..count as u64 {
        let n = o.degree(i as usize);
        let r = gen_shell_instance(n, [0.1, 3.0], POLE_SHELL, split_seed(o.seed, 60, i))?;
        out.push(Instance::new(Subject::Rational { r, k: 1.0 }).with_checks(vec![conj]));
    }
    for i in 0..count as u64 {
        let n = o.degree(i as usize);
        let seed = split_seed(o.seed, 61, i);
        let (r, k) = if i % 10 == 0 {
            (RationalFn::blaschke(&gen_pole_set(n, POLE_SHELL, seed)?), 1.0)
        } else {
            let radius = 0.2 + 0.8 * rng_from(seed ^ 1).gen::<f64>();
            (gen_interior_instance(n, radius, POLE_SHELL, seed)?, radius)
        };
        out.push(Instance::new(Subject::Rational { r, k }).with_checks(vec![interior]));
    }
    for i in 0..count as u64 {
        let mut rng = rng_from(split_seed(o.seed, 62, i));
        let zero = Complex64::from_polar(rng.gen_range(1.0..=4.0), rng.gen_range(0.0..TAU));
        out.push(Instance::new(Subject::Zero(zero)));
    }
    for i in 0..count as u64 {
        let mut rng = rng_from(split_seed(o.seed, 63, i));
        let len = rng.gen_range(1..=10);
        out.push(Instance::new(Subject::Scalars((0..len).map(|_| rng.gen_range(1.0..=100.0)).collect())));
    }
    Ok(out)
}

fn sharpness(o: &PlanOptions) -> Result<Vec<Instance>> {
    let ks = o.ks(&[1.0, 2.0]);
    let ns = o.ns.clone().unwrap_or_else(|| vec![1, 2, 3]);
    let a_values = o.a_values.clone().unwrap_or_else(|| vec![2.0, 3.0]);
    let one = Complex64::new(1.0, 0.0);
    let mut out = Vec::new();
    for &k in &ks {
        for &n in &ns {
            for &a in &a_values {
                let mut checks = vec![CheckId::sharp(Statement::RootBound), CheckId::sharp(Statement::CoefficientBound)];
                if k == 1.0 {
                    checks.push(CheckId::sharp(Statement::RootBoundUnit));
                    checks.push(CheckId::sharp(Statement::CoefficientBoundUnit));
                }
                let r = extremal_instance(n, k, a)?;
                out.push(Instance::new(Subject::Rational { r, k }).with_checks(checks).at_points(vec![0.0]));
            }
        }
    }
    for &n in &ns {
        out.push(
            Instance::new(Subject::Polynomial { p: Polynomial::monomial(n, one)?, k: 1.0 })
                .with_checks(vec![CheckId::sharp(Statement::Bernstein)]),
        );
        for &k in &ks {
            let p = Polynomial::from_roots(&vec![Complex64::new(-k, 0.0); n], one)?;
            out.push(Instance::new(Subject::Polynomial { p, k }).with_checks(vec![CheckId::sharp(Statement::Malik)]));
        }
        let cases = boundary_cases(&default_poles(n)?)?;
        let [b, b_plus_one]: [RationalFn; 2] = cases.try_into().expect("two boundary cases");
        out.push(
            Instance::new(Subject::Rational { r: b, k: 1.0 })
                .with_checks(vec![CheckId::sharp(Statement::BlaschkeBernstein)]),
        );
        out.push(
            Instance::new(Subject::Rational { r: b_plus_one, k: 1.0 })
                .with_checks(vec![CheckId::sharp(Statement::HalfBlaschkeBernstein)]),
        );
    }
    Ok(out)
}

fn sharp_checks() -> Vec<CheckId> {
    [
        Statement::RootBound,
        Statement::CoefficientBound,
        Statement::RootBoundUnit,
        Statement::CoefficientBoundUnit,
        Statement::Bernstein,
        Statement::Malik,
        Statement::BlaschkeBernstein,
        Statement::HalfBlaschkeBernstein,
    ]
    .into_iter()
    .map(CheckId::sharp)
    .collect()
}

/// Builds the instances and configuration of a named suite. Instances are
/// a pure function of the options, so equal options give equal plans.
pub fn build_plan(kind: SuiteKind, o: &PlanOptions) -> Result<SuitePlan> {
    o.validate()?;
    let count = o.instances.unwrap_or_else(|| kind.default_instances());
    let betas = o.betas.clone().filter(|b| !b.is_empty()).unwrap_or_else(default_betas);
    let main_ks = match &o.input {
        Some((_, k)) => vec![*k],
        None => o.ks(&[1.0, 1.5, 2.0]),
    };

    let (instances, checks, k_values) = match kind {
        SuiteKind::Identities => (identities(o, count)?, ids(&IDENTITY_CHECKS), vec![]),
        SuiteKind::Rational => (rational(o, count, &main_ks)?, ids(&RATIONAL_CHECKS), main_ks),
        SuiteKind::Polynomial => (polynomial(o, count, &main_ks)?, ids(&POLYNOMIAL_CHECKS), main_ks),
        SuiteKind::Lemmas => (lemmas(o, count)?, ids(&LEMMA_CHECKS), vec![]),
        SuiteKind::Sharpness => (sharpness(o)?, sharp_checks(), o.ks(&[1.0, 2.0])),
        SuiteKind::All => {
            let mut instances = Vec::new();
            let mut checks = Vec::new();
            for part in [
                SuiteKind::Identities,
                SuiteKind::Rational,
                SuiteKind::Polynomial,
                SuiteKind::Lemmas,
                SuiteKind::Sharpness,
            ] {
                let sub = build_plan(part, &PlanOptions { instances: Some(o.instances.unwrap_or(ALL_DEFAULT_INSTANCES)), ..o.clone() })?;
                let grid = sub.config.grid_size;
                for inst in sub.instances {
                    let thetas = inst.points.clone().unwrap_or_else(|| (0..grid).map(|i| TAU * i as f64 / grid as f64).collect());
                    let own = inst.checks.clone().unwrap_or_else(|| sub.config.checks.clone());
                    instances.push(inst.with_checks(own).at_points(thetas));
                }
                checks.extend(sub.config.checks);
            }
            (instances, checks, main_ks)
        }
    };

    let config = SuiteConfig {
        label: kind.name().to_string(),
        checks,
        betas,
        grid_size: o.grid.unwrap_or_else(|| kind.default_grid()),
        tolerances: o.tolerances,
        norm: o.norm,
        seed: o.seed,
        k_values,
    };
    Ok(SuitePlan { instances, config })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::run_suite;

    fn small(kind: SuiteKind) -> SuitePlan {
        build_plan(kind, &PlanOptions { instances: Some(4), seed: 9, ..PlanOptions::default() }).unwrap()
    }

    #[test]
    fn names_round_trip() {
        for k in ["identities", "rational", "polynomial", "lemmas", "sharpness", "all"] {
            assert_eq!(k.parse::<SuiteKind>().unwrap().name(), k);
        }
        assert!("bogus".parse::<SuiteKind>().is_err());
    }

    #[test]
    fn plans_are_deterministic() {
        let a = small(SuiteKind::All);
        let b = small(SuiteKind::All);
        assert_eq!(a.instances, b.instances);
        assert_eq!(a.config, b.config);
    }

    #[test]
    fn instance_counts() {
        assert_eq!(small(SuiteKind::Identities).instances.len(), 4);
        assert_eq!(small(SuiteKind::Rational).instances.len(), 12);
        assert_eq!(small(SuiteKind::Lemmas).instances.len(), 16);
        // 12 extremal, 3 monomials, 6 Malik, 6 boundary cases
        assert_eq!(small(SuiteKind::Sharpness).instances.len(), 27);
    }

    #[test]
    fn sharpness_suite_passes() {
        let plan = small(SuiteKind::Sharpness);
        let rep = run_suite(&plan.instances, &plan.config).unwrap();
        let bad: Vec<_> = rep.reports.iter().filter(|r| !r.pass).collect();
        assert!(bad.is_empty(), "{bad:?}");
        assert!(rep.counts.evaluated > 0);
    }

    #[test]
    fn identity_and_lemma_suites_pass() {
        for kind in [SuiteKind::Identities, SuiteKind::Lemmas] {
            let plan = small(kind);
            let rep = run_suite(&plan.instances, &plan.config).unwrap();
            assert!(rep.all_passed(), "{kind}");
            assert_eq!(rep.counts.hypotheses_rejected, 0);
        }
    }

    #[test]
    fn rejects_bad_options() {
        let bad_k = PlanOptions { k_values: Some(vec![0.5]), ..PlanOptions::default() };
        assert!(matches!(build_plan(SuiteKind::Rational, &bad_k), Err(Error::Hypothesis(_))));
        let bad_a = PlanOptions { a_values: Some(vec![1.0]), ..PlanOptions::default() };
        assert!(build_plan(SuiteKind::Sharpness, &bad_a).is_err());
    }
}
