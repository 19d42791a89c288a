//! Evaluation of both sides of every inequality and identity, and the
//! suite runner that sweeps them over instances and circle grids.

mod checks;
mod suite;
mod sweep;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::NormEstimate;

pub use checks::{
    check_lemma, check_polynomial, check_rational, lemma4_scalar, lhs_theorem21, rhs_corollary24, rhs_theorem21,
    LemmaArgs, ZERO_EXCLUSION,
};
pub use suite::{run_suite, CheckSummary, Counts, Instance, SuiteConfig, SuiteReport, Subject};
pub use sweep::{polar_beta_grid, sweep_beta, SweepRow};

/// The free complex parameter of the log-derivative bounds, `|beta| <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Complex64", into = "Complex64")]
pub struct BetaParam(Complex64);

impl BetaParam {
    pub fn new(beta: Complex64) -> Result<Self> {
        if !beta.is_finite() || beta.norm() > 1.0 + 1e-12 {
            return Err(Error::hypothesis(format!("|beta| = {} exceeds 1", beta.norm())));
        }
        Ok(BetaParam(beta))
    }

    pub fn real(re: f64) -> Result<Self> {
        Self::new(Complex64::new(re, 0.0))
    }

    pub fn zero() -> Self {
        BetaParam(Complex64::new(0.0, 0.0))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }
}

impl TryFrom<Complex64> for BetaParam {
    type Error = Error;

    fn try_from(beta: Complex64) -> Result<Self> {
        BetaParam::new(beta)
    }
}

impl From<BetaParam> for Complex64 {
    fn from(beta: BetaParam) -> Self {
        beta.0
    }
}

/// Radius `k >= 1` of the zero-free disk.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct KRadius(f64);

impl KRadius {
    pub fn new(k: f64) -> Result<Self> {
        if !k.is_finite() || k < 1.0 {
            return Err(Error::hypothesis(format!("k = {k} must be a finite number >= 1")));
        }
        Ok(KRadius(k))
    }

    pub fn unit() -> Self {
        KRadius(1.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for KRadius {
    type Error = Error;

    fn try_from(k: f64) -> Result<Self> {
        KRadius::new(k)
    }
}

impl From<KRadius> for f64 {
    fn from(k: KRadius) -> Self {
        k.0
    }
}

/// The statements the engine can check. String identifiers are part of the
/// report format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Statement {
    /// `||p'|| <= n ||p||`.
    Bernstein,
    /// `||p'|| <= (n/2) ||p||` for zeros in `|z| >= 1`.
    ErdosLax,
    /// `||p'|| <= n/(1+k) ||p||` for zeros in `|z| >= k`.
    Malik,
    /// `|r'(z)| <= |B'(z)| ||r||`.
    BlaschkeBernstein,
    /// `|r'(z)| <= |B'(z)| ||r|| / 2` for zeros in `|z| >= 1`.
    HalfBlaschkeBernstein,
    /// The zero-free bound with unweighted correction terms, as printed in
    /// the source. Known not to hold; always quarantined.
    PrintedZeroFreeBound,
    /// Log-derivative bound using the zero moduli.
    RootBound,
    /// [`Statement::RootBound`] written out at `k = 1`.
    RootBoundUnit,
    /// Log-derivative bound using only `|c_0|` and `|c_n|`.
    CoefficientBound,
    /// [`Statement::CoefficientBound`] written out at `k = 1`.
    CoefficientBoundUnit,
    /// Polynomial form `|z p' + n beta p / (1+k)| <= ...`.
    PolynomialBound,
    /// [`Statement::PolynomialBound`] written out at `k = 1`.
    PolynomialBoundUnit,
    /// The root bound never exceeds the coefficient bound.
    Hierarchy,
    /// `sum 1/(1+|z_j|) <= n/(1+k)`.
    RefinementTerm,
    /// `Re(z w'/w) = (n - |B'|)/2` on the circle.
    PoleSumIdentity,
    /// `z B'/B = |B'|` on the circle.
    BlaschkeLogDerivative,
    /// `|B| = 1` on the circle.
    Unimodular,
    /// `|(r*)'| + |r'| <= |B'| ||r||`.
    ConjugatePair,
    /// `sum (1-x)/(1+x) <= (1 - prod x)/(1 + prod x)` for `x >= 1`.
    ProductRatio,
    /// `|r'| >= (|B'| + n(1-k)/(1+k)) |r| / 2` for zeros in `|z| <= k <= 1`.
    InteriorLowerBound,
    /// `Re(z/(z - z_j)) <= 1/(1+|z_j|)` for `|z_j| >= 1`.
    HalfPlane,
}

impl Statement {
    pub const ALL: [Statement; 21] = [
        Statement::Bernstein,
        Statement::ErdosLax,
        Statement::Malik,
        Statement::BlaschkeBernstein,
        Statement::HalfBlaschkeBernstein,
        Statement::PrintedZeroFreeBound,
        Statement::RootBound,
        Statement::RootBoundUnit,
        Statement::CoefficientBound,
        Statement::CoefficientBoundUnit,
        Statement::PolynomialBound,
        Statement::PolynomialBoundUnit,
        Statement::Hierarchy,
        Statement::RefinementTerm,
        Statement::PoleSumIdentity,
        Statement::BlaschkeLogDerivative,
        Statement::Unimodular,
        Statement::ConjugatePair,
        Statement::ProductRatio,
        Statement::InteriorLowerBound,
        Statement::HalfPlane,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Statement::Bernstein => "bernstein",
            Statement::ErdosLax => "erdos_lax",
            Statement::Malik => "malik",
            Statement::BlaschkeBernstein => "lmr14",
            Statement::HalfBlaschkeBernstein => "lmr15",
            Statement::PrintedZeroFreeBound => "thmF",
            Statement::RootBound => "thm21",
            Statement::RootBoundUnit => "cor22",
            Statement::CoefficientBound => "cor24",
            Statement::CoefficientBoundUnit => "cor26",
            Statement::PolynomialBound => "cor27",
            Statement::PolynomialBoundUnit => "cor29",
            Statement::Hierarchy => "hierarchy_21_24",
            Statement::RefinementTerm => "refinement_term",
            Statement::PoleSumIdentity => "lemma1",
            Statement::BlaschkeLogDerivative => "lemma2",
            Statement::Unimodular => "blaschke_unimodular",
            Statement::ConjugatePair => "lemma3",
            Statement::ProductRatio => "lemma4",
            Statement::InteriorLowerBound => "lemma5",
            Statement::HalfPlane => "halfplane",
        }
    }

    /// Checks whose failures never influence the verdict.
    pub fn quarantined(self) -> bool {
        matches!(self, Statement::PrintedZeroFreeBound)
    }

    pub fn is_identity(self) -> bool {
        matches!(self, Statement::PoleSumIdentity | Statement::BlaschkeLogDerivative | Statement::Unimodular)
    }

    pub fn depends_on_beta(self) -> bool {
        matches!(
            self,
            Statement::RootBound
                | Statement::RootBoundUnit
                | Statement::CoefficientBound
                | Statement::CoefficientBoundUnit
                | Statement::PolynomialBound
                | Statement::PolynomialBoundUnit
                | Statement::Hierarchy
        )
    }

    /// Checks evaluated once per instance instead of per circle point.
    pub fn is_global(self) -> bool {
        matches!(
            self,
            Statement::Bernstein
                | Statement::ErdosLax
                | Statement::Malik
                | Statement::RefinementTerm
                | Statement::ProductRatio
        )
    }
}

/// A statement, optionally probed for equality instead of inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CheckId {
    pub statement: Statement,
    /// Judge `|lhs - rhs| <= tol` rather than `rhs - lhs >= -tol`.
    pub sharp: bool,
}

impl CheckId {
    pub const fn new(statement: Statement) -> Self {
        CheckId { statement, sharp: false }
    }

    pub const fn sharp(statement: Statement) -> Self {
        CheckId { statement, sharp: true }
    }
}

impl From<Statement> for CheckId {
    fn from(statement: Statement) -> Self {
        CheckId::new(statement)
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sharp {
            write!(f, "sharp_{}", self.statement.id())
        } else {
            f.write_str(self.statement.id())
        }
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (sharp, base) = match s.strip_prefix("sharp_") {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let statement = Statement::ALL
            .into_iter()
            .find(|st| st.id() == base)
            .ok_or_else(|| Error::invalid(format!("unknown check id `{s}`")))?;
        if sharp && statement.is_identity() {
            return Err(Error::invalid(format!("`{base}` is an identity; it has no sharpness probe")));
        }
        Ok(CheckId { statement, sharp })
    }
}

impl Serialize for CheckId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CheckId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Pass thresholds. Entries marked relative are multiplied by
/// `max(1, |rhs|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative slack allowed for the bounds.
    pub slack: f64,
    /// Absolute residual for the pole-sum identity.
    pub identity: f64,
    /// Residual of `z B'/B = |B'|`, relative to `|B'|`.
    pub log_derivative: f64,
    /// Absolute deviation of `|B|` from one.
    pub unimodular: f64,
    /// Relative slack for the auxiliary inequalities (conjugate pair,
    /// interior lower bound, half-plane, hierarchy).
    pub auxiliary: f64,
    /// Relative tolerance under which a probe counts as equality.
    pub sharp: f64,
    /// Absolute slack for scalar checks.
    pub scalar: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            slack: 1e-7,
            identity: 1e-9,
            log_derivative: 1e-10,
            unimodular: 1e-12,
            auxiliary: 1e-9,
            sharp: 1e-8,
            scalar: 1e-12,
        }
    }
}

/// `||r||` and `||p||` for a rational instance, computed once and shared
/// by every check on it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RationalNorms {
    pub rational: NormEstimate,
    pub numerator: NormEstimate,
}

/// `||p||` and `||p'||` for a polynomial instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolynomialNorms {
    pub poly: NormEstimate,
    pub derivative: NormEstimate,
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// One evaluated check. `slack = rhs - lhs` for inequalities (oriented so
/// that `lhs <= rhs` is the claim) and `-|residual|` for identities and
/// sharpness probes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    pub theta: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub hypotheses_ok: bool,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Complex64>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub quarantined: bool,
}

impl CheckReport {
    pub(crate) fn inequality(id: CheckId, theta: Option<f64>, lhs: f64, rhs: f64, tolerance: f64, hypotheses_ok: bool) -> Self {
        let slack = rhs - lhs;
        CheckReport {
            check_id: id.to_string(),
            theta,
            lhs,
            rhs,
            slack,
            hypotheses_ok,
            tolerance,
            pass: hypotheses_ok && slack >= -tolerance,
            instance: None,
            beta: None,
            quarantined: id.statement.quarantined(),
        }
    }

    pub(crate) fn residual(
        id: CheckId,
        theta: Option<f64>,
        lhs: f64,
        rhs: f64,
        residual: f64,
        tolerance: f64,
        hypotheses_ok: bool,
    ) -> Self {
        let slack = -residual.abs();
        CheckReport {
            check_id: id.to_string(),
            theta,
            lhs,
            rhs,
            slack,
            hypotheses_ok,
            tolerance,
            pass: hypotheses_ok && slack >= -tolerance,
            instance: None,
            beta: None,
            quarantined: id.statement.quarantined(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_validation() {
        assert!(BetaParam::new(Complex64::new(2.0, 0.0)).is_err());
        assert!(BetaParam::new(Complex64::from_polar(1.0, 0.3)).is_ok());
        assert!(serde_json::from_str::<BetaParam>("[0.0,1.5]").is_err());
    }

    #[test]
    fn k_validation() {
        assert!(KRadius::new(0.5).is_err());
        assert!(KRadius::new(f64::NAN).is_err());
        assert_eq!(KRadius::new(1.0).unwrap(), KRadius::unit());
    }

    #[test]
    fn check_ids_round_trip() {
        for st in Statement::ALL {
            let id = CheckId::new(st);
            assert_eq!(id.to_string().parse::<CheckId>().unwrap(), id);
            if !st.is_identity() {
                let sharp = CheckId::sharp(st);
                assert_eq!(sharp.to_string().parse::<CheckId>().unwrap(), sharp);
            }
        }
        assert!("lemma9".parse::<CheckId>().is_err());
        assert!("sharp_lemma1".parse::<CheckId>().is_err());
    }

    #[test]
    fn report_json_shape() {
        let r = CheckReport::inequality(CheckId::new(Statement::RootBound), Some(0.0), 1.0, 1.5, 1e-7, true);
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"check_id":"thm21","theta":0.0,"lhs":1.0,"rhs":1.5,"slack":0.5,"hypotheses_ok":true,"tolerance":1e-7,"pass":true}"#
        );
        let q = CheckReport::inequality(CheckId::new(Statement::PrintedZeroFreeBound), None, 2.0, 1.0, 1e-7, true);
        assert!(!q.pass && q.quarantined);
        assert!(serde_json::to_string(&q).unwrap().ends_with(r#""pass":false,"quarantined":true}"#));
    }

    #[test]
    fn rejected_hypotheses_never_pass() {
        let r = CheckReport::inequality(CheckId::new(Statement::Malik), None, 0.0, 1.0, 1e-7, false);
        assert!(!r.pass);
        let r = CheckReport::residual(CheckId::new(Statement::Unimodular), None, 1.0, 1.0, 0.0, 1e-12, false);
        assert!(!r.pass);
    }
}
