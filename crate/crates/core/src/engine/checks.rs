use num_complex::Complex64;

use super::{BetaParam, CheckId, CheckReport, KRadius, PolynomialNorms, RationalNorms, Statement, Tolerances};
use crate::error::{Error, Result};
use crate::norms::NormEstimate;
use crate::poly::Polynomial;
use crate::rational::{CirclePoint, PoleSet, RationalFn};

/// Points closer than this to a zero of `r` are skipped.
pub const ZERO_EXCLUSION: f64 = 1e-8;

/// Relative slack granted to zero moduli in the location hypotheses, so a
/// zero placed on `|z| = k` in floating point still counts as on the circle.
const LOCATION_REL: f64 = 1e-12;

fn scale(rhs: f64) -> f64 {
    rhs.abs().max(1.0)
}

fn zeros_outside(p: &Polynomial, radius: f64) -> bool {
    p.roots().is_some_and(|roots| roots.iter().all(|z| z.norm() >= radius * (1.0 - LOCATION_REL)))
}

fn zeros_inside(p: &Polynomial, radius: f64) -> bool {
    p.roots().is_some_and(|roots| roots.iter().all(|z| z.norm() <= radius * (1.0 + LOCATION_REL)))
}

/// `r = c_n prod (z - z_j) / w` with exactly `n` zeros.
fn full_degree(r: &RationalFn) -> bool {
    r.numerator().degree() == r.n() && !r.numerator().is_zero()
}

fn ensure_clear_of_zeros(r: &RationalFn, z: Complex64) -> Result<()> {
    match r.nearest_zero(z) {
        Some((index, d)) if d < ZERO_EXCLUSION => Err(Error::NearZero { index: Some(index) }),
        Some(_) => Ok(()),
        None => {
            let p = r.numerator();
            let size: f64 = p.coeffs().iter().map(|c| c.norm()).sum();
            if p.eval(z).norm() <= ZERO_EXCLUSION * size {
                Err(Error::NearZero { index: None })
            } else {
                Ok(())
            }
        }
    }
}

fn positive_norm(norm: &NormEstimate) -> Result<f64> {
    if norm.value > 0.0 && norm.value.is_finite() {
        Ok(norm.value)
    } else {
        Err(Error::invalid("the sup-norm must be positive"))
    }
}

/// `(|c_0| - k^n |c_n|) / (|c_0| + k^n |c_n|)` with `c_n` the degree-`n`
/// coefficient.
fn coefficient_ratio(p: &Polynomial, n: usize, k: f64) -> f64 {
    let c0 = p.coeffs()[0].norm();
    let cn = p.coeffs().get(n).map_or(0.0, |c| c.norm());
    let kn = k.powi(n as i32) * cn;
    (c0 - kn) / (c0 + kn)
}

/// Sum of `1/(1+|z_j|)` over the known zeros.
fn reciprocal_zero_sum(p: &Polynomial) -> Result<f64> {
    let roots = p.roots().ok_or_else(|| {
        Error::invalid("the zero-based bound needs the numerator roots; use the coefficient bound instead")
    })?;
    Ok(roots.iter().map(|z| 1.0 / (1.0 + z.norm())).sum())
}

/// Pointwise quantities shared by the log-derivative bounds.
struct Local {
    r_mod: f64,
    /// `z r'(z) / r(z)`.
    log_deriv: Complex64,
    r_prime_mod: f64,
    b_prime: f64,
}

fn local(r: &RationalFn, z: &CirclePoint) -> Result<Local> {
    let (value, deriv) = r.eval_with_derivative(z.z)?;
    Ok(Local {
        r_mod: value.norm(),
        log_deriv: z.z * deriv / value,
        r_prime_mod: deriv.norm(),
        b_prime: r.poles().blaschke_derivative_modulus(z),
    })
}

/// `|z r'(z)/r(z) + beta |B'(z)| / (1+k)|`.
pub fn lhs_theorem21(r: &RationalFn, k: KRadius, beta: BetaParam, z: &CirclePoint) -> Result<f64> {
    ensure_clear_of_zeros(r, z.z)?;
    let l = local(r, z)?;
    Ok(lhs_log_derivative(&l, k.value(), beta))
}

fn lhs_log_derivative(l: &Local, k: f64, beta: BetaParam) -> f64 {
    (l.log_deriv + beta.value() * l.b_prime / (1.0 + k)).norm()
}

/// The zero-based bound
/// `(1/2){|B'| - n rho (k-1)/(k+1) - 2 rho (n/(k+1) - sum 1/(1+|z_j|) - Re(beta)|B'|/(1+k))} ||r||/|r|`
/// with `rho = |r(z)|^2 / ||r||^2`.
pub fn rhs_theorem21(r: &RationalFn, k: KRadius, beta: BetaParam, z: &CirclePoint, norm: &NormEstimate) -> Result<f64> {
    ensure_clear_of_zeros(r, z.z)?;
    let l = local(r, z)?;
    rhs_root_form(r, &l, k.value(), beta, norm)
}

fn rhs_root_form(r: &RationalFn, l: &Local, k: f64, beta: BetaParam, norm: &NormEstimate) -> Result<f64> {
    let sum = reciprocal_zero_sum(r.numerator())?;
    let nr = positive_norm(norm)?;
    let n = r.n() as f64;
    let rho = l.r_mod * l.r_mod / (nr * nr);
    let bp = l.b_prime;
    let inner = n / (k + 1.0) - sum - beta.value().re * bp / (1.0 + k);
    Ok(0.5 * (bp - n * rho * (k - 1.0) / (k + 1.0) - 2.0 * rho * inner) * nr / l.r_mod)
}

fn rhs_root_form_unit(r: &RationalFn, l: &Local, beta: BetaParam, norm: &NormEstimate) -> Result<f64> {
    let sum = reciprocal_zero_sum(r.numerator())?;
    let nr = positive_norm(norm)?;
    let n = r.n() as f64;
    let rho = l.r_mod * l.r_mod / (nr * nr);
    let bp = l.b_prime;
    let inner = n / 2.0 - sum - beta.value().re / 2.0 * bp;
    Ok(0.5 * (bp - 2.0 * rho * inner) * nr / l.r_mod)
}

/// The coefficient bound
/// `(1/2){|B'| - n rho (k-1)/(k+1) - (2 rho/(k+1)) (q - Re(beta)|B'|)} ||r||/|r|`
/// with `q = (|c_0| - k^n |c_n|)/(|c_0| + k^n |c_n|)`.
pub fn rhs_corollary24(r: &RationalFn, k: KRadius, beta: BetaParam, z: &CirclePoint, norm: &NormEstimate) -> Result<f64> {
    ensure_clear_of_zeros(r, z.z)?;
    let l = local(r, z)?;
    rhs_coefficient_form(r, &l, k.value(), beta, norm)
}

fn rhs_coefficient_form(r: &RationalFn, l: &Local, k: f64, beta: BetaParam, norm: &NormEstimate) -> Result<f64> {
    let nr = positive_norm(norm)?;
    let n = r.n() as f64;
    let rho = l.r_mod * l.r_mod / (nr * nr);
    let bp = l.b_prime;
    let q = coefficient_ratio(r.numerator(), r.n(), k);
    Ok(0.5 * (bp - n * rho * (k - 1.0) / (k + 1.0) - 2.0 * rho / (k + 1.0) * (q - beta.value().re * bp)) * nr / l.r_mod)
}

fn rhs_coefficient_form_unit(r: &RationalFn, l: &Local, beta: BetaParam, norm: &NormEstimate) -> Result<f64> {
    let nr = positive_norm(norm)?;
    let rho = l.r_mod * l.r_mod / (nr * nr);
    let bp = l.b_prime;
    let q = coefficient_ratio(r.numerator(), r.n(), 1.0);
    Ok(0.5 * (bp - rho * (q - beta.value().re * bp)) * nr / l.r_mod)
}

fn nan_on_err(v: Result<f64>) -> Result<f64> {
    match v {
        Err(e) if e.is_singular_point() => Err(e),
        Err(_) => Ok(f64::NAN),
        ok => ok,
    }
}

fn finish(id: CheckId, theta: Option<f64>, lhs: f64, rhs: f64, hyp: bool, tol: f64, tols: &Tolerances) -> CheckReport {
    if id.sharp {
        let t = tols.sharp * scale(rhs);
        CheckReport::residual(id, theta, lhs, rhs, lhs - rhs, t, hyp)
    } else {
        CheckReport::inequality(id, theta, lhs, rhs, tol * scale(rhs), hyp)
    }
}

/// Evaluates one rational-function statement at `z`.
///
/// Global statements ignore `z` and report `theta = None`. Points in the
/// excluded neighbourhood of a zero come back as [`Error::NearZero`].
pub fn check_rational(
    id: CheckId,
    r: &RationalFn,
    k: KRadius,
    beta: BetaParam,
    z: &CirclePoint,
    norms: &RationalNorms,
    tols: &Tolerances,
) -> Result<CheckReport> {
    let kv = k.value();
    let norm = &norms.rational;
    let theta = Some(z.theta);
    let rooted_k = full_degree(r) && zeros_outside(r.numerator(), kv);
    let rooted_unit = full_degree(r) && zeros_outside(r.numerator(), 1.0);

    match id.statement {
        Statement::BlaschkeBernstein => {
            let l = local(r, z)?;
            Ok(finish(id, theta, l.r_prime_mod, l.b_prime * norm.value, true, tols.slack, tols))
        }
        Statement::HalfBlaschkeBernstein => {
            let l = local(r, z)?;
            let hyp = zeros_outside(r.numerator(), 1.0);
            Ok(finish(id, theta, l.r_prime_mod, 0.5 * l.b_prime * norm.value, hyp, tols.slack, tols))
        }
        Statement::PrintedZeroFreeBound => {
            let l = local(r, z)?;
            let n = r.n() as f64;
            let nr = norm.value;
            let rhs = 0.5 * (l.b_prime - n * (kv - 1.0) / (kv + 1.0) - l.r_mod * l.r_mod / (nr * nr)) * nr;
            let hyp = zeros_outside(r.numerator(), kv);
            Ok(finish(id, theta, l.r_prime_mod, rhs, hyp, tols.slack, tols))
        }
        Statement::RootBound => {
            ensure_clear_of_zeros(r, z.z)?;
            let l = local(r, z)?;
            let rhs = nan_on_err(rhs_root_form(r, &l, kv, beta, norm))?;
            Ok(finish(id, theta, lhs_log_derivative(&l, kv, beta), rhs, rooted_k, tols.slack, tols))
        }
        Statement::RootBoundUnit => {
            ensure_clear_of_zeros(r, z.z)?;
            let l = local(r, z)?;
            let rhs = nan_on_err(rhs_root_form_unit(r, &l, beta, norm))?;
            Ok(finish(id, theta, lhs_log_derivative(&l, 1.0, beta), rhs, rooted_unit, tols.slack, tols))
        }
        Statement::CoefficientBound => {
            ensure_clear_of_zeros(r, z.z)?;
            let l = local(r, z)?;
            let rhs = nan_on_err(rhs_coefficient_form(r, &l, kv, beta, norm))?;
            Ok(finish(id, theta, lhs_log_derivative(&l, kv, beta), rhs, rooted_k, tols.slack, tols))
        }
        Statement::CoefficientBoundUnit => {
            ensure_clear_of_zeros(r, z.z)?;
            let l = local(r, z)?;
            let rhs = nan_on_err(rhs_coefficient_form_unit(r, &l, beta, norm))?;
            Ok(finish(id, theta, lhs_log_derivative(&l, 1.0, beta), rhs, rooted_unit, tols.slack, tols))
        }
        Statement::Hierarchy => {
            ensure_clear_of_zeros(r, z.z)?;
            let l = local(r, z)?;
            let roots_side = nan_on_err(rhs_root_form(r, &l, kv, beta, norm))?;
            let coeff_side = nan_on_err(rhs_coefficient_form(r, &l, kv, beta, norm))?;
            Ok(finish(id, theta, roots_side, coeff_side, rooted_k, tols.auxiliary, tols))
        }
        Statement::RefinementTerm => {
            let sum = reciprocal_zero_sum(r.numerator()).unwrap_or(f64::NAN);
            let rhs = r.n() as f64 / (kv + 1.0);
            Ok(finish(id, None, sum, rhs, rooted_k, tols.scalar, tols))
        }
        _ => Err(Error::invalid(format!("`{id}` is not a rational-function check"))),
    }
}

/// Evaluates one polynomial statement; the sup-norm statements are global
/// and ignore `z`.
pub fn check_polynomial(
    id: CheckId,
    p: &Polynomial,
    k: KRadius,
    beta: BetaParam,
    z: &CirclePoint,
    norms: &PolynomialNorms,
    tols: &Tolerances,
) -> Result<CheckReport> {
    let kv = k.value();
    let n = p.degree() as f64;
    let np = norms.poly.value;
    let dp = norms.derivative.value;
    match id.statement {
        Statement::Bernstein => Ok(finish(id, None, dp, n * np, true, tols.slack, tols)),
        Statement::ErdosLax => {
            Ok(finish(id, None, dp, 0.5 * n * np, zeros_outside(p, 1.0), tols.slack, tols))
        }
        Statement::Malik => {
            Ok(finish(id, None, dp, n / (1.0 + kv) * np, zeros_outside(p, kv), tols.slack, tols))
        }
        Statement::PolynomialBound | Statement::PolynomialBoundUnit => {
            let unit = id.statement == Statement::PolynomialBoundUnit;
            let kk = if unit { 1.0 } else { kv };
            let value = p.eval(z.z);
            let deriv = p.derivative().eval(z.z);
            let b = beta.value();
            let lhs = (z.z * deriv + n * b * value / (1.0 + kk)).norm();
            let ratio = value.norm_sqr() / (np * np);
            let q = coefficient_ratio(p, p.degree(), kk);
            let rhs = if unit {
                0.5 * np * (n - (q - n * b.re) * ratio)
            } else {
                0.5 * np * (n - 2.0 / (kk + 1.0) * (n * (kk - 1.0) / 2.0 + q - n * b.re) * ratio)
            };
            Ok(finish(id, Some(z.theta), lhs, rhs, zeros_outside(p, kk), tols.slack, tols))
        }
        _ => Err(Error::invalid(format!("`{id}` is not a polynomial check"))),
    }
}

/// Arguments of the auxiliary identities and inequalities.
#[derive(Debug, Clone, Copy)]
pub enum LemmaArgs<'a> {
    PoleSum { poles: &'a PoleSet, z: CirclePoint },
    BlaschkeLogDerivative { poles: &'a PoleSet, z: CirclePoint },
    Unimodular { poles: &'a PoleSet, z: CirclePoint },
    ConjugatePair { r: &'a RationalFn, z: CirclePoint, norm: &'a NormEstimate },
    /// All zeros of `r` in `|z| <= k` with `k <= 1`.
    InteriorLowerBound { r: &'a RationalFn, k: f64, z: CirclePoint },
    HalfPlane { zero: Complex64, z: CirclePoint },
}

impl LemmaArgs<'_> {
    fn statement(&self) -> Statement {
        match self {
            LemmaArgs::PoleSum { .. } => Statement::PoleSumIdentity,
            LemmaArgs::BlaschkeLogDerivative { .. } => Statement::BlaschkeLogDerivative,
            LemmaArgs::Unimodular { .. } => Statement::Unimodular,
            LemmaArgs::ConjugatePair { .. } => Statement::ConjugatePair,
            LemmaArgs::InteriorLowerBound { .. } => Statement::InteriorLowerBound,
            LemmaArgs::HalfPlane { .. } => Statement::HalfPlane,
        }
    }
}

pub fn check_lemma(id: CheckId, args: &LemmaArgs<'_>, tols: &Tolerances) -> Result<CheckReport> {
    if id.statement != args.statement() {
        return Err(Error::invalid(format!("`{id}` does not take {:?} arguments", args.statement())));
    }
    match *args {
        LemmaArgs::PoleSum { poles, z } => {
            let (w, dw) = poles.w_with_derivative(z.z)?;
            let lhs = (z.z * dw / w).re;
            let rhs = (poles.len() as f64 - poles.blaschke_derivative_modulus(&z)) / 2.0;
            Ok(CheckReport::residual(id, Some(z.theta), lhs, rhs, lhs - rhs, tols.identity, true))
        }
        LemmaArgs::BlaschkeLogDerivative { poles, z } => {
            // the residual is the full complex defect, imaginary part included
            let b = poles.blaschke_eval(z.z)?;
            let db = poles.blaschke_derivative(z.z)?;
            let quotient = z.z * db / b;
            let modulus = db.norm();
            let residual = (quotient - modulus).norm();
            Ok(CheckReport::residual(id, Some(z.theta), quotient.re, modulus, residual, tols.log_derivative * modulus, true))
        }
        LemmaArgs::Unimodular { poles, z } => {
            let m = poles.blaschke_eval(z.z)?.norm();
            Ok(CheckReport::residual(id, Some(z.theta), m, 1.0, m - 1.0, tols.unimodular, true))
        }
        LemmaArgs::ConjugatePair { r, z, norm } => {
            let star = r.conjugate_transform();
            let lhs = star.derivative_eval(z.z)?.norm() + r.derivative_eval(z.z)?.norm();
            let rhs = r.poles().blaschke_derivative_modulus(&z) * norm.value;
            Ok(finish(id, Some(z.theta), lhs, rhs, true, tols.auxiliary, tols))
        }
        LemmaArgs::InteriorLowerBound { r, k, z } => {
            let hyp = k > 0.0 && k <= 1.0 && full_degree(r) && zeros_inside(r.numerator(), k);
            let l = local(r, &z)?;
            let n = r.n() as f64;
            // oriented so that `lhs <= rhs` is the claim
            let bound = 0.5 * (l.b_prime + n * (1.0 - k) / (1.0 + k)) * l.r_mod;
            Ok(finish(id, Some(z.theta), bound, l.r_prime_mod, hyp, tols.auxiliary, tols))
        }
        LemmaArgs::HalfPlane { zero, z } => {
            let gap = z.z - zero;
            if gap.norm() < ZERO_EXCLUSION {
                return Err(Error::NearZero { index: Some(0) });
            }
            let lhs = (z.z / gap).re;
            let rhs = 1.0 / (1.0 + zero.norm());
            Ok(finish(id, Some(z.theta), lhs, rhs, zero.norm() >= 1.0 - LOCATION_REL, tols.auxiliary, tols))
        }
    }
}

/// `sum (1 - x_j)/(1 + x_j) <= (1 - prod x_j)/(1 + prod x_j)` for `x_j >= 1`.
pub fn lemma4_scalar(zetas: &[f64], tols: &Tolerances) -> Result<CheckReport> {
    if let Some(bad) = zetas.iter().find(|&&x| !(x >= 1.0) || !x.is_finite()) {
        return Err(Error::hypothesis(format!("every entry must be >= 1, got {bad}")));
    }
    let lhs: f64 = zetas.iter().map(|&x| (1.0 - x) / (1.0 + x)).sum();
    let prod: f64 = zetas.iter().product();
    let rhs = (1.0 - prod) / (1.0 + prod);
    Ok(CheckReport::inequality(CheckId::new(Statement::ProductRatio), None, lhs, rhs, tols.scalar, true))
}
