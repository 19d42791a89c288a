//! Sup-norm of a function on the unit circle.
//!
//! `|f(e^{i theta})|` is sampled on a uniform grid; the largest local maxima
//! of the samples are then polished by golden-section search inside their
//! neighbouring-grid bracket. The accuracy contract is empirical: the suite
//! compares against dense brute-force grids rather than certifying a bound.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::rational::{CirclePoint, RationalFn};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormConfig {
    pub coarse_samples: usize,
    /// How many of the largest local maxima get refined.
    pub refine_top: usize,
    /// Width of the final golden-section bracket, in radians.
    pub refine_tol: f64,
    pub max_refine_iters: usize,
}

impl Default for NormConfig {
    fn default() -> Self {
        NormConfig { coarse_samples: 4096, refine_top: 8, refine_tol: 1e-12, max_refine_iters: 200 }
    }
}

impl NormConfig {
    pub fn validate(&self) -> Result<()> {
        if self.coarse_samples < 16 {
            return Err(Error::invalid("coarse_samples must be at least 16"));
        }
        if !(self.refine_tol > 0.0) || self.max_refine_iters == 0 {
            return Err(Error::invalid("refinement tolerance and iteration budget must be positive"));
        }
        Ok(())
    }
}

/// `value = |f(e^{i argmax_theta})|` approximates `sup |f|` on the circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub argmax_theta: f64,
    pub samples_used: usize,
    pub refined: bool,
}

// ordering used to merge candidates: larger value first, then smaller angle;
// values a few ulps apart count as equal
fn better(a: (f64, f64), b: (f64, f64)) -> bool {
    if (a.0 - b.0).abs() <= 4.0 * f64::EPSILON * a.0.abs().max(b.0.abs()) {
        a.1 < b.1
    } else {
        a.0 > b.0
    }
}

/// Golden-section maximisation of `g` on `[lo, hi]`. Returns the best
/// evaluated `(value, theta)` and the number of evaluations spent.
fn golden_max<F>(g: &F, lo: f64, hi: f64, tol: f64, max_iters: usize) -> Result<((f64, f64), usize)>
where
    F: Fn(f64) -> Result<f64>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = g(x1)?;
    let mut f2 = g(x2)?;
    let mut evals = 2;
    let mut best = if better((f2, x2), (f1, x1)) { (f2, x2) } else { (f1, x1) };
    for _ in 0..max_iters {
        if b - a <= tol {
            break;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = g(x1)?;
            if better((f1, x1), best) {
                best = (f1, x1);
            }
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = g(x2)?;
            if better((f2, x2), best) {
                best = (f2, x2);
            }
        }
        evals += 1;
    }
    Ok((best, evals))
}

/// Estimates `sup_theta |f(e^{i theta})|` where `modulus(theta)` returns
/// `|f(e^{i theta})|`.
pub fn sup_norm_circle<F>(modulus: F, cfg: &NormConfig) -> Result<NormEstimate>
where
    F: Fn(f64) -> Result<f64>,
{
    cfg.validate()?;
    let m = cfg.coarse_samples;
    let step = TAU / m as f64;
    let samples = (0..m).map(|i| modulus(step * i as f64)).collect::<Result<Vec<f64>>>()?;

    let mut best = (samples[0], 0.0);
    for (i, &v) in samples.iter().enumerate() {
        if better((v, step * i as f64), best) {
            best = (v, step * i as f64);
        }
    }

    let mut peaks: Vec<usize> = (0..m)
        .filter(|&i| {
            let v = samples[i];
            v >= samples[(i + m - 1) % m] && v >= samples[(i + 1) % m]
        })
        .collect();
    peaks.sort_by(|&i, &j| samples[j].total_cmp(&samples[i]).then(i.cmp(&j)));
    peaks.truncate(cfg.refine_top);

    let mut used = m;
    for &i in &peaks {
        let centre = step * i as f64;
        let (cand, evals) = golden_max(&modulus, centre - step, centre + step, cfg.refine_tol, cfg.max_refine_iters)?;
        used += evals;
        let cand = (cand.0, CirclePoint::new(cand.1).theta);
        if better(cand, best) {
            best = cand;
        }
    }

    Ok(NormEstimate {
        value: best.0,
        argmax_theta: CirclePoint::new(best.1).theta,
        samples_used: used,
        refined: !peaks.is_empty(),
    })
}

pub fn rational_norm(r: &RationalFn, cfg: &NormConfig) -> Result<NormEstimate> {
    sup_norm_circle(|t| Ok(r.eval(CirclePoint::new(t).z)?.norm()), cfg)
}

pub fn polynomial_norm(p: &Polynomial, cfg: &NormConfig) -> Result<NormEstimate> {
    sup_norm_circle(|t| Ok(p.eval(CirclePoint::new(t).z).norm()), cfg)
}

/// `(||r||, ||p||)` for `r = p / w`.
pub fn norm_pair(r: &RationalFn, cfg: &NormConfig) -> Result<(NormEstimate, NormEstimate)> {
    Ok((rational_norm(r, cfg)?, polynomial_norm(r.numerator(), cfg)?))
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::rational::PoleSet;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unimodular_monomial() {
        let z5 = Polynomial::monomial(5, c(1.0, 0.0)).unwrap();
        let est = polynomial_norm(&z5, &NormConfig::default()).unwrap();
        assert!((est.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn shifted_cube() {
        let p = Polynomial::from_roots(&[c(-2.0, 0.0); 3], c(1.0, 0.0)).unwrap();
        let est = polynomial_norm(&p, &NormConfig::default()).unwrap();
        assert!((est.value - 27.0).abs() < 1e-12);
        assert!(est.argmax_theta.min(TAU - est.argmax_theta) < 1e-6);
        assert!(est.refined);
    }

    #[test]
    fn simple_rational_pair() {
        let p = Polynomial::from_roots(&[c(-2.0, 0.0)], c(1.0, 0.0)).unwrap();
        let r = RationalFn::new(p, PoleSet::repeated(3.0, 1).unwrap()).unwrap();
        let (nr, np) = norm_pair(&r, &NormConfig::default()).unwrap();
        assert!((nr.value - 1.5).abs() < 1e-14);
        assert_eq!(nr.argmax_theta, 0.0);
        assert!((np.value - 3.0).abs() < 1e-14);
    }

    #[test]
    fn constant_numerator() {
        let r = RationalFn::new(Polynomial::from_real_coeffs(&[1.0]), PoleSet::repeated(2.0, 1).unwrap()).unwrap();
        let (nr, np) = norm_pair(&r, &NormConfig::default()).unwrap();
        assert!((nr.value - 1.0).abs() < 1e-14);
        assert_eq!(nr.argmax_theta, 0.0);
        assert_eq!(np.value, 1.0);
    }

    #[test]
    fn witness_reproduces_value_off_grid() {
        // maximum at theta = 1 (not a grid angle)
        let root = Complex64::from_polar(1.7, 1.0 + std::f64::consts::PI);
        let p = Polynomial::from_roots(&[root], c(0.0, 2.0)).unwrap();
        let cfg = NormConfig::default();
        let est = polynomial_norm(&p, &cfg).unwrap();
        let again = p.eval(CirclePoint::new(est.argmax_theta).z).norm();
        assert!((again - est.value).abs() <= 1e-12 * est.value);
        assert!((est.value - 2.0 * 2.7).abs() < 1e-12);
        assert!((est.argmax_theta - 1.0).abs() < 1e-6);
        assert!(est.samples_used > cfg.coarse_samples);
    }

    #[test]
    fn refinement_never_lowers_value() {
        let root = Complex64::from_polar(1.3, 0.123);
        let p = Polynomial::from_roots(&[root, c(0.2, 2.0)], c(1.0, 0.0)).unwrap();
        let coarse = NormConfig { refine_top: 0, ..NormConfig::default() };
        let a = polynomial_norm(&p, &coarse).unwrap();
        let b = polynomial_norm(&p, &NormConfig::default()).unwrap();
        assert!(!a.refined);
        assert!(b.value >= a.value);
    }

    #[test]
    fn bad_config() {
        let cfg = NormConfig { coarse_samples: 8, ..NormConfig::default() };
        assert!(polynomial_norm(&Polynomial::zero(), &cfg).is_err());
        let cfg = NormConfig { refine_tol: 0.0, ..NormConfig::default() };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn json_shape() {
        let est = NormEstimate { value: 1.5, argmax_theta: 0.0, samples_used: 4096, refined: true };
        assert_eq!(
            serde_json::to_string(&est).unwrap(),
            r#"{"value":1.5,"argmax_theta":0.0,"samples_used":4096,"refined":true}"#
        );
    }
}
