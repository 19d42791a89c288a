//! Dense complex polynomials in ascending-power order, optionally carrying
//! their root list.
//!
//! The root list is what lets the checks evaluate zero-dependent bounds
//! (sums over `1/(1+|z_j|)`) and hypothesis gates without a general root
//! finder. Whenever both representations are present they agree to
//! [`ROOT_MATCH_TOL`] relative to the largest coefficient.

use std::ops::Add;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest degree accepted by [`Polynomial::from_roots`].
pub const DEFAULT_MAX_DEGREE: usize = 30;

/// Trailing coefficients below this fraction of the largest modulus are
/// treated as zero when fixing the degree.
pub const TRIM_REL: f64 = 1e-14;

/// Agreement required between a stored root list and the coefficients.
pub const ROOT_MATCH_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolynomialRepr")]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
    roots: Option<Vec<Complex64>>,
}

#[derive(Deserialize)]
struct PolynomialRepr {
    coeffs: Vec<Complex64>,
    #[serde(default)]
    roots: Option<Vec<Complex64>>,
}

impl TryFrom<PolynomialRepr> for Polynomial {
    type Error = Error;

    fn try_from(repr: PolynomialRepr) -> Result<Self> {
        if repr.coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("non-finite coefficient"));
        }
        match repr.roots {
            Some(roots) => Polynomial::with_roots(repr.coeffs, roots),
            None => Ok(Polynomial::new(repr.coeffs)),
        }
    }
}

fn trim(mut coeffs: Vec<Complex64>) -> Vec<Complex64> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() <= TRIM_REL * scale) {
        coeffs.pop();
    }
    if coeffs.is_empty() || scale == 0.0 {
        return vec![Complex64::new(0.0, 0.0)];
    }
    coeffs
}

/// Expands `leading * prod (z - r)` by sequential linear-factor convolution.
fn expand(roots: &[Complex64], leading: Complex64) -> Vec<Complex64> {
    let mut coeffs = Vec::with_capacity(roots.len() + 1);
    coeffs.push(leading);
    for &root in roots {
        // multiply by (z - root): shift up, then subtract root * old
        coeffs.push(Complex64::new(0.0, 0.0));
        for i in (0..coeffs.len()).rev() {
            let lower = if i > 0 { coeffs[i - 1] } else { Complex64::new(0.0, 0.0) };
            coeffs[i] = lower - root * coeffs[i];
        }
    }
    coeffs
}

impl Polynomial {
    /// Builds a polynomial from coefficients `c_0, c_1, ..., c_n`.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Polynomial { coeffs: trim(coeffs), roots: None }
    }

    pub fn from_real_coeffs(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    /// `c * z^n`, with its `n`-fold root at the origin recorded.
    pub fn monomial(n: usize, c: Complex64) -> Result<Self> {
        Self::from_roots(&vec![Complex64::new(0.0, 0.0); n], c)
    }

    /// `leading * prod_j (z - roots[j])`.
    pub fn from_roots(roots: &[Complex64], leading: Complex64) -> Result<Self> {
        Self::from_roots_capped(roots, leading, DEFAULT_MAX_DEGREE)
    }

    pub fn from_roots_capped(roots: &[Complex64], leading: Complex64, max_degree: usize) -> Result<Self> {
        if leading.norm() == 0.0 || !leading.is_finite() {
            return Err(Error::invalid("leading coefficient must be a finite non-zero number"));
        }
        if roots.len() > max_degree {
            return Err(Error::invalid(format!(
                "degree {} exceeds the supported maximum {max_degree}",
                roots.len()
            )));
        }
        if roots.iter().any(|r| !r.is_finite()) {
            return Err(Error::invalid("non-finite root"));
        }
        Ok(Polynomial { coeffs: expand(roots, leading), roots: Some(roots.to_vec()) })
    }

    /// Attaches a root list to explicit coefficients after checking that the
    /// two agree.
    pub fn with_roots(coeffs: Vec<Complex64>, roots: Vec<Complex64>) -> Result<Self> {
        let coeffs = trim(coeffs);
        let degree = coeffs.len() - 1;
        if roots.len() != degree || coeffs[degree].norm() == 0.0 {
            return Err(Error::invalid(format!(
                "root list of length {} does not match degree {degree}",
                roots.len()
            )));
        }
        if degree > DEFAULT_MAX_DEGREE {
            return Err(Error::invalid(format!("degree {degree} exceeds the supported maximum")));
        }
        let expanded = expand(&roots, coeffs[degree]);
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mismatch = expanded
            .iter()
            .zip(&coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if !(mismatch <= ROOT_MATCH_TOL * scale) {
            return Err(Error::invalid(format!(
                "roots do not reproduce the coefficients (relative mismatch {:e})",
                mismatch / scale
            )));
        }
        Ok(Polynomial { coeffs, roots: Some(roots) })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn roots(&self) -> Option<&[Complex64]> {
        self.roots.as_deref()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.degree()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].norm() == 0.0
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `c_n * prod (z - z_j)`, when the roots are known.
    pub fn eval_factored(&self, z: Complex64) -> Option<Complex64> {
        let roots = self.roots.as_ref()?;
        Some(roots.iter().fold(self.leading(), |acc, &r| acc * (z - r)))
    }

    pub fn derivative(&self) -> Polynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, &c)| c * j as f64)
            .collect();
        Polynomial::new(coeffs)
    }

    /// `z^n * conj(p(1/conj z))`: the coefficient list `(conj c_n, ..., conj c_0)`
    /// after padding `p` with zeros up to degree `n`.
    ///
    /// Applying the map twice with the same `n` returns `p` exactly.
    pub fn reverse_conjugate(&self, n: usize) -> Result<Polynomial> {
        if n < self.degree() {
            return Err(Error::invalid(format!(
                "reversal degree {n} is below the polynomial degree {}",
                self.degree()
            )));
        }
        let mut padded = self.coeffs.clone();
        padded.resize(n + 1, Complex64::new(0.0, 0.0));
        let coeffs: Vec<Complex64> = padded.iter().rev().map(|c| c.conj()).collect();

        // zeros of p* are the reflections 1/conj(z_j), plus n - deg(p) at the origin
        let roots = match &self.roots {
            Some(roots) if !self.is_zero() && roots.iter().all(|r| r.norm() > 0.0) => {
                let mut reflected = vec![Complex64::new(0.0, 0.0); n - self.degree()];
                reflected.extend(roots.iter().map(|r| 1.0 / r.conj()));
                Some(reflected)
            }
            _ => None,
        };
        let mut out = Polynomial::new(coeffs);
        if let Some(roots) = roots {
            if roots.len() == out.degree() {
                out.roots = Some(roots);
            }
        }
        Ok(out)
    }

    /// `c * p`; the root list survives for non-zero `c`.
    pub fn scaled(&self, c: Complex64) -> Polynomial {
        let mut out = Polynomial::new(self.coeffs.iter().map(|&x| x * c).collect());
        if c.norm() > 0.0 && out.degree() == self.degree() {
            out.roots = self.roots.clone();
        }
        out
    }

    /// Drops the root list, leaving a coefficient-only polynomial.
    pub fn without_roots(&self) -> Polynomial {
        Polynomial { coeffs: self.coeffs.clone(), roots: None }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, other: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                self.coeffs.get(i).copied().unwrap_or_default() + other.coeffs.get(i).copied().unwrap_or_default()
            })
            .collect();
        Polynomial::new(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn from_roots_examples() {
        let p = Polynomial::from_roots(&[c(-2.0, 0.0)], c(1.0, 0.0)).unwrap();
        assert_eq!(p.coeffs(), &[c(2.0, 0.0), c(1.0, 0.0)]);

        let p = Polynomial::from_roots(&[], c(5.0, 0.0)).unwrap();
        assert_eq!(p.coeffs(), &[c(5.0, 0.0)]);
        assert_eq!(p.degree(), 0);

        let p = Polynomial::from_roots(&[c(1.0, 1.0), c(1.0, -1.0)], c(1.0, 0.0)).unwrap();
        assert_eq!(p.coeffs(), &[c(2.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn zero_leading_rejected() {
        let err = Polynomial::from_roots(&[c(1.0, 0.0)], c(0.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn degree_cap() {
        let roots = vec![c(1.0, 0.0); 31];
        assert!(Polynomial::from_roots(&roots, c(1.0, 0.0)).is_err());
        assert!(Polynomial::from_roots_capped(&roots, c(1.0, 0.0), 40).is_ok());
    }

    #[test]
    fn horner_examples() {
        let p = Polynomial::from_real_coeffs(&[2.0, -2.0, 1.0]);
        assert_eq!(p.eval(c(1.0, 0.0)), c(1.0, 0.0));
        let cube = Polynomial::from_real_coeffs(&[8.0, 12.0, 6.0, 1.0]);
        assert_eq!(cube.eval(c(1.0, 0.0)), c(27.0, 0.0));
    }

    #[test]
    fn derivative_examples() {
        let cube = Polynomial::from_real_coeffs(&[8.0, 12.0, 6.0, 1.0]);
        assert_eq!(cube.derivative(), Polynomial::from_real_coeffs(&[12.0, 12.0, 3.0]));

        let constant = Polynomial::from_real_coeffs(&[5.0]);
        assert!(constant.derivative().is_zero());

        let z7 = Polynomial::monomial(7, c(1.0, 0.0)).unwrap();
        let d = z7.derivative();
        assert_eq!(d.degree(), 6);
        assert_eq!(d.leading(), c(7.0, 0.0));
        assert!(d.coeffs()[..6].iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn trailing_noise_trimmed() {
        let p = Polynomial::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(1e-16, 0.0)]);
        assert_eq!(p.degree(), 1);
        assert!(Polynomial::new(vec![c(0.0, 0.0); 4]).is_zero());
    }

    #[test]
    fn reverse_conjugate_examples() {
        let p = Polynomial::from_real_coeffs(&[2.0, 1.0]);
        assert_eq!(p.reverse_conjugate(1).unwrap(), Polynomial::from_real_coeffs(&[1.0, 2.0]));

        let z5 = Polynomial::monomial(5, c(1.0, 0.0)).unwrap();
        let rc = z5.reverse_conjugate(5).unwrap();
        assert_eq!(rc.coeffs(), &[c(1.0, 0.0)]);

        let q = Polynomial::new(vec![c(1.0, 2.0), c(0.5, -1.0)]);
        assert_eq!(
            q.reverse_conjugate(3).unwrap().coeffs(),
            &[c(0.0, 0.0), c(0.0, 0.0), c(0.5, 1.0), c(1.0, -2.0)]
        );
        assert!(q.reverse_conjugate(0).is_err());
    }

    #[test]
    fn reverse_conjugate_reflects_roots() {
        let p = Polynomial::from_roots(&[c(2.0, 1.0), c(-3.0, 0.5)], c(0.5, 0.5)).unwrap();
        let star = p.reverse_conjugate(3).unwrap();
        let roots = star.roots().expect("reflected roots");
        assert_eq!(roots.len(), 3);
        for &r in roots {
            assert!(star.eval(r).norm() < 1e-12);
        }
    }

    #[test]
    fn with_roots_validates() {
        let coeffs = vec![c(2.0, 0.0), c(1.0, 0.0)];
        assert!(Polynomial::with_roots(coeffs.clone(), vec![c(-2.0, 0.0)]).is_ok());
        assert!(Polynomial::with_roots(coeffs.clone(), vec![c(-2.1, 0.0)]).is_err());
        assert!(Polynomial::with_roots(coeffs, vec![]).is_err());
    }

    #[test]
    fn json_shape() {
        let p = Polynomial::from_roots(&[c(-2.0, 0.0)], c(1.0, 0.0)).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"coeffs":[[2.0,0.0],[1.0,0.0]],"roots":[[-2.0,0.0]]}"#);
        let back: Polynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);

        let bare: Polynomial = serde_json::from_str(r#"{"coeffs":[[1,0],[0,1]],"roots":null}"#).unwrap();
        assert_eq!(bare.roots(), None);
        assert!(serde_json::from_str::<Polynomial>(r#"{"coeffs":[[2,0],[1,0]],"roots":[[5,0]]}"#).is_err());
    }
}
