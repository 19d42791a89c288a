//! Rational functions `r = p / w` with prescribed poles outside the closed
//! unit disk, their Blaschke products, and the conjugate transform `r*`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// Poles must satisfy `|a| > 1 + POLE_MARGIN`.
pub const POLE_MARGIN: f64 = 1e-9;

/// Evaluation is refused closer than this to a pole.
pub const POLE_EXCLUSION: f64 = 1e-12;

/// Numerator roots may not sit closer than this to a pole.
pub const ROOT_POLE_SEPARATION: f64 = 1e-12;

/// The prescribed poles `a_1, ..., a_n`, all in `|z| > 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct PoleSet {
    poles: Vec<Complex64>,
}

impl TryFrom<Vec<Complex64>> for PoleSet {
    type Error = Error;

    fn try_from(poles: Vec<Complex64>) -> Result<Self> {
        PoleSet::new(poles)
    }
}

impl From<PoleSet> for Vec<Complex64> {
    fn from(set: PoleSet) -> Self {
        set.poles
    }
}

impl PoleSet {
    pub fn new(poles: Vec<Complex64>) -> Result<Self> {
        if poles.is_empty() {
            return Err(Error::invalid("a pole set needs at least one pole"));
        }
        for (j, a) in poles.iter().enumerate() {
            if !a.is_finite() {
                return Err(Error::invalid(format!("pole #{j} is not finite")));
            }
            if a.norm() <= 1.0 + POLE_MARGIN {
                return Err(Error::hypothesis(format!(
                    "pole #{j} = {a} has modulus {} <= 1 + {POLE_MARGIN:e}",
                    a.norm()
                )));
            }
        }
        Ok(PoleSet { poles })
    }

    /// `n` copies of the real pole `a`.
    pub fn repeated(a: f64, n: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(a, 0.0); n])
    }

    pub fn poles(&self) -> &[Complex64] {
        &self.poles
    }

    pub fn len(&self) -> usize {
        self.poles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poles.is_empty()
    }

    fn check_clear(&self, z: Complex64) -> Result<()> {
        for (index, a) in self.poles.iter().enumerate() {
            let distance = (z - a).norm();
            if distance < POLE_EXCLUSION {
                return Err(Error::NearPole { index, distance });
            }
        }
        Ok(())
    }

    /// `w(z) = prod (z - a_j)`.
    pub fn w_eval(&self, z: Complex64) -> Complex64 {
        self.poles.iter().fold(Complex64::new(1.0, 0.0), |acc, &a| acc * (z - a))
    }

    /// `(w(z), w'(z))`, the derivative by the logarithmic rule.
    pub fn w_with_derivative(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        self.check_clear(z)?;
        let w = self.w_eval(z);
        let log_deriv: Complex64 = self.poles.iter().map(|&a| 1.0 / (z - a)).sum();
        Ok((w, w * log_deriv))
    }

    /// `B(z) = prod (1 - conj(a_j) z) / (z - a_j)`.
    pub fn blaschke_eval(&self, z: Complex64) -> Result<Complex64> {
        self.check_clear(z)?;
        Ok(self
            .poles
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, &a| acc * blaschke_factor(a, z)))
    }

    /// `B'(z)` from the product rule over the factors, using prefix and
    /// suffix products so no factor is ever divided out.
    pub fn blaschke_derivative(&self, z: Complex64) -> Result<Complex64> {
        self.check_clear(z)?;
        let factors: Vec<Complex64> = self.poles.iter().map(|&a| blaschke_factor(a, z)).collect();
        let n = factors.len();
        let mut suffix = vec![Complex64::new(1.0, 0.0); n + 1];
        for j in (0..n).rev() {
            suffix[j] = suffix[j + 1] * factors[j];
        }
        let mut prefix = Complex64::new(1.0, 0.0);
        let mut total = Complex64::new(0.0, 0.0);
        for (j, &a) in self.poles.iter().enumerate() {
            // d/dz (1 - conj(a) z)/(z - a) = (|a|^2 - 1)/(z - a)^2
            let d = (a.norm_sqr() - 1.0) / ((z - a) * (z - a));
            total += prefix * d * suffix[j + 1];
            prefix *= factors[j];
        }
        Ok(total)
    }

    /// `|B'(z)|` on the unit circle.
    pub fn blaschke_derivative_modulus(&self, z: &CirclePoint) -> f64 {
        // poles are bounded away from the circle by construction
        self.blaschke_derivative(z.z)
            .expect("pole set is separated from the unit circle")
            .norm()
    }

    /// The numerator `prod (1 - conj(a_j) z)` of `B`, roots `1/conj(a_j)`.
    pub fn blaschke_numerator(&self) -> Polynomial {
        let roots: Vec<Complex64> = self.poles.iter().map(|a| 1.0 / a.conj()).collect();
        let leading = self.poles.iter().fold(Complex64::new(1.0, 0.0), |acc, a| acc * -a.conj());
        Polynomial::from_roots_capped(&roots, leading, usize::MAX).expect("non-zero leading coefficient")
    }
}

fn blaschke_factor(a: Complex64, z: Complex64) -> Complex64 {
    (1.0 - a.conj() * z) / (z - a)
}

/// A point `e^{i theta}` of the unit circle, `theta` in `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirclePoint {
    pub theta: f64,
    pub z: Complex64,
}

impl CirclePoint {
    pub fn new(theta: f64) -> Self {
        let mut theta = theta.rem_euclid(TAU);
        if theta >= TAU {
            theta = 0.0;
        }
        CirclePoint { theta, z: Complex64::from_polar(1.0, theta) }
    }

    /// `count` equally spaced points starting at `theta = 0`.
    pub fn grid(count: usize) -> Vec<CirclePoint> {
        (0..count).map(|i| CirclePoint::new(TAU * i as f64 / count as f64)).collect()
    }
}

/// `r = p / w` with `deg p <= n = |poles|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RationalRepr")]
pub struct RationalFn {
    numerator: Polynomial,
    poles: PoleSet,
}

#[derive(Deserialize)]
struct RationalRepr {
    numerator: Polynomial,
    poles: PoleSet,
}

impl TryFrom<RationalRepr> for RationalFn {
    type Error = Error;

    fn try_from(repr: RationalRepr) -> Result<Self> {
        RationalFn::new(repr.numerator, repr.poles)
    }
}

impl RationalFn {
    /// Validates the pair `(p, poles)` as a member of the class with `n = |poles|`.
    pub fn new(numerator: Polynomial, poles: PoleSet) -> Result<Self> {
        let n = poles.len();
        if numerator.degree() > n {
            return Err(Error::invalid(format!(
                "numerator degree {} exceeds the number of poles {n}",
                numerator.degree()
            )));
        }
        if let Some(roots) = numerator.roots() {
            for (j, a) in poles.poles().iter().enumerate() {
                if roots.iter().any(|r| (r - a).norm() < ROOT_POLE_SEPARATION) {
                    return Err(Error::invalid(format!("a numerator root coincides with pole #{j}")));
                }
            }
        }
        Ok(RationalFn { numerator, poles })
    }

    /// The Blaschke product itself, as the member `prod (1 - conj(a_j) z) / w`.
    pub fn blaschke(poles: &PoleSet) -> Self {
        RationalFn { numerator: poles.blaschke_numerator(), poles: poles.clone() }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn poles(&self) -> &PoleSet {
        &self.poles
    }

    pub fn n(&self) -> usize {
        self.poles.len()
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.poles.check_clear(z)?;
        Ok(self.numerator.eval(z) / self.poles.w_eval(z))
    }

    /// `r'(z) = (p' w - p w') / w^2`.
    pub fn derivative_eval(&self, z: Complex64) -> Result<Complex64> {
        let (w, dw) = self.poles.w_with_derivative(z)?;
        let p = self.numerator.eval(z);
        let dp = self.numerator.derivative().eval(z);
        Ok((dp * w - p * dw) / (w * w))
    }

    /// `(r(z), r'(z))` sharing one pass over the poles.
    pub fn eval_with_derivative(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let (w, dw) = self.poles.w_with_derivative(z)?;
        let p = self.numerator.eval(z);
        let dp = self.numerator.derivative().eval(z);
        Ok((p / w, (dp * w - p * dw) / (w * w)))
    }

    /// `r*(z) = B(z) conj(r(1/conj z))`, realised as `p*/w` with `p*` the
    /// degree-`n` reverse conjugate of the numerator.
    pub fn conjugate_transform(&self) -> RationalFn {
        let numerator = self
            .numerator
            .reverse_conjugate(self.n())
            .expect("numerator degree never exceeds n");
        RationalFn { numerator, poles: self.poles.clone() }
    }

    /// Smallest distance from `z` to a known numerator root.
    pub fn nearest_zero(&self, z: Complex64) -> Option<(usize, f64)> {
        self.numerator.roots()?.iter().enumerate().map(|(j, r)| (j, (z - r).norm())).min_by(|a, b| a.1.total_cmp(&b.1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn simple() -> RationalFn {
        // (z + 2) / (z - 3)
        let p = Polynomial::from_roots(&[c(-2.0, 0.0)], c(1.0, 0.0)).unwrap();
        RationalFn::new(p, PoleSet::repeated(3.0, 1).unwrap()).unwrap()
    }

    #[test]
    fn make_rational_examples() {
        let r = simple();
        assert_eq!(r.n(), 1);

        let err = PoleSet::new(vec![c(0.5, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)));

        let cubic = Polynomial::from_real_coeffs(&[1.0, 0.0, 0.0, 1.0]);
        let err = RationalFn::new(cubic, PoleSet::new(vec![c(2.0, 0.0), c(3.0, 0.0)]).unwrap()).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn pole_margin_enforced() {
        assert!(PoleSet::new(vec![c(1.0 + 1e-10, 0.0)]).is_err());
        assert!(PoleSet::new(vec![c(1.0 + 1e-6, 0.0)]).is_ok());
        assert!(PoleSet::new(vec![]).is_err());
    }

    #[test]
    fn root_on_pole_rejected() {
        let p = Polynomial::from_roots(&[c(3.0, 0.0)], c(1.0, 0.0)).unwrap();
        assert!(RationalFn::new(p, PoleSet::repeated(3.0, 1).unwrap()).is_err());
    }

    #[test]
    fn eval_examples() {
        let one = c(1.0, 0.0);
        assert!((simple().eval(one).unwrap() - c(-1.5, 0.0)).norm() < 1e-15);

        let p = Polynomial::from_roots(&[c(-2.0, 0.0); 2], one).unwrap();
        let sq = RationalFn::new(p, PoleSet::repeated(3.0, 2).unwrap()).unwrap();
        assert!((sq.eval(one).unwrap() - c(2.25, 0.0)).norm() < 1e-15);

        let err = simple().eval(c(3.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::NearPole { index: 0, .. }));
    }

    #[test]
    fn derivative_examples() {
        let d = simple().derivative_eval(c(1.0, 0.0)).unwrap();
        assert!((d - c(-1.25, 0.0)).norm() < 1e-15);

        let r = RationalFn::new(Polynomial::from_real_coeffs(&[1.0]), PoleSet::repeated(2.0, 1).unwrap()).unwrap();
        let d = r.derivative_eval(c(0.0, 0.0)).unwrap();
        assert!((d - c(-0.25, 0.0)).norm() < 1e-15, "{d}");
    }

    #[test]
    fn blaschke_derivative_modulus_examples() {
        let at_one = CirclePoint::new(0.0);
        assert!((PoleSet::repeated(2.0, 1).unwrap().blaschke_derivative_modulus(&at_one) - 3.0).abs() < 1e-14);
        assert!((PoleSet::repeated(3.0, 1).unwrap().blaschke_derivative_modulus(&at_one) - 2.0).abs() < 1e-14);
        assert!((PoleSet::repeated(2.0, 3).unwrap().blaschke_derivative_modulus(&at_one) - 9.0).abs() < 1e-13);
    }

    #[test]
    fn blaschke_at_one() {
        let b = PoleSet::repeated(2.0, 1).unwrap().blaschke_eval(c(1.0, 0.0)).unwrap();
        assert!((b - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn blaschke_unimodular_on_circle() {
        let poles = PoleSet::new(vec![c(2.0, 0.0), c(3.0, 0.0)]).unwrap();
        for pt in CirclePoint::grid(256) {
            let b = poles.blaschke_eval(pt.z).unwrap();
            assert!((b.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn conjugate_of_blaschke_is_one() {
        let poles = PoleSet::new(vec![c(2.0, 0.5), c(-1.5, 1.0), c(0.0, -3.0)]).unwrap();
        let star = RationalFn::blaschke(&poles).conjugate_transform();
        for pt in CirclePoint::grid(32) {
            let v = star.eval(pt.z).unwrap();
            assert!((v - c(1.0, 0.0)).norm() < 1e-12, "{v}");
        }
    }

    #[test]
    fn conjugate_transform_is_involution() {
        let r = simple();
        let back = r.conjugate_transform().conjugate_transform();
        assert_eq!(back.numerator().coeffs(), r.numerator().coeffs());
    }

    #[test]
    fn conjugate_transform_preserves_modulus() {
        let r = simple();
        let star = r.conjugate_transform();
        for pt in CirclePoint::grid(128) {
            // direct definition B(z) conj(r(1/conj z))
            let reflected = r.eval(1.0 / pt.z.conj()).unwrap().conj();
            let direct = r.poles().blaschke_eval(pt.z).unwrap() * reflected;
            let symbolic = star.eval(pt.z).unwrap();
            assert!((direct - symbolic).norm() < 1e-12);
            let (a, b) = (symbolic.norm(), r.eval(pt.z).unwrap().norm());
            assert!((a - b).abs() <= 1e-11 * b);
        }
    }

    #[test]
    fn circle_point_normalises() {
        let p = CirclePoint::new(-0.5);
        assert!(p.theta >= 0.0 && p.theta < TAU);
        assert!((p.z.norm() - 1.0).abs() < 1e-15);
        assert_eq!(CirclePoint::new(TAU).theta, 0.0);
    }

    #[test]
    fn json_shape() {
        let r = simple();
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"{"numerator":{"coeffs":[[2.0,0.0],[1.0,0.0]],"roots":[[-2.0,0.0]]},"poles":[[3.0,0.0]]}"#
        );
        let back: RationalFn = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert!(serde_json::from_str::<RationalFn>(r#"{"numerator":{"coeffs":[[1,0]]},"poles":[[0.5,0]]}"#).is_err());
    }
}
