//! Seeded admissible instances and the known equality cases.
//!
//! Every generator draws from a `ChaCha8Rng` seeded with the 64-bit seed
//! it is given, so instances are reproducible across platforms. Derived
//! streams come from [`split_seed`].

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Polynomial, DEFAULT_MAX_DEGREE};
use crate::rational::{CirclePoint, PoleSet, RationalFn};

/// Minimum separation between a generated zero and any pole.
pub const COLLISION_RADIUS: f64 = 1e-9;

const MAX_RESAMPLES: usize = 64;

/// Derives the seed of item `index` in stream `stream` (splitmix64 over
/// the mixed triple), so items can be generated in any order or in
/// parallel and still match a sequential run.
pub fn split_seed(base: u64, stream: u64, index: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    mix(mix(mix(base) ^ stream) ^ index)
}

pub fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.gen::<f64>()
}

/// A point with modulus uniform in `[lo, hi]` and uniform argument.
fn shell_point(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Complex64 {
    let modulus = uniform(rng, lo, hi);
    Complex64::from_polar(modulus, uniform(rng, 0.0, TAU))
}

/// Parameters of a random admissible instance: `n` zeros with modulus in
/// `zero_shell` (so `|z_j| >= k`) and `n` poles with modulus in
/// `pole_shell`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub n: usize,
    pub k: f64,
    pub zero_shell: [f64; 2],
    pub pole_margin: f64,
    pub pole_shell: [f64; 2],
    /// Probability that a zero is placed exactly on `|z| = k`.
    #[serde(default)]
    pub boundary_prob: f64,
    pub seed: u64,
}

impl InstanceSpec {
    pub const DEFAULT_WIDTH: f64 = 1.0;
    pub const DEFAULT_POLE_MARGIN: f64 = 0.5;

    /// Default shells `[k, k+1]` and `[1.5, 2.5]`.
    pub fn new(n: usize, k: f64, seed: u64) -> Self {
        let margin = Self::DEFAULT_POLE_MARGIN;
        InstanceSpec {
            n,
            k,
            zero_shell: [k, k + Self::DEFAULT_WIDTH],
            pole_margin: margin,
            pole_shell: [1.0 + margin, 1.0 + margin + Self::DEFAULT_WIDTH],
            boundary_prob: 0.0,
            seed,
        }
    }

    /// Puts every zero on `|z| = k`.
    pub fn on_boundary(mut self) -> Self {
        self.boundary_prob = 1.0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ordered = |s: [f64; 2]| s[0].is_finite() && s[1].is_finite() && s[0] <= s[1];
        if self.n == 0 || self.n > DEFAULT_MAX_DEGREE {
            return Err(Error::invalid(format!("n = {} must lie in 1..={DEFAULT_MAX_DEGREE}", self.n)));
        }
        if !self.k.is_finite() || self.k < 1.0 {
            return Err(Error::hypothesis(format!("k = {} must be >= 1", self.k)));
        }
        if !(self.pole_margin > 0.0) {
            return Err(Error::invalid("pole margin must be positive"));
        }
        if !ordered(self.zero_shell) || self.zero_shell[0] < self.k {
            return Err(Error::invalid("zero shell must be an ordered interval starting at or beyond k"));
        }
        if !ordered(self.pole_shell) || self.pole_shell[0] < 1.0 + self.pole_margin {
            return Err(Error::invalid("pole shell must be an ordered interval starting at or beyond 1 + margin"));
        }
        if !(0.0..=1.0).contains(&self.boundary_prob) {
            return Err(Error::invalid("boundary probability must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// Draws `n` poles with modulus in `shell`.
pub fn gen_pole_set(n: usize, shell: [f64; 2], seed: u64) -> Result<PoleSet> {
    let mut rng = rng_from(seed);
    PoleSet::new((0..n).map(|_| shell_point(&mut rng, shell[0], shell[1])).collect())
}

fn draw_zeros(
    rng: &mut ChaCha8Rng,
    n: usize,
    shell: [f64; 2],
    boundary: Option<(f64, f64)>,
    poles: &PoleSet,
) -> Result<Vec<Complex64>> {
    let mut zeros = Vec::with_capacity(n);
    for _ in 0..n {
        let mut attempt = 0;
        let zero = loop {
            let candidate = match boundary {
                Some((prob, radius)) if rng.gen::<f64>() < prob => Complex64::from_polar(radius, uniform(rng, 0.0, TAU)),
                _ => shell_point(rng, shell[0], shell[1]),
            };
            if poles.poles().iter().all(|a| (candidate - a).norm() >= COLLISION_RADIUS) {
                break candidate;
            }
            attempt += 1;
            if attempt >= MAX_RESAMPLES {
                return Err(Error::invalid("could not place a zero away from the poles"));
            }
        };
        zeros.push(zero);
    }
    Ok(zeros)
}

fn unimodular(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(1.0, uniform(rng, 0.0, TAU))
}

/// A random member of the class with all zeros in `|z| >= k`.
pub fn gen_instance(spec: &InstanceSpec) -> Result<RationalFn> {
    spec.validate()?;
    let mut rng = rng_from(spec.seed);
    let leading = unimodular(&mut rng);
    let poles =
        PoleSet::new((0..spec.n).map(|_| shell_point(&mut rng, spec.pole_shell[0], spec.pole_shell[1])).collect())?;
    let zeros = draw_zeros(&mut rng, spec.n, spec.zero_shell, Some((spec.boundary_prob, spec.k)), &poles)?;
    RationalFn::new(Polynomial::from_roots(&zeros, leading)?, poles)
}

/// A random rational function with zero moduli in `zero_shell` and pole
/// moduli in `pole_shell`, with no constraint tying the zeros to any `k`.
pub fn gen_shell_instance(n: usize, zero_shell: [f64; 2], pole_shell: [f64; 2], seed: u64) -> Result<RationalFn> {
    if n == 0 || n > DEFAULT_MAX_DEGREE {
        return Err(Error::invalid(format!("n = {n} must lie in 1..={DEFAULT_MAX_DEGREE}")));
    }
    if !(zero_shell[0] >= 0.0 && zero_shell[0] <= zero_shell[1] && zero_shell[1].is_finite()) {
        return Err(Error::invalid("zero shell must be an ordered interval of moduli"));
    }
    let mut rng = rng_from(seed);
    let leading = unimodular(&mut rng);
    let poles = PoleSet::new((0..n).map(|_| shell_point(&mut rng, pole_shell[0], pole_shell[1])).collect())?;
    let zeros = draw_zeros(&mut rng, n, zero_shell, None, &poles)?;
    RationalFn::new(Polynomial::from_roots(&zeros, leading)?, poles)
}

/// A random member with all `n` zeros in the closed disk `|z| <= radius`,
/// `radius <= 1`.
pub fn gen_interior_instance(n: usize, radius: f64, pole_shell: [f64; 2], seed: u64) -> Result<RationalFn> {
    if !(radius > 0.0 && radius <= 1.0) {
        return Err(Error::invalid(format!("interior radius {radius} must lie in (0, 1]")));
    }
    gen_shell_instance(n, [0.0, radius], pole_shell, seed)
}

/// `r = ((z + k)/(z - a))^n`, equality case of the log-derivative bounds
/// at `z = 1` with `beta = 0`.
pub fn extremal_instance(n: usize, k: f64, a: f64) -> Result<RationalFn> {
    if !(a > 1.0) {
        return Err(Error::invalid(format!("pole a = {a} must exceed 1")));
    }
    if !(k >= 1.0) || !k.is_finite() {
        return Err(Error::invalid(format!("k = {k} must be >= 1")));
    }
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let numerator = Polynomial::from_roots(&vec![Complex64::new(-k, 0.0); n], Complex64::new(1.0, 0.0))?;
    RationalFn::new(numerator, PoleSet::repeated(a, n)?)
}

/// Poles `(2 + j/2) e^{2 pi i j / n}` used when no pole set is supplied.
pub fn default_poles(n: usize) -> Result<PoleSet> {
    PoleSet::new(
        (0..n)
            .map(|j| Complex64::from_polar(2.0 + 0.5 * j as f64, TAU * j as f64 / n as f64))
            .collect(),
    )
}

/// Solutions of `B(z) = target` on the unit circle for unimodular `target`.
///
/// The argument of `B(e^{i theta})` increases strictly (at rate `|B'|`)
/// and winds `n` times, so there are exactly `n` solutions, bracketed on
/// a grid fine enough that the phase moves less than a quarter turn per
/// step and then bisected.
pub fn circle_preimages(poles: &PoleSet, target: Complex64) -> Result<Vec<Complex64>> {
    let speed_bound: f64 = poles.poles().iter().map(|a| (a.norm() + 1.0) / (a.norm() - 1.0)).sum();
    let m = ((8.0 * speed_bound).ceil() as usize).max(4096);
    let unit = target / target.norm();
    let phase = |theta: f64| -> Result<f64> { Ok((poles.blaschke_eval(CirclePoint::new(theta).z)? * unit.conj()).arg()) };

    let step = TAU / m as f64;
    let mut roots = Vec::new();
    let mut prev = phase(0.0)?;
    for i in 1..=m {
        let t = step * i as f64;
        let cur = phase(t)?;
        if prev < 0.0 && cur >= 0.0 && cur - prev < PI {
            let (mut lo, mut hi) = (t - step, t);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if phase(mid)? < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(CirclePoint::new(hi).z);
        }
        prev = cur;
    }
    if roots.len() != poles.len() {
        return Err(Error::invalid(format!("found {} circle preimages, expected {}", roots.len(), poles.len())));
    }
    Ok(roots)
}

/// `u B + v` with unimodular `u`, `v`; all of its zeros lie on the circle.
pub fn shifted_blaschke(poles: &PoleSet, u: Complex64, v: Complex64) -> Result<RationalFn> {
    let w = Polynomial::from_roots_capped(poles.poles(), Complex64::new(1.0, 0.0), usize::MAX)?;
    let numerator = &poles.blaschke_numerator().scaled(u) + &w.scaled(v);
    let roots = circle_preimages(poles, -v / u)?;
    RationalFn::new(Polynomial::with_roots(numerator.coeffs().to_vec(), roots)?, poles.clone())
}

/// The equality cases `r = B` and `r = B + 1`.
pub fn boundary_cases(poles: &PoleSet) -> Result<Vec<RationalFn>> {
    let one = Complex64::new(1.0, 0.0);
    Ok(vec![RationalFn::blaschke(poles), shifted_blaschke(poles, one, one)?])
}

/// A batch of generated instances together with the parameters that produced
/// them; instance `i` uses seed `split_seed(spec.seed, 0, i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub spec: InstanceSpec,
    pub instances: Vec<RationalFn>,
}

impl InstanceFile {
    pub fn generate(spec: &InstanceSpec, count: usize) -> Result<Self> {
        spec.validate()?;
        let instances = (0..count as u64)
            .map(|i| gen_instance(&InstanceSpec { seed: split_seed(spec.seed, 0, i), ..spec.clone() }))
            .collect::<Result<Vec<_>>>()?;
        Ok(InstanceFile { spec: spec.clone(), instances })
    }
}
