//! The three function families and their parameters.
//!
//! * `A`: `f(z) = z + b z^{n+1} + a_{n+2} z^{n+2} + ...` with `b >= 0`
//! * `Sigma`: `f(z) = 1/z + b z^n + a_{n+1} z^{n+1} + ...` with `b <= 0`
//! * `H`: `p(z) = 1 + mu z^n + p_{n+1} z^{n+1} + ...` with `mu >= 0`
//!
//! Members are stored as [`LaurentSeries`] whose lowest exponent is 1, -1
//! and 0 respectively.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{LaurentSeries, DEFAULT_ORDER};
use crate::subordination::{SampleGrid, Verdict};
use crate::thresholds::{k_bracket, BETA_ONE_TOL};

/// Minimum modulus the sampler demands of every denominator on its test grid.
pub const MIN_MODULUS: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    Sigma,
    H,
}

impl Family {
    /// Lowest exponent of a member.
    pub fn low_exp(self) -> i32 {
        match self {
            Family::A => 1,
            Family::Sigma => -1,
            Family::H => 0,
        }
    }

    /// Exponent carrying the fixed coefficient.
    pub fn fixed_exp(self, n: u32) -> i32 {
        match self {
            Family::A => n as i32 + 1,
            Family::Sigma | Family::H => n as i32,
        }
    }
}

/// A family together with its fixed coefficient: `b` for `A`/`Sigma`,
/// `mu` for `H`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassSpec {
    pub family: Family,
    pub n: u32,
    pub fixed: f64,
}

impl ClassSpec {
    pub fn new(family: Family, n: u32, fixed: f64) -> Result<Self> {
        let spec = Self { family, n, fixed };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Domain("n must be a positive integer".into()));
        }
        if !self.fixed.is_finite() {
            return Err(Error::Domain(format!("fixed coefficient {}", self.fixed)));
        }
        match self.family {
            Family::A if self.fixed < 0.0 => {
                Err(Error::SignViolation(format!("b = {} must be nonnegative", self.fixed)))
            }
            Family::Sigma if self.fixed > 0.0 => {
                Err(Error::SignViolation(format!("b = {} must be nonpositive", self.fixed)))
            }
            Family::H if self.fixed < 0.0 => {
                Err(Error::SignViolation(format!("mu = {} must be nonnegative", self.fixed)))
            }
            _ => Ok(()),
        }
    }
}

/// The scalar parameters shared by every threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParameterSet {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub n: u32,
    pub mu: f64,
}

impl ParameterSet {
    pub fn new(alpha: f64, beta: f64, gamma: f64, n: u32, mu: f64) -> Result<Self> {
        let p = Self { alpha, beta, gamma, n, mu };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0) || !self.alpha.is_finite() {
            return Err(Error::Domain(format!("alpha = {} must be nonnegative", self.alpha)));
        }
        if !self.beta.is_finite() || (self.beta - 1.0).abs() <= BETA_ONE_TOL {
            return Err(Error::Domain(format!("beta = {} must differ from 1", self.beta)));
        }
        if !self.gamma.is_finite() {
            return Err(Error::Domain(format!("gamma = {}", self.gamma)));
        }
        if self.n == 0 {
            return Err(Error::Domain("n must be a positive integer".into()));
        }
        if !(0.0..=2.0).contains(&self.mu) {
            return Err(Error::Domain(format!("mu = {} outside [0, 2]", self.mu)));
        }
        Ok(())
    }

    /// `n + (2 - mu)/(2 + mu)`, always recomputed.
    pub fn k(&self) -> f64 {
        k_bracket(self.n, self.mu)
    }
}

/// Builds a member from its fixed coefficient and the free coefficients
/// that follow it. The series is valid to `order` terms (grown if the tail
/// does not fit).
pub fn make_member(spec: &ClassSpec, tail: &[Complex64], order: usize) -> Result<LaurentSeries> {
    spec.validate()?;
    let low = spec.family.low_exp();
    let fixed_idx = (spec.family.fixed_exp(spec.n) - low) as usize;
    let order = order.max(fixed_idx + tail.len());
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
    coeffs[0] = Complex64::new(1.0, 0.0);
    coeffs[fixed_idx] += Complex64::new(spec.fixed, 0.0);
    for (i, t) in tail.iter().enumerate() {
        coeffs[fixed_idx + 1 + i] = *t;
    }
    Ok(LaurentSeries::new(low, coeffs))
}

/// Random tail generator settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    /// Coefficient `k` places past the constant term of the normalized
    /// member (`f/z`, `z f` or `p`) satisfies `|a_k| <= decay^k`.
    pub decay: f64,
    /// Radius of the disk on which denominators must stay away from zero.
    pub test_radius: f64,
    pub order: usize,
    /// Tail length is drawn uniformly from `0..=max_tail_terms`.
    pub max_tail_terms: usize,
    pub budget: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self { decay: 0.5, test_radius: 0.95, order: DEFAULT_ORDER, max_tail_terms: 12, budget: 500 }
    }
}

/// Counter-based stream: trial `stream` of run `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn unit_disk_point<R: Rng>(rng: &mut R) -> Complex64 {
    let r = rng.gen::<f64>().sqrt();
    let t = rng.gen::<f64>() * TAU;
    Complex64::from_polar(r, t)
}

/// Polynomials that appear as denominators in premise expressions and must
/// therefore stay away from zero: `f/z` and `f'` for `A`, `z f` and `z^2 f'`
/// for `Sigma`, and `p` for `H`.
pub fn denominators(family: Family, member: &LaurentSeries) -> Vec<LaurentSeries> {
    match family {
        Family::A => vec![member.shift(-1), member.derivative()],
        Family::Sigma => vec![member.shift(1), member.derivative().shift(2)],
        Family::H => vec![member.clone()],
    }
}

fn passes_rejection(family: Family, member: &LaurentSeries, test_radius: f64) -> bool {
    let grid = SampleGrid::default().clipped(test_radius);
    let mut grid = grid;
    if !grid.radii.contains(&test_radius) {
        grid.radii.push(test_radius);
    }
    let points = grid.points();
    denominators(family, member).iter().all(|d| {
        points
            .iter()
            .all(|z| d.evaluate(*z).map(|v| v.norm() > MIN_MODULUS).unwrap_or(false))
            && zero_free(d, test_radius)
    })
}

/// Draws a random member of `spec` using `rng`.
pub fn sample_member_with<R: Rng>(spec: &ClassSpec, rng: &mut R, cfg: &SamplerConfig) -> Result<LaurentSeries> {
    spec.validate()?;
    if !(cfg.test_radius > 0.0 && cfg.test_radius < 1.0) {
        return Err(Error::Domain(format!("test radius {} outside (0, 1)", cfg.test_radius)));
    }
    // places past the normalized constant term where the tail starts
    let first = spec.family.fixed_exp(spec.n) - spec.family.low_exp() + 1;
    for _ in 0..cfg.budget {
        let len = rng.gen_range(0..=cfg.max_tail_terms);
        let tail: Vec<Complex64> = (0..len)
            .map(|j| unit_disk_point(rng) * cfg.decay.powi(first + j as i32))
            .collect();
        let member = make_member(spec, &tail, cfg.order)?;
        if passes_rejection(spec.family, &member, cfg.test_radius) {
            return Ok(member);
        }
    }
    Err(Error::RejectionBudgetExhausted(cfg.budget))
}

/// Deterministic sampler keyed by `seed`.
pub fn sample_member(spec: &ClassSpec, seed: u64, cfg: &SamplerConfig) -> Result<LaurentSeries> {
    sample_member_with(spec, &mut ChaCha8Rng::seed_from_u64(seed), cfg)
}

/// Number of zeros of `g` in `|z| < radius` by the argument principle, or
/// `None` when `g` (nearly) vanishes on the circle itself.
#[allow(clippy::mut_range_bound)] // the refine loop restarts with the new bound
pub fn zeros_inside<G: Fn(Complex64) -> Complex64>(g: G, radius: f64) -> Option<u32> {
    let mut m = 256usize;
    'refine: loop {
        let mut total = 0.0;
        let mut prev = g(Complex64::new(radius, 0.0));
        if !(prev.norm() > 1e-14) {
            return None;
        }
        for j in 1..=m {
            let z = Complex64::from_polar(radius, TAU * j as f64 / m as f64);
            let v = g(z);
            if !(v.norm() > 1e-14) {
                return None;
            }
            let step = (v / prev).arg();
            if step.abs() > std::f64::consts::FRAC_PI_3 && m < (1 << 18) {
                m *= 4;
                continue 'refine;
            }
            total += step;
            prev = v;
        }
        return Some((total / TAU).round().max(0.0) as u32);
    }
}

/// True when the stored polynomial has no zero in the closed disk of
/// `radius`. Only meaningful for series with `low_exp >= 0` that are exact
/// polynomials.
pub fn zero_free(poly: &LaurentSeries, radius: f64) -> bool {
    zeros_inside(|z| poly.evaluate(z).unwrap_or(Complex64::new(0.0, 0.0)), radius) == Some(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarlikeCheck {
    pub verdict: Verdict,
    /// `min Re(zf'/f) - beta` for `beta < 1`, `beta - max Re(zf'/f)` for `beta > 1`.
    pub margin: f64,
}

impl StarlikeCheck {
    pub fn is_starlike(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// Tests `f ∈ S*(beta)` (or `M(beta)` for `beta > 1`) on `grid`, evaluating
/// `zf'/f` pointwise from the stored polynomial.
pub fn classify_starlike(f: &LaurentSeries, beta: f64, grid: &SampleGrid) -> Result<StarlikeCheck> {
    grid.validate()?;
    if f.low_exp() != 1 || (f.coeffs()[0] - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
        return Err(Error::InvalidMember("expected z + ... ".into()));
    }
    if (beta - 1.0).abs() <= BETA_ONE_TOL {
        return Err(Error::Domain("beta must differ from 1".into()));
    }
    let r = grid.max_radius();
    if f.tail_bound(r) > grid.tol / 10.0 {
        return Ok(StarlikeCheck { verdict: Verdict::Inconclusive, margin: f64::NAN });
    }
    if !zero_free(&f.shift(-1), r) {
        return Ok(StarlikeCheck { verdict: Verdict::Fails, margin: f64::NEG_INFINITY });
    }
    let sign = if beta < 1.0 { 1.0 } else { -1.0 };
    let margin = grid
        .points()
        .into_iter()
        .map(|z| {
            let (v, d1, _) = f.eval_jet(z);
            sign * ((z * d1 / v).re - beta)
        })
        .fold(f64::INFINITY, f64::min);
    let verdict = if margin > grid.tol {
        Verdict::Holds
    } else if margin < -grid.tol {
        Verdict::Fails
    } else {
        Verdict::Inconclusive
    };
    Ok(StarlikeCheck { verdict, margin })
}

/// JSON descriptor of a member.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberDescriptor {
    pub family: Family,
    pub n: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mu: Option<f64>,
    pub coeffs: Vec<[f64; 2]>,
    pub order: usize,
}

impl MemberDescriptor {
    pub fn from_member(spec: &ClassSpec, member: &LaurentSeries) -> Self {
        let (b, mu) = match spec.family {
            Family::H => (None, Some(spec.fixed)),
            _ => (Some(spec.fixed), None),
        };
        Self {
            family: spec.family,
            n: spec.n,
            b,
            mu,
            coeffs: member.coeffs().iter().map(|c| [c.re, c.im]).collect(),
            order: member.order(),
        }
    }

    pub fn spec(&self) -> Result<ClassSpec> {
        let fixed = match (self.family, self.b, self.mu) {
            (Family::H, _, Some(mu)) => mu,
            (Family::A | Family::Sigma, Some(b), _) => b,
            _ => return Err(Error::InvalidMember("missing b or mu for the family".into())),
        };
        ClassSpec::new(self.family, self.n, fixed)
    }

    /// Parses the coefficient list and checks the mandated leading structure.
    pub fn to_member(&self) -> Result<(ClassSpec, LaurentSeries)> {
        let spec = self.spec()?;
        if self.coeffs.is_empty() {
            return Err(Error::InvalidMember("empty coefficient list".into()));
        }
        if self.coeffs.len() > self.order + 1 {
            return Err(Error::InvalidMember(format!(
                "{} coefficients exceed order {}",
                self.coeffs.len(),
                self.order
            )));
        }
        let coeffs: Vec<Complex64> = self.coeffs.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
        let member = LaurentSeries::with_order(spec.family.low_exp(), coeffs, self.order);
        let low = spec.family.low_exp();
        let fixed_exp = spec.family.fixed_exp(spec.n);
        for k in low..fixed_exp {
            let expect = if k == low { 1.0 } else { 0.0 };
            let got = member.coeff(k).unwrap_or_default();
            if (got - Complex64::new(expect, 0.0)).norm() > 1e-12 {
                return Err(Error::InvalidMember(format!("coefficient of z^{k} is {got}, expected {expect}")));
            }
        }
        let got = member
            .coeff(fixed_exp)
            .ok_or_else(|| Error::InvalidMember("order too small for the fixed coefficient".into()))?;
        if (got - Complex64::new(spec.fixed, 0.0)).norm() > 1e-12 {
            return Err(Error::InvalidMember(format!(
                "coefficient of z^{fixed_exp} is {got}, expected {}",
                spec.fixed
            )));
        }
        Ok((spec, member))
    }
}
