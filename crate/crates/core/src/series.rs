//! Truncated Laurent series with complex coefficients.
//!
//! A [`LaurentSeries`] stores the coefficients `c_k` for the exponents
//! `low_exp ..= low_exp + order`; everything above that window is unknown
//! (not zero). Arithmetic keeps track of how far the result is still valid,
//! so products and quotients never report coefficients past the point where
//! an operand was truncated.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default truncation order for members and derived expressions.
pub const DEFAULT_ORDER: usize = 64;

/// Divisors whose leading coefficient is below this magnitude are rejected.
pub const ZERO_LEAD_THRESHOLD: f64 = 1e-13;

/// Coefficients at or below this magnitude count as zero in
/// [`LaurentSeries::effective_signature`].
pub const SIGNATURE_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct LaurentSeries {
    low_exp: i32,
    coeffs: Vec<Complex64>,
}

/// Leading data of a normalized series `1 + c_n z^n + ...`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Signature {
    /// Index of the first coefficient past the constant term that is nonzero.
    pub n: usize,
    /// Real part of that coefficient.
    pub mu: f64,
    pub leading: Complex64,
    /// False when the leading coefficient is not a nonnegative real.
    pub real_nonneg: bool,
}

impl LaurentSeries {
    /// Panics if `coeffs` is empty; a series always carries at least one
    /// (possibly zero) coefficient.
    pub fn new(low_exp: i32, coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        Self { low_exp, coeffs }
    }

    pub fn from_real(low_exp: i32, coeffs: &[f64]) -> Self {
        Self::new(low_exp, coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// `coeffs` padded with zeros (or cut) to exactly `order + 1` entries.
    pub fn with_order(low_exp: i32, mut coeffs: Vec<Complex64>, order: usize) -> Self {
        coeffs.resize(order + 1, ZERO);
        Self::new(low_exp, coeffs)
    }

    pub fn zero(low_exp: i32, order: usize) -> Self {
        Self::new(low_exp, vec![ZERO; order + 1])
    }

    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut coeffs = vec![ZERO; order + 1];
        coeffs[0] = c;
        Self::new(0, coeffs)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(ONE, order)
    }

    /// `c z^exp`, valid up to `z^(exp + order)`.
    pub fn monomial(exp: i32, c: Complex64, order: usize) -> Self {
        let mut coeffs = vec![ZERO; order + 1];
        coeffs[0] = c;
        Self::new(exp, coeffs)
    }

    /// The identity map `z`, valid up to `z^(order + 1)`.
    pub fn z(order: usize) -> Self {
        Self::monomial(1, ONE, order)
    }

    pub fn low_exp(&self) -> i32 {
        self.low_exp
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Highest exponent whose coefficient is known.
    pub fn top_exp(&self) -> i32 {
        self.low_exp + self.order() as i32
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k`: zero below the window, `None` above it.
    pub fn coeff(&self, k: i32) -> Option<Complex64> {
        if k < self.low_exp {
            Some(ZERO)
        } else if k > self.top_exp() {
            None
        } else {
            Some(self.coeffs[(k - self.low_exp) as usize])
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    /// Index (relative to `low_exp`) of the last nonzero coefficient.
    fn last_nonzero(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| *c != ZERO)
    }

    /// Keep only exponents up to `top`.
    pub fn truncated_at(&self, top: i32) -> Self {
        let keep = (top - self.low_exp + 1).clamp(1, self.coeffs.len() as i32) as usize;
        Self::new(self.low_exp, self.coeffs[..keep].to_vec())
    }

    /// Drop exactly-zero leading coefficients (the valid window shrinks from below).
    pub fn trim_leading_zeros(&self) -> Self {
        match self.coeffs.iter().position(|c| *c != ZERO) {
            Some(0) | None => self.clone(),
            Some(i) => Self::new(self.low_exp + i as i32, self.coeffs[i..].to_vec()),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.low_exp, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    /// Adds a constant; the constant is exact, so the window is unchanged
    /// unless it has to grow downward to reach exponent 0.
    pub fn add_scalar(&self, c: Complex64) -> Self {
        self + &Self::constant(c, (self.top_exp().max(0)) as usize)
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self::new(self.low_exp + k, self.coeffs.clone())
    }

    fn combine(&self, other: &Self, sign: f64) -> Self {
        let low = self.low_exp.min(other.low_exp);
        let top = self.top_exp().min(other.top_exp());
        let coeffs = (low..=top)
            .map(|k| self.coeff(k).unwrap_or(ZERO) + other.coeff(k).unwrap_or(ZERO) * sign)
            .collect();
        Self::new(low, coeffs)
    }

    /// Cauchy product; valid to the smaller of the two relative orders.
    pub fn mul_series(&self, other: &Self) -> Self {
        let rel = self.order().min(other.order());
        let a = &self.coeffs;
        let b = &other.coeffs;
        let coeffs = (0..=rel)
            .map(|k| (0..=k).map(|i| a[i] * b[k - i]).sum())
            .collect();
        Self::new(self.low_exp + other.low_exp, coeffs)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.div_with_threshold(other, ZERO_LEAD_THRESHOLD)
    }

    /// Long division. The divisor's coefficient at its lowest exponent must
    /// exceed `threshold` in modulus.
    pub fn div_with_threshold(&self, other: &Self, threshold: f64) -> Result<Self> {
        let b0 = other.coeffs[0];
        if b0.norm() < threshold {
            return Err(Error::ZeroLeadingCoefficient(b0.norm()));
        }
        let rel = self.order().min(other.order());
        let a = &self.coeffs;
        let b = &other.coeffs;
        let inv = b0.inv();
        let mut q: Vec<Complex64> = Vec::with_capacity(rel + 1);
        for k in 0..=rel {
            let acc: Complex64 = (1..=k).map(|j| b[j] * q[k - j]).sum();
            q.push((a[k] - acc) * inv);
        }
        Ok(Self::new(self.low_exp - other.low_exp, q))
    }

    /// Termwise derivative. A vanishing coefficient produced at exponent -1
    /// from the constant term is dropped.
    pub fn derivative(&self) -> Self {
        let coeffs: Vec<Complex64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * (self.low_exp + i as i32) as f64)
            .collect();
        if self.low_exp == 0 && coeffs.len() > 1 {
            Self::new(0, coeffs[1..].to_vec())
        } else {
            Self::new(self.low_exp - 1, coeffs)
        }
    }

    /// `z * a'(z)`, which keeps every exponent in place.
    pub fn z_times_derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * (self.low_exp + i as i32) as f64)
            .collect();
        Self::new(self.low_exp, coeffs)
    }

    /// Horner evaluation of the stored window.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        if z == ZERO {
            return match self.low_exp {
                l if l < 0 => {
                    if self.coeffs[..(-l as usize).min(self.coeffs.len())]
                        .iter()
                        .all(|c| *c == ZERO)
                    {
                        Ok(self.coeff(0).unwrap_or(ZERO))
                    } else {
                        Err(Error::PoleAtOrigin)
                    }
                }
                0 => Ok(self.coeffs[0]),
                _ => Ok(ZERO),
            };
        }
        let Some(last) = self.last_nonzero() else {
            return Ok(ZERO);
        };
        let poly = self.coeffs[..=last].iter().rev().fold(ZERO, |acc, c| acc * z + c);
        Ok(poly * z.powi(self.low_exp))
    }

    /// Value, first and second derivative at `z` (z must be nonzero when
    /// `low_exp < 0`).
    pub fn eval_jet(&self, z: Complex64) -> (Complex64, Complex64, Complex64) {
        let last = self.last_nonzero().unwrap_or(0);
        let (mut v, mut d1, mut d2) = (ZERO, ZERO, ZERO);
        for c in self.coeffs[..=last].iter().rev() {
            d2 = d2 * z + d1 * 2.0;
            d1 = d1 * z + v;
            v = v * z + c;
        }
        let l = self.low_exp;
        if l == 0 {
            return (v, d1, d2);
        }
        let lf = l as f64;
        let zl = z.powi(l);
        let zl1 = z.powi(l - 1);
        let zl2 = z.powi(l - 2);
        (
            zl * v,
            zl1 * v * lf + zl * d1,
            zl2 * v * (lf * (lf - 1.0)) + zl1 * d1 * (2.0 * lf) + zl * d2,
        )
    }

    /// Geometric estimate of the omitted tail at `radius`, from the last
    /// eight stored coefficients. Returns 0 when those are all zero (the
    /// stored window is an exact polynomial) and infinity when they do not
    /// decay.
    pub fn tail_bound(&self, radius: f64) -> f64 {
        let n = self.coeffs.len();
        if n < 8 {
            return if self.coeffs[n.saturating_sub(1)] == ZERO { 0.0 } else { f64::INFINITY };
        }
        let weighted = |i: usize| self.coeffs[i].norm() * radius.powi(self.low_exp + i as i32);
        let early = (n - 8..n - 4).map(weighted).fold(0.0, f64::max);
        let late = (n - 4..n).map(weighted).fold(0.0, f64::max);
        if late == 0.0 {
            return 0.0;
        }
        if early == 0.0 {
            return f64::INFINITY;
        }
        let ratio = (late / early).powf(0.25);
        if ratio >= 1.0 {
            f64::INFINITY
        } else {
            late * ratio / (1.0 - ratio)
        }
    }

    /// For `p = 1 + c_n z^n + ...`, the first index `n >= 1` with
    /// `|c_n| > tol` and its coefficient.
    pub fn effective_signature(&self, tol: f64) -> Result<Signature> {
        let below_zero_clean = (self.low_exp..0).all(|k| self.coeff(k).is_some_and(|c| c.norm() <= tol));
        let c0 = self.coeff(0).unwrap_or(ZERO);
        if !below_zero_clean || (c0 - ONE).norm() > 1e-9 {
            return Err(Error::NotNormalized(format!("{c0}")));
        }
        for k in 1..=self.top_exp().max(0) {
            let c = self.coeff(k).unwrap_or(ZERO);
            if c.norm() > tol {
                return Ok(Signature {
                    n: k as usize,
                    mu: c.re,
                    leading: c,
                    real_nonneg: c.im.abs() <= tol && c.re >= -tol,
                });
            }
        }
        Err(Error::DegenerateConstant)
    }
}

impl<'a> Add<&'a LaurentSeries> for &'a LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &'a LaurentSeries) -> LaurentSeries {
        self.combine(rhs, 1.0)
    }
}

impl<'a> Sub<&'a LaurentSeries> for &'a LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &'a LaurentSeries) -> LaurentSeries {
        self.combine(rhs, -1.0)
    }
}

impl<'a> Mul<&'a LaurentSeries> for &'a LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &'a LaurentSeries) -> LaurentSeries {
        self.mul_series(rhs)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        self.scale_re(-1.0)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c == ZERO {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*z^{}", self.low_exp + i as i32)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(z^{})", self.top_exp() + 1)
    }
}
