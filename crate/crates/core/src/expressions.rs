//! Premise expressions, built two ways.
//!
//! The series route composes truncated series (`zf'/f`, `zf''/f'`, ...) and
//! is used to cross-check the algebraic identities that rewrite each
//! function-level premise in terms of `p`. The pointwise route evaluates
//! the same expressions at a point from the exact values of the stored
//! polynomial and its derivatives, with no truncation error; the
//! verification harness uses it.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classes::{zero_free, Family};
use crate::error::{Error, Result};
use crate::series::LaurentSeries;
use crate::subordination::{DiskMap, SampleGrid};

/// The six `p`-level implications.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Lemma {
    /// `(1 - alpha) p + alpha p^2 + gamma z p'`
    Quadratic,
    /// `p + gamma z p'`
    Linear,
    /// `p + alpha z p'/p`
    MixedLogDerivative,
    /// `z p'/p`
    LogDerivative,
    /// `p + z p'/(alpha p + gamma)`
    BriotBouquet,
    /// `p^2 + gamma z p'`
    Square,
}

impl Lemma {
    pub const ALL: [Lemma; 6] = [
        Lemma::Quadratic,
        Lemma::Linear,
        Lemma::MixedLogDerivative,
        Lemma::LogDerivative,
        Lemma::BriotBouquet,
        Lemma::Square,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Lemma::Quadratic => "L2_4",
            Lemma::Linear => "L2_5",
            Lemma::MixedLogDerivative => "L2_6",
            Lemma::LogDerivative => "L2_7",
            Lemma::BriotBouquet => "L2_8",
            Lemma::Square => "L2_9",
        }
    }

    pub fn uses_alpha(self) -> bool {
        matches!(self, Lemma::Quadratic | Lemma::MixedLogDerivative | Lemma::BriotBouquet)
    }

    pub fn uses_gamma(self) -> bool {
        matches!(self, Lemma::Quadratic | Lemma::Linear | Lemma::BriotBouquet | Lemma::Square)
    }

    /// Superordinate is `-2 delta z/(1 - z)` rather than the Cayley form.
    pub fn scaled_target(self) -> bool {
        self == Lemma::LogDerivative
    }
}

/// The three function-level results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Theorem {
    /// Conditions for `zf'/f ≺ p_beta`, `f = z + b z^{n+1} + ...`.
    Starlike,
    /// Conditions for `-zf'/f ≺ p_beta`, `f = 1/z + b z^n + ...`.
    MeromorphicStarlike,
    /// Conditions for `f' ≺ p_beta`, `f = z + b z^{n+1} + ...`.
    Derivative,
}

impl Theorem {
    pub const ALL: [Theorem; 3] = [Theorem::Starlike, Theorem::MeromorphicStarlike, Theorem::Derivative];

    pub fn id(self) -> &'static str {
        match self {
            Theorem::Starlike => "T2_1",
            Theorem::MeromorphicStarlike => "T2_2",
            Theorem::Derivative => "T2_3",
        }
    }

    pub fn family(self) -> Family {
        match self {
            Theorem::MeromorphicStarlike => Family::Sigma,
            _ => Family::A,
        }
    }

    /// `mu` as a function of `(n, b)`.
    pub fn mu_from_b(self, n: u32, b: f64) -> f64 {
        match self {
            Theorem::Starlike => n as f64 * b,
            Theorem::MeromorphicStarlike => -((n + 1) as f64) * b,
            Theorem::Derivative => (n + 1) as f64 * b,
        }
    }

    /// Inverse of [`Theorem::mu_from_b`].
    pub fn b_from_mu(self, n: u32, mu: f64) -> f64 {
        match self {
            Theorem::Starlike => mu / n as f64,
            Theorem::MeromorphicStarlike => -mu / (n + 1) as f64,
            Theorem::Derivative => mu / (n + 1) as f64,
        }
    }

    /// The lemma each premise reduces to (with `gamma = alpha` for the first
    /// and `gamma = 1` for the second).
    pub fn lemma_for(self, index: u8) -> Lemma {
        match index {
            1 => Lemma::Quadratic,
            2 => Lemma::Linear,
            3 => Lemma::MixedLogDerivative,
            4 => Lemma::LogDerivative,
            _ => panic!("premise index {index} out of range"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PremiseKind {
    Lemma(Lemma),
    Theorem { theorem: Theorem, index: u8 },
}

impl PremiseKind {
    pub fn theorem(theorem: Theorem, index: u8) -> Result<Self> {
        if !(1..=4).contains(&index) {
            return Err(Error::UnknownResult(format!("{}.{index}", theorem.id())));
        }
        Ok(PremiseKind::Theorem { theorem, index })
    }

    pub fn all_theorem_premises() -> Vec<PremiseKind> {
        Theorem::ALL
            .iter()
            .flat_map(|&theorem| (1..=4).map(move |index| PremiseKind::Theorem { theorem, index }))
            .collect()
    }

    /// Family of the member the premise is built from.
    pub fn family(&self) -> Family {
        match self {
            PremiseKind::Lemma(_) => Family::H,
            PremiseKind::Theorem { theorem, .. } => theorem.family(),
        }
    }

    pub fn scaled_target(&self) -> bool {
        match self {
            PremiseKind::Lemma(l) => l.scaled_target(),
            PremiseKind::Theorem { index, .. } => *index == 4,
        }
    }
}

impl fmt::Display for PremiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PremiseKind::Lemma(l) => write!(f, "{}", l.id()),
            PremiseKind::Theorem { theorem, index } => write!(f, "{}.{index}", theorem.id()),
        }
    }
}

impl FromStr for PremiseKind {
    type Err = Error;

    /// Accepts `L2_4` ... `L2_9` and `T2_1.1` ... `T2_3.4` (also with `_`
    /// or `-` before the index, and case-insensitively).
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        if let Some(l) = Lemma::ALL.iter().find(|l| l.id() == norm) {
            return Ok(PremiseKind::Lemma(*l));
        }
        for t in Theorem::ALL {
            if let Some(rest) = norm.strip_prefix(t.id()) {
                let idx = rest.trim_start_matches(['.', '_']);
                if let Ok(index) = idx.parse::<u8>() {
                    return PremiseKind::theorem(t, index);
                }
            }
        }
        Err(Error::UnknownResult(s.to_string()))
    }
}

fn check_family(kind: &PremiseKind, member: &LaurentSeries) -> Result<()> {
    let expected = kind.family().low_exp();
    if member.low_exp() != expected {
        return Err(Error::InvalidMember(format!(
            "{kind} needs a member starting at z^{expected}, got z^{}",
            member.low_exp()
        )));
    }
    Ok(())
}

/// The `p` attached to a function-level member: `zf'/f`, `-zf'/f` or `f'`.
pub fn p_from_f(theorem: Theorem, f: &LaurentSeries) -> Result<LaurentSeries> {
    match theorem {
        Theorem::Starlike => f.z_times_derivative().div(f),
        Theorem::MeromorphicStarlike => Ok(-&f.z_times_derivative().div(f)?),
        Theorem::Derivative => Ok(f.derivative()),
    }
}

/// Premise built directly from the member `f`.
pub fn premise_from_f(kind: PremiseKind, f: &LaurentSeries, alpha: f64) -> Result<LaurentSeries> {
    let PremiseKind::Theorem { theorem, index } = kind else {
        return Err(Error::NotTheoremPremise(kind.to_string()));
    };
    check_family(&kind, f)?;
    let one = Complex64::new(1.0, 0.0);
    let f1 = f.derivative();
    let zf2 = f1.z_times_derivative();
    match theorem {
        Theorem::Starlike | Theorem::MeromorphicStarlike => {
            let q = f.z_times_derivative().div(f)?;
            let r = zf2.div(&f1)?;
            Ok(match (theorem, index) {
                // zf'/f (alpha zf''/f' + 1)
                (Theorem::Starlike, 1) => &q * &r.scale_re(alpha).add_scalar(one),
                // zf'/f (2 + zf''/f' - zf'/f)
                (Theorem::Starlike, 2) => &q * &(&r - &q).add_scalar(2.0 * one),
                // zf'/f (2 alpha - 1 + alpha zf''/f')
                (Theorem::MeromorphicStarlike, 1) => &q * &r.scale_re(alpha).add_scalar((2.0 * alpha - 1.0) * one),
                // zf'/f (zf''/f' - zf'/f)
                (Theorem::MeromorphicStarlike, 2) => &q * &(&r - &q),
                // (1 - alpha) zf'/f + alpha (1 + zf''/f'), negated for the meromorphic case
                (_, 3) => {
                    let e = &q.scale_re(1.0 - alpha) + &r.add_scalar(one).scale_re(alpha);
                    if theorem == Theorem::MeromorphicStarlike { -&e } else { e }
                }
                // 1 + zf''/f' - zf'/f
                (_, 4) => (&r - &q).add_scalar(one),
                _ => unreachable!(),
            })
        }
        Theorem::Derivative => Ok(match index {
            // f' (alpha (zf''/f' + f' - 1) + 1) = alpha zf'' + alpha f'^2 + (1 - alpha) f'
            1 => &(&zf2 + &(&f1 * &f1)).scale_re(alpha) + &f1.scale_re(1.0 - alpha),
            2 => &f1 + &zf2,
            3 => &zf2.div(&f1)?.scale_re(alpha) + &f1,
            4 => zf2.div(&f1)?,
            _ => unreachable!(),
        }),
    }
}

/// Premise written in terms of `p`. For theorem kinds this is the rewritten
/// form each function-level premise equals; `gamma` is ignored there.
pub fn premise_from_p(kind: PremiseKind, p: &LaurentSeries, alpha: f64, gamma: f64) -> Result<LaurentSeries> {
    let one = Complex64::new(1.0, 0.0);
    let zp = p.z_times_derivative();
    let quadratic = |gamma: f64| &(&p.scale_re(1.0 - alpha) + &(p * p).scale_re(alpha)) + &zp.scale_re(gamma);
    Ok(match kind {
        PremiseKind::Lemma(lemma) => match lemma {
            Lemma::Quadratic => quadratic(gamma),
            Lemma::Linear => p + &zp.scale_re(gamma),
            Lemma::MixedLogDerivative => p + &zp.div(p)?.scale_re(alpha),
            Lemma::LogDerivative => zp.div(p)?,
            Lemma::BriotBouquet => p + &zp.div(&p.scale_re(alpha).add_scalar(gamma * one))?,
            Lemma::Square => &(p * p) + &zp.scale_re(gamma),
        },
        PremiseKind::Theorem { theorem, index } => {
            // the meromorphic rewrites carry -z p' where the others carry +z p'
            let s = if theorem == Theorem::MeromorphicStarlike { -1.0 } else { 1.0 };
            match index {
                1 => &(&p.scale_re(1.0 - alpha) + &(p * p).scale_re(alpha)) + &zp.scale_re(s * alpha),
                2 => p + &zp.scale_re(s),
                3 => p + &zp.div(p)?.scale_re(s * alpha),
                4 => zp.div(p)?,
                _ => return Err(Error::UnknownResult(kind.to_string())),
            }
        }
    })
}

/// Largest modulus of `premise_from_f - premise_from_p(p_from_f)` over the
/// grid points with radius at most 0.9.
pub fn identity_check(kind: PremiseKind, f: &LaurentSeries, alpha: f64, grid: &SampleGrid) -> Result<f64> {
    let PremiseKind::Theorem { theorem, .. } = kind else {
        return Err(Error::NotTheoremPremise(kind.to_string()));
    };
    let direct = premise_from_f(kind, f, alpha)?;
    let p = p_from_f(theorem, f)?;
    let rewritten = premise_from_p(kind, &p, alpha, alpha)?;
    let diff = &direct - &rewritten;
    let mut worst: f64 = 0.0;
    for z in grid.clipped(0.9).points() {
        worst = worst.max(diff.evaluate(z)?.norm());
    }
    Ok(worst)
}

/// Values needed by function-level premises at one point.
#[derive(Debug, Clone, Copy)]
struct FunctionJet {
    /// `z f'/f`
    q: Complex64,
    /// `z f''/f'`
    r: Complex64,
    /// `z^2 f''/f`
    s: Complex64,
    f1: Complex64,
    zf2: Complex64,
}

impl FunctionJet {
    fn at(f: &LaurentSeries, z: Complex64) -> Self {
        if z == Complex64::new(0.0, 0.0) {
            let (q, r) = if f.low_exp() == -1 { (-1.0, -2.0) } else { (1.0, 0.0) };
            let (q, r) = (Complex64::new(q, 0.0), Complex64::new(r, 0.0));
            let f1 = if f.low_exp() == 1 { f.coeffs()[0] } else { Complex64::new(f64::NAN, 0.0) };
            return Self { q, r, s: q * r, f1, zf2: Complex64::new(0.0, 0.0) };
        }
        let (v, d1, d2) = f.eval_jet(z);
        Self { q: z * d1 / v, r: z * d2 / d1, s: z * z * d2 / v, f1: d1, zf2: z * d2 }
    }
}

/// Pointwise value of a function-level premise.
fn theorem_premise_value(theorem: Theorem, index: u8, j: &FunctionJet, alpha: f64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    match (theorem, index) {
        (Theorem::Starlike, 1) => j.q + j.s * alpha,
        (Theorem::Starlike, 2) => j.q * 2.0 + j.s - j.q * j.q,
        (Theorem::MeromorphicStarlike, 1) => j.q * (2.0 * alpha - 1.0) + j.s * alpha,
        (Theorem::MeromorphicStarlike, 2) => j.s - j.q * j.q,
        (Theorem::Starlike, 3) => j.q * (1.0 - alpha) + (one + j.r) * alpha,
        (Theorem::MeromorphicStarlike, 3) => -(j.q * (1.0 - alpha) + (one + j.r) * alpha),
        (Theorem::Starlike | Theorem::MeromorphicStarlike, 4) => one + j.r - j.q,
        (Theorem::Derivative, 1) => j.zf2 * alpha + j.f1 * j.f1 * alpha + j.f1 * (1.0 - alpha),
        (Theorem::Derivative, 2) => j.f1 + j.zf2,
        (Theorem::Derivative, 3) => j.r * alpha + j.f1,
        (Theorem::Derivative, 4) => j.r,
        _ => panic!("premise index {index} out of range"),
    }
}

fn lemma_premise_value(lemma: Lemma, p: Complex64, zp: Complex64, alpha: f64, gamma: f64) -> Complex64 {
    match lemma {
        Lemma::Quadratic => p * (1.0 - alpha) + p * p * alpha + zp * gamma,
        Lemma::Linear => p + zp * gamma,
        Lemma::MixedLogDerivative => p + zp / p * alpha,
        Lemma::LogDerivative => zp / p,
        Lemma::BriotBouquet => p + zp / (p * alpha + gamma),
        Lemma::Square => p * p + zp * gamma,
    }
}

/// A premise evaluated pointwise from an exactly stored member.
#[derive(Debug, Clone, Copy)]
pub struct PointwisePremise<'a> {
    pub kind: PremiseKind,
    pub member: &'a LaurentSeries,
    pub alpha: f64,
    pub gamma: f64,
}

impl<'a> PointwisePremise<'a> {
    pub fn new(kind: PremiseKind, member: &'a LaurentSeries, alpha: f64, gamma: f64) -> Result<Self> {
        check_family(&kind, member)?;
        Ok(Self { kind, member, alpha, gamma })
    }

    /// Polynomials whose zeros would put a pole of the premise (or of the
    /// associated `p`) inside the disk.
    pub fn singular_factors(&self) -> Vec<LaurentSeries> {
        let m = self.member;
        match self.kind {
            PremiseKind::Lemma(Lemma::MixedLogDerivative | Lemma::LogDerivative) => vec![m.clone()],
            PremiseKind::Lemma(Lemma::BriotBouquet) => {
                vec![m.scale_re(self.alpha).add_scalar(Complex64::new(self.gamma, 0.0))]
            }
            PremiseKind::Lemma(_) => vec![],
            PremiseKind::Theorem { theorem, index } => {
                let mut out = match theorem {
                    Theorem::Starlike => vec![m.shift(-1)],
                    Theorem::MeromorphicStarlike => vec![m.shift(1)],
                    Theorem::Derivative => vec![],
                };
                if index >= 3 {
                    out.push(match theorem {
                        Theorem::MeromorphicStarlike => m.derivative().shift(2),
                        _ => m.derivative(),
                    });
                }
                out
            }
        }
    }

    /// True when no singular factor vanishes in `|z| <= radius`.
    pub fn analytic_on(&self, radius: f64) -> bool {
        self.singular_factors().iter().all(|d| zero_free(d, radius))
    }
}

impl DiskMap for PointwisePremise<'_> {
    fn value_at(&self, z: Complex64) -> Result<Complex64> {
        Ok(match self.kind {
            PremiseKind::Lemma(lemma) => {
                let (v, d1, _) = self.member.eval_jet(z);
                lemma_premise_value(lemma, v, z * d1, self.alpha, self.gamma)
            }
            PremiseKind::Theorem { theorem, index } => {
                theorem_premise_value(theorem, index, &FunctionJet::at(self.member, z), self.alpha)
            }
        })
    }

    fn truncation_bound(&self, radius: f64) -> f64 {
        self.member.tail_bound(radius)
    }
}

/// The conclusion-side function `p` evaluated pointwise: the member itself
/// for lemmas, `zf'/f`, `-zf'/f` or `f'` for theorems.
#[derive(Debug, Clone, Copy)]
pub struct PointwiseP<'a> {
    pub kind: PremiseKind,
    pub member: &'a LaurentSeries,
}

impl DiskMap for PointwiseP<'_> {
    fn value_at(&self, z: Complex64) -> Result<Complex64> {
        Ok(match self.kind {
            PremiseKind::Lemma(_) => self.member.evaluate(z)?,
            PremiseKind::Theorem { theorem, .. } => {
                let j = FunctionJet::at(self.member, z);
                match theorem {
                    Theorem::Starlike => j.q,
                    Theorem::MeromorphicStarlike => -j.q,
                    Theorem::Derivative => j.f1,
                }
            }
        })
    }

    fn truncation_bound(&self, radius: f64) -> f64 {
        self.member.tail_bound(radius)
    }
}
