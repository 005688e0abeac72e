//! Search for members that satisfy a (possibly weakened) premise while
//! missing the conclusion.
//!
//! Restarts come from the sampler, plus an extremal seed when the premise is
//! of the form `p + gamma z p'`; each restart climbs
//! `min(premise margin, 0.1) - conclusion margin` by coordinate steps on the
//! free tail coefficients, so the fixed coefficient never moves.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classes::{sample_member_with, stream_rng, ClassSpec, Family, MemberDescriptor, ParameterSet, SamplerConfig};
use crate::error::{Error, Result};
use crate::expressions::{Lemma, PremiseKind, Theorem};
use crate::harness::{Cell, TrialOutcome};
use crate::series::LaurentSeries;
use crate::subordination::{HalfPlaneTarget, SampleGrid};

/// Premise margins above this do not help the objective.
pub const SOFT_CAP: f64 = 0.1;
/// Coefficients kept for extremal seeds.
pub const EXTREMAL_ORDER: usize = 512;
/// Angular refinement used to re-check a candidate witness.
pub const REVERIFY_FACTOR: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HuntSpec {
    pub kind: PremiseKind,
    /// Amount by which the premise half-plane is enlarged.
    pub epsilon: f64,
    /// Objective evaluations allowed in total.
    pub budget: usize,
    /// Step-size halvings per restart.
    pub refine_steps: usize,
}

impl HuntSpec {
    pub fn new(kind: PremiseKind, epsilon: f64, budget: usize) -> Result<Self> {
        let s = Self { kind, epsilon, budget, refine_steps: 6 };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon >= 0.0) {
            return Err(Error::Domain(format!("epsilon = {} must be nonnegative", self.epsilon)));
        }
        if self.budget == 0 {
            return Err(Error::Domain("budget must be at least 1".into()));
        }
        Ok(())
    }
}

/// Grid used while searching; witnesses are re-checked on a finer one.
pub fn search_grid() -> SampleGrid {
    SampleGrid { angles: 180, ..SampleGrid::default() }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub member: MemberDescriptor,
    pub premise_margin: f64,
    pub conclusion_margin: f64,
    pub objective: f64,
    pub restart: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HuntReport {
    pub result_id: String,
    pub params: ParameterSet,
    pub epsilon: f64,
    pub delta: f64,
    /// Boundary abscissa of the weakened premise target.
    pub weakened_abscissa: f64,
    pub evaluations: usize,
    pub restarts: usize,
    pub best_objective: f64,
    pub witnesses: Vec<Witness>,
}

/// Inverts `p + gamma z p' = h` coefficientwise: `p_k = h_k/(1 + gamma k)`.
pub fn extremal_solve(h: &LaurentSeries, gamma: f64) -> LaurentSeries {
    debug_assert!(h.low_exp() >= 0 && gamma > 0.0);
    let coeffs = h
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let k = (h.low_exp() + i as i32) as f64;
            if k == 0.0 { Complex64::new(1.0, 0.0) } else { c / (1.0 + gamma * k) }
        })
        .collect();
    LaurentSeries::new(h.low_exp(), coeffs)
}

/// `(1 + (1 - 2d) w)/(1 - w)` at `w = c z^n`, to `order` terms.
fn cayley_composed(d: f64, c: f64, n: u32, order: usize) -> LaurentSeries {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
    coeffs[0] = Complex64::new(1.0, 0.0);
    let mut j = 1usize;
    while j * (n as usize) <= order {
        coeffs[j * n as usize] = Complex64::new(2.0 * (1.0 - d) * c.powi(j as i32), 0.0);
        j += 1;
    }
    LaurentSeries::new(0, coeffs)
}

/// Member whose `p + gamma z p'` premise is the target's boundary map
/// pulled in to match the fixed coefficient. `None` when the premise is not
/// of that form or the match would need a map larger than the disk.
pub fn extremal_seed(kind: PremiseKind, class: &ClassSpec, gamma: f64, target: &HalfPlaneTarget) -> Option<LaurentSeries> {
    let (gamma, mu) = match kind {
        PremiseKind::Lemma(Lemma::Linear) => (gamma, class.fixed),
        PremiseKind::Theorem { theorem: Theorem::Derivative, index: 2 } => (1.0, (class.n + 1) as f64 * class.fixed),
        _ => return None,
    };
    let d = target.abscissa;
    if !(gamma > 0.0) || d >= 1.0 || mu == 0.0 {
        return None;
    }
    let n = class.n;
    let c = (1.0 + gamma * n as f64) * mu / (2.0 * (1.0 - d));
    if !(c > 0.0 && c < 1.0) {
        return None;
    }
    let p = extremal_solve(&cayley_composed(d, c, n, EXTREMAL_ORDER), gamma);
    Some(match class.family {
        Family::H => p,
        // f' = p, f(0) = 0
        _ => {
            let coeffs = p.coeffs().iter().enumerate().map(|(k, c)| c / (k as f64 + 1.0)).collect();
            LaurentSeries::new(1, coeffs)
        }
    })
}

fn objective(o: &TrialOutcome) -> f64 {
    let cm = o.conclusion.map_or(f64::INFINITY, |c| c.margin);
    let v = o.premise.margin.min(SOFT_CAP) - cm;
    if v.is_nan() { f64::NEG_INFINITY } else { v }
}

struct Search<'a> {
    cell: &'a Cell,
    fine: Cell,
    spec: &'a HuntSpec,
    evaluations: usize,
    best: f64,
}

impl Search<'_> {
    fn exhausted(&self) -> bool {
        self.evaluations >= self.spec.budget
    }

    fn eval(&mut self, m: &LaurentSeries) -> (f64, Option<TrialOutcome>) {
        self.evaluations += 1;
        match self.cell.evaluate(m, true) {
            Ok(o) => {
                let v = objective(&o);
                self.best = self.best.max(v);
                (v, Some(o))
            }
            Err(_) => (f64::NEG_INFINITY, None),
        }
    }

    fn confirm(&self, m: &LaurentSeries, restart: usize) -> Option<Witness> {
        let o = self.fine.evaluate(m, true).ok()?;
        o.is_violation().then(|| Witness {
            member: MemberDescriptor::from_member(&self.cell.class, m),
            premise_margin: o.premise.margin,
            conclusion_margin: o.conclusion.map_or(f64::NAN, |c| c.margin),
            objective: objective(&o),
            restart,
        })
    }

    /// Coordinate ascent from `start`; returns a confirmed witness if one
    /// turns up.
    fn climb(&mut self, start: LaurentSeries, restart: usize, cfg: &SamplerConfig) -> Option<Witness> {
        let class = &self.cell.class;
        let fixed_idx = (class.family.fixed_exp(class.n) - class.family.low_exp()) as usize;
        let first = fixed_idx as i32 + 1;
        let mut coeffs = start.coeffs().to_vec();
        let slots = cfg.max_tail_terms.min(coeffs.len().saturating_sub(fixed_idx + 1));
        let low = start.low_exp();
        let build = |c: &[Complex64]| LaurentSeries::new(low, c.to_vec());

        let (mut value, outcome) = self.eval(&start);
        if outcome.is_some_and(|o| o.is_violation()) {
            if let Some(w) = self.confirm(&start, restart) {
                return Some(w);
            }
        }
        let dirs = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)];
        let mut scale = 0.5;
        for _ in 0..=self.spec.refine_steps {
            let mut improved = true;
            while improved {
                improved = false;
                for j in 0..slots {
                    let idx = fixed_idx + 1 + j;
                    let step = scale * cfg.decay.powi(first + j as i32);
                    for d in dirs {
                        if self.exhausted() {
                            return None;
                        }
                        let old = coeffs[idx];
                        coeffs[idx] = old + d * step;
                        let cand = build(&coeffs);
                        let (v, o) = self.eval(&cand);
                        if o.is_some_and(|o| o.is_violation()) {
                            if let Some(w) = self.confirm(&cand, restart) {
                                return Some(w);
                            }
                        }
                        if v > value {
                            value = v;
                            improved = true;
                            break;
                        }
                        coeffs[idx] = old;
                    }
                }
            }
            scale *= 0.5;
        }
        None
    }
}

/// Runs the search. The premise target is the result's own, enlarged by
/// `spec.epsilon`.
pub fn hunt(spec: &HuntSpec, params: ParameterSet, seed: u64, cfg: &SamplerConfig) -> Result<HuntReport> {
    hunt_on(spec, params, seed, cfg, &search_grid())
}

pub fn hunt_on(spec: &HuntSpec, params: ParameterSet, seed: u64, cfg: &SamplerConfig, grid: &SampleGrid) -> Result<HuntReport> {
    spec.validate()?;
    let base = Cell::new(spec.kind, params, grid)?;
    let target = base.premise_target.widened(spec.epsilon);
    let cell = base.with_premise_target(target);
    let fine = cell.clone().on_grid(&grid.refined(REVERIFY_FACTOR));
    let mut search = Search { cell: &cell, fine, spec, evaluations: 0, best: f64::NEG_INFINITY };
    let mut witnesses = Vec::new();
    let mut restart = 0usize;

    if let Some(seed_member) = extremal_seed(spec.kind, &cell.class, params.gamma, &target) {
        // the seed is long; climb only on its first tail slots
        if let Some(w) = search.climb(seed_member, restart, cfg) {
            witnesses.push(w);
        }
        restart += 1;
    }
    while !search.exhausted() {
        let mut rng = stream_rng(seed, restart as u64);
        match sample_member_with(&cell.class, &mut rng, cfg) {
            Ok(m) => {
                if let Some(w) = search.climb(m, restart, cfg) {
                    witnesses.push(w);
                }
            }
            Err(_) => search.evaluations += 1,
        }
        restart += 1;
    }
    witnesses.sort_by(|a, b| b.objective.total_cmp(&a.objective).then(a.restart.cmp(&b.restart)));
    Ok(HuntReport {
        result_id: spec.kind.to_string(),
        params,
        epsilon: spec.epsilon,
        delta: cell.delta,
        weakened_abscissa: target.abscissa,
        evaluations: search.evaluations,
        restarts: restart,
        best_objective: search.best,
        witnesses,
    })
}

/// Smallest `epsilon` from `ladder` (tried in increasing order) at which a
/// witness turns up, with that hunt's report.
pub fn smallest_epsilon(
    kind: PremiseKind,
    params: ParameterSet,
    ladder: &[f64],
    budget: usize,
    seed: u64,
    cfg: &SamplerConfig,
) -> Result<Option<(f64, HuntReport)>> {
    let mut eps: Vec<f64> = ladder.to_vec();
    eps.sort_by(f64::total_cmp);
    for e in eps {
        let report = hunt(&HuntSpec::new(kind, e, budget)?, params, seed, cfg)?;
        if !report.witnesses.is_empty() {
            return Ok(Some((e, report)));
        }
    }
    Ok(None)
}
