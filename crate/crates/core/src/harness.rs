//! Premise ⇒ conclusion property checks over randomly sampled members.
//!
//! Every trial `i` draws its member from the stream `(seed, i)`, so any
//! single trial can be replayed alone and reports do not depend on the
//! order in which trials run.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::admissibility::lemma_threshold;
use crate::classes::{
    make_member, sample_member_with, stream_rng, zero_free, ClassSpec, Family, MemberDescriptor, ParameterSet,
    SamplerConfig,
};
use crate::error::{Error, Result};
use crate::expressions::{p_from_f, PointwiseP, PointwisePremise, PremiseKind, Theorem};
use crate::series::SIGNATURE_TOL;
use crate::subordination::{check_at_points, HalfPlaneTarget, SampleGrid, SubordinationCheck, Verdict};
use crate::thresholds::{threshold_set, Variant};

/// Witnesses kept per report; the violation count is always exact.
pub const MAX_WITNESSES: usize = 16;

pub const CLOSE_TO_CONVEX: &str = "close-to-convex";

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct HarnessConfig {
    pub grid: SampleGrid,
    pub sampler: SamplerConfig,
}

/// `(n, mu)` labels of the function `p` attached to a member.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignaturePair {
    pub n: u32,
    pub mu: f64,
}

/// Everything fixed for one (result, parameter) cell.
#[derive(Debug, Clone)]
pub struct Cell {
    pub kind: PremiseKind,
    pub params: ParameterSet,
    pub class: ClassSpec,
    pub delta: f64,
    pub premise_target: HalfPlaneTarget,
    pub conclusion_target: HalfPlaneTarget,
    /// Labels from the theorem statement (theorems only).
    pub stated_signature: Option<SignaturePair>,
    /// Labels read off the computed `p` and used for the threshold.
    pub effective_signature: Option<SignaturePair>,
    grid: SampleGrid,
    points: Vec<Complex64>,
}

fn premise_target(kind: PremiseKind, delta: f64) -> Result<HalfPlaneTarget> {
    if kind.scaled_target() {
        HalfPlaneTarget::from_scaled(delta)
    } else {
        HalfPlaneTarget::from_cayley(delta)
    }
}

/// Signature of `p` for a theorem: read off the two-term member, falling
/// back to the structural exponent when `b = 0` leaves nothing to read.
fn theorem_signature(theorem: Theorem, class: &ClassSpec) -> Result<SignaturePair> {
    let structural_n = match theorem {
        Theorem::MeromorphicStarlike => class.n + 1,
        _ => class.n,
    };
    if class.fixed == 0.0 {
        return Ok(SignaturePair { n: structural_n, mu: 0.0 });
    }
    let f = make_member(class, &[], 4 * (class.n as usize + 2))?;
    let sig = p_from_f(theorem, &f)?.effective_signature(SIGNATURE_TOL)?;
    Ok(SignaturePair { n: sig.n as u32, mu: sig.mu })
}

impl Cell {
    pub fn new(kind: PremiseKind, params: ParameterSet, grid: &SampleGrid) -> Result<Self> {
        params.validate()?;
        grid.validate()?;
        let (class, delta, stated, effective) = match kind {
            PremiseKind::Lemma(lemma) => {
                let class = ClassSpec::new(Family::H, params.n, params.mu)?;
                (class, lemma_threshold(lemma, &params)?, None, None)
            }
            PremiseKind::Theorem { theorem, index } => {
                let b = theorem.b_from_mu(params.n, params.mu);
                let class = ClassSpec::new(theorem.family(), params.n, b)?;
                let stated = SignaturePair { n: params.n, mu: params.mu };
                let effective = theorem_signature(theorem, &class)?;
                let variant = match theorem {
                    Theorem::MeromorphicStarlike => Variant::Meromorphic,
                    _ => Variant::Analytic,
                };
                let eff_params = ParameterSet { n: effective.n, mu: effective.mu, ..params };
                let delta = threshold_set(&eff_params, variant)?.get(index);
                (class, delta, Some(stated), Some(effective))
            }
        };
        Ok(Self {
            kind,
            params,
            class,
            delta,
            premise_target: premise_target(kind, delta)?,
            conclusion_target: HalfPlaneTarget::from_cayley(params.beta)?,
            stated_signature: stated,
            effective_signature: effective,
            grid: grid.clone(),
            points: grid.points(),
        })
    }

    pub fn grid(&self) -> &SampleGrid {
        &self.grid
    }

    /// Same cell with the premise target replaced.
    pub fn with_premise_target(mut self, target: HalfPlaneTarget) -> Self {
        self.premise_target = target;
        self
    }

    /// Same cell on a different grid.
    pub fn on_grid(mut self, grid: &SampleGrid) -> Self {
        self.points = grid.points();
        self.grid = grid.clone();
        self
    }

    fn check(&self, w: &dyn crate::subordination::DiskMap, target: &HalfPlaneTarget, early: bool) -> Result<SubordinationCheck> {
        check_at_points(w, target, &self.points, self.grid.tol, self.grid.max_radius(), early)
    }

    /// Premise and (when the premise holds, or `always_conclusion`) the
    /// conclusion for one member.
    pub fn evaluate(&self, member: &crate::series::LaurentSeries, always_conclusion: bool) -> Result<TrialOutcome> {
        let r = self.grid.max_radius();
        let premise_fn = PointwisePremise::new(self.kind, member, self.params.alpha, self.params.gamma)?;
        let premise = if premise_fn.analytic_on(r) {
            self.check(&premise_fn, &self.premise_target, !always_conclusion)?
        } else {
            SubordinationCheck::not_analytic()
        };
        let conclusion = if premise.holds() || always_conclusion {
            let p = PointwiseP { kind: self.kind, member };
            let p_analytic = match self.class.family {
                Family::A => zero_free(&member.shift(-1), r),
                Family::Sigma => zero_free(&member.shift(1), r),
                Family::H => true,
            };
            Some(if p_analytic {
                self.check(&p, &self.conclusion_target, false)?
            } else {
                SubordinationCheck::not_analytic()
            })
        } else {
            None
        };
        Ok(TrialOutcome { premise, conclusion })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub premise: SubordinationCheck,
    pub conclusion: Option<SubordinationCheck>,
}

impl TrialOutcome {
    /// Premise certified to hold and conclusion certified to fail.
    pub fn is_violation(&self) -> bool {
        self.premise.holds() && self.conclusion.is_some_and(|c| c.fails())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub result_id: String,
    pub params: ParameterSet,
    /// Fixed coefficient of the sampled members (`b`, or `mu` for lemmas).
    pub fixed: f64,
    pub delta: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stated_signature: Option<SignaturePair>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub effective_signature: Option<SignaturePair>,
    pub seed: u64,
    pub trials: usize,
    pub sampling_failures: usize,
    pub premise_pass: usize,
    pub premise_inconclusive: usize,
    pub conclusion_pass: usize,
    pub implication_violations: usize,
    /// `(premise margin, conclusion margin)` of the premise-passing trial
    /// with the smallest conclusion margin.
    pub worst_margin_pair: Option<(f64, f64)>,
    pub min_premise_margin: Option<f64>,
    pub min_conclusion_margin: Option<f64>,
    pub witnesses: Vec<MemberDescriptor>,
    pub annotations: Vec<String>,
}

pub const CSV_HEADER: &str =
    "result_id,alpha,beta,gamma,n,mu,trials,premise_pass,violations,min_premise_margin,min_conclusion_margin";

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v}")).unwrap_or_default()
}

impl VerificationReport {
    /// Premise passes over successfully sampled trials.
    pub fn premise_pass_rate(&self) -> f64 {
        let sampled = self.trials - self.sampling_failures;
        if sampled == 0 { 0.0 } else { self.premise_pass as f64 / sampled as f64 }
    }

    pub fn csv_row(&self) -> String {
        let p = &self.params;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.result_id,
            p.alpha,
            p.beta,
            p.gamma,
            p.n,
            p.mu,
            self.trials,
            self.premise_pass,
            self.implication_violations,
            opt(self.min_premise_margin),
            opt(self.min_conclusion_margin)
        )
    }
}

/// Annotation for a member whose conclusion passed.
pub fn remark_flags_for(kind: PremiseKind, beta: f64, conclusion_passed: bool) -> Vec<String> {
    match kind {
        PremiseKind::Theorem { theorem: Theorem::Derivative, .. } if beta == 0.0 && conclusion_passed => {
            vec![CLOSE_TO_CONVEX.to_string()]
        }
        _ => vec![],
    }
}

/// Report-level annotations: members certified `Re f' > 0` are close-to-convex.
pub fn remark_flags(report: &VerificationReport) -> Vec<String> {
    let Ok(kind) = report.result_id.parse::<PremiseKind>() else {
        return vec![];
    };
    remark_flags_for(kind, report.params.beta, report.conclusion_pass > 0)
}

/// Runs `trials` sampled members through `cell`.
pub fn run_cell(cell: &Cell, trials: usize, seed: u64, cfg: &SamplerConfig) -> VerificationReport {
    let mut report = VerificationReport {
        result_id: cell.kind.to_string(),
        params: cell.params,
        fixed: cell.class.fixed,
        delta: cell.delta,
        stated_signature: cell.stated_signature,
        effective_signature: cell.effective_signature,
        seed,
        trials,
        sampling_failures: 0,
        premise_pass: 0,
        premise_inconclusive: 0,
        conclusion_pass: 0,
        implication_violations: 0,
        worst_margin_pair: None,
        min_premise_margin: None,
        min_conclusion_margin: None,
        witnesses: vec![],
        annotations: vec![],
    };
    for i in 0..trials {
        let mut rng = stream_rng(seed, i as u64);
        let outcome = sample_member_with(&cell.class, &mut rng, cfg)
            .and_then(|m| cell.evaluate(&m, false).map(|o| (m, o)));
        let (member, outcome) = match outcome {
            Ok(x) => x,
            Err(_) => {
                report.sampling_failures += 1;
                continue;
            }
        };
        match outcome.premise.verdict {
            Verdict::Holds => report.premise_pass += 1,
            Verdict::Inconclusive => report.premise_inconclusive += 1,
            Verdict::Fails => {}
        }
        let Some(conclusion) = outcome.conclusion else { continue };
        if !outcome.premise.holds() {
            continue;
        }
        if conclusion.holds() {
            report.conclusion_pass += 1;
        }
        let pm = outcome.premise.margin;
        let cm = conclusion.margin;
        report.min_premise_margin = Some(report.min_premise_margin.map_or(pm, |m| m.min(pm)));
        if report.worst_margin_pair.is_none_or(|(_, c)| cm < c) {
            report.worst_margin_pair = Some((pm, cm));
            report.min_conclusion_margin = Some(cm);
        }
        if outcome.is_violation() {
            report.implication_violations += 1;
            if report.witnesses.len() < MAX_WITNESSES {
                report.witnesses.push(MemberDescriptor::from_member(&cell.class, &member));
            }
        }
    }
    report.annotations = remark_flags(&report);
    report
}

pub fn verify_lemma(
    lemma: crate::expressions::Lemma,
    params: ParameterSet,
    trials: usize,
    seed: u64,
    cfg: &HarnessConfig,
) -> Result<VerificationReport> {
    let cell = Cell::new(PremiseKind::Lemma(lemma), params, &cfg.grid)?;
    Ok(run_cell(&cell, trials, seed, &cfg.sampler))
}

/// `params.mu` is the theorem's `mu`; the fixed coefficient `b` follows
/// from it.
pub fn verify_theorem(
    kind: PremiseKind,
    params: ParameterSet,
    trials: usize,
    seed: u64,
    cfg: &HarnessConfig,
) -> Result<VerificationReport> {
    if !matches!(kind, PremiseKind::Theorem { .. }) {
        return Err(Error::NotTheoremPremise(kind.to_string()));
    }
    let cell = Cell::new(kind, params, &cfg.grid)?;
    Ok(run_cell(&cell, trials, seed, &cfg.sampler))
}

/// Either entry point, dispatched on the kind.
pub fn verify(kind: PremiseKind, params: ParameterSet, trials: usize, seed: u64, cfg: &HarnessConfig) -> Result<VerificationReport> {
    match kind {
        PremiseKind::Lemma(l) => verify_lemma(l, params, trials, seed, cfg),
        PremiseKind::Theorem { .. } => verify_theorem(kind, params, trials, seed, cfg),
    }
}

/// Outcome for one given member, as used by the `check` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberCheck {
    pub result_id: String,
    pub delta: f64,
    pub premise: SubordinationCheck,
    pub conclusion: SubordinationCheck,
    pub violation: bool,
    pub annotations: Vec<String>,
}

pub fn check_member(
    kind: PremiseKind,
    params: ParameterSet,
    member: &crate::series::LaurentSeries,
    grid: &SampleGrid,
) -> Result<MemberCheck> {
    let cell = Cell::new(kind, params, grid)?;
    let out = cell.evaluate(member, true)?;
    let conclusion = out.conclusion.expect("always evaluated");
    Ok(MemberCheck {
        result_id: kind.to_string(),
        delta: cell.delta,
        premise: out.premise,
        conclusion,
        violation: out.is_violation(),
        annotations: remark_flags_for(kind, params.beta, conclusion.holds()),
    })
}

/// Cells of the default suite. Each (result, beta) pair gets the lattice
/// points whose premise pass rate sits well inside (0, 1), so the
/// implication is actually exercised rather than vacuously true.
const DEFAULT_CELLS: &[(&str, f64, f64, f64, u32, f64)] = &[
    // (result, alpha, beta, gamma, n, mu)
    ("L2_4", 2.0, -0.5, 1.0, 3, 0.5),
    ("L2_4", 0.5, -0.5, 1.0, 1, 1.0),
    ("L2_4", 2.0, 0.0, 1.0, 2, 0.5),
    ("L2_4", 1.0, 0.0, 2.0, 1, 0.5),
    ("L2_4", 1.0, 0.25, 0.5, 2, 0.5),
    ("L2_4", 1.0, 0.25, 0.5, 3, 0.5),
    ("L2_4", 0.5, 0.75, 2.0, 2, 0.0),
    ("L2_4", 1.0, 0.75, 2.0, 2, 0.0),
    ("L2_5", 0.5, -0.5, 1.0, 2, 1.0),
    ("L2_5", 1.0, -0.5, 1.0, 2, 1.0),
    ("L2_5", 0.5, 0.0, 2.0, 1, 0.5),
    ("L2_5", 1.0, 0.0, 2.0, 1, 0.5),
    ("L2_5", 0.5, 0.25, 1.0, 1, 0.5),
    ("L2_5", 1.0, 0.25, 1.0, 1, 0.5),
    ("L2_5", 0.5, 0.75, 2.0, 2, 0.0),
    ("L2_5", 1.0, 0.75, 2.0, 2, 0.0),
    ("L2_6", 0.5, -0.5, 0.5, 1, 0.5),
    ("L2_6", 0.5, -0.5, 1.0, 1, 0.5),
    ("L2_6", 2.0, 0.0, 0.5, 2, 0.0),
    ("L2_6", 2.0, 0.0, 1.0, 2, 0.0),
    ("L2_6", 2.0, 0.25, 0.5, 1, 0.0),
    ("L2_6", 2.0, 0.25, 1.0, 1, 0.0),
    ("L2_6", 2.0, 0.75, 0.5, 2, 0.0),
    ("L2_6", 2.0, 0.75, 1.0, 2, 0.0),
    ("L2_7", 0.5, -0.5, 0.5, 1, 0.0),
    ("L2_7", 0.5, -0.5, 1.0, 1, 0.0),
    ("L2_7", 0.5, 0.0, 0.5, 1, 0.0),
    ("L2_7", 0.5, 0.0, 0.5, 2, 0.0),
    ("L2_7", 0.5, 0.25, 0.5, 2, 0.0),
    ("L2_7", 0.5, 0.25, 1.0, 2, 0.0),
    ("L2_7", 0.5, 0.75, 0.5, 2, 0.0),
    ("L2_7", 0.5, 0.75, 1.0, 2, 0.0),
    ("L2_8", 2.0, -0.5, 0.5, 2, 0.5),
    ("L2_8", 0.5, -0.5, 0.5, 2, 0.5),
    ("L2_8", 1.0, 0.0, 0.5, 1, 0.5),
    ("L2_8", 2.0, 0.0, 0.5, 1, 0.5),
    ("L2_8", 0.5, 0.25, 0.5, 1, 0.5),
    ("L2_8", 2.0, 0.25, 0.5, 1, 0.5),
    ("L2_8", 2.0, 0.75, 2.0, 1, 0.0),
    ("L2_8", 0.5, 0.75, 0.5, 2, 0.0),
    ("L2_9", 0.5, -0.5, 0.5, 1, 0.5),
    ("L2_9", 1.0, -0.5, 0.5, 1, 0.5),
    ("L2_9", 0.5, 0.0, 2.0, 1, 0.5),
    ("L2_9", 1.0, 0.0, 2.0, 1, 0.5),
    ("L2_9", 0.5, 0.25, 0.5, 2, 0.5),
    ("L2_9", 0.5, 0.25, 0.5, 3, 0.5),
    ("L2_9", 0.5, 0.75, 2.0, 2, 0.0),
    ("L2_9", 1.0, 0.75, 2.0, 2, 0.0),
    ("T2_1.1", 0.5, -0.5, 0.5, 1, 0.0),
    ("T2_1.1", 1.0, 0.0, 1.0, 2, 0.0),
    ("T2_1.1", 0.5, 0.25, 1.0, 2, 0.0),
    ("T2_1.1", 0.5, 0.75, 1.0, 1, 0.0),
    ("T2_1.2", 0.5, -0.5, 1.0, 1, 0.0),
    ("T2_1.2", 0.5, 0.0, 1.0, 2, 0.0),
    ("T2_1.2", 0.5, 0.25, 1.0, 2, 0.0),
    ("T2_1.2", 0.5, 0.75, 1.0, 1, 0.0),
    ("T2_1.3", 0.5, -0.5, 1.0, 3, 0.0),
    ("T2_1.3", 0.5, 0.0, 1.0, 3, 0.0),
    ("T2_1.3", 0.5, 0.25, 1.0, 3, 0.0),
    ("T2_1.3", 0.5, 0.75, 1.0, 1, 0.0),
    ("T2_1.4", 0.5, -0.5, 1.0, 1, 0.25),
    ("T2_1.4", 0.5, 0.0, 1.0, 1, 0.0),
    ("T2_1.4", 0.5, 0.25, 1.0, 2, 0.0),
    ("T2_1.4", 0.5, 0.75, 1.0, 2, 0.0),
    ("T2_3.1", 0.5, -0.5, 1.0, 2, 1.0),
    ("T2_3.1", 0.5, 0.0, 1.0, 2, 0.0),
    ("T2_3.1", 2.0, 0.25, 1.0, 3, 0.0),
    ("T2_3.1", 0.5, 0.75, 1.0, 2, 0.0),
    ("T2_3.2", 0.5, -0.5, 1.0, 1, 0.0),
    ("T2_3.2", 0.5, 0.0, 1.0, 2, 0.0),
    ("T2_3.2", 0.5, 0.25, 1.0, 3, 0.0),
    ("T2_3.2", 0.5, 0.75, 1.0, 2, 0.0),
    ("T2_3.3", 0.5, -0.5, 1.0, 3, 0.0),
    ("T2_3.3", 0.5, 0.0, 1.0, 3, 0.0),
    ("T2_3.3", 0.5, 0.25, 1.0, 3, 0.0),
    ("T2_3.3", 0.5, 0.75, 1.0, 2, 0.0),
    ("T2_3.4", 0.5, -0.5, 1.0, 2, 0.0),
    ("T2_3.4", 0.5, 0.0, 1.0, 1, 0.0),
    ("T2_3.4", 0.5, 0.25, 1.0, 3, 0.0),
    ("T2_3.4", 0.5, 0.75, 1.0, 3, 0.0),
];

const MEROMORPHIC_CELLS: &[(&str, f64, f64, f64, u32, f64)] = &[
    ("T2_2.1", 1.0, 0.0, 1.0, 1, 0.5),
    ("T2_2.2", 1.0, 0.0, 1.0, 1, 0.5),
    ("T2_2.3", 1.0, 0.0, 1.0, 1, 0.5),
    ("T2_2.4", 1.0, 0.0, 1.0, 1, 0.5),
    ("T2_2.1", 1.0, 0.25, 1.0, 1, 0.5),
    ("T2_2.2", 1.0, 0.25, 1.0, 1, 0.5),
    ("T2_2.3", 1.0, 0.25, 1.0, 1, 0.5),
    ("T2_2.4", 1.0, 0.25, 1.0, 1, 0.5),
];

fn cells(table: &[(&str, f64, f64, f64, u32, f64)]) -> Vec<(PremiseKind, ParameterSet)> {
    table
        .iter()
        .map(|&(id, alpha, beta, gamma, n, mu)| {
            let kind = id.parse().expect("suite id");
            (kind, ParameterSet { alpha, beta, gamma, n, mu })
        })
        .collect()
}

/// Analytic lemmas and the analytic theorems over the beta values
/// -0.5, 0, 0.25 and 0.75.
pub fn default_suite() -> Vec<(PremiseKind, ParameterSet)> {
    cells(DEFAULT_CELLS)
}

/// The meromorphic theorem; reported, never asserted.
pub fn meromorphic_suite() -> Vec<(PremiseKind, ParameterSet)> {
    cells(MEROMORPHIC_CELLS)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::ClassSpec;
    use crate::expressions::Lemma;
    use crate::series::LaurentSeries;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn params(alpha: f64, beta: f64, gamma: f64, n: u32, mu: f64) -> ParameterSet {
        ParameterSet::new(alpha, beta, gamma, n, mu).unwrap()
    }

    #[test]
    fn linear_lemma_grazing_premise() {
        // p = 1 + z, gamma = 1, beta = -1/5: delta = -1 and premise 1 + 2z
        let p = LaurentSeries::with_order(0, vec![re(1.0), re(1.0)], 16);
        let ps = params(0.0, -0.2, 1.0, 1, 1.0);
        let out = check_member(PremiseKind::Lemma(Lemma::Linear), ps, &p, &SampleGrid::default()).unwrap();
        assert!((out.delta + 1.0).abs() < 1e-15);
        assert!((out.premise.margin - (1.0 - 2.0 * 0.999 - -1.0)).abs() < 1e-12);
        assert!(out.premise.holds());
        assert!(out.conclusion.holds());
        assert!((out.conclusion.margin - (1.0 - 0.999 + 0.2)).abs() < 1e-12);
        assert!(!out.violation);
    }

    #[test]
    fn constant_p_passes_everything() {
        let p = LaurentSeries::one(16);
        for beta in [-0.5, 0.0, 0.75] {
            let out = check_member(PremiseKind::Lemma(Lemma::Linear), params(0.0, beta, 1.0, 1, 0.0), &p, &SampleGrid::default())
                .unwrap();
            assert!((out.conclusion.margin - (1.0 - beta)).abs() < 1e-15);
            assert!(out.premise.holds() && out.conclusion.holds());
        }
    }

    #[test]
    fn koebe_first_starlike_premise() {
        let koebe = LaurentSeries::new(1, (1..=4000).map(|k| re(k as f64)).collect());
        let grid = SampleGrid::new(vec![0.5, 0.9], 360, 1e-9).unwrap();
        let kind = PremiseKind::theorem(Theorem::Starlike, 1).unwrap();
        let out = check_member(kind, params(1.0, 0.0, 1.0, 1, 2.0), &koebe, &grid).unwrap();
        assert!((out.delta + 0.5).abs() < 1e-15);
        assert!(out.conclusion.holds());
        assert!((out.conclusion.margin - 0.1 / 1.9).abs() < 1e-9);
    }

    #[test]
    fn meromorphic_signature_labels() {
        let kind = PremiseKind::theorem(Theorem::MeromorphicStarlike, 2).unwrap();
        let cell = Cell::new(kind, params(1.0, 0.0, 1.0, 1, 0.5), &SampleGrid::default()).unwrap();
        assert_eq!(cell.class.fixed, -0.25);
        assert_eq!(cell.stated_signature, Some(SignaturePair { n: 1, mu: 0.5 }));
        let eff = cell.effective_signature.unwrap();
        assert_eq!(eff.n, 2);
        assert!((eff.mu - 0.5).abs() < 1e-12);
    }

    #[test]
    fn derivative_premise_four_target() {
        let kind = PremiseKind::theorem(Theorem::Derivative, 4).unwrap();
        let ps = params(0.0, 0.75, 1.0, 1, 0.5);
        let cell = Cell::new(kind, ps, &SampleGrid::default()).unwrap();
        assert_eq!(cell.premise_target, HalfPlaneTarget::from_scaled(cell.delta).unwrap());
        let b = 0.25;
        let f = make_member(&ClassSpec::new(Family::A, 1, b).unwrap(), &[], 8).unwrap();
        // zf''/f' = 2bz/(1+2bz)
        let z = Complex64::from_polar(0.7, 1.1);
        let pw = PointwisePremise::new(kind, &f, 0.0, 1.0).unwrap();
        let expect = z * 2.0 * b / (1.0 + z * 2.0 * b);
        assert!((crate::subordination::DiskMap::value_at(&pw, z).unwrap() - expect).norm() < 1e-15);
    }

    #[test]
    fn close_to_convex_annotation() {
        let d = PremiseKind::theorem(Theorem::Derivative, 2).unwrap();
        let s = PremiseKind::theorem(Theorem::Starlike, 2).unwrap();
        assert_eq!(remark_flags_for(d, 0.0, true), vec![CLOSE_TO_CONVEX.to_string()]);
        assert!(remark_flags_for(d, 0.3, true).is_empty());
        assert!(remark_flags_for(s, 0.0, true).is_empty());
        let f = make_member(&ClassSpec::new(Family::A, 1, 0.2).unwrap(), &[], 8).unwrap();
        let out = check_member(d, params(1.0, 0.0, 1.0, 1, 0.4), &f, &SampleGrid::default()).unwrap();
        assert_eq!(out.annotations, vec![CLOSE_TO_CONVEX.to_string()]);
    }

    #[test]
    fn small_run_is_deterministic_and_clean() {
        let cfg = HarnessConfig::default();
        let ps = params(1.0, 0.25, 1.0, 1, 0.5);
        let a = verify_lemma(Lemma::Quadratic, ps, 60, 7, &cfg).unwrap();
        let b = verify_lemma(Lemma::Quadratic, ps, 60, 7, &cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.implication_violations, 0);
        assert!(a.witnesses.is_empty());
        assert_eq!(a.csv_row().split(',').count(), CSV_HEADER.split(',').count());
    }

    #[test]
    fn theorem_entry_rejects_lemmas() {
        let r = verify_theorem(PremiseKind::Lemma(Lemma::Linear), params(0.0, 0.0, 1.0, 1, 1.0), 1, 0, &HarnessConfig::default());
        assert!(matches!(r, Err(Error::NotTheoremPremise(_))));
    }

    #[test]
    fn suites_are_well_formed() {
        let default = default_suite();
        assert_eq!(default.len(), 80);
        for (kind, p) in &default {
            p.validate().unwrap();
            assert!(!matches!(kind, PremiseKind::Theorem { theorem: Theorem::MeromorphicStarlike, .. }));
            Cell::new(*kind, *p, &SampleGrid::default()).unwrap();
        }
        for beta in [-0.5, 0.0, 0.25, 0.75] {
            assert_eq!(default.iter().filter(|(_, p)| p.beta == beta).count(), 20);
        }
        assert!(meromorphic_suite()
            .iter()
            .all(|(k, _)| matches!(k, PremiseKind::Theorem { theorem: Theorem::MeromorphicStarlike, .. })));
    }
}
