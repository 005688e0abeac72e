//! The functions `psi(r, s)` behind each lemma and a scan of
//! `Re psi(i rho, sigma)` on and below the boundary `sigma = sigma_max(rho)`.
//!
//! Each `psi` is the lemma's premise written through `p = (1 - beta) q + beta`
//! and shifted by its threshold, so admissibility means `Re psi <= 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classes::ParameterSet;
use crate::error::{Error, Result};
use crate::expressions::Lemma;
use crate::thresholds::{self, sigma_max};

/// Distance to a pole of `psi` below which evaluation is refused.
pub const POLE_TOL: f64 = 1e-12;
pub const DEFAULT_DEPTH: usize = 4;
pub const RHO_CAP: f64 = 50.0;
/// Odd, so that `rho = 0` is on the grid.
pub const DEFAULT_RHO_POINTS: usize = 401;

/// The threshold a lemma's premise is measured against.
pub fn lemma_threshold(lemma: Lemma, p: &ParameterSet) -> Result<f64> {
    let ParameterSet { alpha, beta, gamma, n, mu } = *p;
    match lemma {
        Lemma::Quadratic => thresholds::delta_quadratic(alpha, beta, gamma, n, mu),
        Lemma::Linear => thresholds::delta_linear(beta, gamma, n, mu),
        Lemma::MixedLogDerivative => thresholds::delta_logderiv_mixed(alpha, beta, n, mu),
        Lemma::LogDerivative => thresholds::delta_logderiv_pure(beta, n, mu),
        Lemma::BriotBouquet => thresholds::delta_briot_bouquet(alpha, beta, gamma, n, mu),
        Lemma::Square => thresholds::delta_square(beta, gamma, n, mu),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiSpec {
    pub lemma: Lemma,
    pub params: ParameterSet,
    /// The lemma's threshold, as computed by the thresholds module.
    pub delta: f64,
    /// Added to `delta` when evaluating; zero for the lemma as stated.
    pub shift: f64,
}

impl PsiSpec {
    pub fn new(lemma: Lemma, params: ParameterSet) -> Result<Self> {
        params.validate()?;
        let delta = lemma_threshold(lemma, &params)?;
        Ok(Self { lemma, params, delta, shift: 0.0 })
    }

    /// Same `psi` with the threshold moved by `shift`.
    pub fn shifted(mut self, shift: f64) -> Self {
        self.shift = shift;
        self
    }

    pub fn effective_delta(&self) -> f64 {
        self.delta + self.shift
    }
}

fn checked_div(num: Complex64, den: Complex64, what: &str) -> Result<Complex64> {
    if den.norm() < POLE_TOL {
        return Err(Error::PoleHit(what.to_string()));
    }
    Ok(num / den)
}

pub fn psi_eval(spec: &PsiSpec, r: Complex64, s: Complex64) -> Result<Complex64> {
    let ParameterSet { alpha, beta, gamma, .. } = spec.params;
    let delta = spec.effective_delta();
    let b1 = 1.0 - beta;
    let p = r * b1 + beta;
    Ok(match spec.lemma {
        Lemma::Quadratic => {
            r * (b1 * (1.0 - alpha + 2.0 * alpha * beta))
                + r * r * (alpha * b1 * b1)
                + s * (gamma * b1)
                + ((1.0 - alpha) * beta + alpha * beta * beta - delta)
        }
        Lemma::Linear => r * b1 + s * (gamma * b1) + (beta - delta),
        Lemma::MixedLogDerivative => r * b1 + checked_div(s * (alpha * b1), p, "(1-beta) r + beta = 0")? + (beta - delta),
        Lemma::LogDerivative => checked_div(s * b1, p, "(1-beta) r + beta = 0")? - delta,
        Lemma::BriotBouquet => {
            r * b1 + checked_div(s * b1, p * alpha + gamma, "alpha((1-beta) r + beta) + gamma = 0")? + (beta - delta)
        }
        Lemma::Square => p * p + s * (gamma * b1) - delta,
    })
}

/// `rho` values in `[-cap, cap]` on a hyperbolic map `cap sinh(c t)/sinh(c)`
/// of a uniform `t`: spacing ~1e-2 near zero, ~1 at the ends.
pub fn hyperbolic_rho_grid(points: usize, cap: f64) -> Vec<f64> {
    const STRETCH: f64 = 6.0;
    if points <= 1 {
        return vec![0.0];
    }
    let last = (points - 1) as f64;
    (0..points)
        .map(|j| {
            let t = 2.0 * j as f64 / last - 1.0;
            let rho = cap * (STRETCH * t).sinh() / STRETCH.sinh();
            if rho.abs() < 1e-15 { 0.0 } else { rho }
        })
        .collect()
}

pub fn default_rho_grid() -> Vec<f64> {
    hyperbolic_rho_grid(DEFAULT_RHO_POINTS, RHO_CAP)
}

pub const LATTICE_BETA: [f64; 5] = [-0.5, 0.0, 0.25, 0.5, 0.75];
pub const LATTICE_ALPHA_GAMMA: [f64; 3] = [0.5, 1.0, 2.0];
pub const LATTICE_N: [u32; 3] = [1, 2, 3];
pub const LATTICE_MU: [f64; 3] = [0.0, 1.0, 2.0];

/// Parameter lattice scanned for `lemma`. Parameters the lemma ignores are
/// held at 1 instead of multiplying the lattice.
pub fn lattice(lemma: Lemma) -> Vec<ParameterSet> {
    let alphas: &[f64] = if lemma.uses_alpha() { &LATTICE_ALPHA_GAMMA } else { &[1.0] };
    let gammas: &[f64] = if lemma.uses_gamma() { &LATTICE_ALPHA_GAMMA } else { &[1.0] };
    let mut out = Vec::new();
    for &beta in &LATTICE_BETA {
        for &alpha in alphas {
            for &gamma in gammas {
                for &n in &LATTICE_N {
                    for &mu in &LATTICE_MU {
                        out.push(ParameterSet { alpha, beta, gamma, n, mu });
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub rho: f64,
    pub sigma: f64,
    pub re_psi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub max_re: f64,
    pub argmax: ScanPoint,
    /// Grid points that landed on a pole of `psi`.
    pub skipped: Vec<(f64, f64)>,
    /// Row-major: for each `rho`, the `depth + 1` sigma levels.
    pub table: Vec<ScanPoint>,
    pub depth: usize,
}

impl ScanResult {
    pub fn admissible(&self, tol: f64) -> bool {
        self.max_re <= tol
    }

    /// True when `Re psi` does not decrease as `sigma` increases towards the
    /// boundary, along every `rho` of the scan.
    pub fn nondecreasing_in_sigma(&self, tol: f64) -> bool {
        let mut by_rho: std::collections::BTreeMap<u64, Vec<ScanPoint>> = Default::default();
        for pt in &self.table {
            by_rho.entry(pt.rho.to_bits()).or_default().push(*pt);
        }
        by_rho.values_mut().all(|col| {
            col.sort_by(|a, b| a.sigma.total_cmp(&b.sigma));
            col.windows(2).all(|w| w[1].re_psi >= w[0].re_psi - tol)
        })
    }

    /// `Re psi(i rho, sigma_max(rho))` for a `rho` on the scan grid.
    pub fn on_boundary(&self, rho: f64) -> Option<f64> {
        self.table
            .iter()
            .filter(|pt| pt.rho == rho)
            .max_by(|a, b| a.sigma.total_cmp(&b.sigma))
            .map(|pt| pt.re_psi)
    }

    /// The maximum is (up to `tol`) attained at `rho = 0` on the boundary.
    pub fn attained_at_origin(&self, tol: f64) -> bool {
        self.on_boundary(0.0).is_some_and(|v| v >= self.max_re - tol)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("rho,sigma,re_psi\n");
        for pt in &self.table {
            out.push_str(&format!("{},{},{}\n", pt.rho, pt.sigma, pt.re_psi));
        }
        out
    }
}

/// Evaluates `Re psi(i rho, sigma)` for each `rho` and
/// `sigma = sigma_max(rho) (1 + k/depth)`, `k = 0..=depth`.
/// Ties for the maximum go to the smallest `|rho|`, then the largest sigma.
pub fn boundary_scan(spec: &PsiSpec, rho_grid: &[f64], depth: usize) -> Result<ScanResult> {
    let ParameterSet { beta, n, mu, .. } = spec.params;
    if beta > 1.0 {
        return Err(Error::Domain(format!(
            "beta = {beta} > 1 flips the sign of the sigma coefficient; not scanned"
        )));
    }
    if rho_grid.is_empty() || depth == 0 {
        return Err(Error::InvalidGrid("need at least one rho and depth >= 1".into()));
    }
    let mut table = Vec::with_capacity(rho_grid.len() * (depth + 1));
    let mut skipped = Vec::new();
    let mut best: Option<ScanPoint> = None;
    for &rho in rho_grid {
        let edge = sigma_max(rho, n, mu)?;
        for k in 0..=depth {
            let sigma = edge * (1.0 + k as f64 / depth as f64);
            match psi_eval(spec, Complex64::new(0.0, rho), Complex64::new(sigma, 0.0)) {
                Ok(v) => {
                    let pt = ScanPoint { rho, sigma, re_psi: v.re };
                    table.push(pt);
                    let better = match best {
                        None => true,
                        Some(b) => {
                            pt.re_psi > b.re_psi
                                || (pt.re_psi == b.re_psi
                                    && (pt.rho.abs() < b.rho.abs()
                                        || (pt.rho.abs() == b.rho.abs() && pt.sigma > b.sigma)))
                        }
                    };
                    if better {
                        best = Some(pt);
                    }
                }
                Err(Error::PoleHit(_)) => skipped.push((rho, sigma)),
                Err(e) => return Err(e),
            }
        }
    }
    let argmax = best.ok_or_else(|| Error::InvalidGrid("every grid point hit a pole".into()))?;
    Ok(ScanResult { max_re: argmax.re_psi, argmax, skipped, table, depth })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn spec(lemma: Lemma, alpha: f64, beta: f64, gamma: f64, n: u32, mu: f64) -> PsiSpec {
        PsiSpec::new(lemma, ParameterSet::new(alpha, beta, gamma, n, mu).unwrap()).unwrap()
    }

    #[test]
    fn psi_at_simple_points() {
        let s = spec(Lemma::Linear, 0.0, 0.3, 1.0, 1, 2.0);
        assert!((psi_eval(&s, c(1.0, 0.0), c(0.0, 0.0)).unwrap().re - (1.0 - s.delta)).abs() < 1e-15);

        let s = spec(Lemma::LogDerivative, 0.0, 0.6, 0.0, 2, 1.0);
        assert!((psi_eval(&s, c(1.0, 0.0), c(0.0, 0.0)).unwrap() - c(-s.delta, 0.0)).norm() < 1e-15);

        let s = spec(Lemma::Quadratic, 1.0, 0.0, 1.0, 1, 2.0);
        let v = psi_eval(&s, c(0.0, 1.0), c(-1.0, 0.0)).unwrap();
        assert!((v.re - (-2.0 - s.delta)).abs() < 1e-15);
        assert!((v.re - (-1.5)).abs() < 1e-15);
    }

    #[test]
    fn pole_is_reported() {
        let s = spec(Lemma::LogDerivative, 0.0, 0.0, 0.0, 1, 2.0);
        assert!(matches!(psi_eval(&s, c(0.0, 0.0), c(-0.5, 0.0)), Err(Error::PoleHit(_))));
        let scan = boundary_scan(&s, &default_rho_grid(), 4).unwrap();
        assert_eq!(scan.skipped.len(), 5);
        assert!(scan.skipped.iter().all(|&(rho, _)| rho == 0.0));
    }

    #[test]
    fn rho_grid_shape() {
        let g = default_rho_grid();
        assert_eq!(g.len(), 401);
        assert_eq!(g[200], 0.0);
        assert!((g[0] + 50.0).abs() < 1e-12 && (g[400] - 50.0).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert!(g[201] < 0.01);
        assert!(g[400] - g[399] < 2.0);
    }

    #[test]
    fn linear_lemma_is_tight_at_origin() {
        let s = spec(Lemma::Linear, 0.0, 0.0, 1.0, 1, 2.0);
        let scan = boundary_scan(&s, &default_rho_grid(), 4).unwrap();
        assert!(scan.max_re.abs() <= 1e-15);
        assert_eq!(scan.argmax.rho, 0.0);
        assert_eq!(scan.argmax.sigma, -0.5);

        // at rho = 1: gamma sigma_max(1) - delta = -1 + 1/2
        let v = psi_eval(&s, c(0.0, 1.0), c(sigma_max(1.0, 1, 2.0).unwrap(), 0.0)).unwrap();
        assert!((v.re + 0.5).abs() < 1e-15);
    }

    #[test]
    fn shifted_threshold_breaks_admissibility() {
        // lowering the threshold enlarges the premise set
        let s = spec(Lemma::Linear, 0.0, 0.0, 1.0, 1, 2.0).shifted(-0.1);
        let scan = boundary_scan(&s, &default_rho_grid(), 4).unwrap();
        assert!((scan.max_re - 0.1).abs() < 1e-12);
        assert!(!scan.admissible(1e-9));
        let s = spec(Lemma::Linear, 0.0, 0.0, 1.0, 1, 2.0).shifted(0.1);
        let scan = boundary_scan(&s, &default_rho_grid(), 4).unwrap();
        assert!((scan.max_re + 0.1).abs() < 1e-12);
    }

    #[test]
    fn logderivative_argmax_follows_branch() {
        let grid = default_rho_grid();
        for beta in [0.5, 0.75] {
            let scan = boundary_scan(&spec(Lemma::LogDerivative, 0.0, beta, 0.0, 2, 1.0), &grid, 4).unwrap();
            assert!(scan.attained_at_origin(1e-12), "beta = {beta}");
            assert!(scan.max_re.abs() <= 1e-12);
        }
        let scan = boundary_scan(&spec(Lemma::LogDerivative, 0.0, 0.25, 0.0, 2, 1.0), &grid, 4).unwrap();
        assert_eq!(scan.argmax.rho.abs(), 50.0);
        assert!(scan.max_re <= 0.0);
        let scan = boundary_scan(&spec(Lemma::MixedLogDerivative, 1.0, 0.25, 0.0, 1, 0.0), &grid, 4).unwrap();
        assert_eq!(scan.argmax.rho.abs(), 50.0);
    }

    #[test]
    fn monotone_in_sigma_and_csv() {
        let s = spec(Lemma::BriotBouquet, 2.0, 0.25, 0.5, 3, 1.0);
        let scan = boundary_scan(&s, &hyperbolic_rho_grid(41, 50.0), 2).unwrap();
        assert!(scan.nondecreasing_in_sigma(0.0));
        assert_eq!(scan.table.len(), 41 * 3);
        let csv = scan.to_csv();
        assert!(csv.starts_with("rho,sigma,re_psi\n"));
        assert_eq!(csv.lines().count(), 41 * 3 + 1);
    }

    #[test]
    fn beta_above_one_is_refused() {
        let s = spec(Lemma::Linear, 0.0, 1.5, 1.0, 1, 1.0);
        assert!(matches!(boundary_scan(&s, &default_rho_grid(), 4), Err(Error::Domain(_))));
    }

    #[test]
    fn lattice_sizes() {
        // 5 betas x 3 n x 3 mu, times 3 per parameter the lemma uses
        assert_eq!(lattice(Lemma::LogDerivative).len(), 45);
        assert_eq!(lattice(Lemma::Linear).len(), 135);
        assert_eq!(lattice(Lemma::BriotBouquet).len(), 405);
        assert!(lattice(Lemma::Square).iter().all(|p| p.alpha == 1.0));
    }
}
