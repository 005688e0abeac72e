//! Closed-form thresholds for every premise, and the admissibility bound.
//!
//! All formulas share the bracket `K = n + (2 - mu)/(2 + mu)`, computed
//! fresh from `(n, mu)` every time. At an exact branch point both branches
//! are evaluated; they must agree to 1e-12 and their mean is returned.

use serde::{Deserialize, Serialize};

use crate::classes::ParameterSet;
use crate::error::{Error, Result};

/// Tolerance used to reject `beta = 1`.
pub const BETA_ONE_TOL: f64 = 1e-9;

const BRANCH_AGREEMENT: f64 = 1e-12;

/// `n + (2 - mu)/(2 + mu)`.
pub fn k_bracket(n: u32, mu: f64) -> f64 {
    n as f64 + (2.0 - mu) / (2.0 + mu)
}

fn check_n_mu(n: u32, mu: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("n must be a positive integer".into()));
    }
    if !(0.0..=2.0).contains(&mu) {
        return Err(Error::Domain(format!("mu = {mu} outside [0, 2]")));
    }
    Ok(())
}

fn check_beta(beta: f64) -> Result<()> {
    if !beta.is_finite() || (beta - 1.0).abs() <= BETA_ONE_TOL {
        return Err(Error::Domain(format!("beta = {beta} must differ from 1")));
    }
    Ok(())
}

fn branch_mean(left: f64, right: f64) -> f64 {
    assert!(
        (left - right).abs() <= BRANCH_AGREEMENT * (1.0 + left.abs()),
        "threshold branches disagree at their common point: {left} vs {right}"
    );
    0.5 * (left + right)
}

/// Upper bound on `sigma` in the admissibility condition:
/// `-(1/2) K (1 + rho^2)`.
pub fn sigma_max(rho: f64, n: u32, mu: f64) -> Result<f64> {
    check_n_mu(n, mu)?;
    Ok(-0.5 * k_bracket(n, mu) * (1.0 + rho * rho))
}

pub(crate) fn quadratic_raw(alpha: f64, beta: f64, gamma: f64, k: f64) -> f64 {
    -(gamma / 2.0) * (1.0 - beta) * k + (1.0 - alpha) * beta + alpha * beta * beta
}

/// Threshold for `(1 - alpha) p + alpha p^2 + gamma z p'`.
pub fn delta_quadratic(alpha: f64, beta: f64, gamma: f64, n: u32, mu: f64) -> Result<f64> {
    check_n_mu(n, mu)?;
    check_beta(beta)?;
    if !(alpha >= 0.0) {
        return Err(Error::Domain(format!("alpha = {alpha} must be nonnegative")));
    }
    if !(gamma > 0.0) {
        return Err(Error::Domain(format!("gamma = {gamma} must be positive")));
    }
    Ok(quadratic_raw(alpha, beta, gamma, k_bracket(n, mu)))
}

/// Threshold for `p + gamma z p'`.
pub fn delta_linear(beta: f64, gamma: f64, n: u32, mu: f64) -> Result<f64> {
    delta_quadratic(0.0, beta, gamma, n, mu)
}

pub(crate) fn logderiv_mixed_raw(alpha: f64, beta: f64, k: f64) -> f64 {
    let low = || -alpha * beta * k / (2.0 * (1.0 - beta)) + beta;
    let high = || -alpha * (1.0 - beta) * k / (2.0 * beta) + beta;
    if beta < 0.5 {
        low()
    } else if beta > 0.5 {
        high()
    } else {
        branch_mean(low(), high())
    }
}

/// Threshold for `p + alpha z p'/p`, split at `beta = 1/2`.
pub fn delta_logderiv_mixed(alpha: f64, beta: f64, n: u32, mu: f64) -> Result<f64> {
    check_n_mu(n, mu)?;
    check_beta(beta)?;
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("alpha = {alpha} must be positive")));
    }
    Ok(logderiv_mixed_raw(alpha, beta, k_bracket(n, mu)))
}

fn logderiv_pure_raw(beta: f64, k: f64) -> f64 {
    let low = || -beta * k / (2.0 * (1.0 - beta));
    let high = || -(1.0 - beta) * k / (2.0 * beta);
    if beta < 0.5 {
        low()
    } else if beta > 0.5 {
        high()
    } else {
        branch_mean(low(), high())
    }
}

/// Threshold for `z p'/p ≺ -2 delta z/(1 - z)`, split at `beta = 1/2`.
pub fn delta_logderiv_pure(beta: f64, n: u32, mu: f64) -> Result<f64> {
    check_n_mu(n, mu)?;
    check_beta(beta)?;
    Ok(logderiv_pure_raw(beta, k_bracket(n, mu)))
}

/// Threshold for the Briot-Bouquet premise `p + z p'/(alpha p + gamma)`,
/// split at `gamma = alpha (1 - 2 beta)`.
pub fn delta_briot_bouquet(alpha: f64, beta: f64, gamma: f64, n: u32, mu: f64) -> Result<f64> {
    check_n_mu(n, mu)?;
    check_beta(beta)?;
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("alpha = {alpha} must be positive")));
    }
    let pole = alpha * beta + gamma;
    if pole.abs() < 1e-12 {
        return Err(Error::Domain("alpha*beta + gamma vanishes".into()));
    }
    let k = k_bracket(n, mu);
    let near = || -0.5 * (1.0 - beta) * k / pole + beta;
    let far = || -0.5 * pole * k / (alpha * alpha * (1.0 - beta)) + beta;
    let split = alpha * (1.0 - 2.0 * beta);
    Ok(if gamma > split {
        near()
    } else if gamma < split {
        far()
    } else {
        branch_mean(near(), far())
    })
}

/// Threshold for `p^2 + gamma z p'`.
pub fn delta_square(beta: f64, gamma: f64, n: u32, mu: f64) -> Result<f64> {
    check_n_mu(n, mu)?;
    check_beta(beta)?;
    if !(gamma > 0.0) {
        return Err(Error::Domain(format!("gamma = {gamma} must be positive")));
    }
    Ok(-(gamma / 2.0) * (1.0 - beta) * k_bracket(n, mu) + beta * beta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    /// Starlikeness and `f'` results for `z + b z^{n+1} + ...`.
    Analytic,
    /// Meromorphic starlikeness for `1/z + b z^n + ...`.
    Meromorphic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSet {
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    pub delta4: f64,
    pub variant: Variant,
}

impl ThresholdSet {
    pub fn get(&self, index: u8) -> f64 {
        match index {
            1 => self.delta1,
            2 => self.delta2,
            3 => self.delta3,
            4 => self.delta4,
            _ => panic!("premise index {index} out of range"),
        }
    }
}

/// The four thresholds of a theorem. The meromorphic variant carries the
/// K-term of the first three with the opposite sign; the fourth is shared.
pub fn threshold_set(params: &ParameterSet, variant: Variant) -> Result<ThresholdSet> {
    params.validate()?;
    let (alpha, beta) = (params.alpha, params.beta);
    let k = params.k();
    let sign = match variant {
        Variant::Analytic => 1.0,
        Variant::Meromorphic => -1.0,
    };
    // With the K-term sign made explicit, each delta is base - sign * kterm.
    let delta1 = (1.0 - alpha) * beta + alpha * beta * beta - sign * (alpha / 2.0) * (1.0 - beta) * k;
    let delta2 = beta - sign * 0.5 * (1.0 - beta) * k;
    let kterm3 = {
        let low = || alpha * beta * k / (2.0 * (1.0 - beta));
        let high = || alpha * (1.0 - beta) * k / (2.0 * beta);
        if beta < 0.5 {
            low()
        } else if beta > 0.5 {
            high()
        } else {
            branch_mean(low(), high())
        }
    };
    let delta3 = beta - sign * kterm3;
    let delta4 = logderiv_pure_raw(beta, k);
    Ok(ThresholdSet { delta1, delta2, delta3, delta4, variant })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    #[test]
    fn sigma_bound_values() {
        assert!(close(sigma_max(0.0, 1, 2.0).unwrap(), -0.5));
        assert!(close(sigma_max(1.0, 1, 0.0).unwrap(), -2.0));
        assert!(close(sigma_max(0.0, 2, 1.0).unwrap(), -7.0 / 6.0));
        assert!(close(sigma_max(3.0, 2, 1.0).unwrap(), sigma_max(-3.0, 2, 1.0).unwrap()));
        assert!(matches!(sigma_max(0.0, 1, 2.5), Err(Error::Domain(_))));
        assert!(matches!(sigma_max(0.0, 1, -0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn quadratic_and_linear() {
        for gamma in [0.5, 1.0, 3.0] {
            for beta in [-0.5, 0.0, 0.3] {
                assert!(close(
                    delta_quadratic(0.0, beta, gamma, 2, 0.7).unwrap(),
                    delta_linear(beta, gamma, 2, 0.7).unwrap()
                ));
            }
        }
        assert!(close(delta_quadratic(1.0, 0.0, 1.0, 1, 2.0).unwrap(), -0.5));
        // alpha = gamma = 1, beta = 1/2, n = 1, mu = 2 against the closed mu = 2 form
        let d = delta_quadratic(1.0, 0.5, 1.0, 1, 2.0).unwrap();
        let closed = 1.0 * 0.5 * (0.5 + 0.5 - 1.0) + 0.5 - 0.5;
        assert!(close(d, 0.0) && close(closed, 0.0));

        assert!(close(delta_linear(0.0, 1.0, 1, 2.0).unwrap(), -0.5));
        assert!(close(delta_linear(0.0, 1.0, 1, 0.0).unwrap(), -1.0));
        assert!(close(delta_linear(0.5, 1.0, 1, 1.0).unwrap(), 1.0 / 6.0));
        assert!(delta_linear(1.0, 1.0, 1, 1.0).is_err());
        assert!(delta_linear(0.2, 0.0, 1, 1.0).is_err());
    }

    #[test]
    fn logderiv_thresholds() {
        for alpha in [0.3, 1.0, 4.0] {
            for (n, mu) in [(1, 0.0), (3, 1.5)] {
                assert_eq!(delta_logderiv_mixed(alpha, 0.0, n, mu).unwrap(), 0.0);
            }
        }
        assert!(close(delta_logderiv_mixed(1.0, 0.5, 1, 2.0).unwrap(), 0.0));
        assert!(close(delta_logderiv_mixed(1.0, 0.75, 1, 2.0).unwrap(), 7.0 / 12.0));
        assert!(delta_logderiv_mixed(0.0, 0.2, 1, 2.0).is_err());

        assert_eq!(delta_logderiv_pure(0.0, 1, 2.0).unwrap(), 0.0);
        assert!(close(delta_logderiv_pure(0.5, 1, 2.0).unwrap(), -0.5));
        assert!(close(delta_logderiv_pure(0.25, 1, 2.0).unwrap(), -1.0 / 6.0));
    }

    #[test]
    fn briot_bouquet_thresholds() {
        // on the branch line gamma = alpha (1 - 2 beta) both branches give -K/2
        for (n, mu) in [(1, 2.0), (2, 0.5)] {
            let k = k_bracket(n, mu);
            assert!(close(delta_briot_bouquet(1.0, 0.0, 1.0, n, mu).unwrap(), -k / 2.0));
        }
        assert!(close(delta_briot_bouquet(1.0, 0.5, 0.0, 1, 2.0).unwrap(), 0.0));
        for beta in [-0.4, 0.0, 0.6] {
            let tiny = delta_briot_bouquet(1e-9, beta, 1.0, 2, 1.0).unwrap();
            assert!((tiny - delta_linear(beta, 1.0, 2, 1.0).unwrap()).abs() < 1e-8);
        }
        assert!(delta_briot_bouquet(1.0, -0.5, 0.5, 1, 1.0).is_err());
    }

    #[test]
    fn square_thresholds() {
        assert!(close(delta_square(0.0, 1.0, 1, 2.0).unwrap(), -0.5));
        assert!(close(delta_square(0.5, 1.0, 1, 2.0).unwrap(), 0.0));
        assert!(close(delta_square(0.0, 2.0, 1, 0.0).unwrap(), -2.0));
    }

    #[test]
    fn theorem_threshold_sets() {
        let p = ParameterSet::new(1.0, 0.0, 1.0, 1, 2.0).unwrap();
        let a = threshold_set(&p, Variant::Analytic).unwrap();
        assert!(close(a.delta1, -0.5) && close(a.delta2, -0.5));
        assert_eq!((a.delta3, a.delta4), (0.0, 0.0));
        let m = threshold_set(&p, Variant::Meromorphic).unwrap();
        assert!(close(m.delta1, 0.5) && close(m.delta2, 0.5));
        assert_eq!((m.delta3, m.delta4), (0.0, 0.0));

        for beta in [-0.7, 0.2, 0.9, 3.0] {
            let p = ParameterSet::new(0.0, beta, 1.0, 2, 1.0).unwrap();
            assert!(close(threshold_set(&p, Variant::Analytic).unwrap().delta1, beta));
        }
    }

    #[test]
    fn analytic_set_matches_lemma_formulas() {
        for &(alpha, beta, n, mu) in &[(0.5, -0.3, 1, 0.4), (2.0, 0.7, 3, 1.9), (1.0, 0.5, 2, 0.0)] {
            let p = ParameterSet::new(alpha, beta, alpha, n, mu).unwrap();
            let t = threshold_set(&p, Variant::Analytic).unwrap();
            assert!(close(t.delta1, delta_quadratic(alpha, beta, alpha, n, mu).unwrap()));
            assert!(close(t.delta2, delta_linear(beta, 1.0, n, mu).unwrap()));
            assert!(close(t.delta3, delta_logderiv_mixed(alpha, beta, n, mu).unwrap()));
            assert!(close(t.delta4, delta_logderiv_pure(beta, n, mu).unwrap()));
        }
    }
}
