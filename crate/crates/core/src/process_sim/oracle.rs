use super::binary::{BinaryDgpSpec, DgpKind};
use crate::error::{Error, Result};

/// Exact quantities for a single-lag binary autoregression without covariates,
/// which is a two-state Markov chain on `{−1, +1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainOracle {
    /// `P(Y_t = 1 | Y_{t−1} = −1)`
    pub up_from_minus: f64,
    /// `P(Y_t = 1 | Y_{t−1} = +1)`
    pub up_from_plus: f64,
    pub stationary_prob_plus: f64,
    /// Misclassification rate of the Bayes classifier `sign(f)`.
    pub zero_one_risk: f64,
    /// Hinge risk of the Bayes classifier; equals `2·zero_one_risk` since the
    /// hinge of a `±1` prediction on `±1` labels is 0 or 2.
    pub hinge_risk: f64,
}

pub fn exact_risk_oracle(spec: &BinaryDgpSpec) -> Result<ChainOracle> {
    let single_lag = matches!(spec.kind(), DgpKind::Dgp1 | DgpKind::CustomAffine)
        && spec.lag_order() == 1
        && spec.covariate().is_none();
    if !single_lag {
        return Err(Error::spec("exact oracle needs a single-lag model without covariates"));
    }
    spec.validate()?;
    let up_from_minus = 0.5 * (1.0 + spec.link(&[-1.0], None));
    let up_from_plus = 0.5 * (1.0 + spec.link(&[1.0], None));
    let leave_plus = 1.0 - up_from_plus;
    if up_from_minus + leave_plus == 0.0 {
        return Err(Error::spec("chain is reducible; no unique stationary law"));
    }
    let pi_plus = up_from_minus / (up_from_minus + leave_plus);
    let pi_minus = 1.0 - pi_plus;
    // Bayes error in each state is min(p, 1 − p).
    let err_minus = up_from_minus.min(1.0 - up_from_minus);
    let err_plus = up_from_plus.min(1.0 - up_from_plus);
    let zero_one_risk = pi_minus * err_minus + pi_plus * err_plus;
    Ok(ChainOracle {
        up_from_minus,
        up_from_plus,
        stationary_prob_plus: pi_plus,
        zero_one_risk,
        hinge_risk: 2.0 * zero_one_risk,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent route: power iteration on the 2×2 transition matrix and a
    /// direct per-state hinge computation for the ±1 Bayes predictor.
    fn power_iteration(p_up_minus: f64, p_up_plus: f64) -> [f64; 2] {
        let mut pi = [0.5, 0.5];
        for _ in 0..10_000 {
            pi = [
                pi[0] * (1.0 - p_up_minus) + pi[1] * (1.0 - p_up_plus),
                pi[0] * p_up_minus + pi[1] * p_up_plus,
            ];
        }
        pi
    }

    #[test]
    fn dgp1_values() {
        let o = exact_risk_oracle(&BinaryDgpSpec::dgp1()).unwrap();
        let pi = power_iteration(0.075, 0.675);
        assert!((o.stationary_prob_plus - pi[1]).abs() < 1e-12);
        assert!((o.stationary_prob_plus - 0.1875).abs() < 1e-12);
        // h0(−1) = −1 wrong with prob 0.075, h0(+1) = +1 wrong with prob 0.325.
        let hinge = pi[0] * (0.075 * 2.0) + pi[1] * (0.325 * 2.0);
        assert!((o.zero_one_risk - 0.121875).abs() < 1e-12);
        assert!((o.hinge_risk - hinge).abs() < 1e-12);
        assert!((o.hinge_risk - 0.24375).abs() < 1e-12);
    }

    #[test]
    fn rejects_other_shapes() {
        assert!(exact_risk_oracle(&BinaryDgpSpec::dgp2()).is_err());
        let two_lags = BinaryDgpSpec::custom_affine(0.0, &[0.3, 0.2]).unwrap();
        assert!(exact_risk_oracle(&two_lags).is_err());
    }
}
