use super::{log_covering_bound, thm1_constants, BoundInputs};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeviationVariant {
    /// Exponential inequality under the factorial-moment condition.
    Prop1_1,
    /// Polynomial-decay inequality with the `log log n` prefactor.
    Prop1_2,
    /// Covering bound combined with the constants `C₁`, `C₂`.
    Mod2,
}

impl std::str::FromStr for DeviationVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prop1_1" => Ok(DeviationVariant::Prop1_1),
            "prop1_2" => Ok(DeviationVariant::Prop1_2),
            "mod2" => Ok(DeviationVariant::Mod2),
            _ => Err(Error::spec(format!("unknown deviation variant `{s}`"))),
        }
    }
}

/// Right-hand side of the uniform deviation inequality
/// `P{sup_h [R(h) − R̂_n(h)] > ε} ≤ …`, evaluated in log space and clipped
/// to `[0, 1]`. Exactly 0 for `ε > 2M`, where the event is impossible.
pub fn deviation_bound_rhs(inputs: &BoundInputs, eps: f64, variant: DeviationVariant) -> Result<f64> {
    inputs.validate()?;
    if !(eps > 0.0) {
        return Err(Error::spec("eps must be positive"));
    }
    if eps > 2.0 * inputs.m {
        return Ok(0.0);
    }
    let (n, m, mu) = (inputs.n, inputs.m, inputs.mu);
    let log_n_cover = log_covering_bound(&inputs.complexity, eps, inputs.g, inputs.c_sigma)?;
    let k = thm1_constants(inputs)?;
    let expo = (2.0 * mu + 3.0) / (mu + 2.0);
    let root = k.c2.powf(1.0 / (mu + 2.0));
    let log_rhs = match variant {
        DeviationVariant::Prop1_1 => {
            let a_n = 2.0 * n * m * m * inputs.psi11() * inputs.l1;
            log_n_cover - (n * n * eps * eps / 8.0) / (a_n + root * (n * eps / 2.0).powf(expo))
        }
        DeviationVariant::Prop1_2 => {
            if n <= 1.0 {
                return Err(Error::Infeasible("the log log n prefactor needs n > 1".into()));
            }
            let a_n = n * inputs.c;
            let b_n = n.powf(0.75) * n.ln() / a_n;
            inputs.c3.ln() + log_n_cover + n.ln().ln()
                - (n * n * eps * eps / 4.0) / (a_n + b_n * (n * eps / 2.0).powf(inputs.nu))
        }
        DeviationVariant::Mod2 => {
            log_n_cover - (n * n * eps * eps / 4.0) / (k.c1 * n + 2.0 * root * (n * m).powf(expo))
        }
    };
    Ok(log_rhs.min(0.0).exp())
}
