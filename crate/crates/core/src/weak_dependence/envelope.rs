use super::{tau_table, total_sum, CoefficientSequence};
use crate::error::{Error, Result};

/// `j ↦ c·exp(−b√j)` with `b = √(log α · log a)`. The constant `c` is
/// calibrated numerically so the envelope dominates the enumerated τ bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricEnvelope {
    pub c: f64,
    pub b: f64,
}

impl GeometricEnvelope {
    pub fn eval(&self, j: f64) -> f64 {
        self.c * (-self.b * j.sqrt()).exp()
    }
}

/// Exponent `b = √(log α · log a)` of the geometric-case rate.
pub fn geometric_case_rate(alpha: f64, a: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0 && a > 0.0 && a < 1.0) {
        return Err(Error::spec("geometric rate needs α and a in (0, 1)"));
    }
    Ok((alpha.ln() * a.ln()).sqrt())
}

impl GeometricEnvelope {
    /// Smallest `c` with `c·exp(−b√j) ≥ τ(j)` for `j = 1..=j_max`.
    pub fn calibrate(seq: &CoefficientSequence, j_max: usize) -> Result<Self> {
        let CoefficientSequence::Geometric { a, .. } = *seq else {
            return Err(Error::spec("the stretched-exponential envelope needs a geometric sequence"));
        };
        let alpha = total_sum(seq)?.value;
        let b = geometric_case_rate(alpha, a)?;
        let c = tau_table(seq, j_max)?
            .iter()
            .map(|t| t.value / (-b * (t.j as f64).sqrt()).exp())
            .fold(0.0, f64::max);
        Ok(GeometricEnvelope { c, b })
    }
}
