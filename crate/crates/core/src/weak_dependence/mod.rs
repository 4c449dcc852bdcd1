//! Weak-dependence coefficient sequences, τ bounds, the stretched-exponential
//! envelope of the geometric case and the factorial-moment condition (A3).

mod a3;
mod envelope;

use crate::error::{Error, Result};

pub use a3::{check_a3, fit_l1_l2, A3Report, A3Row, A3Verdict, EpsSequence, FnEps, GeometricEps, StretchedExpEps};
pub use envelope::{geometric_case_rate, GeometricEnvelope};

/// Truncation point for Riemannian sums.
pub const DEFAULT_TRUNCATION: usize = 1_000_000;

/// Lipschitz coefficients `α_k`, `k ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoefficientSequence {
    /// `α_k = c·a^k`, `a ∈ [0, 1)`.
    Geometric { c: f64, a: f64 },
    /// `α_k = c·k^{−γ}`, `γ > 1`.
    Riemannian { c: f64, gamma: f64 },
}

/// A sum and a bound on its absolute error (0 for closed forms).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumEstimate {
    pub value: f64,
    pub certificate: f64,
}

impl CoefficientSequence {
    pub fn geometric(c: f64, a: f64) -> Result<Self> {
        let s = CoefficientSequence::Geometric { c, a };
        s.validate()?;
        Ok(s)
    }

    pub fn riemannian(c: f64, gamma: f64) -> Result<Self> {
        let s = CoefficientSequence::Riemannian { c, gamma };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            CoefficientSequence::Geometric { c, a } => {
                if !(c >= 0.0 && c.is_finite() && (0.0..1.0).contains(&a)) {
                    return Err(Error::spec("geometric sequence needs c ≥ 0 and a ∈ [0, 1)"));
                }
            }
            CoefficientSequence::Riemannian { c, gamma } => {
                if !(c >= 0.0 && c.is_finite()) {
                    return Err(Error::spec("Riemannian sequence needs c ≥ 0"));
                }
                if !(gamma > 1.0 && gamma.is_finite()) {
                    return Err(Error::spec("Riemannian sequence needs γ > 1"));
                }
            }
        }
        Ok(())
    }

    pub fn term(&self, k: usize) -> f64 {
        match *self {
            CoefficientSequence::Geometric { c, a } => c * a.powi(k as i32),
            CoefficientSequence::Riemannian { c, gamma } => c * (k as f64).powf(-gamma),
        }
    }

    /// Whether `Σ α_k < 1`.
    pub fn is_contraction(&self) -> Result<bool> {
        Ok(total_sum(self)?.value < 1.0)
    }
}

/// `Σ_{k=K+1}^∞ k^{−γ}` lies between the integrals from `K+1` and from `K`;
/// returns their midpoint and half-width.
fn riemann_remainder(from_k: usize, gamma: f64) -> SumEstimate {
    let k = from_k as f64;
    let upper = k.powf(1.0 - gamma) / (gamma - 1.0);
    let lower = (k + 1.0).powf(1.0 - gamma) / (gamma - 1.0);
    SumEstimate { value: 0.5 * (upper + lower), certificate: 0.5 * (upper - lower) }
}

/// `Σ_{k=lo}^{hi} k^{−γ}`, summed from the small end.
fn riemann_partial(lo: usize, hi: usize, gamma: f64) -> f64 {
    (lo..=hi).rev().map(|k| (k as f64).powf(-gamma)).sum()
}

/// `α = Σ_{k≥1} α_k`: `c·a/(1−a)` or `c·ζ(γ)` with truncation at `K`.
pub fn total_sum_truncated(seq: &CoefficientSequence, truncation: usize) -> Result<SumEstimate> {
    seq.validate()?;
    Ok(match *seq {
        CoefficientSequence::Geometric { c, a } => SumEstimate { value: c * a / (1.0 - a), certificate: 0.0 },
        CoefficientSequence::Riemannian { c, gamma } => {
            let k = truncation.max(1);
            let rem = riemann_remainder(k, gamma);
            SumEstimate {
                value: c * (riemann_partial(1, k, gamma) + rem.value),
                certificate: c * rem.certificate,
            }
        }
    })
}

pub fn total_sum(seq: &CoefficientSequence) -> Result<SumEstimate> {
    total_sum_truncated(seq, DEFAULT_TRUNCATION)
}

/// `Σ_{k≥ι+1} α_k`.
pub fn tail_sum(seq: &CoefficientSequence, iota: usize) -> Result<SumEstimate> {
    seq.validate()?;
    if iota == 0 {
        return Err(Error::spec("tail index ι must be at least 1"));
    }
    Ok(match *seq {
        CoefficientSequence::Geometric { c, a } => {
            SumEstimate { value: c * a.powi(iota as i32 + 1) / (1.0 - a), certificate: 0.0 }
        }
        CoefficientSequence::Riemannian { c, gamma } => {
            let k = DEFAULT_TRUNCATION.max(iota);
            let rem = riemann_remainder(k, gamma);
            let partial = if iota < k { riemann_partial(iota + 1, k, gamma) } else { 0.0 };
            SumEstimate { value: c * (partial + rem.value), certificate: c * rem.certificate }
        }
    })
}

/// `τ(j) = min_{1≤ι≤j} α^{j/ι} + Σ_{k≥ι+1} α_k` with its minimiser.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauBound {
    pub j: usize,
    pub value: f64,
    pub argmin_iota: usize,
}

/// Tails `Σ_{k≥ι+1} α_k` for `ι = 1..=max`, from the total by subtraction.
fn tails(seq: &CoefficientSequence, max: usize) -> Result<Vec<f64>> {
    let total = total_sum(seq)?.value;
    if let CoefficientSequence::Geometric { .. } = seq {
        return (1..=max).map(|i| tail_sum(seq, i).map(|s| s.value)).collect();
    }
    let mut head = 0.0;
    Ok((1..=max)
        .map(|i| {
            head += seq.term(i);
            (total - head).max(0.0)
        })
        .collect())
}

fn contraction_total(seq: &CoefficientSequence) -> Result<f64> {
    let alpha = total_sum(seq)?.value;
    if alpha >= 1.0 {
        return Err(Error::Contraction { sum: alpha });
    }
    Ok(alpha)
}

fn minimise(alpha: f64, tails: &[f64], j: usize) -> TauBound {
    let mut best = TauBound { j, value: f64::INFINITY, argmin_iota: 0 };
    for iota in 1..=j {
        let v = alpha.powf(j as f64 / iota as f64) + tails[iota - 1];
        if v < best.value {
            best = TauBound { j, value: v, argmin_iota: iota };
        }
    }
    best
}

/// Full enumeration over `ι ∈ {1, …, j}`. Requires `Σ α_k < 1`.
pub fn tau_bound(seq: &CoefficientSequence, j: usize) -> Result<TauBound> {
    if j == 0 {
        return Err(Error::spec("τ bound needs j ≥ 1"));
    }
    let alpha = contraction_total(seq)?;
    Ok(minimise(alpha, &tails(seq, j)?, j))
}

/// `τ(1), …, τ(j_max)` sharing one tail table.
pub fn tau_table(seq: &CoefficientSequence, j_max: usize) -> Result<Vec<TauBound>> {
    let alpha = contraction_total(seq)?;
    let t = tails(seq, j_max)?;
    Ok((1..=j_max).map(|j| minimise(alpha, &t, j)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use rand::Rng;

    #[test]
    fn geometric_sums() {
        let s = CoefficientSequence::geometric(0.3, 0.5).unwrap();
        assert!((total_sum(&s).unwrap().value - 0.3).abs() < 1e-15);
        assert!((tail_sum(&s, 1).unwrap().value - 0.15).abs() < 1e-15);
        let zero = CoefficientSequence::geometric(0.7, 0.0).unwrap();
        assert_eq!(total_sum(&zero).unwrap().value, 0.0);
        for iota in 1..30 {
            let head: f64 = (1..=iota).map(|k| s.term(k)).sum();
            assert!((head + tail_sum(&s, iota).unwrap().value - 0.3).abs() < 1e-12);
        }
        let mut prev = f64::INFINITY;
        for iota in 1..=50 {
            let t = tail_sum(&s, iota).unwrap().value;
            assert!(t <= prev);
            prev = t;
        }
    }

    #[test]
    fn riemannian_sums() {
        let s = CoefficientSequence::riemannian(1.0, 2.0).unwrap();
        let z2 = std::f64::consts::PI.powi(2) / 6.0;
        let total = total_sum(&s).unwrap();
        assert!(total.certificate <= 1e-9);
        assert!((total.value - z2).abs() <= total.certificate + 1e-12);
        let tail = tail_sum(&s, 1).unwrap();
        assert!((tail.value - (z2 - 1.0)).abs() <= tail.certificate + 1e-12);
        assert!((tail.value - 0.644934).abs() < 1e-6);
        let far = tail_sum(&s, 2_000_000).unwrap();
        assert!((far.value - 1.0 / 2_000_000.5).abs() < 1e-12);
        assert!(CoefficientSequence::riemannian(1.0, 1.0).is_err());
    }

    #[test]
    fn tau_examples() {
        let s = CoefficientSequence::geometric(0.3, 0.5).unwrap();
        let t = tau_bound(&s, 1).unwrap();
        assert!((t.value - 0.45).abs() < 1e-15);
        assert_eq!(t.argmin_iota, 1);
        let table = tau_table(&s, 200).unwrap();
        assert!(table.windows(2).all(|w| w[1].value <= w[0].value));
        assert_eq!(table[99], tau_bound(&s, 100).unwrap());
        let bad = CoefficientSequence::geometric(0.9, 0.6).unwrap();
        assert!(matches!(tau_bound(&bad, 3), Err(Error::Contraction { .. })));
    }

    #[test]
    fn tau_minimisation_certificate() {
        let mut rng = rng_from_seed(8);
        for _ in 0..10 {
            let a = rng.random_range(0.05..0.9);
            let c = rng.random_range(0.01..0.9) * (1.0 - a) / a;
            let s = CoefficientSequence::geometric(c, a).unwrap();
            let alpha = total_sum(&s).unwrap().value;
            for j in [1usize, 7, 40] {
                let t = tau_bound(&s, j).unwrap();
                for iota in 1..=j {
                    let v = alpha.powf(j as f64 / iota as f64) + tail_sum(&s, iota).unwrap().value;
                    assert!(t.value <= v);
                }
            }
        }
    }

    #[test]
    fn riemannian_tau_decreases() {
        let s = CoefficientSequence::riemannian(0.4, 2.5).unwrap();
        let table = tau_table(&s, 100).unwrap();
        assert!(table.windows(2).all(|w| w[1].value <= w[0].value + 1e-15));
    }
}
