use rand::Rng;

use super::binary::CovariateSpec;
use super::trajectory::Trajectory;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

const SQRT3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AcxKind {
    /// `Y_t = (m₀ + Σ m_k|Y_{t−k}|)·ξ_t + f₀ + Σ f_k Y_{t−k} + b·X_{t−1}`
    Arx1,
    /// `Y_t = sqrt(m₀ + Σ m_k Y²_{t−k} + b·X²_{t−1})·ξ_t`
    Arch1X,
}

/// Finite-lag affine causal model with an optional AR(1) exogenous covariate.
///
/// `f_coefficients = [f₀, f₁, …]`, `m_coefficients = [m₀, m₁, …]`. For
/// `Arch1X` the `m` vector parameterises `H = M²` and the mean must vanish.
/// Innovations `ξ_t` are uniform on `[−√3, √3]` scaled by `innovation_std`;
/// covariate innovations are drawn the same way so the pair stays bounded.
#[derive(Debug, Clone, PartialEq)]
pub struct AcxSpec {
    pub kind: AcxKind,
    pub f_coefficients: Vec<f64>,
    pub m_coefficients: Vec<f64>,
    pub innovation_std: f64,
    pub covariate: Option<CovariateSpec>,
    pub exog_coefficient: f64,
}

impl AcxSpec {
    pub fn arx1(f: Vec<f64>, m: Vec<f64>) -> Self {
        AcxSpec {
            kind: AcxKind::Arx1,
            f_coefficients: f,
            m_coefficients: m,
            innovation_std: 1.0,
            covariate: None,
            exog_coefficient: 0.0,
        }
    }

    pub fn arch1x(omega: f64, arch: Vec<f64>) -> Self {
        let mut m = vec![omega];
        m.extend(arch);
        AcxSpec {
            kind: AcxKind::Arch1X,
            f_coefficients: vec![0.0],
            m_coefficients: m,
            innovation_std: 1.0,
            covariate: None,
            exog_coefficient: 0.0,
        }
    }

    pub fn with_covariate(mut self, cov: CovariateSpec, coefficient: f64) -> Self {
        self.covariate = Some(cov);
        self.exog_coefficient = coefficient;
        self
    }

    fn max_lag(&self) -> usize {
        self.f_coefficients.len().max(self.m_coefficients.len()).saturating_sub(1)
    }

    fn lag_coef(v: &[f64], k: usize) -> f64 {
        v.get(k).copied().unwrap_or(0.0).abs()
    }

    /// `Σ_k max{α_k(g), α_{k,Y}(f) + ‖ξ₀‖·α_{k,Y}(M) + ‖ξ₀‖²·α_{k,Y}(H)}` with
    /// `‖ξ₀‖ = ‖ξ₀‖₂ = innovation_std`.
    pub fn contraction_sum(&self) -> f64 {
        let xi = self.innovation_std;
        let g1 = self.covariate.map_or(0.0, |c| c.ar_coefficient.abs());
        (1..=self.max_lag().max(1))
            .map(|k| {
                let alpha_g = if k == 1 { g1 } else { 0.0 };
                let f = Self::lag_coef(&self.f_coefficients, k);
                let m = Self::lag_coef(&self.m_coefficients, k);
                let y_part = match self.kind {
                    AcxKind::Arx1 => f + xi * m,
                    AcxKind::Arch1X => f + xi * xi * m,
                };
                alpha_g.max(y_part)
            })
            .sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.f_coefficients.is_empty() || self.m_coefficients.is_empty() {
            return Err(Error::spec("f and m coefficient vectors need at least the constant term"));
        }
        if self
            .f_coefficients
            .iter()
            .chain(&self.m_coefficients)
            .chain([&self.exog_coefficient, &self.innovation_std])
            .any(|v| !v.is_finite())
        {
            return Err(Error::spec("non-finite AC-X parameter"));
        }
        if !(self.innovation_std > 0.0) {
            return Err(Error::spec("innovation std must be positive"));
        }
        if self.m_coefficients.iter().any(|&m| m < 0.0) {
            return Err(Error::spec("volatility coefficients must be non-negative"));
        }
        if self.kind == AcxKind::Arch1X {
            if self.f_coefficients.iter().any(|&f| f != 0.0) {
                return Err(Error::spec("ARCH-X requires a zero conditional mean"));
            }
            if self.exog_coefficient < 0.0 {
                return Err(Error::spec("ARCH-X covariate loading must be non-negative"));
            }
        }
        if let Some(c) = &self.covariate {
            c.validate()?;
        }
        let sum = self.contraction_sum();
        if sum >= 1.0 {
            return Err(Error::Contraction { sum });
        }
        Ok(())
    }
}

/// Simulate `n` post-burn-in observations. Rejects non-contracting
/// specifications before drawing anything.
pub fn simulate_acx(spec: &AcxSpec, n: usize, seed: u64, burn_in: usize) -> Result<Trajectory> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::spec("n must be at least 1"));
    }
    let mut rng = rng_from_seed(seed);
    let p = spec.max_lag();
    let mut lags = vec![0.0; p];
    let mut x_prev = 0.0;
    let mut labels = Vec::with_capacity(n);
    let mut covs = spec.covariate.map(|_| Vec::with_capacity(n));
    let bounded = |rng: &mut crate::rng::SimRng| rng.random_range(-SQRT3..=SQRT3);

    for step in 0..burn_in + n {
        let lag = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
        let xi = spec.innovation_std * bounded(&mut rng);
        let y = match spec.kind {
            AcxKind::Arx1 => {
                let mut f = spec.f_coefficients[0] + spec.exog_coefficient * x_prev;
                let mut m = spec.m_coefficients[0];
                for (k, y) in lags.iter().enumerate() {
                    f += lag(&spec.f_coefficients, k + 1) * y;
                    m += lag(&spec.m_coefficients, k + 1) * y.abs();
                }
                m * xi + f
            }
            AcxKind::Arch1X => {
                let mut h = spec.m_coefficients[0] + spec.exog_coefficient * x_prev * x_prev;
                for (k, y) in lags.iter().enumerate() {
                    h += lag(&spec.m_coefficients, k + 1) * y * y;
                }
                h.max(0.0).sqrt() * xi
            }
        };
        if let Some(cov) = spec.covariate {
            x_prev = cov.ar_coefficient * x_prev + cov.innovation_std * bounded(&mut rng);
        }
        if p > 0 {
            lags.rotate_right(1);
            lags[0] = y;
        }
        if step >= burn_in {
            labels.push(y);
            if let Some(c) = covs.as_mut() {
                c.push(x_prev);
            }
        }
    }
    let dim = usize::from(covs.is_some());
    Trajectory::new(labels, covs, dim, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mean(v: &[f64]) -> f64 {
        v.iter().sum::<f64>() / v.len() as f64
    }

    fn var(v: &[f64]) -> f64 {
        let m = mean(v);
        v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / v.len() as f64
    }

    #[test]
    fn ar1_lag_one_autocorrelation() {
        let spec = AcxSpec::arx1(vec![0.0, 0.5], vec![1.0]);
        let t = simulate_acx(&spec, 100_000, 9, 500).unwrap();
        let y = t.labels();
        let m = mean(y);
        let num: f64 = y.windows(2).map(|w| (w[0] - m) * (w[1] - m)).sum();
        let den: f64 = y.iter().map(|v| (v - m).powi(2)).sum();
        assert!((num / den - 0.5).abs() < 0.02, "acf1 = {}", num / den);
    }

    #[test]
    fn pure_noise_is_centred() {
        let spec = AcxSpec::arx1(vec![0.0], vec![1.0]);
        let n = 50_000;
        let t = simulate_acx(&spec, n, 4, 0).unwrap();
        assert!(mean(t.labels()).abs() < 3.0 / (n as f64).sqrt());
        assert!(t.labels().iter().all(|y| y.abs() <= SQRT3));
    }

    #[test]
    fn arch_unconditional_variance() {
        let omega = 0.5;
        let spec = AcxSpec::arch1x(omega, vec![0.3]);
        let t = simulate_acx(&spec, 200_000, 5, 500).unwrap();
        let target = omega / (1.0 - 0.3);
        assert!((var(t.labels()) / target - 1.0).abs() < 0.10);
    }

    #[test]
    fn contraction_rejected_up_front() {
        let spec = AcxSpec::arx1(vec![0.0, 0.7], vec![1.0, 0.4]);
        assert!((spec.contraction_sum() - 1.1).abs() < 1e-12);
        assert!(matches!(simulate_acx(&spec, 10, 1, 0), Err(Error::Contraction { .. })));
        let with_cov = AcxSpec::arx1(vec![0.0, 0.2], vec![1.0])
            .with_covariate(CovariateSpec { ar_coefficient: 0.95, innovation_std: 1.0 }, 0.3);
        assert!((with_cov.contraction_sum() - 0.95).abs() < 1e-12);
        let t = simulate_acx(&with_cov, 20, 1, 10).unwrap();
        assert_eq!(t.covariate_dim(), 1);
        assert_eq!(t, simulate_acx(&with_cov, 20, 1, 10).unwrap());
    }
}
