use rand::Rng;
use rand_distr::StandardNormal;

use super::trajectory::{FeatureLags, Trajectory};
use super::sign;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DgpKind {
    /// `f = −0.25 + 0.6·Y_{t−1}`.
    Dgp1,
    /// `f = 0.1 − 0.15·max(Y_{t−1}, 0) + 0.25·min(Y_{t−1}, 0) + 0.15·Y_{t−2} + 0.2/(1 + X²_{t−1})`.
    Dgp2,
    /// `f = c₀ + Σ_k c_k·Y_{t−k}`.
    CustomAffine,
}

/// Stationary AR(1) covariate `X_t = a·X_{t−1} + s·e_t`, `e_t ~ N(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovariateSpec {
    pub ar_coefficient: f64,
    pub innovation_std: f64,
}

impl Default for CovariateSpec {
    fn default() -> Self {
        CovariateSpec { ar_coefficient: 0.5, innovation_std: 1.0 }
    }
}

impl CovariateSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.ar_coefficient.abs() < 1.0) {
            return Err(Error::spec(format!(
                "covariate AR coefficient {} is not in (-1, 1)",
                self.ar_coefficient
            )));
        }
        if !(self.innovation_std > 0.0 && self.innovation_std.is_finite()) {
            return Err(Error::spec("covariate innovation std must be positive"));
        }
        Ok(())
    }
}

/// Binary autoregression `Y_t | past ~ 2·Bernoulli(p_t) − 1`, `p_t = (1 + f)/2`.
///
/// Coefficient layout by kind:
/// - `Dgp1`: `[intercept, lag1]`
/// - `Dgp2`: `[intercept, positive-part lag1, negative-part lag1, lag2, covariate kernel]`
/// - `CustomAffine`: `[intercept, lag1, …, lagp]`
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryDgpSpec {
    kind: DgpKind,
    lag_order: usize,
    coefficients: Vec<f64>,
    covariate: Option<CovariateSpec>,
}

impl BinaryDgpSpec {
    pub fn dgp1() -> Self {
        BinaryDgpSpec {
            kind: DgpKind::Dgp1,
            lag_order: 1,
            coefficients: vec![-0.25, 0.6],
            covariate: None,
        }
    }

    pub fn dgp2() -> Self {
        Self::dgp2_with(CovariateSpec::default())
    }

    pub fn dgp2_with(covariate: CovariateSpec) -> Self {
        BinaryDgpSpec {
            kind: DgpKind::Dgp2,
            lag_order: 2,
            coefficients: vec![0.1, -0.15, 0.25, 0.15, 0.2],
            covariate: Some(covariate),
        }
    }

    pub fn custom_affine(intercept: f64, lags: &[f64]) -> Result<Self> {
        let mut coefficients = vec![intercept];
        coefficients.extend_from_slice(lags);
        let spec = BinaryDgpSpec {
            kind: DgpKind::CustomAffine,
            lag_order: lags.len(),
            coefficients,
            covariate: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Build from a flat config: `dgp = dgp1|dgp2|custom`, optional
    /// `coefficients`, `covariate_ar`, `covariate_std`.
    pub fn from_config(cfg: &Config) -> Result<Self> {
        let kind = cfg.raw("dgp").unwrap_or("dgp1");
        let mut spec = match kind {
            "dgp1" => Self::dgp1(),
            "dgp2" => {
                let mut cov = CovariateSpec::default();
                if let Some(a) = cfg.get("covariate_ar")? {
                    cov.ar_coefficient = a;
                }
                if let Some(s) = cfg.get("covariate_std")? {
                    cov.innovation_std = s;
                }
                Self::dgp2_with(cov)
            }
            "custom" => {
                let c: Vec<f64> = cfg.get_list("coefficients")?.ok_or_else(|| Error::Config {
                    key: "coefficients".into(),
                    msg: "required for dgp = custom".into(),
                })?;
                if c.len() < 2 {
                    return Err(Error::Config {
                        key: "coefficients".into(),
                        msg: "need an intercept and at least one lag".into(),
                    });
                }
                return Self::custom_affine(c[0], &c[1..]);
            }
            other => {
                return Err(Error::Config { key: "dgp".into(), msg: format!("unknown dgp `{other}`") })
            }
        };
        if let Some(c) = cfg.get_list::<f64>("coefficients")? {
            if c.len() != spec.coefficients.len() {
                return Err(Error::Config {
                    key: "coefficients".into(),
                    msg: format!("expected {} values", spec.coefficients.len()),
                });
            }
            spec.coefficients = c;
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn kind(&self) -> DgpKind {
        self.kind
    }

    pub fn lag_order(&self) -> usize {
        self.lag_order
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn covariate(&self) -> Option<&CovariateSpec> {
        self.covariate.as_ref()
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            DgpKind::Dgp1 => "dgp1",
            DgpKind::Dgp2 => "dgp2",
            DgpKind::CustomAffine => "custom",
        }
    }

    /// Input layout used for prediction: DGP2 reads `(Y_{t−1}, Y_{t−2}, X_{t−1})`.
    pub fn feature_lags(&self) -> FeatureLags {
        FeatureLags {
            label_lags: self.lag_order,
            covariate_lags: usize::from(self.covariate.is_some()),
        }
    }

    /// Sum of absolute lag coefficients (intercept and covariate kernel excluded).
    pub fn lag_coefficient_sum(&self) -> f64 {
        match self.kind {
            DgpKind::Dgp2 => self.coefficients[1..4].iter().map(|c| c.abs()).sum(),
            _ => self.coefficients[1..].iter().map(|c| c.abs()).sum(),
        }
    }

    /// Link `f(state)`; `lags[0]` is `Y_{t−1}`.
    pub fn link(&self, lags: &[f64], covariate_lag: Option<f64>) -> f64 {
        let c = &self.coefficients;
        match self.kind {
            DgpKind::Dgp1 | DgpKind::CustomAffine => {
                c[0] + c[1..].iter().zip(lags).map(|(a, y)| a * y).sum::<f64>()
            }
            DgpKind::Dgp2 => {
                let x = covariate_lag.unwrap_or(0.0);
                c[0] + c[1] * lags[0].max(0.0)
                    + c[2] * lags[0].min(0.0)
                    + c[3] * lags[1]
                    + c[4] / (1.0 + x * x)
            }
        }
    }

    /// Link evaluated on an input vector in [`feature_lags`](Self::feature_lags) layout.
    pub fn link_from_features(&self, state: &[f64]) -> Result<f64> {
        let d = self.feature_lags().dim(1);
        if state.len() != d {
            return Err(Error::Dimension { expected: d, got: state.len() });
        }
        let cov = self.covariate.is_some().then(|| state[self.lag_order]);
        Ok(self.link(&state[..self.lag_order], cov))
    }

    pub fn validate(&self) -> Result<()> {
        let expected = match self.kind {
            DgpKind::Dgp1 => 2,
            DgpKind::Dgp2 => 5,
            DgpKind::CustomAffine => self.lag_order + 1,
        };
        if self.lag_order == 0 || self.coefficients.len() != expected {
            return Err(Error::spec(format!(
                "{} expects {expected} coefficients with a positive lag order",
                self.name()
            )));
        }
        if self.coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::spec("non-finite coefficient"));
        }
        match (self.kind, &self.covariate) {
            (DgpKind::Dgp2, Some(cov)) => cov.validate()?,
            (DgpKind::Dgp2, None) => return Err(Error::spec("dgp2 needs a covariate")),
            (_, Some(_)) => return Err(Error::spec("only dgp2 carries a covariate")),
            _ => {}
        }
        let lag_sum = self.lag_coefficient_sum();
        if lag_sum >= 1.0 {
            return Err(Error::Contraction { sum: lag_sum });
        }
        // f must stay in [-1, 1] on every reachable label pattern; the covariate
        // enters only through 1/(1 + x²) ∈ (0, 1], so a grid over x that
        // includes 0 and large |x| covers its range.
        let grid: Vec<Option<f64>> = if self.covariate.is_some() {
            (-200..=200).map(|i| Some(i as f64 * 0.25)).chain([Some(1e8)]).collect()
        } else {
            vec![None]
        };
        let mut lags = vec![0.0; self.lag_order];
        for pattern in 0..(1u64 << self.lag_order) {
            for (k, y) in lags.iter_mut().enumerate() {
                *y = if pattern >> k & 1 == 1 { 1.0 } else { -1.0 };
            }
            for &x in &grid {
                let f = self.link(&lags, x);
                if !(-1.0..=1.0).contains(&f) {
                    return Err(Error::spec(format!(
                        "link f = {f} leaves [-1, 1] at lags {lags:?}, covariate {x:?}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Simulate `n` post-burn-in steps. Lagged labels start at `−1` and the
/// covariate at `0`; the burn-in washes out that start.
pub fn simulate_binary(
    spec: &BinaryDgpSpec,
    n: usize,
    seed: u64,
    burn_in: usize,
) -> Result<Trajectory> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::spec("n must be at least 1"));
    }
    let mut rng = rng_from_seed(seed);
    let p = spec.lag_order;
    let mut lags = vec![-1.0; p];
    let mut x_prev = 0.0;
    let mut labels = Vec::with_capacity(n);
    let mut covs = spec.covariate.map(|_| Vec::with_capacity(n));

    for step in 0..burn_in + n {
        let f = spec.link(&lags, spec.covariate.map(|_| x_prev));
        let p_t = 0.5 * (1.0 + f);
        assert!((0.0..=1.0).contains(&p_t), "p_t = {p_t} outside [0, 1]");
        let u: f64 = rng.random();
        let y = if u < p_t { 1.0 } else { -1.0 };
        if let Some(cov) = spec.covariate {
            let e: f64 = rng.sample(StandardNormal);
            x_prev = cov.ar_coefficient * x_prev + cov.innovation_std * e;
        }
        lags.rotate_right(1);
        lags[0] = y;
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

/// Bayes classifier `h₀(state) = sign(f(state))`, state in feature layout.
pub fn bayes_predict(spec: &BinaryDgpSpec, state: &[f64]) -> Result<f64> {
    Ok(sign(spec.link_from_features(state)?))
}
