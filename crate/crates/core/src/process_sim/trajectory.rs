use std::io::Write;
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::sample::Sample;

/// An observed path `(Y_t, X_t)`, immutable once built.
///
/// Labels are `±1` for binary models and real for affine causal models.
/// Covariates, when present, are stored flat with `covariate_dim` values per
/// time step.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    labels: Vec<f64>,
    covariates: Option<Vec<f64>>,
    covariate_dim: usize,
    seed: u64,
}

impl Trajectory {
    pub fn new(
        labels: Vec<f64>,
        covariates: Option<Vec<f64>>,
        covariate_dim: usize,
        seed: u64,
    ) -> Result<Self> {
        match &covariates {
            Some(c) if covariate_dim == 0 || c.len() != labels.len() * covariate_dim => {
                return Err(Error::Dimension {
                    expected: labels.len() * covariate_dim.max(1),
                    got: c.len(),
                })
            }
            None if covariate_dim != 0 => {
                return Err(Error::spec("covariate_dim set without covariates"))
            }
            _ => {}
        }
        Ok(Trajectory { labels, covariates, covariate_dim, seed })
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn covariate_dim(&self) -> usize {
        self.covariate_dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Covariate vector at time index `t` (empty when there are none).
    pub fn covariate(&self, t: usize) -> &[f64] {
        match &self.covariates {
            Some(c) => &c[t * self.covariate_dim..(t + 1) * self.covariate_dim],
            None => &[],
        }
    }

    /// Write `t,y,x1,...,xk` with `t` counted from 1.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let mut header = vec!["t".to_string(), "y".to_string()];
        header.extend((1..=self.covariate_dim).map(|k| format!("x{k}")));
        w.write_record(&header)?;
        for t in 0..self.len() {
            let mut rec = vec![(t + 1).to_string(), self.labels[t].to_string()];
            rec.extend(self.covariate(t).iter().map(f64::to_string));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

/// How many past labels and past covariate vectors enter an input vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeatureLags {
    pub label_lags: usize,
    pub covariate_lags: usize,
}

impl FeatureLags {
    pub fn max_lag(&self) -> usize {
        self.label_lags.max(self.covariate_lags)
    }

    pub fn dim(&self, covariate_dim: usize) -> usize {
        self.label_lags + self.covariate_lags * covariate_dim
    }
}

/// Lagged design `X_t = ((Y_{t−1}, X_{t−1}), …, (Y_{t−p}, X_{t−p}))`, one
/// `(label, covariates)` block per lag, most recent first.
pub fn make_supervised(traj: &Trajectory, lag_order: usize) -> Result<Sample> {
    if lag_order == 0 {
        return Err(Error::spec("lag order must be positive"));
    }
    if traj.len() <= lag_order {
        return Err(Error::TooShort { needed: lag_order, got: traj.len() });
    }
    let d = lag_order * (1 + traj.covariate_dim());
    let rows = traj.len() - lag_order;
    let mut flat = Vec::with_capacity(rows * d);
    let mut targets = Vec::with_capacity(rows);
    for t in lag_order..traj.len() {
        for k in 1..=lag_order {
            flat.push(traj.labels()[t - k]);
            flat.extend_from_slice(traj.covariate(t - k));
        }
        targets.push(traj.labels()[t]);
    }
    Sample::new(Array2::from_shape_vec((rows, d), flat).expect("row length d"), targets)
}

/// Lagged design with label lags first, then covariate lags:
/// `(Y_{t−1}, …, Y_{t−p}, X_{t−1}, …, X_{t−q})`. This is the layout the
/// binary DGPs consume (DGP2 uses `p = 2`, `q = 1`).
pub fn make_features(traj: &Trajectory, lags: FeatureLags) -> Result<Sample> {
    let start = lags.max_lag();
    if start == 0 {
        return Err(Error::spec("at least one lag is required"));
    }
    if lags.covariate_lags > 0 && traj.covariate_dim() == 0 {
        return Err(Error::spec("covariate lags requested but trajectory has no covariates"));
    }
    if traj.len() <= start {
        return Err(Error::TooShort { needed: start, got: traj.len() });
    }
    let d = lags.dim(traj.covariate_dim());
    let rows = traj.len() - start;
    let mut flat = Vec::with_capacity(rows * d);
    let mut targets = Vec::with_capacity(rows);
    for t in start..traj.len() {
        flat.extend((1..=lags.label_lags).map(|k| traj.labels()[t - k]));
        for k in 1..=lags.covariate_lags {
            flat.extend_from_slice(traj.covariate(t - k));
        }
        targets.push(traj.labels()[t]);
    }
    Sample::new(Array2::from_shape_vec((rows, d), flat).expect("row length d"), targets)
}
