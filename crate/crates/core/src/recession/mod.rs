//! Quarterly US recession indicator: loading, the one-lag Bernoulli
//! autoregression fitted by maximum likelihood, and the network classifier
//! trained on the first half of the sample.

mod mle;
mod series;

use std::io::Write;

use rayon::prelude::*;

use crate::erm::{empirical_01_risk, train_erm, EvalReport, TrainConfig, TrainingLog};
use crate::error::{Error, Result};
use crate::neuralnet::Architecture;
use crate::process_sim::{make_supervised, Trajectory};

pub use mle::{fit_mle, loglik_ar1, Ar1LogitFit};
pub use series::{fetch_usrecq, load_usrecq, parse_usrecq, recode, Quarter, QuarterlySeries, USRECQ_URL};

/// First and last quarters of the study window.
pub fn study_window() -> (Quarter, Quarter) {
    (Quarter { year: 1933, quarter: 1 }, Quarter { year: 2022, quarter: 4 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecessionResult {
    pub fit: Ar1LogitFit,
    pub train_report: EvalReport,
    pub test_report: EvalReport,
    pub n_train: usize,
    pub n_test: usize,
    pub log: TrainingLog,
}

impl RecessionResult {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "name,value")?;
        let f = &self.fit;
        writeln!(out, "alpha0,{:?}", f.alpha0)?;
        writeln!(out, "alpha1,{:?}", f.alpha1)?;
        writeln!(out, "log_likelihood,{:?}", f.log_likelihood)?;
        writeln!(out, "mle_converged,{}", f.converged)?;
        writeln!(out, "n_train,{}", self.n_train)?;
        writeln!(out, "n_test,{}", self.n_test)?;
        writeln!(out, "best_epoch,{}", self.log.best_epoch)?;
        for (split, r) in [("train", &self.train_report), ("test", &self.test_report)] {
            writeln!(out, "{split}_hinge_risk,{:?}", r.hinge_risk)?;
            writeln!(out, "{split}_accuracy,{:?}", r.accuracy)?;
            writeln!(out, "{split}_recall_recession,{:?}", r.recall_plus())?;
            let c = r.confusion;
            writeln!(out, "{split}_actual_neg_pred_neg,{}", c[0][0])?;
            writeln!(out, "{split}_actual_neg_pred_pos,{}", c[0][1])?;
            writeln!(out, "{split}_actual_pos_pred_neg,{}", c[1][0])?;
            writeln!(out, "{split}_actual_pos_pred_pos,{}", c[1][1])?;
        }
        Ok(())
    }
}

/// Lag-1 pairs `(Y_{t−1}, Y_t)`; the first `⌈(T−1)/2⌉` pairs train the
/// network and the remainder form the test set.
pub fn run_recession_pipeline(
    series: &QuarterlySeries,
    arch: &Architecture,
    train_config: &TrainConfig,
) -> Result<RecessionResult> {
    if series.len() < 4 {
        return Err(Error::TooShort { needed: 3, got: series.len() });
    }
    if !series.is_contiguous() {
        return Err(Error::spec("the quarterly series has gaps"));
    }
    let fit = fit_mle(series)?;
    let traj = Trajectory::new(series.values().to_vec(), None, 0, 0)?;
    let pairs = make_supervised(&traj, 1)?;
    let n_train = pairs.len().div_ceil(2);
    let train = pairs.slice(0, n_train);
    let test = pairs.slice(n_train, pairs.len());
    let (params, log) = train_erm(&train, arch, train_config)?;
    Ok(RecessionResult {
        fit,
        train_report: empirical_01_risk(arch, &params, &train)?,
        test_report: empirical_01_risk(arch, &params, &test)?,
        n_train,
        n_test: test.len(),
        log,
    })
}

/// The pipeline once per training seed, in parallel.
pub fn run_recession_seeds(
    series: &QuarterlySeries,
    arch: &Architecture,
    base: &TrainConfig,
    seeds: &[u64],
) -> Result<Vec<RecessionResult>> {
    seeds
        .par_iter()
        .map(|&seed| run_recession_pipeline(series, arch, &TrainConfig { seed, ..*base }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_series_is_degenerate() {
        let s = QuarterlySeries::from_values(Quarter::new(1950, 1).unwrap(), vec![-1.0; 40]).unwrap();
        let arch = Architecture::classifier(1, 2, 16).unwrap();
        let r = run_recession_pipeline(&s, &arch, &TrainConfig::with_seed(1)).unwrap();
        assert_eq!(r.test_report.accuracy, 1.0);
        assert_eq!(r.test_report.confusion, [[19, 0], [0, 0]]);
        assert_eq!((r.n_train, r.n_test), (20, 19));
    }
}
