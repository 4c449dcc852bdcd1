use std::io::Write;

use rand::seq::SliceRandom;

use super::backprop::backprop_gradient;
use super::eval::empirical_01_risk;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::neuralnet::{init_params, Architecture, NetworkParams};
use crate::rng::{derive_seed, rng_from_seed};
use crate::sample::Sample;

/// Minibatch Adam settings and the accuracy-patience stopping rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub patience_epochs: usize,
    pub max_epochs: usize,
    pub seed: u64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_epsilon: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 1e-3,
            batch_size: 32,
            patience_epochs: 30,
            max_epochs: 1000,
            seed: 0,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_epsilon: 1e-8,
        }
    }
}

impl TrainConfig {
    pub fn with_seed(seed: u64) -> Self {
        TrainConfig { seed, ..TrainConfig::default() }
    }

    /// A zero learning rate is accepted and freezes the parameters.
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::spec("learning_rate must be finite and non-negative"));
        }
        if self.batch_size == 0 || self.patience_epochs == 0 || self.max_epochs == 0 {
            return Err(Error::spec("batch_size, patience_epochs and max_epochs must be positive"));
        }
        for (name, b) in [("adam_beta1", self.adam_beta1), ("adam_beta2", self.adam_beta2)] {
            if !(b > 0.0 && b < 1.0) {
                return Err(Error::spec(format!("{name} must lie in (0, 1)")));
            }
        }
        if !(self.adam_epsilon > 0.0) {
            return Err(Error::spec("adam_epsilon must be positive"));
        }
        Ok(())
    }

    /// Overrides defaults with `learning_rate`, `batch_size`, `patience`,
    /// `max_epochs`, `train_seed`, `adam_beta1`, `adam_beta2`, `adam_epsilon`.
    pub fn from_config(cfg: &Config) -> Result<Self> {
        let d = TrainConfig::default();
        let c = TrainConfig {
            learning_rate: cfg.get("learning_rate")?.unwrap_or(d.learning_rate),
            batch_size: cfg.get("batch_size")?.unwrap_or(d.batch_size),
            patience_epochs: cfg.get("patience")?.unwrap_or(d.patience_epochs),
            max_epochs: cfg.get("max_epochs")?.unwrap_or(d.max_epochs),
            seed: cfg.get("train_seed")?.unwrap_or(d.seed),
            adam_beta1: cfg.get("adam_beta1")?.unwrap_or(d.adam_beta1),
            adam_beta2: cfg.get("adam_beta2")?.unwrap_or(d.adam_beta2),
            adam_epsilon: cfg.get("adam_epsilon")?.unwrap_or(d.adam_epsilon),
        };
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    pub surrogate_risk: f64,
    pub accuracy: f64,
}

/// Per-epoch training-set risk and accuracy; epoch 0 is the initialisation.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingLog {
    pub records: Vec<EpochRecord>,
    pub best_epoch: usize,
    pub stopped_early: bool,
}

impl TrainingLog {
    pub fn best(&self) -> &EpochRecord {
        &self.records[self.best_epoch]
    }

    pub fn epochs_run(&self) -> usize {
        self.records.len() - 1
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "epoch,surrogate_risk,accuracy")?;
        for r in &self.records {
            writeln!(out, "{},{:?},{:?}", r.epoch, r.surrogate_risk, r.accuracy)?;
        }
        Ok(())
    }
}

struct Adam {
    m: NetworkParams,
    v: NetworkParams,
    t: i32,
}

impl Adam {
    fn new(arch: &Architecture) -> Self {
        Adam { m: NetworkParams::zeros(arch), v: NetworkParams::zeros(arch), t: 0 }
    }

    fn step(&mut self, params: &mut NetworkParams, grad: &NetworkParams, cfg: &TrainConfig) {
        self.t += 1;
        let (b1, b2) = (cfg.adam_beta1, cfg.adam_beta2);
        let c1 = 1.0 - b1.powi(self.t);
        let c2 = 1.0 - b2.powi(self.t);
        let lr = cfg.learning_rate;
        let eps = cfg.adam_epsilon;
        let update = |p: &mut f64, g: f64, m: &mut f64, v: &mut f64| {
            *m = b1 * *m + (1.0 - b1) * g;
            *v = b2 * *v + (1.0 - b2) * g * g;
            *p -= lr * (*m / c1) / ((*v / c2).sqrt() + eps);
        };
        for j in 0..params.num_layers() {
            ndarray::Zip::from(&mut params.weights[j])
                .and(&grad.weights[j])
                .and(&mut self.m.weights[j])
                .and(&mut self.v.weights[j])
                .for_each(|p, &g, m, v| update(p, g, m, v));
            ndarray::Zip::from(&mut params.biases[j])
                .and(&grad.biases[j])
                .and(&mut self.m.biases[j])
                .and(&mut self.v.biases[j])
                .for_each(|p, &g, m, v| update(p, g, m, v));
        }
    }
}

/// Minibatch Adam on the empirical hinge risk.
///
/// Stops once training accuracy has not strictly improved for
/// `patience_epochs` epochs, or at `max_epochs`. The returned parameters come
/// from the epoch with the highest training accuracy among those whose risk
/// does not exceed the initial risk; equal accuracies go to the lower risk.
pub fn train_erm(
    sample: &Sample,
    arch: &Architecture,
    config: &TrainConfig,
) -> Result<(NetworkParams, TrainingLog)> {
    config.validate()?;
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    if sample.dim() != arch.input_dim() {
        return Err(Error::Dimension { expected: arch.input_dim(), got: sample.dim() });
    }
    let mut params = init_params(arch, derive_seed(config.seed, &[0]));
    let mut rng = rng_from_seed(derive_seed(config.seed, &[1]));
    let mut adam = Adam::new(arch);
    let mut order: Vec<usize> = (0..sample.len()).collect();

    let evaluate = |p: &NetworkParams, epoch: usize| -> Result<EpochRecord> {
        let r = empirical_01_risk(arch, p, sample)?;
        if !r.hinge_risk.is_finite() || !p.all_finite() {
            return Err(Error::Diverged { epoch, detail: format!("surrogate risk {}", r.hinge_risk) });
        }
        Ok(EpochRecord { epoch, surrogate_risk: r.hinge_risk, accuracy: r.accuracy })
    };

    let first = evaluate(&params, 0)?;
    let initial_risk = first.surrogate_risk;
    let mut records = vec![first];
    let mut best = (0usize, first, params.clone());
    let mut top_accuracy = first.accuracy;
    let mut stale = 0usize;
    let mut stopped_early = false;

    for epoch in 1..=config.max_epochs {
        order.shuffle(&mut rng);
        for batch in order.chunks(config.batch_size) {
            let mb = sample.select(batch);
            let grad = backprop_gradient(arch, &params, mb.inputs().view(), mb.targets())?;
            adam.step(&mut params, &grad, config);
        }
        let rec = evaluate(&params, epoch)?;
        records.push(rec);

        let b = &best.1;
        let better = rec.accuracy > b.accuracy
            || (rec.accuracy == b.accuracy && rec.surrogate_risk < b.surrogate_risk);
        if better && rec.surrogate_risk <= initial_risk {
            best = (epoch, rec, params.clone());
        }
        if rec.accuracy > top_accuracy {
            top_accuracy = rec.accuracy;
            stale = 0;
        } else {
            stale += 1;
            if stale >= config.patience_epochs {
                stopped_early = true;
                break;
            }
        }
    }
    let log = TrainingLog { records, best_epoch: best.0, stopped_early };
    Ok((best.2, log))
}
