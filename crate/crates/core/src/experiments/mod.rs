//! Monte-Carlo risk-gap curves: a large-sample target network, then many
//! small-sample fits evaluated on independent test trajectories.

use std::io::Write;

use rayon::prelude::*;

use crate::config::Config;
use crate::erm::{empirical_surrogate_risk, hinge, train_erm, TrainConfig};
use crate::error::{Error, Result};
use crate::neuralnet::{Architecture, NetworkParams};
use crate::process_sim::{bayes_predict, make_features, simulate_binary, BinaryDgpSpec, DEFAULT_BURN_IN};
use crate::rng::derive_seed;
use crate::sample::Sample;

/// Fraction of failed replications above which a run is aborted.
pub const MAX_FAILURE_RATE: f64 = 0.02;

const TARGET_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// 50 replications, `n = 200, 400, …, 2000`.
    Desk,
    /// 500 replications, `n = 200, 220, …, 2000`.
    Full,
}

impl std::str::FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "desk" => Ok(Profile::Desk),
            "full" => Ok(Profile::Full),
            _ => Err(Error::spec(format!("unknown profile `{s}` (expected desk or full)"))),
        }
    }
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::Desk => "desk",
            Profile::Full => "full",
        }
    }

    pub fn n_grid(self) -> Vec<usize> {
        let step = match self {
            Profile::Desk => 200,
            Profile::Full => 20,
        };
        (200..=2000).step_by(step).collect()
    }

    pub fn replications(self) -> usize {
        match self {
            Profile::Desk => 50,
            Profile::Full => 500,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub dgp: BinaryDgpSpec,
    pub n_grid: Vec<usize>,
    pub replications: usize,
    pub target_m: usize,
    pub arch: Architecture,
    pub train: TrainConfig,
    pub master_seed: u64,
    /// Test trajectory length; `None` uses the training size `n`.
    pub test_size: Option<usize>,
    pub burn_in: usize,
}

impl ExperimentPlan {
    /// DGP1 with a 2×16 classifier under the given profile.
    pub fn preset(profile: Profile, master_seed: u64) -> Self {
        let dgp = BinaryDgpSpec::dgp1();
        let d = dgp.feature_lags().dim(0);
        ExperimentPlan {
            arch: Architecture::classifier(d, 2, 16).expect("valid preset architecture"),
            dgp,
            n_grid: profile.n_grid(),
            replications: profile.replications(),
            target_m: 10_000,
            train: TrainConfig::default(),
            master_seed,
            test_size: None,
            burn_in: DEFAULT_BURN_IN,
        }
    }

    /// Keys: `profile`, the DGP keys, `n_grid`, `replications`, `target_m`,
    /// `depth`, `width`, `test_size`, `burn_in`, `seed`, and the training keys.
    pub fn from_config(cfg: &Config) -> Result<Self> {
        let profile: Profile = cfg.raw("profile").unwrap_or("desk").parse()?;
        let mut plan = Self::preset(profile, cfg.get("seed")?.unwrap_or(0));
        plan.dgp = BinaryDgpSpec::from_config(cfg)?;
        if let Some(g) = cfg.get_list("n_grid")? {
            plan.n_grid = g;
        }
        if let Some(r) = cfg.get("replications")? {
            plan.replications = r;
        }
        if let Some(m) = cfg.get("target_m")? {
            plan.target_m = m;
        }
        if let Some(t) = cfg.get("test_size")? {
            plan.test_size = Some(t);
        }
        if let Some(b) = cfg.get("burn_in")? {
            plan.burn_in = b;
        }
        let d = plan.dgp.feature_lags().dim(usize::from(plan.dgp.covariate().is_some()));
        plan.arch = Architecture::classifier(
            d,
            cfg.get("depth")?.unwrap_or(2),
            cfg.get("width")?.unwrap_or(16),
        )?;
        plan.train = TrainConfig::from_config(cfg)?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        self.dgp.validate()?;
        self.train.validate()?;
        if self.n_grid.is_empty() {
            return Err(Error::spec("n_grid is empty"));
        }
        if self.n_grid[0] == 0 || self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::spec("n_grid must be strictly increasing positive integers"));
        }
        if self.replications == 0 {
            return Err(Error::spec("replications must be at least 1"));
        }
        if self.target_m == 0 || self.test_size == Some(0) {
            return Err(Error::spec("sample sizes must be positive"));
        }
        let d = self.dgp.feature_lags().dim(usize::from(self.dgp.covariate().is_some()));
        if self.arch.input_dim() != d {
            return Err(Error::Dimension { expected: d, got: self.arch.input_dim() });
        }
        Ok(())
    }

    /// Supervised sample with exactly `n` rows.
    fn sample(&self, n: usize, seed: u64) -> Result<Sample> {
        let lags = self.dgp.feature_lags();
        let traj = simulate_binary(&self.dgp, n + lags.max_lag(), seed, self.burn_in)?;
        make_features(&traj, lags)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TargetEstimate {
    pub params: NetworkParams,
    pub target_risk: f64,
    pub bayes_risk: f64,
    /// `sd/√m` of the Bayes predictor's per-point hinge losses.
    pub bayes_se: f64,
}

/// Train on one `m`-sample and evaluate the network and the Bayes
/// predictor on that same sample.
pub fn estimate_target(plan: &ExperimentPlan) -> Result<TargetEstimate> {
    plan.validate()?;
    let sample = plan.sample(plan.target_m, derive_seed(plan.master_seed, &[TARGET_STREAM, 0]))?;
    let cfg = TrainConfig { seed: derive_seed(plan.master_seed, &[TARGET_STREAM, 1]), ..plan.train };
    let (params, _) = train_erm(&sample, &plan.arch, &cfg)?;
    let target_risk = empirical_surrogate_risk(&plan.arch, &params, &sample)?;
    let losses = (0..sample.len())
        .map(|i| {
            let x = sample.input(i);
            let h = bayes_predict(&plan.dgp, x.as_slice().expect("contiguous row"))?;
            Ok(hinge(sample.targets()[i] * h))
        })
        .collect::<Result<Vec<f64>>>()?;
    let (bayes_risk, bayes_sd) = mean_sd(&losses);
    Ok(TargetEstimate {
        params,
        target_risk,
        bayes_risk,
        bayes_se: bayes_sd / (losses.len() as f64).sqrt(),
    })
}

/// Mean and sample standard deviation (`n − 1` denominator; 0 for one value).
pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = xs.iter().map(|x| (x - mean).powi(2)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationOutcome {
    pub n: usize,
    pub rep: usize,
    /// Test hinge risk, or the failure message.
    pub test_risk: std::result::Result<f64, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapRow {
    pub n: usize,
    pub gap_target_mean: f64,
    pub gap_target_se: f64,
    pub gap_bayes_mean: f64,
    pub gap_bayes_se: f64,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapCurve {
    pub target_risk: f64,
    pub bayes_risk: f64,
    pub rows: Vec<GapRow>,
    /// Ordered by `(n, rep)`.
    pub replications: Vec<ReplicationOutcome>,
}

impl GapCurve {
    pub const CSV_HEADER: &'static str =
        "n,gap_target_mean,gap_target_se,gap_bayes_mean,gap_bayes_se,failed";

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{:?},{:?},{:?},{:?},{}",
                r.n, r.gap_target_mean, r.gap_target_se, r.gap_bayes_mean, r.gap_bayes_se, r.failed
            )?;
        }
        Ok(())
    }

    /// Per-replication test risks, `n,rep,test_risk,status`.
    pub fn write_replications_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "n,rep,test_risk,status")?;
        for r in &self.replications {
            match &r.test_risk {
                Ok(v) => writeln!(out, "{},{},{:?},ok", r.n, r.rep, v)?,
                Err(_) => writeln!(out, "{},{},,failed", r.n, r.rep)?,
            }
        }
        Ok(())
    }

    /// Test risks of the successful replications at `n`.
    pub fn risks_at(&self, n: usize) -> Vec<f64> {
        self.replications
            .iter()
            .filter(|r| r.n == n)
            .filter_map(|r| r.test_risk.as_ref().ok().copied())
            .collect()
    }
}

fn replicate(plan: &ExperimentPlan, n: usize, rep: usize) -> Result<f64> {
    let seed = derive_seed(plan.master_seed, &[n as u64, rep as u64]);
    let train = plan.sample(n, derive_seed(seed, &[0]))?;
    let test = plan.sample(plan.test_size.unwrap_or(n), derive_seed(seed, &[1]))?;
    let cfg = TrainConfig { seed: derive_seed(seed, &[2]), ..plan.train };
    let (params, _) = train_erm(&train, &plan.arch, &cfg)?;
    empirical_surrogate_risk(&plan.arch, &params, &test)
}

/// Run every `(n, replication)` pair in parallel and aggregate in
/// `(n, rep)` order. Fails with [`Error::TooManyFailures`] when more than
/// [`MAX_FAILURE_RATE`] of the replications fail.
pub fn run_gap_curve(plan: &ExperimentPlan, target: &TargetEstimate) -> Result<GapCurve> {
    plan.validate()?;
    let jobs: Vec<(usize, usize)> = plan
        .n_grid
        .iter()
        .flat_map(|&n| (0..plan.replications).map(move |rep| (n, rep)))
        .collect();
    let replications: Vec<ReplicationOutcome> = jobs
        .par_iter()
        .map(|&(n, rep)| ReplicationOutcome {
            n,
            rep,
            test_risk: replicate(plan, n, rep).map_err(|e| e.to_string()),
        })
        .collect();

    let failed = replications.iter().filter(|r| r.test_risk.is_err()).count();
    if failed as f64 > MAX_FAILURE_RATE * jobs.len() as f64 {
        return Err(Error::TooManyFailures { failed, total: jobs.len() });
    }

    let mut curve = GapCurve {
        target_risk: target.target_risk,
        bayes_risk: target.bayes_risk,
        rows: Vec::with_capacity(plan.n_grid.len()),
        replications,
    };
    for &n in &plan.n_grid {
        let risks = curve.risks_at(n);
        let failed = plan.replications - risks.len();
        let (mean, sd) = if risks.is_empty() { (f64::NAN, f64::NAN) } else { mean_sd(&risks) };
        let se = sd / (risks.len() as f64).sqrt();
        curve.rows.push(GapRow {
            n,
            gap_target_mean: mean - target.target_risk,
            gap_target_se: se,
            gap_bayes_mean: mean - target.bayes_risk,
            gap_bayes_se: se,
            failed,
        });
    }
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_plan() -> ExperimentPlan {
        ExperimentPlan {
            n_grid: vec![100, 300],
            replications: 4,
            target_m: 2000,
            ..ExperimentPlan::preset(Profile::Desk, 5)
        }
    }

    #[test]
    fn presets() {
        let d = Profile::Desk.n_grid();
        assert_eq!(d.len(), 10);
        assert_eq!((d[0], d[9]), (200, 2000));
        let p = Profile::Full.n_grid();
        assert_eq!(p.len(), 91);
        assert_eq!(p[1], 220);
        assert_eq!(Profile::Full.replications(), 500);
        assert!(ExperimentPlan::preset(Profile::Desk, 0).validate().is_ok());
    }

    #[test]
    fn rejects_bad_grid() {
        let mut p = small_plan();
        p.n_grid = vec![300, 300];
        assert!(p.validate().is_err());
        p.n_grid = vec![];
        assert!(p.validate().is_err());
        p = small_plan();
        p.replications = 0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn curve_is_reproducible_and_auditable() {
        let plan = small_plan();
        let t = estimate_target(&plan).unwrap();
        let a = run_gap_curve(&plan, &t).unwrap();
        let b = run_gap_curve(&plan, &t).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows.len(), 2);
        for row in &a.rows {
            let risks = a.risks_at(row.n);
            assert_eq!(risks.len(), 4);
            let mean = risks.iter().sum::<f64>() / 4.0;
            let var = risks.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / 3.0;
            assert!((row.gap_target_se - (var / 4.0).sqrt()).abs() < 1e-15);
            assert!((row.gap_target_mean - (mean - t.target_risk)).abs() < 1e-15);
        }
        let mut buf = Vec::new();
        a.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.starts_with(GapCurve::CSV_HEADER));
    }

    #[test]
    fn dgp1_target_near_bayes() {
        let plan = ExperimentPlan::preset(Profile::Desk, 3);
        let t = estimate_target(&plan).unwrap();
        assert!((t.bayes_risk - 0.24375).abs() < 3.0 * t.bayes_se, "{t:?}");
        assert!(t.target_risk <= t.bayes_risk + 0.02, "{} {}", t.target_risk, t.bayes_risk);
    }

    #[test]
    fn mean_sd_matches_definition() {
        let (m, s) = mean_sd(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_sd(&[7.0]), (7.0, 0.0));
    }
}
