use std::fmt::Debug;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::Resolved;
use crate::bounds::{BoundInputs, BoundReport};
use crate::config::Config;
use crate::erm::{empirical_01_risk, train_erm, EvalReport, TrainConfig};
use crate::error::{Error, Result};
use crate::experiments::{estimate_target, run_gap_curve, ExperimentPlan};
use crate::neuralnet::{write_params_csv, Architecture};
use crate::process_sim::{
    make_features, simulate_acx, simulate_binary, AcxKind, AcxSpec, BinaryDgpSpec, CovariateSpec, DEFAULT_BURN_IN,
};
use crate::recession::{parse_usrecq, run_recession_pipeline, study_window};
use crate::rng::derive_seed;
use crate::sample::Sample;
use crate::weak_dependence::{
    check_a3, fit_l1_l2, tau_table, CoefficientSequence, GeometricEnvelope, StretchedExpEps,
};

const BUNDLED_USRECQ: &str = include_str!("../../data/usrecq.csv");

fn kv(r: &mut Resolved, key: &str, value: impl Debug) {
    r.push((key.to_string(), format!("{value:?}")));
}

fn ks(r: &mut Resolved, key: &str, value: &str) {
    r.push((key.to_string(), value.to_string()));
}

fn list(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",")
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn dgp_keys(r: &mut Resolved, spec: &BinaryDgpSpec) {
    ks(r, "dgp", spec.name());
    ks(r, "coefficients", &list(spec.coefficients()));
    if let Some(c) = spec.covariate() {
        kv(r, "covariate_ar", c.ar_coefficient);
        kv(r, "covariate_std", c.innovation_std);
    }
}

fn train_keys(r: &mut Resolved, t: &TrainConfig, with_seed: bool) {
    kv(r, "learning_rate", t.learning_rate);
    kv(r, "batch_size", t.batch_size);
    kv(r, "patience", t.patience_epochs);
    kv(r, "max_epochs", t.max_epochs);
    kv(r, "adam_beta1", t.adam_beta1);
    kv(r, "adam_beta2", t.adam_beta2);
    kv(r, "adam_epsilon", t.adam_epsilon);
    if with_seed {
        kv(r, "train_seed", t.seed);
    }
}

/// Training options with `train_seed` falling back to `seed`.
fn train_config(cfg: &Config, seed: u64) -> Result<TrainConfig> {
    let mut c = cfg.clone();
    if c.raw("train_seed").is_none() {
        c.set("train_seed", seed.to_string());
    }
    TrainConfig::from_config(&c)
}

fn covariate(cfg: &Config) -> Result<Option<CovariateSpec>> {
    if cfg.raw("covariate_ar").is_none() && cfg.raw("covariate_std").is_none() {
        return Ok(None);
    }
    let d = CovariateSpec::default();
    Ok(Some(CovariateSpec {
        ar_coefficient: cfg.get("covariate_ar")?.unwrap_or(d.ar_coefficient),
        innovation_std: cfg.get("covariate_std")?.unwrap_or(d.innovation_std),
    }))
}

fn acx_spec(cfg: &Config) -> Result<AcxSpec> {
    let (kind, f, m) = match cfg.raw("acx_kind").unwrap_or("arx1") {
        "arx1" => (AcxKind::Arx1, vec![0.0, 0.5], vec![1.0]),
        "arch1x" => (AcxKind::Arch1X, vec![0.0], vec![0.5, 0.3]),
        other => {
            return Err(Error::Config { key: "acx_kind".into(), msg: format!("unknown kind `{other}`") })
        }
    };
    Ok(AcxSpec {
        kind,
        f_coefficients: cfg.get_list("f_coefficients")?.unwrap_or(f),
        m_coefficients: cfg.get_list("m_coefficients")?.unwrap_or(m),
        innovation_std: cfg.get("innovation_std")?.unwrap_or(1.0),
        covariate: covariate(cfg)?,
        exog_coefficient: cfg.get("exog_coefficient")?.unwrap_or(0.0),
    })
}

pub(super) fn simulate(cfg: &Config, dir: &Path) -> Result<Resolved> {
    let n: usize = cfg.get("n")?.unwrap_or(1000);
    let seed: u64 = cfg.get("seed")?.unwrap_or(0);
    let burn_in: usize = cfg.get("burn_in")?.unwrap_or(DEFAULT_BURN_IN);
    let mut r = Resolved::new();
    let process = cfg.raw("process").unwrap_or("binary");
    ks(&mut r, "process", process);
    let traj = match process {
        "binary" => {
            let spec = BinaryDgpSpec::from_config(cfg)?;
            dgp_keys(&mut r, &spec);
            simulate_binary(&spec, n, seed, burn_in)?
        }
        "acx" => {
            let spec = acx_spec(cfg)?;
            ks(&mut r, "acx_kind", if spec.kind == AcxKind::Arx1 { "arx1" } else { "arch1x" });
            ks(&mut r, "f_coefficients", &list(&spec.f_coefficients));
            ks(&mut r, "m_coefficients", &list(&spec.m_coefficients));
            kv(&mut r, "innovation_std", spec.innovation_std);
            kv(&mut r, "exog_coefficient", spec.exog_coefficient);
            if let Some(c) = spec.covariate {
                kv(&mut r, "covariate_ar", c.ar_coefficient);
                kv(&mut r, "covariate_std", c.innovation_std);
            }
            simulate_acx(&spec, n, seed, burn_in)?
        }
        other => {
            return Err(Error::Config { key: "process".into(), msg: format!("unknown process `{other}`") })
        }
    };
    kv(&mut r, "n", n);
    kv(&mut r, "seed", seed);
    kv(&mut r, "burn_in", burn_in);
    let mut out = create(dir, "trajectory.csv")?;
    traj.write_csv(&mut out)?;
    out.flush()?;
    let mean = traj.labels().iter().sum::<f64>() / n as f64;
    println!("simulated {n} steps of {process} (seed {seed}), mean of y = {mean:.6}");
    Ok(r)
}

fn binary_sample(spec: &BinaryDgpSpec, n: usize, seed: u64, burn_in: usize) -> Result<Sample> {
    let lags = spec.feature_lags();
    let traj = simulate_binary(spec, n + lags.max_lag(), seed, burn_in)?;
    make_features(&traj, lags)
}

fn write_eval(dir: &Path, reports: &[(&str, &EvalReport)]) -> Result<()> {
    let mut out = create(dir, "eval.csv")?;
    writeln!(out, "split,{}", EvalReport::CSV_HEADER)?;
    for (split, rep) in reports {
        writeln!(out, "{split},{}", rep.csv_row())?;
    }
    out.flush()?;
    Ok(())
}

pub(super) fn train(cfg: &Config, dir: &Path) -> Result<Resolved> {
    let spec = BinaryDgpSpec::from_config(cfg)?;
    let n: usize = cfg.get("n")?.unwrap_or(1000);
    let test_n: usize = cfg.get("test_n")?.unwrap_or(n);
    let seed: u64 = cfg.get("seed")?.unwrap_or(0);
    let burn_in: usize = cfg.get("burn_in")?.unwrap_or(DEFAULT_BURN_IN);
    let d = spec.feature_lags().dim(usize::from(spec.covariate().is_some()));
    let arch = Architecture::classifier(d, cfg.get("depth")?.unwrap_or(2), cfg.get("width")?.unwrap_or(16))?;
    let tc = train_config(cfg, seed)?;
    if n == 0 || test_n == 0 {
        return Err(Error::Config { key: "n".into(), msg: "sample sizes must be positive".into() });
    }

    let train = binary_sample(&spec, n, derive_seed(seed, &[0]), burn_in)?;
    let test = binary_sample(&spec, test_n, derive_seed(seed, &[1]), burn_in)?;
    let (params, log) = train_erm(&train, &arch, &tc)?;
    let train_rep = empirical_01_risk(&arch, &params, &train)?;
    let test_rep = empirical_01_risk(&arch, &params, &test)?;

    let mut out = create(dir, "params.csv")?;
    write_params_csv(&params, &mut out)?;
    out.flush()?;
    let mut out = create(dir, "training_log.csv")?;
    log.write_csv(&mut out)?;
    out.flush()?;
    write_eval(dir, &[("train", &train_rep), ("test", &test_rep)])?;
    println!(
        "trained {}x{} network for {} epochs (best epoch {})\ntest set\n{test_rep}",
        arch.depth(),
        arch.width(),
        log.epochs_run(),
        log.best_epoch
    );

    let mut r = Resolved::new();
    dgp_keys(&mut r, &spec);
    kv(&mut r, "burn_in", burn_in);
    kv(&mut r, "n", n);
    kv(&mut r, "test_n", test_n);
    kv(&mut r, "seed", seed);
    kv(&mut r, "depth", arch.depth());
    kv(&mut r, "width", arch.width());
    train_keys(&mut r, &tc, true);
    Ok(r)
}

pub(super) fn bounds(cfg: &Config, dir: &Path) -> Result<Resolved> {
    let b = BoundInputs::from_config(cfg)?;
    let report = BoundReport::compute(&b)?;
    let mut out = create(dir, "bounds.csv")?;
    report.write_csv(&mut out)?;
    out.flush()?;
    println!("{report}");

    let mut r = Resolved::new();
    kv(&mut r, "M", b.m);
    kv(&mut r, "G", b.g);
    kv(&mut r, "C_sigma", b.c_sigma);
    kv(&mut r, "L1", b.l1);
    kv(&mut r, "L2", b.l2);
    kv(&mut r, "mu", b.mu);
    ks(&mut r, "psi", b.psi.name());
    kv(&mut r, "C", b.c);
    kv(&mut r, "C3", b.c3);
    kv(&mut r, "nu", b.nu);
    kv(&mut r, "eta", b.eta);
    kv(&mut r, "alpha", b.alpha);
    kv(&mut r, "L", b.complexity.depth);
    kv(&mut r, "N", b.complexity.width);
    kv(&mut r, "B", b.complexity.param_bound);
    kv(&mut r, "F", b.complexity.sup_bound);
    kv(&mut r, "S", b.complexity.sparsity);
    kv(&mut r, "n", b.n);
    ks(&mut r, "thm2_form", b.thm2_form.name());
    Ok(r)
}

pub(super) fn depcheck(cfg: &Config, dir: &Path) -> Result<Resolved> {
    let mut r = Resolved::new();
    let c: f64 = cfg.get("c")?.unwrap_or(0.3);
    let kind = cfg.raw("sequence").unwrap_or("geometric");
    ks(&mut r, "sequence", kind);
    kv(&mut r, "c", c);
    let seq = match kind {
        "geometric" => {
            let a: f64 = cfg.get("a")?.unwrap_or(0.5);
            kv(&mut r, "a", a);
            CoefficientSequence::geometric(c, a)?
        }
        "riemannian" => {
            let gamma: f64 = cfg.get("gamma")?.unwrap_or(2.0);
            kv(&mut r, "gamma", gamma);
            CoefficientSequence::riemannian(c, gamma)?
        }
        other => {
            return Err(Error::Config { key: "sequence".into(), msg: format!("unknown sequence `{other}`") })
        }
    };
    let j_max: usize = cfg.get("j_max")?.unwrap_or(200);
    if j_max == 0 {
        return Err(Error::Config { key: "j_max".into(), msg: "must be at least 1".into() });
    }
    kv(&mut r, "j_max", j_max);

    let table = tau_table(&seq, j_max)?;
    let mut out = create(dir, "tau_bound.csv")?;
    writeln!(out, "j,tau_bound,argmin_iota")?;
    for t in &table {
        writeln!(out, "{},{:?},{}", t.j, t.value, t.argmin_iota)?;
    }
    out.flush()?;
    println!("tau bound: tau(1) = {:.6e}, tau({j_max}) = {:.6e}", table[0].value, table[j_max - 1].value);

    let mu: f64 = cfg.get("mu")?.unwrap_or(2.0);
    let k_max: u32 = cfg.get("k_max")?.unwrap_or(8);
    let a3_j_max: usize = cfg.get("a3_j_max")?.unwrap_or(20_000);
    kv(&mut r, "mu", mu);
    kv(&mut r, "k_max", k_max);
    kv(&mut r, "a3_j_max", a3_j_max);
    if !matches!(seq, CoefficientSequence::Geometric { .. }) {
        println!("A3 check skipped: the stretched-exponential envelope needs a geometric sequence");
        return Ok(r);
    }
    let env = GeometricEnvelope::calibrate(&seq, j_max)?;
    let eps = StretchedExpEps::from(env);
    let (l1, l2) = match (cfg.get::<f64>("L1")?, cfg.get::<f64>("L2")?) {
        (Some(l1), Some(l2)) => {
            kv(&mut r, "L1", l1);
            kv(&mut r, "L2", l2);
            (l1, l2)
        }
        (None, None) => fit_l1_l2(&eps, mu, k_max, a3_j_max),
        _ => return Err(Error::Config { key: "L1".into(), msg: "give both L1 and L2 or neither".into() }),
    };
    let report = check_a3(&eps, l1, l2, mu, k_max, a3_j_max);
    let mut out = create(dir, "a3.csv")?;
    report.write_csv(&mut out)?;
    out.flush()?;
    println!(
        "envelope c = {:.6}, b = {:.6}; A3 with L1 = {l1:.6}, L2 = {l2:.6}, mu = {mu}: {}",
        env.c,
        env.b,
        if report.all_hold() { "holds for every k checked" } else { "not verified for every k" }
    );
    Ok(r)
}

pub(super) fn experiment(cfg: &Config, dir: &Path) -> Result<Resolved> {
    let plan = ExperimentPlan::from_config(cfg)?;
    let target = estimate_target(&plan)?;
    let curve = run_gap_curve(&plan, &target)?;

    let mut out = create(dir, "gap_curve.csv")?;
    curve.write_csv(&mut out)?;
    out.flush()?;
    let mut out = create(dir, "replications.csv")?;
    curve.write_replications_csv(&mut out)?;
    out.flush()?;
    let mut out = create(dir, "target.csv")?;
    writeln!(out, "name,value")?;
    writeln!(out, "target_risk,{:?}", target.target_risk)?;
    writeln!(out, "bayes_risk,{:?}", target.bayes_risk)?;
    writeln!(out, "bayes_se,{:?}", target.bayes_se)?;
    out.flush()?;

    println!("target risk {:.6}, Bayes risk {:.6}", target.target_risk, target.bayes_risk);
    println!("{:>6}  {:>12}  {:>10}  {:>12}  {:>6}", "n", "gap_target", "se", "gap_bayes", "failed");
    for row in &curve.rows {
        println!(
            "{:>6}  {:>12.6}  {:>10.6}  {:>12.6}  {:>6}",
            row.n, row.gap_target_mean, row.gap_target_se, row.gap_bayes_mean, row.failed
        );
    }

    let mut r = Resolved::new();
    ks(&mut r, "profile", cfg.raw("profile").unwrap_or("desk"));
    dgp_keys(&mut r, &plan.dgp);
    kv(&mut r, "burn_in", plan.burn_in);
    ks(&mut r, "n_grid", &plan.n_grid.iter().map(usize::to_string).collect::<Vec<_>>().join(","));
    kv(&mut r, "replications", plan.replications);
    kv(&mut r, "target_m", plan.target_m);
    if let Some(t) = plan.test_size {
        kv(&mut r, "test_size", t);
    }
    kv(&mut r, "seed", plan.master_seed);
    kv(&mut r, "depth", plan.arch.depth());
    kv(&mut r, "width", plan.arch.width());
    train_keys(&mut r, &plan.train, false);
    Ok(r)
}

pub(super) fn recession(cfg: &Config, dir: &Path) -> Result<Resolved> {
    let series = match cfg.raw("data") {
        Some(p) => crate::recession::load_usrecq(Path::new(p))?,
        None => parse_usrecq(BUNDLED_USRECQ.as_bytes(), Path::new("bundled usrecq.csv"))?,
    };
    let (from, to) = study_window();
    let series = series.restrict(from, to);
    let seed: u64 = cfg.get("seed")?.unwrap_or(0);
    let arch = Architecture::classifier(1, cfg.get("depth")?.unwrap_or(2), cfg.get("width")?.unwrap_or(16))?;
    let tc = train_config(cfg, seed)?;
    let res = run_recession_pipeline(&series, &arch, &tc)?;

    let mut out = create(dir, "recession_report.csv")?;
    res.write_csv(&mut out)?;
    out.flush()?;
    let mut out = create(dir, "training_log.csv")?;
    res.log.write_csv(&mut out)?;
    out.flush()?;
    println!(
        "{} quarters, {} train pairs, {} test pairs\nMLE alpha0 = {:.4}, alpha1 = {:.4}\ntest set\n{}",
        series.len(),
        res.n_train,
        res.n_test,
        res.fit.alpha0,
        res.fit.alpha1,
        res.test_report
    );

    let mut r = Resolved::new();
    if let Some(p) = cfg.raw("data") {
        ks(&mut r, "data", p);
    }
    kv(&mut r, "depth", arch.depth());
    kv(&mut r, "width", arch.width());
    train_keys(&mut r, &tc, true);
    Ok(r)
}
