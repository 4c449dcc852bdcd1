//! Command-line front end.
//!
//! Every subcommand flag corresponds to a configuration key. Flags are
//! layered over an optional `--config` file, the merged set is resolved into
//! library types, and the fully resolved keys are written to `manifest.txt`
//! so that `--config manifest.txt` repeats the run.

mod commands;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::Config;
use crate::error::{Error, Result};

/// Format version of `manifest.txt`.
pub const MANIFEST_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "weakdep", version, about = "Learning theory for weakly dependent time series")]
struct Cli {
    /// key = value file; command-line flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Master seed.
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Directory for every output file.
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

macro_rules! keyed_args {
    ($(#[$meta:meta])* $name:ident { $($field:ident = $key:literal, $flag:literal: $help:literal;)* }) => {
        $(#[$meta])*
        #[derive(Debug, Args)]
        struct $name {
            $(
                #[doc = $help]
                #[arg(long = $flag, allow_hyphen_values = true)]
                $field: Option<String>,
            )*
        }

        impl $name {
            fn config(&self) -> Config {
                let mut cfg = Config::default();
                $(
                    if let Some(v) = &self.$field {
                        cfg.set($key, v.clone());
                    }
                )*
                cfg
            }
        }
    };
}

keyed_args!(DgpFlags {
    dgp = "dgp", "dgp": "Binary process: dgp1, dgp2 or custom";
    coefficients = "coefficients", "coefficients": "Comma-separated link coefficients";
    covariate_ar = "covariate_ar", "covariate-ar": "AR coefficient of the covariate";
    covariate_std = "covariate_std", "covariate-std": "Innovation std of the covariate";
    burn_in = "burn_in", "burn-in": "Discarded warm-up steps";
});

keyed_args!(TrainFlags {
    depth = "depth", "depth": "Hidden layers";
    width = "width", "width": "Units per hidden layer";
    learning_rate = "learning_rate", "learning-rate": "Adam step size";
    batch_size = "batch_size", "batch-size": "Minibatch size";
    patience = "patience", "patience": "Epochs without improvement before stopping";
    max_epochs = "max_epochs", "max-epochs": "Epoch cap";
    adam_beta1 = "adam_beta1", "adam-beta1": "First-moment decay";
    adam_beta2 = "adam_beta2", "adam-beta2": "Second-moment decay";
    adam_epsilon = "adam_epsilon", "adam-epsilon": "Adam denominator offset";
});

keyed_args!(SimulateFlags {
    process = "process", "process": "binary or acx";
    n = "n", "n": "Trajectory length";
    acx_kind = "acx_kind", "acx-kind": "arx1 or arch1x";
    f_coefficients = "f_coefficients", "f-coefficients": "Mean coefficients f0,f1,...";
    m_coefficients = "m_coefficients", "m-coefficients": "Volatility coefficients m0,m1,...";
    innovation_std = "innovation_std", "innovation-std": "Innovation scale";
    exog_coefficient = "exog_coefficient", "exog-coefficient": "Covariate loading";
});

keyed_args!(TrainDataFlags {
    n = "n", "n": "Training trajectory length";
    test_n = "test_n", "test-n": "Test trajectory length (defaults to n)";
    train_seed = "train_seed", "train-seed": "Seed for initialisation and shuffling";
});

keyed_args!(BoundsFlags {
    m = "M", "M": "Bound on |Y|";
    g = "G", "G": "Covering constant";
    c_sigma = "C_sigma", "C-sigma": "Activation Lipschitz constant";
    l1 = "L1", "L1": "Dependence constant L1";
    l2 = "L2", "L2": "Dependence constant L2";
    mu = "mu", "mu": "Dependence exponent";
    psi = "psi", "psi": "theta, eta, kappa or lambda";
    c = "C", "C": "Constant C";
    c3 = "C3", "C3": "Constant C3";
    nu = "nu", "nu": "Exponent nu";
    eta = "eta", "eta": "Confidence level";
    alpha = "alpha", "alpha": "Rate exponent";
    depth = "L", "L": "Network depth";
    width = "N", "N": "Network width";
    param_bound = "B", "B": "Parameter bound";
    sup_bound = "F", "F": "Sup-norm bound";
    sparsity = "S", "S": "Sparsity budget";
    n = "n", "n": "Sample size";
    thm2_form = "thm2_form", "thm2-form": "log_log_n or log_n";
});

keyed_args!(DepcheckFlags {
    sequence = "sequence", "sequence": "geometric or riemannian";
    c = "c", "c": "Sequence scale";
    a = "a", "a": "Geometric ratio";
    gamma = "gamma", "gamma": "Riemannian exponent";
    j_max = "j_max", "j-max": "Largest j in the tau table";
    mu = "mu", "mu": "A3 exponent";
    k_max = "k_max", "k-max": "Largest moment order checked";
    a3_j_max = "a3_j_max", "a3-j-max": "Terms summed before the tail certificate";
    l1 = "L1", "L1": "A3 constant L1 (fitted when absent)";
    l2 = "L2", "L2": "A3 constant L2 (fitted when absent)";
});

keyed_args!(ExperimentFlags {
    profile = "profile", "profile": "desk or full";
    n_grid = "n_grid", "n-grid": "Comma-separated sample sizes";
    replications = "replications", "replications": "Replications per sample size";
    target_m = "target_m", "target-m": "Sample size for the target network";
    test_size = "test_size", "test-size": "Fixed test length (defaults to n)";
});

keyed_args!(RecessionFlags {
    data = "data", "data": "USRECQ csv (defaults to the bundled copy)";
});

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate a trajectory to trajectory.csv.
    Simulate {
        #[command(flatten)]
        sim: SimulateFlags,
        #[command(flatten)]
        dgp: DgpFlags,
    },
    /// Train a classifier on a simulated binary series.
    Train {
        #[command(flatten)]
        data: TrainDataFlags,
        #[command(flatten)]
        dgp: DgpFlags,
        #[command(flatten)]
        train: TrainFlags,
    },
    /// Generalization bounds and their roots.
    Bounds {
        #[command(flatten)]
        bounds: BoundsFlags,
    },
    /// tau bounds and the factorial-moment condition.
    Depcheck {
        #[command(flatten)]
        dep: DepcheckFlags,
    },
    /// Monte-Carlo risk-gap curve.
    Experiment {
        #[command(flatten)]
        exp: ExperimentFlags,
        #[command(flatten)]
        dgp: DgpFlags,
        #[command(flatten)]
        train: TrainFlags,
        /// Worker threads (defaults to all cores).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// US recession classification.
    Recession {
        #[command(flatten)]
        rec: RecessionFlags,
        #[command(flatten)]
        train: TrainFlags,
        /// Download the series into the output directory first.
        #[arg(long)]
        fetch: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Simulate { .. } => "simulate",
            Command::Train { .. } => "train",
            Command::Bounds { .. } => "bounds",
            Command::Depcheck { .. } => "depcheck",
            Command::Experiment { .. } => "experiment",
            Command::Recession { .. } => "recession",
        }
    }

    fn flags(&self) -> Config {
        match self {
            Command::Simulate { sim, dgp } => dgp.config().overlay(&sim.config()),
            Command::Train { data, dgp, train } => dgp.config().overlay(&train.config()).overlay(&data.config()),
            Command::Bounds { bounds } => bounds.config(),
            Command::Depcheck { dep } => dep.config(),
            Command::Experiment { exp, dgp, train, .. } => dgp.config().overlay(&train.config()).overlay(&exp.config()),
            Command::Recession { rec, train, .. } => train.config().overlay(&rec.config()),
        }
    }
}

/// Resolved `key = value` pairs in write order.
pub(crate) type Resolved = Vec<(String, String)>;

fn write_manifest(dir: &Path, command: &str, resolved: &Resolved) -> Result<()> {
    let mut text = format!(
        "# weakdep manifest\n# manifest_version = {MANIFEST_VERSION}\n# weakdep_version = {}\n# rng = {}\n# command = {command}\n",
        env!("CARGO_PKG_VERSION"),
        crate::rng::RNG_ALGORITHM,
    );
    for (k, v) in resolved {
        text.push_str(&format!("{k} = {v}\n"));
    }
    std::fs::write(dir.join("manifest.txt"), text)?;
    Ok(())
}

/// Validation problems exit with 1, everything else with 2.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidSpec(_)
        | Error::Dimension { .. }
        | Error::TooShort { .. }
        | Error::Contraction { .. }
        | Error::Infeasible(_)
        | Error::Config { .. }
        | Error::Parse { .. } => 1,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    cfg = cfg.overlay(&cli.command.flags());
    if let Some(s) = &cli.seed {
        cfg.set("seed", s.clone());
    }
    std::fs::create_dir_all(&cli.out_dir)?;
    let dir = cli.out_dir.as_path();
    let resolved = match &cli.command {
        Command::Simulate { .. } => commands::simulate(&cfg, dir)?,
        Command::Train { .. } => commands::train(&cfg, dir)?,
        Command::Bounds { .. } => commands::bounds(&cfg, dir)?,
        Command::Depcheck { .. } => commands::depcheck(&cfg, dir)?,
        Command::Experiment { jobs, .. } => {
            let mut pool = rayon::ThreadPoolBuilder::new();
            if let Some(j) = jobs {
                if *j == 0 {
                    return Err(Error::Config { key: "jobs".into(), msg: "must be at least 1".into() });
                }
                pool = pool.num_threads(*j);
            }
            let pool = pool.build().map_err(|e| Error::spec(e.to_string()))?;
            pool.install(|| commands::experiment(&cfg, dir))?
        }
        Command::Recession { fetch, .. } => {
            if *fetch {
                let dest = dir.join("usrecq.csv");
                crate::recession::fetch_usrecq(&dest)?;
                cfg.set("data", dest.display().to_string());
            }
            commands::recession(&cfg, dir)?
        }
    };
    write_manifest(dir, cli.command.name(), &resolved)
}

/// Parse `argv` (program name first), run, and return the process exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
