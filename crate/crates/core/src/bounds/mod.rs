//! Generalization-bound calculators: Ψ functions, covering numbers,
//! deviation inequalities, the constants of the two excess-risk theorems,
//! their sample-size thresholds and the ε roots.

mod deviation;
mod report;
mod root;
mod thm1;
mod thm2;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::neuralnet::ComplexityBudget;

pub use deviation::{deviation_bound_rhs, DeviationVariant};
pub use report::BoundReport;
pub use root::{bisect_increasing, Root};
pub use thm1::{eps1_prime, n_zero, phi1, solve_eps1, thm1_constants, Eps1Prime, Thm1Constants};
pub use thm2::{
    eps2_prime, phi2, solve_eps2, thm2_constants, thm2_constants_and_eps2, Thm2Constants, Thm2Form, Thm2Result,
};

/// The four dependence structures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsiKind {
    Theta,
    Eta,
    Kappa,
    Lambda,
}

impl std::str::FromStr for PsiKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "theta" => Ok(PsiKind::Theta),
            "eta" => Ok(PsiKind::Eta),
            "kappa" => Ok(PsiKind::Kappa),
            "lambda" => Ok(PsiKind::Lambda),
            _ => Err(Error::spec(format!("unknown psi kind `{s}`"))),
        }
    }
}

impl PsiKind {
    pub fn name(self) -> &'static str {
        match self {
            PsiKind::Theta => "theta",
            PsiKind::Eta => "eta",
            PsiKind::Kappa => "kappa",
            PsiKind::Lambda => "lambda",
        }
    }
}

/// `ψ(Lip g₁, Lip g₂, u, v)` and the normalised `Ψ(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiValue {
    pub psi: f64,
    pub normalized: f64,
}

pub fn psi_value(kind: PsiKind, u: u32, v: u32, lip1: f64, lip2: f64) -> PsiValue {
    let (u, v) = (f64::from(u), f64::from(v));
    let (psi, normalized) = match kind {
        PsiKind::Theta => (v * lip2, 2.0 * v),
        PsiKind::Eta => (u * lip1 + v * lip2, u + v),
        PsiKind::Kappa => (u * v * lip1 * lip2, u * v),
        PsiKind::Lambda => (u * lip1 + v * lip2 + u * v * lip1 * lip2, (u + v + u * v) / 2.0),
    };
    PsiValue { psi, normalized }
}

/// `log N(H, ε/4G) ≤ 2L(S+1)·log((4G/ε)·C_σ·L·(N+1)·(B ∨ 1))`.
pub fn log_covering_bound(budget: &ComplexityBudget, eps: f64, g: f64, c_sigma: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::spec("covering radius must be positive"));
    }
    let inner = 4.0 * g / eps * c_sigma * budget.depth as f64 * (budget.width as f64 + 1.0)
        * budget.param_bound.max(1.0);
    if !(inner > 0.0) {
        return Err(Error::Infeasible("covering bound needs L ≥ 1 and positive G, C_σ".into()));
    }
    Ok(2.0 * budget.depth as f64 * (budget.sparsity as f64 + 1.0) * inner.ln())
}

/// Every constant feeding the deviation inequalities and the two theorems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInputs {
    pub m: f64,
    pub g: f64,
    pub c_sigma: f64,
    pub l1: f64,
    pub l2: f64,
    pub mu: f64,
    pub psi: PsiKind,
    pub c: f64,
    pub c3: f64,
    pub nu: f64,
    pub eta: f64,
    pub alpha: f64,
    pub complexity: ComplexityBudget,
    pub n: f64,
    pub thm2_form: Thm2Form,
}

impl Default for BoundInputs {
    fn default() -> Self {
        BoundInputs {
            m: 1.0,
            g: 1.0,
            c_sigma: 1.0,
            l1: 1.0,
            l2: 1.0,
            mu: 2.0,
            psi: PsiKind::Theta,
            c: 1.0,
            c3: 1.0,
            nu: 0.5,
            eta: 0.05,
            alpha: 3.0,
            complexity: ComplexityBudget { depth: 2, width: 16, param_bound: 1.0, sup_bound: 1.0, sparsity: 321 },
            n: 1e5,
            thm2_form: Thm2Form::LogLogN,
        }
    }
}

impl BoundInputs {
    pub fn validate(&self) -> Result<()> {
        let pos = [("M", self.m), ("G", self.g), ("C_sigma", self.c_sigma), ("C", self.c), ("C3", self.c3)];
        for (name, v) in pos {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::spec(format!("{name} must be positive and finite")));
            }
        }
        for (name, v) in [("L1", self.l1), ("L2", self.l2), ("mu", self.mu)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::spec(format!("{name} must be non-negative and finite")));
            }
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::spec("eta must lie in (0, 1)"));
        }
        if !(self.alpha > 2.0 && self.alpha.is_finite()) {
            return Err(Error::spec("alpha must exceed 2"));
        }
        if !(self.nu > 0.0 && self.nu < 1.0) {
            return Err(Error::spec("nu must lie in (0, 1)"));
        }
        if !(self.n >= 1.0 && self.n.is_finite()) {
            return Err(Error::spec("n must be at least 1"));
        }
        self.complexity.validate()
    }

    /// `Ψ(1, 1)` for the configured dependence kind.
    pub fn psi11(&self) -> f64 {
        psi_value(self.psi, 1, 1, 1.0, 1.0).normalized
    }

    /// `2L(S+1)`, the covering-bound slope in `log ε`.
    pub fn complexity_slope(&self) -> f64 {
        2.0 * self.complexity.depth as f64 * (self.complexity.sparsity as f64 + 1.0)
    }

    /// `C₆ = 2L(S+1)·log(4G·C_σ·L·(N+1)·(B ∨ 1))`.
    pub fn c6(&self) -> Result<f64> {
        log_covering_bound(&self.complexity, 1.0, self.g, self.c_sigma)
    }

    /// Keys: `M G C_sigma L1 L2 mu psi C C3 nu eta alpha L N B F S n thm2_form`.
    pub fn from_config(cfg: &Config) -> Result<Self> {
        let d = BoundInputs::default();
        let dc = d.complexity;
        let b = BoundInputs {
            m: cfg.get("M")?.unwrap_or(d.m),
            g: cfg.get("G")?.unwrap_or(d.g),
            c_sigma: cfg.get("C_sigma")?.unwrap_or(d.c_sigma),
            l1: cfg.get("L1")?.unwrap_or(d.l1),
            l2: cfg.get("L2")?.unwrap_or(d.l2),
            mu: cfg.get("mu")?.unwrap_or(d.mu),
            psi: cfg.get("psi")?.unwrap_or(d.psi),
            c: cfg.get("C")?.unwrap_or(d.c),
            c3: cfg.get("C3")?.unwrap_or(d.c3),
            nu: cfg.get("nu")?.unwrap_or(d.nu),
            eta: cfg.get("eta")?.unwrap_or(d.eta),
            alpha: cfg.get("alpha")?.unwrap_or(d.alpha),
            complexity: ComplexityBudget {
                depth: cfg.get("L")?.unwrap_or(dc.depth),
                width: cfg.get("N")?.unwrap_or(dc.width),
                param_bound: cfg.get("B")?.unwrap_or(dc.param_bound),
                sup_bound: cfg.get("F")?.unwrap_or(dc.sup_bound),
                sparsity: cfg.get("S")?.unwrap_or(dc.sparsity),
            },
            n: cfg.get("n")?.unwrap_or(d.n),
            thm2_form: cfg.get("thm2_form")?.unwrap_or(d.thm2_form),
        };
        b.validate()?;
        Ok(b)
    }
}

/// Sample-size conditions of the two theorems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NThresholds {
    pub thm1_eq14: f64,
    pub thm1_n0: f64,
    pub thm2_eq17: f64,
    /// `n^{5/4−ν} ≥ log n` and `log n / 4M² < n / 2C₅` at the configured `n`.
    pub thm2_regular: bool,
}

impl NThresholds {
    pub fn thm1_met(&self, n: f64) -> bool {
        n >= self.thm1_eq14.max(self.thm1_n0)
    }

    pub fn thm2_met(&self, n: f64) -> bool {
        n > self.thm2_eq17 && self.thm2_regular
    }
}

pub fn n_thresholds(inputs: &BoundInputs) -> Result<NThresholds> {
    inputs.validate()?;
    let t1 = thm1_constants(inputs)?;
    let t2 = thm2_constants(inputs)?;
    let m = inputs.m;
    let slope = inputs.complexity_slope();
    let a = inputs.alpha;
    let mu = inputs.mu;
    let base1 = (t1.c6 - inputs.eta.ln() - slope * (2.0 * m).ln()).max(0.0);
    let thm1_eq14 = (t1.c4 / (2.0 * m * m) * base1).powf(a * (mu + 2.0) / (a - 2.0)).max(1.0);
    let base2 = (t1.c6 - (inputs.eta / inputs.c3).ln() - slope * (2.0 * m).ln()).max(0.0);
    let thm2_eq17 = (t2.c5 / (2.0 * m * m) * base2).powf(a / (a - 2.0));
    let n = inputs.n;
    let thm2_regular = n.powf(1.25 - inputs.nu) >= n.ln() && n.ln() / (4.0 * m * m) < n / (2.0 * t2.c5);
    Ok(NThresholds { thm1_eq14, thm1_n0: n_zero(inputs, t1.c4), thm2_eq17, thm2_regular })
}
