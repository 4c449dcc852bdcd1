use std::fmt;
use std::io::Write;

use super::{
    eps1_prime, log_covering_bound, n_thresholds, solve_eps1, solve_eps2, eps2_prime, thm1_constants,
    thm2_constants, BoundInputs, Eps1Prime, NThresholds, Root, Thm1Constants, Thm2Constants,
};
use crate::error::{Error, Result};

/// Everything computable from a [`BoundInputs`]. Roots are `None` when `φ`
/// has no sign change on `(0, 2M)`; `feasible_*` additionally requires the
/// sample-size conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub inputs: BoundInputs,
    pub covering_eps: f64,
    pub log_covering: f64,
    pub thm1: Thm1Constants,
    pub thm2: Thm2Constants,
    pub eps1: Option<Root>,
    pub eps1_prime: Eps1Prime,
    pub eps2: Option<Root>,
    pub eps2_prime: f64,
    pub thresholds: NThresholds,
    pub feasible_thm1: bool,
    pub feasible_thm2: bool,
}

fn optional(r: Result<Root>) -> Result<Option<Root>> {
    match r {
        Ok(root) => Ok(Some(root)),
        Err(Error::Infeasible(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

impl BoundReport {
    /// The covering number is reported at `ε₁` when it exists, else at `2M`.
    pub fn compute(inputs: &BoundInputs) -> Result<Self> {
        inputs.validate()?;
        let thm1 = thm1_constants(inputs)?;
        let thm2 = thm2_constants(inputs)?;
        let eps1 = optional(solve_eps1(inputs))?;
        let eps2 = optional(solve_eps2(inputs))?;
        let thresholds = n_thresholds(inputs)?;
        let covering_eps = eps1.map_or(2.0 * inputs.m, |r| r.eps);
        Ok(BoundReport {
            inputs: *inputs,
            covering_eps,
            log_covering: log_covering_bound(&inputs.complexity, covering_eps, inputs.g, inputs.c_sigma)?,
            thm1,
            thm2,
            eps1,
            eps1_prime: eps1_prime(inputs)?,
            eps2,
            eps2_prime: eps2_prime(inputs)?,
            feasible_thm1: eps1.is_some() && thresholds.thm1_met(inputs.n),
            feasible_thm2: eps2.is_some() && thresholds.thm2_met(inputs.n),
            thresholds,
        })
    }

    /// Ordered `(name, value)` pairs; missing roots print as `NaN`.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let i = &self.inputs;
        let num = |v: f64| format!("{v:?}");
        let root = |r: Option<Root>| r.map_or(f64::NAN, |r| r.eps);
        let resid = |r: Option<Root>| r.map_or(f64::NAN, |r| r.residual);
        vec![
            ("M", num(i.m)),
            ("G", num(i.g)),
            ("C_sigma", num(i.c_sigma)),
            ("L1", num(i.l1)),
            ("L2", num(i.l2)),
            ("mu", num(i.mu)),
            ("psi", i.psi.name().to_string()),
            ("C", num(i.c)),
            ("C3", num(i.c3)),
            ("nu", num(i.nu)),
            ("eta", num(i.eta)),
            ("alpha", num(i.alpha)),
            ("L", i.complexity.depth.to_string()),
            ("N", i.complexity.width.to_string()),
            ("B", num(i.complexity.param_bound)),
            ("F", num(i.complexity.sup_bound)),
            ("S", i.complexity.sparsity.to_string()),
            ("n", num(i.n)),
            ("thm2_form", i.thm2_form.name().to_string()),
            ("covering_eps", num(self.covering_eps)),
            ("log_covering", num(self.log_covering)),
            ("C1", num(self.thm1.c1)),
            ("C2", num(self.thm1.c2)),
            ("C4", num(self.thm1.c4)),
            ("C5", num(self.thm2.c5)),
            ("C6", num(self.thm1.c6)),
            ("Cn1", num(self.thm1.cn1)),
            ("Cn1_prime", num(self.thm1.cn1_prime)),
            ("Cn2", num(self.thm2.cn2)),
            ("Cn2_prime", num(self.thm2.cn2_prime)),
            ("eps1", num(root(self.eps1))),
            ("eps1_residual", num(resid(self.eps1))),
            ("eps1_prime_stmt", num(self.eps1_prime.stmt_form)),
            ("eps1_prime_proof", num(self.eps1_prime.proof_form)),
            ("eps2", num(root(self.eps2))),
            ("eps2_residual", num(resid(self.eps2))),
            ("eps2_prime", num(self.eps2_prime)),
            ("thm1_eq14", num(self.thresholds.thm1_eq14)),
            ("thm1_n0", num(self.thresholds.thm1_n0)),
            ("thm2_eq17", num(self.thresholds.thm2_eq17)),
            ("thm2_regular", self.thresholds.thm2_regular.to_string()),
            ("feasible_thm1", self.feasible_thm1.to_string()),
            ("feasible_thm2", self.feasible_thm2.to_string()),
        ]
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "name,value")?;
        for (k, v) in self.entries() {
            writeln!(out, "{k},{v}")?;
        }
        Ok(())
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries = self.entries();
        let width = entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (i, (k, v)) in entries.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{k:<width$}  {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neuralnet::ComplexityBudget;

    #[test]
    fn report_roundtrip() {
        let b = BoundInputs {
            g: 0.1,
            l1: 1e-3,
            l2: 1e-5,
            complexity: ComplexityBudget { depth: 1, width: 1, param_bound: 1.0, sup_bound: 1.0, sparsity: 1 },
            n: 1e5,
            ..BoundInputs::default()
        };
        let r = BoundReport::compute(&b).unwrap();
        assert!(r.feasible_thm1 && r.feasible_thm2);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("name,value\nM,1.0\n"));
        assert!(text.contains("\nfeasible_thm1,true\n"));
        assert!(r.to_string().contains("eps1 "));
    }

    #[test]
    fn infeasible_roots_are_nan() {
        let b = BoundInputs { n: 10.0, g: 10.0, ..BoundInputs::default() };
        let r = BoundReport::compute(&b).unwrap();
        assert!(r.eps1.is_none() && !r.feasible_thm1);
        assert!(r.entries().iter().any(|(k, v)| *k == "eps1" && v == "NaN"));
    }
}
