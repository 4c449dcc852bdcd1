use super::root::{bisect_increasing, Root};
use super::BoundInputs;
use crate::error::{Error, Result};

/// Which `n`-dependent term closes the second root function: `log log n`
/// follows the derivation, `log n` is the variant printed in its last line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Thm2Form {
    LogLogN,
    LogN,
}

impl std::str::FromStr for Thm2Form {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "log_log_n" => Ok(Thm2Form::LogLogN),
            "log_n" => Ok(Thm2Form::LogN),
            _ => Err(Error::spec(format!("unknown theorem-2 form `{s}` (log_log_n | log_n)"))),
        }
    }
}

impl Thm2Form {
    pub fn name(self) -> &'static str {
        match self {
            Thm2Form::LogLogN => "log_log_n",
            Thm2Form::LogN => "log_n",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thm2Constants {
    pub c5: f64,
    pub c6: f64,
    pub cn2: f64,
    pub cn2_prime: f64,
}

/// `C₅ = 4(C + M^ν/C)`,
/// `C_{n,2} = (n²/4)/(nC + log n · n^{ν−1/4}M^ν/C)`,
/// `C′_{n,2} = n²/(nC + log n · n^{ν−1/4}(2M)^ν/C)`.
pub fn thm2_constants(inputs: &BoundInputs) -> Result<Thm2Constants> {
    let (m, c, nu, n) = (inputs.m, inputs.c, inputs.nu, inputs.n);
    let c5 = 4.0 * (c + m.powf(nu) / c);
    let extra = n.ln() * n.powf(nu - 0.25);
    let cn2 = (n * n / 4.0) / (n * c + extra * m.powf(nu) / c);
    let cn2_prime = n * n / (n * c + extra * (2.0 * m).powf(nu) / c);
    Ok(Thm2Constants { c5, c6: inputs.c6()?, cn2, cn2_prime })
}

/// `φ(ε) = 2L(S+1)·log ε + C_{n,2}ε² + log(η/C₃) − C₆ − log log n`
/// (or `− log n` in the [`Thm2Form::LogN`] variant).
pub fn phi2(inputs: &BoundInputs, k: &Thm2Constants, eps: f64) -> f64 {
    let tail = match inputs.thm2_form {
        Thm2Form::LogLogN => inputs.n.ln().ln(),
        Thm2Form::LogN => inputs.n.ln(),
    };
    inputs.complexity_slope() * eps.ln() + k.cn2 * eps * eps + (inputs.eta / inputs.c3).ln() - k.c6 - tail
}

pub fn solve_eps2(inputs: &BoundInputs) -> Result<Root> {
    inputs.validate()?;
    if inputs.n <= 1.0 {
        return Err(Error::Infeasible("theorem 2 needs n > 1".into()));
    }
    let k = thm2_constants(inputs)?;
    bisect_increasing(|e| phi2(inputs, &k, e), 2.0 * inputs.m, "theorem 2")
}

/// `ε′₂ = [log(C₃ log n/η)/C′_{n,2}]^{1/2}`; a negative logarithm gives 0.
pub fn eps2_prime(inputs: &BoundInputs) -> Result<f64> {
    let k = thm2_constants(inputs)?;
    let l = (inputs.c3 * inputs.n.ln() / inputs.eta).ln();
    Ok((l.max(0.0) / k.cn2_prime).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thm2Result {
    pub constants: Thm2Constants,
    pub eps2: Root,
    pub eps2_prime: f64,
}

pub fn thm2_constants_and_eps2(inputs: &BoundInputs) -> Result<Thm2Result> {
    Ok(Thm2Result {
        constants: thm2_constants(inputs)?,
        eps2: solve_eps2(inputs)?,
        eps2_prime: eps2_prime(inputs)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::n_thresholds;
    use crate::neuralnet::ComplexityBudget;

    fn small() -> BoundInputs {
        BoundInputs {
            g: 0.1,
            c: 1.0,
            c3: 1.0,
            nu: 0.5,
            complexity: ComplexityBudget { depth: 1, width: 1, param_bound: 1.0, sup_bound: 1.0, sparsity: 1 },
            n: 1e4,
            ..BoundInputs::default()
        }
    }

    #[test]
    fn constants_by_hand() {
        let b = BoundInputs { m: 2.0, c: 0.5, nu: 0.5, n: 16.0, ..small() };
        let k = thm2_constants(&b).unwrap();
        assert!((k.c5 - 4.0 * (0.5 + 2f64.sqrt() / 0.5)).abs() < 1e-12);
        let extra = 16f64.ln() * 2.0;
        assert!((k.cn2 - 64.0 / (8.0 + extra * 2f64.sqrt() * 2.0)).abs() < 1e-12);
        assert!((k.cn2_prime - 256.0 / (8.0 + extra * 2.0 * 2.0)).abs() < 1e-12);
    }

    #[test]
    fn root_and_rate() {
        let b = small();
        let r = solve_eps2(&b).unwrap();
        assert!(r.residual.abs() < 1e-8);
        assert!(n_thresholds(&b).unwrap().thm2_met(b.n));
        assert!(r.eps < 2.0 * b.n.powf(-1.0 / 3.0));
        let logn = solve_eps2(&BoundInputs { thm2_form: Thm2Form::LogN, ..b }).unwrap();
        assert!(logn.eps > r.eps);
    }

    #[test]
    fn eps2_prime_decreases() {
        let mut prev = f64::INFINITY;
        for n in [1e3, 1e4, 1e5, 1e6] {
            let v = eps2_prime(&BoundInputs { n, ..small() }).unwrap();
            assert!(v < prev && v > 0.0);
            prev = v;
        }
    }

    #[test]
    fn combined_result() {
        let r = thm2_constants_and_eps2(&small()).unwrap();
        assert!(r.eps2.eps > 0.0 && r.eps2_prime > 0.0 && r.constants.c5 == 8.0);
    }
}
