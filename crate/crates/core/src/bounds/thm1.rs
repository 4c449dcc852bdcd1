use super::root::{bisect_increasing, Root};
use super::BoundInputs;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thm1Constants {
    pub c1: f64,
    pub c2: f64,
    pub c4: f64,
    pub c6: f64,
    pub cn1: f64,
    pub cn1_prime: f64,
}

/// `C₁ = 4M²Ψ(1,1)L₁`, `C₂ = 2ML₂·max(2^{3+μ}/Ψ(1,1), 1)`,
/// `C₄ = 4C₁ + 8C₂^{1/(μ+2)}M^{(2μ+3)/(μ+2)}`, `C₆`, and
/// `C_{n,1} = n²/(4C₁n + 8C₂^{1/(μ+2)}(nM)^{(2μ+3)/(μ+2)})`,
/// `C′_n = n²/(C₁n + 2C₂^{1/(μ+2)}(2nM)^{(2μ+3)/(μ+2)})`.
pub fn thm1_constants(inputs: &BoundInputs) -> Result<Thm1Constants> {
    let (m, mu, n) = (inputs.m, inputs.mu, inputs.n);
    let psi11 = inputs.psi11();
    let c1 = 4.0 * m * m * psi11 * inputs.l1;
    let c2 = 2.0 * m * inputs.l2 * (2f64.powf(3.0 + mu) / psi11).max(1.0);
    let root = c2.powf(1.0 / (mu + 2.0));
    let expo = (2.0 * mu + 3.0) / (mu + 2.0);
    let c4 = 4.0 * c1 + 8.0 * root * m.powf(expo);
    let cn1 = n * n / (4.0 * c1 * n + 8.0 * root * (n * m).powf(expo));
    let cn1_prime = n * n / (c1 * n + 2.0 * root * (2.0 * n * m).powf(expo));
    Ok(Thm1Constants { c1, c2, c4, c6: inputs.c6()?, cn1, cn1_prime })
}

/// `φ(ε) = 2L(S+1)·log ε + C_{n,1}ε² + log η − C₆`.
pub fn phi1(inputs: &BoundInputs, k: &Thm1Constants, eps: f64) -> f64 {
    inputs.complexity_slope() * eps.ln() + k.cn1 * eps * eps + inputs.eta.ln() - k.c6
}

/// The unique root `ε₁` of [`phi1`] on `(0, 2M)`.
pub fn solve_eps1(inputs: &BoundInputs) -> Result<Root> {
    inputs.validate()?;
    let k = thm1_constants(inputs)?;
    bisect_increasing(|e| phi1(inputs, &k, e), 2.0 * inputs.m, "theorem 1")
}

/// The two published forms of `ε′₁`: `[log(1/η)/C_{n,1}]^{μ+2}` and
/// `[log(1/η)/C′_n]^{1/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eps1Prime {
    pub stmt_form: f64,
    pub proof_form: f64,
}

/// `η = 1` is accepted here and gives zero for both forms.
pub fn eps1_prime(inputs: &BoundInputs) -> Result<Eps1Prime> {
    let k = thm1_constants(inputs)?;
    let l = (1.0 / inputs.eta).ln();
    Ok(Eps1Prime { stmt_form: (l / k.cn1).powf(inputs.mu + 2.0), proof_form: (l / k.cn1_prime).sqrt() })
}

/// Smallest `n` beyond which
/// `g(n) = 2C₄L(S+1)/(4αM²(μ+2)) · log n / n^{(α−2)/(α(μ+2))} < 1/2` holds for
/// every larger `n`. `g` rises to its peak at `n = e^{1/β}` and then
/// decreases, so the answer is 1 when the peak is below 1/2 and otherwise lies
/// on the decreasing branch, found by doubling and integer bisection.
pub fn n_zero(inputs: &BoundInputs, c4: f64) -> f64 {
    let (m, mu, a) = (inputs.m, inputs.mu, inputs.alpha);
    let beta = (a - 2.0) / (a * (mu + 2.0));
    let k = c4 * inputs.complexity_slope() / (4.0 * a * m * m * (mu + 2.0));
    let g = |n: f64| k * n.ln() / n.powf(beta);
    let peak = (1.0 / beta).exp();
    if k / (std::f64::consts::E * beta) < 0.5 {
        return 1.0;
    }
    let mut lo = peak.floor().max(1.0);
    let mut hi = (2.0 * lo).max(2.0);
    while g(hi) >= 0.5 {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return f64::INFINITY;
        }
    }
    // Beyond 2^53 integers are not representable; the bracket top is returned.
    while hi - lo > 1.0 && hi < 9.007_199_254_740_992e15 {
        let mid = (0.5 * (lo + hi)).floor();
        if g(mid) < 0.5 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
