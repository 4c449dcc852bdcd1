use ndarray::ArrayView2;

use super::{flatten_theta, forward_batch, Architecture, NetworkParams, OutputActivation};
use crate::error::{Error, Result};

/// Magnitude below which a trained parameter counts as zero.
pub const DEFAULT_SPARSITY_THRESHOLD: f64 = 1e-6;

/// Bounds `(L, N, B, F, S)` defining `H_σ(L, N, B, F, S)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexityBudget {
    pub depth: usize,
    pub width: usize,
    pub param_bound: f64,
    pub sup_bound: f64,
    pub sparsity: usize,
}

impl ComplexityBudget {
    pub fn new(depth: usize, width: usize, param_bound: f64, sup_bound: f64, sparsity: usize) -> Result<Self> {
        let b = ComplexityBudget { depth, width, param_bound, sup_bound, sparsity };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.param_bound >= 0.0 && self.param_bound.is_finite()) {
            return Err(Error::spec("parameter bound B must be finite and non-negative"));
        }
        if !(self.sup_bound >= 0.0) {
            return Err(Error::spec("sup-norm bound F must be non-negative"));
        }
        Ok(())
    }

    /// Tightest budget containing a given network (`B = max(‖θ‖_∞, 1)`, `F = 1`).
    pub fn of_network(arch: &Architecture, params: &NetworkParams, threshold: f64) -> Self {
        ComplexityBudget {
            depth: arch.depth(),
            width: arch.width(),
            param_bound: params.max_abs().max(1.0),
            sup_bound: 1.0,
            sparsity: sparsity(params, threshold),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SupNormCheck {
    /// Guaranteed by the tanh output range.
    Certified,
    /// Largest `|h|` seen on the probes.
    Empirical { max_abs: f64, ok: bool },
}

impl SupNormCheck {
    pub fn ok(&self) -> bool {
        match *self {
            SupNormCheck::Certified => true,
            SupNormCheck::Empirical { ok, .. } => ok,
        }
    }

    pub fn is_empirical(&self) -> bool {
        matches!(self, SupNormCheck::Empirical { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipReport {
    pub depth_ok: bool,
    pub width_ok: bool,
    pub theta_norm_ok: bool,
    pub sup_norm: SupNormCheck,
    pub sparsity_ok: bool,
    pub theta_max_abs: f64,
    pub nonzero: usize,
}

impl MembershipReport {
    pub fn sup_norm_ok(&self) -> bool {
        self.sup_norm.ok()
    }

    pub fn all_ok(&self) -> bool {
        self.depth_ok && self.width_ok && self.theta_norm_ok && self.sup_norm_ok() && self.sparsity_ok
    }
}

/// Number of entries of `θ(h)` with `|θ_i| > threshold`.
pub fn sparsity(params: &NetworkParams, threshold: f64) -> usize {
    flatten_theta(params).iter().filter(|v| v.abs() > threshold).count()
}

/// Checks each defining constraint of the family separately. The sup-norm
/// flag is certified for tanh outputs with `F ≥ 1`; otherwise it is estimated
/// on `probes` (rows are inputs).
pub fn check_membership(
    arch: &Architecture,
    params: &NetworkParams,
    budget: &ComplexityBudget,
    probes: ArrayView2<'_, f64>,
    sparsity_threshold: f64,
) -> Result<MembershipReport> {
    params.check_shapes(arch)?;
    let theta_max_abs = params.max_abs();
    let nonzero = sparsity(params, sparsity_threshold);
    let sup_norm = if arch.output() == OutputActivation::Tanh && budget.sup_bound >= 1.0 {
        SupNormCheck::Certified
    } else {
        if probes.nrows() == 0 {
            return Err(Error::EmptySample);
        }
        let out = forward_batch(arch, params, probes)?;
        let max_abs = out.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        SupNormCheck::Empirical { max_abs, ok: max_abs <= budget.sup_bound }
    };
    Ok(MembershipReport {
        depth_ok: arch.depth() <= budget.depth,
        width_ok: arch.width() <= budget.width,
        theta_norm_ok: theta_max_abs <= budget.param_bound,
        sup_norm,
        sparsity_ok: nonzero <= budget.sparsity,
        theta_max_abs,
        nonzero,
    })
}

/// `C_σ^L · B^{L+1}` with `L` taken from the budget.
///
/// Norm convention: a Lipschitz constant in the ℓ₁ input norm for networks
/// whose weight matrices each have induced ℓ₁ operator norm (maximum absolute
/// column sum) at most `B`. Under the entrywise bound `‖θ‖_∞ ≤ B` alone use
/// [`lipschitz_certificate_l1`].
pub fn lipschitz_bound(arch: &Architecture, budget: &ComplexityBudget) -> f64 {
    let l = budget.depth as i32;
    arch.hidden().lipschitz().powi(l) * budget.param_bound.powi(l + 1)
}

/// A constant valid for every network of this architecture with
/// `‖θ‖_∞ ≤ B`, measured in the ℓ₁ input norm: each hidden layer's induced
/// ℓ₁ operator norm is at most `p_j · B`, so the literal bound picks up the
/// factor `Π_{j=1}^{L} p_j`.
pub fn lipschitz_certificate_l1(arch: &Architecture, budget: &ComplexityBudget) -> f64 {
    let w = arch.widths();
    let widths: f64 = w[1..w.len() - 1].iter().map(|&p| p as f64).product();
    let l = arch.depth() as i32;
    arch.hidden().lipschitz().powi(l) * budget.param_bound.powi(l + 1) * widths
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neuralnet::{forward, init_params, unflatten_theta, Activation};
    use crate::rng::rng_from_seed;
    use ndarray::Array2;
    use rand::Rng;

    fn budget(l: usize, n: usize, b: f64, f: f64, s: usize) -> ComplexityBudget {
        ComplexityBudget::new(l, n, b, f, s).unwrap()
    }

    #[test]
    fn sparsity_counts() {
        let arch = Architecture::mlp(2, &[], Activation::Relu, OutputActivation::Identity).unwrap();
        let p = unflatten_theta(&arch, &[0.0, 0.5, -0.2]).unwrap();
        assert_eq!(sparsity(&p, 0.0), 2);
        assert_eq!(sparsity(&p, 0.3), 1);
        let dense = init_params(&Architecture::classifier(3, 2, 8).unwrap(), 1);
        let mut dense = dense;
        dense.biases_mut().iter_mut().for_each(|b| b.fill(0.1));
        assert_eq!(sparsity(&dense, 0.0), flatten_theta(&dense).len());
    }

    #[test]
    fn membership_flags() {
        let arch = Architecture::classifier(2, 2, 16).unwrap();
        let mut p = init_params(&arch, 4);
        let probes = Array2::zeros((0, 2));
        let r = check_membership(&arch, &p, &budget(2, 16, 1.0, 1.0, 10_000), probes.view(), 0.0).unwrap();
        assert!(r.depth_ok && r.width_ok && r.theta_norm_ok && r.sparsity_ok);
        assert_eq!(r.sup_norm, SupNormCheck::Certified);
        p.weights_mut()[0][[0, 0]] = 1.2;
        let r = check_membership(&arch, &p, &budget(1, 8, 1.0, 1.0, 5), probes.view(), 0.0).unwrap();
        assert!(!r.depth_ok && !r.width_ok && !r.theta_norm_ok && !r.sparsity_ok);
    }

    #[test]
    fn empirical_sup_norm() {
        let arch = Architecture::mlp(1, &[], Activation::Relu, OutputActivation::Identity).unwrap();
        let p = unflatten_theta(&arch, &[2.0, 0.0]).unwrap();
        let probes = Array2::from_shape_vec((3, 1), vec![-1.0, 0.5, 1.5]).unwrap();
        let r = check_membership(&arch, &p, &budget(0, 0, 2.0, 2.0, 2), probes.view(), 0.0).unwrap();
        assert_eq!(r.sup_norm, SupNormCheck::Empirical { max_abs: 3.0, ok: false });
        let empty = Array2::zeros((0, 1));
        assert!(check_membership(&arch, &p, &budget(0, 0, 2.0, 2.0, 2), empty.view(), 0.0).is_err());
    }

    #[test]
    fn lipschitz_values() {
        let relu = Architecture::classifier(3, 2, 4).unwrap();
        assert_eq!(lipschitz_bound(&relu, &budget(2, 4, 2.0, 1.0, 0)), 8.0);
        let lin = Architecture::mlp(3, &[], Activation::Relu, OutputActivation::Identity).unwrap();
        assert_eq!(lipschitz_bound(&lin, &budget(0, 0, 3.0, 1.0, 0)), 3.0);
        let sig = Architecture::mlp(3, &[4], Activation::Sigmoid, OutputActivation::Identity).unwrap();
        assert_eq!(lipschitz_bound(&sig, &budget(1, 4, 2.0, 1.0, 0)), 1.0);
        assert_eq!(lipschitz_certificate_l1(&relu, &budget(2, 4, 2.0, 1.0, 0)), 128.0);
    }

    #[test]
    fn lipschitz_monotone() {
        let arch = Architecture::classifier(2, 3, 4).unwrap();
        let mut prev = 0.0;
        for b in [1.0, 1.5, 2.0, 4.0] {
            let v = lipschitz_bound(&arch, &budget(3, 4, b, 1.0, 0));
            assert!(v >= prev);
            prev = v;
        }
        let mut prev = 0.0;
        for l in 0..5 {
            let v = lipschitz_bound(&arch, &budget(l, 4, 1.5, 1.0, 0));
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn certificate_holds_on_random_pairs() {
        let arch = Architecture::mlp(3, &[6, 6], Activation::Tanh, OutputActivation::Identity).unwrap();
        let b = budget(2, 6, 1.0, 1.0, 0);
        let cert = lipschitz_certificate_l1(&arch, &b);
        let mut rng = rng_from_seed(9);
        for trial in 0..200 {
            let theta: Vec<f64> =
                (0..arch.param_count()).map(|_| rng.random_range(-1.0..=1.0)).collect();
            let p = unflatten_theta(&arch, &theta).unwrap();
            for _ in 0..10 {
                let x: Vec<f64> = (0..3).map(|_| rng.random_range(-2.0..2.0)).collect();
                let y: Vec<f64> = (0..3).map(|_| rng.random_range(-2.0..2.0)).collect();
                let d1: f64 = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).sum();
                let dh = (forward(&arch, &p, &x).unwrap() - forward(&arch, &p, &y).unwrap()).abs();
                assert!(dh <= cert * d1 + 1e-12, "trial {trial}");
            }
        }
    }
}
