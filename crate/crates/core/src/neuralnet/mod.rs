//! Feedforward networks `h = A_{L+1} ∘ σ_L ∘ A_L ∘ … ∘ σ_1 ∘ A_1` and the
//! constrained family `H_σ(L, N, B, F, S)`.

mod constraints;
mod io;

use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

pub use constraints::{
    check_membership, lipschitz_bound, lipschitz_certificate_l1, sparsity, ComplexityBudget,
    MembershipReport, SupNormCheck, DEFAULT_SPARSITY_THRESHOLD,
};
pub use io::{read_params_csv, write_params_csv};

/// Hidden-layer activation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Relu,
    Sigmoid,
    Tanh,
}

impl Activation {
    pub fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Relu => z.max(0.0),
            Activation::Sigmoid => 1.0 / (1.0 + (-z).exp()),
            Activation::Tanh => z.tanh(),
        }
    }

    /// Derivative expressed through the pre-activation `z` and output `a`.
    /// ReLU uses 0 at the kink.
    pub fn derivative(self, z: f64, a: f64) -> f64 {
        match self {
            Activation::Relu => {
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Sigmoid => a * (1.0 - a),
            Activation::Tanh => 1.0 - a * a,
        }
    }

    /// Lipschitz constant `C_σ`.
    pub fn lipschitz(self) -> f64 {
        match self {
            Activation::Relu | Activation::Tanh => 1.0,
            Activation::Sigmoid => 0.25,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Activation::Relu => "relu",
            Activation::Sigmoid => "sigmoid",
            Activation::Tanh => "tanh",
        }
    }
}

impl std::str::FromStr for Activation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "relu" => Ok(Activation::Relu),
            "sigmoid" => Ok(Activation::Sigmoid),
            "tanh" => Ok(Activation::Tanh),
            _ => Err(Error::spec(format!("unknown activation `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputActivation {
    Identity,
    Tanh,
}

impl OutputActivation {
    pub fn apply(self, z: f64) -> f64 {
        match self {
            OutputActivation::Identity => z,
            OutputActivation::Tanh => z.tanh(),
        }
    }

    pub fn derivative(self, out: f64) -> f64 {
        match self {
            OutputActivation::Identity => 1.0,
            OutputActivation::Tanh => 1.0 - out * out,
        }
    }
}

/// Architecture `(L, p)` with widths `p = (p₀, …, p_{L+1})`, `p_{L+1} = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Architecture {
    widths: Vec<usize>,
    hidden: Activation,
    output: OutputActivation,
}

impl Architecture {
    pub fn new(widths: Vec<usize>, hidden: Activation, output: OutputActivation) -> Result<Self> {
        if widths.len() < 2 {
            return Err(Error::spec("an architecture needs input and output widths"));
        }
        if widths.contains(&0) {
            return Err(Error::spec("layer widths must be positive"));
        }
        if widths[widths.len() - 1] != 1 {
            return Err(Error::spec("output width must be 1"));
        }
        Ok(Architecture { widths, hidden, output })
    }

    /// `input_dim → hidden[0] → … → 1`.
    pub fn mlp(
        input_dim: usize,
        hidden: &[usize],
        activation: Activation,
        output: OutputActivation,
    ) -> Result<Self> {
        let mut widths = vec![input_dim];
        widths.extend_from_slice(hidden);
        widths.push(1);
        Architecture::new(widths, activation, output)
    }

    /// The classification network used throughout: `depth` hidden ReLU layers
    /// of `width` units and a tanh output.
    pub fn classifier(input_dim: usize, depth: usize, width: usize) -> Result<Self> {
        Architecture::mlp(input_dim, &vec![width; depth], Activation::Relu, OutputActivation::Tanh)
    }

    pub fn depth(&self) -> usize {
        self.widths.len() - 2
    }

    /// Largest hidden width (0 without hidden layers).
    pub fn width(&self) -> usize {
        self.widths[1..self.widths.len() - 1].iter().copied().max().unwrap_or(0)
    }

    pub fn input_dim(&self) -> usize {
        self.widths[0]
    }

    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    pub fn hidden(&self) -> Activation {
        self.hidden
    }

    pub fn output(&self) -> OutputActivation {
        self.output
    }

    pub fn param_count(&self) -> usize {
        self.widths.windows(2).map(|w| w[1] * w[0] + w[1]).sum()
    }
}

/// Weights `W_j` (`p_j × p_{j−1}`) and biases `b_j` for `j = 1..=L+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkParams {
    pub(crate) weights: Vec<Array2<f64>>,
    pub(crate) biases: Vec<Array1<f64>>,
}

impl NetworkParams {
    pub fn zeros(arch: &Architecture) -> Self {
        let w = arch.widths();
        NetworkParams {
            weights: w.windows(2).map(|p| Array2::zeros((p[1], p[0]))).collect(),
            biases: w[1..].iter().map(|&p| Array1::zeros(p)).collect(),
        }
    }

    pub fn from_parts(
        arch: &Architecture,
        weights: Vec<Array2<f64>>,
        biases: Vec<Array1<f64>>,
    ) -> Result<Self> {
        let p = NetworkParams { weights, biases };
        p.check_shapes(arch)?;
        Ok(p)
    }

    pub fn check_shapes(&self, arch: &Architecture) -> Result<()> {
        let w = arch.widths();
        let layers = w.len() - 1;
        if self.weights.len() != layers || self.biases.len() != layers {
            return Err(Error::Dimension { expected: layers, got: self.weights.len() });
        }
        for j in 0..layers {
            if self.weights[j].dim() != (w[j + 1], w[j]) {
                return Err(Error::Dimension {
                    expected: w[j + 1] * w[j],
                    got: self.weights[j].len(),
                });
            }
            if self.biases[j].len() != w[j + 1] {
                return Err(Error::Dimension { expected: w[j + 1], got: self.biases[j].len() });
            }
        }
        if !self.all_finite() {
            return Err(Error::spec("non-finite network parameter"));
        }
        Ok(())
    }

    pub fn all_finite(&self) -> bool {
        self.weights.iter().all(|w| w.iter().all(|v| v.is_finite()))
            && self.biases.iter().all(|b| b.iter().all(|v| v.is_finite()))
    }

    pub fn weights(&self) -> &[Array2<f64>] {
        &self.weights
    }

    pub fn biases(&self) -> &[Array1<f64>] {
        &self.biases
    }

    pub fn weights_mut(&mut self) -> &mut [Array2<f64>] {
        &mut self.weights
    }

    pub fn biases_mut(&mut self) -> &mut [Array1<f64>] {
        &mut self.biases
    }

    pub fn num_layers(&self) -> usize {
        self.weights.len()
    }

    /// Largest absolute parameter, `‖θ(h)‖_∞`.
    pub fn max_abs(&self) -> f64 {
        flatten_theta(self).iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// `θ(h) = (vec(W₁)ᵀ, b₁ᵀ, …, vec(W_{L+1})ᵀ, b_{L+1}ᵀ)ᵀ`, `vec` stacking columns.
pub fn flatten_theta(params: &NetworkParams) -> Vec<f64> {
    let mut theta = Vec::new();
    for (w, b) in params.weights.iter().zip(&params.biases) {
        // Transposed view iterates column by column in logical order.
        theta.extend(w.t().iter().copied());
        theta.extend(b.iter().copied());
    }
    theta
}

/// Inverse of [`flatten_theta`] for the given architecture.
pub fn unflatten_theta(arch: &Architecture, theta: &[f64]) -> Result<NetworkParams> {
    if theta.len() != arch.param_count() {
        return Err(Error::Dimension { expected: arch.param_count(), got: theta.len() });
    }
    let mut params = NetworkParams::zeros(arch);
    let mut pos = 0;
    for (w, b) in params.weights.iter_mut().zip(params.biases.iter_mut()) {
        for v in w.view_mut().reversed_axes().iter_mut() {
            *v = theta[pos];
            pos += 1;
        }
        for v in b.iter_mut() {
            *v = theta[pos];
            pos += 1;
        }
    }
    Ok(params)
}

/// Network output for a single input.
pub fn forward(arch: &Architecture, params: &NetworkParams, x: &[f64]) -> Result<f64> {
    if x.len() != arch.input_dim() {
        return Err(Error::Dimension { expected: arch.input_dim(), got: x.len() });
    }
    let mut a = Array1::from(x.to_vec());
    let last = params.weights.len() - 1;
    for (j, (w, b)) in params.weights.iter().zip(&params.biases).enumerate() {
        let z = w.dot(&a) + b;
        a = if j == last { z } else { z.mapv(|v| arch.hidden.apply(v)) };
    }
    Ok(arch.output.apply(a[0]))
}

/// Per-layer batch trace: `pre[j]` and `post[j]` are `batch × p_{j+1}`;
/// `input` is the batch itself.
#[derive(Debug, Clone)]
pub struct ForwardTrace {
    pub pre: Vec<Array2<f64>>,
    pub post: Vec<Array2<f64>>,
}

impl ForwardTrace {
    pub fn outputs(&self) -> Array1<f64> {
        self.post.last().expect("at least one layer").column(0).to_owned()
    }
}

/// Batched forward pass keeping every pre- and post-activation.
pub fn forward_trace(
    arch: &Architecture,
    params: &NetworkParams,
    inputs: ArrayView2<'_, f64>,
) -> Result<ForwardTrace> {
    if inputs.ncols() != arch.input_dim() {
        return Err(Error::Dimension { expected: arch.input_dim(), got: inputs.ncols() });
    }
    let last = params.weights.len() - 1;
    let mut pre = Vec::with_capacity(last + 1);
    let mut post: Vec<Array2<f64>> = Vec::with_capacity(last + 1);
    for (j, (w, b)) in params.weights.iter().zip(&params.biases).enumerate() {
        let prev = if j == 0 { inputs } else { post[j - 1].view() };
        let z = prev.dot(&w.t()) + b.view().insert_axis(Axis(0));
        let a = if j == last {
            z.mapv(|v| arch.output.apply(v))
        } else {
            z.mapv(|v| arch.hidden.apply(v))
        };
        pre.push(z);
        post.push(a);
    }
    Ok(ForwardTrace { pre, post })
}

/// Outputs for every row of `inputs`.
pub fn forward_batch(
    arch: &Architecture,
    params: &NetworkParams,
    inputs: ArrayView2<'_, f64>,
) -> Result<Array1<f64>> {
    Ok(forward_trace(arch, params, inputs)?.outputs())
}

/// Glorot-uniform weights on `±sqrt(6 / (fan_in + fan_out))`, zero biases.
pub fn init_params(arch: &Architecture, seed: u64) -> NetworkParams {
    let mut rng = rng_from_seed(seed);
    let mut params = NetworkParams::zeros(arch);
    for w in params.weights.iter_mut() {
        let (fan_out, fan_in) = w.dim();
        let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
        for v in w.iter_mut() {
            *v = rng.random_range(-limit..=limit);
        }
    }
    params
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use proptest::prelude::*;

    fn identity_arch(d: usize) -> Architecture {
        Architecture::mlp(d, &[], Activation::Relu, OutputActivation::Identity).unwrap()
    }

    #[test]
    fn single_affine_map() {
        let arch = identity_arch(1);
        let p = NetworkParams::from_parts(&arch, vec![array![[2.0]]], vec![array![1.0]]).unwrap();
        assert_eq!(forward(&arch, &p, &[3.0]).unwrap(), 7.0);
        assert!(matches!(forward(&arch, &p, &[1.0, 2.0]), Err(Error::Dimension { .. })));
    }

    #[test]
    fn zero_network_outputs_zero() {
        for out in [OutputActivation::Identity, OutputActivation::Tanh] {
            let arch = Architecture::mlp(3, &[4, 4], Activation::Relu, out).unwrap();
            let p = NetworkParams::zeros(&arch);
            assert_eq!(forward(&arch, &p, &[1.0, -2.0, 3.5]).unwrap(), 0.0);
        }
    }

    #[test]
    fn relu_pair_gives_absolute_value() {
        let arch = Architecture::mlp(1, &[2], Activation::Relu, OutputActivation::Identity).unwrap();
        let p = NetworkParams::from_parts(
            &arch,
            vec![array![[1.0], [-1.0]], array![[1.0, 1.0]]],
            vec![array![0.0, 0.0], array![0.0]],
        )
        .unwrap();
        for t in [-3.5, -1.0, 0.0, 0.25, 7.0] {
            assert_eq!(forward(&arch, &p, &[t]).unwrap(), f64::abs(t));
        }
    }

    #[test]
    fn column_major_theta() {
        let arch = identity_arch(2);
        let arch = Architecture::new(vec![2, 2, 1], arch.hidden(), arch.output()).unwrap();
        let mut p = NetworkParams::zeros(&arch);
        p.weights[0] = array![[1.0, 2.0], [3.0, 4.0]];
        p.biases[0] = array![5.0, 6.0];
        let theta = flatten_theta(&p);
        assert_eq!(&theta[..6], &[1.0, 3.0, 2.0, 4.0, 5.0, 6.0]);
        assert_eq!(theta.len(), arch.param_count());
        assert!(flatten_theta(&NetworkParams::zeros(&arch)).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn batch_matches_single() {
        let arch = Architecture::mlp(3, &[5, 4], Activation::Tanh, OutputActivation::Tanh).unwrap();
        let p = init_params(&arch, 3);
        let x = array![[0.1, -0.2, 0.3], [1.0, 2.0, -1.0]];
        let out = forward_batch(&arch, &p, x.view()).unwrap();
        for i in 0..2 {
            let single = forward(&arch, &p, x.row(i).as_slice().unwrap()).unwrap();
            assert!((out[i] - single).abs() < 1e-14);
        }
    }

    #[test]
    fn init_is_deterministic_and_bounded() {
        let arch = Architecture::classifier(3, 2, 16).unwrap();
        let a = init_params(&arch, 17);
        assert_eq!(a, init_params(&arch, 17));
        assert_ne!(a, init_params(&arch, 18));
        assert!(a.biases().iter().all(|b| b.iter().all(|&v| v == 0.0)));
        for w in a.weights() {
            let (o, i) = w.dim();
            let lim = (6.0 / (o + i) as f64).sqrt();
            assert!(w.iter().all(|v| v.abs() <= lim));
        }
    }

    #[test]
    fn relu_weight_scaling_is_homogeneous() {
        let arch = Architecture::mlp(2, &[3], Activation::Relu, OutputActivation::Identity).unwrap();
        let p = init_params(&arch, 5);
        let x = array![[0.7, -0.4]];
        let base = forward_trace(&arch, &p, x.view()).unwrap();
        let mut scaled = p.clone();
        scaled.weights[0].mapv_inplace(|v| v * 2.5);
        let tr = forward_trace(&arch, &scaled, x.view()).unwrap();
        for (a, b) in base.post[0].iter().zip(tr.post[0].iter()) {
            assert!((2.5 * a - b).abs() < 1e-12);
        }
    }

    fn arb_arch() -> impl Strategy<Value = Architecture> {
        (1usize..5, prop::collection::vec(1usize..6, 0..4)).prop_map(|(d, hidden)| {
            Architecture::mlp(d, &hidden, Activation::Tanh, OutputActivation::Tanh).unwrap()
        })
    }

    proptest! {
        #[test]
        fn flatten_roundtrip(arch in arb_arch(), seed in any::<u64>()) {
            let mut p = init_params(&arch, seed);
            for (j, b) in p.biases.iter_mut().enumerate() {
                b.iter_mut().enumerate().for_each(|(i, v)| *v = (i + 10 * j) as f64 * 0.01);
            }
            let theta = flatten_theta(&p);
            prop_assert_eq!(theta.len(), arch.param_count());
            prop_assert_eq!(unflatten_theta(&arch, &theta).unwrap(), p);
        }

        #[test]
        fn tanh_output_is_bounded(seed in any::<u64>(), x in prop::collection::vec(-50.0f64..50.0, 3)) {
            let arch = Architecture::classifier(3, 2, 8).unwrap();
            let mut p = init_params(&arch, seed);
            p.weights.iter_mut().for_each(|w| w.mapv_inplace(|v| v * 20.0));
            let h = forward(&arch, &p, &x).unwrap();
            prop_assert!((-1.0..=1.0).contains(&h));
        }
    }
}
