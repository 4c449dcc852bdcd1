use ndarray::{Array1, Array2, ArrayView2, Axis};

use super::{hinge, hinge_subgradient};
use crate::error::{Error, Result};
use crate::neuralnet::{forward_trace, Architecture, NetworkParams};

/// Mean hinge loss over a minibatch.
pub fn minibatch_hinge_risk(
    arch: &Architecture,
    params: &NetworkParams,
    inputs: ArrayView2<'_, f64>,
    targets: &[f64],
) -> Result<f64> {
    let trace = forward_trace(arch, params, inputs)?;
    let out = trace.outputs();
    Ok(out.iter().zip(targets).map(|(h, y)| hinge(y * h)).sum::<f64>() / targets.len() as f64)
}

/// Gradient of the minibatch mean hinge loss with respect to every weight
/// and bias, returned in the shape of `params`.
pub fn backprop_gradient(
    arch: &Architecture,
    params: &NetworkParams,
    inputs: ArrayView2<'_, f64>,
    targets: &[f64],
) -> Result<NetworkParams> {
    if inputs.nrows() != targets.len() {
        return Err(Error::Dimension { expected: inputs.nrows(), got: targets.len() });
    }
    if targets.is_empty() {
        return Err(Error::EmptySample);
    }
    let trace = forward_trace(arch, params, inputs)?;
    let m = targets.len() as f64;
    let layers = params.num_layers();
    let out = trace.post[layers - 1].column(0);

    let delta_out: Array1<f64> = out
        .iter()
        .zip(targets)
        .map(|(&h, &y)| y * hinge_subgradient(y * h) / m * arch.output().derivative(h))
        .collect();
    let mut delta: Array2<f64> = delta_out.insert_axis(Axis(1));

    let mut grad = NetworkParams::zeros(arch);
    for j in (0..layers).rev() {
        let prev = if j == 0 { inputs } else { trace.post[j - 1].view() };
        grad.weights[j] = delta.t().dot(&prev);
        grad.biases[j] = delta.sum_axis(Axis(0));
        if j > 0 {
            let mut back = delta.dot(&params.weights[j]);
            let hidden = arch.hidden();
            ndarray::Zip::from(&mut back)
                .and(&trace.pre[j - 1])
                .and(&trace.post[j - 1])
                .for_each(|d, &z, &a| *d *= hidden.derivative(z, a));
            delta = back;
        }
    }
    Ok(grad)
}
