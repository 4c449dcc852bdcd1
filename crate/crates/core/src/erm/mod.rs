//! Surrogate losses, empirical risks, backpropagation and ERM training.

mod backprop;
mod eval;
mod train;

pub use backprop::{backprop_gradient, minibatch_hinge_risk};
pub use eval::{empirical_01_risk, empirical_surrogate_risk, evaluate_scores, EvalReport};
pub use train::{train_erm, EpochRecord, TrainConfig, TrainingLog};

/// Hinge loss `φ(u) = max(1 − u, 0)`.
pub fn hinge(u: f64) -> f64 {
    (1.0 - u).max(0.0)
}

/// Subgradient of [`hinge`]; the kink at `u = 1` resolves to the flat side.
pub fn hinge_subgradient(u: f64) -> f64 {
    if u < 1.0 {
        -1.0
    } else {
        0.0
    }
}

/// Square loss `ℓ(u, y) = (u − y)²`.
pub fn square_loss(u: f64, y: f64) -> f64 {
    (u - y) * (u - y)
}

/// `∂ℓ/∂u` of [`square_loss`].
pub fn square_loss_derivative(u: f64, y: f64) -> f64 {
    2.0 * (u - y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hinge_values() {
        assert_eq!(hinge(1.0), 0.0);
        assert_eq!(hinge(0.0), 1.0);
        assert_eq!(hinge(-1.0), 2.0);
        assert_eq!(hinge(3.0), 0.0);
    }

    #[test]
    fn hinge_subgradient_values() {
        assert_eq!(hinge_subgradient(0.0), -1.0);
        assert_eq!(hinge_subgradient(2.0), 0.0);
        assert_eq!(hinge_subgradient(1.0), 0.0);
    }

    #[test]
    fn hinge_is_one_lipschitz_and_convex() {
        let grid: Vec<f64> = (-40..=40).map(|i| i as f64 * 0.1).collect();
        for &a in &grid {
            for &b in &grid {
                assert!((hinge(a) - hinge(b)).abs() <= (a - b).abs() + 1e-15);
                let mid = hinge(0.5 * (a + b));
                assert!(mid <= 0.5 * (hinge(a) + hinge(b)) + 1e-15);
            }
        }
    }

    #[test]
    fn square_loss_values() {
        assert_eq!(square_loss(0.5, -1.0), 2.25);
        assert_eq!(square_loss_derivative(0.5, -1.0), 3.0);
    }
}
