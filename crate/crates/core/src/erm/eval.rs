use std::fmt;
use std::io::Write;

use super::hinge;
use crate::error::{Error, Result};
use crate::neuralnet::{forward_batch, Architecture, NetworkParams};
use crate::process_sim::sign;
use crate::sample::Sample;

/// Hinge and 0–1 risk of a predictor on a sample. `confusion[a][p]` counts
/// actual class `a` predicted as `p`, index 0 for −1 and 1 for +1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub hinge_risk: f64,
    pub zero_one_risk: f64,
    pub accuracy: f64,
    pub confusion: [[u64; 2]; 2],
}

impl EvalReport {
    pub fn len(&self) -> u64 {
        self.confusion.iter().flatten().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Fraction of actual +1 cases predicted +1.
    pub fn recall_plus(&self) -> f64 {
        let pos = self.confusion[1][0] + self.confusion[1][1];
        if pos == 0 {
            f64::NAN
        } else {
            self.confusion[1][1] as f64 / pos as f64
        }
    }

    pub const CSV_HEADER: &'static str =
        "hinge_risk,zero_one_risk,accuracy,n,actual_neg_pred_neg,actual_neg_pred_pos,actual_pos_pred_neg,actual_pos_pred_pos";

    pub fn csv_row(&self) -> String {
        let c = &self.confusion;
        format!(
            "{:?},{:?},{:?},{},{},{},{},{}",
            self.hinge_risk,
            self.zero_one_risk,
            self.accuracy,
            self.len(),
            c[0][0],
            c[0][1],
            c[1][0],
            c[1][1]
        )
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        writeln!(out, "{}", self.csv_row())?;
        Ok(())
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.confusion;
        writeln!(f, "n             {}", self.len())?;
        writeln!(f, "hinge risk    {:.6}", self.hinge_risk)?;
        writeln!(f, "0-1 risk      {:.6}", self.zero_one_risk)?;
        writeln!(f, "accuracy      {:.6}", self.accuracy)?;
        writeln!(f, "confusion     pred -1  pred +1")?;
        writeln!(f, "  actual -1   {:>7}  {:>7}", c[0][0], c[0][1])?;
        write!(f, "  actual +1   {:>7}  {:>7}", c[1][0], c[1][1])
    }
}

/// Scores `h(X_i)` against ±1 labels.
pub fn evaluate_scores(scores: &[f64], labels: &[f64]) -> Result<EvalReport> {
    if scores.len() != labels.len() {
        return Err(Error::Dimension { expected: labels.len(), got: scores.len() });
    }
    if labels.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut confusion = [[0u64; 2]; 2];
    let mut hinge_sum = 0.0;
    for (&h, &y) in scores.iter().zip(labels) {
        if y != 1.0 && y != -1.0 {
            return Err(Error::spec(format!("label {y} is not ±1")));
        }
        hinge_sum += hinge(y * h);
        let a = usize::from(y > 0.0);
        let p = usize::from(sign(h) > 0.0);
        confusion[a][p] += 1;
    }
    let n = labels.len() as f64;
    let correct = (confusion[0][0] + confusion[1][1]) as f64;
    let accuracy = correct / n;
    Ok(EvalReport { hinge_risk: hinge_sum / n, zero_one_risk: 1.0 - accuracy, accuracy, confusion })
}

/// `R̂_{n,φ}(h) = n⁻¹ Σ φ(Y_i h(X_i))`.
pub fn empirical_surrogate_risk(arch: &Architecture, params: &NetworkParams, sample: &Sample) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let out = forward_batch(arch, params, sample.inputs().view())?;
    let total: f64 = out.iter().zip(sample.targets()).map(|(h, y)| hinge(y * h)).sum();
    Ok(total / sample.len() as f64)
}

/// Full evaluation of `sign(h)` on a ±1-labelled sample.
pub fn empirical_01_risk(arch: &Architecture, params: &NetworkParams, sample: &Sample) -> Result<EvalReport> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let out = forward_batch(arch, params, sample.inputs().view())?;
    evaluate_scores(out.as_slice().expect("contiguous output"), sample.targets())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neuralnet::{unflatten_theta, Activation, OutputActivation};
    use crate::process_sim::{make_supervised, simulate_binary, BinaryDgpSpec};

    fn linear(w: f64, b: f64) -> (Architecture, NetworkParams) {
        let arch = Architecture::mlp(1, &[], Activation::Relu, OutputActivation::Identity).unwrap();
        let p = unflatten_theta(&arch, &[w, b]).unwrap();
        (arch, p)
    }

    #[test]
    fn zero_predictor_has_unit_risk() {
        let (arch, p) = linear(0.0, 0.0);
        let s = Sample::from_rows(&[vec![1.0], vec![-2.0], vec![0.3]], vec![1.0, -1.0, -1.0]).unwrap();
        assert_eq!(empirical_surrogate_risk(&arch, &p, &s).unwrap(), 1.0);
        let r = empirical_01_risk(&arch, &p, &s).unwrap();
        assert_eq!(r.confusion, [[0, 2], [0, 1]]);
    }

    #[test]
    fn perfect_sign_predictor() {
        let (arch, p) = linear(1.0, 0.0);
        let s = Sample::from_rows(&[vec![1.0], vec![-1.0], vec![1.0]], vec![1.0, -1.0, 1.0]).unwrap();
        assert_eq!(empirical_surrogate_risk(&arch, &p, &s).unwrap(), 0.0);
        let r = empirical_01_risk(&arch, &p, &s).unwrap();
        assert_eq!(r.accuracy, 1.0);
        assert_eq!(r.confusion[0][1] + r.confusion[1][0], 0);
    }

    #[test]
    fn single_point_half_margin() {
        let (arch, p) = linear(0.5, 0.0);
        let s = Sample::from_rows(&[vec![1.0]], vec![1.0]).unwrap();
        assert_eq!(empirical_surrogate_risk(&arch, &p, &s).unwrap(), 0.5);
    }

    #[test]
    fn empty_sample_errors() {
        let (arch, p) = linear(1.0, 0.0);
        let s = Sample::from_rows(&[], vec![]).unwrap();
        assert!(matches!(empirical_surrogate_risk(&arch, &p, &s), Err(Error::EmptySample)));
        assert!(matches!(empirical_01_risk(&arch, &p, &s), Err(Error::EmptySample)));
    }

    #[test]
    fn constant_minus_one_on_dgp1() {
        let traj = simulate_binary(&BinaryDgpSpec::dgp1(), 200_001, 11, 500).unwrap();
        let s = make_supervised(&traj, 1).unwrap();
        let (arch, p) = linear(0.0, -1.0);
        let r = empirical_01_risk(&arch, &p, &s).unwrap();
        // π(−1) = 0.8125; generous bound for dependence-inflated variance.
        assert!((r.accuracy - 0.8125).abs() < 0.006, "{}", r.accuracy);
        assert_eq!(r.len() as usize, s.len());
        assert!((r.accuracy + r.zero_one_risk - 1.0).abs() < 1e-15);
    }

    #[test]
    fn csv_and_text() {
        let r = evaluate_scores(&[0.5, -0.5, 0.0], &[1.0, 1.0, -1.0]).unwrap();
        assert_eq!(r.confusion, [[0, 1], [1, 1]]);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.ends_with(",3,0,1,1,1\n"));
        assert!(r.to_string().contains("actual +1"));
    }
}
