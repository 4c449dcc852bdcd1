use ndarray::{Array2, ArrayView1};

use crate::error::{Error, Result};

/// A supervised sample of `(input vector, target)` pairs, inputs stored row-wise.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    inputs: Array2<f64>,
    targets: Vec<f64>,
}

impl Sample {
    pub fn new(inputs: Array2<f64>, targets: Vec<f64>) -> Result<Self> {
        if inputs.nrows() != targets.len() {
            return Err(Error::Dimension {
                expected: inputs.nrows(),
                got: targets.len(),
            });
        }
        Ok(Sample { inputs, targets })
    }

    pub fn from_rows(rows: &[Vec<f64>], targets: Vec<f64>) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        let mut flat = Vec::with_capacity(rows.len() * dim);
        for r in rows {
            if r.len() != dim {
                return Err(Error::Dimension { expected: dim, got: r.len() });
            }
            flat.extend_from_slice(r);
        }
        let inputs = Array2::from_shape_vec((rows.len(), dim), flat)
            .expect("shape checked above");
        Sample::new(inputs, targets)
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.inputs.ncols()
    }

    pub fn inputs(&self) -> &Array2<f64> {
        &self.inputs
    }

    pub fn input(&self, i: usize) -> ArrayView1<'_, f64> {
        self.inputs.row(i)
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    /// Rows `start..end` as a new sample.
    pub fn slice(&self, start: usize, end: usize) -> Sample {
        Sample {
            inputs: self.inputs.slice(ndarray::s![start..end, ..]).to_owned(),
            targets: self.targets[start..end].to_vec(),
        }
    }

    /// Rows picked by index, in the given order.
    pub fn select(&self, idx: &[usize]) -> Sample {
        Sample {
            inputs: self.inputs.select(ndarray::Axis(0), idx),
            targets: idx.iter().map(|&i| self.targets[i]).collect(),
        }
    }
}
