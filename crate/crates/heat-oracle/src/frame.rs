use crate::error::{HeatError, Result};

/// Per-vertex temperature snapshot at one time step.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeFrame {
    timestamp: usize,
    values: Vec<f64>,
}

impl NodeFrame {
    /// Rejects non-finite values; everything downstream may assume finite
    /// temperatures.
    pub fn new(timestamp: usize, values: Vec<f64>) -> Result<Self> {
        for (vertex, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(HeatError::NonFiniteValue { vertex });
            }
        }
        Ok(NodeFrame { timestamp, values })
    }

    pub fn uniform(timestamp: usize, n_vertices: usize, value: f64) -> Result<Self> {
        Self::new(timestamp, vec![value; n_vertices])
    }

    pub fn timestamp(&self) -> usize {
        self.timestamp
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sum of all vertex temperatures; the conserved quantity of insulated
    /// source-free diffusion.
    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}
