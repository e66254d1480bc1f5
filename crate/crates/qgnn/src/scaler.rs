use serde::{Deserialize, Serialize};

use crate::error::{QgnnError, Result};

/// Fraction of the raw data span added on each side when fitting.
const FIT_MARGIN: f64 = 0.05;

/// Affine map between physical feature values and the `[0, 1]` encoding
/// interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scaler {
    f_min: f64,
    f_max: f64,
}

impl Scaler {
    pub fn new(f_min: f64, f_max: f64) -> Result<Self> {
        if !(f_max > f_min) || !f_min.is_finite() || !f_max.is_finite() {
            return Err(QgnnError::DegenerateScaler(f_min));
        }
        Ok(Scaler { f_min, f_max })
    }

    pub fn f_min(&self) -> f64 {
        self.f_min
    }

    pub fn f_max(&self) -> f64 {
        self.f_max
    }

    pub fn range(&self) -> f64 {
        self.f_max - self.f_min
    }

    /// Maps `f_min` to 0 and `f_max` to 1; values outside the fit range
    /// leave `[0, 1]` without clamping.
    pub fn scale(&self, f: f64) -> f64 {
        (f - self.f_min) / self.range()
    }

    pub fn invert(&self, x: f64) -> f64 {
        self.f_min + x * self.range()
    }

    /// Symmetric scaling for value differences, clamped to `[-1, 1]`: a
    /// difference of one full range saturates the encoding.
    pub fn scale_sym(&self, delta: f64) -> f64 {
        (delta / self.range()).clamp(-1.0, 1.0)
    }
}

/// Fits min/max over all values, widened by a 5% margin of the raw span on
/// each side so training never sees the exact encoding endpoints.
pub fn fit_scaler<I: IntoIterator<Item = f64>>(values: I) -> Result<Scaler> {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut seen = false;
    for v in values {
        if !v.is_finite() {
            return Err(QgnnError::NonFiniteInput(v));
        }
        min = min.min(v);
        max = max.max(v);
        seen = true;
    }
    if !seen {
        return Err(QgnnError::EmptyDataset);
    }
    if max == min {
        return Err(QgnnError::DegenerateScaler(min));
    }
    let margin = FIT_MARGIN * (max - min);
    Scaler::new(min - margin, max + margin)
}
