//! Linear scaling of a value from one closed interval onto another.
//!
//! The input interval may be "reversed" (`input_min > input_max`), which is how
//! rank-based scores work: the worst rank is the input minimum and rank 1 the
//! input maximum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleSpec {
    pub input_min: f64,
    pub input_max: f64,
    pub scaled_min: f64,
    pub scaled_max: f64,
}

impl ScaleSpec {
    pub fn new(input_min: f64, input_max: f64, scaled_min: f64, scaled_max: f64) -> Result<Self> {
        let spec = Self {
            input_min,
            input_max,
            scaled_min,
            scaled_max,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.input_min == self.input_max {
            return Err(Error::DegenerateScale(self.input_min));
        }
        if self.scaled_min.partial_cmp(&self.scaled_max) != Some(std::cmp::Ordering::Less) {
            return Err(Error::InvertedScale {
                min: self.scaled_min,
                max: self.scaled_max,
            });
        }
        Ok(())
    }

    /// Slope of the mapping.
    pub fn rate(&self) -> f64 {
        (self.scaled_max - self.scaled_min) / (self.input_max - self.input_min)
    }

    /// Intercept of the mapping, so that `output = input * rate + offset`.
    pub fn offset(&self) -> f64 {
        self.scaled_min - self.input_min * self.rate()
    }

    /// Maps `input` onto the scaled interval.
    ///
    /// Evaluated as `scaled_min + t * (scaled_max - scaled_min)` with
    /// `t = (input - input_min) / (input_max - input_min)`. This is the same
    /// line as `input * rate + offset`, but `t` is exactly 0 and 1 at the two
    /// input endpoints, so they land on `scaled_min` and `scaled_max` without
    /// rounding drift.
    pub fn apply(&self, input: f64) -> f64 {
        let t = (input - self.input_min) / (self.input_max - self.input_min);
        if t == 1.0 {
            return self.scaled_max;
        }
        self.scaled_min + t * (self.scaled_max - self.scaled_min)
    }
}

/// Validates `spec` and maps `input` through it.
pub fn linear_scale(input: f64, spec: &ScaleSpec) -> Result<f64> {
    spec.validate()?;
    Ok(spec.apply(input))
}
