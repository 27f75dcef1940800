//! Per-draw sampling primitives.

use rand_chacha::rand_core::RngCore;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::BoundedRange;

/// Density used when drawing a parameter from its range.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distribution {
    /// Flat density on `[lo, hi]`.
    #[default]
    Uniform,
    /// Triangular density with its mode at `lo`, falling linearly to zero at `hi`.
    TriangularLowMode,
}

impl Distribution {
    pub fn as_str(self) -> &'static str {
        match self {
            Distribution::Uniform => "uniform",
            Distribution::TriangularLowMode => "triangular_low_mode",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{name} = {value} lies outside [0, 1]")]
pub struct ArgumentError {
    pub name: &'static str,
    pub value: f64,
}

fn unit(name: &'static str, value: f64) -> Result<f64, ArgumentError> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(ArgumentError { name, value })
    }
}

/// Residual risk of one threat/vulnerability draw: importance times threat
/// probability times vulnerability probability times impact.
pub fn residual_risk(importance: f64, threat: f64, vulnerability: f64, impact: f64) -> Result<f64, ArgumentError> {
    Ok(unit("importance", importance)?
        * unit("threat", threat)?
        * unit("vulnerability", vulnerability)?
        * unit("impact", impact)?)
}

/// Uniform on `[0, 1)` with 53 bits of resolution; consumes one `u64`.
#[inline]
pub fn unit_uniform<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// One value from `range` under `distribution`. Always consumes exactly one
/// `u64` from `rng`, which keeps stream offsets computable.
#[inline]
pub fn draw<R: RngCore + ?Sized>(range: &BoundedRange, distribution: Distribution, rng: &mut R) -> f64 {
    let u = unit_uniform(rng);
    let width = range.hi - range.lo;
    match distribution {
        Distribution::Uniform => (range.lo + width * u).min(range.hi),
        // Inverse CDF of F(x) = 1 - ((hi - x) / width)^2.
        Distribution::TriangularLowMode => (range.hi - width * (1.0 - u).sqrt()).max(range.lo),
    }
}
