//! Summary statistics and equal-width histograms over sample sets.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("cannot summarise an empty sample set")]
    Empty,
    #[error("histogram needs at least one bin")]
    NoBins,
    #[error("sample {0} is not finite")]
    NonFinite(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl Summary {
    pub fn of(samples: &[f64]) -> Result<Self, StatsError> {
        if samples.is_empty() {
            return Err(StatsError::Empty);
        }
        let n = samples.len() as f64;
        let mut sum = 0.0;
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for &x in samples {
            if !x.is_finite() {
                return Err(StatsError::NonFinite(x));
            }
            sum += x;
            min = min.min(x);
            max = max.max(x);
        }
        // Clamp guards the last-ulp rounding of sum / n on constant input.
        let mean = (sum / n).clamp(min, max);
        let ss: f64 = samples.iter().map(|x| (x - mean) * (x - mean)).sum();
        Ok(Summary {
            mean,
            std: (ss / n).sqrt(),
            min,
            max,
        })
    }
}

/// Equal-width bins over `[min, max]` of the samples. `edges` has one more
/// entry than `counts`; the last bin is closed on the right.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn from_samples(samples: &[f64], bins: usize) -> Result<Self, StatsError> {
        if bins == 0 {
            return Err(StatsError::NoBins);
        }
        let Summary { min, max, .. } = Summary::of(samples)?;
        let width = (max - min) / bins as f64;
        let edges: Vec<f64> = (0..=bins)
            .map(|k| if k == bins { max } else { min + width * k as f64 })
            .collect();

        let mut counts = vec![0u64; bins];
        for &x in samples {
            let idx = if width > 0.0 {
                (((x - min) / width) as usize).min(bins - 1)
            } else {
                0
            };
            counts[idx] += 1;
        }
        Ok(Histogram { edges, counts })
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `(lo, hi, count)` triples in bin order.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, u64)> + '_ {
        self.edges.windows(2).zip(&self.counts).map(|(e, &c)| (e[0], e[1], c))
    }

    /// CSV with header `bin_lo,bin_hi,count`, one row per bin.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_lo,bin_hi,count\n");
        for (lo, hi, count) in self.rows() {
            out.push_str(&format!("{lo},{hi},{count}\n"));
        }
        out
    }
}

/// Welford accumulator; merges are order-sensitive, so callers merge in a
/// fixed order to keep results reproducible.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct Running {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Running {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Running) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = self.count + other.count;
        let delta = other.mean - self.mean;
        let w = other.count as f64 / n as f64;
        self.mean += delta * w;
        self.m2 += other.m2 + delta * delta * self.count as f64 * w;
        self.count = n;
    }

    pub fn std(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.m2.max(0.0) / self.count as f64).sqrt()
        }
    }
}
