//! Closed-form moments of the residual-risk product, and a brute-force
//! midpoint-rule integrator used to cross-check them.
//!
//! With independent factors the expectation of `l * t * v * i` is the
//! product of the factor means, and the variance is
//! `l^2 * (prod E[X^2] - prod E[X]^2)`. The simulation is tested against
//! these values; the grid integrator is tested against the closed forms.

use serde::{Deserialize, Serialize};

use crate::model::{BoundedRange, Dimension, Scenario};
use crate::sampling::Distribution;
use crate::sim::Aggregation;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairMoments {
    pub mean: f64,
    pub variance: f64,
}

/// The three sampled factors of one threat/vulnerability/dimension pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairRanges {
    pub threat: BoundedRange,
    pub vulnerability: BoundedRange,
    pub impact: BoundedRange,
}

impl PairRanges {
    fn factors(&self) -> [&BoundedRange; 3] {
        [&self.threat, &self.vulnerability, &self.impact]
    }
}

pub fn factor_mean(range: &BoundedRange, distribution: Distribution) -> f64 {
    match distribution {
        Distribution::Uniform => range.midpoint(),
        Distribution::TriangularLowMode => (2.0 * range.lo + range.hi) / 3.0,
    }
}

pub fn factor_variance(range: &BoundedRange, distribution: Distribution) -> f64 {
    let w = range.width();
    match distribution {
        Distribution::Uniform => w * w / 12.0,
        // mode at an endpoint
        Distribution::TriangularLowMode => w * w / 18.0,
    }
}

/// `E[X^2]`, written as variance plus squared mean so that degenerate
/// ranges give exactly `mean^2`. For the uniform case this equals
/// `(lo^2 + lo*hi + hi^2) / 3`.
pub fn factor_second_moment(range: &BoundedRange, distribution: Distribution) -> f64 {
    let mean = factor_mean(range, distribution);
    factor_variance(range, distribution) + mean * mean
}

pub fn expected_pair_risk(importance: f64, ranges: &PairRanges, distribution: Distribution) -> f64 {
    importance
        * ranges
            .factors()
            .iter()
            .map(|r| factor_mean(r, distribution))
            .product::<f64>()
}

/// `prod (var_k + m_k^2) - prod m_k^2`, expanded over the non-empty subsets
/// of factors whose variance is taken. The expansion has no cancellation and
/// is exactly zero when every factor is constant.
pub fn pair_risk_variance(importance: f64, ranges: &PairRanges, distribution: Distribution) -> f64 {
    let factors = ranges.factors();
    let means = factors.map(|r| factor_mean(r, distribution));
    let vars = factors.map(|r| factor_variance(r, distribution));
    let total: f64 = (1u8..8)
        .map(|mask| {
            (0..3)
                .map(|k| {
                    if mask & (1 << k) != 0 {
                        vars[k]
                    } else {
                        means[k] * means[k]
                    }
                })
                .product::<f64>()
        })
        .sum();
    importance * importance * total
}

/// Midpoint nodes and density weights along one axis. A degenerate range
/// collapses to a single node of weight one.
fn axis(range: &BoundedRange, distribution: Distribution, grid_n: usize) -> Vec<(f64, f64)> {
    if range.is_degenerate() {
        return vec![(range.lo, 1.0)];
    }
    let w = range.width();
    let h = w / grid_n as f64;
    (0..grid_n)
        .map(|j| {
            let x = range.lo + (j as f64 + 0.5) * h;
            let weight = match distribution {
                Distribution::Uniform => 1.0 / grid_n as f64,
                Distribution::TriangularLowMode => 2.0 * (range.hi - x) / (w * w) * h,
            };
            (x, weight)
        })
        .collect()
}

/// Mean and variance of the residual risk by direct triple summation over a
/// `grid_n`-point midpoint grid on each factor.
///
/// Panics if `grid_n < 2`.
pub fn grid_pair_risk(importance: f64, ranges: &PairRanges, distribution: Distribution, grid_n: usize) -> PairMoments {
    assert!(grid_n >= 2, "grid_n must be at least 2");
    let ts = axis(&ranges.threat, distribution, grid_n);
    let vs = axis(&ranges.vulnerability, distribution, grid_n);
    let is = axis(&ranges.impact, distribution, grid_n);

    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for &(t, wt) in &ts {
        for &(v, wv) in &vs {
            let wtv = wt * wv;
            let ltv = importance * t * v;
            for &(i, wi) in &is {
                let f = ltv * i;
                let w = wtv * wi;
                m1 += w * f;
                m2 += w * f * f;
            }
        }
    }
    PairMoments {
        mean: m1,
        variance: (m2 - m1 * m1).max(0.0),
    }
}

pub fn pair_ranges(s: &Scenario, threat: usize, vulnerability: usize, dimension: Dimension) -> PairRanges {
    let t = &s.threats[threat];
    let v = &t.vulnerabilities[vulnerability];
    PairRanges {
        threat: t.probability,
        vulnerability: v.probability,
        impact: *v.impact(dimension),
    }
}

/// Exact moments of every pair, grouped by threat in register order.
pub fn scenario_pair_moments(s: &Scenario, dimension: Dimension, distribution: Distribution) -> Vec<Vec<PairMoments>> {
    s.threats
        .iter()
        .enumerate()
        .map(|(ti, t)| {
            (0..t.vulnerabilities.len())
                .map(|vi| {
                    let ranges = pair_ranges(s, ti, vi, dimension);
                    PairMoments {
                        mean: expected_pair_risk(t.importance, &ranges, distribution),
                        variance: pair_risk_variance(t.importance, &ranges, distribution),
                    }
                })
                .collect()
        })
        .collect()
}

/// Expected risk of each threat: the mean of its pairs' expectations.
pub fn expected_threat_risks(s: &Scenario, dimension: Dimension, distribution: Distribution) -> Vec<f64> {
    scenario_pair_moments(s, dimension, distribution)
        .iter()
        .map(|pairs| pairs.iter().map(|m| m.mean).sum::<f64>() / pairs.len() as f64)
        .collect()
}

/// Expectation of the per-iteration dimension aggregate.
pub fn expected_scenario_risk(
    s: &Scenario,
    dimension: Dimension,
    aggregation: Aggregation,
    distribution: Distribution,
) -> f64 {
    let moments = scenario_pair_moments(s, dimension, distribution);
    match aggregation {
        Aggregation::ThreatMeanOfMeans => {
            let per_threat = expected_threat_risks(s, dimension, distribution);
            per_threat.iter().sum::<f64>() / per_threat.len() as f64
        }
        Aggregation::PairMean => {
            let n: usize = moments.iter().map(Vec::len).sum();
            moments.iter().flatten().map(|m| m.mean).sum::<f64>() / n as f64
        }
        Aggregation::PairSum => moments.iter().flatten().map(|m| m.mean).sum(),
    }
}

/// Variance of the per-iteration dimension aggregate; pairs are drawn
/// independently so the weighted pair variances add.
pub fn scenario_risk_variance(
    s: &Scenario,
    dimension: Dimension,
    aggregation: Aggregation,
    distribution: Distribution,
) -> f64 {
    let moments = scenario_pair_moments(s, dimension, distribution);
    let n_threats = moments.len() as f64;
    let n_pairs: usize = moments.iter().map(Vec::len).sum();
    moments
        .iter()
        .flat_map(|pairs| {
            let weight = match aggregation {
                Aggregation::ThreatMeanOfMeans => 1.0 / (n_threats * pairs.len() as f64),
                Aggregation::PairMean => 1.0 / n_pairs as f64,
                Aggregation::PairSum => 1.0,
            };
            pairs.iter().map(move |m| weight * weight * m.variance)
        })
        .sum()
}
