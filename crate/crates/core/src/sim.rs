//! Monte Carlo evaluation of a scenario.
//!
//! Every iteration draws threat probability, vulnerability probability and
//! impact for every pair, independently per dimension, then collapses the
//! pair values into one aggregate per dimension. Total resilience for the
//! iteration is one minus the mean of the two aggregates.
//!
//! # Determinism
//!
//! Each (threat, vulnerability, dimension) triple owns a ChaCha8 stream
//! selected by `set_stream`, keyed by the master seed. Iteration `k` of a
//! pair reads a fixed window of that stream (three `u64` draws at word
//! offset `6 k`), so any iteration can be computed by any worker.
//! Iterations are processed in fixed-size blocks whose partial results are
//! merged in block order, which makes reports bit-identical regardless of
//! the number of worker threads.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{validate_scenario, BoundedRange, Dimension, Scenario, ValidationIssue};
use crate::sampling::{draw, Distribution};
use crate::stats::{Histogram, Running, StatsError, Summary};

pub const DEFAULT_ITERATIONS: u64 = 1_000_000;
pub const DEFAULT_BINS: usize = 50;
pub const DEFAULT_SEED: u64 = 42;

const BLOCK: u64 = 4096;
/// u32 words consumed per pair per iteration (three u64 draws).
const WORDS_PER_ITERATION: u128 = 6;

/// How pair values are collapsed into one value per iteration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    /// Mean over each threat's pairs, then mean over threats.
    #[default]
    ThreatMeanOfMeans,
    /// Mean over all pairs.
    PairMean,
    /// Sum over all pairs; not bounded by one.
    PairSum,
}

impl Aggregation {
    pub fn as_str(self) -> &'static str {
        match self {
            Aggregation::ThreatMeanOfMeans => "threat_mean_of_means",
            Aggregation::PairMean => "pair_mean",
            Aggregation::PairSum => "pair_sum",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub iterations: u64,
    pub seed: u64,
    pub distribution: Distribution,
    pub aggregation: Aggregation,
    pub histogram_bins: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            iterations: DEFAULT_ITERATIONS,
            seed: DEFAULT_SEED,
            distribution: Distribution::default(),
            aggregation: Aggregation::default(),
            histogram_bins: DEFAULT_BINS,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.iterations == 0 {
            return Err(SimError::InvalidConfig("iterations must be at least 1".into()));
        }
        if self.histogram_bins == 0 {
            return Err(SimError::InvalidConfig("histogram_bins must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("scenario has no threats")]
    NoThreats,
    #[error("scenario is invalid: {}", summarize(.0))]
    InvalidScenario(Vec<ValidationIssue>),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("{name} = {value} lies outside [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("could not start worker pool: {0}")]
    WorkerPool(String),
}

fn summarize(issues: &[ValidationIssue]) -> String {
    issues.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRisk {
    pub threat: String,
    pub vulnerability: String,
    pub dimension: Dimension,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThreatRisk {
    pub threat: String,
    /// Mean of the threat's pair means.
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionResult {
    pub dimension: Dimension,
    pub pairs: Vec<PairRisk>,
    pub threats: Vec<ThreatRisk>,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub histogram: Histogram,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResilienceResult {
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub histogram: Histogram,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: String,
    pub config: SimConfig,
    pub operational: DimensionResult,
    pub infrastructural: DimensionResult,
    pub resilience: ResilienceResult,
}

impl RunReport {
    pub fn dimension(&self, dimension: Dimension) -> &DimensionResult {
        match dimension {
            Dimension::Operational => &self.operational,
            Dimension::Infrastructural => &self.infrastructural,
        }
    }
}

/// One minus the simple average of the operational and infrastructural risks.
pub fn total_resilience(op_risk: f64, infra_risk: f64) -> Result<f64, SimError> {
    for (name, value) in [("op_risk", op_risk), ("infra_risk", infra_risk)] {
        if !(0.0..=1.0).contains(&value) {
            return Err(SimError::OutOfRange { name, value });
        }
    }
    Ok(1.0 - (op_risk + infra_risk) / 2.0)
}

struct PairPlan {
    threat: usize,
    vulnerability: usize,
    importance: f64,
    probability: BoundedRange,
    vuln_probability: BoundedRange,
    impact: [BoundedRange; 2],
}

fn dim_index(dimension: Dimension) -> usize {
    match dimension {
        Dimension::Operational => 0,
        Dimension::Infrastructural => 1,
    }
}

fn stream_label(threat: usize, vulnerability: usize, dim: usize) -> u64 {
    ((threat as u64) << 32) | ((vulnerability as u64) << 1) | dim as u64
}

struct BlockOutput {
    aggregates: [Vec<f64>; 2],
    pair_stats: [Vec<Running>; 2],
}

struct Plan<'a> {
    scenario: &'a Scenario,
    cfg: &'a SimConfig,
    pairs: Vec<PairPlan>,
    pairs_per_threat: Vec<usize>,
}

impl Plan<'_> {
    fn run_block(&self, block: u64) -> BlockOutput {
        let start = block * BLOCK;
        let len = (self.cfg.iterations - start).min(BLOCK) as usize;
        let n_threats = self.scenario.threats.len();
        let n_pairs = self.pairs.len();

        let mut aggregates: [Vec<f64>; 2] = Default::default();
        let mut pair_stats: [Vec<Running>; 2] = Default::default();
        let mut threat_sums = vec![0.0f64; n_threats * len];

        for dim in 0..2 {
            threat_sums.iter_mut().for_each(|x| *x = 0.0);
            let mut stats = Vec::with_capacity(n_pairs);
            for pair in &self.pairs {
                let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
                rng.set_stream(stream_label(pair.threat, pair.vulnerability, dim));
                rng.set_word_pos(start as u128 * WORDS_PER_ITERATION);

                let mut running = Running::default();
                let row = &mut threat_sums[pair.threat * len..(pair.threat + 1) * len];
                for slot in row.iter_mut() {
                    let t = draw(&pair.probability, self.cfg.distribution, &mut rng);
                    let v = draw(&pair.vuln_probability, self.cfg.distribution, &mut rng);
                    let i = draw(&pair.impact[dim], self.cfg.distribution, &mut rng);
                    let x = pair.importance * t * v * i;
                    *slot += x;
                    running.push(x);
                }
                stats.push(running);
            }

            let values = (0..len).map(|j| self.aggregate(|t| threat_sums[t * len + j])).collect();
            aggregates[dim] = values;
            pair_stats[dim] = stats;
        }
        BlockOutput { aggregates, pair_stats }
    }

    /// Collapses one iteration; `threat_sum(t)` is the sum of threat `t`'s pair values.
    fn aggregate(&self, threat_sum: impl Fn(usize) -> f64) -> f64 {
        let n_threats = self.pairs_per_threat.len();
        match self.cfg.aggregation {
            Aggregation::ThreatMeanOfMeans => {
                let total: f64 = (0..n_threats)
                    .map(|t| threat_sum(t) / self.pairs_per_threat[t] as f64)
                    .sum();
                total / n_threats as f64
            }
            Aggregation::PairMean => (0..n_threats).map(&threat_sum).sum::<f64>() / self.pairs.len() as f64,
            Aggregation::PairSum => (0..n_threats).map(&threat_sum).sum(),
        }
    }

    fn dimension_result(
        &self,
        dimension: Dimension,
        samples: &[f64],
        stats: &[Running],
    ) -> Result<DimensionResult, SimError> {
        let pairs: Vec<PairRisk> = self
            .pairs
            .iter()
            .zip(stats)
            .map(|(p, s)| {
                let threat = &self.scenario.threats[p.threat];
                PairRisk {
                    threat: threat.name.clone(),
                    vulnerability: threat.vulnerabilities[p.vulnerability].name.clone(),
                    dimension,
                    mean: s.mean,
                    std: s.std(),
                }
            })
            .collect();

        let mut threats = Vec::with_capacity(self.scenario.threats.len());
        let mut offset = 0;
        for (threat, &n) in self.scenario.threats.iter().zip(&self.pairs_per_threat) {
            let mean = pairs[offset..offset + n].iter().map(|p| p.mean).sum::<f64>() / n as f64;
            threats.push(ThreatRisk {
                threat: threat.name.clone(),
                mean,
            });
            offset += n;
        }

        let summary = Summary::of(samples)?;
        Ok(DimensionResult {
            dimension,
            pairs,
            threats,
            mean: summary.mean,
            std: summary.std,
            min: summary.min,
            max: summary.max,
            histogram: Histogram::from_samples(samples, self.cfg.histogram_bins)?,
        })
    }
}

fn check_inputs(s: &Scenario, cfg: &SimConfig) -> Result<(), SimError> {
    if s.threats.is_empty() {
        return Err(SimError::NoThreats);
    }
    let issues = validate_scenario(s);
    if !issues.is_empty() {
        return Err(SimError::InvalidScenario(issues));
    }
    cfg.validate()
}

/// Simulates `s` on the current rayon pool.
pub fn run_scenario(s: &Scenario, cfg: &SimConfig) -> Result<RunReport, SimError> {
    check_inputs(s, cfg)?;

    let pairs: Vec<PairPlan> = s
        .threats
        .iter()
        .enumerate()
        .flat_map(|(ti, t)| {
            t.vulnerabilities.iter().enumerate().map(move |(vi, v)| PairPlan {
                threat: ti,
                vulnerability: vi,
                importance: t.importance,
                probability: t.probability,
                vuln_probability: v.probability,
                impact: [v.operational_impact, v.infrastructural_impact],
            })
        })
        .collect();
    let plan = Plan {
        scenario: s,
        cfg,
        pairs_per_threat: s.threats.iter().map(|t| t.vulnerabilities.len()).collect(),
        pairs,
    };

    let blocks = cfg.iterations.div_ceil(BLOCK);
    let outputs: Vec<BlockOutput> = (0..blocks).into_par_iter().map(|b| plan.run_block(b)).collect();

    let n = cfg.iterations as usize;
    let mut samples: [Vec<f64>; 2] = [Vec::with_capacity(n), Vec::with_capacity(n)];
    let mut stats = [
        vec![Running::default(); plan.pairs.len()],
        vec![Running::default(); plan.pairs.len()],
    ];
    for out in &outputs {
        for dim in 0..2 {
            samples[dim].extend_from_slice(&out.aggregates[dim]);
            for (acc, part) in stats[dim].iter_mut().zip(&out.pair_stats[dim]) {
                acc.merge(part);
            }
        }
    }
    drop(outputs);

    let resilience: Vec<f64> = samples[0]
        .iter()
        .zip(&samples[1])
        .map(|(op, infra)| 1.0 - (op + infra) / 2.0)
        .collect();
    let summary = Summary::of(&resilience)?;

    let op = dim_index(Dimension::Operational);
    let infra = dim_index(Dimension::Infrastructural);
    Ok(RunReport {
        scenario: s.name.clone(),
        config: *cfg,
        operational: plan.dimension_result(Dimension::Operational, &samples[op], &stats[op])?,
        infrastructural: plan.dimension_result(Dimension::Infrastructural, &samples[infra], &stats[infra])?,
        resilience: ResilienceResult {
            mean: summary.mean,
            std: summary.std,
            min: summary.min,
            max: summary.max,
            histogram: Histogram::from_samples(&resilience, cfg.histogram_bins)?,
        },
    })
}

/// Simulates `s` on a dedicated pool of `workers` threads. The report is
/// identical to [`run_scenario`]'s for any worker count.
pub fn run_scenario_with_workers(s: &Scenario, cfg: &SimConfig, workers: usize) -> Result<RunReport, SimError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| SimError::WorkerPool(e.to_string()))?;
    pool.install(|| run_scenario(s, cfg))
}
