use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use microgrid_resilience::sim::{DEFAULT_BINS, DEFAULT_ITERATIONS, DEFAULT_SEED};
use microgrid_resilience::{Aggregation, Dimension, Distribution, SimConfig};

/// Monte Carlo microgrid resilience scoring.
///
/// SCENARIO and PATCH arguments take a JSON file path or a built-in name
/// prefixed with `@` (`@new-england`, `@underground-distribution`,
/// `@harden-generation`).
#[derive(Debug, Parser)]
#[command(name = "mgres", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a scenario document and list every issue with its path
    Validate {
        scenario: String,
        /// Ignore unknown keys instead of rejecting them
        #[arg(long)]
        lenient: bool,
    },
    /// Simulate a scenario and report risk and resilience
    Run(RunArgs),
    /// Simulate a scenario under intervention patches and rank them
    Compare(CompareArgs),
    /// Serve the HTTP/JSON API
    Serve(ServeArgs),
    /// Print a built-in scenario or patch document
    Builtin { name: BuiltinName },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BuiltinName {
    NewEngland,
    UndergroundDistribution,
    HardenGeneration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AggregationArg {
    #[value(alias = "threat_mean_of_means")]
    ThreatMeanOfMeans,
    #[value(alias = "pair_mean")]
    PairMean,
    #[value(alias = "pair_sum")]
    PairSum,
}

impl From<AggregationArg> for Aggregation {
    fn from(a: AggregationArg) -> Self {
        match a {
            AggregationArg::ThreatMeanOfMeans => Aggregation::ThreatMeanOfMeans,
            AggregationArg::PairMean => Aggregation::PairMean,
            AggregationArg::PairSum => Aggregation::PairSum,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistributionArg {
    Uniform,
    #[value(alias = "triangular_low_mode")]
    TriangularLowMode,
}

impl From<DistributionArg> for Distribution {
    fn from(d: DistributionArg) -> Self {
        match d {
            DistributionArg::Uniform => Distribution::Uniform,
            DistributionArg::TriangularLowMode => Distribution::TriangularLowMode,
        }
    }
}

/// Which sample stream the histogram export covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum HistogramOf {
    Operational,
    Infrastructural,
    #[default]
    Resilience,
}

impl HistogramOf {
    pub fn dimension(self) -> Option<Dimension> {
        match self {
            HistogramOf::Operational => Some(Dimension::Operational),
            HistogramOf::Infrastructural => Some(Dimension::Infrastructural),
            HistogramOf::Resilience => None,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    #[arg(long, default_value_t = DEFAULT_ITERATIONS)]
    pub iterations: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "threat-mean-of-means")]
    pub aggregation: AggregationArg,
    #[arg(long, value_enum, default_value = "uniform")]
    pub distribution: DistributionArg,
    /// Histogram bins per reported distribution
    #[arg(long, default_value_t = DEFAULT_BINS)]
    pub bins: usize,
    /// Output format
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Ignore unknown keys in input documents
    #[arg(long)]
    pub lenient: bool,
}

impl SimArgs {
    pub fn config(&self) -> SimConfig {
        SimConfig {
            iterations: self.iterations,
            seed: self.seed,
            distribution: self.distribution.into(),
            aggregation: self.aggregation.into(),
            histogram_bins: self.bins,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    pub scenario: String,
    #[command(flatten)]
    pub sim: SimArgs,
    /// Worker threads; the report does not depend on this
    #[arg(long)]
    pub workers: Option<usize>,
    /// Write a histogram as CSV (`bin_lo,bin_hi,count`)
    #[arg(long, value_name = "PATH")]
    pub histogram_csv: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "resilience")]
    pub histogram_of: HistogramOf,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    pub scenario: String,
    /// Patch document or built-in name; repeatable
    #[arg(short, long = "patch", value_name = "PATCH")]
    pub patches: Vec<String>,
    #[command(flatten)]
    pub sim: SimArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ServeArgs {
    /// Initial scenario
    #[arg(default_value = "@new-england")]
    pub scenario: String,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    /// Ignore unknown keys in documents
    #[arg(long)]
    pub lenient: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn defaults_match_engine() {
        let cli = Cli::try_parse_from(["mgres", "run", "@new-england"]).unwrap();
        let Command::Run(run) = cli.command else {
            panic!("expected run")
        };
        assert_eq!(run.sim.config(), SimConfig::default());
        assert_eq!(run.sim.format, Format::Text);
        assert_eq!(run.histogram_of, HistogramOf::Resilience);
    }

    #[test]
    fn snake_case_aliases_accepted() {
        let cli = Cli::try_parse_from([
            "mgres",
            "compare",
            "s.json",
            "-p",
            "@harden-generation",
            "--aggregation",
            "pair_mean",
            "--distribution",
            "triangular_low_mode",
        ])
        .unwrap();
        let Command::Compare(c) = cli.command else {
            panic!("expected compare")
        };
        assert_eq!(c.patches, ["@harden-generation"]);
        assert_eq!(c.sim.config().aggregation, Aggregation::PairMean);
        assert_eq!(c.sim.config().distribution, Distribution::TriangularLowMode);
    }

    #[test]
    fn scenario_is_required_for_run() {
        assert!(Cli::try_parse_from(["mgres", "run"]).is_err());
    }
}
