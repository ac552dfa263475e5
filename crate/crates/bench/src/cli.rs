//! Command-line front end. Exit codes: 0 ok, 1 usage, 2 parse, 3 numerical.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{parse_algorithms, resolve_seed, Formats, RunConfig};
use crate::error::{BenchError, BenchResult};
use crate::pipeline::{cmd_analyze, cmd_compare, cmd_detect};

#[derive(Debug, Parser)]
#[command(name = "commbench", version, about = "Compare community detection algorithms on an edge-list graph")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Degree distribution, CDF and degree centrality.
    Analyze(Common),
    /// Run one algorithm and write its membership, trace and scatter plot.
    Detect {
        #[command(flatten)]
        common: Common,
        /// louvain, label_propagation, infomap, leading_eigenvector, spectral or kmeans.
        #[arg(long)]
        algo: String,
    },
    /// Run several algorithms and write the metric table, radar charts and
    /// silhouette bar plot.
    Compare {
        #[command(flatten)]
        common: Common,
        /// Comma-separated algorithm names, or `all`.
        #[arg(long, default_value = "all")]
        algos: String,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// SNAP-style edge list.
    #[arg(long)]
    input: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Master seed; falls back to COMMBENCH_SEED, then 42.
    #[arg(long)]
    seed: Option<u64>,
    /// Cluster count for kmeans and spectral.
    #[arg(long)]
    k: Option<usize>,
    /// Dimension of the shared spectral embedding (capped at n - 1).
    #[arg(long, default_value_t = commbench_core::detect::DEFAULT_EMBED_DIM)]
    embed_dim: usize,
    /// Score silhouette on a seeded sample of this many nodes.
    #[arg(long)]
    silhouette_sample: Option<usize>,
    /// Comma-separated subset of csv, json, svg.
    #[arg(long, default_value = "csv,json,svg")]
    formats: String,
    /// Fill the seconds column with measured wall time.
    #[arg(long)]
    record_timings: bool,
}

impl Common {
    fn into_config(self, env_seed: Option<&str>) -> BenchResult<RunConfig> {
        let mut config = RunConfig::new(self.input, self.out);
        config.seed = resolve_seed(self.seed, env_seed)?;
        if let Some(k) = self.k {
            config.k_kmeans = k;
            config.k_spectral = k;
        }
        config.embed_dim = self.embed_dim;
        config.silhouette_sample = self.silhouette_sample;
        config.formats = Formats::parse(&self.formats)?;
        config.record_timings = self.record_timings;
        Ok(config)
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Diagnostics go to stderr, summaries to stdout.
pub fn run<I, S>(args: I, env_seed: Option<&str>) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    match execute(cli, env_seed) {
        Ok(summary) => {
            print!("{summary}");
            0
        }
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn execute(cli: Cli, env_seed: Option<&str>) -> Result<String, BenchError> {
    match cli.command {
        Command::Analyze(common) => Ok(cmd_analyze(&common.into_config(env_seed)?)?.render()),
        Command::Detect { common, algo } => {
            let mut config = common.into_config(env_seed)?;
            config.algorithms = parse_algorithms(&algo)?;
            if config.algorithms.len() != 1 {
                return Err(BenchError::Usage("--algo takes exactly one algorithm".into()));
            }
            Ok(cmd_detect(&config)?.render())
        }
        Command::Compare { common, algos } => {
            let mut config = common.into_config(env_seed)?;
            config.algorithms = parse_algorithms(&algos)?;
            Ok(cmd_compare(&config)?.render())
        }
    }
}
