use std::path::PathBuf;

use commbench_core::detect::{Algorithm, DEFAULT_EMBED_DIM, DEFAULT_K};

use crate::error::{BenchError, BenchResult};

pub const DEFAULT_SEED: u64 = 42;
pub const SEED_ENV: &str = "COMMBENCH_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl Formats {
    pub const ALL: Formats = Formats { csv: true, json: true, svg: true };

    /// Comma-separated subset of `csv`, `json`, `svg`.
    pub fn parse(list: &str) -> BenchResult<Self> {
        let mut f = Formats { csv: false, json: false, svg: false };
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item {
                "csv" => f.csv = true,
                "json" => f.json = true,
                "svg" => f.svg = true,
                other => return Err(BenchError::Usage(format!("unknown format {other:?} (expected csv, json, svg)"))),
            }
        }
        if !(f.csv || f.json || f.svg) {
            return Err(BenchError::Usage("--formats selects no output format".into()));
        }
        Ok(f)
    }

    pub fn names(&self) -> Vec<&'static str> {
        [(self.csv, "csv"), (self.json, "json"), (self.svg, "svg")]
            .into_iter()
            .filter_map(|(on, name)| on.then_some(name))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: PathBuf,
    pub out: PathBuf,
    pub algorithms: Vec<Algorithm>,
    pub seed: u64,
    pub k_kmeans: usize,
    pub k_spectral: usize,
    pub embed_dim: usize,
    pub silhouette_sample: Option<usize>,
    pub formats: Formats,
    /// Fill the `seconds` column with measured wall time. Off by default
    /// since timings differ between otherwise identical runs.
    pub record_timings: bool,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>, out: impl Into<PathBuf>) -> Self {
        RunConfig {
            input: input.into(),
            out: out.into(),
            algorithms: Algorithm::ALL.to_vec(),
            seed: DEFAULT_SEED,
            k_kmeans: DEFAULT_K,
            k_spectral: DEFAULT_K,
            embed_dim: DEFAULT_EMBED_DIM,
            silhouette_sample: None,
            formats: Formats::ALL,
            record_timings: false,
        }
    }

    pub fn validate(&self) -> BenchResult<()> {
        if self.algorithms.is_empty() {
            return Err(BenchError::Usage("no algorithms selected".into()));
        }
        if self.k_kmeans == 0 || self.k_spectral == 0 {
            return Err(BenchError::Usage("--k must be at least 1".into()));
        }
        if self.embed_dim == 0 {
            return Err(BenchError::Usage("--embed-dim must be at least 1".into()));
        }
        if self.silhouette_sample == Some(0) {
            return Err(BenchError::Usage("--silhouette-sample must be at least 1".into()));
        }
        Ok(())
    }

    pub fn algorithm_seed(&self, algorithm: Algorithm) -> u64 {
        self.seed.wrapping_add(algorithm.seed_offset())
    }

    pub fn k_for(&self, algorithm: Algorithm) -> Option<usize> {
        match algorithm {
            Algorithm::KMeans => Some(self.k_kmeans),
            Algorithm::Spectral => Some(self.k_spectral),
            _ => None,
        }
    }
}

/// Comma-separated algorithm names, or `all`.
pub fn parse_algorithms(list: &str) -> BenchResult<Vec<Algorithm>> {
    if list.trim() == "all" {
        return Ok(Algorithm::ALL.to_vec());
    }
    let mut out = Vec::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let algorithm: Algorithm = name.parse().map_err(|_| {
            let known: Vec<_> = Algorithm::ALL.iter().map(|a| a.name()).collect();
            BenchError::Usage(format!("unknown algorithm {name:?} (expected one of {}, or all)", known.join(", ")))
        })?;
        if !out.contains(&algorithm) {
            out.push(algorithm);
        }
    }
    Ok(out)
}

/// `--seed` if given, else `COMMBENCH_SEED`, else the default.
pub fn resolve_seed(flag: Option<u64>, env: Option<&str>) -> BenchResult<u64> {
    match (flag, env) {
        (Some(seed), _) => Ok(seed),
        (None, Some(raw)) => raw
            .trim()
            .parse()
            .map_err(|_| BenchError::Usage(format!("{SEED_ENV}={raw:?} is not a non-negative integer"))),
        (None, None) => Ok(DEFAULT_SEED),
    }
}
