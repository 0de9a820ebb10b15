use std::path::PathBuf;

use walsh_prime::{default_zoo, Limits, SieveConfig, ZooEntry};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Everything `report` needs; built from CLI flags and validated once.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub n: u32,
    pub limits: Limits,
    pub segment_size: usize,
    /// Split level multiplier: low/high terms separate at `K√n`.
    pub k: f64,
    pub n0: u32,
    pub zoo: Vec<ZooEntry>,
    pub format: OutputFormat,
    pub cache_dir: PathBuf,
    /// Seeds the sampled monotonicity checks above `n = 16`.
    pub seed: u64,
    pub no_sieve: bool,
    /// Smallest dimension in the trend tables (step 2 up to `n`).
    pub trend_from: u32,
}

impl RunConfig {
    pub fn sieve_config(&self) -> SieveConfig {
        SieveConfig { segment_size: self.segment_size, limits: self.limits }
    }

    pub fn trend_dimensions(&self) -> Vec<u32> {
        let mut ns: Vec<u32> = (self.trend_from..=self.n).rev().step_by(2).collect();
        ns.reverse();
        ns
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.limits.check(self.n)?;
        if !(self.k.is_finite() && self.k > 0.0) {
            return Err(CliError::Config(format!("--K must be positive, got {}", self.k)));
        }
        if self.n0 > self.n {
            return Err(CliError::Config(format!("--n0={} exceeds --n={}", self.n0, self.n)));
        }
        if self.segment_size == 0 {
            return Err(CliError::Config("--segment-size must be positive".into()));
        }
        if self.trend_from < 2 || self.trend_from > self.n {
            return Err(CliError::Config(format!(
                "--trend-from must be in 2..={}, got {}",
                self.n, self.trend_from
            )));
        }
        Ok(())
    }
}

/// Parses a `;`-separated zoo list. An empty string gives an empty zoo.
pub fn parse_zoo(list: &str) -> Result<Vec<ZooEntry>, CliError> {
    list.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<ZooEntry>().map_err(|e| CliError::Config(e.to_string())))
        .collect()
}

/// The default zoo restricted to odd integers, as the correlation checks
/// require.
pub fn default_report_zoo() -> Vec<ZooEntry> {
    default_zoo().into_iter().map(ZooEntry::odd).collect()
}

/// `--max-memory` in MiB per vector to a dimension cap.
pub fn limits_from_mib(mib: u64, acknowledged: bool) -> Result<Limits, CliError> {
    Ok(Limits::from_bytes(mib.saturating_mul(1 << 20), acknowledged)?)
}
