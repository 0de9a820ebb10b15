//! Entry points behind each subcommand, callable without spawning the binary.

use std::io::Write;
use std::path::{Path, PathBuf};

use walsh_prime::{SieveConfig, VonMangoldtTable};

use crate::cache::{self, CacheStatus};
use crate::config::RunConfig;
use crate::report::{build_report, Report};
use crate::CliError;

/// Ensures a checksum-valid cache for `n` exists and returns its path.
pub fn cmd_sieve(
    n: u32,
    cache_dir: &Path,
    config: &SieveConfig,
    mut log: impl Write,
) -> Result<(PathBuf, CacheStatus), CliError> {
    let (_, path, status) = cache::ensure(cache_dir, n, config)?;
    log_status(&mut log, n, &path, &status)?;
    Ok((path, status))
}

fn log_status(log: &mut impl Write, n: u32, path: &Path, status: &CacheStatus) -> std::io::Result<()> {
    match status {
        CacheStatus::Hit => writeln!(log, "cache hit: {}", path.display()),
        CacheStatus::Written => writeln!(log, "sieved n={n}: {}", path.display()),
        CacheStatus::Rebuilt(why) => {
            writeln!(log, "warning: {} was unusable ({why}); re-sieved", path.display())
        }
    }
}

fn load_table(cfg: &RunConfig, log: &mut impl Write) -> Result<VonMangoldtTable, CliError> {
    if cfg.no_sieve {
        return cache::load_existing(&cfg.cache_dir, cfg.n);
    }
    let (table, path, status) = cache::ensure(&cfg.cache_dir, cfg.n, &cfg.sieve_config())?;
    log_status(log, cfg.n, &path, &status)?;
    Ok(table)
}

/// Builds the report, writes the correlation table to `out`, and every
/// table to `out_dir` when given.
pub fn cmd_report(
    cfg: &RunConfig,
    out_dir: Option<&Path>,
    out: impl Write,
    mut log: impl Write,
) -> Result<Report, CliError> {
    cfg.validate()?;
    let table = load_table(cfg, &mut log)?;
    let report = build_report(cfg, table)?;
    report.write_correlations(cfg.format, out)?;
    if let Some(dir) = out_dir {
        for path in report.write_all(dir, cfg.format)? {
            writeln!(log, "wrote {}", path.display())?;
        }
    }
    Ok(report)
}
