use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use walsh_prime::arithmetic::DEFAULT_SEGMENT_SIZE;
use walsh_prime::{wht_forward, SieveConfig};
use walsh_prime_cli::commands::{cmd_report, cmd_sieve};
use walsh_prime_cli::config::{default_report_zoo, limits_from_mib, parse_zoo, OutputFormat, RunConfig};
use walsh_prime_cli::verify::{cmd_verify, Level};
use walsh_prime_cli::{CliError, ExitStatus};

#[derive(Parser)]
#[command(name = "walsh-prime", version, about = "Fourier-Walsh experiments on the von Mangoldt function")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Directory holding `lambda_nNN.bin` cache files.
    #[arg(long, default_value = "cache")]
    cache_dir: PathBuf,
    /// Memory budget per 2^n vector, in MiB.
    #[arg(long, default_value_t = 512)]
    max_memory: u64,
    /// Accept dimensions above 26 (up to 28).
    #[arg(long)]
    allow_large: bool,
    /// Sieve segment length.
    #[arg(long, default_value_t = DEFAULT_SEGMENT_SIZE)]
    segment_size: usize,
}

impl Common {
    fn sieve_config(&self) -> Result<SieveConfig, CliError> {
        Ok(SieveConfig {
            segment_size: self.segment_size,
            limits: limits_from_mib(self.max_memory, self.allow_large)?,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sieve Λ on [0, 2^n) into the cache; skipped if a valid file exists.
    Sieve {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Correlation, tail, low-level mass and trend tables.
    Report {
        #[arg(long)]
        n: u32,
        /// `;`-separated zoo entries, e.g. "majority/odd;tribes:w=4/odd".
        /// Defaults to the built-in zoo on the odd slice; "" means none.
        #[arg(long)]
        zoo: Option<String>,
        /// Low/high split at level K·√n.
        #[arg(long = "K", default_value_t = walsh_prime::analysis::DEFAULT_K)]
        k: f64,
        /// Highest level counted in the low-level mass of Λ.
        #[arg(long, default_value_t = 2)]
        n0: u32,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        /// Seed for sampled monotonicity checks (n > 16).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fail instead of sieving when the cache is missing.
        #[arg(long)]
        no_sieve: bool,
        /// Smallest n in the trend tables.
        #[arg(long, default_value_t = 10)]
        trend_from: u32,
        /// Also write every table here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the self-check suites; prints a JSON failure list.
    Verify {
        #[arg(long, value_enum, default_value_t = Level::Quick)]
        level: Level,
        #[command(flatten)]
        common: Common,
    },
    /// List the built-in zoo, one entry per line in `--zoo` syntax.
    Zoo,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let stdout = io::stdout().lock();
    let stderr = io::stderr().lock();
    match cli.command {
        Command::Sieve { n, common } => {
            let (path, _) = cmd_sieve(n, &common.cache_dir, &common.sieve_config()?, stderr)?;
            println!("{}", path.display());
        }
        Command::Report { n, zoo, k, n0, format, seed, no_sieve, trend_from, out_dir, common } => {
            let zoo = match zoo {
                Some(list) => parse_zoo(&list)?,
                None => default_report_zoo(),
            };
            let sieve = common.sieve_config()?;
            let cfg = RunConfig {
                n,
                limits: sieve.limits,
                segment_size: sieve.segment_size,
                k,
                n0,
                zoo,
                format,
                cache_dir: common.cache_dir,
                seed,
                no_sieve,
                trend_from: trend_from.min(n),
            };
            cmd_report(&cfg, out_dir.as_deref(), stdout, stderr)?;
        }
        Command::Verify { level, common } => {
            cmd_verify(level, wht_forward, &common.sieve_config()?, stdout, stderr)?;
        }
        Command::Zoo => {
            for entry in walsh_prime::default_zoo() {
                println!("{entry}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let status: ExitStatus = e.exit_status();
            ExitCode::from(status as u8)
        }
    }
}
