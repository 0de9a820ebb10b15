//! Report tables and their CSV/JSON serialization.
//!
//! Every table is a flat list of rows; CSV has one header line followed by
//! one line per row, JSON is an array of objects with the same keys.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use walsh_prime::monotone::DEFAULT_SAMPLED_EDGES;
use walsh_prime::{
    build_lambda_tilde, influence_identity_check, low_level_mass, materialize_with,
    monotonicity_check, resolve_mean_constant, tail_report, trend_table, wht_forward, CheckMode,
    CorrelationContext, Metric, VonMangoldtTable, Warning,
};

use crate::config::{OutputFormat, RunConfig};
use crate::CliError;

const DECOMPOSITION_REL_TOL: f64 = 1e-9;
const INEQUALITY_REL_TOL: f64 = 1e-12;
const TAIL_SLACK: f64 = 1e-10;
const INFLUENCE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationRow {
    pub n: u32,
    pub spec: String,
    pub mean_f: f64,
    pub sum_lambda_f: f64,
    pub theorem_ratio: f64,
    pub pairing_tilde: f64,
    pub mean_term: f64,
    pub low_term: f64,
    pub high_term: f64,
    #[serde(rename = "K")]
    pub k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailRow {
    pub n: u32,
    pub spec: String,
    #[serde(rename = "K")]
    pub k: f64,
    pub cutoff: u32,
    pub tail: f64,
    pub bound: f64,
    pub total_influence: f64,
    pub degree1_sum: f64,
    pub within_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowLevelMassRow {
    pub n: u32,
    pub level: u32,
    pub level_mass: f64,
    pub cumulative_mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendRow {
    pub metric: String,
    pub n: u32,
    pub value: f64,
    pub trend: &'static str,
}

/// Hypothesis and identity checks for one zoo member.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub n: u32,
    pub spec: String,
    pub monotone: bool,
    pub odd_supported: bool,
    pub warnings: String,
    pub decomposition_rel_residual: f64,
    pub decomposition_ok: bool,
    pub cauchy_schwarz_bound: f64,
    pub cauchy_schwarz_ok: bool,
    pub ineq_lhs: f64,
    pub ineq_rhs: f64,
    pub ineq_ok: bool,
    pub influence_gap: f64,
    pub influence_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentsRow {
    pub n: u32,
    pub mean: f64,
    pub l1: f64,
    pub l2: f64,
    pub l1_ratio: f64,
    pub l2_ratio: f64,
    pub residual_n_plus_1_half: f64,
    pub residual_n_minus_1_half: f64,
    pub supported: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientRow {
    pub n: u32,
    pub bit0: f64,
    pub bit0_predicted: f64,
    pub single_mean: f64,
    pub single_max_dev: f64,
    pub pair0_mean: f64,
    pub pair0_max_dev: f64,
    pub pair_rest_max: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub correlations: Vec<CorrelationRow>,
    pub tails: Vec<TailRow>,
    pub low_level_mass: Vec<LowLevelMassRow>,
    pub trends: Vec<TrendRow>,
    pub checks: Vec<CheckRow>,
    pub moments: Vec<MomentsRow>,
    pub coefficients: Vec<CoefficientRow>,
}

fn describe(warnings: &[Warning]) -> String {
    warnings
        .iter()
        .map(|w| match w {
            Warning::NotOddSupported { index } => format!("not odd-supported at {index}"),
            Warning::NotMonotone { lower, upper } => format!("not monotone: f({lower}) > f({upper})"),
            Warning::NotBoolean { index } => format!("not 0/1 at {index}"),
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// Builds every table for `cfg` from an already loaded `Λ` table.
pub fn build_report(cfg: &RunConfig, table: VonMangoldtTable) -> Result<Report, CliError> {
    let n = cfg.n;
    if table.n() != n {
        return Err(CliError::Config(format!("table has n={}, config n={n}", table.n())));
    }
    let sieve = cfg.sieve_config();
    let lhat = wht_forward(table.cube())?;
    let lt = build_lambda_tilde(&table)?;
    let ctx = CorrelationContext::new(table, lt)?;
    let check = match CheckMode::default_for(n) {
        CheckMode::Sampled { .. } => {
            CheckMode::Sampled { count: DEFAULT_SAMPLED_EDGES, seed: cfg.seed }
        }
        exhaustive => exhaustive,
    };

    let mut report = Report::default();
    for entry in &cfg.zoo {
        let spec = entry.to_string();
        let f = materialize_with(&entry.at(n), &cfg.limits)?;
        let r = ctx.correlate_with(&f, &spec, cfg.k, Some(check))?;
        let f_hat = wht_forward(&f)?;
        let tail = tail_report(&f_hat, cfg.k);
        let influence = influence_identity_check(&f_hat);
        let monotone = monotonicity_check(&f, check)?.is_monotone();

        report.correlations.push(CorrelationRow {
            n,
            spec: spec.clone(),
            mean_f: r.mean_f,
            sum_lambda_f: r.sum_lambda_f,
            theorem_ratio: r.theorem_ratio,
            pairing_tilde: r.pairing_tilde,
            mean_term: r.mean_term,
            low_term: r.low_term,
            high_term: r.high_term,
            k: r.k,
        });
        report.tails.push(TailRow {
            n,
            spec: spec.clone(),
            k: tail.k,
            cutoff: tail.cutoff,
            tail: tail.tail,
            bound: tail.bound,
            total_influence: tail.total_influence_fw,
            degree1_sum: tail.degree1_sum,
            within_bound: tail.within_bound(TAIL_SLACK),
        });
        report.checks.push(CheckRow {
            n,
            spec,
            monotone,
            odd_supported: !r.warnings.iter().any(|w| matches!(w, Warning::NotOddSupported { .. })),
            warnings: describe(&r.warnings),
            decomposition_rel_residual: r.decomposition_relative_residual(),
            decomposition_ok: r.decomposition_holds(DECOMPOSITION_REL_TOL),
            cauchy_schwarz_bound: r.cauchy_schwarz_bound(),
            cauchy_schwarz_ok: r.cauchy_schwarz_holds(),
            ineq_lhs: r.ineq32_lhs,
            ineq_rhs: r.ineq32_rhs,
            ineq_ok: r.ineq32_holds(INEQUALITY_REL_TOL),
            influence_gap: influence.gap,
            influence_ok: influence.holds(INFLUENCE_TOL),
        });
    }

    let llm = low_level_mass(&lhat, cfg.n0)?;
    let mut cumulative = 0.0;
    for (level, &mass) in llm.per_level.iter().enumerate().skip(1) {
        cumulative += mass;
        report.low_level_mass.push(LowLevelMassRow {
            n,
            level: level as u32,
            level_mass: mass,
            cumulative_mass: cumulative,
        });
    }

    let ns = cfg.trend_dimensions();
    for metric in [Metric::LowLevelMass { n0: cfg.n0 }, Metric::L2Ratio, Metric::PairCorrelationMax] {
        let t = trend_table(&metric, &ns, &sieve)?;
        let trend = t.trend.label();
        report.trends.extend(t.rows.iter().map(|&(n, value)| TrendRow {
            metric: t.label.clone(),
            n,
            value,
            trend,
        }));
    }

    let m = ctx.moments();
    let res = resolve_mean_constant(m);
    report.moments.push(MomentsRow {
        n,
        mean: m.mean,
        l1: m.l1,
        l2: m.l2,
        l1_ratio: m.l1_ratio,
        l2_ratio: m.l2_ratio,
        residual_n_plus_1_half: res.residual_plus,
        residual_n_minus_1_half: res.residual_minus,
        supported: res.supported.label(),
    });
    let c = ctx.coefficient_check();
    report.coefficients.push(CoefficientRow {
        n,
        bit0: c.bit0,
        bit0_predicted: c.bit0_predicted,
        single_mean: c.single_mean,
        single_max_dev: c.single_max_dev,
        pair0_mean: c.pair0_mean,
        pair0_max_dev: c.pair0_max_dev,
        pair_rest_max: c.pair_rest_max,
    });
    Ok(report)
}

/// CSV keeps the header even when there are no rows.
pub fn write_csv<R: Serialize>(rows: &[R], header: &[&str], out: impl Write) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<R: Serialize>(rows: &[R], mut out: impl Write) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut out, rows)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn write_table<R: Serialize>(
    rows: &[R],
    header: &[&str],
    format: OutputFormat,
    out: impl Write,
) -> Result<(), CliError> {
    match format {
        OutputFormat::Csv => write_csv(rows, header, out),
        OutputFormat::Json => write_json(rows, out),
    }
}

pub const CORRELATION_COLUMNS: &[&str] = &[
    "n", "spec", "mean_f", "sum_lambda_f", "theorem_ratio", "pairing_tilde", "mean_term",
    "low_term", "high_term", "K",
];
pub const TAIL_COLUMNS: &[&str] = &[
    "n", "spec", "K", "cutoff", "tail", "bound", "total_influence", "degree1_sum", "within_bound",
];
pub const LOW_LEVEL_MASS_COLUMNS: &[&str] = &["n", "level", "level_mass", "cumulative_mass"];
pub const TREND_COLUMNS: &[&str] = &["metric", "n", "value", "trend"];
pub const CHECK_COLUMNS: &[&str] = &[
    "n", "spec", "monotone", "odd_supported", "warnings", "decomposition_rel_residual",
    "decomposition_ok", "cauchy_schwarz_bound", "cauchy_schwarz_ok", "ineq_lhs", "ineq_rhs",
    "ineq_ok", "influence_gap", "influence_ok",
];
pub const MOMENTS_COLUMNS: &[&str] = &[
    "n", "mean", "l1", "l2", "l1_ratio", "l2_ratio", "residual_n_plus_1_half",
    "residual_n_minus_1_half", "supported",
];
pub const COEFFICIENT_COLUMNS: &[&str] = &[
    "n", "bit0", "bit0_predicted", "single_mean", "single_max_dev", "pair0_mean", "pair0_max_dev",
    "pair_rest_max",
];

impl Report {
    pub fn write_correlations(&self, format: OutputFormat, out: impl Write) -> Result<(), CliError> {
        write_table(&self.correlations, CORRELATION_COLUMNS, format, out)
    }

    /// Writes one file per table into `dir` and returns the paths in a
    /// fixed order.
    pub fn write_all(&self, dir: &Path, format: OutputFormat) -> Result<Vec<PathBuf>, CliError> {
        fs::create_dir_all(dir)?;
        let ext = match format {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        };
        let mut paths = Vec::new();
        let mut emit = |name: &str, write: &dyn Fn(fs::File) -> Result<(), CliError>| {
            let path = dir.join(format!("{name}.{ext}"));
            write(fs::File::create(&path)?)?;
            paths.push(path);
            Ok::<_, CliError>(())
        };
        emit("correlation", &|f| write_table(&self.correlations, CORRELATION_COLUMNS, format, f))?;
        emit("tail", &|f| write_table(&self.tails, TAIL_COLUMNS, format, f))?;
        emit("low_level_mass", &|f| {
            write_table(&self.low_level_mass, LOW_LEVEL_MASS_COLUMNS, format, f)
        })?;
        emit("trend", &|f| write_table(&self.trends, TREND_COLUMNS, format, f))?;
        emit("checks", &|f| write_table(&self.checks, CHECK_COLUMNS, format, f))?;
        emit("lambda_tilde_moments", &|f| write_table(&self.moments, MOMENTS_COLUMNS, format, f))?;
        emit("coefficients", &|f| {
            write_table(&self.coefficients, COEFFICIENT_COLUMNS, format, f)
        })?;
        Ok(paths)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row() -> CorrelationRow {
        CorrelationRow {
            n: 4,
            spec: "majority/odd".into(),
            mean_f: 0.25,
            sum_lambda_f: 1.5,
            theorem_ratio: 0.375,
            pairing_tilde: 0.1,
            mean_term: 0.2,
            low_term: -0.1,
            high_term: 0.0,
            k: 4.0,
        }
    }

    #[test]
    fn csv_header_matches_fields() {
        let mut buf = Vec::new();
        write_csv(&[row()], CORRELATION_COLUMNS, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "n,spec,mean_f,sum_lambda_f,theorem_ratio,pairing_tilde,mean_term,low_term,high_term,K"
        );
        assert_eq!(lines.next().unwrap(), "4,majority/odd,0.25,1.5,0.375,0.1,0.2,-0.1,0.0,4.0");
        assert!(lines.next().is_none());
    }

    #[test]
    fn empty_csv_is_header_only() {
        let mut buf = Vec::new();
        write_csv::<CorrelationRow>(&[], CORRELATION_COLUMNS, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1);
    }

    #[test]
    fn json_keys_match_csv_columns() {
        let v = serde_json::to_value(row()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        let mut expected = CORRELATION_COLUMNS.to_vec();
        expected.sort_unstable();
        let mut keys = keys;
        keys.sort_unstable();
        assert_eq!(keys, expected);
    }
}
