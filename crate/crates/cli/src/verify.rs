//! Self-check suites run by `walsh-prime verify`.
//!
//! Every spectrum is obtained through a caller-supplied transform so a
//! deliberately broken transform can be plugged in to confirm the suites
//! notice.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use walsh_prime::{
    build_lambda_tilde, chebyshev_psi, default_zoo, influence_identity_check,
    lambda_tilde_moments, lambda_tilde_spectrum_via_identity, materialize, monotonicity_check,
    resolve_mean_constant, sieve_von_mangoldt, tail_report, wht_inverse, CheckMode,
    CorrelationContext, CubeVector, SieveConfig, Spectrum, VonMangoldtTable,
};

use crate::CliError;

pub type Transform = fn(&CubeVector) -> walsh_prime::Result<Spectrum>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    /// Oracle suites at `n ≤ 12`.
    Quick,
    /// Everything in `quick` plus suites up to `n = 20`.
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub suite: &'static str,
    pub name: String,
    pub n: u32,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub level: Level,
    pub passed: usize,
    pub failed: usize,
    pub failures: Vec<CheckOutcome>,
    #[serde(skip)]
    pub checks: Vec<CheckOutcome>,
}

struct Suite {
    checks: Vec<CheckOutcome>,
    transform: Transform,
    sieve: SieveConfig,
}

impl Suite {
    fn record(&mut self, suite: &'static str, name: impl Into<String>, n: u32, passed: bool, detail: String) {
        self.checks.push(CheckOutcome { suite, name: name.into(), n, passed, detail });
    }

    /// Runs `body`; an error counts as a failed check.
    fn run(
        &mut self,
        suite: &'static str,
        name: impl Into<String>,
        n: u32,
        body: impl FnOnce(&Self) -> walsh_prime::Result<(bool, String)>,
    ) {
        let (passed, detail) = body(self).unwrap_or_else(|e| (false, format!("error: {e}")));
        self.record(suite, name, n, passed, detail);
    }

    fn spectrum(&self, f: &CubeVector) -> walsh_prime::Result<Spectrum> {
        (self.transform)(f)
    }

    fn table(&self, n: u32) -> walsh_prime::Result<VonMangoldtTable> {
        sieve_von_mangoldt(n, &self.sieve)
    }
}

fn random_vector(n: u32, seed: u64) -> CubeVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..1usize << n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    CubeVector::new(n, values).expect("n within limits")
}

/// `2^{-n} Σ_x f(x) (−1)^{|x∩S|}`, quadratic time.
fn direct_walsh(f: &CubeVector) -> Vec<f64> {
    let v = f.values();
    let scale = 1.0 / v.len() as f64;
    (0..v.len())
        .map(|s| {
            let sum: f64 = v
                .iter()
                .enumerate()
                .map(|(x, &fx)| if (x & s).count_ones() % 2 == 0 { fx } else { -fx })
                .sum();
            sum * scale
        })
        .collect()
}

fn trial_division_lambda(x: u64) -> f64 {
    if x < 2 {
        return 0.0;
    }
    let mut p = 2;
    while p * p <= x && !x.is_multiple_of(p) {
        p += 1;
    }
    if !x.is_multiple_of(p) {
        return (x as f64).ln();
    }
    let mut y = x;
    while y.is_multiple_of(p) {
        y /= p;
    }
    if y == 1 {
        (p as f64).ln()
    } else {
        0.0
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| f64::max(m, (x - y).abs()))
}

fn transform_suite(s: &mut Suite, ns: &[u32], round_trip_n: u32) {
    for &n in ns {
        s.run("cube", "forward_matches_direct", n, |s| {
            let f = random_vector(n, 0x5eed ^ n as u64);
            let err = max_abs_diff(s.spectrum(&f)?.coeffs(), &direct_walsh(&f));
            Ok((err < 1e-12, format!("max_abs_err={err:e}")))
        });
    }
    let n = round_trip_n;
    s.run("cube", "round_trip", n, |s| {
        let f = random_vector(n, 7);
        let back = wht_inverse(&s.spectrum(&f)?)?;
        let err = max_abs_diff(back.values(), f.values());
        Ok((err < 1e-10, format!("max_abs_err={err:e}")))
    });
    s.run("cube", "parseval", n, |s| {
        let f = random_vector(n, 11);
        let lhs = f.values().iter().map(|v| v * v).sum::<f64>() / f.len() as f64;
        let rhs = s.spectrum(&f)?.energy();
        let rel = (lhs - rhs).abs() / lhs;
        Ok((rel < 1e-12, format!("rel_err={rel:e}")))
    });
}

fn sieve_suite(s: &mut Suite, trial_n: u32, psi_n: u32, psi_tol: f64) {
    s.run("arithmetic", "trial_division", trial_n, |s| {
        let t = s.table(trial_n)?;
        let mut worst = 0.0f64;
        let mut support = true;
        for (x, &v) in t.values().iter().enumerate() {
            let expect = trial_division_lambda(x as u64);
            support &= (v == 0.0) == (expect == 0.0);
            worst = worst.max((v - expect).abs());
        }
        Ok((support && worst < 1e-12, format!("support_ok={support} max_abs_err={worst:e}")))
    });
    s.run("arithmetic", "psi_ratio", psi_n, |s| {
        let u = 1u64 << psi_n;
        let ratio = chebyshev_psi(&s.table(psi_n + 1)?, u)? / u as f64;
        Ok(((ratio - 1.0).abs() <= psi_tol, format!("psi(2^{psi_n})/2^{psi_n}={ratio:.6}")))
    });
}

fn lambda_tilde_suite(s: &mut Suite, identity_ns: &[u32], mass_ns: &[u32], mean_ns: &[u32]) {
    for &n in identity_ns {
        s.run("lambda_tilde", "identity_matches_transform", n, |s| {
            let t = s.table(n)?;
            let lt = build_lambda_tilde(&t)?;
            let via_identity = lambda_tilde_spectrum_via_identity(&s.spectrum(t.cube())?)?;
            let err = max_abs_diff(via_identity.coeffs(), s.spectrum(lt.cube())?.coeffs());
            Ok((err < 1e-9, format!("max_abs_err={err:e}")))
        });
    }
    for &n in mass_ns {
        s.run("lambda_tilde", "mass_identity", n, |s| {
            let t = s.table(n)?;
            let lt = build_lambda_tilde(&t)?;
            let lhs: f64 = lt.values().iter().map(|v| v.abs()).sum();
            let rhs: f64 = t
                .values()
                .iter()
                .enumerate()
                .map(|(x, v)| v * x.count_ones() as f64)
                .sum();
            let rel = (lhs - rhs).abs() / rhs;
            Ok((rel < 1e-9, format!("rel_err={rel:e}")))
        });
    }
    for &n in mean_ns {
        s.run("lambda_tilde", "mean_constant", n, |s| {
            let lt = build_lambda_tilde(&s.table(n)?)?;
            let r = resolve_mean_constant(&lambda_tilde_moments(&lt));
            Ok((
                r.smaller_residual() < 0.6,
                format!("mean={:.6} supported={}", r.mean, r.supported.label()),
            ))
        });
    }
}

fn monotone_suite(s: &mut Suite, ns: &[u32], influence_max_n: u32) {
    for &n in ns {
        for entry in default_zoo() {
            let spec = entry.to_string();
            s.run("monotone", format!("{spec}: monotone"), n, |_| {
                let f = materialize(&entry.at(n))?;
                let v = monotonicity_check(&f, CheckMode::default_for(n))?;
                Ok((v.is_monotone(), format!("{v:?}")))
            });
            s.run("monotone", format!("{spec}: tail_bound"), n, |s| {
                let f_hat = s.spectrum(&materialize(&entry.at(n))?)?;
                let mut worst = f64::NEG_INFINITY;
                for k in [1.0, 2.0, 4.0] {
                    let t = tail_report(&f_hat, k);
                    worst = worst.max(t.tail - t.bound);
                }
                Ok((worst <= 1e-10, format!("max(tail-bound)={worst:e}")))
            });
            if n <= influence_max_n {
                s.run("monotone", format!("{spec}: influence_identity"), n, |s| {
                    let f_hat = s.spectrum(&materialize(&entry.at(n))?)?;
                    let id = influence_identity_check(&f_hat);
                    Ok((id.holds(1e-10), format!("gap={:e} max_degree1={:e}", id.gap, id.max_degree1)))
                });
            }
        }
    }
}

fn decomposition_suite(s: &mut Suite, ns: &[u32]) {
    for &n in ns {
        let ctx = match CorrelationContext::build(n, &s.sieve) {
            Ok(ctx) => ctx,
            Err(e) => {
                s.record("analysis", "context", n, false, format!("error: {e}"));
                continue;
            }
        };
        for entry in default_zoo() {
            let entry = entry.odd();
            let spec = entry.to_string();
            s.run("analysis", format!("{spec}: decomposition"), n, |_| {
                let f = materialize(&entry.at(n))?;
                let r = ctx.correlate(&f, &spec, 4.0)?;
                let ok = r.decomposition_holds(1e-9)
                    && r.cauchy_schwarz_holds()
                    && r.ineq32_holds(1e-12)
                    && r.warnings.is_empty();
                Ok((
                    ok,
                    format!(
                        "rel_residual={:e} high={:e} cs_bound={:e} lhs={:.6} rhs={:.6} warnings={}",
                        r.decomposition_relative_residual(),
                        r.high_term,
                        r.cauchy_schwarz_bound(),
                        r.ineq32_lhs,
                        r.ineq32_rhs,
                        r.warnings.len()
                    ),
                ))
            });
        }
    }
}

/// Runs the suites for `level`, computing spectra with `transform`.
pub fn run(level: Level, transform: Transform, sieve: &SieveConfig) -> VerifyReport {
    let mut s = Suite { checks: Vec::new(), transform, sieve: *sieve };
    transform_suite(&mut s, &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10], 12);
    sieve_suite(&mut s, 12, 12, 0.05);
    lambda_tilde_suite(&mut s, &[8, 10], &[10, 12], &[12]);
    monotone_suite(&mut s, &[8, 12], 12);
    decomposition_suite(&mut s, &[12]);
    if level == Level::Full {
        transform_suite(&mut s, &[], 20);
        sieve_suite(&mut s, 16, 20, 0.01);
        lambda_tilde_suite(&mut s, &[12], &[16, 20], &[16, 20]);
        monotone_suite(&mut s, &[16, 20], 12);
        decomposition_suite(&mut s, &[16, 20]);
    }
    let failures: Vec<CheckOutcome> = s.checks.iter().filter(|c| !c.passed).cloned().collect();
    VerifyReport {
        level,
        passed: s.checks.len() - failures.len(),
        failed: failures.len(),
        failures,
        checks: s.checks,
    }
}

/// Prints one line per check to `log` and the JSON summary to `out`.
/// Fails with [`CliError::Verification`] if any check failed.
pub fn cmd_verify(
    level: Level,
    transform: Transform,
    sieve: &SieveConfig,
    mut out: impl Write,
    mut log: impl Write,
) -> Result<VerifyReport, CliError> {
    let report = run(level, transform, sieve);
    for c in &report.checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        writeln!(log, "{tag} {}/{} n={} {}", c.suite, c.name, c.n, c.detail)?;
    }
    serde_json::to_writer_pretty(&mut out, &report)?;
    writeln!(out)?;
    if report.failed > 0 {
        return Err(CliError::Verification { failed: report.failed });
    }
    Ok(report)
}
