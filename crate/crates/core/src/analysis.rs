//! Correlation of monotone functions with `Λ`, the Fourier split of
//! `⟨f, Λ̃⟩` into mean, low-level and high-level parts, the low-level
//! spectral mass of `Λ`, and trend tables across dimensions.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::arithmetic::{max_pair_correlation, sieve_von_mangoldt, SieveConfig, VonMangoldtTable};
use crate::cube::{wht_forward, CubeVector, Spectrum};
use crate::lambda_tilde::{
    build_lambda_tilde, lambda_tilde_moments, same_dimension, LambdaTildeMoments,
    LambdaTildeTable,
};
use crate::monotone::{materialize_with, monotonicity_check, CheckMode, Verdict, ZooEntry};
use crate::{Error, Result};

/// Default `K`: split at level `4√n`.
pub const DEFAULT_K: f64 = 4.0;

/// Hypothesis violations noticed while correlating.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Warning {
    /// `f(x) ≠ 0` at an even `x`.
    NotOddSupported { index: usize },
    NotMonotone { lower: usize, upper: usize },
    NotBoolean { index: usize },
}

/// Observed low-level coefficients of `Λ̃` next to their asymptotic
/// predictions. Reported only; the error terms are asymptotic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientCheck {
    /// `Λ̃̂({0})`
    pub bit0: f64,
    /// `(3 − n)/2`
    pub bit0_predicted: f64,
    /// Mean of `Λ̃̂({j})` over `0 < j < n`; predicted `½`.
    pub single_mean: f64,
    pub single_max_dev: f64,
    /// Mean of `Λ̃̂({0, j})` over `0 < j < n`; predicted `−½`.
    pub pair0_mean: f64,
    pub pair0_max_dev: f64,
    /// Largest `|Λ̃̂(S)|` with `|S| = 2`, `0 ∉ S`; predicted `0`.
    pub pair_rest_max: f64,
}

impl CoefficientCheck {
    fn from_spectrum(lt_hat: &Spectrum) -> Self {
        let n = lt_hat.n();
        let c = lt_hat.coeffs();
        let others = (n.max(2) - 1) as f64;
        let singles: Vec<f64> = (1..n).map(|j| c[1 << j]).collect();
        let pairs0: Vec<f64> = (1..n).map(|j| c[1 | 1 << j]).collect();
        let mut pair_rest_max: f64 = 0.0;
        for a in 1..n {
            for b in a + 1..n {
                pair_rest_max = pair_rest_max.max(c[1 << a | 1 << b].abs());
            }
        }
        let max_dev = |v: &[f64], target: f64| v.iter().fold(0.0f64, |m, x| m.max((x - target).abs()));
        CoefficientCheck {
            bit0: c[1],
            bit0_predicted: (3.0 - n as f64) / 2.0,
            single_mean: singles.iter().sum::<f64>() / others,
            single_max_dev: max_dev(&singles, 0.5),
            pair0_mean: pairs0.iter().sum::<f64>() / others,
            pair0_max_dev: max_dev(&pairs0, -0.5),
            pair_rest_max,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub n: u32,
    pub spec: String,
    /// `E[f]`
    pub mean_f: f64,
    /// `Σ_{0<x<2^n} Λ(x) f(x)`
    pub sum_lambda_f: f64,
    /// `sum_lambda_f / (2^n E[f])`
    pub theorem_ratio: f64,
    /// Normalized `⟨f, Λ̃⟩`, computed pointwise.
    pub pairing_tilde: f64,
    /// `E[f]·E[Λ̃]`
    pub mean_term: f64,
    /// `Σ_{S≠∅, |S|<K√n} f̂(S) Λ̃̂(S)`
    pub low_term: f64,
    /// `Σ_{|S|≥K√n} f̂(S) Λ̃̂(S)`
    pub high_term: f64,
    pub k: f64,
    /// `K√n`
    pub split_level: f64,
    /// `Σ_{|S|≥K√n} f̂(S)²`
    pub high_tail_mass: f64,
    /// `(2^{-n} Σ Λ̃²)^{1/2}`
    pub lambda_tilde_l2: f64,
    /// Unnormalized `⟨Λ̃, f⟩`.
    pub ineq32_lhs: f64,
    /// `n·Σ Λ(x) f(x)`
    pub ineq32_rhs: f64,
    pub coefficients: CoefficientCheck,
    pub warnings: Vec<Warning>,
}

impl CorrelationReport {
    /// `pairing_tilde − mean_term − low_term − high_term`
    pub fn decomposition_residual(&self) -> f64 {
        self.pairing_tilde - self.mean_term - self.low_term - self.high_term
    }

    /// Residual relative to the larger of `|pairing_tilde|` and the summed
    /// term magnitudes; 0 when every term vanishes.
    pub fn decomposition_relative_residual(&self) -> f64 {
        let scale = self
            .pairing_tilde
            .abs()
            .max(self.mean_term.abs() + self.low_term.abs() + self.high_term.abs());
        let residual = self.decomposition_residual().abs();
        if residual == 0.0 {
            0.0
        } else {
            residual / scale
        }
    }

    pub fn decomposition_holds(&self, rel_tol: f64) -> bool {
        self.decomposition_relative_residual() <= rel_tol
    }

    /// `sqrt(high_tail_mass)·‖Λ̃‖₂`, bounding `|high_term|` by Cauchy-Schwarz.
    pub fn cauchy_schwarz_bound(&self) -> f64 {
        libm::sqrt(self.high_tail_mass) * self.lambda_tilde_l2
    }

    pub fn cauchy_schwarz_holds(&self) -> bool {
        self.high_term.abs() <= self.cauchy_schwarz_bound() * (1.0 + 1e-12) + 1e-15
    }

    pub fn ineq32_holds(&self, rel_tol: f64) -> bool {
        self.ineq32_lhs <= self.ineq32_rhs * (1.0 + rel_tol)
    }
}

/// `Λ`, `Λ̃` and the `Λ̃` spectrum for one dimension, shared across many `f`.
#[derive(Debug, Clone)]
pub struct CorrelationContext {
    table: VonMangoldtTable,
    lt: LambdaTildeTable,
    lt_hat: Spectrum,
    moments: LambdaTildeMoments,
}

impl CorrelationContext {
    pub fn new(table: VonMangoldtTable, lt: LambdaTildeTable) -> Result<Self> {
        same_dimension(table.n(), lt.n())?;
        let lt_hat = wht_forward(lt.cube())?;
        let moments = lambda_tilde_moments(&lt);
        Ok(CorrelationContext { table, lt, lt_hat, moments })
    }

    /// Sieves `Λ` and builds `Λ̃` at dimension `n`.
    pub fn build(n: u32, config: &SieveConfig) -> Result<Self> {
        let table = sieve_von_mangoldt(n, config)?;
        let lt = build_lambda_tilde(&table)?;
        Self::new(table, lt)
    }

    pub fn n(&self) -> u32 {
        self.table.n()
    }

    pub fn table(&self) -> &VonMangoldtTable {
        &self.table
    }

    pub fn lambda_tilde(&self) -> &LambdaTildeTable {
        &self.lt
    }

    pub fn lambda_tilde_spectrum(&self) -> &Spectrum {
        &self.lt_hat
    }

    pub fn moments(&self) -> &LambdaTildeMoments {
        &self.moments
    }

    pub fn coefficient_check(&self) -> CoefficientCheck {
        CoefficientCheck::from_spectrum(&self.lt_hat)
    }

    /// Runs every hypothesis check and records violations as warnings.
    pub fn correlate(&self, f: &CubeVector, spec: &str, k: f64) -> Result<CorrelationReport> {
        self.correlate_with(f, spec, k, Some(CheckMode::default_for(self.n())))
    }

    /// `check = None` skips the hypothesis checks (caller attests them);
    /// otherwise odd support is checked and monotonicity in the given mode.
    pub fn correlate_with(
        &self,
        f: &CubeVector,
        spec: &str,
        k: f64,
        check: Option<CheckMode>,
    ) -> Result<CorrelationReport> {
        let n = self.n();
        same_dimension(n, f.n())?;
        let len = f.len() as f64;
        let fv = f.values();
        let mean_f = f.mean();
        if mean_f == 0.0 {
            return Err(Error::Degenerate);
        }

        let mut warnings = Vec::new();
        if let Some(mode) = check {
            if let Some(index) = fv.iter().step_by(2).position(|&v| v != 0.0) {
                warnings.push(Warning::NotOddSupported { index: 2 * index });
            }
            match monotonicity_check(f, mode) {
                Ok(Verdict::Violation { lower, upper, .. }) => {
                    warnings.push(Warning::NotMonotone { lower, upper })
                }
                Ok(Verdict::Monotone) => {}
                Err(Error::NonBoolean { index, .. }) => warnings.push(Warning::NotBoolean { index }),
                Err(e) => return Err(e),
            }
        }

        let lambda = self.table.values();
        let tilde = self.lt.values();
        let sum_lambda_f: f64 = lambda.iter().zip(fv).skip(1).map(|(a, b)| a * b).sum();
        let ineq32_lhs: f64 = tilde.iter().zip(fv).map(|(a, b)| a * b).sum();

        let f_hat = wht_forward(f)?;
        let split_level = k * libm::sqrt(n as f64);
        let mut low_term = 0.0;
        let mut high_term = 0.0;
        let mut high_tail_mass = 0.0;
        for (mask, (a, b)) in f_hat.coeffs().iter().zip(self.lt_hat.coeffs()).enumerate().skip(1) {
            if ((mask as u64).count_ones() as f64) < split_level {
                low_term += a * b;
            } else {
                high_term += a * b;
                high_tail_mass += a * a;
            }
        }

        Ok(CorrelationReport {
            n,
            spec: spec.into(),
            mean_f,
            sum_lambda_f,
            theorem_ratio: sum_lambda_f / (len * mean_f),
            pairing_tilde: ineq32_lhs / len,
            mean_term: f_hat.coeff(0) * self.lt_hat.coeff(0),
            low_term,
            high_term,
            k,
            split_level,
            high_tail_mass,
            lambda_tilde_l2: self.moments.l2,
            ineq32_lhs,
            ineq32_rhs: n as f64 * sum_lambda_f,
            coefficients: self.coefficient_check(),
            warnings,
        })
    }
}

/// One-shot version of [`CorrelationContext::correlate`].
pub fn correlate(
    f: &CubeVector,
    table: &VonMangoldtTable,
    lt: &LambdaTildeTable,
    k: f64,
) -> Result<CorrelationReport> {
    CorrelationContext::new(table.clone(), lt.clone())?.correlate(f, "", k)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowLevelMassReport {
    pub n: u32,
    pub n0: u32,
    /// `Σ_{1≤|S|≤n0, S≠{0}} Λ̂(S)²`
    pub mass: f64,
    /// `per_level[k]` for `k = 0..=n0`; level 0 is always 0.
    pub per_level: Vec<f64>,
    /// `(mask, Λ̂(mask))` of largest magnitude within the index set.
    pub largest: Option<(usize, f64)>,
}

/// Spectral mass of `Λ` on levels `1..=n0`, with the parity coefficient
/// `S = {0}` excluded.
pub fn low_level_mass(lhat: &Spectrum, n0: u32) -> Result<LowLevelMassReport> {
    let n = lhat.n();
    if n0 > n {
        return Err(Error::OutOfRange { what: "n0", value: n0 as u64, limit: n as u64 });
    }
    let mut per_level = vec![0.0; n0 as usize + 1];
    let mut largest: Option<(usize, f64)> = None;
    for (mask, &c) in lhat.coeffs().iter().enumerate().skip(2) {
        let level = (mask as u64).count_ones();
        if level > n0 {
            continue;
        }
        per_level[level as usize] += c * c;
        if largest.is_none_or(|(_, best)| c.abs() > best.abs()) {
            largest = Some((mask, c));
        }
    }
    Ok(LowLevelMassReport { n, n0, mass: per_level.iter().sum(), per_level, largest })
}

/// A quantity tracked across dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    LowLevelMass { n0: u32 },
    TheoremRatio(ZooEntry),
    /// `2^{-n/2} ‖Λ̃‖₂ / n`
    L2Ratio,
    /// Largest pair-correlation ratio over `j ≠ k`.
    PairCorrelationMax,
}

impl Metric {
    pub fn label(&self) -> String {
        match self {
            Metric::LowLevelMass { n0 } => alloc::format!("low_level_mass(n0={n0})"),
            Metric::TheoremRatio(e) => alloc::format!("theorem_ratio({e})"),
            Metric::L2Ratio => "l2_ratio".into(),
            Metric::PairCorrelationMax => "pair_correlation_max".into(),
        }
    }

    /// Evaluates the metric at dimension `n`.
    pub fn evaluate(&self, n: u32, config: &SieveConfig) -> Result<f64> {
        let table = sieve_von_mangoldt(n, config)?;
        match self {
            Metric::LowLevelMass { n0 } => Ok(low_level_mass(&wht_forward(table.cube())?, *n0)?.mass),
            Metric::TheoremRatio(entry) => {
                let f = materialize_with(&entry.at(n), &config.limits)?;
                let mean = f.mean();
                if mean == 0.0 {
                    return Err(Error::Degenerate);
                }
                let sum: f64 = table.values().iter().zip(f.values()).map(|(a, b)| a * b).sum();
                Ok(sum / (f.len() as f64 * mean))
            }
            Metric::L2Ratio => Ok(lambda_tilde_moments(&build_lambda_tilde(&table)?).l2_ratio),
            Metric::PairCorrelationMax => {
                max_pair_correlation(&table).map(|pc| pc.ratio).ok_or(Error::OutOfRange {
                    what: "n",
                    value: n as u64,
                    limit: 2,
                })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    Flat,
    NonIncreasing,
    NonDecreasing,
    Mixed,
}

impl Trend {
    pub fn label(self) -> &'static str {
        match self {
            Trend::Flat => "flat",
            Trend::NonIncreasing => "non-increasing",
            Trend::NonDecreasing => "non-decreasing",
            Trend::Mixed => "mixed",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrendTable {
    pub label: String,
    /// `(n, value)` in the order evaluated.
    pub rows: Vec<(u32, f64)>,
    pub trend: Trend,
}

impl TrendTable {
    pub fn from_rows(label: impl Into<String>, rows: Vec<(u32, f64)>) -> Self {
        let trend = classify(&rows);
        TrendTable { label: label.into(), rows, trend }
    }

    /// Every step satisfies `value[i+1] ≤ (1 + slack)·value[i]`.
    pub fn non_increasing_within(&self, slack: f64) -> bool {
        self.rows.windows(2).all(|w| w[1].1 <= (1.0 + slack) * w[0].1)
    }
}

fn classify(rows: &[(u32, f64)]) -> Trend {
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
    let steps = || rows.windows(2).map(|w| (w[0].1, w[1].1));
    if steps().all(|(a, b)| close(a, b)) {
        Trend::Flat
    } else if steps().all(|(a, b)| b <= a || close(a, b)) {
        Trend::NonIncreasing
    } else if steps().all(|(a, b)| b >= a || close(a, b)) {
        Trend::NonDecreasing
    } else {
        Trend::Mixed
    }
}

pub fn trend_table(metric: &Metric, ns: &[u32], config: &SieveConfig) -> Result<TrendTable> {
    let rows = ns
        .iter()
        .map(|&n| Ok((n, metric.evaluate(n, config)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(TrendTable::from_rows(metric.label(), rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monotone::{materialize, Family};

    fn ln(x: f64) -> f64 {
        libm::log(x)
    }

    fn ctx(n: u32) -> CorrelationContext {
        CorrelationContext::build(n, &SieveConfig::default()).unwrap()
    }

    #[test]
    fn dictator_n3_hand_values() {
        let c = ctx(3);
        let f = materialize(&ZooEntry::new(Family::Dictator(0)).odd().at(3)).unwrap();
        let r = c.correlate(&f, "dictator:j=0/odd", DEFAULT_K).unwrap();
        let sum = ln(3.0) + ln(5.0) + ln(7.0);
        assert!((r.sum_lambda_f - sum).abs() < 1e-12);
        assert!((r.sum_lambda_f - 4.6539).abs() < 1e-4);
        assert!((r.theorem_ratio - sum / 4.0).abs() < 1e-12);
        assert!((r.theorem_ratio - 1.1635).abs() < 1e-4);
        assert!((r.ineq32_lhs - 6.5999).abs() < 1e-4);
        assert!((r.ineq32_rhs - 3.0 * sum).abs() < 1e-12);
        assert!((r.ineq32_rhs - 13.9616).abs() < 1e-3);
        assert!(r.ineq32_holds(0.0));
        assert!(r.warnings.is_empty());
        assert!(r.decomposition_holds(1e-12));
    }

    #[test]
    fn constant_function() {
        let c = ctx(6);
        let one = CubeVector::new(6, vec![1.0; 64]).unwrap();
        let r = c.correlate_with(&one, "const", DEFAULT_K, None).unwrap();
        assert_eq!((r.low_term, r.high_term), (0.0, 0.0));
        assert!((r.pairing_tilde - c.moments().mean).abs() < 1e-12);
        assert!(r.warnings.is_empty());

        let checked = c.correlate(&one, "const", DEFAULT_K).unwrap();
        assert_eq!(checked.warnings, vec![Warning::NotOddSupported { index: 0 }]);
    }

    #[test]
    fn degenerate_and_mismatch() {
        let c = ctx(4);
        let zero = CubeVector::new(4, vec![0.0; 16]).unwrap();
        assert_eq!(c.correlate(&zero, "zero", 4.0), Err(Error::Degenerate));
        let small = CubeVector::new(3, vec![1.0; 8]).unwrap();
        assert!(matches!(c.correlate(&small, "x", 4.0), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn warnings_for_bad_inputs() {
        let c = ctx(2);
        let anti = CubeVector::new(2, vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        let r = c.correlate(&anti, "anti", 1.0).unwrap();
        assert_eq!(r.warnings, vec![Warning::NotMonotone { lower: 1, upper: 3 }]);
        let fuzzy = CubeVector::new(2, vec![0.0, 0.5, 0.0, 1.0]).unwrap();
        let r = c.correlate(&fuzzy, "fuzzy", 1.0).unwrap();
        assert_eq!(r.warnings, vec![Warning::NotBoolean { index: 1 }]);
    }

    #[test]
    fn low_level_mass_edges() {
        let c = ctx(8);
        let lhat = wht_forward(c.table().cube()).unwrap();
        assert_eq!(low_level_mass(&lhat, 0).unwrap().mass, 0.0);
        assert!(low_level_mass(&lhat, 9).is_err());
        let one = wht_forward(&CubeVector::new(8, vec![1.0; 256]).unwrap()).unwrap();
        let r = low_level_mass(&one, 3).unwrap();
        assert_eq!(r.mass, 0.0);
        assert_eq!(r.per_level.len(), 4);
    }

    #[test]
    fn trend_classification() {
        let flat = TrendTable::from_rows("c", vec![(1, 2.0), (2, 2.0), (3, 2.0)]);
        assert_eq!(flat.trend, Trend::Flat);
        let down = TrendTable::from_rows("d", vec![(1, 3.0), (2, 2.0), (3, 2.0)]);
        assert_eq!(down.trend, Trend::NonIncreasing);
        let up = TrendTable::from_rows("u", vec![(1, 1.0), (2, 2.0)]);
        assert_eq!(up.trend, Trend::NonDecreasing);
        let mixed = TrendTable::from_rows("m", vec![(1, 1.0), (2, 2.0), (3, 1.5)]);
        assert_eq!(mixed.trend, Trend::Mixed);
        assert!(!mixed.non_increasing_within(0.0));
        assert!(TrendTable::from_rows("s", vec![(1, 1.0), (2, 1.1)]).non_increasing_within(0.2));
    }

    #[test]
    fn trend_rows_nonnegative() {
        let t = trend_table(&Metric::LowLevelMass { n0: 2 }, &[12, 14, 16], &SieveConfig::default())
            .unwrap();
        assert_eq!(t.rows.len(), 3);
        assert!(t.rows.iter().all(|(_, v)| v.is_finite() && *v >= 0.0));
        assert_eq!(t.label, "low_level_mass(n0=2)");
    }
}
