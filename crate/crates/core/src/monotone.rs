//! Monotone Boolean function families, monotonicity verification, and the
//! influence-driven spectral tail bound for monotone functions.
//!
//! Under `w_S(x) = Π_{j∈S}(1 − 2x_j)` a monotone 0/1 function has
//! `f̂({j}) = −½·Inf_j(f) ≤ 0`, and
//!
//! ```text
//! Σ_S |S| f̂(S)² = ¼ Σ_j Inf_j(f) = ½ Σ_j |f̂({j})| ≤ ¼ √n.
//! ```
//!
//! Markov's inequality at level `K√n` then gives
//! `Σ_{|S| > K√n} f̂(S)² ≤ 1/(4K)`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cube::{level_profile, CubeVector, Limits, Spectrum};
use crate::{Error, Result};

/// Default number of random edges for sampled monotonicity checks.
pub const DEFAULT_SAMPLED_EDGES: u64 = 1_000_000;
/// Largest `n` checked exhaustively by [`CheckMode::default_for`].
pub const EXHAUSTIVE_MAX_N: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `f(x) = x_j`
    Dictator(u32),
    AndAll,
    OrAll,
    /// Strict majority: `popcount(x) ≥ ⌊n/2⌋ + 1`.
    Majority,
    /// `popcount(x) ≥ t`
    Threshold(u32),
    /// OR over `⌊n/w⌋` disjoint consecutive blocks of the AND of `w` bits.
    Tribes { width: u32 },
    /// Ternary majority tree over the first `3^h ≤ n` variables.
    RecursiveMajority3,
    /// OR of `terms` conjunctions, each over `width` distinct variables drawn
    /// by ChaCha8 seeded with `seed`.
    RandomDnf { terms: u32, width: u32, seed: u64 },
}

/// A family plus whether it is restricted to the odd slice `[x_0 = 1]`.
/// This is the unit the CLI parses; the dimension is supplied separately.
///
/// String form: `name[:key=value,...][/odd]`, e.g. `tribes:w=4`,
/// `dnf:m=32,w=6,seed=7/odd`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ZooEntry {
    pub family: Family,
    pub odd_slice: bool,
}

impl ZooEntry {
    pub fn new(family: Family) -> Self {
        ZooEntry { family, odd_slice: false }
    }

    pub fn odd(self) -> Self {
        ZooEntry { odd_slice: true, ..self }
    }

    pub fn at(self, n: u32) -> MonotoneFunctionSpec {
        MonotoneFunctionSpec { family: self.family, n, odd_slice: self.odd_slice }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Dictator(j) => write!(f, "dictator:j={j}"),
            Family::AndAll => f.write_str("and"),
            Family::OrAll => f.write_str("or"),
            Family::Majority => f.write_str("majority"),
            Family::Threshold(t) => write!(f, "threshold:t={t}"),
            Family::Tribes { width } => write!(f, "tribes:w={width}"),
            Family::RecursiveMajority3 => f.write_str("recmaj3"),
            Family::RandomDnf { terms, width, seed } => {
                write!(f, "dnf:m={terms},w={width},seed={seed}")
            }
        }
    }
}

impl fmt::Display for ZooEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family)?;
        if self.odd_slice {
            f.write_str("/odd")?;
        }
        Ok(())
    }
}

struct Params<'a> {
    source: &'a str,
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> Params<'a> {
    fn parse(source: &'a str, body: Option<&'a str>) -> Result<Self> {
        let mut pairs = Vec::new();
        for item in body.unwrap_or("").split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidSpec(format!("{source}: expected key=value, got {item:?}")))?;
            pairs.push((k.trim(), v.trim()));
        }
        Ok(Params { source, pairs })
    }

    fn get<T: FromStr>(&self, keys: &[&str]) -> Result<T> {
        let (key, raw) = self
            .pairs
            .iter()
            .find(|(k, _)| keys.contains(k))
            .ok_or_else(|| Error::InvalidSpec(format!("{}: missing parameter {}", self.source, keys[0])))?;
        raw.parse()
            .map_err(|_| Error::InvalidSpec(format!("{}: bad value {raw:?} for {key}", self.source)))
    }

    fn only(&self, allowed: &[&str]) -> Result<()> {
        match self.pairs.iter().find(|(k, _)| !allowed.contains(k)) {
            Some((k, _)) => Err(Error::InvalidSpec(format!("{}: unknown parameter {k}", self.source))),
            None => Ok(()),
        }
    }
}

impl FromStr for ZooEntry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (body, odd_slice) = match s.strip_suffix("/odd") {
            Some(rest) => (rest, true),
            None => (s, false),
        };
        let (name, params) = match body.split_once(':') {
            Some((name, rest)) => (name.trim(), Some(rest)),
            None => (body, None),
        };
        let p = Params::parse(s, params)?;
        let family = match name {
            "dictator" => {
                p.only(&["j"])?;
                Family::Dictator(p.get(&["j"])?)
            }
            "and" | "and_all" => {
                p.only(&[])?;
                Family::AndAll
            }
            "or" | "or_all" => {
                p.only(&[])?;
                Family::OrAll
            }
            "majority" | "maj" => {
                p.only(&[])?;
                Family::Majority
            }
            "threshold" => {
                p.only(&["t"])?;
                Family::Threshold(p.get(&["t"])?)
            }
            "tribes" => {
                p.only(&["w", "width"])?;
                Family::Tribes { width: p.get(&["w", "width"])? }
            }
            "recmaj3" | "recursive_majority3" => {
                p.only(&[])?;
                Family::RecursiveMajority3
            }
            "dnf" | "random_monotone_dnf" => {
                p.only(&["m", "terms", "w", "width", "seed"])?;
                Family::RandomDnf {
                    terms: p.get(&["m", "terms"])?,
                    width: p.get(&["w", "width"])?,
                    seed: p.get(&["seed"])?,
                }
            }
            other => return Err(Error::InvalidSpec(format!("unknown family {other:?} in {s:?}"))),
        };
        Ok(ZooEntry { family, odd_slice })
    }
}

/// The families exercised by the verification suites and the default report.
pub fn default_zoo() -> Vec<ZooEntry> {
    [
        Family::Dictator(0),
        Family::Dictator(1),
        Family::AndAll,
        Family::OrAll,
        Family::Majority,
        Family::Threshold(4),
        Family::Tribes { width: 4 },
        Family::RecursiveMajority3,
        Family::RandomDnf { terms: 8, width: 4, seed: 42 },
        Family::RandomDnf { terms: 32, width: 6, seed: 7 },
    ]
    .into_iter()
    .map(ZooEntry::new)
    .collect()
}

/// A concrete member of a family on `{0,1}^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MonotoneFunctionSpec {
    pub family: Family,
    pub n: u32,
    /// Multiply by `x_0`, restricting support to odd integers.
    pub odd_slice: bool,
}

impl MonotoneFunctionSpec {
    pub fn entry(&self) -> ZooEntry {
        ZooEntry { family: self.family, odd_slice: self.odd_slice }
    }

    pub fn label(&self) -> String {
        self.entry().to_string()
    }
}

fn invalid(spec: &MonotoneFunctionSpec, why: &str) -> Error {
    Error::InvalidSpec(format!("{} at n={}: {why}", spec.label(), spec.n))
}

fn majority3_tree(x: usize, leaves: usize) -> bool {
    let mut level = [false; 27];
    for (i, slot) in level.iter_mut().enumerate().take(leaves) {
        *slot = x >> i & 1 == 1;
    }
    let mut width = leaves;
    while width > 1 {
        width /= 3;
        for i in 0..width {
            let votes = level[3 * i] as u8 + level[3 * i + 1] as u8 + level[3 * i + 2] as u8;
            level[i] = votes >= 2;
        }
    }
    level[0]
}

/// Term masks for a random monotone DNF; reproducible from the seed.
pub fn dnf_terms(n: u32, terms: u32, width: u32, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..terms)
        .map(|_| {
            rand::seq::index::sample(&mut rng, n as usize, width as usize)
                .into_iter()
                .fold(0usize, |mask, j| mask | 1 << j)
        })
        .collect()
}

pub fn materialize(spec: &MonotoneFunctionSpec) -> Result<CubeVector> {
    materialize_with(spec, &Limits::default())
}

/// Dense 0/1 truth table of `spec`.
pub fn materialize_with(spec: &MonotoneFunctionSpec, limits: &Limits) -> Result<CubeVector> {
    let n = spec.n;
    limits.check(n)?;
    let full = (1usize << n) - 1;
    let rule: Box<dyn Fn(usize) -> bool> = match spec.family {
        Family::Dictator(j) => {
            if j >= n {
                return Err(invalid(spec, "dictator index must be below n"));
            }
            Box::new(move |x| x >> j & 1 == 1)
        }
        Family::AndAll => Box::new(move |x| x == full),
        Family::OrAll => Box::new(|x| x != 0),
        Family::Majority => {
            let t = n / 2 + 1;
            Box::new(move |x| (x as u64).count_ones() >= t)
        }
        Family::Threshold(t) => {
            if t > n {
                return Err(invalid(spec, "threshold must be at most n"));
            }
            Box::new(move |x| (x as u64).count_ones() >= t)
        }
        Family::Tribes { width } => {
            if width == 0 || width > n {
                return Err(invalid(spec, "tribe width must be in 1..=n"));
            }
            let block = (1usize << width) - 1;
            let blocks: Vec<usize> = (0..n / width).map(|b| block << (b * width)).collect();
            Box::new(move |x| blocks.iter().any(|&m| m & !x == 0))
        }
        Family::RecursiveMajority3 => {
            if n < 3 {
                return Err(invalid(spec, "needs n >= 3"));
            }
            let mut leaves = 3usize;
            while leaves * 3 <= n as usize {
                leaves *= 3;
            }
            Box::new(move |x| majority3_tree(x, leaves))
        }
        Family::RandomDnf { terms, width, seed } => {
            if terms == 0 {
                return Err(invalid(spec, "needs at least one term"));
            }
            if width == 0 || width > n {
                return Err(invalid(spec, "term width must be in 1..=n"));
            }
            let masks = dnf_terms(n, terms, width, seed);
            Box::new(move |x| masks.iter().any(|&m| m & !x == 0))
        }
    };
    let odd = spec.odd_slice;
    CubeVector::from_fn(n, limits, |x| {
        if odd && x & 1 == 0 {
            0.0
        } else {
            rule(x) as u8 as f64
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    /// Every edge `x∖{j} → x`; equivalent to full monotonicity.
    Exhaustive,
    /// `count` uniformly random edges drawn by ChaCha8 from `seed`.
    Sampled { count: u64, seed: u64 },
}

impl CheckMode {
    /// Exhaustive up to `n = 16`, a million sampled edges above.
    pub fn default_for(n: u32) -> Self {
        if n <= EXHAUSTIVE_MAX_N {
            CheckMode::Exhaustive
        } else {
            CheckMode::Sampled { count: DEFAULT_SAMPLED_EDGES, seed: 0 }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Monotone,
    /// `f(lower) > f(upper)` where `upper = lower + 2^bit`.
    Violation { lower: usize, upper: usize, bit: u32 },
}

impl Verdict {
    pub fn is_monotone(&self) -> bool {
        matches!(self, Verdict::Monotone)
    }
}

pub fn monotonicity_check(f: &CubeVector, mode: CheckMode) -> Result<Verdict> {
    f.ensure_boolean()?;
    let v = f.values();
    let n = f.n();
    let edge = |upper: usize, bit: u32| -> Option<Verdict> {
        let lower = upper & !(1 << bit);
        (v[lower] > v[upper]).then_some(Verdict::Violation { lower, upper, bit })
    };
    match mode {
        CheckMode::Exhaustive => {
            for upper in 0..v.len() {
                for bit in (0..n).filter(|b| upper >> b & 1 == 1) {
                    if let Some(bad) = edge(upper, bit) {
                        return Ok(bad);
                    }
                }
            }
        }
        CheckMode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..count {
                let bit = rng.gen_range(0..n);
                let upper = rng.gen_range(0..v.len()) | 1 << bit;
                if let Some(bad) = edge(upper, bit) {
                    return Ok(bad);
                }
            }
        }
    }
    Ok(Verdict::Monotone)
}

/// Spectral tail of a monotone function above level `⌈K√n⌉`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailReport {
    pub k: f64,
    /// `⌈K√n⌉`
    pub cutoff: u32,
    /// `Σ_{|S| > cutoff} f̂(S)²`
    pub tail: f64,
    /// `1/(4K)`
    pub bound: f64,
    /// `Σ_S |S| f̂(S)²`
    pub total_influence_fw: f64,
    /// `Σ_j |f̂({j})|`
    pub degree1_sum: f64,
    pub energy: f64,
}

impl TailReport {
    pub fn within_bound(&self, slack: f64) -> bool {
        self.tail <= self.bound + slack
    }
}

fn degree_one(s: &Spectrum) -> impl Iterator<Item = f64> + '_ {
    (0..s.n()).map(move |j| s.coeff(1 << j))
}

pub fn tail_report(s: &Spectrum, k: f64) -> TailReport {
    let profile = level_profile(s);
    let cutoff = libm::ceil(k.max(0.0) * libm::sqrt(s.n() as f64)) as u32;
    let total_influence_fw =
        profile.mass.iter().enumerate().map(|(level, m)| level as f64 * m).sum();
    TailReport {
        k,
        cutoff,
        tail: profile.tail_above(cutoff),
        bound: 1.0 / (4.0 * k),
        total_influence_fw,
        degree1_sum: degree_one(s).map(f64::abs).sum(),
        energy: profile.total(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfluenceIdentity {
    /// `Σ_S |S| f̂(S)²`
    pub lhs: f64,
    /// `−½ Σ_j f̂({j})`, equal to `½ Σ_j |f̂({j})|` when every degree-one
    /// coefficient has the monotone sign.
    pub rhs: f64,
    /// `½ Σ_j |f̂({j})|`
    pub rhs_abs: f64,
    pub gap: f64,
    /// Largest `f̂({j})`; nonpositive for monotone `f`.
    pub max_degree1: f64,
}

impl InfluenceIdentity {
    pub fn holds(&self, tol: f64) -> bool {
        self.gap < tol
    }
}

/// Compares the Fourier total influence with the degree-one coefficients.
///
/// The signed right-hand side is used so that a flipped sign convention
/// (which leaves `|f̂({j})|` untouched) is caught.
pub fn influence_identity_check(s: &Spectrum) -> InfluenceIdentity {
    let lhs: f64 = s
        .coeffs()
        .iter()
        .enumerate()
        .map(|(mask, c)| (mask as u64).count_ones() as f64 * c * c)
        .sum();
    let rhs = -0.5 * degree_one(s).sum::<f64>();
    let rhs_abs = 0.5 * degree_one(s).map(f64::abs).sum::<f64>();
    let max_degree1 = degree_one(s).fold(f64::NEG_INFINITY, f64::max);
    InfluenceIdentity { lhs, rhs, rhs_abs, gap: (lhs - rhs).abs(), max_degree1 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::wht_forward;
    use alloc::vec;

    fn build(entry: &str, n: u32) -> CubeVector {
        materialize(&entry.parse::<ZooEntry>().unwrap().at(n)).unwrap()
    }

    #[test]
    fn small_truth_tables() {
        assert_eq!(build("majority", 3).values(), &[0., 0., 0., 1., 0., 1., 1., 1.]);
        assert_eq!(build("dictator:j=0", 2).values(), &[0., 1., 0., 1.]);
        assert_eq!(build("and", 2).values(), &[0., 0., 0., 1.]);
        assert_eq!(build("or", 2).values(), &[0., 1., 1., 1.]);
        assert_eq!(build("or/odd", 2).values(), &[0., 1., 0., 1.]);
        // strict majority on even n
        assert_eq!(build("majority", 2).values(), &[0., 0., 0., 1.]);
        assert_eq!(build("threshold:t=0", 1).values(), &[1., 1.]);
        // two tribes of width 2, bit 4 irrelevant
        let t = build("tribes:w=2", 5);
        assert_eq!(t.values()[0b00011], 1.0);
        assert_eq!(t.values()[0b01100], 1.0);
        assert_eq!(t.values()[0b10101], 0.0);
    }

    #[test]
    fn recursive_majority() {
        let f = build("recmaj3", 9);
        // blocks {0,1,2},{3,4,5},{6,7,8}; first two blocks won
        assert_eq!(f.values()[0b000_011_011], 1.0);
        assert_eq!(f.values()[0b001_001_011], 0.0);
        assert_eq!(f.values()[0b111_000_001], 0.0);
        // padding: n=4 uses variables 0..3 only
        let g = build("recmaj3", 4);
        assert_eq!(g.values()[0b1000], 0.0);
        assert_eq!(g.values()[0b0011], 1.0);
    }

    #[test]
    fn dnf_is_reproducible_and_monotone() {
        let a = build("dnf:m=8,w=4,seed=42", 12);
        let b = build("dnf:m=8,w=4,seed=42", 12);
        assert_eq!(a, b);
        assert_ne!(a, build("dnf:m=8,w=4,seed=43", 12));
        assert_eq!(monotonicity_check(&a, CheckMode::Exhaustive).unwrap(), Verdict::Monotone);
        for m in dnf_terms(12, 8, 4, 42) {
            assert_eq!(m.count_ones(), 4);
        }
    }

    #[test]
    fn parse_round_trip_and_errors() {
        for e in default_zoo() {
            assert_eq!(e.to_string().parse::<ZooEntry>().unwrap(), e);
            assert_eq!(e.odd().to_string().parse::<ZooEntry>().unwrap(), e.odd());
        }
        assert_eq!(
            "dnf:m=32,w=6,seed=7".parse::<ZooEntry>().unwrap().family,
            Family::RandomDnf { terms: 32, width: 6, seed: 7 }
        );
        for bad in ["", "parity", "tribes", "tribes:w=x", "and:x=1", "dictator:j"] {
            assert!(bad.parse::<ZooEntry>().is_err(), "{bad}");
        }
        let spec = ZooEntry::new(Family::Dictator(5)).at(3);
        assert!(matches!(materialize(&spec), Err(Error::InvalidSpec(_))));
        let spec = ZooEntry::new(Family::RecursiveMajority3).at(2);
        assert!(materialize(&spec).is_err());
        let spec = ZooEntry::new(Family::Tribes { width: 0 }).at(4);
        assert!(materialize(&spec).is_err());
    }

    #[test]
    fn monotonicity_verdicts() {
        assert!(monotonicity_check(&build("or", 10), CheckMode::Exhaustive).unwrap().is_monotone());
        let anti = CubeVector::new(1, vec![1.0, 0.0]).unwrap();
        assert_eq!(
            monotonicity_check(&anti, CheckMode::Exhaustive).unwrap(),
            Verdict::Violation { lower: 0, upper: 1, bit: 0 }
        );
        let sampled = CheckMode::Sampled { count: 1000, seed: 1 };
        assert!(!monotonicity_check(&anti, sampled).unwrap().is_monotone());
        let fuzzy = CubeVector::new(1, vec![0.5, 1.0]).unwrap();
        assert!(matches!(
            monotonicity_check(&fuzzy, CheckMode::Exhaustive),
            Err(Error::NonBoolean { index: 0, .. })
        ));
    }

    #[test]
    fn tail_examples() {
        let dict = wht_forward(&build("dictator:j=0", 9)).unwrap();
        assert_eq!(tail_report(&dict, 1.0).tail, 0.0);

        let maj = wht_forward(&build("majority", 3)).unwrap();
        // K√3 ≤ 1 for K = 0.5, so the cutoff is level 1
        let r = tail_report(&maj, 0.5);
        assert_eq!(r.cutoff, 1);
        assert!((r.tail - 1.0 / 16.0).abs() < 1e-15);

        let tribes = wht_forward(&build("tribes:w=4", 16)).unwrap();
        let r = tail_report(&tribes, 2.0);
        assert_eq!(r.bound, 0.125);
        assert!(r.within_bound(1e-10));
    }

    #[test]
    fn influence_examples() {
        let dict = influence_identity_check(&wht_forward(&build("dictator:j=0", 2)).unwrap());
        assert!((dict.lhs - 0.25).abs() < 1e-15 && (dict.rhs - 0.25).abs() < 1e-15);

        let maj = influence_identity_check(&wht_forward(&build("majority", 3)).unwrap());
        assert!((maj.lhs - 0.375).abs() < 1e-15);
        assert!((maj.rhs - 0.375).abs() < 1e-15);
        assert!(maj.max_degree1 <= 0.0);
    }
}
