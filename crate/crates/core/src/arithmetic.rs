//! The von Mangoldt function on `[0, 2^n)` and its shifted pair correlations.

use alloc::vec;
use alloc::vec::Vec;

use crate::cube::{CubeVector, Limits};
use crate::{Error, Result};

pub const DEFAULT_SEGMENT_SIZE: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    /// Entries per sieve segment.
    pub segment_size: usize,
    pub limits: Limits,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig { segment_size: DEFAULT_SEGMENT_SIZE, limits: Limits::default() }
    }
}

/// `Λ(x) = ln p` if `x = p^k` for a prime `p` and `k ≥ 1`, else 0, for
/// `0 ≤ x < 2^n`. `Λ(0) = Λ(1) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct VonMangoldtTable {
    cube: CubeVector,
}

impl VonMangoldtTable {
    /// Wraps values loaded from elsewhere (e.g. a cache file). Only the
    /// layout is checked, not the arithmetic.
    pub fn from_cube(cube: CubeVector) -> Self {
        VonMangoldtTable { cube }
    }

    pub fn n(&self) -> u32 {
        self.cube.n()
    }

    pub fn cube(&self) -> &CubeVector {
        &self.cube
    }

    pub fn values(&self) -> &[f64] {
        self.cube.values()
    }

    pub fn into_cube(self) -> CubeVector {
        self.cube
    }
}

fn isqrt(v: u64) -> u64 {
    let mut r = libm::sqrt(v as f64) as u64;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

/// Primes `≤ limit` by a plain sieve of Eratosthenes.
fn small_primes(limit: usize) -> Vec<usize> {
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for p in 2..=limit {
        if composite[p] {
            continue;
        }
        primes.push(p);
        let mut m = p * p;
        while m <= limit {
            composite[m] = true;
            m += p;
        }
    }
    primes
}

/// Exact `Λ` on `[0, 2^n)` via a segmented sieve of Eratosthenes.
///
/// Base primes up to `√(2^n)` are found first and their higher powers
/// written directly; every other prime is discovered segment by segment.
pub fn sieve_von_mangoldt(n: u32, config: &SieveConfig) -> Result<VonMangoldtTable> {
    config.limits.check(n)?;
    if config.segment_size == 0 {
        return Err(Error::OutOfRange { what: "segment_size", value: 0, limit: 1 });
    }
    let len = 1usize << n;
    let base = small_primes(isqrt(len as u64 - 1) as usize);
    let mut values = vec![0.0; len];

    let mut composite = vec![false; config.segment_size.min(len)];
    let mut start = 0;
    while start < len {
        let end = (start + config.segment_size).min(len);
        let flags = &mut composite[..end - start];
        flags.fill(false);
        for &p in &base {
            if p * p >= end {
                break;
            }
            let mut m = (start.div_ceil(p) * p).max(p * p);
            while m < end {
                flags[m - start] = true;
                m += p;
            }
        }
        for (offset, &is_composite) in flags.iter().enumerate() {
            let x = start + offset;
            if x >= 2 && !is_composite {
                values[x] = libm::log(x as f64);
            }
        }
        start = end;
    }

    for &p in &base {
        let ln_p = libm::log(p as f64);
        let mut power = p * p;
        while power < len {
            values[power] = ln_p;
            power = match power.checked_mul(p) {
                Some(v) => v,
                None => break,
            };
        }
    }

    Ok(VonMangoldtTable { cube: CubeVector::new(n, values)? })
}

/// Chebyshev `ψ(u) = Σ_{x ≤ u} Λ(x)`, for `u < 2^n`.
pub fn chebyshev_psi(table: &VonMangoldtTable, u: u64) -> Result<f64> {
    let len = table.values().len() as u64;
    if u >= len {
        return Err(Error::OutOfRange { what: "u", value: u, limit: len - 1 });
    }
    Ok(table.values()[..=u as usize].iter().sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairCorrelation {
    pub j: u32,
    pub k: u32,
    /// `d = 2^k − 2^j`
    pub shift: i64,
    /// `Σ Λ(x) Λ(x + d)` over `x` with both arguments in `[1, 2^n)`.
    pub sum: f64,
    /// `sum / 2^n`
    pub ratio: f64,
}

/// `Σ_x Λ(x) Λ(x + 2^k − 2^j)`, both arguments clipped to `[1, 2^n)`.
pub fn pair_correlation(table: &VonMangoldtTable, j: u32, k: u32) -> Result<PairCorrelation> {
    let n = table.n();
    for (what, bit) in [("j", j), ("k", k)] {
        if bit >= n {
            return Err(Error::OutOfRange { what, value: bit as u64, limit: n as u64 - 1 });
        }
    }
    let values = table.values();
    let len = values.len();
    let shift = (1i64 << k) - (1i64 << j);
    let d = shift.unsigned_abs() as usize;
    let (lo, hi) = if shift >= 0 { (&values[1..len - d], &values[1 + d..]) } else {
        (&values[1 + d..], &values[1..len - d])
    };
    let sum: f64 = lo.iter().zip(hi).map(|(a, b)| a * b).sum();
    Ok(PairCorrelation { j, k, shift, sum, ratio: sum / len as f64 })
}

/// Largest `pair_correlation` ratio over `j ≠ k`, or `None` when `n < 2`.
///
/// The shifts `d` and `−d` give the same sum after reindexing, so only
/// `j < k` is evaluated.
pub fn max_pair_correlation(table: &VonMangoldtTable) -> Option<PairCorrelation> {
    let n = table.n();
    let mut best: Option<PairCorrelation> = None;
    for k in 1..n {
        for j in 0..k {
            let pc = pair_correlation(table, j, k).expect("indices below n");
            if best.is_none_or(|b| pc.ratio > b.ratio) {
                best = Some(pc);
            }
        }
    }
    best
}
