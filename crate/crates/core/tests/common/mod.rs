//! Independent reference implementations used as test oracles. None of
//! these share code paths with the library routines they check.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `f̂(S) = 2^{-n} Σ_x f(x) (−1)^{popcount(x ∧ S)}` by the O(N²) double loop.
pub fn direct_walsh(values: &[f64]) -> Vec<f64> {
    let len = values.len();
    (0..len)
        .map(|s| {
            let sum: f64 = values
                .iter()
                .enumerate()
                .map(|(x, v)| if (x & s).count_ones() % 2 == 0 { *v } else { -*v })
                .sum();
            sum / len as f64
        })
        .collect()
}

/// `Λ(x)` by trial division.
pub fn von_mangoldt_trial(x: u64) -> f64 {
    if x < 2 {
        return 0.0;
    }
    let mut p = 2;
    while p * p <= x {
        if x.is_multiple_of(p) {
            let mut y = x;
            while y.is_multiple_of(p) {
                y /= p;
            }
            return if y == 1 { (p as f64).ln() } else { 0.0 };
        }
        p += 1;
    }
    (x as f64).ln()
}

/// Primes below `limit`, odd-only sieve.
pub fn primes_below(limit: u64) -> Vec<u64> {
    let half = (limit / 2) as usize;
    let mut odd_composite = vec![false; half];
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) < limit as usize {
        if !odd_composite[i] {
            let p = 2 * i + 1;
            let mut m = p * p;
            while m < limit as usize {
                odd_composite[m / 2] = true;
                m += 2 * p;
            }
        }
        i += 1;
    }
    let mut primes = vec![2];
    primes.extend((1..half).filter(|&i| !odd_composite[i]).map(|i| 2 * i as u64 + 1));
    primes.retain(|&p| p < limit);
    primes
}

/// `ψ(u) = Σ_{p^k ≤ u} ln p` from a prime list.
pub fn psi_from_primes(u: u64) -> f64 {
    primes_below(u + 1)
        .into_iter()
        .map(|p| {
            let mut k = 0;
            let mut pk = p;
            while pk <= u {
                k += 1;
                pk *= p;
            }
            k as f64 * (p as f64).ln()
        })
        .sum()
}

pub fn random_vector(n: u32, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..1usize << n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
