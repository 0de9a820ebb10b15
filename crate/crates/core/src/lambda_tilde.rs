//! The smoothed distribution `Λ̃`: each prime power `x` spreads its weight
//! `Λ(x)` onto every point obtained by clearing one set bit of `x`.

use alloc::vec::Vec;

use crate::arithmetic::VonMangoldtTable;
use crate::cube::{CubeVector, Spectrum};
use crate::{Error, Result};

/// `Λ̃(y) = Σ_{j : y_j = 0} Λ(y + 2^j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaTildeTable {
    cube: CubeVector,
}

impl LambdaTildeTable {
    pub fn n(&self) -> u32 {
        self.cube.n()
    }

    pub fn cube(&self) -> &CubeVector {
        &self.cube
    }

    pub fn values(&self) -> &[f64] {
        self.cube.values()
    }
}

/// Builds `Λ̃` in `O(N·n)`. Setting a clear bit of `y < 2^n` never leaves
/// the cube, so every term is in range.
pub fn build_lambda_tilde(table: &VonMangoldtTable) -> Result<LambdaTildeTable> {
    let n = table.n();
    let lambda = table.values();
    let values: Vec<f64> = (0..lambda.len())
        .map(|y| {
            (0..n)
                .filter(|j| y & (1 << j) == 0)
                .map(|j| lambda[y | (1 << j)])
                .sum()
        })
        .collect();
    Ok(LambdaTildeTable { cube: CubeVector::new(n, values)? })
}

/// `Σ_x Λ(x)·popcount(x)`: the total mass of `Λ̃`, one Dirac per set bit.
pub fn popcount_weighted_mass(table: &VonMangoldtTable) -> f64 {
    table
        .values()
        .iter()
        .enumerate()
        .map(|(x, v)| v * (x as u64).count_ones() as f64)
        .sum()
}

/// Spectrum of `Λ̃` computed coefficient-wise from the spectrum of `Λ`:
///
/// ```text
/// Λ̃̂(S) = (n/2 − |S|) Λ̂(S) + ½ Σ_{j∈S} Λ̂(S∖{j}) − ½ Σ_{j∉S} Λ̂(S∪{j})
/// ```
///
/// Clearing bit `j` of `x` flips `ε_j` from −1 to +1, so
/// `Σ_{j: x_j=1} w_S(x∖{j}) = w_S(x)·(#{j∉S: x_j=1} − #{j∈S: x_j=1})`;
/// expanding `x_j = (1 − ε_j)/2` and absorbing each `ε_j` into `w_S`
/// gives the three terms.
pub fn lambda_tilde_spectrum_via_identity(lhat: &Spectrum) -> Result<Spectrum> {
    let n = lhat.n();
    let c = lhat.coeffs();
    let half_n = n as f64 / 2.0;
    let coeffs: Vec<f64> = (0..c.len())
        .map(|s| {
            let level = (s as u64).count_ones() as f64;
            let mut removed = 0.0;
            let mut added = 0.0;
            for j in 0..n {
                let bit = 1usize << j;
                if s & bit != 0 {
                    removed += c[s ^ bit];
                } else {
                    added += c[s | bit];
                }
            }
            (half_n - level) * c[s] + 0.5 * removed - 0.5 * added
        })
        .collect();
    Spectrum::new(n, coeffs)
}

/// Errors unless both dimensions agree.
pub(crate) fn same_dimension(a: u32, b: u32) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { left: a, right: b });
    }
    Ok(())
}

/// Normalized size statistics of `Λ̃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaTildeMoments {
    pub n: u32,
    /// `E[Λ̃]`
    pub mean: f64,
    /// `2^{-n} ‖Λ̃‖₁`
    pub l1: f64,
    /// `(2^{-n} Σ Λ̃²)^{1/2}`
    pub l2: f64,
    /// `l1 / n`
    pub l1_ratio: f64,
    /// `l2 / n`
    pub l2_ratio: f64,
}

pub fn lambda_tilde_moments(lt: &LambdaTildeTable) -> LambdaTildeMoments {
    let values = lt.values();
    let len = values.len() as f64;
    let n = lt.n();
    let mean = values.iter().sum::<f64>() / len;
    let l1 = values.iter().map(|v| v.abs()).sum::<f64>() / len;
    let l2 = libm::sqrt(values.iter().map(|v| v * v).sum::<f64>() / len);
    LambdaTildeMoments {
        n,
        mean,
        l1,
        l2,
        l1_ratio: l1 / n as f64,
        l2_ratio: l2 / n as f64,
    }
}

/// Candidate closed forms for `E[Λ̃]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeanConstant {
    /// `(n+1)/2`: odd primes always carry bit 0, the other bits are fair.
    NPlusOneHalf,
    /// `(n−1)/2`
    NMinusOneHalf,
}

impl MeanConstant {
    pub fn label(self) -> &'static str {
        match self {
            MeanConstant::NPlusOneHalf => "(n+1)/2",
            MeanConstant::NMinusOneHalf => "(n-1)/2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanResolution {
    pub n: u32,
    pub mean: f64,
    /// `|E[Λ̃] − (n+1)/2|`
    pub residual_plus: f64,
    /// `|E[Λ̃] − (n−1)/2|`
    pub residual_minus: f64,
    pub supported: MeanConstant,
}

impl MeanResolution {
    pub fn smaller_residual(&self) -> f64 {
        self.residual_plus.min(self.residual_minus)
    }
}

/// Which of `(n±1)/2` the measured mean sits closer to.
pub fn resolve_mean_constant(moments: &LambdaTildeMoments) -> MeanResolution {
    let n = moments.n as f64;
    let residual_plus = (moments.mean - (n + 1.0) / 2.0).abs();
    let residual_minus = (moments.mean - (n - 1.0) / 2.0).abs();
    let supported = if residual_plus <= residual_minus {
        MeanConstant::NPlusOneHalf
    } else {
        MeanConstant::NMinusOneHalf
    };
    MeanResolution { n: moments.n, mean: moments.mean, residual_plus, residual_minus, supported }
}
