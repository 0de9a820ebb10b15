//! Dense functions on `{0,1}^n` and the fast Walsh-Hadamard transform.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Largest dimension any configuration may reach (2 GiB per vector).
pub const HARD_MAX_N: u32 = 28;
/// Default memory cap: `n = 26`, 512 MiB per `f64` vector.
pub const DEFAULT_MAX_N: u32 = 26;

/// Memory cap on the cube dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    max_n: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_n: DEFAULT_MAX_N }
    }
}

impl Limits {
    /// A cap of `max_n`. Anything above the default needs `acknowledged`.
    pub fn new(max_n: u32, acknowledged: bool) -> Result<Self> {
        if max_n == 0 || max_n > HARD_MAX_N {
            return Err(Error::InvalidDimension(max_n));
        }
        if max_n > DEFAULT_MAX_N && !acknowledged {
            return Err(Error::Unacknowledged { max_n });
        }
        Ok(Limits { max_n })
    }

    /// The largest `n` whose `f64` vector fits in `bytes`.
    pub fn from_bytes(bytes: u64, acknowledged: bool) -> Result<Self> {
        let doubles = bytes / 8;
        if doubles < 2 {
            return Err(Error::InvalidDimension(0));
        }
        let max_n = 63 - doubles.leading_zeros();
        Self::new(max_n.min(HARD_MAX_N), acknowledged)
    }

    pub fn max_n(&self) -> u32 {
        self.max_n
    }

    pub fn check(&self, n: u32) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidDimension(n));
        }
        if n > self.max_n {
            return Err(Error::Capacity { n, max_n: self.max_n });
        }
        Ok(())
    }
}

fn check_layout(n: u32, values: &[f64]) -> Result<()> {
    if n == 0 || n > HARD_MAX_N {
        return Err(Error::InvalidDimension(n));
    }
    let expected = 1usize << n;
    if values.len() != expected {
        return Err(Error::LengthMismatch { expected, actual: values.len() });
    }
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    Ok(())
}

/// A real-valued function on the cube, `values[x] = f(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CubeVector {
    n: u32,
    values: Vec<f64>,
}

impl CubeVector {
    pub fn new(n: u32, values: Vec<f64>) -> Result<Self> {
        check_layout(n, &values)?;
        Ok(CubeVector { n, values })
    }

    pub fn zeros(n: u32, limits: &Limits) -> Result<Self> {
        limits.check(n)?;
        Ok(CubeVector { n, values: vec![0.0; 1usize << n] })
    }

    /// Tabulates `f` over every point of the cube.
    pub fn from_fn(n: u32, limits: &Limits, f: impl FnMut(usize) -> f64) -> Result<Self> {
        limits.check(n)?;
        let values: Vec<f64> = (0..1usize << n).map(f).collect();
        check_layout(n, &values)?;
        Ok(CubeVector { n, values })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `N = 2^n`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// `E[f] = 2^{-n} Σ_x f(x)`.
    pub fn mean(&self) -> f64 {
        self.sum() / self.len() as f64
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Errors unless every entry is exactly 0 or 1.
    pub fn ensure_boolean(&self) -> Result<()> {
        match self.values.iter().position(|&v| v != 0.0 && v != 1.0) {
            Some(index) => Err(Error::NonBoolean { index, value: self.values[index] }),
            None => Ok(()),
        }
    }
}

/// Fourier-Walsh coefficients, `coeffs[S] = f̂(S)` with bit `j` of `S`
/// meaning `j ∈ S`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    n: u32,
    coeffs: Vec<f64>,
}

impl Spectrum {
    pub fn new(n: u32, coeffs: Vec<f64>) -> Result<Self> {
        check_layout(n, &coeffs)?;
        Ok(Spectrum { n, coeffs })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn coeff(&self, mask: usize) -> f64 {
        self.coeffs[mask]
    }

    /// `Σ_S f̂(S)²`, equal to `E[f²]` by Parseval.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// `Σ_{|S| > k} f̂(S)²`.
    pub fn tail_above(&self, k: u32) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(s, _)| (*s as u64).count_ones() > k)
            .map(|(_, c)| c * c)
            .sum()
    }
}

/// Unnormalized in-place Walsh-Hadamard butterfly:
/// `data[S] ← Σ_x data[x] (−1)^{|x ∧ S|}`.
///
/// Panics if `data.len()` is not a power of two.
pub fn fwht_in_place(data: &mut [f64]) {
    let len = data.len();
    assert!(len.is_power_of_two(), "length {len} is not a power of two");
    let mut half = 1;
    while half < len {
        for block in data.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (u, v) = (*a, *b);
                *a = u + v;
                *b = u - v;
            }
        }
        half *= 2;
    }
}

/// Forward transform under the default memory cap.
pub fn wht_forward(f: &CubeVector) -> Result<Spectrum> {
    wht_forward_with(f, &Limits::default())
}

/// `f̂(S) = 2^{-n} Σ_x f(x) (−1)^{popcount(x ∧ S)}` in `O(N log N)`.
pub fn wht_forward_with(f: &CubeVector, limits: &Limits) -> Result<Spectrum> {
    limits.check(f.n)?;
    let mut coeffs = f.values.clone();
    fwht_in_place(&mut coeffs);
    // power of two: the scaling is exact
    let scale = libm::ldexp(1.0, -(f.n as i32));
    for c in &mut coeffs {
        *c *= scale;
    }
    Ok(Spectrum { n: f.n, coeffs })
}

pub fn wht_inverse(s: &Spectrum) -> Result<CubeVector> {
    wht_inverse_with(s, &Limits::default())
}

/// `f(x) = Σ_S f̂(S) w_S(x)`; carries no normalization.
pub fn wht_inverse_with(s: &Spectrum, limits: &Limits) -> Result<CubeVector> {
    limits.check(s.n)?;
    let mut values = s.coeffs.clone();
    fwht_in_place(&mut values);
    Ok(CubeVector { n: s.n, values })
}

/// Squared coefficient mass per level, `mass[k] = Σ_{|S|=k} f̂(S)²`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelProfile {
    pub n: u32,
    pub mass: Vec<f64>,
}

impl LevelProfile {
    pub fn total(&self) -> f64 {
        self.mass.iter().sum()
    }

    /// Mass strictly above level `k`.
    pub fn tail_above(&self, k: u32) -> f64 {
        self.mass.iter().skip(k as usize + 1).sum()
    }
}

pub fn level_profile(s: &Spectrum) -> LevelProfile {
    let mut mass = vec![0.0; s.n as usize + 1];
    for (mask, c) in s.coeffs.iter().enumerate() {
        mass[(mask as u64).count_ones() as usize] += c * c;
    }
    LevelProfile { n: s.n, mass }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerProduct {
    /// `2^{-n} Σ_x f(x) g(x)`
    pub normalized: f64,
    /// `Σ_x f(x) g(x)`
    pub unnormalized: f64,
}

pub fn inner_product(f: &CubeVector, g: &CubeVector) -> Result<InnerProduct> {
    if f.n != g.n {
        return Err(Error::DimensionMismatch { left: f.n, right: g.n });
    }
    let unnormalized: f64 = f.values.iter().zip(&g.values).map(|(a, b)| a * b).sum();
    Ok(InnerProduct { normalized: unnormalized / f.len() as f64, unnormalized })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube(n: u32, v: &[f64]) -> CubeVector {
        CubeVector::new(n, v.to_vec()).unwrap()
    }

    #[test]
    fn dictator_spectrum() {
        let s = wht_forward(&cube(2, &[0.0, 1.0, 0.0, 1.0])).unwrap();
        assert_eq!(s.coeffs(), &[0.5, -0.5, 0.0, 0.0]);
    }

    #[test]
    fn constant_spectrum() {
        let s = wht_forward(&cube(1, &[3.25, 3.25])).unwrap();
        assert_eq!(s.coeffs(), &[3.25, 0.0]);
    }

    #[test]
    fn inverse_examples() {
        let f = cube(2, &[0.0, 1.0, 0.0, 1.0]);
        let back = wht_inverse(&wht_forward(&f).unwrap()).unwrap();
        for (a, b) in back.values().iter().zip(f.values()) {
            assert!((a - b).abs() < 1e-12);
        }
        let mut c = vec![0.0; 8];
        c[0] = 1.0;
        let one = wht_inverse(&Spectrum::new(3, c).unwrap()).unwrap();
        assert_eq!(one.values(), &[1.0; 8]);
    }

    #[test]
    fn level_profiles() {
        let dict = level_profile(&wht_forward(&cube(2, &[0.0, 1.0, 0.0, 1.0])).unwrap());
        assert_eq!(dict.mass, vec![0.25, 0.25, 0.0]);

        let maj = cube(3, &[0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 1.0]);
        let p = level_profile(&wht_forward(&maj).unwrap());
        let expected = [0.25, 3.0 / 16.0, 0.0, 1.0 / 16.0];
        for (a, b) in p.mass.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }

        let zero = level_profile(&wht_forward(&cube(3, &[0.0; 8])).unwrap());
        assert!(zero.mass.iter().all(|&m| m == 0.0));
    }

    #[test]
    fn inner_products() {
        let one = cube(4, &[1.0; 16]);
        let ip = inner_product(&one, &one).unwrap();
        assert_eq!((ip.normalized, ip.unnormalized), (1.0, 16.0));

        let a = cube(2, &[1.0, 0.0, 2.0, 0.0]);
        let b = cube(2, &[0.0, 5.0, 0.0, 7.0]);
        assert_eq!(inner_product(&a, &b).unwrap().unnormalized, 0.0);

        let err = inner_product(&a, &one).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { left: 2, right: 4 });
    }

    #[test]
    fn layout_errors() {
        assert!(matches!(
            CubeVector::new(3, vec![0.0; 7]),
            Err(Error::LengthMismatch { expected: 8, actual: 7 })
        ));
        assert!(matches!(
            CubeVector::new(1, vec![0.0, f64::NAN]),
            Err(Error::NonFinite { index: 1 })
        ));
        assert!(matches!(CubeVector::new(0, vec![0.0]), Err(Error::InvalidDimension(0))));
    }

    #[test]
    fn limits() {
        let d = Limits::default();
        assert_eq!(d.max_n(), 26);
        assert_eq!(d.check(27), Err(Error::Capacity { n: 27, max_n: 26 }));
        assert_eq!(Limits::new(27, false), Err(Error::Unacknowledged { max_n: 27 }));
        assert_eq!(Limits::new(27, true).unwrap().max_n(), 27);
        assert!(Limits::new(29, true).is_err());
        assert_eq!(Limits::from_bytes(512 << 20, false).unwrap().max_n(), 26);
        assert_eq!(Limits::from_bytes(1 << 20, false).unwrap().max_n(), 17);

        let small = Limits::new(4, false).unwrap();
        let f = cube(5, &[0.0; 32]);
        assert_eq!(wht_forward_with(&f, &small), Err(Error::Capacity { n: 5, max_n: 4 }));
    }
}
