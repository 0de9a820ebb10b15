//! Fourier-Walsh analysis of the von Mangoldt function on the Boolean cube.
//!
//! The cube `{0,1}^n` is identified with `[0, 2^n)` by binary expansion,
//! `x = Σ x_j 2^j`. Walsh characters use the sign convention
//! `w_S(x) = Π_{j∈S} (1 − 2x_j)`, so a set bit maps to `−1`, and the forward
//! transform carries the `2^{-n}` normalization:
//!
//! ```text
//! f̂(S) = 2^{-n} Σ_x f(x) w_S(x),        f(x) = Σ_S f̂(S) w_S(x).
//! ```
//!
//! Many Walsh-Hadamard libraries put the normalization on the inverse
//! instead. Everything downstream (monotone sign properties, the `Λ̃`
//! spectrum identity) depends on this choice.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! report serialization live in the companion `walsh-prime-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod analysis;
pub mod arithmetic;
pub mod cube;
mod error;
pub mod lambda_tilde;
pub mod monotone;

pub use error::{Error, Result};

pub use analysis::{
    correlate, low_level_mass, trend_table, CoefficientCheck, CorrelationContext,
    CorrelationReport, LowLevelMassReport, Metric, Trend, TrendTable, Warning,
};
pub use arithmetic::{
    chebyshev_psi, max_pair_correlation, pair_correlation, sieve_von_mangoldt, PairCorrelation,
    SieveConfig, VonMangoldtTable,
};
pub use cube::{
    inner_product, level_profile, wht_forward, wht_forward_with, wht_inverse, wht_inverse_with,
    CubeVector, InnerProduct, LevelProfile, Limits, Spectrum,
};
pub use lambda_tilde::{
    build_lambda_tilde, lambda_tilde_moments, lambda_tilde_spectrum_via_identity,
    resolve_mean_constant, LambdaTildeMoments, LambdaTildeTable, MeanConstant, MeanResolution,
};
pub use monotone::{
    default_zoo, influence_identity_check, materialize, materialize_with, monotonicity_check,
    tail_report, CheckMode, Family, InfluenceIdentity, MonotoneFunctionSpec, TailReport,
    Verdict, ZooEntry,
};
