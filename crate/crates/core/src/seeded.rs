//! Deterministic random band-limited test data.
//!
//! Every generator draws from a ChaCha stream keyed by `(seed, stream)`, so the
//! same call yields the same field on any machine and thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conformal::conformal_killing_combination;
use crate::sphere::{
    CovectorField, ScalarField, SphCoeffs, SphereGrid, SymTensorField, VectorField,
};

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Random coefficients for degrees `1..=lmax`, uniformly drawn and scaled so
/// that the field peaks at `amplitude` in absolute value. The peak is sampled
/// on a reference grid of band limit `max(4·lmax, 8)`, independent of the grid
/// the field is later evaluated on. The field has zero mean.
pub fn random_coeffs(seed: u64, lmax: usize, amplitude: f64) -> SphCoeffs {
    random_coeffs_stream(seed, 0, lmax, amplitude)
}

fn random_coeffs_stream(seed: u64, stream: u64, lmax: usize, amplitude: f64) -> SphCoeffs {
    let mut r = rng(seed, stream);
    let mut c = SphCoeffs::zeros(lmax);
    for l in 1..=lmax {
        for m in -(l as i64)..=(l as i64) {
            c.set(l, m, r.random_range(-1.0..1.0)).expect("within band");
        }
    }
    if lmax == 0 {
        return c;
    }
    let reference = SphereGrid::new((4 * lmax).max(8)).expect("band limit at least 8");
    let peak = synthesize_on(&reference, &c).max_abs();
    c.map_degree(|_| amplitude / peak)
}

/// Synthesizes coefficients on `grid`, zero-padding to its band limit.
pub fn synthesize_on(grid: &SphereGrid, coeffs: &SphCoeffs) -> ScalarField {
    grid.synthesize(&coeffs.with_band_limit(grid.band_limit()))
        .expect("padded to grid band limit")
}

pub fn random_scalar(grid: &SphereGrid, seed: u64, lmax: usize, amplitude: f64) -> ScalarField {
    synthesize_on(grid, &random_coeffs(seed, lmax, amplitude))
}

/// `dα + ⋆dβ` for random potentials of degree `≤ lmax`.
pub fn random_covector(grid: &SphereGrid, seed: u64, lmax: usize, amplitude: f64) -> CovectorField {
    let alpha = synthesize_on(grid, &random_coeffs_stream(seed, 1, lmax, amplitude));
    let beta = synthesize_on(grid, &random_coeffs_stream(seed, 2, lmax, amplitude));
    grid.grad(&alpha).add(&grid.grad(&beta).rotated())
}

/// Trace-free part of `sym ∇ω` for a random `ω = dα + ⋆dβ`; every smooth
/// trace-free symmetric tensor on the sphere has this form.
pub fn random_traceless(
    grid: &SphereGrid,
    seed: u64,
    lmax: usize,
    amplitude: f64,
) -> SymTensorField {
    let alpha = synthesize_on(grid, &random_coeffs_stream(seed, 3, lmax, amplitude));
    let beta = synthesize_on(grid, &random_coeffs_stream(seed, 4, lmax, amplitude));
    let w = grid.grad(&alpha).add(&grid.grad(&beta).rotated());
    grid.covariant_derivative(&w).sym().trace_free()
}

/// Coefficients `(c, d)` of a random conformal Killing field `Σ c_i ∇x_i + Σ d_i R_i`.
pub fn random_ckv_coefficients(seed: u64) -> ([f64; 3], [f64; 3]) {
    let mut r = rng(seed, 5);
    let c = std::array::from_fn(|_| r.random_range(-1.0..1.0));
    let d = std::array::from_fn(|_| r.random_range(-1.0..1.0));
    (c, d)
}

pub fn random_conformal_killing(grid: &SphereGrid, seed: u64) -> VectorField {
    let (c, d) = random_ckv_coefficients(seed);
    conformal_killing_combination(grid, c, d)
}
