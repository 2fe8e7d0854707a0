//! Seeded families of smooth spectral test functions.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::quadrature::GridSpec;
use crate::spectral::SpectralFunction;

/// `count` functions of the form
/// `F(t) = exp(-γ x²) Σ_j c_j exp(i κ_j x)`, `x = t/σ`,
/// with four terms, `|κ_j| ≤ 4`, `γ ∈ [0, 1]` and complex Gaussian-ish
/// coefficients. All are entire in `t`, so Gauss–Legendre sampling
/// resolves them to machine precision.
pub fn smooth_family(grid: &Arc<GridSpec>, seed: u64, count: usize) -> Vec<SpectralFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = grid.band().sigma();
    (0..count)
        .map(|_| {
            let gamma: f64 = rng.random_range(0.0..1.0);
            let terms: Vec<(Complex64, f64)> = (0..4)
                .map(|_| {
                    let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                    (c, rng.random_range(-4.0..4.0))
                })
                .collect();
            SpectralFunction::from_fn(grid, |t| {
                let x = t / sigma;
                let s: Complex64 = terms.iter().map(|&(c, k)| c * Complex64::new(0.0, k * x).exp()).sum();
                s * (-gamma * x * x).exp()
            })
        })
        .collect()
}
