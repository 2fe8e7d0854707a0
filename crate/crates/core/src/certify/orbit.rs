//! Least-squares distance from a target to the span of an orbit.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::apply_chat;
use crate::spectral::{inner_product, kernel_spectral, KernelPoint, SpectralFunction};
use crate::symbol::{iterate_symbol, AffineSymbol};

use super::sequences::ExponentialSequence;

pub const DEFAULT_REG: f64 = 1e-12;

const REFINE_STEPS: usize = 4;

/// Outcome of a regularised Gram solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanFit {
    /// `‖target - Σ c_k v_k‖ / ‖target‖`.
    pub residual: f64,
    /// Spectral condition number of the normalised Gram matrix
    /// (`inf` when it is numerically singular).
    pub gram_condition: f64,
    pub n_vectors: usize,
}

/// Distance from `target` to `span(vectors)` relative to `‖target‖`.
///
/// Columns are normalised to unit length, then `(G + reg·I) c = h` is
/// solved by Cholesky with `G_jk = ⟨v_k, v_j⟩` and `h_j = ⟨target, v_j⟩`.
/// The residual is measured directly from the recovered combination.
pub fn span_residual(vectors: &[SpectralFunction], target: &SpectralFunction, reg: f64) -> Result<SpanFit> {
    if !(reg.is_finite() && reg >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "regularisation must be >= 0, got {reg}"
        )));
    }
    let target_norm = target.norm();
    if target_norm == 0.0 {
        return Err(Error::InvalidArgument("target has zero norm".into()));
    }
    let mut cols = Vec::with_capacity(vectors.len());
    for v in vectors {
        if !v.is_compatible(target) {
            return Err(Error::IncompatibleGrids);
        }
        let n = v.norm();
        if n > 0.0 {
            cols.push(v.scale(Complex64::new(1.0 / n, 0.0)));
        }
    }
    if cols.is_empty() {
        return Ok(SpanFit {
            residual: 1.0,
            gram_condition: f64::INFINITY,
            n_vectors: 0,
        });
    }

    let k = cols.len();
    let mut gram = DMatrix::<Complex64>::zeros(k, k);
    let mut rhs = DVector::<Complex64>::zeros(k);
    for j in 0..k {
        for i in j..k {
            let g = inner_product(&cols[i], &cols[j])?;
            gram[(j, i)] = g;
            gram[(i, j)] = g.conj();
        }
        rhs[j] = inner_product(target, &cols[j])?;
    }

    let eig = SymmetricEigen::new(gram.clone()).eigenvalues;
    let (lo, hi) = eig
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &e| (lo.min(e), hi.max(e)));
    let gram_condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };

    let system_plain = gram.clone();
    let mut system = gram;
    for j in 0..k {
        system[(j, j)] += Complex64::new(reg, 0.0);
    }
    let chol = system
        .cholesky()
        .ok_or_else(|| Error::GramSolve(format!("regularised Gram matrix of size {k} is not positive definite")))?;
    let measure = |coeffs: &DVector<Complex64>| -> Result<f64> {
        let mut approx = target.clone();
        for (c, v) in coeffs.iter().zip(&cols) {
            approx = approx.axpy(-c, v)?;
        }
        Ok(approx.norm() / target_norm)
    };
    let mut coeffs = chol.solve(&rhs);
    let mut residual = measure(&coeffs)?;
    // iterative refinement removes most of the Tikhonov bias; an iterate
    // is kept only if its measured residual is smaller
    for _ in 0..REFINE_STEPS {
        let correction = chol.solve(&(&rhs - &system_plain * &coeffs));
        let next = &coeffs + correction;
        let r = measure(&next)?;
        if r.is_nan() || r >= residual {
            break;
        }
        coeffs = next;
        residual = r;
    }
    if !residual.is_finite() {
        return Err(Error::GramSolve("non-finite residual".into()));
    }
    Ok(SpanFit {
        residual,
        gram_condition,
        n_vectors: k,
    })
}

/// `{Ĉ_φⁿ seed : 0 ≤ n ≤ N}`, generated as `Ĉ_{φ^[n]} seed` so that no
/// resampling error accumulates.
pub fn orbit(phi: &AffineSymbol, seed: &SpectralFunction, n_max: u32) -> Vec<SpectralFunction> {
    (0..=n_max).map(|n| apply_chat(&iterate_symbol(phi, n), seed)).collect()
}

/// Relative distance from `target` to the span of the first `N+1` orbit
/// elements of `seed` under `Ĉ_φ`.
pub fn orbit_residual(
    phi: &AffineSymbol,
    seed: &SpectralFunction,
    target: &SpectralFunction,
    n_max: u32,
    reg: f64,
) -> Result<SpanFit> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("orbit length N must be >= 1".into()));
    }
    if !seed.is_compatible(target) {
        return Err(Error::IncompatibleGrids);
    }
    span_residual(&orbit(phi, seed, n_max), target, reg)
}

/// Kernel points `φ^[n](w)` for `0 ≤ n ≤ N`.
pub fn adjoint_kernel_points(phi: &AffineSymbol, w: KernelPoint, n_max: u32) -> Vec<KernelPoint> {
    (0..=n_max)
        .map(|n| KernelPoint::new(iterate_symbol(phi, n).apply(w.w())))
        .collect()
}

/// Relative distance from `target` to `span{k̂_{φ^[n](w)} : 0 ≤ n ≤ N}`,
/// the orbit of `k̂_w` under `Ĉ_φ*`.
pub fn adjoint_orbit_kernel_residual(
    phi: &AffineSymbol,
    w: KernelPoint,
    target: &SpectralFunction,
    n_max: u32,
    reg: f64,
) -> Result<SpanFit> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("orbit length N must be >= 1".into()));
    }
    let vectors: Vec<_> = adjoint_kernel_points(phi, w, n_max)
        .into_iter()
        .map(|p| kernel_spectral(p, target.grid()))
        .collect();
    span_residual(&vectors, target, reg)
}

/// Largest relative distance from any target to `span{e^{iλ_n t}}`.
pub fn completeness_residual(seq: &ExponentialSequence, targets: &[SpectralFunction], reg: f64) -> Result<f64> {
    let Some(first) = targets.first() else {
        return Err(Error::InvalidArgument("no targets".into()));
    };
    let grid = first.grid();
    let vectors: Vec<_> = seq
        .lambdas()
        .iter()
        .map(|&l| SpectralFunction::from_fn(grid, move |t| Complex64::new(0.0, l * t).exp()))
        .collect();
    let mut worst: f64 = 0.0;
    for t in targets {
        worst = worst.max(span_residual(&vectors, t, reg)?.residual);
    }
    Ok(worst)
}
