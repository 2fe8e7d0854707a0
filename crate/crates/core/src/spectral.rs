//! Spectral-side model of `B²_σ`.
//!
//! An element `f ∈ B²_σ` is stored through its Fourier data `F = 𝔉f`,
//! sampled on a quadrature grid of `[-σ, σ]`. The entire function is
//! recovered as `f(z) = (2π)^{-1/2} ∫ F(t) e^{izt} dt`. Inner products
//! are linear in the first slot and conjugate-linear in the second.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{GridSpec, SigmaBand};

/// Growth bound for complex evaluation, in units of `1/σ`.
pub const DEFAULT_GROWTH: f64 = 10.0;

const KERNEL_TAYLOR_RADIUS: f64 = 1e-8;

/// Samples of `F ∈ L²[-σ, σ]` at the nodes of a shared grid.
#[derive(Debug, Clone)]
pub struct SpectralFunction {
    grid: Arc<GridSpec>,
    values: Vec<Complex64>,
}

impl SpectralFunction {
    pub fn new(grid: Arc<GridSpec>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n_nodes() {
            return Err(Error::InvalidArgument(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.n_nodes()
            )));
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` at every node.
    pub fn from_fn(grid: &Arc<GridSpec>, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.nodes().iter().map(|&t| f(t)).collect();
        Self {
            grid: Arc::clone(grid),
            values,
        }
    }

    pub fn zeros(grid: &Arc<GridSpec>) -> Self {
        Self {
            grid: Arc::clone(grid),
            values: vec![Complex64::new(0.0, 0.0); grid.n_nodes()],
        }
    }

    pub fn grid(&self) -> &Arc<GridSpec> {
        &self.grid
    }

    pub fn band(&self) -> SigmaBand {
        self.grid.band()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub(crate) fn with_values(&self, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), self.values.len());
        Self {
            grid: Arc::clone(&self.grid),
            values,
        }
    }

    pub fn is_compatible(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    /// Value of the interpolant at an arbitrary `t ∈ [-σ, σ]`.
    pub fn at(&self, t: f64) -> Complex64 {
        self.grid.interpolate(&self.values, t)
    }

    pub fn norm(&self) -> f64 {
        self.grid
            .weights()
            .iter()
            .zip(&self.values)
            .map(|(&w, v)| w * v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.with_values(self.values.iter().map(|v| v * c).collect())
    }

    /// Pointwise multiplication by `m(t)`.
    pub fn multiply(&self, m: impl Fn(f64) -> Complex64) -> Self {
        self.with_values(
            self.grid
                .nodes()
                .iter()
                .zip(&self.values)
                .map(|(&t, v)| v * m(t))
                .collect(),
        )
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: Complex64, other: &Self) -> Result<Self> {
        if !self.is_compatible(other) {
            return Err(Error::IncompatibleGrids);
        }
        Ok(self.with_values(self.values.iter().zip(&other.values).map(|(x, y)| x + c * y).collect()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    /// CSV with header `node,re,im`, LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("node,re,im\n");
        for (t, v) in self.grid.nodes().iter().zip(&self.values) {
            let _ = writeln!(out, "{t:e},{:e},{:e}", v.re, v.im);
        }
        out
    }

    /// Parses the [`to_csv`](Self::to_csv) format; the node column must
    /// match `grid` to within `1e-9·σ`.
    pub fn from_csv(grid: &Arc<GridSpec>, text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        match lines.next() {
            Some(h) if h.trim() == "node,re,im" => {}
            other => return Err(Error::Parse(format!("expected header `node,re,im`, found {other:?}"))),
        }
        let tol = 1e-9 * grid.band().sigma();
        let mut values = Vec::with_capacity(grid.n_nodes());
        for (k, line) in lines.enumerate() {
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            let [t, re, im] = cols[..] else {
                return Err(Error::Parse(format!("row {k}: expected 3 columns")));
            };
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("row {k}: {s:?}: {e}")))
            };
            let t = parse(t)?;
            match grid.nodes().get(k) {
                Some(&node) if (node - t).abs() <= tol => {}
                _ => return Err(Error::Parse(format!("row {k}: node {t} does not match the grid"))),
            }
            values.push(Complex64::new(parse(re)?, parse(im)?));
        }
        Self::new(Arc::clone(grid), values)
    }
}

/// Parameter `w` of the reproducing kernel `k_w`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelPoint(pub Complex64);

impl KernelPoint {
    pub fn new(w: Complex64) -> Self {
        Self(w)
    }

    pub fn real(x: f64) -> Self {
        Self(Complex64::new(x, 0.0))
    }

    pub fn w(self) -> Complex64 {
        self.0
    }
}

/// `⟨F, G⟩ = Σ_k ω_k F_k conj(G_k)`.
pub fn inner_product(f: &SpectralFunction, g: &SpectralFunction) -> Result<Complex64> {
    if !f.is_compatible(g) {
        return Err(Error::IncompatibleGrids);
    }
    Ok(f.grid
        .weights()
        .iter()
        .zip(f.values.iter().zip(&g.values))
        .map(|(&w, (x, y))| x * y.conj() * w)
        .sum())
}

/// `f(z) = (2π)^{-1/2} ∫ F(t) e^{izt} dt`, with the default growth bound
/// `|Im z| ≤ 10/σ`.
pub fn eval_entire(f: &SpectralFunction, z: Complex64) -> Result<Complex64> {
    eval_entire_bounded(f, z, DEFAULT_GROWTH / f.band().sigma())
}

pub fn eval_entire_bounded(f: &SpectralFunction, z: Complex64, max_im: f64) -> Result<Complex64> {
    if z.im.is_nan() || z.im.abs() > max_im {
        return Err(Error::EvaluationOutOfRange {
            im: z.im.abs(),
            bound: max_im,
        });
    }
    let iz = Complex64::i() * z;
    let sum = f
        .grid
        .integrate(f.grid.nodes().iter().zip(&f.values).map(|(&t, v)| v * (iz * t).exp()));
    Ok(sum / (2.0 * PI).sqrt())
}

/// `k_w(z) = sin(σ(z - w̄)) / (π(z - w̄))`.
pub fn kernel_value(w: KernelPoint, z: Complex64, band: SigmaBand) -> Complex64 {
    let sigma = band.sigma();
    let u = z - w.0.conj();
    if u.norm() < KERNEL_TAYLOR_RADIUS {
        let s2 = (u * sigma) * (u * sigma);
        return (Complex64::new(1.0, 0.0) - s2 / 6.0 + s2 * s2 / 120.0) * (sigma / PI);
    }
    (u * sigma).sin() / (u * PI)
}

/// Fourier data of `k_w`: `t ↦ e^{-i w̄ t}`.
pub fn kernel_spectral(w: KernelPoint, grid: &Arc<GridSpec>) -> SpectralFunction {
    let c = -Complex64::i() * w.0.conj();
    SpectralFunction::from_fn(grid, |t| (c * t).exp())
}

/// `|(2π)^{-1/2} ⟨F, k̂_w⟩ - f(w)|`.
pub fn verify_reproducing(f: &SpectralFunction, w: KernelPoint) -> Result<f64> {
    let direct = eval_entire(f, w.0)?;
    let kernel = kernel_spectral(w, f.grid());
    let paired = inner_product(f, &kernel)? / (2.0 * PI).sqrt();
    Ok((paired - direct).norm())
}
