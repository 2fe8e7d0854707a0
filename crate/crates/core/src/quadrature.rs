//! Gauss–Legendre discretization of the spectral interval `[-σ, σ]`.
//!
//! A [`GridSpec`] is a composite Gauss–Legendre rule: one or more panels,
//! each carrying its own Legendre nodes, quadrature weights and barycentric
//! interpolation weights. The plain rule from [`make_grid`] has a single
//! panel. [`make_cut_grid`] inserts symmetric breakpoints so that functions
//! with a jump at `±c` (characteristic functions of `(-c, c)`) are still
//! integrated and interpolated to near machine precision.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Half-bandwidth `σ > 0` of the Paley–Wiener space `B²_σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct SigmaBand(f64);

impl SigmaBand {
    pub fn new(sigma: f64) -> Result<Self> {
        if sigma.is_finite() && sigma > 0.0 {
            Ok(Self(sigma))
        } else {
            Err(Error::InvalidArgument(format!(
                "sigma must be finite and positive, got {sigma}"
            )))
        }
    }

    #[inline]
    pub fn sigma(self) -> f64 {
        self.0
    }

    /// The critical translation length `π/σ`.
    #[inline]
    pub fn critical_shift(self) -> f64 {
        PI / self.0
    }
}

impl TryFrom<f64> for SigmaBand {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<SigmaBand> for f64 {
    fn from(band: SigmaBand) -> f64 {
        band.0
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Panel {
    lo: f64,
    hi: f64,
    start: usize,
    end: usize,
}

/// Quadrature grid on `[-σ, σ]`.
///
/// Nodes are strictly increasing and mirror-symmetric about zero, so the
/// reflection `t ↦ -t` maps node `k` onto node `n - 1 - k`.
#[derive(Debug, Clone)]
pub struct GridSpec {
    band: SigmaBand,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    bary: Vec<f64>,
    panels: Vec<Panel>,
    cuts: Vec<f64>,
}

impl PartialEq for GridSpec {
    /// Grids are identified by value: same band, node count and breakpoints.
    fn eq(&self, other: &Self) -> bool {
        self.band == other.band && self.nodes.len() == other.nodes.len() && self.cuts == other.cuts
    }
}

impl GridSpec {
    pub fn band(&self) -> SigmaBand {
        self.band
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Interior breakpoints (positive radii); empty for a plain rule.
    pub fn cuts(&self) -> &[f64] {
        &self.cuts
    }

    /// Index of the node mirrored through zero.
    #[inline]
    pub fn mirror(&self, k: usize) -> usize {
        self.nodes.len() - 1 - k
    }

    /// Quadrature of sampled values.
    pub fn integrate<I>(&self, values: I) -> num_complex::Complex64
    where
        I: IntoIterator<Item = num_complex::Complex64>,
    {
        self.weights.iter().zip(values).map(|(&w, v)| v * w).sum()
    }

    /// Barycentric Lagrange interpolation of node samples at `x`, using the
    /// panel that contains `x`. Points outside `[-σ, σ]` are clamped.
    pub fn interpolate(&self, values: &[num_complex::Complex64], x: f64) -> num_complex::Complex64 {
        debug_assert_eq!(values.len(), self.nodes.len());
        let sigma = self.band.sigma();
        let x = x.clamp(-sigma, sigma);
        let panel = self
            .panels
            .iter()
            .find(|p| x <= p.hi)
            .unwrap_or_else(|| self.panels.last().expect("grid has at least one panel"));

        let mut num = num_complex::Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        for k in panel.start..panel.end {
            let diff = x - self.nodes[k];
            if diff == 0.0 {
                return values[k];
            }
            let c = self.bary[k] / diff;
            num += values[k] * c;
            den += c;
        }
        num / den
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, increasing order.
///
/// Roots are found by Newton iteration on the three-term recurrence and
/// mirrored, so the returned nodes are exactly antisymmetric.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        // i-th largest root
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        let hi = n - 1 - i;
        nodes[hi] = x;
        nodes[i] = -x;
        weights[hi] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    let d = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Barycentric weights for Legendre points: `(-1)^j sqrt((1 - x_j²) λ_j)`.
fn legendre_barycentric(nodes: &[f64], weights: &[f64]) -> Vec<f64> {
    nodes
        .iter()
        .zip(weights)
        .enumerate()
        .map(|(j, (&x, &w))| {
            let s = ((1.0 - x * x) * w).sqrt();
            if j % 2 == 0 {
                s
            } else {
                -s
            }
        })
        .collect()
}

/// Plain `n`-point Gauss–Legendre rule mapped affinely onto `[-σ, σ]`.
pub fn make_grid(band: SigmaBand, n_nodes: usize) -> Result<GridSpec> {
    make_cut_grid(band, n_nodes, &[])
}

/// Composite Gauss–Legendre rule with breakpoints at `±c` for every radius
/// `c` in `cuts` (each strictly inside `(0, σ)`).
///
/// Nodes are distributed over panels in proportion to panel length, with at
/// least eight nodes per panel; the central panel absorbs rounding.
pub fn make_cut_grid(band: SigmaBand, n_nodes: usize, cuts: &[f64]) -> Result<GridSpec> {
    if n_nodes < 2 {
        return Err(Error::InvalidArgument(format!(
            "a grid needs at least 2 nodes, got {n_nodes}"
        )));
    }
    let sigma = band.sigma();
    let mut radii: Vec<f64> = cuts.to_vec();
    if radii.iter().any(|&c| !(c > 0.0 && c < sigma)) {
        return Err(Error::InvalidArgument(format!(
            "cut radii must lie strictly inside (0, {sigma})"
        )));
    }
    radii.sort_by(f64::total_cmp);
    radii.dedup();

    // breakpoints -σ < -c_m < ... < -c_1 < c_1 < ... < c_m < σ
    let mut right = radii.clone();
    right.push(sigma);
    let outer: Vec<(f64, f64)> = right.windows(2).map(|w| (w[0], w[1])).collect();
    let central = right[0];

    const MIN_PER_PANEL: usize = 8;
    let n_panels = 2 * outer.len() + 1;
    if n_panels > 1 && n_nodes < MIN_PER_PANEL * n_panels {
        return Err(Error::InvalidArgument(format!(
            "{n_nodes} nodes cannot fill {n_panels} panels with {MIN_PER_PANEL} nodes each"
        )));
    }
    let scale = n_nodes as f64 / (2.0 * sigma);
    let outer_counts: Vec<usize> = outer
        .iter()
        .map(|&(lo, hi)| (((hi - lo) * scale).round() as usize).max(MIN_PER_PANEL))
        .collect();
    let used: usize = 2 * outer_counts.iter().sum::<usize>();
    let central_count = n_nodes.checked_sub(used).filter(|&c| c >= MIN_PER_PANEL.min(n_nodes));
    let Some(central_count) = central_count else {
        return Err(Error::InvalidArgument(format!(
            "{n_nodes} nodes too few for cuts {radii:?}"
        )));
    };

    let mut layout: Vec<(f64, f64, usize)> = Vec::with_capacity(n_panels);
    for (&(lo, hi), &c) in outer.iter().zip(&outer_counts).rev() {
        layout.push((-hi, -lo, c));
    }
    layout.push((-central, central, central_count));
    for (&(lo, hi), &c) in outer.iter().zip(&outer_counts) {
        layout.push((lo, hi, c));
    }

    let mut nodes = Vec::with_capacity(n_nodes);
    let mut weights = Vec::with_capacity(n_nodes);
    let mut bary = Vec::with_capacity(n_nodes);
    let mut panels = Vec::with_capacity(n_panels);
    for (lo, hi, count) in layout {
        let (x, w) = gauss_legendre(count);
        let b = legendre_barycentric(&x, &w);
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let start = nodes.len();
        nodes.extend(x.iter().map(|&xi| mid + half * xi));
        weights.extend(w.iter().map(|&wi| half * wi));
        bary.extend(b);
        panels.push(Panel {
            lo,
            hi,
            start,
            end: nodes.len(),
        });
    }
    // enforce exact mirror symmetry against rounding in mid + half * x
    let n = nodes.len();
    for k in 0..n / 2 {
        let x = 0.5 * (nodes[n - 1 - k] - nodes[k]);
        nodes[k] = -x;
        nodes[n - 1 - k] = x;
    }

    Ok(GridSpec {
        band,
        nodes,
        weights,
        bary,
        panels,
        cuts: radii,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn band(s: f64) -> SigmaBand {
        SigmaBand::new(s).unwrap()
    }

    #[test]
    fn band_rejects_nonpositive() {
        assert!(SigmaBand::new(0.0).is_err());
        assert!(SigmaBand::new(-1.0).is_err());
        assert!(SigmaBand::new(f64::NAN).is_err());
    }

    #[test]
    fn two_point_rule_is_symmetric() {
        let g = make_grid(band(PI), 2).unwrap();
        assert_abs_diff_eq!(g.nodes()[0], -g.nodes()[1], epsilon = 0.0);
        assert_abs_diff_eq!(g.weights()[0], PI, epsilon = 1e-14);
        assert_abs_diff_eq!(g.weights()[1], PI, epsilon = 1e-14);
    }

    #[test]
    fn weight_sum_is_interval_length() {
        for &(s, n) in &[(1.0, 64), (PI, 256), (2.5, 4096), (1.0, 3)] {
            let g = make_grid(band(s), n).unwrap();
            let total: f64 = g.weights().iter().sum();
            assert!((total - 2.0 * s).abs() <= 1e-12 * 2.0 * s, "n={n}: {total}");
        }
    }

    #[test]
    fn integrates_cosine() {
        let g = make_grid(band(PI), 256).unwrap();
        let v = g.integrate(g.nodes().iter().map(|&t| Complex64::new(t.cos(), 0.0)));
        // ∫cos = sin(π) - sin(-π) = 0
        assert_abs_diff_eq!(v.re, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn rejects_single_node() {
        assert!(matches!(make_grid(band(1.0), 1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn nodes_increasing_and_mirrored() {
        for grid in [
            make_grid(band(1.3), 257).unwrap(),
            make_cut_grid(band(1.3), 256, &[0.65]).unwrap(),
            make_cut_grid(band(2.0), 200, &[0.5, 1.5]).unwrap(),
        ] {
            let x = grid.nodes();
            assert!(x.windows(2).all(|w| w[0] < w[1]));
            assert!(x.iter().all(|t| t.abs() <= grid.band().sigma()));
            for k in 0..x.len() {
                assert_eq!(x[k], -x[grid.mirror(k)]);
            }
        }
    }

    #[test]
    fn cut_grid_integrates_indicator_exactly() {
        let g = make_cut_grid(band(PI), 256, &[PI / 2.0]).unwrap();
        assert_eq!(g.n_nodes(), 256);
        let v = g.integrate(
            g.nodes()
                .iter()
                .map(|&t| Complex64::new(if t.abs() < PI / 2.0 { t.cos() } else { 0.0 }, 0.0)),
        );
        assert_abs_diff_eq!(v.re, 2.0, epsilon = 1e-13);
    }

    #[test]
    fn barycentric_reproduces_smooth_function() {
        for grid in [
            make_grid(band(PI), 256).unwrap(),
            make_cut_grid(band(PI), 256, &[1.0]).unwrap(),
        ] {
            let f = |t: f64| Complex64::new(0.0, 2.3 * t).exp() * (-0.2 * t * t).exp();
            let vals: Vec<_> = grid.nodes().iter().map(|&t| f(t)).collect();
            for &x in &[-3.0, -1.0, -0.123, 0.0, 0.77, 1.0, 2.9, PI] {
                let err = (grid.interpolate(&vals, x) - f(x)).norm();
                assert!(err < 1e-12, "x={x}: {err}");
            }
        }
    }

    #[test]
    fn value_identity() {
        let a = make_grid(band(1.0), 64).unwrap();
        let b = make_grid(band(1.0), 64).unwrap();
        let c = make_cut_grid(band(1.0), 64, &[0.5]).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, make_grid(band(1.0), 65).unwrap());
    }
}
