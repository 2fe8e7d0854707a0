//! Finite sections in the orthonormal exponential basis
//! `e_n(t) = e^{iπnt/σ}/√(2σ)`, `n = -M..M`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{apply_chat, apply_chat_adjoint};
use crate::quadrature::{GridSpec, SigmaBand};
use crate::spectral::{inner_product, SpectralFunction};
use crate::symbol::AffineSymbol;

/// Which operator to section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum OperatorKind {
    Chat(AffineSymbol),
    ChatAdjoint(AffineSymbol),
}

impl OperatorKind {
    pub fn apply(&self, f: &SpectralFunction) -> SpectralFunction {
        match self {
            Self::Chat(phi) => apply_chat(phi, f),
            Self::ChatAdjoint(phi) => apply_chat_adjoint(phi, f),
        }
    }
}

/// Dense `(2M+1)×(2M+1)` section, indices `-M..M` stored as `0..2M`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub basis_band: SigmaBand,
    pub basis_m: usize,
    pub entries: DMatrix<Complex64>,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            basis_band: self.basis_band,
            basis_m: self.basis_m,
            entries: self.entries.adjoint(),
        }
    }

    /// Entry for basis indices `m, n ∈ -M..M`.
    pub fn get(&self, m: i64, n: i64) -> Complex64 {
        let off = self.basis_m as i64;
        self.entries[((m + off) as usize, (n + off) as usize)]
    }

    /// Row-major CSV with header `row,col,re,im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col,re,im\n");
        for r in 0..self.dim() {
            for c in 0..self.dim() {
                let v = self.entries[(r, c)];
                let _ = writeln!(out, "{r},{c},{:e},{:e}", v.re, v.im);
            }
        }
        out
    }
}

/// Minimum grid size for a section of half-width `m`.
pub fn required_nodes(m: usize) -> usize {
    8 * m
}

fn basis(grid: &Arc<GridSpec>, m: usize) -> Vec<SpectralFunction> {
    let sigma = grid.band().sigma();
    let norm = 1.0 / (2.0 * sigma).sqrt();
    (-(m as i64)..=m as i64)
        .map(|n| {
            let k = PI * n as f64 / sigma;
            SpectralFunction::from_fn(grid, move |t| Complex64::new(0.0, k * t).exp() * norm)
        })
        .collect()
}

fn check_grid(grid: &GridSpec, m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidArgument("basis half-width M must be positive".into()));
    }
    let required = required_nodes(m);
    if grid.n_nodes() < required {
        return Err(Error::GridTooCoarse {
            n_nodes: grid.n_nodes(),
            basis_m: m,
            required,
        });
    }
    Ok(())
}

fn gram_against(images: &[SpectralFunction], basis: &[SpectralFunction]) -> Result<DMatrix<Complex64>> {
    let dim = basis.len();
    let mut entries = DMatrix::zeros(dim, dim);
    for (n, img) in images.iter().enumerate() {
        for (m, e) in basis.iter().enumerate() {
            entries[(m, n)] = inner_product(img, e)?;
        }
    }
    Ok(entries)
}

/// `entries[m][n] = ⟨op(e_n), e_m⟩`.
pub fn assemble_matrix(op: OperatorKind, m: usize, grid: &Arc<GridSpec>) -> Result<OperatorMatrix> {
    check_grid(grid, m)?;
    let basis = basis(grid, m);
    let images: Vec<_> = basis.iter().map(|e| op.apply(e)).collect();
    Ok(OperatorMatrix {
        basis_band: grid.band(),
        basis_m: m,
        entries: gram_against(&images, &basis)?,
    })
}

/// `‖AA^H - A^H A‖_F / ‖A‖_F²` for the section `A` itself.
pub fn commutator_residual(a: &OperatorMatrix) -> f64 {
    let ah = a.entries.adjoint();
    let comm = &a.entries * &ah - &ah * &a.entries;
    let scale = a.entries.norm_squared();
    if scale == 0.0 {
        return 0.0;
    }
    comm.norm() / scale
}

/// Section of the operator commutator `Ĉ_φĈ_φ* - Ĉ_φ*Ĉ_φ`, formed by
/// applying both products to the basis before projecting, normalised by
/// `‖A‖_F²` with `A` the section of `Ĉ_φ`.
///
/// Unlike [`commutator_residual`] this carries no truncation defect: the
/// section of a shift is not normal, but the shift is.
pub fn compressed_commutator_residual(phi: &AffineSymbol, m: usize, grid: &Arc<GridSpec>) -> Result<f64> {
    check_grid(grid, m)?;
    let basis = basis(grid, m);
    let mut comm_images = Vec::with_capacity(basis.len());
    let mut images = Vec::with_capacity(basis.len());
    for e in &basis {
        let ce = apply_chat(phi, e);
        let cce = apply_chat(phi, &apply_chat_adjoint(phi, e));
        let c_c = apply_chat_adjoint(phi, &ce);
        comm_images.push(cce.sub(&c_c)?);
        images.push(ce);
    }
    let comm = gram_against(&comm_images, &basis)?;
    let a = gram_against(&images, &basis)?;
    let scale = a.norm_squared();
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok(comm.norm() / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::make_grid;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn grid(s: f64, n: usize) -> Arc<GridSpec> {
        Arc::new(make_grid(SigmaBand::new(s).unwrap(), n).unwrap())
    }

    fn chat(a: f64, b: Complex64) -> OperatorKind {
        OperatorKind::Chat(AffineSymbol::new(a, b).unwrap())
    }

    #[test]
    fn identity_section() {
        let g = grid(1.0, 256);
        let a = assemble_matrix(chat(1.0, c(0.0, 0.0)), 16, &g).unwrap();
        let diff = &a.entries - DMatrix::<Complex64>::identity(33, 33);
        assert!(diff.camax() < 1e-10);
    }

    #[test]
    fn critical_translation_is_shift() {
        for s in [1.0, PI, 2.5] {
            let g = grid(s, 256);
            let a = assemble_matrix(chat(1.0, c(PI / s, 0.0)), 16, &g).unwrap();
            for m in -16..=16 {
                for n in -16..=16 {
                    let expect = if m == n + 1 { 1.0 } else { 0.0 };
                    assert!((a.get(m, n) - c(expect, 0.0)).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn reflection_permutes_basis() {
        let g = grid(PI, 256);
        let a = assemble_matrix(chat(-1.0, c(0.0, 0.0)), 8, &g).unwrap();
        for m in -8..=8 {
            for n in -8..=8 {
                let expect = if m == -n { 1.0 } else { 0.0 };
                assert!((a.get(m, n) - c(expect, 0.0)).norm() < 1e-9);
            }
        }
        assert!(commutator_residual(&a) < 1e-12);
    }

    #[test]
    fn adjoint_section_is_conjugate_transpose() {
        let g = grid(1.0, 256);
        let phi = AffineSymbol::new(-1.0, c(0.3, 0.4)).unwrap();
        let a = assemble_matrix(OperatorKind::Chat(phi), 6, &g).unwrap();
        let b = assemble_matrix(OperatorKind::ChatAdjoint(phi), 6, &g).unwrap();
        assert!((&a.adjoint().entries - &b.entries).camax() < 1e-12);
    }

    #[test]
    fn coarse_grid_rejected() {
        let g = grid(1.0, 100);
        assert_eq!(
            assemble_matrix(chat(1.0, c(0.0, 0.0)), 16, &g),
            Err(Error::GridTooCoarse {
                n_nodes: 100,
                basis_m: 16,
                required: 128
            })
        );
    }

    #[test]
    fn truncated_shift_carries_edge_defect() {
        // section of M_{e^{iπt/σ}} is the truncated shift: defect √2/(2M)
        let g = grid(PI, 256);
        let a = assemble_matrix(chat(1.0, c(1.0, 0.0)), 16, &g).unwrap();
        let r = commutator_residual(&a);
        assert!((r - 2f64.sqrt() / 32.0).abs() < 1e-9, "{r}");
        let phi = AffineSymbol::new(1.0, c(1.0, 0.0)).unwrap();
        assert!(compressed_commutator_residual(&phi, 16, &g).unwrap() < 1e-12);
    }

    #[test]
    fn non_normal_reflection() {
        for s in [1.0, PI] {
            let g = grid(s, 256);
            let phi = AffineSymbol::new(-1.0, c(0.0, 1.0)).unwrap();
            let a = assemble_matrix(OperatorKind::Chat(phi), 16, &g).unwrap();
            assert!(commutator_residual(&a) >= 0.1);
            assert!(compressed_commutator_residual(&phi, 16, &g).unwrap() >= 0.1);
        }
    }

    #[test]
    fn generic_translation_normal_when_compressed() {
        let g = grid(1.0, 256);
        for b in [c(0.37, 0.0), c(0.2, 0.9), c(-1.1, -0.4)] {
            let phi = AffineSymbol::new(1.0, b).unwrap();
            assert!(compressed_commutator_residual(&phi, 16, &g).unwrap() < 1e-12);
        }
    }

    #[test]
    fn csv_layout() {
        let g = grid(1.0, 16);
        let a = assemble_matrix(chat(1.0, c(0.0, 0.0)), 1, &g).unwrap();
        let csv = a.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "row,col,re,im");
        assert_eq!(lines.len(), 10);
        assert!(lines[1].starts_with("0,0,"));
        assert!(lines[2].starts_with("0,1,"));
    }
}
