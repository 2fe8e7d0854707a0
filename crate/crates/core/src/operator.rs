//! Spectral avatars of `C_φ`, `C_φ*` and the conjugations `J_±1`.
//!
//! Under the Fourier isometry `B²_σ → L²[-σ, σ]`:
//!
//! * `(Ĉ_φ F)(t) = |a|⁻¹ χ_{(-|a|σ, |a|σ)}(t) e^{ibt/a} F(t/a)`
//! * `(Ĉ_φ* F)(t) = conj(e^{ibt}) F(at)`
//! * `(Ĵ_{+1} F)(t) = conj(F(t))`, `(Ĵ_{-1} F)(t) = conj(F(-t))`
//!
//! For `a = ±1` every evaluation lands on a node (the grid is mirror
//! symmetric). Otherwise `F` is resampled by barycentric interpolation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::SpectralFunction;
use crate::symbol::AffineSymbol;

fn cis_b(b: Complex64, t: f64) -> Complex64 {
    (Complex64::i() * b * t).exp()
}

/// `F ↦ F(s·t)` on the nodes, node-exact for `s = ±1`.
fn resample(f: &SpectralFunction, s: f64) -> Vec<Complex64> {
    let grid = f.grid();
    let vals = f.values();
    if s == 1.0 {
        vals.to_vec()
    } else if s == -1.0 {
        (0..vals.len()).map(|k| vals[grid.mirror(k)]).collect()
    } else {
        grid.nodes().iter().map(|&t| grid.interpolate(vals, s * t)).collect()
    }
}

/// `Ĉ_φ F`.
pub fn apply_chat(phi: &AffineSymbol, f: &SpectralFunction) -> SpectralFunction {
    let a = phi.a();
    let b = phi.b();
    let grid = f.grid();
    let nodes = grid.nodes();
    if phi.is_unimodular() {
        let moved = resample(f, a);
        let values = nodes.iter().zip(moved).map(|(&t, v)| cis_b(b, t / a) * v).collect();
        return f.with_values(values);
    }
    let edge = a.abs() * grid.band().sigma();
    let scale = 1.0 / a.abs();
    let values = nodes
        .iter()
        .map(|&t| {
            if t.abs() >= edge {
                Complex64::new(0.0, 0.0)
            } else {
                cis_b(b, t / a) * grid.interpolate(f.values(), t / a) * scale
            }
        })
        .collect();
    f.with_values(values)
}

/// `Ĉ_φ* F`.
pub fn apply_chat_adjoint(phi: &AffineSymbol, f: &SpectralFunction) -> SpectralFunction {
    let b = phi.b();
    let moved = resample(f, phi.a());
    let values = f
        .grid()
        .nodes()
        .iter()
        .zip(moved)
        .map(|(&t, v)| cis_b(b, t).conj() * v)
        .collect();
    f.with_values(values)
}

/// The symbol `ψ(z) = az - a·b̄` with `C_ψ = C_φ*`, defined for `|a| = 1`.
///
/// For `|a| < 1` the adjoint is a weighted composition with `f(z/a)`,
/// which has exponential type `σ/|a|` and is not an operator on `B²_σ`.
pub fn adjoint_symbol(phi: &AffineSymbol) -> Result<AffineSymbol> {
    if !phi.is_unimodular() {
        return Err(Error::AdjointNotCompositionOperator { a_abs: phi.a().abs() });
    }
    let a = phi.a();
    AffineSymbol::new(a, -phi.b().conj() * a)
}

/// Selects `J_a f(z) = conj(f(-a z̄))` for `a ∈ {+1, -1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConjugationTag {
    Plus,
    Minus,
}

impl ConjugationTag {
    pub fn new(a: f64) -> Result<Self> {
        if a == 1.0 {
            Ok(Self::Plus)
        } else if a == -1.0 {
            Ok(Self::Minus)
        } else {
            Err(Error::InvalidArgument(format!(
                "conjugations J_a exist only for a = ±1, got {a}"
            )))
        }
    }

    pub fn for_symbol(phi: &AffineSymbol) -> Result<Self> {
        Self::new(phi.a())
    }

    pub fn a(self) -> f64 {
        match self {
            Self::Plus => 1.0,
            Self::Minus => -1.0,
        }
    }
}

/// `Ĵ_a F`: `conj(F(t))` for `a = +1`, `conj(F(-t))` for `a = -1`.
pub fn apply_conjugation(tag: ConjugationTag, f: &SpectralFunction) -> SpectralFunction {
    let moved = resample(f, tag.a());
    f.with_values(moved.into_iter().map(|v| v.conj()).collect())
}
