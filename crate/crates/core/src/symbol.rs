//! Affine symbols `φ(z) = az + b` inducing bounded composition operators.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `φ(z) = az + b` with real slope `0 < |a| ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSymbol", into = "RawSymbol")]
pub struct AffineSymbol {
    a: f64,
    b: Complex64,
}

#[derive(Serialize, Deserialize)]
struct RawSymbol {
    a: f64,
    b: Complex64,
}

impl TryFrom<RawSymbol> for AffineSymbol {
    type Error = Error;

    fn try_from(raw: RawSymbol) -> Result<Self> {
        Self::new(raw.a, raw.b)
    }
}

impl From<AffineSymbol> for RawSymbol {
    fn from(s: AffineSymbol) -> Self {
        RawSymbol { a: s.a, b: s.b }
    }
}

impl AffineSymbol {
    pub fn new(a: f64, b: Complex64) -> Result<Self> {
        if !(a.is_finite() && b.re.is_finite() && b.im.is_finite()) {
            return Err(Error::InvalidArgument("symbol coefficients must be finite".into()));
        }
        if a == 0.0 || a.abs() > 1.0 {
            return Err(Error::InvalidArgument(format!(
                "C_phi is bounded only for real 0 < |a| <= 1, got a = {a}"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn identity() -> Self {
        Self {
            a: 1.0,
            b: Complex64::new(0.0, 0.0),
        }
    }

    /// Translation `z ↦ z + b`.
    pub fn translation(b: Complex64) -> Self {
        Self { a: 1.0, b }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    pub fn is_unimodular(&self) -> bool {
        self.a.abs() == 1.0
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        z * self.a + self.b
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            a: self.a * other.a,
            b: other.b * self.a + self.b,
        }
    }
}

impl fmt::Display for AffineSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z -> {}z + ({}{:+}i)", self.a, self.b.re, self.b.im)
    }
}

/// `n`-fold iterate: `z + nb` for `a = 1`, else `aⁿz + (1 - aⁿ)/(1 - a)·b`.
pub fn iterate_symbol(phi: &AffineSymbol, n: u32) -> AffineSymbol {
    if n == 0 {
        return AffineSymbol::identity();
    }
    if phi.a == 1.0 {
        return AffineSymbol::translation(phi.b * f64::from(n));
    }
    let an = phi.a.powi(n as i32);
    AffineSymbol {
        a: an,
        b: phi.b * ((1.0 - an) / (1.0 - phi.a)),
    }
}

/// The fixed point `b/(1 - a)`, attractive when `|a| < 1`.
pub fn fixed_point(phi: &AffineSymbol) -> Result<Complex64> {
    if phi.a == 1.0 {
        return Err(Error::NoUniqueFixedPoint);
    }
    Ok(phi.b / (1.0 - phi.a))
}
