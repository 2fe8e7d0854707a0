//! Weighted composition operators `C_φ f = f∘φ` with affine symbols
//! `φ(z) = az + b` on the Paley–Wiener space of type `σ`.
//!
//! Functions are stored through their Fourier transforms on `[-σ, σ]`,
//! sampled at Gauss–Legendre nodes. The operators become explicit
//! rescalings and modulations there, which is what [`operator`] implements.
//! [`classify`] decides the operator-theoretic properties of `φ` in closed
//! form and [`certify`] produces numerical evidence for each verdict.

pub mod certify;
pub mod classify;
pub mod error;
pub mod matrix;
pub mod operator;
pub mod quadrature;
pub mod samples;
pub mod spectral;
pub mod symbol;

pub use classify::{classify, explain, Classification, KernelCyclicity, RealnessTolerance, Rule};
pub use error::{Error, Result};
pub use matrix::{assemble_matrix, commutator_residual, compressed_commutator_residual, OperatorKind, OperatorMatrix};
pub use operator::{adjoint_symbol, apply_chat, apply_chat_adjoint, apply_conjugation, ConjugationTag};
pub use quadrature::{make_cut_grid, make_grid, GridSpec, SigmaBand};
pub use spectral::{eval_entire, inner_product, kernel_spectral, kernel_value, KernelPoint, SpectralFunction};
pub use symbol::{fixed_point, iterate_symbol, AffineSymbol};
