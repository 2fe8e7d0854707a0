//! Numerical evidence for every symbolic verdict.
//!
//! Structural checks (adjoint pairing, J-symmetry, kernel covariance,
//! finite orbits, support obstructions, orthogonality) are decided against
//! fixed tolerances. Density of an orbit is only semi-decidable: a residual
//! below the golden bar counts as a pass, and any other value short of
//! exact orthogonality is inconclusive.

mod battery;
mod golden;
mod orbit;
mod sequences;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::symbol::AffineSymbol;

pub use battery::{battery_grid, certify_all, support_bump, CertifyConfig, CertifyReport};
pub use golden::{GoldenEntry, GoldenTable, GOLDEN_ENV};
pub use orbit::{
    adjoint_kernel_points, adjoint_orbit_kernel_residual, completeness_residual, orbit, orbit_residual, span_residual,
    SpanFit, DEFAULT_REG,
};
pub use sequences::{blaschke_sum, carleman_check, BlaschkeSum, CarlemanOutcome, CarlemanStatus, ExponentialSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// What the classifier predicts for a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    Pass,
    Fail,
    /// Diagnostic only; never counted for or against consistency.
    None,
}

/// How `residual` is compared with `threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Predicate {
    /// pass iff `residual <= threshold`
    AtMost,
    /// pass iff `residual >= threshold`
    AtLeast,
    /// pass iff `residual > threshold` (strict, for density margins)
    Exceeds,
    /// pass iff `residual < threshold`; fail only at exact orthogonality,
    /// otherwise inconclusive
    DensityBelow,
    /// reported value, verdict always inconclusive
    Report,
}

/// One named numerical check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub phi: AffineSymbol,
    pub sigma: f64,
    pub residual: f64,
    pub threshold: f64,
    pub predicate: Predicate,
    pub verdict: Verdict,
    pub expected: Expectation,
    pub params: BTreeMap<String, serde_json::Value>,
}

/// Residuals at or above this level mean the target is orthogonal to the
/// computed span.
pub const ORTHOGONAL_LEVEL: f64 = 1.0 - 1e-8;

impl Predicate {
    pub fn decide(self, residual: f64, threshold: f64) -> Verdict {
        let pass_if = |b: bool| if b { Verdict::Pass } else { Verdict::Fail };
        match self {
            Self::AtMost => pass_if(residual <= threshold),
            Self::AtLeast => pass_if(residual >= threshold),
            Self::Exceeds => pass_if(residual > threshold),
            Self::DensityBelow => {
                if residual < threshold {
                    Verdict::Pass
                } else if residual >= ORTHOGONAL_LEVEL {
                    Verdict::Fail
                } else {
                    Verdict::Inconclusive
                }
            }
            Self::Report => Verdict::Inconclusive,
        }
    }
}

impl Certificate {
    pub fn new(
        name: &str,
        phi: AffineSymbol,
        sigma: f64,
        residual: f64,
        threshold: f64,
        predicate: Predicate,
        expected: Expectation,
    ) -> Self {
        Self {
            name: name.to_string(),
            phi,
            sigma,
            residual,
            threshold,
            predicate,
            verdict: predicate.decide(residual, threshold),
            expected,
            params: BTreeMap::new(),
        }
    }

    pub fn with_param(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    /// Only a definite verdict opposite to the expectation is inconsistent.
    pub fn is_consistent(&self) -> bool {
        !matches!(
            (self.expected, self.verdict),
            (Expectation::Pass, Verdict::Fail) | (Expectation::Fail, Verdict::Pass)
        )
    }

    /// Re-checks the verdict against the stored predicate.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.verdict != self.predicate.decide(self.residual, self.threshold) {
            return Err(format!(
                "{}: verdict does not follow from residual and threshold",
                self.name
            ));
        }
        if self.residual < 0.0 || self.threshold < 0.0 {
            return Err(format!("{}: negative residual or threshold", self.name));
        }
        Ok(())
    }
}
