//! Zero-set and density diagnostics for exponential systems.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::SigmaBand;

/// Finite frequency list `(λ_n)` for the system `(e^{iλ_n t})`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentialSequence {
    lambdas: Vec<f64>,
}

impl ExponentialSequence {
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.len() < 2 {
            return Err(Error::InvalidArgument(
                "an exponential sequence needs at least 2 frequencies".into(),
            ));
        }
        if lambdas.iter().any(|l| !l.is_finite()) {
            return Err(Error::InvalidArgument("frequencies must be finite".into()));
        }
        Ok(Self { lambdas })
    }

    /// `λ_n = step·n` for `n = first..=last`.
    pub fn arithmetic(step: f64, first: u32, last: u32) -> Result<Self> {
        Self::new((first..=last).map(|n| step * f64::from(n)).collect())
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }
}

/// Partial Blaschke-type sum with a divergence diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeSum {
    pub partial_sum: f64,
    /// Least-squares slope of the partial sums against `ln n` over the
    /// last dyadic checkpoints: about 1 for `Σ n/(1+n²)`, about 0 when the
    /// series has converged.
    pub log_slope: f64,
}

/// `Σ_{n < horizon} |Im w_n| / (1 + |w_n|²)`.
pub fn blaschke_sum(points: &[Complex64], horizon: usize) -> Result<BlaschkeSum> {
    if horizon == 0 || horizon > points.len() {
        return Err(Error::InvalidArgument(format!(
            "horizon {horizon} must lie in 1..={}",
            points.len()
        )));
    }
    let mut sum = 0.0;
    let mut checkpoints = Vec::new();
    let mut next = 2usize;
    for (k, w) in points[..horizon].iter().enumerate() {
        sum += w.im.abs() / (1.0 + w.norm_sqr());
        let count = k + 1;
        if count == next || count == horizon {
            checkpoints.push(((count as f64).ln(), sum));
            next *= 2;
        }
    }
    // fit on the upper half of the checkpoints
    let tail = &checkpoints[checkpoints.len() / 2..];
    let log_slope = if tail.len() < 2 {
        0.0
    } else {
        let n = tail.len() as f64;
        let mx = tail.iter().map(|p| p.0).sum::<f64>() / n;
        let my = tail.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = tail.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = tail.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        if sxx > 0.0 {
            sxy / sxx
        } else {
            0.0
        }
    };
    Ok(BlaschkeSum {
        partial_sum: sum,
        log_slope,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CarlemanStatus {
    Satisfied,
    Violated,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarlemanOutcome {
    pub status: CarlemanStatus,
    /// Tail-window minimum of `n/λ_n` minus `σ/π`.
    pub margin: f64,
    pub tail_min: f64,
    pub previous_min: f64,
}

/// Finite-data proxy for `liminf n/λ_n > σ/π`.
///
/// Frequencies are sorted and deduplicated, then indexed from `n = 1`. The
/// liminf is replaced by the minimum of `n/λ_n` over the window
/// `[len/2, len)`, compared with the window `[len/4, len/2)`:
///
/// * satisfied: margin above rounding level and the two minima agree to 10%
/// * violated: margin at or below rounding level and the minima are not
///   increasing (a decreasing tail only lowers the liminf)
/// * inconclusive: otherwise
pub fn carleman_check(seq: &ExponentialSequence, band: SigmaBand) -> Result<CarlemanOutcome> {
    let mut lambdas = seq.lambdas().to_vec();
    if lambdas.iter().any(|&l| l <= 0.0) {
        return Err(Error::InvalidArgument(
            "Carleman density needs positive frequencies".into(),
        ));
    }
    lambdas.sort_by(f64::total_cmp);
    lambdas.dedup();
    let len = lambdas.len();
    if len < 4 {
        return Err(Error::InvalidArgument("need at least 4 distinct frequencies".into()));
    }
    let ratio = |i: usize| (i + 1) as f64 / lambdas[i];
    let window_min = |lo: usize, hi: usize| (lo..hi).map(ratio).fold(f64::INFINITY, f64::min);
    let tail_min = window_min(len / 2, len);
    let previous_min = window_min(len / 4, len / 2);
    let density = band.sigma() / std::f64::consts::PI;
    let margin = tail_min - density;
    let slack = 1e-12 * density.max(1.0);
    let stable = (tail_min - previous_min).abs() < 0.1 * previous_min.abs().max(f64::MIN_POSITIVE);

    let status = if margin > slack && stable {
        CarlemanStatus::Satisfied
    } else if margin <= slack && (stable || tail_min <= previous_min) {
        CarlemanStatus::Violated
    } else {
        CarlemanStatus::Inconclusive
    };
    Ok(CarlemanOutcome {
        status,
        margin,
        tail_min,
        previous_min,
    })
}
