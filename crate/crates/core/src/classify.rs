//! Exact decision procedures for `C_φ` on `B²_σ`, `φ(z) = az + b`.
//!
//! | property            | holds exactly when                                   |
//! |---------------------|------------------------------------------------------|
//! | bounded             | `a ∈ ℝ`, `0 < |a| ≤ 1`                               |
//! | cyclic              | `a = 1` and (`b ∉ ℝ` or `0 < |b| ≤ π/σ`)             |
//! | adjoint cyclic      | `0 < |a| < 1`, or `C_φ` cyclic                       |
//! | supercyclic         | never                                                |
//! | complex symmetric   | `a = ±1`                                             |
//! | normal              | `a = 1`, or `a = -1` with `b ∈ ℝ`                    |
//! | self-adjoint        | `a = 1, b ∈ iℝ`, or `a = -1, b ∈ ℝ`                  |
//! | unitary             | `a = ±1`, `b ∈ ℝ`                                    |
//!
//! Real-line membership is decided on floats with a visible tolerance.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::SigmaBand;

/// Threshold on `|Im b|`, `|Re b|` and `|1 - |a||` for exact-membership
/// decisions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealnessTolerance(f64);

impl RealnessTolerance {
    pub const DEFAULT: Self = Self(1e-12);

    pub fn new(eps: f64) -> Result<Self> {
        if eps.is_finite() && eps >= 0.0 {
            Ok(Self(eps))
        } else {
            Err(Error::InvalidArgument(format!(
                "tolerance must be finite and >= 0, got {eps}"
            )))
        }
    }

    pub fn exact() -> Self {
        Self(0.0)
    }

    pub fn eps(self) -> f64 {
        self.0
    }
}

impl Default for RealnessTolerance {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Whether every reproducing kernel `k_w` is a cyclic vector for `C_φ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelCyclicity {
    All,
    None,
    NotCovered,
}

/// Named rules backing each verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    AffineBounded,
    Unbounded,
    ContractionSupport,
    ContractionKernelOrbits,
    ContractionNotSymmetric,
    InvolutionOrbit,
    IdentityOrbit,
    TranslationInjective,
    TranslationPeriodic,
    AdjointBySymmetry,
    NeverSupercyclic,
    ConjugationSymmetric,
    TranslationMultiplier,
    ReflectionNormal,
    ReflectionNotNormal,
    SelfAdjointTranslation,
    SelfAdjointReflection,
    NotSelfAdjoint,
    UnitaryRealShift,
    NotUnitary,
    KernelsBlaschke,
    KernelsCarleman,
    KernelsOrthogonalBasis,
    KernelsOperatorNotCyclic,
    KernelsFiniteOrbit,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Self::AffineBounded => "affine-bounded",
            Self::Unbounded => "affine-unbounded",
            Self::ContractionSupport => "contraction-support",
            Self::ContractionKernelOrbits => "contraction-kernel-orbits",
            Self::ContractionNotSymmetric => "contraction-cyclicity-asymmetry",
            Self::InvolutionOrbit => "involution-orbit",
            Self::IdentityOrbit => "identity-orbit",
            Self::TranslationInjective => "translation-injective-multiplier",
            Self::TranslationPeriodic => "translation-periodic-multiplier",
            Self::AdjointBySymmetry => "adjoint-by-complex-symmetry",
            Self::NeverSupercyclic => "never-supercyclic",
            Self::ConjugationSymmetric => "conjugation-symmetric",
            Self::TranslationMultiplier => "translation-multiplier",
            Self::ReflectionNormal => "reflection-real-shift",
            Self::ReflectionNotNormal => "reflection-complex-shift",
            Self::SelfAdjointTranslation => "self-adjoint-imaginary-translation",
            Self::SelfAdjointReflection => "self-adjoint-real-reflection",
            Self::NotSelfAdjoint => "not-self-adjoint",
            Self::UnitaryRealShift => "unitary-real-shift",
            Self::NotUnitary => "not-unitary",
            Self::KernelsBlaschke => "kernels-blaschke-divergence",
            Self::KernelsCarleman => "kernels-carleman-density",
            Self::KernelsOrthogonalBasis => "kernels-orthogonal-basis",
            Self::KernelsOperatorNotCyclic => "kernels-operator-not-cyclic",
            Self::KernelsFiniteOrbit => "kernels-finite-orbit",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Self::AffineBounded => "phi(z) = az + b with real 0 < |a| <= 1 induces a bounded operator",
            Self::Unbounded => "only affine symbols with real 0 < |a| <= 1 give bounded C_phi",
            Self::ContractionSupport => {
                "for 0 < |a| < 1 every orbit element after the seed vanishes outside (-|a|sigma, |a|sigma)"
            }
            Self::ContractionKernelOrbits => {
                "for 0 < |a| < 1 the adjoint kernel orbit k_{phi^[n](w)} accumulates at the attractive fixed point b/(1-a)"
            }
            Self::ContractionNotSymmetric => {
                "C_phi is not cyclic while C_phi* is, so no conjugation intertwines them"
            }
            Self::InvolutionOrbit => "a = -1 gives C_phi^2 = I, so every orbit has at most two elements",
            Self::IdentityOrbit => "phi = id gives C_phi = I, so every orbit is a single vector",
            Self::TranslationInjective => {
                "a = 1: the spectral side is multiplication by e^{ibt}, injective a.e. on [-sigma, sigma]"
            }
            Self::TranslationPeriodic => {
                "a = 1, real |b| > pi/sigma: e^{ibt} has period shorter than 2 sigma and is not injective a.e."
            }
            Self::AdjointBySymmetry => "for a = ±1 complex symmetry transfers cyclicity between C_phi and C_phi*",
            Self::NeverSupercyclic => "normal, involutive or non-cyclic operators are never supercyclic",
            Self::ConjugationSymmetric => "C_phi is J_a-symmetric with (J_a f)(z) = conj(f(-a conj(z)))",
            Self::TranslationMultiplier => "a = 1: the spectral side is a multiplication operator, hence normal",
            Self::ReflectionNormal => "a = -1 with real b commutes with its adjoint",
            Self::ReflectionNotNormal => "a = -1 with non-real b: C_phi C_phi* and C_phi* C_phi multiply by different weights e^{±2 Im(b) t}",
            Self::SelfAdjointTranslation => "a = 1 with b purely imaginary gives a real multiplier",
            Self::SelfAdjointReflection => "a = -1 with real b equals its adjoint",
            Self::NotSelfAdjoint => "self-adjoint only for a = 1, b in iR or a = -1, b in R",
            Self::UnitaryRealShift => "a = ±1 with real b preserves the norm and is invertible",
            Self::NotUnitary => "unitary only for a = ±1 and real b",
            Self::KernelsBlaschke => {
                "kernel orbit points w - n conj(b) violate the Blaschke-type condition for zero sets"
            }
            Self::KernelsCarleman => "exponentials e^{ibnt} satisfy the Carleman density condition for 0 < |b| < pi/sigma",
            Self::KernelsOrthogonalBasis => {
                "|b| = pi/sigma: e^{ibnt}, n in Z, is an orthogonal basis and its n >= 0 half is incomplete"
            }
            Self::KernelsOperatorNotCyclic => "no vector is cyclic for a non-cyclic operator",
            Self::KernelsFiniteOrbit => "finite orbits never span an infinite-dimensional space",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Full decision record for one `(σ, a, b)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub bounded: bool,
    pub cyclic: bool,
    pub adjoint_cyclic: bool,
    pub supercyclic: bool,
    pub complex_symmetric: bool,
    pub normal: bool,
    pub self_adjoint: bool,
    pub unitary: bool,
    pub kernels_all_cyclic: KernelCyclicity,
    pub eps_real: f64,
    pub rule_citations: Vec<String>,
}

impl Classification {
    /// Checks the implication structure every emitted record must satisfy.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let mut bad = Vec::new();
        if self.unitary && !self.normal {
            bad.push("unitary without normal");
        }
        if self.normal && !self.complex_symmetric {
            bad.push("normal without complex symmetric");
        }
        if self.self_adjoint && !self.normal {
            bad.push("self-adjoint without normal");
        }
        if self.cyclic && !self.adjoint_cyclic {
            bad.push("cyclic without adjoint cyclic");
        }
        if self.supercyclic && self.bounded {
            bad.push("bounded supercyclic");
        }
        if self.kernels_all_cyclic == KernelCyclicity::All && !self.cyclic {
            bad.push("cyclic kernels for a non-cyclic operator");
        }
        if !self.bounded
            && (self.cyclic
                || self.adjoint_cyclic
                || self.supercyclic
                || self.complex_symmetric
                || self.normal
                || self.self_adjoint
                || self.unitary
                || self.kernels_all_cyclic != KernelCyclicity::NotCovered)
        {
            bad.push("verdicts recorded for an unbounded symbol");
        }
        if self.rule_citations.is_empty() {
            bad.push("no rule citations");
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(bad.join("; "))
        }
    }
}

struct Citations(Vec<String>);

impl Citations {
    fn cite(&mut self, verdict: &str, rule: Rule) {
        self.0.push(format!("{verdict}: {}", rule.id()));
    }
}

/// Decides every property of `C_φ` on `B²_σ`; total on all inputs.
pub fn classify(band: SigmaBand, a: f64, b: Complex64, tol: RealnessTolerance) -> Classification {
    let eps = tol.eps();
    let mut cites = Citations(Vec::new());

    let bounded = a.is_finite()
        && b.re.is_finite()
        && b.im.is_finite()
        && a != 0.0
        && (a.abs() <= 1.0 || (1.0 - a.abs()).abs() <= eps);
    if !bounded {
        cites.cite("unbounded", Rule::Unbounded);
        return Classification {
            bounded: false,
            cyclic: false,
            adjoint_cyclic: false,
            supercyclic: false,
            complex_symmetric: false,
            normal: false,
            self_adjoint: false,
            unitary: false,
            kernels_all_cyclic: KernelCyclicity::NotCovered,
            eps_real: eps,
            rule_citations: cites.0,
        };
    }
    cites.cite("bounded", Rule::AffineBounded);

    let unimodular = (1.0 - a.abs()).abs() <= eps;
    let is_one = unimodular && a > 0.0;
    let is_minus_one = unimodular && a < 0.0;
    let contraction = !unimodular;
    let b_real = b.im.abs() <= eps;
    let b_imaginary = b.re.abs() <= eps;
    let critical = band.critical_shift();
    let shift = b.re.abs();

    let cyclic = is_one && (!b_real || (shift > eps && shift <= critical));
    if contraction {
        cites.cite("not cyclic", Rule::ContractionSupport);
    } else if is_minus_one {
        cites.cite("not cyclic", Rule::InvolutionOrbit);
    } else if cyclic {
        cites.cite("cyclic", Rule::TranslationInjective);
    } else if shift <= eps {
        cites.cite("not cyclic", Rule::IdentityOrbit);
    } else {
        cites.cite("not cyclic", Rule::TranslationPeriodic);
    }

    let adjoint_cyclic = contraction || cyclic;
    if contraction {
        cites.cite("adjoint cyclic", Rule::ContractionKernelOrbits);
    } else if cyclic {
        cites.cite("adjoint cyclic", Rule::AdjointBySymmetry);
    } else {
        cites.cite("adjoint not cyclic", Rule::AdjointBySymmetry);
    }

    cites.cite("not supercyclic", Rule::NeverSupercyclic);

    let complex_symmetric = unimodular;
    if complex_symmetric {
        cites.cite("complex symmetric", Rule::ConjugationSymmetric);
    } else {
        cites.cite("not complex symmetric", Rule::ContractionNotSymmetric);
    }

    let normal = is_one || (is_minus_one && b_real);
    if is_one {
        cites.cite("normal", Rule::TranslationMultiplier);
    } else if is_minus_one && b_real {
        cites.cite("normal", Rule::ReflectionNormal);
    } else if is_minus_one {
        cites.cite("not normal", Rule::ReflectionNotNormal);
    } else {
        cites.cite("not normal", Rule::ContractionNotSymmetric);
    }

    let self_adjoint = (is_one && b_imaginary) || (is_minus_one && b_real);
    if is_one && b_imaginary {
        cites.cite("self-adjoint", Rule::SelfAdjointTranslation);
    } else if is_minus_one && b_real {
        cites.cite("self-adjoint", Rule::SelfAdjointReflection);
    } else {
        cites.cite("not self-adjoint", Rule::NotSelfAdjoint);
    }

    let unitary = unimodular && b_real;
    if unitary {
        cites.cite("unitary", Rule::UnitaryRealShift);
    } else {
        cites.cite("not unitary", Rule::NotUnitary);
    }

    let kernels_all_cyclic = if is_one {
        if !b_real {
            cites.cite("kernels all cyclic", Rule::KernelsBlaschke);
            KernelCyclicity::All
        } else if shift <= eps {
            cites.cite("kernels not cyclic", Rule::KernelsFiniteOrbit);
            KernelCyclicity::None
        } else if (shift - critical).abs() <= eps * critical {
            cites.cite("kernels not cyclic", Rule::KernelsOrthogonalBasis);
            KernelCyclicity::None
        } else if shift < critical {
            cites.cite("kernels all cyclic", Rule::KernelsCarleman);
            KernelCyclicity::All
        } else {
            cites.cite("kernels not cyclic", Rule::KernelsOperatorNotCyclic);
            KernelCyclicity::None
        }
    } else if is_minus_one {
        cites.cite("kernels not cyclic", Rule::KernelsFiniteOrbit);
        KernelCyclicity::None
    } else {
        cites.cite("kernels not cyclic", Rule::KernelsOperatorNotCyclic);
        cites.cite("adjoint kernels all cyclic", Rule::ContractionKernelOrbits);
        KernelCyclicity::None
    };

    Classification {
        bounded,
        cyclic,
        adjoint_cyclic,
        supercyclic: false,
        complex_symmetric,
        normal,
        self_adjoint,
        unitary,
        kernels_all_cyclic,
        eps_real: eps,
        rule_citations: cites.0,
    }
}

fn rule_by_id(id: &str) -> Option<Rule> {
    use Rule::*;
    [
        AffineBounded,
        Unbounded,
        ContractionSupport,
        ContractionKernelOrbits,
        ContractionNotSymmetric,
        InvolutionOrbit,
        IdentityOrbit,
        TranslationInjective,
        TranslationPeriodic,
        AdjointBySymmetry,
        NeverSupercyclic,
        ConjugationSymmetric,
        TranslationMultiplier,
        ReflectionNormal,
        ReflectionNotNormal,
        SelfAdjointTranslation,
        SelfAdjointReflection,
        NotSelfAdjoint,
        UnitaryRealShift,
        NotUnitary,
        KernelsBlaschke,
        KernelsCarleman,
        KernelsOrthogonalBasis,
        KernelsOperatorNotCyclic,
        KernelsFiniteOrbit,
    ]
    .into_iter()
    .find(|r| r.id() == id)
}

/// One human-readable line per cited verdict: `verdict: rule-id (why)`.
pub fn explain(c: &Classification) -> Vec<String> {
    c.rule_citations
        .iter()
        .map(|cite| {
            let rule = cite.rsplit_once(": ").and_then(|(_, id)| rule_by_id(id));
            match rule {
                Some(r) => format!("{cite} ({})", r.description()),
                None => cite.clone(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn band(s: f64) -> SigmaBand {
        SigmaBand::new(s).unwrap()
    }

    fn run(s: f64, a: f64, re: f64, im: f64) -> Classification {
        classify(band(s), a, Complex64::new(re, im), RealnessTolerance::default())
    }

    #[test]
    fn critical_translation() {
        let c = run(PI, 1.0, 1.0, 0.0);
        assert!(c.cyclic && c.adjoint_cyclic && c.normal && c.unitary);
        assert_eq!(c.kernels_all_cyclic, KernelCyclicity::None);
        assert!(c
            .rule_citations
            .iter()
            .any(|r| r == "kernels not cyclic: kernels-orthogonal-basis"));
    }

    #[test]
    fn imaginary_translation() {
        let c = run(PI, 1.0, 0.0, 1.0);
        assert!(c.cyclic && c.normal && c.self_adjoint && !c.unitary);
        assert_eq!(c.kernels_all_cyclic, KernelCyclicity::All);
    }

    #[test]
    fn contraction() {
        let c = run(PI, 0.5, 1.0, 0.0);
        assert!(!c.cyclic && c.adjoint_cyclic && !c.complex_symmetric && !c.supercyclic);
        assert!(!c.normal && !c.unitary && !c.self_adjoint);
    }

    #[test]
    fn wide_band_loses_cyclicity() {
        let c = run(2.0 * PI, 1.0, 1.0, 0.0);
        assert!(!c.cyclic && !c.adjoint_cyclic);
        assert_eq!(c.kernels_all_cyclic, KernelCyclicity::None);
        assert!(c
            .rule_citations
            .iter()
            .any(|r| r.ends_with("kernels-operator-not-cyclic")));
    }

    #[test]
    fn real_reflection() {
        let c = run(1.0, -1.0, 3.0, 0.0);
        assert!(!c.cyclic && c.normal && c.self_adjoint && c.unitary && c.complex_symmetric);
        let c = run(1.0, -1.0, 0.0, 1.0);
        assert!(!c.normal && c.complex_symmetric && !c.unitary);
    }

    #[test]
    fn unbounded() {
        let c = run(1.0, 2.0, 0.0, 0.0);
        assert!(!c.bounded);
        assert_eq!(c.kernels_all_cyclic, KernelCyclicity::NotCovered);
        assert!(run(1.0, 0.0, 1.0, 0.0).validate().is_ok());
        assert!(!run(1.0, f64::NAN, 1.0, 0.0).bounded);
    }

    #[test]
    fn identity_and_subcritical() {
        let c = run(PI, 1.0, 0.0, 0.0);
        assert!(!c.cyclic && c.self_adjoint && c.unitary);
        let c = run(PI, 1.0, -0.5, 0.0);
        assert!(c.cyclic);
        assert_eq!(c.kernels_all_cyclic, KernelCyclicity::All);
    }

    #[test]
    fn explanations() {
        let lines = explain(&run(PI, 1.0, 1.0, 0.0));
        assert!(lines
            .iter()
            .any(|l| l.starts_with("cyclic: translation-injective-multiplier")));
        let lines = explain(&run(1.0, 0.5, 0.0, 0.0));
        assert!(lines
            .iter()
            .any(|l| l.starts_with("not complex symmetric: contraction-cyclicity-asymmetry")));
        let lines = explain(&run(1.0, 2.0, 0.0, 0.0));
        assert_eq!(lines.len(), 1);
        assert!(lines[0].starts_with("unbounded: affine-unbounded"));
    }

    #[test]
    fn threshold_flip_is_exact() {
        for s in [0.3, 1.0, PI, 7.0] {
            let crit = PI / s;
            let t = RealnessTolerance::exact();
            assert!(classify(band(s), 1.0, Complex64::new(crit, 0.0), t).cyclic);
            assert!(classify(band(s), 1.0, Complex64::new(-crit, 0.0), t).cyclic);
            assert!(!classify(band(s), 1.0, Complex64::new(crit * (1.0 + 1e-9), 0.0), t).cyclic);
        }
    }

    #[test]
    fn json_schema_round_trip() {
        let c = run(PI, 1.0, 0.5, 0.0);
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.contains("\"kernels_all_cyclic\":\"all\""));
        let back: Classification = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        back.validate().unwrap();
        let text = serde_json::to_string(&run(1.0, 2.0, 0.0, 0.0)).unwrap();
        assert!(text.contains("\"not-covered\""));
    }
}
