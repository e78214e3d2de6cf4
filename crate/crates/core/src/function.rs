//! Members of the extended disc algebras, represented disc-side as `f ∘ φ⁻¹`.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::conformal::RiemannMap;
use crate::domain::root_of_unity;
use crate::error::{Error, Result};
use crate::metric::{bar_distance, chordal_distance, BarComplex, ExtendedComplex};
use crate::polynomial::Polynomial;

/// Roots within this distance of the unit circle count as boundary poles.
const CIRCLE_TOLERANCE: f64 = 1e-9;

/// A function analytic on a disc about the origin, evaluable in closed form.
pub trait Analytic: Sync {
    fn eval(&self, z: Complex64) -> Complex64;

    /// Radius of the largest open disc about 0 on which the function is analytic.
    fn radius(&self) -> f64;
}

/// Closed-form catalogue of disc-side functions.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticEvaluator {
    Polynomial(Polynomial),
    /// `num / den` with `den` zero-free on the closed disc.
    Rational {
        num: Polynomial,
        den: Polynomial,
    },
    /// `num / den` with the zeros of `den` on the unit circle (and none inside).
    BoundaryPole {
        num: Polynomial,
        den: Polynomial,
    },
    /// `c · exp(i p(z))`.
    CompositeExp {
        c: Complex64,
        p: Polynomial,
    },
}

fn finite_coeffs(p: &Polynomial, what: &str) -> Result<()> {
    if p.coeffs().iter().all(|c| c.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidFunction(format!("{what} has a non-finite coefficient")))
    }
}

impl AnalyticEvaluator {
    pub fn rational(num: Polynomial, den: Polynomial) -> Result<Self> {
        let f = Self::Rational { num, den };
        f.validate()?;
        Ok(f)
    }

    pub fn boundary_pole(num: Polynomial, den: Polynomial) -> Result<Self> {
        let f = Self::BoundaryPole { num, den };
        f.validate()?;
        Ok(f)
    }

    /// Checks the zero-location claims of the variant.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Polynomial(p) => finite_coeffs(p, "polynomial"),
            Self::CompositeExp { c, p } => {
                if !c.is_finite() {
                    return Err(Error::InvalidFunction("exp prefactor is not finite".into()));
                }
                finite_coeffs(p, "exp exponent")
            }
            Self::Rational { num, den } => {
                finite_coeffs(num, "numerator")?;
                finite_coeffs(den, "denominator")?;
                if den.is_zero() {
                    return Err(Error::InvalidFunction("zero denominator".into()));
                }
                if let Some(r) = den.roots()?.into_iter().find(|r| r.norm() <= 1.0 + CIRCLE_TOLERANCE) {
                    return Err(Error::InvalidFunction(format!(
                        "rational denominator vanishes at {r} in the closed disc"
                    )));
                }
                Ok(())
            }
            Self::BoundaryPole { num, den } => {
                finite_coeffs(num, "numerator")?;
                finite_coeffs(den, "denominator")?;
                let roots = den.roots()?;
                if let Some(r) = roots.iter().find(|r| r.norm() < 1.0 - CIRCLE_TOLERANCE) {
                    return Err(Error::InvalidFunction(format!(
                        "denominator vanishes at {r} inside the disc"
                    )));
                }
                let poles: Vec<_> = roots
                    .iter()
                    .filter(|r| (r.norm() - 1.0).abs() <= CIRCLE_TOLERANCE)
                    .collect();
                if poles.is_empty() {
                    return Err(Error::InvalidFunction(
                        "boundary-pole form needs a denominator zero on the unit circle".into(),
                    ));
                }
                let scale = num.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
                if let Some(r) = poles.iter().find(|r| num.eval(***r).norm() <= 1e-10 * scale.max(1.0)) {
                    return Err(Error::InvalidFunction(format!(
                        "numerator also vanishes at the pole {r}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Value at `z`, with the point ∞ at poles of the boundary-pole form.
    pub fn eval_extended(&self, z: Complex64) -> Result<ExtendedComplex> {
        if let Self::BoundaryPole { num, den } = self {
            let d = den.eval(z);
            if d == Complex64::new(0.0, 0.0) {
                return Ok(ExtendedComplex::Infinity);
            }
            let v = num.eval(z) / d;
            return Ok(if v.is_finite() {
                ExtendedComplex::Finite(v)
            } else {
                ExtendedComplex::Infinity
            });
        }
        let v = Analytic::eval(self, z);
        if v.is_finite() {
            Ok(ExtendedComplex::Finite(v))
        } else {
            Err(Error::EvaluationOverflow(z))
        }
    }

    /// Finite value at `z`; errors where the value is not finite.
    pub fn eval_finite(&self, z: Complex64) -> Result<Complex64> {
        match self.eval_extended(z)? {
            ExtendedComplex::Finite(v) => Ok(v),
            ExtendedComplex::Infinity => Err(Error::EvaluationOverflow(z)),
        }
    }

    /// Whether the function stays bounded on the closed disc.
    pub fn is_bounded_on_closed_disc(&self) -> bool {
        !matches!(self, Self::BoundaryPole { .. })
    }
}

impl Analytic for AnalyticEvaluator {
    #[inline]
    fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            Self::Polynomial(p) => p.eval(z),
            Self::Rational { num, den } | Self::BoundaryPole { num, den } => num.eval(z) / den.eval(z),
            Self::CompositeExp { c, p } => c * (Complex64::i() * p.eval(z)).exp(),
        }
    }

    fn radius(&self) -> f64 {
        match self {
            Self::Polynomial(_) | Self::CompositeExp { .. } => f64::INFINITY,
            Self::BoundaryPole { .. } => 1.0,
            Self::Rational { den, .. } => den
                .roots()
                .map(|roots| roots.iter().map(|r| r.norm()).fold(f64::INFINITY, f64::min))
                .unwrap_or(f64::INFINITY),
        }
    }
}

/// A member of Ã(Ω): finite type `f ∘ φ⁻¹`, or the constant ∞.
#[derive(Debug, Clone)]
pub enum ChordalFunction {
    FiniteType { f: AnalyticEvaluator, map: Arc<RiemannMap> },
    InfinityConstant,
}

impl ChordalFunction {
    pub fn finite(f: AnalyticEvaluator, map: Arc<RiemannMap>) -> Result<Self> {
        f.validate()?;
        Ok(Self::FiniteType { f, map })
    }

    /// Value of the disc-side function `f` at `z ∈ D̄`.
    pub fn disc_value(&self, z: Complex64) -> Result<ExtendedComplex> {
        match self {
            Self::InfinityConstant => Ok(ExtendedComplex::Infinity),
            Self::FiniteType { f, .. } => f.eval_extended(z),
        }
    }

    pub fn map(&self) -> Option<&Arc<RiemannMap>> {
        match self {
            Self::FiniteType { map, .. } => Some(map),
            Self::InfinityConstant => None,
        }
    }
}

/// A member of Ā(Ω): finite type `f ∘ φ⁻¹`, or infinite type `∞·e^{iθ}` with
/// `θ = Re h ∘ φ⁻¹`.
#[derive(Debug, Clone)]
pub enum BarFunction {
    FiniteType { f: AnalyticEvaluator, map: Arc<RiemannMap> },
    InfiniteType { h: AnalyticEvaluator, map: Arc<RiemannMap> },
}

impl BarFunction {
    pub fn finite(f: AnalyticEvaluator, map: Arc<RiemannMap>) -> Result<Self> {
        f.validate()?;
        if !f.is_bounded_on_closed_disc() {
            return Err(Error::InvalidFunction(
                "finite-type members of the disc compactification class must stay bounded on the closed disc".into(),
            ));
        }
        Ok(Self::FiniteType { f, map })
    }

    pub fn infinite(h: AnalyticEvaluator, map: Arc<RiemannMap>) -> Result<Self> {
        h.validate()?;
        if !(h.radius() > 1.0) {
            return Err(Error::InvalidFunction(
                "the angle function must be analytic past the closed disc".into(),
            ));
        }
        Ok(Self::InfiniteType { h, map })
    }

    pub fn map(&self) -> &Arc<RiemannMap> {
        match self {
            Self::FiniteType { map, .. } | Self::InfiniteType { map, .. } => map,
        }
    }

    pub fn disc_value(&self, z: Complex64) -> Result<BarComplex> {
        match self {
            Self::FiniteType { f, .. } => f.eval_finite(z).map(BarComplex::Finite),
            Self::InfiniteType { h, .. } => Ok(BarComplex::Directional(angle(h, z))),
        }
    }
}

/// θ(z) = Re h(z).
#[inline]
pub fn angle(h: &AnalyticEvaluator, z: Complex64) -> f64 {
    Analytic::eval(h, z).re
}

/// `g(w)` for `w ∈ Ω̄`.
pub fn evaluate_chordal(g: &ChordalFunction, w: Complex64) -> Result<ExtendedComplex> {
    match g {
        ChordalFunction::InfinityConstant => Ok(ExtendedComplex::Infinity),
        ChordalFunction::FiniteType { f, map } => f.eval_extended(map.invert(w)?),
    }
}

/// `g(w)` for `w ∈ Ω̄`.
pub fn evaluate_bar(g: &BarFunction, w: Complex64) -> Result<BarComplex> {
    let z = g.map().invert(w)?;
    g.disc_value(z)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuityLevel {
    pub samples: usize,
    /// Largest metric jump between adjacent boundary samples divided by their Euclidean gap.
    pub max_ratio: f64,
    /// Largest metric jump between adjacent boundary samples.
    pub max_jump: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuityReport {
    pub levels: Vec<ContinuityLevel>,
    pub suspected_discontinuity: bool,
}

impl ContinuityReport {
    pub fn modulus(&self) -> f64 {
        self.levels.last().map_or(0.0, |l| l.max_ratio)
    }
}

/// Refinement levels examined by the continuity diagnostic (`m, 2m, 4m, 8m`).
const CONTINUITY_LEVELS: u32 = 4;
/// Growth of the ratio across the levels that flags a discontinuity. A jump
/// that does not shrink grows the ratio by 8; Lipschitz data keeps it near 1.
const DISCONTINUITY_GROWTH: f64 = 4.0;

/// Empirical modulus of continuity of boundary values under refinement.
///
/// `value` maps a disc point to the function value there, `distance` is the
/// metric on values. The boundary of `map`'s domain is sampled at `m·2^j`
/// points.
pub fn continuity_diagnostic_with<V>(
    map: &RiemannMap,
    m: usize,
    value: impl Fn(Complex64) -> Result<V>,
    distance: impl Fn(&V, &V) -> f64,
) -> Result<ContinuityReport> {
    if m < 64 {
        return Err(Error::TooFewSamples { required: 64, got: m });
    }
    let psi = map.forward();
    let mut levels = Vec::new();
    for level in 0..CONTINUITY_LEVELS {
        let samples = m << level;
        let disc: Vec<Complex64> = (0..samples).map(|k| root_of_unity(k, samples)).collect();
        let values = disc.iter().map(|&z| value(z)).collect::<Result<Vec<V>>>()?;
        let images: Vec<Complex64> = disc.iter().map(|&z| psi.eval(z)).collect();
        let mut max_ratio: f64 = 0.0;
        let mut max_jump: f64 = 0.0;
        for k in 0..samples {
            let next = (k + 1) % samples;
            let jump = distance(&values[k], &values[next]);
            let gap = (images[k] - images[next]).norm();
            max_jump = max_jump.max(jump);
            if gap > 0.0 {
                max_ratio = max_ratio.max(jump / gap);
            }
        }
        levels.push(ContinuityLevel {
            samples,
            max_ratio,
            max_jump,
        });
    }
    let first = levels[0].max_ratio;
    let last = levels[levels.len() - 1].max_ratio;
    let suspected_discontinuity = last > 0.0 && last > DISCONTINUITY_GROWTH * first;
    Ok(ContinuityReport {
        levels,
        suspected_discontinuity,
    })
}

impl ChordalFunction {
    pub fn continuity_diagnostic(&self, m: usize) -> Result<ContinuityReport> {
        let fallback;
        let map = match self.map() {
            Some(map) => map.as_ref(),
            None => {
                fallback = RiemannMap::new(crate::domain::DomainSpec::UnitDisc)?;
                &fallback
            }
        };
        continuity_diagnostic_with(map, m, |z| self.disc_value(z), |a, b| chordal_distance(*a, *b))
    }
}

impl BarFunction {
    pub fn continuity_diagnostic(&self, m: usize) -> Result<ContinuityReport> {
        continuity_diagnostic_with(self.map(), m, |z| self.disc_value(z), |a, b| bar_distance(*a, *b))
    }
}
