//! The two compactification metrics.
//!
//! `chordal_distance` is the chordal metric on the one-point compactification
//! C ∪ {∞}, normalized so that
//!
//! ```text
//! χ(z, w) = |z − w| / (√(1+|z|²) · √(1+|w|²)),   χ(z, ∞) = 1 / √(1+|z|²),
//! ```
//!
//! which has diameter 1 and satisfies χ(a, b) ≤ |a − b| for finite a, b.
//!
//! `bar_distance` is the metric on the disc compactification C ∪ C^∞ obtained
//! by pulling back the Euclidean distance through `z ↦ z / (1 + |z|)`, with the
//! direction ∞·e^{iθ} sent to e^{iθ} on the unit circle. Its diameter is 2.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Above this modulus differences are formed between reciprocals.
const RECIPROCAL_THRESHOLD: f64 = f64::MAX / 4.0;

/// A point of the Riemann sphere C ∪ {∞}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtendedComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtendedComplex {
    /// Classifies a raw complex value: infinite components map to ∞, NaN is rejected.
    pub fn from_complex(z: Complex64) -> Option<Self> {
        if z.re.is_nan() || z.im.is_nan() {
            None
        } else if z.is_finite() {
            Some(Self::Finite(z))
        } else {
            Some(Self::Infinity)
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Self::Infinity)
    }

    pub fn finite(&self) -> Option<Complex64> {
        match *self {
            Self::Finite(z) => Some(z),
            Self::Infinity => None,
        }
    }
}

impl From<Complex64> for ExtendedComplex {
    fn from(z: Complex64) -> Self {
        Self::Finite(z)
    }
}

impl fmt::Display for ExtendedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(z) => write!(f, "{z}"),
            Self::Infinity => f.write_str("∞"),
        }
    }
}

/// A point of the disc compactification: a finite value or a direction ∞·e^{iθ}.
///
/// Directions are stored with the angle as given; equality and distances only
/// ever look at e^{iθ}.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub enum BarComplex {
    Finite(Complex64),
    Directional(f64),
}

impl BarComplex {
    /// Image of this point in the closed unit disc.
    pub fn embed(&self) -> Complex64 {
        match *self {
            Self::Finite(z) => bar_embed(z),
            Self::Directional(theta) => Complex64::from_polar(1.0, theta),
        }
    }

    pub fn is_directional(&self) -> bool {
        matches!(self, Self::Directional(_))
    }
}

impl PartialEq for BarComplex {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Self::Finite(a), Self::Finite(b)) => a == b,
            (Self::Directional(_), Self::Directional(_)) => self.embed() == other.embed(),
            _ => false,
        }
    }
}

impl From<Complex64> for BarComplex {
    fn from(z: Complex64) -> Self {
        Self::Finite(z)
    }
}

impl fmt::Display for BarComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(z) => write!(f, "{z}"),
            Self::Directional(theta) => write!(f, "∞·e^(i{theta})"),
        }
    }
}

/// Which metric a comparison or report uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MetricKind {
    #[serde(rename = "chi")]
    Chordal,
    #[serde(rename = "d")]
    Bar,
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Chordal => "chi",
            Self::Bar => "d",
        })
    }
}

#[inline]
fn one_hypot(x: f64) -> f64 {
    1.0f64.hypot(x)
}

/// Total order on finite points used to make the two-argument formulas
/// bitwise symmetric.
fn canonical_cmp(a: Complex64, b: Complex64) -> Ordering {
    a.norm()
        .total_cmp(&b.norm())
        .then(a.re.total_cmp(&b.re))
        .then(a.im.total_cmp(&b.im))
}

fn chordal_finite(a: Complex64, b: Complex64) -> f64 {
    if a == b {
        return 0.0;
    }
    // big has the larger modulus
    let (big, small) = match canonical_cmp(a, b) {
        Ordering::Less => (b, a),
        _ => (a, b),
    };
    let nb = big.norm();
    let ns = small.norm();
    if nb <= 1.0 {
        (big - small).norm() / (one_hypot(nb) * one_hypot(ns))
    } else if ns <= 1.0 {
        // |z − w| / √(1+|z|²) = |1 − w/z| / √(1+1/|z|²)
        let ratio = small.fdiv(big);
        (Complex64::new(1.0, 0.0) - ratio).norm() / (one_hypot(nb.recip()) * one_hypot(ns))
    } else {
        let denom = one_hypot(nb.recip()) * one_hypot(ns.recip());
        if nb < RECIPROCAL_THRESHOLD {
            (big - small).norm() / nb / ns / denom
        } else {
            (small.finv() - big.finv()).norm() / denom
        }
    }
}

/// Chordal distance on C ∪ {∞}. Total, symmetric, bounded by 1.
pub fn chordal_distance(a: ExtendedComplex, b: ExtendedComplex) -> f64 {
    match (a, b) {
        (ExtendedComplex::Infinity, ExtendedComplex::Infinity) => 0.0,
        (ExtendedComplex::Finite(z), ExtendedComplex::Infinity)
        | (ExtendedComplex::Infinity, ExtendedComplex::Finite(z)) => one_hypot(z.norm()).recip(),
        (ExtendedComplex::Finite(z), ExtendedComplex::Finite(w)) => chordal_finite(z, w),
    }
}

/// The homeomorphism C → D, `z ↦ z / (1 + |z|)`.
pub fn bar_embed(z: Complex64) -> Complex64 {
    let scale = z.re.abs().max(z.im.abs());
    if scale <= 1.0 {
        z / (1.0 + z.norm())
    } else {
        let unit = z / scale;
        unit / (scale.recip() + unit.norm())
    }
}

/// Distance on the disc compactification: Euclidean distance of the embedded points.
pub fn bar_distance(a: BarComplex, b: BarComplex) -> f64 {
    (a.embed() - b.embed()).norm()
}
