//! Polynomial approximation of functions with values on the Riemann sphere
//! (chordal metric) or on the disc compactification of the plane, over Jordan
//! domains that are polynomial images of the unit disc.
//!
//! The adopted chordal metric is `χ(z, w) = |z − w| / (√(1+|z|²)·√(1+|w|²))`,
//! with `χ(z, ∞) = 1/√(1+|z|²)`; it has diameter 1.

// `!(x > 0.0)` and friends are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod conformal;
pub mod domain;
mod error;
pub mod function;
pub mod harness;
pub mod metric;
pub mod polynomial;

pub use approx::{
    mergelyan_step, taylor_truncate, theorem1_pipeline, theorem2_pipeline, ApproximationReport, ArnoldiPolynomial,
    Evaluate, PipelineControls,
};
pub use conformal::{InverseControls, RiemannMap};
pub use domain::{boundary_points, contains, validate_domain, DomainSpec, ValidationReport};
pub use error::{Error, Result};
pub use function::{evaluate_bar, evaluate_chordal, AnalyticEvaluator, BarFunction, ChordalFunction};
pub use metric::{bar_distance, bar_embed, chordal_distance, BarComplex, ExtendedComplex, MetricKind};
pub use num_complex::Complex64;
pub use polynomial::Polynomial;
