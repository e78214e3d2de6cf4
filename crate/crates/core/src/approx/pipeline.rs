use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::mergelyan::{mergelyan_step, ArnoldiPolynomial, DomainPoint, Evaluate, MergelyanFit, SAMPLES_PER_DEGREE};
use super::taylor::taylor_truncate;
use crate::conformal::{InverseControls, RiemannMap};
use crate::domain::{root_of_unity, DomainSpec};
use crate::error::{Error, Result};
use crate::function::{angle, Analytic, AnalyticEvaluator, BarFunction, ChordalFunction};
use crate::metric::{bar_distance, chordal_distance, BarComplex, ExtendedComplex, MetricKind};
use crate::polynomial::Polynomial;

pub const DEFAULT_VERIFY_BOUNDARY: usize = 4096;
pub const DEFAULT_VERIFY_INTERIOR: usize = 2048;
pub const DEFAULT_MAGNITUDE: f64 = 1e3;

/// Dilation used for catalogue functions with a singularity on the unit
/// circle: `r(n) = 1 − ln(n+3)/(n+3)`, which balances the dilation error
/// `~ 1 − r` against the truncation tail `~ r^{n+1}`.
pub fn default_dilation(n: usize) -> f64 {
    let t = (n + 3) as f64;
    1.0 - t.ln() / t
}

/// The divergent magnitude schedule for the constant ∞: `R(n) = n`.
pub fn infinity_schedule(n: usize) -> f64 {
    n as f64
}

/// Verification points: images of `boundary` roots of unity followed by
/// images of `interior` points spread uniformly over the open disc.
#[derive(Debug, Clone)]
pub struct VerificationGrid {
    pub disc: Vec<Complex64>,
    pub domain: Vec<Complex64>,
    pub boundary: usize,
}

impl VerificationGrid {
    pub fn new(map: &RiemannMap, boundary: usize, interior: usize) -> Result<Self> {
        if boundary < 3 {
            return Err(Error::TooFewSamples {
                required: 3,
                got: boundary,
            });
        }
        let mut disc: Vec<Complex64> = (0..boundary).map(|k| root_of_unity(k, boundary)).collect();
        // Vogel spiral: equal-area rings, all radii strictly below 1.
        let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
        disc.extend((0..interior).map(|i| {
            let radius = ((i as f64 + 0.5) / interior as f64).sqrt();
            Complex64::from_polar(radius, golden * i as f64)
        }));
        let domain = disc.iter().map(|&z| map.evaluate(z)).collect::<Result<Vec<_>>>()?;
        Ok(Self { disc, domain, boundary })
    }

    pub fn len(&self) -> usize {
        self.disc.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disc.is_empty()
    }

    pub fn interior(&self) -> usize {
        self.disc.len() - self.boundary
    }
}

/// Order-independent maximum of per-point values computed in parallel.
pub(crate) fn grid_max<F>(len: usize, f: F) -> Result<f64>
where
    F: Fn(usize) -> Result<f64> + Sync,
{
    let values = (0..len).into_par_iter().map(&f).collect::<Result<Vec<f64>>>()?;
    Ok(values.into_iter().fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineControls {
    /// Disc-stage dilation; `None` picks [`default_dilation`] for functions with
    /// boundary singularities and no dilation otherwise.
    pub dilation: Option<f64>,
    /// Magnitude `R` for infinite-type targets.
    pub magnitude: f64,
    /// Boundary samples for the fit; `None` means `10 (n + 1)`.
    pub boundary_samples: Option<usize>,
    pub verify_boundary: usize,
    pub verify_interior: usize,
    pub inverse: InverseControls,
}

impl Default for PipelineControls {
    fn default() -> Self {
        Self {
            dilation: None,
            magnitude: DEFAULT_MAGNITUDE,
            boundary_samples: None,
            verify_boundary: DEFAULT_VERIFY_BOUNDARY,
            verify_interior: DEFAULT_VERIFY_INTERIOR,
            inverse: InverseControls::default(),
        }
    }
}

impl PipelineControls {
    fn samples_for(&self, n: usize) -> usize {
        self.boundary_samples.unwrap_or(SAMPLES_PER_DEGREE * (n + 1))
    }

    fn dilation_for(&self, f: &AnalyticEvaluator, n: usize) -> f64 {
        self.dilation
            .unwrap_or_else(|| if f.radius() > 1.0 { 1.0 } else { default_dilation(n) })
    }
}

/// Per-stage sup errors of one pipeline run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproximationReport {
    pub degree: usize,
    pub metric: MetricKind,
    /// sup over D̄ of the metric gap between `P` and the disc-side target.
    pub disc_stage: f64,
    /// sup of |P∘φ⁻¹ − Q| over the fit's refined boundary grid and the verification grid.
    pub mergelyan_stage: f64,
    /// sup over the verification grid of the metric gap between `Q` and the target.
    pub total: f64,
    /// The fit's own error on its `4m` boundary grid.
    pub mergelyan_boundary_error: f64,
    pub boundary_samples: usize,
    pub verify_boundary: usize,
    pub verify_interior: usize,
    pub dilation: Option<f64>,
    pub magnitude: Option<f64>,
    /// Infinite type: `1/(1 + R e^{−max Im h})`.
    pub analytic_bound: Option<f64>,
    /// Infinite type: sup of d(P, R e^{ih}) over D̄.
    pub truncation: Option<f64>,
}

/// Disc-side stage output.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscApproximation {
    pub polynomial: Polynomial,
    pub error: f64,
    pub dilation: Option<f64>,
    pub magnitude: Option<f64>,
    pub analytic_bound: Option<f64>,
    pub truncation: Option<f64>,
}

impl DiscApproximation {
    fn plain(polynomial: Polynomial, error: f64, dilation: Option<f64>) -> Self {
        Self {
            polynomial,
            error,
            dilation,
            magnitude: None,
            analytic_bound: None,
            truncation: None,
        }
    }
}

fn finite_disc_approx<D>(
    f: &AnalyticEvaluator,
    n: usize,
    r: f64,
    grid: &VerificationGrid,
    gap: D,
) -> Result<DiscApproximation>
where
    D: Fn(Complex64, Complex64) -> Result<f64> + Sync,
{
    let p = taylor_truncate(f, r, n)?;
    let error = grid_max(grid.len(), |i| {
        let z = grid.disc[i];
        gap(p.eval(z), z)
    })?;
    Ok(DiscApproximation::plain(p, error, Some(r)))
}

/// Disc stage for Ã(D): `P ≈ f` in χ on D̄.
///
/// The constant ∞ gets the constant `R(n) = n`; catalogue functions get the
/// Taylor truncation of their dilation `f(rz)`.
pub fn disc_chordal_approx(
    g: &ChordalFunction,
    n: usize,
    r: f64,
    grid: &VerificationGrid,
) -> Result<DiscApproximation> {
    match g {
        ChordalFunction::InfinityConstant => {
            let value = infinity_schedule(n);
            let error = chordal_distance(Complex64::new(value, 0.0).into(), ExtendedComplex::Infinity);
            Ok(DiscApproximation {
                polynomial: Polynomial::constant(Complex64::new(value, 0.0)),
                error,
                dilation: None,
                magnitude: Some(value),
                analytic_bound: None,
                truncation: None,
            })
        }
        ChordalFunction::FiniteType { f, .. } => finite_disc_approx(f, n, r, grid, |p, z| {
            Ok(chordal_distance(p.into(), f.eval_extended(z)?))
        }),
    }
}

/// Disc stage for finite-type members of Ā(D), measured in d.
pub fn disc_bar_finite_approx(
    f: &AnalyticEvaluator,
    n: usize,
    r: f64,
    grid: &VerificationGrid,
) -> Result<DiscApproximation> {
    finite_disc_approx(f, n, r, grid, |p, z| {
        Ok(bar_distance(p.into(), BarComplex::Finite(f.eval_finite(z)?)))
    })
}

/// `z ↦ R e^{i h(z)}`: modulus `R e^{−Im h}`, argument `Re h`.
struct DirectedMagnitude<'a> {
    magnitude: f64,
    h: &'a AnalyticEvaluator,
}

impl Analytic for DirectedMagnitude<'_> {
    fn eval(&self, z: Complex64) -> Complex64 {
        (Complex64::i() * Analytic::eval(self.h, z)).exp() * self.magnitude
    }

    fn radius(&self) -> f64 {
        self.h.radius()
    }
}

/// Disc stage for infinite-type members `∞·e^{i Re h}` of Ā(D).
///
/// `A_R = R e^{ih}` points in direction `θ = Re h` with modulus at least
/// `R e^{−max Im h}`, so `d(A_R, ∞·e^{iθ}) = 1/(1 + |A_R|)` is at most the
/// analytic bound. `P` is the Taylor truncation of `A_R(rz)`; the truncation
/// term `sup d(P, A_R)` must stay below the analytic bound.
pub fn bar_infinite_disc_approx(
    h: &AnalyticEvaluator,
    magnitude: f64,
    n: usize,
    r: f64,
    grid: &VerificationGrid,
) -> Result<DiscApproximation> {
    if !(magnitude >= 1.0) || !magnitude.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "magnitude {magnitude} must be finite and at least 1"
        )));
    }
    let scaled = DirectedMagnitude { magnitude, h };
    let p = taylor_truncate(&scaled, r, n)?;

    let max_im = grid.disc[..grid.boundary]
        .iter()
        .map(|&z| Analytic::eval(h, z).im)
        .fold(f64::NEG_INFINITY, f64::max);
    let analytic_bound = 1.0 / (1.0 + magnitude * (-max_im).exp());

    let pairs = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let z = grid.disc[i];
            let pz = BarComplex::Finite(p.eval(z));
            let err = bar_distance(pz, BarComplex::Directional(angle(h, z)));
            let trunc = bar_distance(pz, BarComplex::Finite(scaled.eval(z)));
            (err, trunc)
        })
        .collect::<Vec<_>>();
    let error = pairs.iter().map(|p| p.0).fold(0.0, f64::max);
    let truncation = pairs.iter().map(|p| p.1).fold(0.0, f64::max);
    if truncation > analytic_bound {
        return Err(Error::TruncationDominates {
            truncation,
            bound: analytic_bound,
        });
    }
    Ok(DiscApproximation {
        polynomial: p,
        error,
        dilation: Some(r),
        magnitude: Some(magnitude),
        analytic_bound: Some(analytic_bound),
        truncation: Some(truncation),
    })
}

/// Push `P` forward to `P∘φ⁻¹` and fit it on the domain boundary.
///
/// Boundary samples carry their disc preimages, so `P∘φ⁻¹` is `P` at the preimage.
fn push_forward(p: &Polynomial, spec: &DomainSpec, n: usize, m: usize) -> Result<MergelyanFit> {
    if p.degree() == 0 {
        // A constant is its own best approximation.
        return Ok(MergelyanFit {
            polynomial: ArnoldiPolynomial::constant(p.coeffs()[0]),
            boundary_error: 0.0,
            samples: m,
        });
    }
    mergelyan_step(&|pt: &DomainPoint| Ok(p.eval(pt.disc)), spec, n, m)
}

fn resolve_map(
    map: Option<&Arc<RiemannMap>>,
    spec: &DomainSpec,
    controls: &PipelineControls,
) -> Result<Arc<RiemannMap>> {
    match map {
        Some(map) if map.spec() == spec => Ok(Arc::clone(map)),
        Some(_) => Err(Error::InvalidParameter(
            "function is paired with a different domain than the pipeline".into(),
        )),
        None => Ok(Arc::new(RiemannMap::with_controls(spec.clone(), controls.inverse)?)),
    }
}

/// Combines the disc stage and the boundary fit into a report; `gap`
/// measures the target against `Q(w)` at the verification point `i`.
fn assemble<G>(
    metric: MetricKind,
    n: usize,
    disc: &DiscApproximation,
    fit: &MergelyanFit,
    grid: &VerificationGrid,
    gap: G,
) -> Result<ApproximationReport>
where
    G: Fn(usize, Complex64) -> Result<f64> + Sync,
{
    let q = &fit.polynomial;
    let p = &disc.polynomial;
    let per_point = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let qw = q.eval(grid.domain[i]);
            Ok(((p.eval(grid.disc[i]) - qw).norm(), gap(i, qw)?))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let grid_fit = per_point.iter().map(|v| v.0).fold(0.0, f64::max);
    let total = per_point.iter().map(|v| v.1).fold(0.0, f64::max);
    Ok(ApproximationReport {
        degree: n,
        metric,
        disc_stage: disc.error,
        mergelyan_stage: fit.boundary_error.max(grid_fit),
        total,
        mergelyan_boundary_error: fit.boundary_error,
        boundary_samples: fit.samples,
        verify_boundary: grid.boundary,
        verify_interior: grid.interior(),
        dilation: disc.dilation,
        magnitude: disc.magnitude,
        analytic_bound: disc.analytic_bound,
        truncation: disc.truncation,
    })
}

/// Polynomials converging to `g ∈ Ã(Ω)` in χ.
///
/// Pull `g` back to `f = g∘φ`, approximate `f` on D̄ by `P`, push forward to
/// `P∘φ⁻¹`, fit that on Ω̄ by `Q`, and measure `sup χ(Q, g)` directly. Since
/// `χ(a, b) ≤ |a − b|`, the total is bounded by the disc stage plus the fit
/// error.
pub fn theorem1_pipeline(
    g: &ChordalFunction,
    spec: &DomainSpec,
    n: usize,
    controls: &PipelineControls,
) -> Result<(ArnoldiPolynomial, ApproximationReport)> {
    let map = resolve_map(g.map(), spec, controls)?;
    let grid = VerificationGrid::new(&map, controls.verify_boundary, controls.verify_interior)?;
    let r = match g {
        ChordalFunction::FiniteType { f, .. } => controls.dilation_for(f, n),
        ChordalFunction::InfinityConstant => 1.0,
    };
    let disc = disc_chordal_approx(g, n, r, &grid)?;
    let fit = push_forward(&disc.polynomial, spec, n, controls.samples_for(n))?;
    let report = assemble(MetricKind::Chordal, n, &disc, &fit, &grid, |i, qw| {
        Ok(chordal_distance(qw.into(), g.disc_value(grid.disc[i])?))
    })?;
    Ok((fit.polynomial, report))
}

/// Polynomials converging to `g ∈ Ā(Ω)` in d, staged as in [`theorem1_pipeline`].
///
/// For finite values `d(a, b) ≤ |a − b|` because the embedding is 1-Lipschitz.
pub fn theorem2_pipeline(
    g: &BarFunction,
    spec: &DomainSpec,
    n: usize,
    controls: &PipelineControls,
) -> Result<(ArnoldiPolynomial, ApproximationReport)> {
    let map = resolve_map(Some(g.map()), spec, controls)?;
    let grid = VerificationGrid::new(&map, controls.verify_boundary, controls.verify_interior)?;
    let disc = match g {
        BarFunction::FiniteType { f, .. } => disc_bar_finite_approx(f, n, controls.dilation_for(f, n), &grid)?,
        BarFunction::InfiniteType { h, .. } => {
            bar_infinite_disc_approx(h, controls.magnitude, n, controls.dilation_for(h, n), &grid)?
        }
    };
    let fit = push_forward(&disc.polynomial, spec, n, controls.samples_for(n))?;
    let report = assemble(MetricKind::Bar, n, &disc, &fit, &grid, |i, qw| {
        Ok(bar_distance(qw.into(), g.disc_value(grid.disc[i])?))
    })?;
    Ok((fit.polynomial, report))
}
