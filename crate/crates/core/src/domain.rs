//! Jordan domains given as images of the unit disc under polynomials that are
//! injective on the closed disc.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polynomial::Polynomial;

/// Points closer than this to the sampled boundary polygon are not classified.
pub const BOUNDARY_TOLERANCE: f64 = 1e-9;

/// A Jordan domain Ω = ψ(D).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    UnitDisc,
    PolynomialImage { coeffs: Polynomial },
}

impl DomainSpec {
    /// Builds `PolynomialImage` from coefficients, constant term first.
    ///
    /// Only the shape is checked here; injectivity is certified by [`validate_domain`].
    pub fn polynomial_image(coeffs: Vec<Complex64>) -> Result<Self> {
        let spec = Self::PolynomialImage {
            coeffs: Polynomial::new(coeffs),
        };
        spec.check_shape()?;
        Ok(spec)
    }

    pub fn check_shape(&self) -> Result<()> {
        match self {
            Self::UnitDisc => Ok(()),
            Self::PolynomialImage { coeffs } => {
                if coeffs.coeffs().iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidPolynomial("non-finite coefficient".into()));
                }
                if coeffs.degree() < 1 {
                    return Err(Error::InvalidPolynomial(
                        "domain map must have degree at least 1".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    /// The map ψ; the identity for the unit disc.
    pub fn forward(&self) -> Polynomial {
        match self {
            Self::UnitDisc => Polynomial::identity(),
            Self::PolynomialImage { coeffs } => coeffs.clone(),
        }
    }
}

/// `e^{2πik/m}`, exact at quarter turns.
///
/// The angle is formed from the ratio `k/m`, so `root_of_unity(k, m)` and
/// `root_of_unity(2k, 2m)` agree bitwise.
pub fn root_of_unity(k: usize, m: usize) -> Complex64 {
    let k = k % m;
    if (4 * k).is_multiple_of(m) {
        return match 4 * k / m {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let t = k as f64 / m as f64;
    Complex64::from_polar(1.0, TAU * t)
}

/// `ψ(e^{2πik/m})` for `k = 0..m`.
pub fn boundary_points(spec: &DomainSpec, m: usize) -> Result<Vec<Complex64>> {
    if m < 3 {
        return Err(Error::TooFewSamples { required: 3, got: m });
    }
    let psi = spec.forward();
    Ok((0..m).map(|k| psi.eval(root_of_unity(k, m))).collect())
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Winding number of the closed polygon through `vertices` about `w`.
pub fn winding_number(vertices: &[Complex64], w: Complex64) -> i64 {
    let n = vertices.len();
    let mut wn = 0i64;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        let side = cross(b - a, w - a);
        if a.im <= w.im {
            if b.im > w.im && side > 0.0 {
                wn += 1;
            }
        } else if b.im <= w.im && side < 0.0 {
            wn -= 1;
        }
    }
    wn
}

/// Distance from `w` to the closed polygon through `vertices`.
pub fn polygon_distance(vertices: &[Complex64], w: Complex64) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|i| segment_distance(w, vertices[i], vertices[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

/// Membership of `w` in Ω by the winding number of the `m`-sample boundary polygon.
pub fn contains(spec: &DomainSpec, w: Complex64, m: usize) -> Result<bool> {
    let pts = boundary_points(spec, m)?;
    contains_in_polygon(&pts, w)
}

pub(crate) fn contains_in_polygon(pts: &[Complex64], w: Complex64) -> Result<bool> {
    if polygon_distance(pts, w) < BOUNDARY_TOLERANCE {
        return Err(Error::AmbiguousBoundary {
            point: w,
            tol: BOUNDARY_TOLERANCE,
        });
    }
    Ok(winding_number(pts, w) == 1)
}

/// One failed check of [`validate_domain`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum ValidationFailure {
    /// ψ' vanishes at `location` in the closed disc.
    CriticalPoint { location: Complex64, min_derivative: f64 },
    /// Boundary segments `first` and `second` cross; `point` is the crossing.
    SelfIntersection {
        first: usize,
        second: usize,
        point: Complex64,
    },
    /// The boundary does not wind exactly once about the interior test point.
    WindingNumber { about: Complex64, value: i64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub samples: usize,
    /// Minimum of |ψ'| over the closed-disc grid.
    pub min_derivative: f64,
    pub winding_number: i64,
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Numerical injectivity certificate for ψ on the closed disc.
///
/// Checks that ψ' has no zero in the closed disc (roots plus a polar grid
/// whose density follows `m`), that the `m` boundary samples form a simple
/// polygon, and that the polygon winds once about ψ(0).
pub fn validate_domain(spec: &DomainSpec, m: usize) -> Result<ValidationReport> {
    if m < 64 {
        return Err(Error::TooFewSamples { required: 64, got: m });
    }
    spec.check_shape()?;
    let psi = spec.forward();
    let dpsi = psi.derivative();
    let mut failures = Vec::new();

    let radial = (m / 16).max(16);
    let mut min_derivative = f64::INFINITY;
    for j in 0..=radial {
        let rho = j as f64 / radial as f64;
        let angles = if j == 0 { 1 } else { m };
        for k in 0..angles {
            let z = root_of_unity(k, m) * rho;
            min_derivative = min_derivative.min(dpsi.eval(z).norm());
        }
    }
    let critical = dpsi
        .roots()?
        .into_iter()
        .filter(|r| r.norm() <= 1.0 + 1e-12)
        .min_by(|a, b| a.norm().total_cmp(&b.norm()));
    if let Some(location) = critical {
        failures.push(ValidationFailure::CriticalPoint {
            location,
            min_derivative: 0.0,
        });
    } else if min_derivative <= 0.0 {
        failures.push(ValidationFailure::CriticalPoint {
            location: Complex64::new(f64::NAN, f64::NAN),
            min_derivative,
        });
    }

    let pts = boundary_points(spec, m)?;
    if let Some((first, second, point)) = first_self_intersection(&pts) {
        failures.push(ValidationFailure::SelfIntersection { first, second, point });
    }

    let about = psi.eval(Complex64::new(0.0, 0.0));
    let winding = winding_number(&pts, about);
    if winding != 1 {
        failures.push(ValidationFailure::WindingNumber { about, value: winding });
    }

    Ok(ValidationReport {
        samples: m,
        min_derivative,
        winding_number: winding,
        failures,
    })
}

/// Crossing point of segments `a0a1` and `b0b1` when they cross at interior points.
pub fn proper_intersection(a0: Complex64, a1: Complex64, b0: Complex64, b1: Complex64) -> Option<Complex64> {
    let da = a1 - a0;
    let db = b1 - b0;
    let o1 = cross(da, b0 - a0);
    let o2 = cross(da, b1 - a0);
    let o3 = cross(db, a0 - b0);
    let o4 = cross(db, a1 - b0);
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        let t = o3 / (o3 - o4);
        Some(a0 + da * t)
    } else {
        None
    }
}

/// Lowest-index pair of non-adjacent polygon edges that cross, found with a
/// uniform bucket grid over the edges' bounding boxes.
fn first_self_intersection(pts: &[Complex64]) -> Option<(usize, usize, Complex64)> {
    let n = pts.len();
    let (mut lo, mut hi) = (pts[0], pts[0]);
    for p in pts {
        lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
        hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
    }
    let cells = ((n as f64).sqrt().ceil() as usize).max(1);
    let width = ((hi.re - lo.re) / cells as f64).max(f64::MIN_POSITIVE);
    let height = ((hi.im - lo.im) / cells as f64).max(f64::MIN_POSITIVE);
    let cell_of = |x: f64, lo: f64, size: f64| (((x - lo) / size) as usize).min(cells - 1);

    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); cells * cells];
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        let (x0, x1) = (
            cell_of(a.re.min(b.re), lo.re, width),
            cell_of(a.re.max(b.re), lo.re, width),
        );
        let (y0, y1) = (
            cell_of(a.im.min(b.im), lo.im, height),
            cell_of(a.im.max(b.im), lo.im, height),
        );
        for x in x0..=x1 {
            for y in y0..=y1 {
                buckets[y * cells + x].push(i);
            }
        }
    }

    let mut best: Option<(usize, usize, Complex64)> = None;
    for bucket in &buckets {
        for (bi, &i) in bucket.iter().enumerate() {
            for &j in &bucket[bi + 1..] {
                let (i, j) = (i.min(j), i.max(j));
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                if let Some(point) = proper_intersection(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]) {
                    if best.is_none_or(|(bi, bj, _)| (i, j) < (bi, bj)) {
                        best = Some((i, j, point));
                    }
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quarter_lune() -> DomainSpec {
        DomainSpec::polynomial_image(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.25, 0.0)]).unwrap()
    }

    #[test]
    fn unit_disc_boundary_is_roots_of_unity() {
        let pts = boundary_points(&DomainSpec::UnitDisc, 4).unwrap();
        assert_eq!(pts, vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)]);
    }

    #[test]
    fn boundary_rejects_too_few_samples() {
        assert!(matches!(
            boundary_points(&quarter_lune(), 1),
            Err(Error::TooFewSamples { .. })
        ));
    }

    #[test]
    fn mapped_boundary_samples() {
        let pts = boundary_points(&quarter_lune(), 4).unwrap();
        let expected = [c(1.25, 0.0), c(-0.25, 1.0), c(-0.75, 0.0), c(-0.25, -1.0)];
        for (p, e) in pts.iter().zip(expected) {
            assert!((p - e).norm() < 1e-15, "{p} vs {e}");
        }
    }

    #[test]
    fn refinement_interleaves_bitwise() {
        let spec = quarter_lune();
        let coarse = boundary_points(&spec, 96).unwrap();
        let fine = boundary_points(&spec, 192).unwrap();
        for (k, p) in coarse.iter().enumerate() {
            assert_eq!(*p, fine[2 * k]);
        }
    }

    #[test]
    fn containment() {
        assert!(contains(&DomainSpec::UnitDisc, c(0.0, 0.0), 256).unwrap());
        assert!(!contains(&DomainSpec::UnitDisc, c(2.0, 0.0), 256).unwrap());
        let spec = quarter_lune();
        let inner = spec.forward().eval(c(0.5, 0.0));
        assert!(contains(&spec, inner, 1024).unwrap());
        assert!(matches!(
            contains(&DomainSpec::UnitDisc, c(1.0, 0.0), 256),
            Err(Error::AmbiguousBoundary { .. })
        ));
    }

    #[test]
    fn validation_accepts_identity_and_lune() {
        let report = validate_domain(&DomainSpec::UnitDisc, 256).unwrap();
        assert!(report.passed(), "{report:?}");
        let ident = DomainSpec::polynomial_image(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(validate_domain(&ident, 256).unwrap().passed());
        let report = validate_domain(&quarter_lune(), 4096).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!((report.min_derivative - 0.5).abs() < 1e-12);
    }

    #[test]
    fn validation_rejects_critical_point() {
        let spec = DomainSpec::polynomial_image(vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let report = validate_domain(&spec, 256).unwrap();
        assert!(!report.passed());
        match &report.failures[0] {
            ValidationFailure::CriticalPoint { location, .. } => {
                assert!((location - c(-0.5, 0.0)).norm() < 1e-12)
            }
            other => panic!("unexpected failure {other:?}"),
        }
    }

    #[test]
    fn validation_reports_self_intersection() {
        // z + 0.9 z³ folds the boundary over itself.
        let spec = DomainSpec::polynomial_image(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.9, 0.0)]).unwrap();
        let report = validate_domain(&spec, 512).unwrap();
        assert!(report
            .failures
            .iter()
            .any(|f| matches!(f, ValidationFailure::SelfIntersection { .. })));
    }

    #[test]
    fn validation_preconditions() {
        assert!(validate_domain(&DomainSpec::UnitDisc, 32).is_err());
        assert!(DomainSpec::polynomial_image(vec![c(2.0, 0.0)]).is_err());
    }

    #[test]
    fn domain_json_schema() {
        let spec: DomainSpec =
            serde_json::from_str(r#"{"kind": "polynomial_image", "coeffs": [[0,0],[1,0],[0.25,0]]}"#).unwrap();
        assert_eq!(spec, quarter_lune());
        let disc: DomainSpec = serde_json::from_str(r#"{"kind": "unit_disc"}"#).unwrap();
        assert_eq!(disc, DomainSpec::UnitDisc);
    }
}
