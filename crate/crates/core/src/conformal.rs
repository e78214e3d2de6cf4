//! The Riemann map φ = ψ of a polynomial-image domain, its boundary extension
//! and its inverse.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{self, DomainSpec};
use crate::error::{Error, Result};
use crate::polynomial::Polynomial;

/// Points with `|z|` up to `1 + DISC_SLACK` are treated as lying on the closed disc.
pub const DISC_SLACK: f64 = 1e-12;
/// Inverse images up to this far outside the circle are projected back onto it.
pub const CLAMP_SLACK: f64 = 1e-9;

/// Samples used for the containment fallback when every Newton seed fails.
const FALLBACK_CONTAINS_SAMPLES: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InverseControls {
    pub tol: f64,
    pub max_iter: usize,
    /// Seed grid resolution per axis over the closed disc.
    pub grid: usize,
}

impl Default for InverseControls {
    fn default() -> Self {
        Self {
            tol: 1e-13,
            max_iter: 100,
            grid: 64,
        }
    }
}

/// φ: D̄ → Ω̄ together with a precomputed seed grid for inversion.
#[derive(Debug, Clone)]
pub struct RiemannMap {
    spec: DomainSpec,
    forward: Polynomial,
    derivative: Polynomial,
    controls: InverseControls,
    /// Row-major `grid × grid` seeds `(z, ψ(z))`, with points outside the disc
    /// projected radially onto the circle.
    seeds: Vec<(Complex64, Complex64)>,
}

impl RiemannMap {
    pub fn new(spec: DomainSpec) -> Result<Self> {
        Self::with_controls(spec, InverseControls::default())
    }

    pub fn with_controls(spec: DomainSpec, controls: InverseControls) -> Result<Self> {
        spec.check_shape()?;
        if controls.grid < 2 {
            return Err(Error::InvalidParameter("inverse.grid must be at least 2".into()));
        }
        if !(controls.tol > 0.0) {
            return Err(Error::InvalidParameter("inverse.tol must be positive".into()));
        }
        let forward = spec.forward();
        let derivative = forward.derivative();
        let g = controls.grid;
        let mut seeds = Vec::with_capacity(g * g);
        for i in 0..g {
            for j in 0..g {
                let x = -1.0 + 2.0 * j as f64 / (g - 1) as f64;
                let y = -1.0 + 2.0 * i as f64 / (g - 1) as f64;
                let mut z = Complex64::new(x, y);
                let r = z.norm();
                if r > 1.0 {
                    z /= r;
                }
                seeds.push((z, forward.eval(z)));
            }
        }
        Ok(Self {
            spec,
            forward,
            derivative,
            controls,
            seeds,
        })
    }

    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }

    pub fn forward(&self) -> &Polynomial {
        &self.forward
    }

    pub fn controls(&self) -> InverseControls {
        self.controls
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.spec, DomainSpec::UnitDisc)
    }

    /// φ(z) for `|z| ≤ 1`; boundary points go to ∂Ω.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        let modulus = z.norm();
        if !(modulus <= 1.0 + DISC_SLACK) {
            return Err(Error::OutsideDisc { modulus });
        }
        Ok(self.forward.eval(z))
    }

    /// φ⁻¹(w) for `w ∈ Ω̄`.
    ///
    /// Newton's method on ψ(z) − w from the seed whose image is nearest to `w`,
    /// then from that seed's eight grid neighbours.
    pub fn invert(&self, w: Complex64) -> Result<Complex64> {
        if self.is_identity() {
            return self.invert_identity(w);
        }
        if !w.is_finite() {
            return Err(Error::NotInClosure(w));
        }
        let nearest = self
            .seeds
            .iter()
            .enumerate()
            .map(|(idx, &(_, image))| (idx, (image - w).norm_sqr()))
            .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
            .0;

        let g = self.controls.grid as isize;
        let (row, col) = (
            (nearest / self.controls.grid) as isize,
            (nearest % self.controls.grid) as isize,
        );
        let mut candidates = vec![nearest];
        for di in -1..=1 {
            for dj in -1..=1 {
                let (r, c) = (row + di, col + dj);
                if (di, dj) != (0, 0) && (0..g).contains(&r) && (0..g).contains(&c) {
                    candidates.push((r * g + c) as usize);
                }
            }
        }

        let mut landed_outside = false;
        for idx in candidates {
            if let Some(z) = self.newton(self.seeds[idx].0, w) {
                let modulus = z.norm();
                if modulus <= 1.0 {
                    return Ok(z);
                }
                if modulus <= 1.0 + CLAMP_SLACK {
                    return Ok(z / modulus);
                }
                landed_outside = true;
            }
        }
        if landed_outside {
            return Err(Error::NotInClosure(w));
        }
        match domain::contains(&self.spec, w, FALLBACK_CONTAINS_SAMPLES) {
            Ok(false) => Err(Error::NotInClosure(w)),
            _ => Err(Error::NoConvergence(w)),
        }
    }

    fn invert_identity(&self, w: Complex64) -> Result<Complex64> {
        let modulus = w.norm();
        if modulus <= 1.0 {
            Ok(w)
        } else if modulus <= 1.0 + CLAMP_SLACK {
            Ok(w / modulus)
        } else {
            Err(Error::NotInClosure(w))
        }
    }

    fn newton(&self, seed: Complex64, w: Complex64) -> Option<Complex64> {
        let tol = self.controls.tol;
        let mut z = seed;
        for _ in 0..self.controls.max_iter {
            let (value, slope) = self.forward.eval_with_derivative(z);
            let residual = (value - w).norm();
            if residual <= tol {
                return Some(self.polish(z, w, residual));
            }
            let step = (value - w) / slope;
            if !step.is_finite() {
                return None;
            }
            z -= step;
            if z.norm() > 4.0 {
                return None;
            }
        }
        None
    }

    /// Up to two extra Newton steps past the tolerance, kept while the residual shrinks.
    fn polish(&self, mut z: Complex64, w: Complex64, mut residual: f64) -> Complex64 {
        for _ in 0..2 {
            if residual == 0.0 {
                break;
            }
            let (value, slope) = self.forward.eval_with_derivative(z);
            let candidate = z - (value - w) / slope;
            let next = (self.forward.eval(candidate) - w).norm();
            if !(next < residual) {
                break;
            }
            z = candidate;
            residual = next;
        }
        z
    }

    /// Pairs `(2πk/m, ψ(e^{2πik/m}))`.
    pub fn boundary_correspondence(&self, m: usize) -> Result<Vec<(f64, Complex64)>> {
        let pts = domain::boundary_points(&self.spec, m)?;
        Ok(pts
            .into_iter()
            .enumerate()
            .map(|(k, w)| (TAU * k as f64 / m as f64, w))
            .collect())
    }

    pub fn derivative(&self) -> &Polynomial {
        &self.derivative
    }
}

/// Whether the boundary points turn strictly counterclockwise about `center`
/// and close up after exactly one revolution.
pub fn is_cyclically_monotone(points: &[Complex64], center: Complex64) -> bool {
    let n = points.len();
    if n < 3 {
        return false;
    }
    let mut total = 0.0;
    for k in 0..n {
        let a = points[k] - center;
        let b = points[(k + 1) % n] - center;
        let turn = (b * a.conj()).arg();
        if !(turn > 0.0) {
            return false;
        }
        total += turn;
    }
    (total - TAU).abs() < 1e-6
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn lune_map() -> RiemannMap {
        RiemannMap::new(DomainSpec::polynomial_image(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.25, 0.0)]).unwrap()).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let disc = RiemannMap::new(DomainSpec::UnitDisc).unwrap();
        assert_eq!(disc.evaluate(c(0.3, 0.4)).unwrap(), c(0.3, 0.4));
        let map = lune_map();
        assert_eq!(map.evaluate(c(1.0, 0.0)).unwrap(), c(1.25, 0.0));
        assert!((map.evaluate(c(0.0, 1.0)).unwrap() - c(-0.25, 1.0)).norm() < 1e-15);
        assert!(matches!(map.evaluate(c(1.1, 0.0)), Err(Error::OutsideDisc { .. })));
    }

    #[test]
    fn invert_examples() {
        let disc = RiemannMap::new(DomainSpec::UnitDisc).unwrap();
        assert_eq!(disc.invert(c(0.5, 0.0)).unwrap(), c(0.5, 0.0));
        let map = lune_map();
        assert!((map.invert(c(1.25, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
        assert!(map.invert(c(0.0, 0.0)).unwrap().norm() < 1e-15);
        assert!(map.invert(c(1.25, 0.0)).unwrap().norm() <= 1.0);
    }

    #[test]
    fn invert_rejects_exterior_points() {
        let map = lune_map();
        assert!(matches!(map.invert(c(3.0, 0.0)), Err(Error::NotInClosure(_))));
        assert!(matches!(map.invert(c(-0.9, 0.0)), Err(Error::NotInClosure(_))));
        let disc = RiemannMap::new(DomainSpec::UnitDisc).unwrap();
        assert!(matches!(disc.invert(c(1.0, 1.0)), Err(Error::NotInClosure(_))));
    }

    #[test]
    fn boundary_correspondence_examples() {
        let disc = RiemannMap::new(DomainSpec::UnitDisc).unwrap();
        let pairs = disc.boundary_correspondence(4).unwrap();
        assert_eq!(pairs[2], (std::f64::consts::PI, c(-1.0, 0.0)));
        let map = lune_map();
        let pairs = map.boundary_correspondence(4).unwrap();
        assert!((pairs[1].1 - c(-0.25, 1.0)).norm() < 1e-15);
        let pts: Vec<_> = map
            .boundary_correspondence(4096)
            .unwrap()
            .into_iter()
            .map(|p| p.1)
            .collect();
        assert!(is_cyclically_monotone(&pts, c(0.0, 0.0)));
        let mut reversed = pts.clone();
        reversed.reverse();
        assert!(!is_cyclically_monotone(&reversed, c(0.0, 0.0)));
    }

    #[test]
    fn controls_are_validated() {
        let bad = InverseControls {
            grid: 1,
            ..Default::default()
        };
        assert!(RiemannMap::with_controls(DomainSpec::UnitDisc, bad).is_err());
    }
}
