//! Discrete least-squares polynomial fits on a domain boundary, in a basis
//! orthonormalized against the boundary samples (Vandermonde with Arnoldi).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::domain::{root_of_unity, DomainSpec};
use crate::error::{Error, Result};
use crate::polynomial::Polynomial;

/// Maximum tolerated deviation of the Gram matrix from the identity.
pub const ORTHONORMALITY_TOLERANCE: f64 = 1e-8;
/// Boundary samples required per degree of freedom.
pub const SAMPLES_PER_DEGREE: usize = 10;
/// The reported error is measured on this many times the fitting samples.
pub const ERROR_REFINEMENT: usize = 4;

/// Anything evaluable at a point of the plane.
pub trait Evaluate: Sync {
    fn eval(&self, w: Complex64) -> Complex64;
}

impl Evaluate for Polynomial {
    fn eval(&self, w: Complex64) -> Complex64 {
        Polynomial::eval(self, w)
    }
}

/// A point of Ω̄ together with its preimage in D̄.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainPoint {
    pub disc: Complex64,
    pub w: Complex64,
}

/// `k`-th of `m` boundary samples, `(e^{2πik/m}, ψ(e^{2πik/m}))`.
fn boundary_sample(psi: &Polynomial, k: usize, m: usize) -> DomainPoint {
    let disc = root_of_unity(k, m);
    DomainPoint {
        disc,
        w: psi.eval(disc),
    }
}

/// A polynomial stored as coefficients in a discrete orthonormal basis.
///
/// The basis satisfies `q_0 = 1` and
/// `h_{k+1,k} q_{k+1}(x) = x q_k(x) − Σ_{j≤k} h_{j,k} q_j(x)` with
/// `x = (w − center)/scale`, so evaluation replays the recurrence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArnoldiPolynomial {
    center: Complex64,
    scale: f64,
    /// `hessenberg[k]` holds `h_{0,k}, …, h_{k+1,k}`.
    hessenberg: Vec<Vec<Complex64>>,
    coeffs: Vec<Complex64>,
}

impl ArnoldiPolynomial {
    pub fn constant(c: Complex64) -> Self {
        Self {
            center: Complex64::new(0.0, 0.0),
            scale: 1.0,
            hessenberg: Vec::new(),
            coeffs: vec![c],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn basis_coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Monomial coefficients in `w`.
    ///
    /// Expanding the orthonormal basis can lose accuracy at high degree on
    /// domains far from a disc; evaluation should go through [`Evaluate`].
    pub fn to_monomial(&self) -> Polynomial {
        let inv_scale = Complex64::new(self.scale.recip(), 0.0);
        let x = Polynomial::new(vec![-self.center * inv_scale, inv_scale]);
        let mut basis = vec![Polynomial::constant(Complex64::new(1.0, 0.0))];
        let mut out = basis[0].scale(self.coeffs[0]);
        for (k, column) in self.hessenberg.iter().enumerate() {
            let mut next = &x * &basis[k];
            for (j, &h) in column[..=k].iter().enumerate() {
                next = &next - &basis[j].scale(h);
            }
            next = next.scale(column[k + 1].finv());
            out = &out + &next.scale(self.coeffs[k + 1]);
            basis.push(next);
        }
        out
    }
}

impl Evaluate for ArnoldiPolynomial {
    fn eval(&self, w: Complex64) -> Complex64 {
        let x = (w - self.center) / self.scale;
        let mut q = Vec::with_capacity(self.coeffs.len());
        q.push(Complex64::new(1.0, 0.0));
        let mut acc = self.coeffs[0];
        for (k, column) in self.hessenberg.iter().enumerate() {
            let mut v = x * q[k];
            for (j, &h) in column[..=k].iter().enumerate() {
                v -= h * q[j];
            }
            let next = v / column[k + 1];
            acc += self.coeffs[k + 1] * next;
            q.push(next);
        }
        acc
    }
}

/// `⟨u, v⟩ = (1/m) Σ u_j conj(v_j)`, summed in index order.
fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    let sum: Complex64 = u.iter().zip(v).map(|(a, b)| a * b.conj()).sum();
    sum / u.len() as f64
}

/// Columns of sampled values, or Hessenberg columns.
type Columns = Vec<Vec<Complex64>>;

/// Orthonormal basis on the sample points `x` up to degree `n`, by Arnoldi
/// with one full re-orthogonalization pass.
fn arnoldi(x: &[Complex64], n: usize) -> Result<(Columns, Columns)> {
    let m = x.len();
    let mut basis: Vec<Vec<Complex64>> = vec![vec![Complex64::new(1.0, 0.0); m]];
    let mut hessenberg = Vec::with_capacity(n);
    for k in 0..n {
        let mut v: Vec<Complex64> = x.iter().zip(&basis[k]).map(|(a, b)| a * b).collect();
        let mut column = vec![Complex64::new(0.0, 0.0); k + 2];
        for _pass in 0..2 {
            for (j, q) in basis.iter().enumerate() {
                let h = inner(&v, q);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= h * qi;
                }
                column[j] += h;
            }
        }
        let norm = inner(&v, &v).re.sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::IllConditioned {
                degree: k + 1,
                drift: f64::INFINITY,
            });
        }
        column[k + 1] = Complex64::new(norm, 0.0);
        for vi in v.iter_mut() {
            *vi /= norm;
        }
        basis.push(v);
        hessenberg.push(column);
    }
    Ok((basis, hessenberg))
}

fn orthonormality_drift(basis: &[Vec<Complex64>]) -> (usize, f64) {
    let mut worst = (0, 0.0);
    for i in 0..basis.len() {
        for j in 0..=i {
            let g = inner(&basis[i], &basis[j]);
            let target = if i == j { 1.0 } else { 0.0 };
            let drift = (g - Complex64::new(target, 0.0)).norm();
            if drift > worst.1 {
                worst = (i, drift);
            }
        }
    }
    worst
}

/// Result of one boundary fit.
#[derive(Debug, Clone)]
pub struct MergelyanFit {
    pub polynomial: ArnoldiPolynomial,
    /// max |F − Q| over the refined boundary grid.
    pub boundary_error: f64,
    pub samples: usize,
}

/// Near-best degree-`n` polynomial fit of `target` on ∂Ω from `m` boundary samples.
///
/// `target` receives each sample with its disc preimage. The reported error
/// is measured on `4m` boundary points; since both `target` and the fit are
/// holomorphic inside and continuous up to the boundary it bounds the error
/// on all of Ω̄ up to boundary refinement.
pub fn mergelyan_step<F>(target: &F, spec: &DomainSpec, n: usize, m: usize) -> Result<MergelyanFit>
where
    F: Fn(&DomainPoint) -> Result<Complex64> + Sync,
{
    let required = SAMPLES_PER_DEGREE * (n + 1);
    if m < required {
        return Err(Error::InsufficientSamples {
            samples: m,
            degree: n,
            required,
        });
    }
    spec.check_shape()?;
    let psi = spec.forward();
    let points: Vec<DomainPoint> = (0..m).map(|k| boundary_sample(&psi, k, m)).collect();
    let values = points.par_iter().map(target).collect::<Result<Vec<_>>>()?;

    let center: Complex64 = points.iter().map(|p| p.w).sum::<Complex64>() / m as f64;
    let scale = points.iter().map(|p| (p.w - center).norm()).fold(0.0, f64::max);
    if !(scale > 0.0) {
        return Err(Error::InvalidParameter("degenerate boundary samples".into()));
    }
    let x: Vec<Complex64> = points.iter().map(|p| (p.w - center) / scale).collect();

    let (basis, hessenberg) = arnoldi(&x, n)?;
    let (degree, drift) = orthonormality_drift(&basis);
    if drift > ORTHONORMALITY_TOLERANCE {
        return Err(Error::IllConditioned { degree, drift });
    }

    let mut coeffs: Vec<Complex64> = basis.iter().map(|q| inner(&values, q)).collect();
    // one step of iterative refinement on the residual
    let mut residual = values.clone();
    for (d, q) in coeffs.iter().zip(&basis) {
        for (r, qi) in residual.iter_mut().zip(q) {
            *r -= d * qi;
        }
    }
    for (d, q) in coeffs.iter_mut().zip(&basis) {
        *d += inner(&residual, q);
    }

    let polynomial = ArnoldiPolynomial {
        center,
        scale,
        hessenberg,
        coeffs,
    };

    let fine = ERROR_REFINEMENT * m;
    let errors = (0..fine)
        .into_par_iter()
        .map(|k| {
            let p = boundary_sample(&psi, k, fine);
            Ok((target(&p)? - polynomial.eval(p.w)).norm())
        })
        .collect::<Result<Vec<f64>>>()?;
    let boundary_error = errors.into_iter().fold(0.0, f64::max);

    Ok(MergelyanFit {
        polynomial,
        boundary_error,
        samples: m,
    })
}
