use num_complex::Complex64;

use crate::domain::root_of_unity;
use crate::error::{Error, Result};
use crate::function::Analytic;
use crate::polynomial::Polynomial;

const MIN_NODES: usize = 512;
const MAX_NODES: usize = 1 << 22;
/// Target size of the aliased tail `(ρ/R)^M` relative to the coefficients.
const ALIAS_TARGET: f64 = 1e-17;
/// Allowed coefficient change under node doubling, relative to `max(1, max |f|)` on the contour.
pub const DOUBLING_TOLERANCE: f64 = 1e-12;

/// Quadrature node count for a contour of radius `rho` and a function analytic
/// on a disc of radius `radius`.
pub(crate) fn node_count(n: usize, rho: f64, radius: f64) -> Result<usize> {
    let mut nodes = MIN_NODES.max(8 * n);
    if radius.is_finite() {
        let alias = (ALIAS_TARGET.ln() / (rho / radius).ln()).ceil();
        if !(alias < MAX_NODES as f64) {
            return Err(Error::InvalidParameter(format!(
                "contour radius {rho} is too close to the singularity at radius {radius}"
            )));
        }
        nodes = nodes.max(alias as usize);
    }
    Ok(nodes.next_power_of_two().min(MAX_NODES))
}

/// Coefficients `c_k (r/ρ)^k ρ^k = c_k r^k` from `nodes` trapezoid samples on `|ζ| = ρ`.
fn scaled_coefficients(samples: &[Complex64], nodes: usize, n: usize, ratio: f64) -> Vec<Complex64> {
    let twiddles: Vec<Complex64> = (0..nodes).map(|j| root_of_unity(j, nodes).conj()).collect();
    let mut out = Vec::with_capacity(n + 1);
    let mut scale = 1.0;
    for k in 0..=n {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &s) in samples.iter().enumerate() {
            acc += s * twiddles[(j * k) % nodes];
        }
        out.push(acc / nodes as f64 * scale);
        scale *= ratio;
    }
    out
}

/// Degree-`n` Taylor truncation of `z ↦ f(r z)`.
///
/// The Taylor coefficients `c_k` of `f` come from trapezoid-rule Cauchy
/// integrals on `|ζ| = ρ = (1 + r)/2`; the result holds `c_k r^k`. The node
/// count is at least `max(512, 8n)` and large enough to suppress aliasing from
/// the nearest singularity, and the answer is checked against a run with twice
/// as many nodes.
pub fn taylor_truncate(f: &dyn Analytic, r: f64, n: usize) -> Result<Polynomial> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::InvalidParameter(format!("dilation {r} outside (0, 1]")));
    }
    let radius = f.radius();
    let rho = 0.5 * (1.0 + r);
    if !(radius > r && radius > rho) {
        return Err(Error::InvalidParameter(format!(
            "function analytic only on radius {radius}, dilation {r} needs more"
        )));
    }
    let nodes = node_count(n, rho, radius)?;
    let fine_nodes = 2 * nodes;

    // Even-indexed fine nodes are exactly the coarse nodes.
    let fine: Vec<Complex64> = (0..fine_nodes)
        .map(|j| f.eval(root_of_unity(j, fine_nodes) * rho))
        .collect();
    if let Some(j) = fine.iter().position(|v| !v.is_finite()) {
        return Err(Error::EvaluationOverflow(root_of_unity(j, fine_nodes) * rho));
    }
    let coarse: Vec<Complex64> = fine.iter().step_by(2).copied().collect();
    let magnitude = fine.iter().map(|v| v.norm()).fold(0.0, f64::max);

    let ratio = r / rho;
    let coarse_coeffs = scaled_coefficients(&coarse, nodes, n, ratio);
    let fine_coeffs = scaled_coefficients(&fine, fine_nodes, n, ratio);
    let tol = DOUBLING_TOLERANCE * magnitude.max(1.0);
    for (index, (a, b)) in coarse_coeffs.iter().zip(&fine_coeffs).enumerate() {
        let change = (a - b).norm();
        if !(change < tol) {
            return Err(Error::QuadratureUnstable { index, change });
        }
    }
    Ok(Polynomial::new(fine_coeffs))
}
