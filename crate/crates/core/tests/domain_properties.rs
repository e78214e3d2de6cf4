use std::f64::consts::TAU;

use proptest::prelude::*;
use sphere_mergelyan::conformal::is_cyclically_monotone;
use sphere_mergelyan::domain::ValidationFailure;
use sphere_mergelyan::{boundary_points, contains, validate_domain, Complex64, DomainSpec, RiemannMap};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn coefficient(max: f64) -> impl Strategy<Value = Complex64> {
    (0.0..max, 0.0..TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

/// ψ = a0 + z + a2 z² + a3 z³ with Σ k|a_k| < 1 over k ≥ 2, so ψ' never vanishes
/// on D̄ and ψ is univalent there.
fn univalent() -> impl Strategy<Value = DomainSpec> {
    (coefficient(2.0), coefficient(0.2), coefficient(0.1))
        .prop_map(|(a0, a2, a3)| DomainSpec::polynomial_image(vec![a0, c(1.0, 0.0), a2, a3]).unwrap())
}

/// Possibly non-univalent ψ = z + a2 z² + a3 z³.
fn arbitrary_cubic() -> impl Strategy<Value = DomainSpec> {
    (coefficient(1.2), coefficient(0.8))
        .prop_map(|(a2, a3)| DomainSpec::polynomial_image(vec![c(0.0, 0.0), c(1.0, 0.0), a2, a3]).unwrap())
}

fn disc_point(radius: f64) -> impl Strategy<Value = Complex64> {
    (0.0..1.0f64, 0.0..TAU).prop_map(move |(s, t)| Complex64::from_polar(radius * s.sqrt(), t))
}

fn crosses(a0: Complex64, a1: Complex64, b0: Complex64, b1: Complex64) -> bool {
    let orient = |p: Complex64, q: Complex64, r: Complex64| ((q - p).conj() * (r - p)).im;
    orient(a0, a1, b0) * orient(a0, a1, b1) < 0.0 && orient(b0, b1, a0) * orient(b0, b1, a1) < 0.0
}

/// Lowest-index crossing pair of non-adjacent edges by exhaustive search.
fn brute_force_crossing(pts: &[Complex64]) -> Option<(usize, usize)> {
    let n = pts.len();
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if crosses(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]) {
                return Some((i, j));
            }
        }
    }
    None
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn univalent_images_validate(spec in univalent()) {
        let report = validate_domain(&spec, 512).unwrap();
        prop_assert!(report.passed(), "{:?}", report.failures);
    }

    #[test]
    fn images_of_inner_disc_are_contained(spec in univalent(), z in disc_point(0.95)) {
        let w = spec.forward().eval(z);
        prop_assert!(contains(&spec, w, 1024).unwrap());
    }

    #[test]
    fn far_points_are_outside(spec in univalent(), t in 0.0..TAU, extra in 1.0..1e6f64) {
        let rmax = boundary_points(&spec, 1024).unwrap().iter().map(|w| w.norm()).fold(0.0, f64::max);
        let w = Complex64::from_polar(rmax + extra, t);
        prop_assert!(!contains(&spec, w, 1024).unwrap());
    }

    #[test]
    fn refinement_interleaves(spec in univalent(), m in 3usize..300) {
        let coarse = boundary_points(&spec, m).unwrap();
        let fine = boundary_points(&spec, 2 * m).unwrap();
        for (k, w) in coarse.iter().enumerate() {
            prop_assert_eq!(*w, fine[2 * k]);
        }
    }

    #[test]
    fn validation_is_deterministic(spec in arbitrary_cubic()) {
        let first = serde_json::to_string(&validate_domain(&spec, 256).unwrap()).unwrap();
        let second = serde_json::to_string(&validate_domain(&spec, 256).unwrap()).unwrap();
        prop_assert_eq!(first, second);
    }

    #[test]
    fn self_intersection_matches_exhaustive_search(spec in arbitrary_cubic()) {
        let m = 256;
        let report = validate_domain(&spec, m).unwrap();
        let reported = report.failures.iter().find_map(|f| match f {
            ValidationFailure::SelfIntersection { first, second, .. } => Some((*first, *second)),
            _ => None,
        });
        prop_assert_eq!(reported, brute_force_crossing(&boundary_points(&spec, m).unwrap()));
    }

    #[test]
    fn round_trip_and_interior(spec in univalent(), z in disc_point(1.0)) {
        let map = RiemannMap::new(spec.clone()).unwrap();
        let w = map.evaluate(z).unwrap();
        let back = map.invert(w).unwrap();
        prop_assert!((back - z).norm() <= 1e-9, "z = {z}, back = {back}");
        if z.norm() < 0.999 {
            prop_assert!(contains(&spec, w, 4096).unwrap());
        }
    }

    #[test]
    fn validated_boundaries_turn_monotonically(spec in univalent()) {
        let map = RiemannMap::new(spec.clone()).unwrap();
        let pts: Vec<_> = map.boundary_correspondence(4096).unwrap().into_iter().map(|(_, w)| w).collect();
        prop_assert!(is_cyclically_monotone(&pts, spec.forward().eval(c(0.0, 0.0))));
    }
}

#[test]
fn thousand_point_round_trip_on_reference_domain() {
    let spec = DomainSpec::polynomial_image(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.25, 0.0)]).unwrap();
    let map = RiemannMap::new(spec.clone()).unwrap();
    let mut worst = 0.0f64;
    for k in 0..1000 {
        // Golden-angle spiral out to the boundary circle itself.
        let r = ((k as f64 + 0.5) / 1000.0).sqrt().min(1.0);
        let z = Complex64::from_polar(if k % 10 == 0 { 1.0 } else { r }, k as f64 * 2.399_963_229_728_653);
        let w = map.evaluate(z).unwrap();
        worst = worst.max((map.invert(w).unwrap() - z).norm());
        if z.norm() < 1.0 - 1e-6 {
            assert!(contains(&spec, w, 4096).unwrap(), "{z}");
        }
    }
    assert!(worst <= 1e-9, "{worst:e}");
}

#[test]
fn exterior_points_are_not_inverted() {
    let spec = DomainSpec::polynomial_image(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.25, 0.0)]).unwrap();
    let map = RiemannMap::new(spec).unwrap();
    for w in [c(3.0, 0.0), c(0.0, -2.0), c(-0.9, 0.0), c(1e6, 1e6)] {
        assert!(map.invert(w).is_err(), "{w}");
    }
}
