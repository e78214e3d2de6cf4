use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::conformal::RiemannMap;
use crate::domain::{validate_domain, DomainSpec};
use crate::metric::{bar_distance, bar_embed, chordal_distance, BarComplex, ExtendedComplex};

const TRIANGLE_SLACK: f64 = 1e-12;
const ISOMETRY_TOLERANCE: f64 = 1e-15;
const ROUND_TRIP_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy)]
pub struct SelftestOptions {
    pub seed: u64,
    /// Random cases per metric suite.
    pub samples: usize,
    /// Debug hook: multiplies χ inside the `χ ≤ |a − b|` suite.
    pub chi_scale: f64,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        Self {
            seed: 0x5eed,
            samples: 10_000,
            chi_scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    /// First failing case, if any.
    pub first_failure: Option<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            passed: 0,
            failed: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestSummary {
    pub suites: Vec<SuiteResult>,
}

impl SelftestSummary {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.failed == 0)
    }
}

/// Finite value with log-uniform modulus in [1e-4, 1e4], occasionally zero.
fn sample_finite(rng: &mut ChaCha8Rng) -> Complex64 {
    if rng.random_bool(0.02) {
        return Complex64::new(0.0, 0.0);
    }
    let modulus = 10f64.powf(rng.random_range(-4.0..4.0));
    Complex64::from_polar(modulus, rng.random_range(0.0..TAU))
}

fn sample_extended(rng: &mut ChaCha8Rng) -> ExtendedComplex {
    if rng.random_bool(0.1) {
        ExtendedComplex::Infinity
    } else {
        ExtendedComplex::Finite(sample_finite(rng))
    }
}

fn sample_bar(rng: &mut ChaCha8Rng) -> BarComplex {
    if rng.random_bool(0.3) {
        BarComplex::Directional(rng.random_range(-10.0..10.0))
    } else {
        BarComplex::Finite(sample_finite(rng))
    }
}

fn metric_axioms<T: Copy + PartialEq + std::fmt::Debug>(
    name: &'static str,
    samples: usize,
    bound: f64,
    rng: &mut ChaCha8Rng,
    sample: impl Fn(&mut ChaCha8Rng) -> T,
    distance: impl Fn(T, T) -> f64,
) -> SuiteResult {
    let mut suite = SuiteResult::new(name);
    for _ in 0..samples {
        let (a, b, c) = (sample(rng), sample(rng), sample(rng));
        let (ab, ba, ac, bc) = (distance(a, b), distance(b, a), distance(a, c), distance(b, c));
        let ok = ab.to_bits() == ba.to_bits()
            && distance(a, a) == 0.0
            && ((ab == 0.0) == (a == b))
            && ac <= ab + bc + TRIANGLE_SLACK
            && (0.0..=bound).contains(&ab);
        suite.record(ok, || {
            format!("{a:?}, {b:?}, {c:?}: d(a,b)={ab}, d(b,a)={ba}, d(a,c)={ac}, d(b,c)={bc}")
        });
    }
    suite
}

/// Property suites over the metrics, domain validation and inversion.
pub fn selftest(options: &SelftestOptions) -> SelftestSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let n = options.samples;
    let mut suites = Vec::new();

    suites.push(metric_axioms(
        "chordal metric axioms",
        n,
        1.0,
        &mut rng,
        sample_extended,
        chordal_distance,
    ));
    suites.push(metric_axioms(
        "disc-compactification metric axioms",
        n,
        2.0,
        &mut rng,
        sample_bar,
        bar_distance,
    ));

    let mut inequality = SuiteResult::new("χ(a,b) ≤ |a−b|");
    for _ in 0..n {
        let (a, b) = (sample_finite(&mut rng), sample_finite(&mut rng));
        let chi = options.chi_scale * chordal_distance(a.into(), b.into());
        inequality.record(chi <= (a - b).norm(), || {
            format!("{a}, {b}: χ={chi}, |a−b|={}", (a - b).norm())
        });
    }
    suites.push(inequality);

    let mut isometry = SuiteResult::new("embedding isometry");
    for _ in 0..n {
        let (a, b) = (sample_bar(&mut rng), sample_bar(&mut rng));
        let d = bar_distance(a, b);
        let euclid = (a.embed() - b.embed()).norm();
        let inside = match a {
            BarComplex::Finite(z) => bar_embed(z).norm() < 1.0,
            BarComplex::Directional(_) => true,
        };
        isometry.record((d - euclid).abs() <= ISOMETRY_TOLERANCE && inside, || {
            format!("{a:?}, {b:?}: d={d}, embedded gap={euclid}")
        });
    }
    suites.push(isometry);

    let c = |re: f64| Complex64::new(re, 0.0);
    let mut validation = SuiteResult::new("domain validation fixtures");
    let positives = [
        DomainSpec::UnitDisc,
        DomainSpec::PolynomialImage {
            coeffs: vec![c(0.0), c(1.0), c(0.25)].into(),
        },
    ];
    for spec in &positives {
        let ok = validate_domain(spec, 1024).is_ok_and(|r| r.passed());
        validation.record(ok, || format!("{spec:?} was rejected"));
    }
    // z + z² has a critical point at −1/2; rejecting it is the expected outcome.
    let negative = DomainSpec::PolynomialImage {
        coeffs: vec![c(0.0), c(1.0), c(1.0)].into(),
    };
    let rejected = validate_domain(&negative, 1024).is_ok_and(|r| !r.passed());
    validation.record(rejected, || "z + z² was accepted".to_string());
    suites.push(validation);

    let mut round_trip = SuiteResult::new("inversion round trip");
    match RiemannMap::new(positives[1].clone()) {
        Ok(map) => {
            for _ in 0..1000 {
                let z = Complex64::from_polar(rng.random_range(0.0f64..1.0).sqrt(), rng.random_range(0.0..TAU));
                let back = map.evaluate(z).and_then(|w| map.invert(w));
                let err = back.map(|b| (b - z).norm()).unwrap_or(f64::INFINITY);
                round_trip.record(err <= ROUND_TRIP_TOLERANCE, || format!("z={z}: error {err}"));
            }
        }
        Err(e) => round_trip.record(false, || e.to_string()),
    }
    suites.push(round_trip);

    SelftestSummary { suites }
}
