//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "domain": {"kind": "polynomial_image", "coeffs": [[0,0],[1,0],[0.25,0]]},
//!   "function": {"kind": "boundary_pole", "num": [[1,0]], "den": [[1,0],[-1,0]]},
//!   "metric": "chi",
//!   "degrees": [8, 16, 32],
//!   "controls": {"r": 0.99, "R": 1000, "boundary_m": 400},
//!   "inverse": {"tol": 1e-13, "grid": 64},
//!   "output": "table.csv"
//! }
//! ```

use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use serde::Deserialize;
use thiserror::Error;

use crate::approx::{PipelineControls, DEFAULT_MAGNITUDE, DEFAULT_VERIFY_BOUNDARY, DEFAULT_VERIFY_INTERIOR};
use crate::conformal::{InverseControls, RiemannMap};
use crate::domain::DomainSpec;
use crate::function::{AnalyticEvaluator, BarFunction, ChordalFunction};
use crate::metric::MetricKind;
use crate::polynomial::Polynomial;

use super::Target;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("key `{key}`: {message}")]
    Invalid { key: String, message: String },
}

fn invalid(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        message: message.into(),
    }
}

/// Catalogue descriptor for the approximation target.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionDescriptor {
    Polynomial { coeffs: Polynomial },
    Rational { num: Polynomial, den: Polynomial },
    BoundaryPole { num: Polynomial, den: Polynomial },
    Exp { c: Complex64, p: Polynomial },
    InfType { h: Polynomial },
    InfConst,
}

impl FunctionDescriptor {
    fn evaluator(&self) -> Option<AnalyticEvaluator> {
        Some(match self {
            Self::Polynomial { coeffs } => AnalyticEvaluator::Polynomial(coeffs.clone()),
            Self::Rational { num, den } => AnalyticEvaluator::Rational {
                num: num.clone(),
                den: den.clone(),
            },
            Self::BoundaryPole { num, den } => AnalyticEvaluator::BoundaryPole {
                num: num.clone(),
                den: den.clone(),
            },
            Self::Exp { c, p } => AnalyticEvaluator::CompositeExp { c: *c, p: p.clone() },
            Self::InfType { .. } | Self::InfConst => return None,
        })
    }

    /// Builds the target on `map`'s domain for the given metric.
    pub fn build(&self, map: Arc<RiemannMap>, metric: MetricKind) -> Result<Target, ConfigError> {
        let wrap = |e: crate::Error| invalid("function", e.to_string());
        match (self, metric) {
            (Self::InfConst, MetricKind::Chordal) => Ok(Target::Chordal(ChordalFunction::InfinityConstant)),
            (Self::InfConst, MetricKind::Bar) => Err(invalid(
                "metric",
                "the constant ∞ belongs to the one-point compactification; use metric \"chi\"",
            )),
            (Self::InfType { h }, MetricKind::Bar) => Ok(Target::Bar(
                BarFunction::infinite(AnalyticEvaluator::Polynomial(h.clone()), map).map_err(wrap)?,
            )),
            (Self::InfType { .. }, MetricKind::Chordal) => Err(invalid(
                "metric",
                "infinite-type functions take values in the disc compactification; use metric \"d\"",
            )),
            (finite, MetricKind::Chordal) => {
                let f = finite.evaluator().expect("finite descriptor");
                Ok(Target::Chordal(ChordalFunction::finite(f, map).map_err(wrap)?))
            }
            (finite, MetricKind::Bar) => {
                let f = finite.evaluator().expect("finite descriptor");
                Ok(Target::Bar(BarFunction::finite(f, map).map_err(wrap)?))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlsConfig {
    #[serde(default)]
    pub r: Option<f64>,
    #[serde(default = "default_magnitude", rename = "R")]
    pub magnitude: f64,
    #[serde(default)]
    pub boundary_m: Option<usize>,
    #[serde(default = "default_verify_boundary")]
    pub verify_boundary: usize,
    #[serde(default = "default_verify_interior")]
    pub verify_interior: usize,
}

fn default_magnitude() -> f64 {
    DEFAULT_MAGNITUDE
}

fn default_verify_boundary() -> usize {
    DEFAULT_VERIFY_BOUNDARY
}

fn default_verify_interior() -> usize {
    DEFAULT_VERIFY_INTERIOR
}

impl Default for ControlsConfig {
    fn default() -> Self {
        Self {
            r: None,
            magnitude: DEFAULT_MAGNITUDE,
            boundary_m: None,
            verify_boundary: DEFAULT_VERIFY_BOUNDARY,
            verify_interior: DEFAULT_VERIFY_INTERIOR,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub domain: DomainSpec,
    pub function: FunctionDescriptor,
    pub metric: MetricKind,
    pub degrees: Vec<usize>,
    #[serde(default)]
    pub controls: ControlsConfig,
    #[serde(default)]
    pub inverse: InverseControls,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let config: Self = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        config.check()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    fn check(&self) -> Result<(), ConfigError> {
        self.domain
            .check_shape()
            .map_err(|e| invalid("domain.coeffs", e.to_string()))?;
        if self.degrees.is_empty() {
            return Err(invalid("degrees", "at least one degree is required"));
        }
        if let Some(pair) = self.degrees.windows(2).find(|w| w[0] >= w[1]) {
            return Err(invalid(
                "degrees",
                format!("degrees must be strictly increasing ({} then {})", pair[0], pair[1]),
            ));
        }
        match (&self.function, self.metric) {
            (FunctionDescriptor::InfType { .. }, MetricKind::Chordal) => {
                return Err(invalid("metric", "infinite-type functions require metric \"d\""))
            }
            (FunctionDescriptor::InfConst, MetricKind::Bar) => {
                return Err(invalid("metric", "the constant ∞ requires metric \"chi\""))
            }
            _ => {}
        }
        if let Some(r) = self.controls.r {
            if !(r > 0.0 && r <= 1.0) {
                return Err(invalid("controls.r", "dilation must lie in (0, 1]"));
            }
        }
        if !(self.controls.magnitude >= 1.0 && self.controls.magnitude.is_finite()) {
            return Err(invalid("controls.R", "magnitude must be finite and at least 1"));
        }
        if self.controls.verify_boundary < 3 {
            return Err(invalid(
                "controls.verify_boundary",
                "at least 3 boundary points are required",
            ));
        }
        if !(self.inverse.tol > 0.0) {
            return Err(invalid("inverse.tol", "tolerance must be positive"));
        }
        if self.inverse.grid < 2 {
            return Err(invalid("inverse.grid", "grid must be at least 2"));
        }
        Ok(())
    }

    pub fn pipeline_controls(&self) -> PipelineControls {
        PipelineControls {
            dilation: self.controls.r,
            magnitude: self.controls.magnitude,
            boundary_samples: self.controls.boundary_m,
            verify_boundary: self.controls.verify_boundary,
            verify_interior: self.controls.verify_interior,
            inverse: self.inverse,
        }
    }

    pub fn riemann_map(&self) -> Result<Arc<RiemannMap>, ConfigError> {
        RiemannMap::with_controls(self.domain.clone(), self.inverse)
            .map(Arc::new)
            .map_err(|e| invalid("inverse", e.to_string()))
    }

    pub fn target(&self, map: Arc<RiemannMap>) -> Result<Target, ConfigError> {
        self.function.build(map, self.metric)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GEOMETRIC: &str = r#"{
        "domain": {"kind": "polynomial_image", "coeffs": [[0,0],[1,0],[0.25,0]]},
        "function": {"kind": "boundary_pole", "num": [[1,0]], "den": [[1,0],[-1,0]]},
        "metric": "chi",
        "degrees": [8, 16],
        "inverse": {"tol": 1e-12, "grid": 32}
    }"#;

    #[test]
    fn parses_full_config() {
        let config = ExperimentConfig::from_json(GEOMETRIC).unwrap();
        assert_eq!(config.degrees, vec![8, 16]);
        assert_eq!(config.inverse.grid, 32);
        assert_eq!(config.inverse.max_iter, 100);
        assert_eq!(config.controls.magnitude, 1e3);
        let map = config.riemann_map().unwrap();
        assert!(matches!(config.target(map).unwrap(), Target::Chordal(_)));
    }

    #[test]
    fn rejects_infinite_type_with_chi() {
        let text = r#"{"domain": {"kind": "unit_disc"}, "function": {"kind": "inf_type", "h": [[0,0],[1,0]]},
                       "metric": "chi", "degrees": [4]}"#;
        match ExperimentConfig::from_json(text) {
            Err(ConfigError::Invalid { key, .. }) => assert_eq!(key, "metric"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn reports_line_of_syntax_errors() {
        let text = "{\n  \"domain\": {\"kind\": \"unit_disc\"},\n  \"metric\": chi\n}";
        match ExperimentConfig::from_json(text) {
            Err(ConfigError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn names_unknown_keys() {
        let text = r#"{"domain": {"kind": "unit_disc"}, "function": {"kind": "inf_const"},
                       "metric": "chi", "degrees": [1], "degree": 3}"#;
        let err = ExperimentConfig::from_json(text).unwrap_err().to_string();
        assert!(err.contains("degree"), "{err}");
    }

    #[test]
    fn degrees_must_increase() {
        let text = r#"{"domain": {"kind": "unit_disc"}, "function": {"kind": "inf_const"},
                       "metric": "chi", "degrees": [10, 10]}"#;
        match ExperimentConfig::from_json(text) {
            Err(ConfigError::Invalid { key, .. }) => assert_eq!(key, "degrees"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_function_is_reported_at_build() {
        let text = r#"{"domain": {"kind": "unit_disc"},
                       "function": {"kind": "rational", "num": [[1,0]], "den": [[0.5,0],[-1,0]]},
                       "metric": "chi", "degrees": [4]}"#;
        let config = ExperimentConfig::from_json(text).unwrap();
        let map = config.riemann_map().unwrap();
        match config.target(map) {
            Err(ConfigError::Invalid { key, .. }) => assert_eq!(key, "function"),
            Err(other) => panic!("{other:?}"),
            Ok(_) => panic!("accepted a pole inside the disc"),
        }
    }
}
