//! Tolerances, with `LINECURVE_TOL_*` overrides from the environment.

use linecurve::foliation::{SNAP_TOL, UMBILIC_RATIO};
use linecurve::intersection_trace::{BRANCH_TOL, CONSTANT_ANGLE_TOL};
use linecurve::joachimsthal_checks::CURVATURE_LINE_TOL;
use linecurve::TraceOptions;
use serde::Serialize;

use crate::config::InputError;

pub const ENV_PREFIX: &str = "LINECURVE_TOL_";

/// Every tolerance a run depends on. The first four can be overridden.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub step: f64,
    pub min_step: f64,
    pub corrector: f64,
    pub constant_angle: f64,
    pub umbilic_ratio: f64,
    pub winding_snap: f64,
    pub branch: f64,
    pub curvature_line: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let t = TraceOptions::default();
        Self {
            step: t.step,
            min_step: t.min_step,
            corrector: t.corrector_tol,
            constant_angle: CONSTANT_ANGLE_TOL,
            umbilic_ratio: UMBILIC_RATIO,
            winding_snap: SNAP_TOL,
            branch: BRANCH_TOL,
            curvature_line: CURVATURE_LINE_TOL,
        }
    }
}

impl Tolerances {
    /// Apply `LINECURVE_TOL_<NAME>=<value>` pairs. Unknown names and values
    /// that are not positive finite numbers are rejected.
    pub fn with_overrides<I>(mut self, vars: I) -> Result<Self, InputError>
    where
        I: IntoIterator<Item = (String, String)>,
    {
        for (key, value) in vars {
            let Some(name) = key.strip_prefix(ENV_PREFIX) else {
                continue;
            };
            let v: f64 = value
                .trim()
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite() && *v > 0.0)
                .ok_or_else(|| InputError::Schema(format!("{key}={value} is not a positive number")))?;
            match name {
                "STEP" => self.step = v,
                "MIN_STEP" => self.min_step = v,
                "CORRECTOR" => self.corrector = v,
                "CONSTANT_ANGLE" => self.constant_angle = v,
                _ => return Err(InputError::Schema(format!("unknown tolerance {key}"))),
            }
        }
        if self.min_step > self.step {
            return Err(InputError::Schema(format!(
                "minimum step {} exceeds step {}",
                self.min_step, self.step
            )));
        }
        Ok(self)
    }

    pub fn from_env() -> Result<Self, InputError> {
        Self::default().with_overrides(std::env::vars())
    }

    pub fn trace_options(&self) -> TraceOptions {
        TraceOptions {
            step: self.step,
            min_step: self.min_step,
            corrector_tol: self.corrector,
            constant_angle_tol: self.constant_angle,
            ..TraceOptions::default()
        }
    }
}
