//! Convention audit: the incidence and section conventions pinned by a
//! translated-sphere fixture, with switches that reproduce the rejected
//! readings so the audit's sensitivity can itself be tested.

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::oriented_line_space::{
    cone_line_with, line_parameter, line_through_point, point_on_line_with, xi_to_direction, AngleConfig, OrientedLine,
};
use crate::support_surface::SupportSurface;

/// Convention switches. Everything in the crate runs with [`Conventions::AUDITED`];
/// the other settings exist only to show that the audit notices them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Conventions {
    /// Use `conj(xi)^2` instead of `xi^2` on `conj(eta)` in the point formula.
    pub flip_coordu: bool,
    /// Build the section from `dr/dxi` instead of `dr/dconj(xi)`.
    pub flip_pot1: bool,
    /// Flip the sign of the `r1` term in the cone-line formula.
    pub flip_cone_sign: bool,
}

impl Conventions {
    pub const AUDITED: Conventions = Conventions {
        flip_coordu: false,
        flip_pot1: false,
        flip_cone_sign: false,
    };
}

/// Centre and radius of the audit fixture.
pub const AUDIT_CENTER: [f64; 3] = [0.0, 0.0, 2.0];
pub const AUDIT_RADIUS: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    /// Largest `|sigma|`, with `sigma = -d conj(eta) / d xi` differenced from the section.
    pub max_sigma: f64,
    /// Largest distance between the reconstructed and true surface points,
    /// together with the round-trip error of the line through that point.
    pub max_incidence: f64,
    /// Largest distance from the base point to the generated cone lines.
    pub max_cone: f64,
    pub points: usize,
}

impl AuditReport {
    pub const SIGMA_TOL: f64 = 1e-9;
    pub const INCIDENCE_TOL: f64 = 1e-10;

    pub fn section_ok(&self) -> bool {
        self.max_sigma <= Self::SIGMA_TOL
    }

    pub fn incidence_ok(&self) -> bool {
        self.max_incidence <= Self::INCIDENCE_TOL
    }

    pub fn cone_ok(&self) -> bool {
        self.max_cone <= Self::INCIDENCE_TOL
    }

    pub fn passed(&self) -> bool {
        self.section_ok() && self.incidence_ok() && self.cone_ok()
    }
}

/// Sunflower grid of `n` points on the chart disc `|xi| <= radius`.
pub fn chart_disc_grid(n: usize, radius: f64) -> Vec<Complex64> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| Complex64::from_polar(radius * ((k as f64 + 0.5) / n as f64).sqrt(), golden * k as f64))
        .collect()
}

fn distance_to_line(p: &Vector3<f64>, line: &OrientedLine) -> f64 {
    let d = line.direction();
    let foot = line.point(0.0).to_vector();
    (p - foot).cross(&d).norm()
}

/// Run the translated-sphere audit under the given conventions.
pub fn convention_audit(conv: &Conventions, points: usize) -> Result<AuditReport> {
    let center = Vector3::from(AUDIT_CENTER);
    let sphere = SupportSurface::sphere(center, AUDIT_RADIUS)?;
    let cfg = AngleConfig::from_alpha(0.7)?;
    let mut report = AuditReport {
        max_sigma: 0.0,
        max_incidence: 0.0,
        max_cone: 0.0,
        points,
    };
    let eta = |xi: Complex64| sphere.section_eta_with(xi, conv);
    for (k, xi) in chart_disc_grid(points, 2.0).into_iter().enumerate() {
        // sigma by Richardson-extrapolated central differences of the section
        let d = |h: f64| -> Result<Complex64> {
            let du = (eta(xi + h)?.conj() - eta(xi - h)?.conj()) / (2.0 * h);
            let iv = Complex64::new(0.0, h);
            let dv = (eta(xi + iv)?.conj() - eta(xi - iv)?.conj()) / (2.0 * h);
            Ok(0.5 * (du - Complex64::new(0.0, 1.0) * dv))
        };
        let h = 1e-3;
        let sigma = -(4.0 * d(h / 2.0)? - d(h)?) / 3.0;
        report.max_sigma = report.max_sigma.max(sigma.norm());

        let line = OrientedLine::new(xi, eta(xi)?);
        let r = sphere.support_value(&xi_to_direction(xi));
        let p = point_on_line_with(&line, r, conv);
        let truth = center + xi_to_direction(xi) * AUDIT_RADIUS;
        let back = line_through_point(&p, xi);
        let inc = (p.to_vector() - truth).norm().max((back.eta - line.eta).norm());
        report.max_incidence = report.max_incidence.max(inc);

        let a1 = 0.37 + 2.1 * k as f64;
        let cone = cone_line_with(&line, r, &cfg, a1, conv)?;
        let miss = distance_to_line(&p.to_vector(), &cone);
        let along = (line_parameter(&line, &p) - r).abs();
        report.max_cone = report.max_cone.max(miss).max(along);
    }
    Ok(report)
}
