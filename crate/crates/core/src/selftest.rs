//! Embedded invariant suite behind the `selftest` command.

use std::f64::consts::PI;

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::audit::{chart_disc_grid, convention_audit, AuditReport, Conventions};
use crate::error::Result;
use crate::foliation::{find_umbilics, principal_direction};
use crate::intersection_trace::{angle_profile, find_seed, trace_curve, TraceOptions};
use crate::oriented_line_space::{angle_between, cone_direction, cone_param_a1, cone_param_a2, AngleConfig};
use crate::support_surface::{HarmonicTerm, SupportSurface};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelftestRow {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl SelftestRow {
    fn at_most(name: &str, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance,
            passed: value <= tolerance,
        }
    }
}

fn row(name: &str, tolerance: f64, value: Result<f64>) -> SelftestRow {
    SelftestRow::at_most(name, value.unwrap_or(f64::INFINITY), tolerance)
}

/// Deterministic low-discrepancy points in `[0, 1)^3`.
fn r3(k: usize) -> [f64; 3] {
    // plastic-number generalisation of the golden-ratio sequence
    let g = 1.220_744_084_605_759_5_f64;
    let a = [1.0 / g, 1.0 / (g * g), 1.0 / (g * g * g)];
    a.map(|x| (0.5 + x * (k as f64 + 1.0)).fract())
}

fn lemma_one(points: usize) -> Result<(f64, f64)> {
    let mut angle_err: f64 = 0.0;
    let mut inv_err: f64 = 0.0;
    for k in 0..points {
        let [u, v, w] = r3(k);
        let xi1 = Complex64::from_polar(3.0 * u, 2.0 * PI * v);
        let alpha = 0.1 + 2.9 * w;
        let a1 = 2.0 * PI * r3(k + points)[0];
        let cfg = AngleConfig::from_alpha(alpha)?;
        let xi2 = cone_direction(xi1, &cfg, a1)?;
        angle_err = angle_err.max((angle_between(xi1, xi2) - alpha).abs());
        let a2 = cone_param_a2(xi1, &cfg, a1)?;
        let back = cone_param_a1(xi2, xi1, &cfg, 1e-8)?;
        inv_err = inv_err.max((Complex64::from_polar(1.0, a2) - Complex64::from_polar(1.0, back)).norm());
    }
    Ok((angle_err, inv_err))
}

fn fixture_surfaces() -> Result<Vec<SupportSurface>> {
    Ok(vec![
        SupportSurface::sphere(Vector3::new(0.3, -0.2, 0.5), 1.3)?,
        SupportSurface::axis_ellipsoid(1.0, 1.2, 1.5)?,
        SupportSurface::harmonic(
            1.0,
            vec![
                HarmonicTerm {
                    l: 2,
                    m: 1,
                    coefficient: 0.05,
                },
                HarmonicTerm {
                    l: 3,
                    m: -2,
                    coefficient: 0.03,
                },
            ],
        )?,
    ])
}

fn oracle_agreement() -> Result<(f64, f64)> {
    let s = SupportSurface::axis_ellipsoid(1.0, 1.3, 1.7)?;
    let mut radius: f64 = 0.0;
    let mut direction: f64 = 0.0;
    for xi in chart_disc_grid(100, 1.5) {
        let cd = s.curvature_data(xi)?;
        let o = s.shape_operator_oracle(xi)?;
        let big = cd.psi + cd.sigma.norm();
        let small = cd.psi - cd.sigma.norm();
        radius = radius
            .max((big - o.radii[0]).abs() / o.radii[0])
            .max((small - o.radii[1]).abs() / o.radii[1]);
        let e = principal_direction(&s, xi)?;
        direction = direction.max(e.cross(&o.directions[1]).norm());
    }
    Ok((radius, direction))
}

fn lagrangian() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for s in fixture_surfaces()? {
        for xi in chart_disc_grid(50, 1.5) {
            worst = worst.max(s.lagrangian_residual(xi)?);
        }
    }
    Ok(worst)
}

fn poincare_hopf() -> Result<f64> {
    let u = find_umbilics(&SupportSurface::axis_ellipsoid(1.0, 1.2, 1.5)?)?;
    let total: f64 = u.iter().map(|p| p.index).sum();
    let count_gap = (u.len() as f64 - 4.0).abs();
    Ok((total - 2.0).abs() + count_gap)
}

fn two_spheres() -> Result<(f64, f64)> {
    let a = SupportSurface::sphere(Vector3::new(0.0, 0.0, 0.5), 1.0)?;
    let b = SupportSurface::sphere(Vector3::new(0.0, 0.0, -0.5), 1.0)?;
    let seed = find_seed(&a, &b)?;
    let c = trace_curve(&a, &b, &seed, &TraceOptions::default())?;
    let alpha = angle_profile(&c)
        .alpha
        .iter()
        .fold(0.0f64, |m, x| m.max((x - PI / 3.0).abs()));
    Ok(((c.total_length - PI * 3f64.sqrt()).abs(), alpha))
}

/// Run every check under the given conventions.
pub fn run_selftest(conv: &Conventions) -> Vec<SelftestRow> {
    let mut rows = Vec::new();
    match convention_audit(conv, 1000) {
        Ok(a) => {
            rows.push(SelftestRow::at_most(
                "audit: section shear of translated sphere",
                a.max_sigma,
                AuditReport::SIGMA_TOL,
            ));
            rows.push(SelftestRow::at_most(
                "audit: point/line incidence",
                a.max_incidence,
                AuditReport::INCIDENCE_TOL,
            ));
            rows.push(SelftestRow::at_most(
                "audit: cone line through base point",
                a.max_cone,
                AuditReport::INCIDENCE_TOL,
            ));
        }
        Err(_) => rows.push(SelftestRow::at_most("audit", f64::INFINITY, 0.0)),
    }
    let l1 = lemma_one(2000);
    rows.push(row(
        "angle circle: angle error",
        1e-12,
        l1.as_ref().map(|x| x.0).map_err(Clone::clone),
    ));
    rows.push(row("angle circle: A1/A2 inversion", 1e-10, l1.map(|x| x.1)));
    let oracle = oracle_agreement();
    rows.push(row(
        "curvature radii vs shape operator",
        1e-6,
        oracle.as_ref().map(|x| x.0).map_err(Clone::clone),
    ));
    rows.push(row("principal direction vs shape operator", 1e-4, oracle.map(|x| x.1)));
    rows.push(row("lagrangian residual", 1e-8, lagrangian()));
    rows.push(row("umbilic census of (1, 1.2, 1.5)", 0.0, poincare_hopf()));
    let spheres = two_spheres();
    rows.push(row(
        "two-sphere curve length",
        1e-6,
        spheres.as_ref().map(|x| x.0).map_err(Clone::clone),
    ));
    rows.push(row("two-sphere angle", 1e-10, spheres.map(|x| x.1)));
    rows
}
