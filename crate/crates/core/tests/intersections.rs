//! Tracer invariants on closed intersection curves.

use std::f64::consts::PI;

use linecurve::intersection_trace::{find_seed, trace_curve, TraceOptions};
use linecurve::{Result, SupportSurface, TracedIntersection, Vector3};

fn generic_pair() -> Result<(SupportSurface, SupportSurface)> {
    Ok((
        SupportSurface::axis_ellipsoid(1.0, 1.2, 1.5)?,
        SupportSurface::sphere(Vector3::new(0.2, 0.0, 0.0), 1.1)?,
    ))
}

fn trace(a: &SupportSurface, b: &SupportSurface, opts: &TraceOptions) -> Result<TracedIntersection> {
    trace_curve(a, b, &find_seed(a, b)?, opts)
}

#[test]
fn sphere_pair_gives_the_exact_circle() -> Result<()> {
    let a = SupportSurface::sphere(Vector3::new(0.0, 0.0, 0.5), 1.0)?;
    let b = SupportSurface::sphere(Vector3::new(0.0, 0.0, -0.5), 1.0)?;
    let curve = trace(&a, &b, &TraceOptions::default())?;
    assert!(curve.closed);
    assert!((curve.total_length - PI * 3f64.sqrt()).abs() < 1e-8);
    for p in &curve.samples {
        let x = p.point.to_vector();
        assert!(x.z.abs() < 1e-9);
        assert!((x.xy().norm() - 3f64.sqrt() / 2.0).abs() < 1e-9);
    }
    Ok(())
}

#[test]
fn reversed_trace_has_the_same_length() -> Result<()> {
    let (a, b) = generic_pair()?;
    let fwd = trace(&a, &b, &TraceOptions::default())?;
    let back = trace(
        &a,
        &b,
        &TraceOptions {
            reverse: true,
            ..TraceOptions::default()
        },
    )?;
    assert!(fwd.closed && back.closed);
    assert!((fwd.total_length - back.total_length).abs() <= 1e-8 * fwd.total_length);
    Ok(())
}

#[test]
fn halving_the_step_barely_moves_the_length() -> Result<()> {
    let (a, b) = generic_pair()?;
    let coarse = trace(&a, &b, &TraceOptions::default())?;
    let fine = trace(
        &a,
        &b,
        &TraceOptions {
            step: 5e-3,
            ..TraceOptions::default()
        },
    )?;
    assert!(fine.samples.len() > coarse.samples.len());
    assert!((coarse.total_length - fine.total_length).abs() <= 1e-6 * fine.total_length);
    Ok(())
}

#[test]
fn samples_lie_on_both_surfaces() -> Result<()> {
    let (a, b) = generic_pair()?;
    let curve = trace(&a, &b, &TraceOptions::default())?;
    for p in &curve.samples {
        let x = p.point.to_vector();
        let e = Vector3::new(x.x, x.y / 1.2, x.z / 1.5).norm();
        assert!((e - 1.0).abs() < 1e-8, "ellipsoid residual {}", e - 1.0);
        assert!(((x - Vector3::new(0.2, 0.0, 0.0)).norm() - 1.1).abs() < 1e-8);
    }
    Ok(())
}
