//! Continuation of the intersection curve of two convex surfaces in the
//! double chart `(xi1, xi2)` of their normals, and the per-sample angle data
//! along it.
//!
//! The tracer solves `P1(xi1) - P2(xi2) = 0` (three real equations in four
//! unknowns) by pseudo-arclength continuation. Both surfaces are viewed
//! through one common rotated frame, which is re-centred whenever a normal
//! drifts towards the excluded pole. Samples are stored in world
//! coordinates; chart quantities are reported in a single report frame
//! (the identity unless the curve passes near the south pole).
//!
//! The curve tangent is `T = nu1 x nu2 / |nu1 x nu2|` and the arclength
//! parameter `s` increases along `T` (or against it with
//! [`TraceOptions::reverse`]).

use std::f64::consts::PI;

use nalgebra::{Matrix3, Matrix4, Vector3, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::foliation::{principal_direction, signed_angle, UMBILIC_RATIO};
use crate::numeric::{derivative_along, fibonacci_sphere, rotation_to_north, unwrap_near, unwrap_sequence};
use crate::oriented_line_space::{
    angle_between, cone_param_a1, cone_param_a2, direction_to_xi, xi_to_direction, AngleConfig, SurfacePoint,
};
use crate::support_surface::{principal_data, CurvatureData, SupportSurface};

/// Curves whose angle varies by at most this much count as constant-angle.
pub const CONSTANT_ANGLE_TOL: f64 = 1e-7;
/// Chart data are reported in the world frame when every normal on the curve
/// has `|xi|` at most this; otherwise in a frame centred away from the curve.
pub const REPORT_CHART_LIMIT: f64 = 3.0;
/// Accepted deviation of `|e^{i gamma}|` from one when solving for `beta`.
pub const BRANCH_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceOptions {
    /// Initial (and largest) predictor step in chart units.
    pub step: f64,
    pub min_step: f64,
    pub corrector_tol: f64,
    pub max_corrector_iter: usize,
    pub min_closure_steps: usize,
    pub max_steps: usize,
    /// Re-centre the working frame once a chart coordinate exceeds this.
    pub chart_limit: f64,
    /// Trace against `nu1 x nu2` instead of along it.
    pub reverse: bool,
    /// Largest spread of `alpha` for the curve to count as constant-angle.
    pub constant_angle_tol: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self {
            step: 1e-2,
            min_step: 1e-6,
            corrector_tol: 1e-12,
            max_corrector_iter: 25,
            min_closure_steps: 10,
            max_steps: 200_000,
            chart_limit: 10.0,
            reverse: false,
            constant_angle_tol: CONSTANT_ANGLE_TOL,
        }
    }
}

/// A point on both surfaces, given by the two outward normals there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Seed {
    pub nu1: Vector3<f64>,
    pub nu2: Vector3<f64>,
    pub point: Vector3<f64>,
    /// `|P1 - P2|` after polishing.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntersectionSample {
    /// Chart-space arclength of the continuation.
    pub u: f64,
    pub s: f64,
    /// World coordinates.
    pub point: SurfacePoint,
    pub nu1: Vector3<f64>,
    pub nu2: Vector3<f64>,
    pub tangent: Vector3<f64>,
    /// Normal coordinates in the report frame.
    pub xi1: Complex64,
    pub xi2: Complex64,
    pub alpha: f64,
    pub a1: f64,
    pub a2: f64,
    pub beta: Option<f64>,
    pub phi1: Option<f64>,
    pub phi2: Option<f64>,
    /// Geodesic torsions `-<d nu / ds, nu x T>`.
    pub tau_g1: f64,
    pub tau_g2: f64,
    pub curv1: CurvatureData,
    pub curv2: CurvatureData,
    /// `|P1(xi1) - P2(xi2)|` in the working frame.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracedIntersection {
    /// Closed curves repeat the first sample (up to `closure_gap`) at the end.
    pub samples: Vec<IntersectionSample>,
    pub closed: bool,
    pub total_length: f64,
    pub closure_gap: f64,
    /// Rotation taking world vectors to the report frame of the chart data.
    pub frame: Matrix3<f64>,
    /// First sample index at which each surface is (numerically) umbilic.
    pub umbilic_on_curve: [Option<usize>; 2],
    pub constant_angle_tol: f64,
}

impl TracedIntersection {
    pub fn umbilic_free(&self) -> bool {
        self.umbilic_on_curve.iter().all(Option::is_none)
    }

    pub fn arclengths(&self) -> Vec<f64> {
        self.samples.iter().map(|p| p.s).collect()
    }

    /// Both surfaces in the report frame.
    pub fn report_surfaces(
        &self,
        s1: &SupportSurface,
        s2: &SupportSurface,
    ) -> Result<(SupportSurface, SupportSurface)> {
        Ok((s1.rotate_frame(&self.frame)?, s2.rotate_frame(&self.frame)?))
    }
}

/// The two surfaces seen through one rotated frame.
struct Work {
    /// World-to-work rotation.
    q: Matrix3<f64>,
    s1: SupportSurface,
    s2: SupportSurface,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl Work {
    fn new(s1: &SupportSurface, s2: &SupportSurface, q: Matrix3<f64>) -> Result<Self> {
        Ok(Self {
            q,
            s1: s1.rotate_frame(&q)?,
            s2: s2.rotate_frame(&q)?,
        })
    }

    fn centred_on(s1: &SupportSurface, s2: &SupportSurface, nu1: &Vector3<f64>, nu2: &Vector3<f64>) -> Result<Self> {
        let mid = nu1 + nu2;
        let axis = if mid.norm() > 1e-6 { mid } else { *nu1 };
        Self::new(s1, s2, rotation_to_north(&axis))
    }

    fn coords(&self, nu1: &Vector3<f64>, nu2: &Vector3<f64>) -> Result<Vector4<f64>> {
        let a = direction_to_xi(&(self.q * nu1))?;
        let b = direction_to_xi(&(self.q * nu2))?;
        Ok(Vector4::new(a.re, a.im, b.re, b.im))
    }

    fn points(&self, x: &Vector4<f64>) -> Result<(Vector3<f64>, Vector3<f64>)> {
        Ok((
            self.s1.surface_point(c(x[0], x[1]))?.to_vector(),
            self.s2.surface_point(c(x[2], x[3]))?.to_vector(),
        ))
    }

    fn residual(&self, x: &Vector4<f64>) -> Result<Vector3<f64>> {
        let (p1, p2) = self.points(x)?;
        Ok(p1 - p2)
    }

    fn jacobian(&self, x: &Vector4<f64>) -> Result<nalgebra::Matrix3x4<f64>> {
        let [a, b] = self.s1.surface_point_jacobian(c(x[0], x[1]))?;
        let [d, e] = self.s2.surface_point_jacobian(c(x[2], x[3]))?;
        Ok(nalgebra::Matrix3x4::from_columns(&[a, b, -d, -e]))
    }

    fn normals(&self, x: &Vector4<f64>) -> (Vector3<f64>, Vector3<f64>) {
        (xi_to_direction(c(x[0], x[1])), xi_to_direction(c(x[2], x[3])))
    }

    /// Unit null vector of the Jacobian oriented so the surface point moves
    /// along `sign * nu1 x nu2`.
    fn tangent(&self, x: &Vector4<f64>, sign: f64) -> Result<Vector4<f64>> {
        let j = self.jacobian(x)?;
        let mut t = Vector4::zeros();
        for i in 0..4 {
            let minor = j.remove_column(i).determinant();
            t[i] = if i % 2 == 0 { minor } else { -minor };
        }
        let norm = t.norm();
        if !(norm > 1e-14 * j.norm().powi(3)) {
            return Err(GeomError::TangentialContact);
        }
        t /= norm;
        let (n1, n2) = self.normals(x);
        let dp = j.fixed_columns::<2>(0) * t.fixed_rows::<2>(0);
        if dp.dot(&n1.cross(&n2)) * sign < 0.0 {
            t = -t;
        }
        Ok(t)
    }

    /// Newton on `F(x) = 0`, `t . (x - anchor) = 0` starting from `x`.
    fn correct(
        &self,
        x: Vector4<f64>,
        t: &Vector4<f64>,
        anchor: &Vector4<f64>,
        opts: &TraceOptions,
        scale: f64,
    ) -> Result<(Vector4<f64>, usize)> {
        let mut x = x;
        let tol = opts.corrector_tol * scale;
        let mut last = f64::INFINITY;
        for it in 0..=opts.max_corrector_iter {
            let f = self.residual(&x)?;
            let g = t.dot(&(x - anchor));
            last = f.norm();
            if last <= tol && g.abs() <= tol {
                return Ok((x, it));
            }
            if it == opts.max_corrector_iter {
                break;
            }
            let j = self.jacobian(&x)?;
            let mut a = Matrix4::zeros();
            a.fixed_view_mut::<3, 4>(0, 0).copy_from(&j);
            a.set_row(3, &t.transpose());
            let b = -Vector4::new(f.x, f.y, f.z, g);
            let dx = a.lu().solve(&b).ok_or(GeomError::CorrectorDiverged(last))?;
            x += dx;
            if !x.iter().all(|v| v.is_finite()) || x.fixed_rows::<2>(0).norm().max(x.fixed_rows::<2>(2).norm()) > 1e3 {
                return Err(GeomError::CorrectorDiverged(last));
            }
        }
        Err(GeomError::CorrectorDiverged(last))
    }

    fn world_sample(&self, x: &Vector4<f64>) -> Result<RawSample> {
        let (p1, p2) = self.points(x)?;
        let (n1, n2) = self.normals(x);
        let qt = self.q.transpose();
        Ok(RawSample {
            point: qt * (p1 + p2) * 0.5,
            nu1: qt * n1,
            nu2: qt * n2,
            residual: (p1 - p2).norm(),
        })
    }
}

#[derive(Debug, Clone, Copy)]
struct RawSample {
    point: Vector3<f64>,
    nu1: Vector3<f64>,
    nu2: Vector3<f64>,
    residual: f64,
}

fn normals_too_close(nu1: &Vector3<f64>, nu2: &Vector3<f64>) -> bool {
    nu1.cross(nu2).norm() < 1e-6
}

/// Damped least squares on `P1 - P2 = 0` from the given normal guesses.
pub fn polish_seed(s1: &SupportSurface, s2: &SupportSurface, nu1: &Vector3<f64>, nu2: &Vector3<f64>) -> Result<Seed> {
    let work = Work::centred_on(s1, s2, nu1, nu2)?;
    let scale = s1.length_scale().max(s2.length_scale()).max(1.0);
    let mut x = work.coords(nu1, nu2)?;
    let mut f = work.residual(&x)?;
    let mut mu = 1e-3;
    for _ in 0..500 {
        if f.norm() <= 1e-13 * scale {
            break;
        }
        let j = work.jacobian(&x)?;
        let jt = j.transpose();
        let g = jt * f;
        let h = jt * j;
        let d = h.diagonal().max().max(1e-300);
        let mut accepted = false;
        for _ in 0..40 {
            let m = h + Matrix4::identity() * (mu * d);
            let Some(step) = m.cholesky().map(|ch| -ch.solve(&g)) else {
                mu *= 10.0;
                continue;
            };
            let cand = x + step;
            if let Ok(fc) = work.residual(&cand) {
                if fc.norm() < f.norm() {
                    x = cand;
                    f = fc;
                    mu = (mu * 0.2).max(1e-14);
                    accepted = true;
                    break;
                }
            }
            mu *= 10.0;
        }
        if !accepted {
            break;
        }
    }
    let raw = work.world_sample(&x)?;
    if normals_too_close(&raw.nu1, &raw.nu2) && raw.residual <= 1e-6 * scale {
        return Err(GeomError::TangentialContact);
    }
    if raw.residual > 1e-10 * scale {
        return Err(GeomError::NoIntersection(raw.residual));
    }
    Ok(Seed {
        nu1: raw.nu1,
        nu2: raw.nu2,
        point: raw.point,
        residual: raw.residual,
    })
}

/// Find a point of `S1 ∩ S2`.
///
/// The signed distance of points of `S1` to `S2` is estimated by
/// `g(p) = max_m (p . m - h2(m))` over a direction grid; the seed is
/// polished from the grid point where `|g|` is smallest.
pub fn find_seed(s1: &SupportSurface, s2: &SupportSurface) -> Result<Seed> {
    let grid = fibonacci_sphere(2000);
    let h2: Vec<f64> = grid.iter().map(|m| s2.support_value(m)).collect();
    let mut best: Option<(f64, usize, usize)> = None;
    let mut has_pos = false;
    let mut has_neg = false;
    for (k, n1) in grid.iter().enumerate() {
        let (chart, xi) = s1.chart_for_direction(n1)?;
        let p = chart.rotation().transpose() * s1.in_chart(chart).surface_point(xi)?.to_vector();
        let (g, arg) = grid
            .iter()
            .zip(&h2)
            .enumerate()
            .map(|(i, (m, h))| (p.dot(m) - h, i))
            .fold((f64::NEG_INFINITY, 0), |a, b| if b.0 > a.0 { (b.0, b.1) } else { a });
        has_pos |= g > 0.0;
        has_neg |= g < 0.0;
        if best.is_none_or(|(bg, _, _)| g.abs() < bg.abs()) {
            best = Some((g, k, arg));
        }
    }
    let (g, k, i) = best.expect("non-empty grid");
    let scale = s1.length_scale().max(s2.length_scale());
    if !(has_pos && has_neg) && g.abs() > 0.05 * scale {
        return Err(GeomError::NoIntersection(g.abs()));
    }
    polish_seed(s1, s2, &grid[k], &grid[i])
}

fn report_frame(raw: &[RawSample], limit: f64) -> Matrix3<f64> {
    let fits = raw.iter().all(|r| {
        [r.nu1, r.nu2]
            .iter()
            .all(|n| direction_to_xi(n).is_ok_and(|xi| xi.norm() <= limit))
    });
    if fits {
        return Matrix3::identity();
    }
    let pole = fibonacci_sphere(400)
        .into_iter()
        .max_by(|a, b| {
            let near = |p: &Vector3<f64>| {
                raw.iter()
                    .flat_map(|r| [r.nu1.angle(p), r.nu2.angle(p)])
                    .fold(PI, f64::min)
            };
            near(a).total_cmp(&near(b))
        })
        .expect("non-empty grid");
    rotation_to_north(&-pole)
}

/// Length of the arc between two points with unit tangents `t0`, `t1`,
/// treating it as a circular arc.
fn arc_length(p0: &Vector3<f64>, p1: &Vector3<f64>, t0: &Vector3<f64>, t1: &Vector3<f64>) -> f64 {
    let chord = (p1 - p0).norm();
    let half = 0.5 * t0.angle(t1);
    if half < 1e-8 {
        chord
    } else {
        chord * half / half.sin()
    }
}

/// Trace the closed intersection curve through `seed` and fill in the
/// per-sample data.
pub fn trace_curve(
    s1: &SupportSurface,
    s2: &SupportSurface,
    seed: &Seed,
    opts: &TraceOptions,
) -> Result<TracedIntersection> {
    let sign = if opts.reverse { -1.0 } else { 1.0 };
    let scale = s1.length_scale().max(s2.length_scale()).max(1.0);
    let mut work = Work::centred_on(s1, s2, &seed.nu1, &seed.nu2)?;
    let mut x = work.coords(&seed.nu1, &seed.nu2)?;
    let t0 = work.tangent(&x, sign)?;
    x = work.correct(x, &t0, &x, opts, scale)?.0;
    let first = work.world_sample(&x)?;
    let mut raw = vec![first];
    let mut us = vec![0.0];
    let mut u = 0.0;
    let mut h = opts.step;
    let mut closure_gap = f64::NAN;
    let mut closed = false;

    for steps in 0..opts.max_steps {
        let t = work.tangent(&x, sign)?;
        if steps >= opts.min_closure_steps {
            if let Ok(xs) = work.coords(&first.nu1, &first.nu2) {
                let d = xs - x;
                let along = t.dot(&d);
                let across = (d - t * along).norm();
                if along > 0.0 && along <= 1.5 * h && across <= 0.5 * h {
                    let (xc, _) = work.correct(x + t * along, &t, &xs, opts, scale)?;
                    let last = work.world_sample(&xc)?;
                    closure_gap = (last.point - first.point).norm();
                    u += (xc - x).norm();
                    raw.push(last);
                    us.push(u);
                    closed = true;
                    break;
                }
            }
        }
        let (xn, tn) = loop {
            let xp = x + t * h;
            let attempt = work
                .correct(xp, &t, &xp, opts, scale)
                .and_then(|(xn, its)| Ok((xn, its, work.tangent(&xn, sign)?)));
            match attempt {
                Ok((xn, its, tn)) if tn.dot(&t) > 0.98 => {
                    if its <= 3 {
                        h = (h * 1.5).min(opts.step);
                    }
                    break (xn, tn);
                }
                Ok((_, _, _)) | Err(_) => {
                    h *= 0.5;
                    if h < opts.min_step {
                        let r = work.residual(&xp).map(|f| f.norm()).unwrap_or(f64::INFINITY);
                        return Err(GeomError::CorrectorDiverged(r));
                    }
                }
            }
        };
        let _ = tn;
        u += (xn - x).norm();
        x = xn;
        raw.push(work.world_sample(&x)?);
        us.push(u);
        let far = c(x[0], x[1]).norm().max(c(x[2], x[3]).norm());
        if far > opts.chart_limit {
            let r = raw.last().expect("just pushed");
            work = Work::centred_on(s1, s2, &r.nu1, &r.nu2)?;
            x = work.coords(&r.nu1, &r.nu2)?;
        }
    }
    if !closed {
        return Err(GeomError::OpenCurveBudgetExceeded(opts.max_steps));
    }
    enrich(s1, s2, &raw, &us, closure_gap, opts)
}

fn enrich(
    s1: &SupportSurface,
    s2: &SupportSurface,
    raw: &[RawSample],
    us: &[f64],
    closure_gap: f64,
    opts: &TraceOptions,
) -> Result<TracedIntersection> {
    let sign = if opts.reverse { -1.0 } else { 1.0 };
    let frame = report_frame(raw, REPORT_CHART_LIMIT);
    let r1 = s1.rotate_frame(&frame)?;
    let r2 = s2.rotate_frame(&frame)?;
    let tangents: Vec<Vector3<f64>> = raw.iter().map(|r| r.nu1.cross(&r.nu2).normalize() * sign).collect();
    let mut s = vec![0.0];
    for k in 1..raw.len() {
        let ds = arc_length(&raw[k - 1].point, &raw[k].point, &tangents[k - 1], &tangents[k]);
        s.push(s[k - 1] + ds);
    }
    let mut samples = Vec::with_capacity(raw.len());
    let mut umbilic_on_curve = [None, None];
    for (k, r) in raw.iter().enumerate() {
        let xi1 = direction_to_xi(&(frame * r.nu1))?;
        let xi2 = direction_to_xi(&(frame * r.nu2))?;
        let curv1 = r1.curvature_raw(xi1)?;
        let curv2 = r2.curvature_raw(xi2)?;
        for (slot, cd) in [&curv1, &curv2].into_iter().enumerate() {
            if umbilic_on_curve[slot].is_none() && cd.sigma.norm() < UMBILIC_RATIO * cd.psi {
                umbilic_on_curve[slot] = Some(k);
            }
        }
        let alpha = angle_between(xi1, xi2);
        let cfg = AngleConfig::from_alpha(alpha).map_err(|_| GeomError::TangentialContact)?;
        let a1 = cone_param_a1(xi1, xi2, &cfg, 1e-8)?;
        let a2 = cone_param_a2(xi1, &cfg, a1)?;
        samples.push(IntersectionSample {
            u: us[k],
            s: s[k],
            point: SurfacePoint::from_vector(&r.point),
            nu1: r.nu1,
            nu2: r.nu2,
            tangent: tangents[k],
            xi1,
            xi2,
            alpha,
            a1,
            a2,
            beta: None,
            phi1: None,
            phi2: None,
            tau_g1: 0.0,
            tau_g2: 0.0,
            curv1,
            curv2,
            residual: r.residual,
        });
    }
    let a1 = unwrap_sequence(&samples.iter().map(|p| p.a1).collect::<Vec<_>>(), 2.0 * PI);
    let a2 = unwrap_sequence(&samples.iter().map(|p| p.a2).collect::<Vec<_>>(), 2.0 * PI);
    for (p, (x, y)) in samples.iter_mut().zip(a1.into_iter().zip(a2)) {
        p.a1 = x;
        p.a2 = y;
    }
    let mut curve = TracedIntersection {
        total_length: *s.last().expect("non-empty"),
        samples,
        closed: true,
        closure_gap,
        frame,
        umbilic_on_curve,
        constant_angle_tol: opts.constant_angle_tol,
    };
    let tp = torsion_profiles(&curve, s1, s2)?;
    for (p, (t1, t2)) in curve.samples.iter_mut().zip(tp.darboux[0].iter().zip(&tp.darboux[1])) {
        p.tau_g1 = *t1;
        p.tau_g2 = *t2;
    }
    let phi = phi_profiles(&curve, s1, s2)?;
    for (k, p) in curve.samples.iter_mut().enumerate() {
        p.phi1 = phi.phi[0].as_ref().map(|v| v[k]);
        p.phi2 = phi.phi[1].as_ref().map(|v| v[k]);
    }
    if let Ok(beta) = beta_profile(&curve) {
        for (p, b) in curve.samples.iter_mut().zip(beta) {
            p.beta = Some(b);
        }
    }
    Ok(curve)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleProfile {
    pub alpha: Vec<f64>,
    pub max_deviation: f64,
    pub constant: bool,
}

pub fn angle_profile(curve: &TracedIntersection) -> AngleProfile {
    let alpha: Vec<f64> = curve.samples.iter().map(|p| p.alpha).collect();
    let hi = alpha.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = alpha.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_deviation = hi - lo;
    AngleProfile {
        alpha,
        max_deviation,
        constant: max_deviation <= curve.constant_angle_tol,
    }
}

/// Solve `psi e^{i g} + conj(sigma) e^{-i g} = w` for `e^{i g}`, returning the
/// solution and the deviation of its modulus from one.
pub fn solve_unit_direction(psi: f64, sigma: Complex64, w: Complex64) -> (Complex64, f64) {
    let kappa = psi * psi - sigma.norm_sqr();
    let z = (psi * w - sigma.conj() * w.conj()) / kappa;
    (z, z.norm() - 1.0)
}

/// Derivative with respect to `s` of a closed sequence of chart coordinates.
pub fn chart_derivative(s: &[f64], values: &[Complex64]) -> Vec<Complex64> {
    derivative_along(s, values, true)
}

/// `beta = gamma - A1` where `gamma` is the chart direction of the curve in
/// the normal chart of `S1`, recovered from `d xi1 / ds` through
/// `psi1 e^{i gamma} + conj(sigma1) e^{-i gamma} = 2 kappa1 / (1 + |xi1|^2) d xi1/ds`.
pub fn beta_profile(curve: &TracedIntersection) -> Result<Vec<f64>> {
    if let Some(k) = curve.umbilic_on_curve[0] {
        return Err(GeomError::UmbilicOnCurve(k));
    }
    let s = curve.arclengths();
    let xi: Vec<Complex64> = curve.samples.iter().map(|p| p.xi1).collect();
    let dxi = chart_derivative(&s, &xi);
    let mut gammas = Vec::with_capacity(s.len());
    for (p, d) in curve.samples.iter().zip(&dxi) {
        let cd = &p.curv1;
        let w = d * (2.0 * cd.kappa / (1.0 + p.xi1.norm_sqr()));
        let (z, defect) = solve_unit_direction(cd.psi, cd.sigma, w);
        if !(defect.abs() <= BRANCH_TOL) {
            return Err(GeomError::NoBranch(defect));
        }
        gammas.push(z.arg());
    }
    let gammas = unwrap_sequence(&gammas, 2.0 * PI);
    let mut beta: Vec<f64> = gammas.iter().zip(&curve.samples).map(|(g, p)| g - p.a1).collect();
    // start on [0, 2 pi)
    let shift = 2.0 * PI * (beta[0] / (2.0 * PI)).floor();
    for b in &mut beta {
        *b -= shift;
    }
    Ok(beta)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiProfiles {
    /// Unwrapped `phi` per surface; `None` when the surface is umbilic on the curve.
    pub phi: [Option<Vec<f64>>; 2],
    /// `phi_end - phi_start = n pi`.
    pub windings: [Option<i64>; 2],
}

/// Signed angle from the larger-curvature principal direction to the curve
/// tangent, about each surface's outward normal.
pub fn phi_profiles(curve: &TracedIntersection, s1: &SupportSurface, s2: &SupportSurface) -> Result<PhiProfiles> {
    let (r1, r2) = curve.report_surfaces(s1, s2)?;
    let mut phi: [Option<Vec<f64>>; 2] = [None, None];
    let mut windings = [None, None];
    for (slot, surf) in [&r1, &r2].into_iter().enumerate() {
        if curve.umbilic_on_curve[slot].is_some() {
            continue;
        }
        let mut out: Vec<f64> = Vec::with_capacity(curve.samples.len());
        for p in &curve.samples {
            let xi = if slot == 0 { p.xi1 } else { p.xi2 };
            let nu = curve.frame * if slot == 0 { p.nu1 } else { p.nu2 };
            let t = curve.frame * p.tangent;
            let e = principal_direction(surf, xi)?;
            let a = signed_angle(&e, &t, &nu);
            out.push(match out.last() {
                Some(&prev) => unwrap_near(prev, a, PI),
                None => a,
            });
        }
        if curve.closed {
            let raw = (out[out.len() - 1] - out[0]) / PI;
            let n = raw.round();
            if (raw - n).abs() <= crate::foliation::SNAP_TOL {
                windings[slot] = Some(n as i64);
            }
        }
        phi[slot] = Some(out);
    }
    Ok(PhiProfiles { phi, windings })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorsionProfiles {
    /// `-<d nu / ds, nu x T>` from differencing the normals.
    pub darboux: [Vec<f64>; 2],
    /// `(lambda - mu) sin(phi) cos(phi)`; `None` where the surface is umbilic on the curve.
    pub euler: [Option<Vec<f64>>; 2],
    /// Largest `|darboux - euler|` where both exist.
    pub max_gap: f64,
}

pub fn darboux_torsion(s: &[f64], normals: &[Vector3<f64>], tangents: &[Vector3<f64>], closed: bool) -> Vec<f64> {
    let dn = derivative_along(s, normals, closed);
    dn.iter()
        .zip(normals.iter().zip(tangents))
        .map(|(d, (n, t))| -d.dot(&n.cross(t)))
        .collect()
}

pub fn torsion_profiles(
    curve: &TracedIntersection,
    s1: &SupportSurface,
    s2: &SupportSurface,
) -> Result<TorsionProfiles> {
    let s = curve.arclengths();
    let tangents: Vec<Vector3<f64>> = curve.samples.iter().map(|p| p.tangent).collect();
    let n1: Vec<Vector3<f64>> = curve.samples.iter().map(|p| p.nu1).collect();
    let n2: Vec<Vector3<f64>> = curve.samples.iter().map(|p| p.nu2).collect();
    let darboux = [
        darboux_torsion(&s, &n1, &tangents, curve.closed),
        darboux_torsion(&s, &n2, &tangents, curve.closed),
    ];
    let (r1, r2) = curve.report_surfaces(s1, s2)?;
    let mut euler: [Option<Vec<f64>>; 2] = [None, None];
    let mut max_gap: f64 = 0.0;
    for (slot, surf) in [&r1, &r2].into_iter().enumerate() {
        if curve.umbilic_on_curve[slot].is_some() {
            continue;
        }
        let mut out = Vec::with_capacity(s.len());
        for (k, p) in curve.samples.iter().enumerate() {
            let (xi, nu, cd) = if slot == 0 {
                (p.xi1, p.nu1, &p.curv1)
            } else {
                (p.xi2, p.nu2, &p.curv2)
            };
            let e = principal_direction(surf, xi)?;
            let phi = signed_angle(&e, &(curve.frame * p.tangent), &(curve.frame * nu));
            let pd = principal_data(cd)?;
            let tau = (pd.lambda - pd.mu) * phi.sin() * phi.cos();
            max_gap = max_gap.max((tau - darboux[slot][k]).abs());
            out.push(tau);
        }
        euler[slot] = Some(out);
    }
    Ok(TorsionProfiles {
        darboux,
        euler,
        max_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(z: f64, r: f64) -> SupportSurface {
        SupportSurface::sphere(Vector3::new(0.0, 0.0, z), r).unwrap()
    }

    #[test]
    fn seed_on_two_sphere_circle() {
        let seed = find_seed(&sphere(0.25, 1.0), &sphere(-0.25, 1.0)).unwrap();
        let p = seed.point;
        assert!(p.z.abs() < 1e-9);
        assert!(((p.x * p.x + p.y * p.y).sqrt() - (1.0f64 - 0.0625).sqrt()).abs() < 1e-9);
        assert!(seed.residual <= 1e-10);
    }

    #[test]
    fn disjoint_and_touching_spheres() {
        assert!(matches!(
            find_seed(&sphere(2.0, 1.0), &sphere(-2.0, 1.0)),
            Err(GeomError::NoIntersection(_))
        ));
        assert_eq!(
            find_seed(&sphere(1.0, 1.0), &sphere(-1.0, 1.0)),
            Err(GeomError::TangentialContact)
        );
    }

    #[test]
    fn two_sphere_circle() {
        let (a, b) = (sphere(0.5, 1.0), sphere(-0.5, 1.0));
        let seed = find_seed(&a, &b).unwrap();
        let curve = trace_curve(&a, &b, &seed, &TraceOptions::default()).unwrap();
        assert!(curve.closed);
        assert!(curve.closure_gap <= 1e-8);
        assert!((curve.total_length - PI * 3f64.sqrt()).abs() < 1e-6);
        let prof = angle_profile(&curve);
        for al in &prof.alpha {
            assert!((al - PI / 3.0).abs() < 1e-10);
        }
        for p in &curve.samples {
            assert!(p.residual <= 1e-10);
            assert!(p.tau_g1.abs() < 1e-6 && p.tau_g2.abs() < 1e-6);
        }
        assert_eq!(curve.umbilic_on_curve, [Some(0), Some(0)]);
        assert!(matches!(beta_profile(&curve), Err(GeomError::UmbilicOnCurve(0))));
    }

    #[test]
    fn coaxial_spheroids_meet_in_a_parallel() {
        let a = SupportSurface::axis_ellipsoid(1.0, 1.0, 1.4).unwrap();
        let b = SupportSurface::ellipsoid([1.0, 1.0, 1.1], Matrix3::identity(), Vector3::new(0.0, 0.0, 0.4)).unwrap();
        let seed = find_seed(&a, &b).unwrap();
        let curve = trace_curve(&a, &b, &seed, &TraceOptions::default()).unwrap();
        let t0 = curve.samples[0].point.t;
        for p in &curve.samples {
            assert!((p.point.t - t0).abs() < 1e-8);
            assert!(p.phi1.unwrap().sin().abs() < 1e-6);
            assert!(p.phi2.unwrap().sin().abs() < 1e-6);
            let b = p.beta.unwrap();
            assert!((b - PI / 2.0).abs() < 1e-6 || (b - 1.5 * PI).abs() < 1e-6, "beta {b}");
        }
        assert!(angle_profile(&curve).max_deviation < 1e-8);
        let phi = phi_profiles(&curve, &a, &b).unwrap();
        assert_eq!(phi.windings, [Some(0), Some(0)]);
    }

    #[test]
    fn generic_pair_torsions_agree() {
        let a = SupportSurface::axis_ellipsoid(1.0, 1.2, 1.5).unwrap();
        let b = SupportSurface::sphere(Vector3::new(0.2, 0.0, 0.0), 1.1).unwrap();
        let seed = find_seed(&a, &b).unwrap();
        let curve = trace_curve(&a, &b, &seed, &TraceOptions::default()).unwrap();
        assert!(curve.samples.iter().all(|p| p.residual <= 1e-10));
        let tp = torsion_profiles(&curve, &a, &b).unwrap();
        assert!(tp.max_gap < 1e-4, "gap {}", tp.max_gap);
        assert!(angle_profile(&curve).max_deviation > 1e-3);
    }

    #[test]
    fn perturbed_arclength_has_no_branch() {
        let a = SupportSurface::axis_ellipsoid(1.0, 1.0, 1.4).unwrap();
        let b = SupportSurface::ellipsoid([1.0, 1.0, 1.1], Matrix3::identity(), Vector3::new(0.0, 0.0, 0.4)).unwrap();
        let seed = find_seed(&a, &b).unwrap();
        let mut curve = trace_curve(&a, &b, &seed, &TraceOptions::default()).unwrap();
        for p in &mut curve.samples {
            p.s *= 1.1;
        }
        assert!(matches!(beta_profile(&curve), Err(GeomError::NoBranch(_))));
    }
}
