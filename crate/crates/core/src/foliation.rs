//! Principal line fields, their windings along closed curves, and the
//! umbilic census.
//!
//! In a chart the direction of larger principal curvature has chart angle
//! `theta = -arg(sigma) / 2`; the line field is therefore encoded by the
//! "square" `conj(sigma)`, whose argument is `2 theta`. Windings of the line
//! field are half the winding of that square.
//!
//! Along a simple closed curve traversed counter-clockwise in a chart,
//! the angle `phi` from the principal direction to the curve tangent changes
//! by `n pi` with `n = 2 - 2 i`, where `i` is the enclosed umbilic index
//! (the `2` is the tangent's own turning). Parity of `n` is what decides
//! orientability of the foliation along the curve.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::{Matrix2, Vector2, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::numeric::{fibonacci_sphere, rotation_to_north, snap_half, unwrap_near};
use crate::oriented_line_space::{chart_direction_vector, direction_to_xi, xi_to_direction};
use crate::support_surface::{Chart, SupportSurface};

/// Direction and angle operations refuse points with `|sigma| < UMBILIC_RATIO * psi`.
pub const UMBILIC_RATIO: f64 = 1e-6;
/// Largest distance from a half-integer accepted before snapping.
pub const SNAP_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UmbilicPoint {
    /// Chart the point was located in and its coordinate there.
    pub chart: Chart,
    pub xi: Complex64,
    /// Outward normal direction (world frame).
    pub direction: [f64; 3],
    /// `|sigma|` at the refined point.
    pub residual: f64,
    pub psi: f64,
    /// Winding measured on the surrounding circle before snapping.
    pub winding: f64,
    pub index: f64,
}

impl UmbilicPoint {
    pub fn direction_vector(&self) -> Vector3<f64> {
        Vector3::from(self.direction)
    }

    /// Coordinate in the north chart; `None` at the excluded pole.
    pub fn north_xi(&self) -> Option<Complex64> {
        direction_to_xi(&self.direction_vector()).ok()
    }
}

/// Per-surface foliation summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceFoliation {
    pub label: String,
    pub winding: Option<i64>,
    pub orientable: Option<bool>,
    pub umbilics: Vec<UmbilicPoint>,
    pub census_total: Option<f64>,
    /// Total index of the discs on either side of the curve.
    pub disc_plus: Option<f64>,
    pub disc_minus: Option<f64>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoliationReport {
    pub surfaces: Vec<SurfaceFoliation>,
    /// Whether the two windings have the same parity (both defined).
    pub parity_consistent: Option<bool>,
}

impl FoliationReport {
    pub fn new(surfaces: Vec<SurfaceFoliation>) -> Self {
        let parity_consistent = match (surfaces.first(), surfaces.get(1)) {
            (Some(a), Some(b)) => match (a.winding, b.winding) {
                (Some(n), Some(m)) => Some((n - m).rem_euclid(2) == 0),
                _ => None,
            },
            _ => None,
        };
        Self {
            surfaces,
            parity_consistent,
        }
    }
}

/// Complex number whose argument is twice the chart angle of the
/// larger-curvature principal direction.
pub fn line_field_square(sigma: Complex64) -> Complex64 {
    sigma.conj()
}

pub fn principal_chart_angle(sigma: Complex64) -> f64 {
    -0.5 * sigma.arg()
}

/// Unit tangent along the principal direction of larger curvature (sign arbitrary).
pub fn principal_direction(s: &SupportSurface, xi: Complex64) -> Result<Vector3<f64>> {
    let cd = s.curvature_raw(xi)?;
    if cd.sigma.norm() < UMBILIC_RATIO * cd.psi {
        return Err(GeomError::UmbilicPoint {
            sigma_abs: cd.sigma.norm(),
            psi: cd.psi,
        });
    }
    Ok(chart_direction_vector(xi, principal_chart_angle(cd.sigma)))
}

/// Continuous line-field angle along a closed loop of samples.
#[derive(Debug, Clone, PartialEq)]
pub struct LineFieldWinding {
    /// Unwrapped line-field angles (half the unwrapped argument).
    pub angles: Vec<f64>,
    /// Total turn over `2 pi`, before snapping.
    pub raw: f64,
    pub snapped: f64,
}

/// Winding of a line field given by its squares `samples` around a closed
/// loop (the last sample connects back to the first): the total change of
/// `arg` divided by `4 pi`.
pub fn track_line_field_angle(samples: &[Complex64]) -> Result<LineFieldWinding> {
    if samples.len() < 3 {
        return Err(GeomError::SamplingTooCoarse(PI));
    }
    if let Some(k) = samples.iter().position(|s| s.norm() == 0.0) {
        return Err(GeomError::UmbilicOnCurve(k));
    }
    let mut args = vec![samples[0].arg()];
    let n = samples.len();
    for k in 1..=n {
        let a = samples[k % n].arg();
        let next = unwrap_near(args[k - 1], a, 2.0 * PI);
        let step = (next - args[k - 1]).abs();
        if step >= FRAC_PI_2 {
            return Err(GeomError::SamplingTooCoarse(step));
        }
        args.push(next);
    }
    let raw = (args[n] - args[0]) / (4.0 * PI);
    let (snapped, gap) = snap_half(raw);
    if gap > SNAP_TOL {
        return Err(GeomError::SamplingTooCoarse(gap));
    }
    args.pop();
    Ok(LineFieldWinding {
        angles: args.iter().map(|a| 0.5 * a).collect(),
        raw,
        snapped,
    })
}

/// Line-field winding around the chart circle `|xi - center| = radius`,
/// sampled counter-clockwise and refined until every angle step is below `pi/4`.
pub fn line_field_winding_on_circle(s: &SupportSurface, center: Complex64, radius: f64) -> Result<LineFieldWinding> {
    let mut n = 64;
    loop {
        let mut samples = Vec::with_capacity(n);
        for k in 0..n {
            let xi = center + Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64);
            let cd = s.curvature_raw(xi)?;
            if cd.sigma.norm() < UMBILIC_RATIO * cd.psi {
                return Err(GeomError::UmbilicOnCurve(k));
            }
            samples.push(line_field_square(cd.sigma));
        }
        let max_step = (0..n)
            .map(|k| (samples[(k + 1) % n] / samples[k]).arg().abs())
            .fold(0.0, f64::max);
        if max_step < FRAC_PI_4 {
            return track_line_field_angle(&samples);
        }
        if n >= 1 << 16 {
            return Err(GeomError::SamplingTooCoarse(max_step));
        }
        n *= 2;
    }
}

/// Angle `phi` from the principal line field to the curve tangent, tracked
/// along a closed curve.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiWinding {
    pub phi: Vec<f64>,
    pub raw: f64,
    pub n: i64,
}

/// Signed angle from `e` to `t` about `normal`.
pub fn signed_angle(e: &Vector3<f64>, t: &Vector3<f64>, normal: &Vector3<f64>) -> f64 {
    e.cross(t).dot(normal).atan2(e.dot(t))
}

/// Unwrap `phi` along a closed curve whose last sample repeats the first.
///
/// `principal` is a line field (each vector defined up to sign), `tangents`
/// are oriented. Returns `n` with `phi_end - phi_start = n pi`.
pub fn phi_winding(
    tangents: &[Vector3<f64>],
    principal: &[Vector3<f64>],
    normals: &[Vector3<f64>],
) -> Result<PhiWinding> {
    let len = tangents.len();
    assert!(principal.len() == len && normals.len() == len);
    if len < 4 {
        return Err(GeomError::SamplingTooCoarse(PI));
    }
    let mut phi: Vec<f64> = Vec::with_capacity(len);
    for k in 0..len {
        if k > 0 {
            let dt = tangents[k].angle(&tangents[k - 1]);
            let de = principal[k].angle(&principal[k - 1]);
            let de = de.min(PI - de);
            if dt > FRAC_PI_4 || de > FRAC_PI_4 {
                return Err(GeomError::SamplingTooCoarse(dt.max(de)));
            }
        }
        let a = signed_angle(&principal[k], &tangents[k], &normals[k]);
        phi.push(if k == 0 { a } else { unwrap_near(phi[k - 1], a, PI) });
    }
    let raw = (phi[len - 1] - phi[0]) / PI;
    let n = raw.round();
    if (raw - n).abs() > SNAP_TOL {
        return Err(GeomError::SamplingTooCoarse((raw - n).abs()));
    }
    Ok(PhiWinding { phi, raw, n: n as i64 })
}

/// Carry a sign choice of the line field around the closed sample loop and
/// report whether it comes back to itself.
pub fn orientable_by_continuation(principal: &[Vector3<f64>]) -> bool {
    let mut current = principal[0];
    for e in &principal[1..] {
        current = if e.dot(&current) >= 0.0 { *e } else { -e };
    }
    current.dot(&principal[0]) > 0.0
}

/// Tangents, principal directions and normals along a sampled curve.
pub type CurveFrames = (Vec<Vector3<f64>>, Vec<Vector3<f64>>, Vec<Vector3<f64>>);

/// Samples of a chart circle pushed onto the surface: tangents, principal
/// directions and normals, counter-clockwise, closed (last repeats first).
pub fn chart_circle_frames(s: &SupportSurface, center: Complex64, radius: f64, n: usize) -> Result<CurveFrames> {
    let mut tangents = Vec::with_capacity(n + 1);
    let mut principal = Vec::with_capacity(n + 1);
    let mut normals = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let th = 2.0 * PI * (k % n) as f64 / n as f64;
        let xi = center + Complex64::from_polar(radius, th);
        let [ju, jv] = s.surface_point_jacobian(xi)?;
        // d xi / d th = i radius e^{i th}
        let v = Complex64::from_polar(radius, th) * Complex64::new(0.0, 1.0);
        tangents.push((ju * v.re + jv * v.im).normalize());
        principal.push(principal_direction(s, xi).map_err(|_| GeomError::UmbilicOnCurve(k))?);
        normals.push(xi_to_direction(xi));
    }
    Ok((tangents, principal, normals))
}

/// Winding `n` of `phi` along a chart circle, refined until sampling is fine enough.
pub fn chart_circle_phi_winding(s: &SupportSurface, center: Complex64, radius: f64) -> Result<PhiWinding> {
    let mut n = 128;
    loop {
        let (t, e, nu) = chart_circle_frames(s, center, radius, n)?;
        match phi_winding(&t, &e, &nu) {
            Err(GeomError::SamplingTooCoarse(_)) if n < 1 << 16 => n *= 2,
            other => return other,
        }
    }
}

fn sigma_ratio(s: &SupportSurface, xi: Complex64) -> f64 {
    match s.curvature_raw(xi) {
        Ok(cd) => cd.sigma.norm() / cd.psi.abs(),
        Err(_) => f64::INFINITY,
    }
}

/// Damped Gauss-Newton on `(Re sigma, Im sigma) = 0` with a difference Jacobian.
fn refine_umbilic(s: &SupportSurface, start: Complex64) -> Result<(Complex64, f64, f64)> {
    let sig = |xi: Complex64| -> Result<Complex64> { Ok(s.curvature_raw(xi)?.sigma) };
    let mut xi = start;
    let mut f = sig(xi)?;
    let mut mu = 1e-12;
    for _ in 0..200 {
        let h = 1e-7 * (1.0 + xi.norm_sqr());
        let fu = (sig(xi + Complex64::new(h, 0.0))? - sig(xi - Complex64::new(h, 0.0))?) / (2.0 * h);
        let fv = (sig(xi + Complex64::new(0.0, h))? - sig(xi - Complex64::new(0.0, h))?) / (2.0 * h);
        let j = Matrix2::new(fu.re, fv.re, fu.im, fv.im);
        let g = j.transpose() * Vector2::new(f.re, f.im);
        let jtj = j.transpose() * j;
        let scale = jtj.trace().max(1e-300);
        let mut accepted = false;
        for _ in 0..30 {
            let Some(inv) = (jtj + Matrix2::identity() * (mu * scale)).try_inverse() else {
                mu *= 10.0;
                continue;
            };
            let d = -(inv * g);
            let cand = xi + Complex64::new(d.x, d.y);
            // steps that leave the chart disc are rejected like uphill ones
            let fc = match sig(cand) {
                Ok(v) if cand.norm() <= 4.0 => v,
                _ => {
                    mu *= 10.0;
                    continue;
                }
            };
            if fc.norm() < f.norm() {
                xi = cand;
                f = fc;
                mu = (mu * 0.3).max(1e-15);
                accepted = true;
                break;
            }
            mu *= 10.0;
        }
        if !accepted || f.norm() < 1e-15 {
            break;
        }
    }
    let cd = s.curvature_raw(xi)?;
    Ok((xi, cd.sigma.norm(), cd.psi))
}

/// Locate the umbilics (zeros of `sigma`) over both charts and attach indices.
pub fn find_umbilics(s: &SupportSurface) -> Result<Vec<UmbilicPoint>> {
    const GRID: usize = 121;
    const REACH: f64 = 1.05;
    const CANDIDATE_RATIO: f64 = 0.1;
    let mut found: Vec<UmbilicPoint> = Vec::new();
    let mut total_cells = 0usize;
    let mut flat_cells = 0usize;
    for chart in [Chart::North, Chart::South] {
        let cs = s.in_chart(chart);
        let step = 2.0 * REACH / (GRID - 1) as f64;
        let coord = |i: usize| -REACH + step * i as f64;
        let mut vals = vec![vec![f64::INFINITY; GRID]; GRID];
        for (i, row) in vals.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                let xi = Complex64::new(coord(i), coord(j));
                if xi.norm() <= REACH {
                    *v = sigma_ratio(&cs, xi);
                    total_cells += 1;
                    if *v < 1e-9 {
                        flat_cells += 1;
                    }
                }
            }
        }
        if flat_cells * 100 > total_cells {
            return Err(GeomError::DegenerateSurface);
        }
        for i in 1..GRID - 1 {
            for j in 1..GRID - 1 {
                let v = vals[i][j];
                if !(v < CANDIDATE_RATIO) {
                    continue;
                }
                let is_min = (i - 1..=i + 1)
                    .flat_map(|a| (j - 1..=j + 1).map(move |b| (a, b)))
                    .filter(|&(a, b)| (a, b) != (i, j))
                    .all(|(a, b)| v <= vals[a][b]);
                if !is_min {
                    continue;
                }
                let (xi, res, psi) = refine_umbilic(&cs, Complex64::new(coord(i), coord(j)))?;
                if res > 1e-9 * psi || xi.norm() > REACH {
                    continue;
                }
                let dir = chart.rotation().transpose() * xi_to_direction(xi);
                if found.iter().any(|u| u.direction_vector().angle(&dir) < 2e-6) {
                    continue;
                }
                let w = line_field_winding_on_circle(&cs, xi, 1e-2)?;
                found.push(UmbilicPoint {
                    chart,
                    xi,
                    direction: [dir.x, dir.y, dir.z],
                    residual: res,
                    psi,
                    winding: w.raw,
                    index: w.snapped,
                });
            }
        }
    }
    if flat_cells * 100 > total_cells {
        return Err(GeomError::DegenerateSurface);
    }
    Ok(found)
}

/// Side assignment of the umbilics of one surface relative to a closed curve on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscSplit {
    pub plus_index: f64,
    pub minus_index: f64,
    /// `true` where the umbilic lies in the minus disc.
    pub in_minus: Vec<bool>,
}

/// Winding number of a closed planar polyline around `p`.
fn polyline_winding(poly: &[Complex64], p: Complex64) -> f64 {
    let n = poly.len();
    let mut total = 0.0;
    for k in 0..n {
        let a = poly[k] - p;
        let b = poly[(k + 1) % n] - p;
        total += (b / a).arg();
    }
    total / (2.0 * PI)
}

fn distance_to_polyline(poly: &[Complex64], p: Complex64) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|k| {
            let a = poly[k];
            let b = poly[(k + 1) % n];
            let ab = b - a;
            let t = (((p - a) * ab.conj()).re / ab.norm_sqr().max(1e-300)).clamp(0.0, 1.0);
            (a + ab * t - p).norm()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Split the umbilic census of `s` between the two discs bounded by a closed
/// curve. The curve is given by the outward normals of `s` along it; the
/// minus disc is the one whose outward conormal along the boundary is the
/// other surface's normal projected onto the tangent plane.
pub fn disc_index_split(
    s: &SupportSurface,
    curve_normals: &[Vector3<f64>],
    other_normals: &[Vector3<f64>],
    census: &[UmbilicPoint],
) -> Result<DiscSplit> {
    assert_eq!(curve_normals.len(), other_normals.len());
    // chart whose excluded pole is as far as possible from the curve and the umbilics
    let avoid: Vec<Vector3<f64>> = curve_normals
        .iter()
        .cloned()
        .chain(census.iter().map(|u| u.direction_vector()))
        .collect();
    let pole = fibonacci_sphere(400)
        .into_iter()
        .max_by(|a, b| {
            let da = avoid.iter().map(|v| v.angle(a)).fold(PI, f64::min);
            let db = avoid.iter().map(|v| v.angle(b)).fold(PI, f64::min);
            da.total_cmp(&db)
        })
        .expect("non-empty grid");
    let q = rotation_to_north(&-pole);
    let cs = s.rotate_frame(&q)?;
    let poly: Vec<Complex64> = curve_normals
        .iter()
        .map(|n| direction_to_xi(&(q * n)))
        .collect::<Result<_>>()?;

    // probe point stepped off the curve into the plus side
    let k0 = 0;
    let xi0 = poly[k0];
    let nu = q * curve_normals[k0];
    let other = q * other_normals[k0];
    let conormal = other - nu * other.dot(&nu);
    if conormal.norm() < 1e-9 {
        return Err(GeomError::TangentialContact);
    }
    let w = cs.chart_velocity(xi0, &conormal.normalize())?;
    let scale = poly.iter().map(|p| (p - xi0).norm()).fold(0.0, f64::max);
    let mut probe_step = 1e-3 * scale.max(1e-6);
    let plus_side = loop {
        let probe = xi0 + w / w.norm() * probe_step;
        if distance_to_polyline(&poly, probe) > 0.5 * probe_step || probe_step < 1e-9 {
            break polyline_winding(&poly, probe).round();
        }
        probe_step *= 0.5;
    };

    let mut plus_index = 0.0;
    let mut minus_index = 0.0;
    let mut in_minus = Vec::with_capacity(census.len());
    for u in census {
        let p = direction_to_xi(&(q * u.direction_vector()))?;
        let d = distance_to_polyline(&poly, p);
        if d < 1e-4 {
            return Err(GeomError::AmbiguousSide(d));
        }
        let minus = polyline_winding(&poly, p).round() != plus_side;
        if minus {
            minus_index += u.index;
        } else {
            plus_index += u.index;
        }
        in_minus.push(minus);
    }
    Ok(DiscSplit {
        plus_index,
        minus_index,
        in_minus,
    })
}
