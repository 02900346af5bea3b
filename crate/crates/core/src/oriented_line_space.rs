//! Complex coordinates on the space of oriented lines.
//!
//! A direction is a point `xi` of the stereographic chart of the unit sphere,
//! `x1 + i x2 = 2 xi / (1 + |xi|^2)`, `x3 = (1 - |xi|^2) / (1 + |xi|^2)`, which
//! misses only `(0, 0, -1)`. An oriented line is the pair `(xi, eta)` where
//! `eta` is the tangent vector `eta d/dxi + conj(eta) d/dconj(xi)` at `xi`
//! recording the perpendicular offset of the line from the origin.
//!
//! Point/line incidence follows one fixed convention set:
//!
//! * `eta = (z - 2 t xi - conj(z) xi^2) / 2` for a line through `(z, t)`;
//! * the point at signed distance `r` along the line is
//!   `z = 2 (eta - xi^2 conj(eta)) / (1+|xi|^2)^2 + 2 xi r / (1+|xi|^2)`,
//!   `t = -2 (xi conj(eta) + conj(xi) eta) / (1+|xi|^2)^2 + (1-|xi|^2) r / (1+|xi|^2)`.
//!
//! The `xi^2` coefficient on `conj(eta)` is forced by the incidence relation;
//! the alternative `conj(xi)^2` reading is kept only for the convention audit.

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::audit::Conventions;
use crate::error::{GeomError, Result};

/// Largest chart modulus accepted before an operation asks for a frame rotation.
pub const CHART_LIMIT: f64 = 1e6;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Stereographic coordinate of a unit direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectionCoord(pub Complex64);

impl DirectionCoord {
    pub fn from_direction(v: &Vector3<f64>) -> Result<Self> {
        direction_to_xi(v).map(Self)
    }

    pub fn direction(&self) -> Vector3<f64> {
        xi_to_direction(self.0)
    }
}

/// An oriented line `(xi, eta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientedLine {
    pub xi: Complex64,
    pub eta: Complex64,
}

impl OrientedLine {
    pub fn new(xi: Complex64, eta: Complex64) -> Self {
        Self { xi, eta }
    }

    pub fn direction(&self) -> Vector3<f64> {
        xi_to_direction(self.xi)
    }

    pub fn point(&self, r: f64) -> SurfacePoint {
        point_on_line(self, r)
    }
}

/// A point of space written as `(z, t) = (x1 + i x2, x3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub z: Complex64,
    pub t: f64,
}

impl SurfacePoint {
    pub fn from_vector(v: &Vector3<f64>) -> Self {
        Self {
            z: Complex64::new(v.x, v.y),
            t: v.z,
        }
    }

    pub fn to_vector(&self) -> Vector3<f64> {
        Vector3::new(self.z.re, self.z.im, self.t)
    }

    pub fn distance(&self, other: &SurfacePoint) -> f64 {
        (self.to_vector() - other.to_vector()).norm()
    }
}

/// Intersection angle `alpha` together with `epsilon = tan(alpha / 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleConfig {
    alpha: f64,
    epsilon: f64,
}

impl AngleConfig {
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < std::f64::consts::PI) {
            return Err(GeomError::Refused(format!("angle {alpha} outside (0, pi)")));
        }
        Ok(Self {
            alpha,
            epsilon: (alpha / 2.0).tan(),
        })
    }

    pub fn from_epsilon(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(GeomError::Refused(format!("epsilon {epsilon} must be positive")));
        }
        Ok(Self {
            alpha: 2.0 * epsilon.atan(),
            epsilon,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

fn check_chart(xi: Complex64) -> Result<()> {
    let m = xi.norm();
    if !(m <= CHART_LIMIT) {
        return Err(GeomError::ChartOverflow(m));
    }
    Ok(())
}

pub fn xi_to_direction(xi: Complex64) -> Vector3<f64> {
    let m2 = xi.norm_sqr();
    let d = 1.0 + m2;
    Vector3::new(2.0 * xi.re / d, 2.0 * xi.im / d, (1.0 - m2) / d)
}

pub fn direction_to_xi(v: &Vector3<f64>) -> Result<Complex64> {
    let n = v.norm();
    let u = v / n;
    if (u - Vector3::new(0.0, 0.0, -1.0)).norm() < 1e-8 {
        return Err(GeomError::PoleExcluded);
    }
    Ok(Complex64::new(u.x, u.y) / (1.0 + u.z))
}

/// Angle in `[0, pi]` between the directions with coordinates `xi1`, `xi2`.
pub fn angle_between(xi1: Complex64, xi2: Complex64) -> f64 {
    let num = (xi2 - xi1).norm();
    let den = (Complex64::new(1.0, 0.0) + xi1.conj() * xi2).norm();
    2.0 * num.atan2(den)
}

/// Same angle through the dot product of the two unit vectors.
pub fn angle_between_dot(xi1: Complex64, xi2: Complex64) -> f64 {
    let a = xi1.norm_sqr();
    let b = xi2.norm_sqr();
    let num = 2.0 * (xi1 * xi2.conj()).re * 2.0 + (1.0 - a) * (1.0 - b);
    let c = num / ((1.0 + a) * (1.0 + b));
    c.clamp(-1.0, 1.0).acos()
}

/// Direction at angle `alpha` from `xi1`, the point `a1` of the angle circle.
pub fn cone_direction(xi1: Complex64, cfg: &AngleConfig, a1: f64) -> Result<Complex64> {
    check_chart(xi1)?;
    let w = Complex64::from_polar(cfg.epsilon(), a1);
    let den = 1.0 - xi1.conj() * w;
    if den.norm() <= 1e-12 {
        return Err(GeomError::ChartOverflow(f64::INFINITY));
    }
    let out = (xi1 + w) / den;
    check_chart(out)?;
    Ok(out)
}

/// Parameter `A1` placing `xi2` on the angle circle about `xi1`.
pub fn cone_param_a1(xi1: Complex64, xi2: Complex64, cfg: &AngleConfig, tol_angle: f64) -> Result<f64> {
    check_chart(xi1)?;
    check_chart(xi2)?;
    let w = (xi2 - xi1) / (cfg.epsilon() * (1.0 + xi1.conj() * xi2));
    let defect = w.norm() - 1.0;
    if !(defect.abs() <= tol_angle) {
        return Err(GeomError::NotOnCone(defect));
    }
    Ok(crate::numeric::wrap_two_pi(w.arg()))
}

/// Parameter `A2` of the inverted map `xi1 = (xi2 + eps e^{iA2}) / (1 - conj(xi2) eps e^{iA2})`.
pub fn cone_param_a2(xi1: Complex64, cfg: &AngleConfig, a1: f64) -> Result<f64> {
    cone_direction(xi1, cfg, a1)?;
    let w = Complex64::from_polar(1.0, a1);
    let eps = cfg.epsilon();
    let v = -(w - eps * xi1) / (w.conj() - eps * xi1.conj()) * w.conj();
    Ok(crate::numeric::wrap_two_pi(v.arg()))
}

pub fn point_on_line(line: &OrientedLine, r: f64) -> SurfacePoint {
    point_on_line_with(line, r, &Conventions::AUDITED)
}

pub fn point_on_line_with(line: &OrientedLine, r: f64, conv: &Conventions) -> SurfacePoint {
    let xi = line.xi;
    let eta = line.eta;
    let d = 1.0 + xi.norm_sqr();
    let coeff = if conv.flip_coordu {
        xi.conj() * xi.conj()
    } else {
        xi * xi
    };
    let z = 2.0 * (eta - coeff * eta.conj()) / (d * d) + 2.0 * xi * r / d;
    let t = -2.0 * (xi * eta.conj() + xi.conj() * eta).re / (d * d) + (1.0 - xi.norm_sqr()) * r / d;
    SurfacePoint { z, t }
}

/// The oriented line with direction `xi` through `p`.
pub fn line_through_point(p: &SurfacePoint, xi: Complex64) -> OrientedLine {
    let eta = 0.5 * (p.z - 2.0 * p.t * xi - p.z.conj() * xi * xi);
    OrientedLine { xi, eta }
}

/// Signed position of `p` along `line` (the `r` of [`point_on_line`]).
pub fn line_parameter(line: &OrientedLine, p: &SurfacePoint) -> f64 {
    p.to_vector().dot(&line.direction())
}

/// Line meeting `base` at parameter `r1` with angle `alpha`, at position `a1`
/// on the angle circle. Sweeping `base` over a normal congruence and `a1`
/// over the circle generates the constant-angle hypersurface.
pub fn cone_line(base: &OrientedLine, r1: f64, cfg: &AngleConfig, a1: f64) -> Result<OrientedLine> {
    cone_line_with(base, r1, cfg, a1, &Conventions::AUDITED)
}

pub fn cone_line_with(
    base: &OrientedLine,
    r1: f64,
    cfg: &AngleConfig,
    a1: f64,
    conv: &Conventions,
) -> Result<OrientedLine> {
    let xi = cone_direction(base.xi, cfg, a1)?;
    let eps = cfg.epsilon();
    let w = Complex64::from_polar(1.0, a1);
    let xi1 = base.xi;
    let eta1 = base.eta;
    let den = 1.0 - xi1.conj() * eps * w;
    let sign = if conv.flip_cone_sign { -1.0 } else { 1.0 };
    let num = eta1 - eps * eps * w * w * eta1.conj() - sign * eps * (1.0 + xi1.norm_sqr()) * w * r1;
    Ok(OrientedLine {
        xi,
        eta: num / (den * den),
    })
}

/// `d X / d xi` of the chart embedding, a complex null vector.
pub fn chart_dx(xi: Complex64) -> Vector3<Complex64> {
    let xb = xi.conj();
    let d = 1.0 + xi.norm_sqr();
    let one = Complex64::new(1.0, 0.0);
    Vector3::new(one - xb * xb, -I * (one + xb * xb), -2.0 * xb) * Complex64::new(1.0 / (d * d), 0.0)
}

/// Unit tangent vector at `xi` in chart direction `theta`.
pub fn chart_direction_vector(xi: Complex64, theta: f64) -> Vector3<f64> {
    let dx = chart_dx(xi) * Complex64::from_polar(1.0, theta);
    let v = Vector3::new(dx.x.re, dx.y.re, dx.z.re);
    v.normalize()
}

/// Chart angle of a tangent vector `v` at `xi`.
pub fn chart_angle_of(xi: Complex64, v: &Vector3<f64>) -> f64 {
    let dx = chart_dx(xi);
    let q = Complex64::new(v.dot(&dx.map(|c| c.re)), -v.dot(&dx.map(|c| c.im)));
    // v . conj(dX) in the bilinear sense
    q.arg()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn chart_examples() {
        assert!((xi_to_direction(c(0.0, 0.0)) - Vector3::z()).norm() < 1e-15);
        assert!((xi_to_direction(c(1.0, 0.0)) - Vector3::x()).norm() < 1e-15);
        assert!((xi_to_direction(c(0.0, 1.0)) - Vector3::y()).norm() < 1e-15);
        assert_eq!(direction_to_xi(&Vector3::z()).unwrap(), c(0.0, 0.0));
        assert!((direction_to_xi(&Vector3::x()).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(direction_to_xi(&-Vector3::z()), Err(GeomError::PoleExcluded));
    }

    #[test]
    fn angle_examples() {
        assert!((angle_between(c(0.0, 0.0), c(1.0, 0.0)) - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(angle_between(c(0.3, 0.2), c(0.3, 0.2)), 0.0);
        let xi2 = Complex64::from_polar(0.5f64.tan(), 0.7);
        assert!((angle_between(c(0.0, 0.0), xi2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cone_examples() {
        let cfg = AngleConfig::from_epsilon(1.0).unwrap();
        assert!((cone_direction(c(0.0, 0.0), &cfg, 0.0).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let cfg = AngleConfig::from_alpha(0.8).unwrap();
        let xi2 = cone_direction(c(0.0, 0.0), &cfg, 2.1).unwrap();
        assert!((xi2 - Complex64::from_polar(cfg.epsilon(), 2.1)).norm() < 1e-15);
        let a1 = cone_param_a1(c(0.0, 0.0), Complex64::from_polar(cfg.epsilon(), 0.3), &cfg, 1e-8).unwrap();
        assert!((a1 - 0.3).abs() < 1e-14);
        let err = cone_param_a1(c(0.0, 0.0), c(0.01, 0.0), &cfg, 1e-8);
        assert!(matches!(err, Err(GeomError::NotOnCone(_))));
    }

    #[test]
    fn a2_at_chart_center_is_antipodal_parameter() {
        let cfg = AngleConfig::from_alpha(1.3).unwrap();
        for a1 in [0.0, 0.4, 2.0, 5.5] {
            let a2 = cone_param_a2(c(0.0, 0.0), &cfg, a1).unwrap();
            let expect = crate::numeric::wrap_two_pi(a1 + PI);
            assert!((Complex64::from_polar(1.0, a2) - Complex64::from_polar(1.0, expect)).norm() < 1e-14);
        }
    }

    #[test]
    fn a2_small_epsilon_limit() {
        let xi1 = c(0.4, -0.7);
        let a1 = 1.1;
        let cfg = AngleConfig::from_epsilon(1e-9).unwrap();
        let a2 = cone_param_a2(xi1, &cfg, a1).unwrap();
        assert!((Complex64::from_polar(1.0, a2) + Complex64::from_polar(1.0, a1)).norm() < 1e-8);
    }

    #[test]
    fn cone_direction_overflow() {
        let cfg = AngleConfig::from_epsilon(1.0).unwrap();
        // conj(xi1) * eps * e^{iA} = 1
        let err = cone_direction(c(1.0, 0.0), &cfg, 0.0);
        assert!(matches!(err, Err(GeomError::ChartOverflow(_))));
    }

    #[test]
    fn point_on_line_examples() {
        let p = point_on_line(&OrientedLine::new(c(0.0, 0.0), c(0.0, 0.0)), 5.0);
        assert_eq!((p.z, p.t), (c(0.0, 0.0), 5.0));
        let p = point_on_line(&OrientedLine::new(c(0.0, 0.0), c(1.0, 0.0)), 0.0);
        assert_eq!((p.z, p.t), (c(2.0, 0.0), 0.0));
        // normals of a sphere centred on (0, 0, 2) pass through the centre
        let xi = c(0.5, 0.5);
        let m = xi.norm_sqr();
        let p = point_on_line(&OrientedLine::new(xi, -2.0 * xi), 2.0 * (1.0 - m) / (1.0 + m));
        assert!(p.z.norm() < 1e-15 && (p.t - 2.0).abs() < 1e-15);
    }

    #[test]
    fn line_through_point_examples() {
        let xi = c(0.3, -1.2);
        let l = line_through_point(&SurfacePoint { z: c(0.0, 0.0), t: 0.0 }, xi);
        assert_eq!(l.eta, c(0.0, 0.0));
        let l = line_through_point(&SurfacePoint { z: c(0.0, 0.0), t: 1.5 }, xi);
        assert!((l.eta + 1.5 * xi).norm() < 1e-15);
    }

    #[test]
    fn cone_line_examples() {
        let cfg = AngleConfig::from_alpha(0.9).unwrap();
        let base = OrientedLine::new(c(0.0, 0.0), c(0.0, 0.0));
        let l = cone_line(&base, 0.0, &cfg, 1.7).unwrap();
        assert!((l.xi - Complex64::from_polar(cfg.epsilon(), 1.7)).norm() < 1e-15);
        assert!(l.eta.norm() < 1e-15);
        let l = cone_line(&base, 1.0, &cfg, 1.7).unwrap();
        assert!((l.eta + Complex64::from_polar(cfg.epsilon(), 1.7)).norm() < 1e-15);
        let through = line_through_point(&SurfacePoint { z: c(0.0, 0.0), t: 1.0 }, l.xi);
        assert!((through.eta - l.eta).norm() < 1e-15);
    }

    #[test]
    fn chart_angle_roundtrip() {
        let xi = c(0.7, -0.2);
        for th in [0.0, 1.0, 2.5, -2.0] {
            let v = chart_direction_vector(xi, th);
            assert!(v.dot(&xi_to_direction(xi)).abs() < 1e-14);
            let back = chart_angle_of(xi, &v);
            assert!((Complex64::from_polar(1.0, back) - Complex64::from_polar(1.0, th)).norm() < 1e-12);
        }
        let v = chart_direction_vector(c(0.0, 0.0), 0.3);
        assert!((v - Vector3::new(0.3f64.cos(), 0.3f64.sin(), 0.0)).norm() < 1e-14);
    }
}
