//! Closed convex surfaces described by their support functions, the
//! Lagrangian sections of their normal lines, and the curvature data
//! `(sigma, psi, kappa)` read off those sections.
//!
//! With `D = 1 + |xi|^2`, `r` the support function and subscripts chart
//! derivatives:
//!
//! * section: `eta = D^2 r_{conj xi} / 2`
//! * shear: `sigma = -d conj(eta) / d xi = -conj(xi) D r_xi - D^2 r_{xi xi} / 2`
//! * mean radius: `psi = r + D^2 d(eta / D^2)/d xi = r + D^2 r_{xi conj xi} / 2`
//! * `kappa = psi^2 - |sigma|^2`
//!
//! The radii of curvature are `psi +- |sigma|`. The section uses the
//! conjugate derivative; with the holomorphic derivative spheres stop being
//! totally umbilic, which the convention audit detects.
//!
//! `lambda` always denotes the larger principal curvature (smaller radius).

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::audit::Conventions;
use crate::error::{GeomError, Result};
use crate::harmonics::{self, solid_harmonic};
use crate::jet::Jet3;
use crate::numeric::{fibonacci_sphere, orthonormality_residual};
use crate::oriented_line_space::{
    chart_dx, direction_to_xi, point_on_line, xi_to_direction, OrientedLine, SurfacePoint, CHART_LIMIT,
};

/// Rotation by pi about the x axis; re-centres the southern hemisphere.
pub const SOUTH_FLIP: Matrix3<f64> = Matrix3::new(1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, -1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicTerm {
    pub l: u32,
    pub m: i32,
    pub coefficient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SurfaceKind {
    Sphere {
        center: Vector3<f64>,
        radius: f64,
    },
    Ellipsoid {
        semiaxes: [f64; 3],
        rotation: Matrix3<f64>,
        center: Vector3<f64>,
    },
    /// `r(n) = base_radius + sum c Y_lm(n)` with orthonormal real harmonics.
    HarmonicPerturbation {
        base_radius: f64,
        terms: Vec<HarmonicTerm>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DerivativeEngine {
    Analytic,
    /// Central differences with Richardson extrapolation; `None` selects
    /// `1e-4 * (1 + |xi|^2)`.
    FiniteDifference {
        step: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportSurface {
    kind: SurfaceKind,
    /// World-from-body rotation.
    frame: Matrix3<f64>,
    engine: DerivativeEngine,
}

/// Support value and its chart derivatives up to second order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportJet {
    pub r: f64,
    pub r_xi: Complex64,
    pub r_xibar: Complex64,
    pub r_xixi: Complex64,
    pub r_xixibar: f64,
    pub r_xibarxibar: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureData {
    pub r: f64,
    pub eta: Complex64,
    pub sigma: Complex64,
    pub psi: f64,
    pub kappa: f64,
}

impl CurvatureData {
    pub fn is_convex(&self) -> bool {
        self.psi > self.sigma.norm() && self.kappa > 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrincipalData {
    pub r_big: f64,
    pub r_small: f64,
    /// Larger principal curvature, `1 / r_small`.
    pub lambda: f64,
    /// Smaller principal curvature, `1 / r_big`.
    pub mu: f64,
}

/// Output of [`SupportSurface::shape_operator_oracle`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleFrame {
    /// Radii of curvature, descending.
    pub radii: [f64; 2],
    /// Principal directions matching `radii`.
    pub directions: [Vector3<f64>; 2],
    pub normal: Vector3<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub convex: bool,
    /// Minimum of `psi - |sigma|` (the smaller radius) over the grid.
    pub worst_margin: f64,
    pub worst_direction: [f64; 3],
    pub min_support: f64,
}

impl SupportSurface {
    pub fn sphere(center: Vector3<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !center.iter().all(|c| c.is_finite()) {
            return Err(GeomError::InvalidSurface(format!(
                "sphere radius {radius} must be positive"
            )));
        }
        Ok(Self::from_kind(SurfaceKind::Sphere { center, radius }))
    }

    pub fn ellipsoid(semiaxes: [f64; 3], rotation: Matrix3<f64>, center: Vector3<f64>) -> Result<Self> {
        if !semiaxes.iter().all(|a| *a > 0.0 && a.is_finite()) {
            return Err(GeomError::InvalidSurface(format!(
                "semiaxes {semiaxes:?} must be positive"
            )));
        }
        let res = orthonormality_residual(&rotation);
        if res > 1e-12 {
            return Err(GeomError::NotOrthonormal(res));
        }
        Ok(Self::from_kind(SurfaceKind::Ellipsoid {
            semiaxes,
            rotation,
            center,
        }))
    }

    /// Axis-aligned ellipsoid centred at the origin.
    pub fn axis_ellipsoid(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::ellipsoid([a, b, c], Matrix3::identity(), Vector3::zeros())
    }

    pub fn harmonic(base_radius: f64, terms: Vec<HarmonicTerm>) -> Result<Self> {
        if !(base_radius > 0.0) {
            return Err(GeomError::InvalidSurface(format!(
                "base radius {base_radius} must be positive"
            )));
        }
        for t in &terms {
            if t.l > harmonics::MAX_DEGREE || t.m.unsigned_abs() > t.l || !t.coefficient.is_finite() {
                return Err(GeomError::InvalidSurface(format!(
                    "harmonic term (l={}, m={}) outside 0 <= |m| <= l <= {}",
                    t.l,
                    t.m,
                    harmonics::MAX_DEGREE
                )));
            }
        }
        Ok(Self::from_kind(SurfaceKind::HarmonicPerturbation {
            base_radius,
            terms,
        }))
    }

    fn from_kind(kind: SurfaceKind) -> Self {
        Self {
            kind,
            frame: Matrix3::identity(),
            engine: DerivativeEngine::Analytic,
        }
    }

    pub fn with_engine(mut self, engine: DerivativeEngine) -> Self {
        self.engine = engine;
        self
    }

    pub fn kind(&self) -> &SurfaceKind {
        &self.kind
    }

    pub fn frame(&self) -> &Matrix3<f64> {
        &self.frame
    }

    pub fn engine(&self) -> DerivativeEngine {
        self.engine
    }

    pub fn is_sphere(&self) -> bool {
        matches!(self.kind, SurfaceKind::Sphere { .. })
    }

    /// Characteristic size used to scale absolute tolerances.
    pub fn length_scale(&self) -> f64 {
        match &self.kind {
            SurfaceKind::Sphere { radius, .. } => *radius,
            SurfaceKind::Ellipsoid { semiaxes, .. } => semiaxes.iter().cloned().fold(0.0, f64::max),
            SurfaceKind::HarmonicPerturbation { base_radius, .. } => *base_radius,
        }
    }

    /// The rotated copy `Q S`.
    pub fn rotate_frame(&self, q: &Matrix3<f64>) -> Result<Self> {
        let res = orthonormality_residual(q);
        if res > 1e-12 {
            return Err(GeomError::NotOrthonormal(res));
        }
        Ok(Self {
            kind: self.kind.clone(),
            frame: q * self.frame,
            engine: self.engine,
        })
    }

    /// Homogeneous degree-one extension of the support function, on jets.
    pub fn homogeneous_support(&self, x: &[Jet3; 3]) -> Jet3 {
        let f = &self.frame;
        let y: [Jet3; 3] = std::array::from_fn(|i| x[0] * f[(0, i)] + x[1] * f[(1, i)] + x[2] * f[(2, i)]);
        let dot = |c: &Vector3<f64>| y[0] * c.x + y[1] * c.y + y[2] * c.z;
        let norm = || (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
        match &self.kind {
            SurfaceKind::Sphere { center, radius } => norm() * *radius + dot(center),
            SurfaceKind::Ellipsoid {
                semiaxes,
                rotation,
                center,
            } => {
                let d = Matrix3::from_diagonal(&Vector3::from(semiaxes.map(|a| a * a)));
                let m = rotation * d * rotation.transpose();
                let mut q = Jet3::constant(0.0);
                for i in 0..3 {
                    for j in 0..3 {
                        q = q + y[i] * y[j] * m[(i, j)];
                    }
                }
                q.sqrt() + dot(center)
            }
            SurfaceKind::HarmonicPerturbation { base_radius, terms } => {
                let rho = norm();
                let mut h = rho * *base_radius;
                for t in terms {
                    let s = solid_harmonic(t.l, t.m, &y);
                    h = h + s * rho.powf(1.0 - t.l as f64) * t.coefficient;
                }
                h
            }
        }
    }

    /// Support value in the unit direction `n`.
    pub fn support_value(&self, n: &Vector3<f64>) -> f64 {
        self.homogeneous_support(&Jet3::variables(n)).value
    }

    fn support_at_xi(&self, xi: Complex64) -> f64 {
        self.support_value(&xi_to_direction(xi))
    }

    pub fn support_jet(&self, xi: Complex64) -> Result<SupportJet> {
        let m = xi.norm();
        if !(m <= CHART_LIMIT) {
            return Err(GeomError::ChartOverflow(m));
        }
        match self.engine {
            DerivativeEngine::Analytic => Ok(self.analytic_jet(xi)),
            DerivativeEngine::FiniteDifference { step } => {
                let h = step.unwrap_or(1e-4 * (1.0 + xi.norm_sqr()));
                Ok(self.fd_jet(xi, h))
            }
        }
    }

    fn analytic_jet(&self, xi: Complex64) -> SupportJet {
        let d = 1.0 + xi.norm_sqr();
        let x = xi_to_direction(xi);
        let j = self.homogeneous_support(&Jet3::variables(&x));
        let g = j.grad.map(|v| Complex64::new(v, 0.0));
        let hc = j.hess.map(|v| Complex64::new(v, 0.0));
        let dx = chart_dx(xi);
        let dxb = dx.map(|c| c.conj());
        let dxx = dx * (-2.0 * xi.conj() / d);
        let r_xi = g.dot(&dx);
        let r_xixi = dx.dot(&(hc * dx)) + g.dot(&dxx);
        // d^2 X / d xi d conj(xi) = -2 X / D^2 and grad H . X = H
        let r_xixibar = dx.dot(&(hc * dxb)).re - 2.0 * j.value / (d * d);
        SupportJet {
            r: j.value,
            r_xi,
            r_xibar: r_xi.conj(),
            r_xixi,
            r_xixibar,
            r_xibarxibar: r_xixi.conj(),
        }
    }

    fn fd_jet(&self, xi: Complex64, h: f64) -> SupportJet {
        let f = |du: f64, dv: f64| self.support_at_xi(xi + Complex64::new(du, dv));
        let f0 = f(0.0, 0.0);
        let stencil = |h: f64| {
            let (fp0, fm0, f0p, f0m) = (f(h, 0.0), f(-h, 0.0), f(0.0, h), f(0.0, -h));
            let ru = (fp0 - fm0) / (2.0 * h);
            let rv = (f0p - f0m) / (2.0 * h);
            let ruu = (fp0 - 2.0 * f0 + fm0) / (h * h);
            let rvv = (f0p - 2.0 * f0 + f0m) / (h * h);
            let ruv = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
            [ru, rv, ruu, rvv, ruv]
        };
        let coarse = stencil(h);
        let fine = stencil(h / 2.0);
        let r: [f64; 5] = std::array::from_fn(|k| (4.0 * fine[k] - coarse[k]) / 3.0);
        let [ru, rv, ruu, rvv, ruv] = r;
        let r_xi = Complex64::new(ru, -rv) * 0.5;
        let r_xixi = Complex64::new(ruu - rvv, -2.0 * ruv) * 0.25;
        SupportJet {
            r: f0,
            r_xi,
            r_xibar: r_xi.conj(),
            r_xixi,
            r_xixibar: 0.25 * (ruu + rvv),
            r_xibarxibar: r_xixi.conj(),
        }
    }

    pub fn section_eta(&self, xi: Complex64) -> Result<Complex64> {
        self.section_eta_with(xi, &Conventions::AUDITED)
    }

    pub fn section_eta_with(&self, xi: Complex64, conv: &Conventions) -> Result<Complex64> {
        let j = self.support_jet(xi)?;
        let d = 1.0 + xi.norm_sqr();
        let deriv = if conv.flip_pot1 { j.r_xi } else { j.r_xibar };
        Ok(0.5 * d * d * deriv)
    }

    pub fn normal_line(&self, xi: Complex64) -> Result<OrientedLine> {
        Ok(OrientedLine::new(xi, self.section_eta(xi)?))
    }

    /// Curvature data without the convexity gate.
    pub fn curvature_raw(&self, xi: Complex64) -> Result<CurvatureData> {
        let j = self.support_jet(xi)?;
        let d = 1.0 + xi.norm_sqr();
        let eta = 0.5 * d * d * j.r_xibar;
        let sigma = -xi.conj() * d * j.r_xi - 0.5 * d * d * j.r_xixi;
        let psi = j.r + 0.5 * d * d * j.r_xixibar;
        Ok(CurvatureData {
            r: j.r,
            eta,
            sigma,
            psi,
            kappa: psi * psi - sigma.norm_sqr(),
        })
    }

    pub fn curvature_data(&self, xi: Complex64) -> Result<CurvatureData> {
        let cd = self.curvature_raw(xi)?;
        if !cd.is_convex() {
            return Err(GeomError::NonConvex {
                psi: cd.psi,
                sigma_abs: cd.sigma.norm(),
            });
        }
        Ok(cd)
    }

    pub fn surface_point(&self, xi: Complex64) -> Result<SurfacePoint> {
        let j = self.support_jet(xi)?;
        let d = 1.0 + xi.norm_sqr();
        let line = OrientedLine::new(xi, 0.5 * d * d * j.r_xibar);
        Ok(point_on_line(&line, j.r))
    }

    /// `dP/dxi` of the surface point map: `psi X_xi - sigma conj(X_xi)`.
    pub fn surface_point_dxi(&self, xi: Complex64) -> Result<Vector3<Complex64>> {
        let cd = self.curvature_raw(xi)?;
        let dx = chart_dx(xi);
        Ok(dx * Complex64::new(cd.psi, 0.0) - dx.map(|c| c.conj()) * cd.sigma)
    }

    /// Real Jacobian `[dP/du, dP/dv]` of the surface point map.
    pub fn surface_point_jacobian(&self, xi: Complex64) -> Result<[Vector3<f64>; 2]> {
        let dp = self.surface_point_dxi(xi)?;
        Ok([dp.map(|c| 2.0 * c.re), dp.map(|c| -2.0 * c.im)])
    }

    /// Chart velocity `d xi / ds` of a curve on the surface through the point
    /// with normal coordinate `xi`, moving with tangent velocity `t`.
    pub fn chart_velocity(&self, xi: Complex64, t: &Vector3<f64>) -> Result<Complex64> {
        let cd = self.curvature_raw(xi)?;
        let d = 1.0 + xi.norm_sqr();
        let dx = chart_dx(xi);
        let q = 0.5 * d * d * Complex64::new(t.dot(&dx.map(|c| c.re)), -t.dot(&dx.map(|c| c.im)));
        Ok((cd.psi * q + cd.sigma.conj() * q.conj()) / cd.kappa)
    }

    pub fn lagrangian_residual(&self, xi: Complex64) -> Result<f64> {
        self.support_jet(xi)?;
        // outer step well above the finite-difference engine's own step so its
        // rounding noise is not amplified
        let h = 1e-3 * (1.0 + xi.norm_sqr());
        Ok(lagrangian_defect(
            |w| self.section_eta(w).unwrap_or(Complex64::new(f64::NAN, 0.0)),
            xi,
            h,
        ))
    }

    /// Principal radii and directions from finite-difference first and second
    /// fundamental forms of the surface point map (never touches sigma or psi).
    pub fn shape_operator_oracle(&self, xi: Complex64) -> Result<OracleFrame> {
        let exact = self.clone().with_engine(DerivativeEngine::Analytic);
        let p0 = exact.surface_point(xi)?.to_vector();
        let h = 1e-3 * (1.0 + xi.norm_sqr());
        let at = |du: f64, dv: f64| -> Result<Vector3<f64>> {
            Ok(exact.surface_point(xi + Complex64::new(du, dv))?.to_vector())
        };
        let stencil = |h: f64| -> Result<[Vector3<f64>; 5]> {
            let (pp0, pm0, p0p, p0m) = (at(h, 0.0)?, at(-h, 0.0)?, at(0.0, h)?, at(0.0, -h)?);
            let mixed = (at(h, h)? - at(h, -h)? - at(-h, h)? + at(-h, -h)?) / (4.0 * h * h);
            Ok([
                (pp0 - pm0) / (2.0 * h),
                (p0p - p0m) / (2.0 * h),
                (pp0 - p0 * 2.0 + pm0) / (h * h),
                mixed,
                (p0p - p0 * 2.0 + p0m) / (h * h),
            ])
        };
        let c = stencil(h)?;
        let f = stencil(h / 2.0)?;
        let r: [Vector3<f64>; 5] = std::array::from_fn(|k| (f[k] * 4.0 - c[k]) / 3.0);
        let [pu, pv, puu, puv, pvv] = r;
        let mut normal = pu.cross(&pv);
        if normal.norm() < 1e-14 {
            return Err(GeomError::DegenerateMetric);
        }
        normal.normalize_mut();
        if normal.dot(&xi_to_direction(xi)) < 0.0 {
            normal = -normal;
        }
        let first = Matrix2::new(pu.dot(&pu), pu.dot(&pv), pu.dot(&pv), pv.dot(&pv));
        // with the outward normal, convex surfaces get positive curvatures
        let second = -Matrix2::new(puu.dot(&normal), puv.dot(&normal), puv.dot(&normal), pvv.dot(&normal));
        let det = first.determinant();
        if det.abs() < 1e-14 * first.norm_squared() {
            return Err(GeomError::DegenerateMetric);
        }
        let shape = first.try_inverse().ok_or(GeomError::DegenerateMetric)? * second;
        let tr = shape.trace();
        let disc = (tr * tr / 4.0 - shape.determinant()).max(0.0).sqrt();
        let k_small = tr / 2.0 - disc;
        let k_big = tr / 2.0 + disc;
        let dir_for = |k: f64| -> Vector3<f64> {
            let a = shape - Matrix2::identity() * k;
            // null vector of a: pick the better-conditioned row
            let (r0, r1) = (Vector2::new(a[(0, 0)], a[(0, 1)]), Vector2::new(a[(1, 0)], a[(1, 1)]));
            let row = if r0.norm() >= r1.norm() { r0 } else { r1 };
            let c = if row.norm() < 1e-12 {
                Vector2::new(1.0, 0.0)
            } else {
                Vector2::new(-row.y, row.x)
            };
            (pu * c.x + pv * c.y).normalize()
        };
        let d_big_radius = dir_for(k_small);
        // orthogonal complement keeps the pair orthonormal when nearly umbilic
        let mut d_small_radius = dir_for(k_big);
        if disc < 1e-9 * tr.abs() {
            d_small_radius = normal.cross(&d_big_radius);
        }
        Ok(OracleFrame {
            radii: [1.0 / k_small, 1.0 / k_big],
            directions: [d_big_radius, d_small_radius],
            normal,
        })
    }

    /// Rotated copy and chart coordinate that keep the world direction `n`
    /// away from the excluded pole.
    pub fn chart_for_direction(&self, n: &Vector3<f64>) -> Result<(Chart, Complex64)> {
        let chart = if n.z > -0.5 { Chart::North } else { Chart::South };
        let q = chart.rotation();
        Ok((chart, direction_to_xi(&(q * n))?))
    }

    /// Surface seen through `chart` (the copy rotated by the chart rotation).
    pub fn in_chart(&self, chart: Chart) -> Self {
        match chart {
            Chart::North => self.clone(),
            Chart::South => self.rotate_frame(&SOUTH_FLIP).expect("flip is orthonormal"),
        }
    }

    pub fn convexity_check(&self, grid_n: usize) -> ConvexityReport {
        let grid_n = grid_n.max(100);
        let north = self.clone();
        let south = self.in_chart(Chart::South);
        let mut worst = f64::INFINITY;
        let mut worst_dir = [0.0; 3];
        let mut min_support = f64::INFINITY;
        for n in fibonacci_sphere(grid_n) {
            let Ok((chart, xi)) = self.chart_for_direction(&n) else {
                continue;
            };
            let s = if chart == Chart::North { &north } else { &south };
            let margin = match s.curvature_raw(xi) {
                Ok(cd) => cd.psi - cd.sigma.norm(),
                Err(_) => f64::NEG_INFINITY,
            };
            min_support = min_support.min(self.support_value(&n));
            if margin < worst {
                worst = margin;
                worst_dir = [n.x, n.y, n.z];
            }
        }
        ConvexityReport {
            convex: worst > 0.0 && min_support > 0.0,
            worst_margin: worst,
            worst_direction: worst_dir,
            min_support,
        }
    }
}

/// Which of the two stereographic charts a computation runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chart {
    North,
    South,
}

impl Chart {
    /// Rotation taking world directions into this chart's frame.
    pub fn rotation(&self) -> Matrix3<f64> {
        match self {
            Chart::North => Matrix3::identity(),
            Chart::South => SOUTH_FLIP,
        }
    }
}

pub fn principal_data(cd: &CurvatureData) -> Result<PrincipalData> {
    let s = cd.sigma.norm();
    if !(cd.psi > s) {
        return Err(GeomError::NonConvex {
            psi: cd.psi,
            sigma_abs: s,
        });
    }
    let r_big = cd.psi + s;
    let r_small = cd.psi - s;
    Ok(PrincipalData {
        r_big,
        r_small,
        lambda: 1.0 / r_small,
        mu: 1.0 / r_big,
    })
}

/// `|d/dxi (eta/D^2) - d/dconj(xi) (conj(eta)/D^2)|` for an arbitrary section
/// map `eta`, by central differences with step `h`.
pub fn lagrangian_defect(eta: impl Fn(Complex64) -> Complex64, xi: Complex64, h: f64) -> f64 {
    let g = |w: Complex64| eta(w) / (1.0 + w.norm_sqr()).powi(2);
    let diff = |h: f64| {
        let gu = (g(xi + Complex64::new(h, 0.0)) - g(xi - Complex64::new(h, 0.0))) / (2.0 * h);
        let gv = (g(xi + Complex64::new(0.0, h)) - g(xi - Complex64::new(0.0, h))) / (2.0 * h);
        0.5 * (gu - Complex64::new(0.0, 1.0) * gv)
    };
    let d = (4.0 * diff(h / 2.0) - diff(h)) / 3.0;
    // the second term is the conjugate of the first
    (d - d.conj()).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn e122() -> SupportSurface {
        SupportSurface::axis_ellipsoid(1.0, 2.0, 1.0).unwrap()
    }

    #[test]
    fn sphere_at_origin_has_constant_jet() {
        let s = SupportSurface::sphere(Vector3::zeros(), 1.7).unwrap();
        let j = s.support_jet(c(0.4, -0.3)).unwrap();
        assert!((j.r - 1.7).abs() < 1e-14);
        assert!(j.r_xi.norm() < 1e-14 && j.r_xixi.norm() < 1e-13 && j.r_xixibar.abs() < 1e-13);
        assert!(s.section_eta(c(0.4, -0.3)).unwrap().norm() < 1e-14);
    }

    #[test]
    fn translated_sphere_support_and_section() {
        let s = SupportSurface::sphere(Vector3::new(0.0, 0.0, 2.0), 1.0).unwrap();
        let xi = c(0.3, 0.1);
        let m = xi.norm_sqr();
        let j = s.support_jet(xi).unwrap();
        assert!((j.r - (1.0 + 2.0 * (1.0 - m) / (1.0 + m))).abs() < 1e-14);
        let eta = s.section_eta(xi).unwrap();
        assert!((eta - c(-0.6, -0.2)).norm() < 1e-14);
        let cd = s.curvature_data(xi).unwrap();
        assert!(cd.sigma.norm() < 1e-13);
        assert!((cd.psi - 1.0).abs() < 1e-13);
    }

    #[test]
    fn ellipsoid_axis_endpoint() {
        let s = e122();
        assert!((s.support_jet(c(0.0, 0.0)).unwrap().r - 1.0).abs() < 1e-15);
        let cd = s.curvature_data(c(0.0, 0.0)).unwrap();
        assert!((cd.psi - 2.5).abs() < 1e-12);
        assert!((cd.sigma.norm() - 1.5).abs() < 1e-12);
        assert!((cd.kappa - 4.0).abs() < 1e-12);
        let p = s.surface_point(c(0.0, 0.0)).unwrap();
        assert!((p.to_vector() - Vector3::z()).norm() < 1e-15);
    }

    #[test]
    fn spheroid_section_is_real_on_real_axis() {
        let s = SupportSurface::axis_ellipsoid(1.3, 1.3, 0.8).unwrap();
        for x in [-2.0, -0.3, 0.5, 4.0] {
            assert!(s.section_eta(c(x, 0.0)).unwrap().im.abs() < 1e-14);
        }
    }

    #[test]
    fn principal_data_examples() {
        let pd = principal_data(&CurvatureData {
            r: 1.0,
            eta: c(0.0, 0.0),
            sigma: c(0.0, 0.0),
            psi: 2.0,
            kappa: 4.0,
        })
        .unwrap();
        assert_eq!((pd.r_big, pd.r_small, pd.lambda, pd.mu), (2.0, 2.0, 0.5, 0.5));
        let pd = principal_data(&CurvatureData {
            r: 1.0,
            eta: c(0.0, 0.0),
            sigma: c(0.0, 1.5),
            psi: 2.5,
            kappa: 4.0,
        })
        .unwrap();
        assert!((pd.r_big - 4.0).abs() < 1e-15 && (pd.r_small - 1.0).abs() < 1e-15);
        assert!((pd.lambda - 1.0).abs() < 1e-15 && (pd.mu - 0.25).abs() < 1e-15);
        let err = principal_data(&CurvatureData {
            r: 1.0,
            eta: c(0.0, 0.0),
            sigma: c(1.0, 0.0),
            psi: 1.0,
            kappa: 0.0,
        });
        assert!(matches!(err, Err(GeomError::NonConvex { .. })));
    }

    #[test]
    fn surface_point_lies_on_quadric_with_matching_normal() {
        let s = SupportSurface::axis_ellipsoid(1.0, 1.2, 1.5).unwrap();
        for xi in [c(0.1, 0.2), c(-1.3, 0.7), c(2.0, -3.0)] {
            let p = s.surface_point(xi).unwrap().to_vector();
            let f = p.x * p.x + p.y * p.y / 1.44 + p.z * p.z / 2.25 - 1.0;
            assert!(f.abs() < 1e-12);
            let grad = Vector3::new(p.x, p.y / 1.44, p.z / 2.25).normalize();
            assert!((grad - xi_to_direction(xi)).norm() < 1e-10);
        }
    }

    #[test]
    fn point_jacobian_matches_differences() {
        let s = SupportSurface::harmonic(
            1.0,
            vec![
                HarmonicTerm {
                    l: 3,
                    m: 1,
                    coefficient: 0.05,
                },
                HarmonicTerm {
                    l: 2,
                    m: -2,
                    coefficient: 0.04,
                },
            ],
        )
        .unwrap();
        let xi = c(0.3, -0.8);
        let [ju, jv] = s.surface_point_jacobian(xi).unwrap();
        let h = 1e-6;
        let pu = (s.surface_point(xi + c(h, 0.0)).unwrap().to_vector()
            - s.surface_point(xi - c(h, 0.0)).unwrap().to_vector())
            / (2.0 * h);
        let pv = (s.surface_point(xi + c(0.0, h)).unwrap().to_vector()
            - s.surface_point(xi - c(0.0, h)).unwrap().to_vector())
            / (2.0 * h);
        assert!((ju - pu).norm() < 1e-8 && (jv - pv).norm() < 1e-8);
    }

    #[test]
    fn chart_velocity_inverts_jacobian() {
        let s = SupportSurface::axis_ellipsoid(1.0, 1.2, 1.5).unwrap();
        let xi = c(0.6, 0.3);
        let [ju, jv] = s.surface_point_jacobian(xi).unwrap();
        let t = (ju * 0.3 - jv * 0.8).normalize();
        let w = s.chart_velocity(xi, &t).unwrap();
        assert!((ju * w.re + jv * w.im - t).norm() < 1e-12);
    }

    #[test]
    fn oracle_on_ellipsoid_axis_endpoint() {
        let o = e122().shape_operator_oracle(c(0.0, 0.0)).unwrap();
        assert!((o.radii[0] - 4.0).abs() < 1e-7 && (o.radii[1] - 1.0).abs() < 1e-8);
        assert!(o.directions[0].y.abs() > 1.0 - 1e-9);
        assert!(o.directions[1].x.abs() > 1.0 - 1e-9);
    }

    #[test]
    fn oracle_on_sphere() {
        let s = SupportSurface::sphere(Vector3::new(0.1, 0.2, 0.3), 2.0).unwrap();
        let o = s.shape_operator_oracle(c(0.6, 0.4)).unwrap();
        assert!((o.radii[0] - 2.0).abs() < 1e-7 && (o.radii[1] - 2.0).abs() < 1e-7);
        assert!(o.directions[0].dot(&o.directions[1]).abs() < 1e-8);
    }

    #[test]
    fn lagrangian_negative_control() {
        let r = lagrangian_defect(|_| c(0.0, 1.0), c(1.0, 0.0), 1e-4);
        assert!((r - 0.5).abs() < 1e-10);
    }

    #[test]
    fn sphere_lagrangian_is_zero() {
        let s = SupportSurface::sphere(Vector3::zeros(), 1.0).unwrap();
        assert!(s.lagrangian_residual(c(0.2, 0.9)).unwrap() < 1e-12);
    }

    #[test]
    fn convexity_examples() {
        let s = SupportSurface::sphere(Vector3::new(0.1, 0.0, 0.0), 1.0).unwrap();
        assert!(s.convexity_check(200).convex);
        let e = SupportSurface::axis_ellipsoid(1.0, 1.2, 1.5).unwrap();
        let rep = e.convexity_check(500);
        assert!(rep.convex && rep.worst_margin > 0.0);
        let h = SupportSurface::harmonic(
            1.0,
            vec![HarmonicTerm {
                l: 4,
                m: 0,
                coefficient: 0.5,
            }],
        )
        .unwrap();
        assert!(!h.convexity_check(500).convex);
    }

    #[test]
    fn rotate_frame_equivariance() {
        let s = SupportSurface::ellipsoid(
            [1.0, 1.4, 0.8],
            crate::numeric::axis_rotation(&Vector3::new(1.0, 2.0, 0.5), 0.7),
            Vector3::new(0.1, -0.2, 0.05),
        )
        .unwrap();
        let q = crate::numeric::axis_rotation(&Vector3::x(), std::f64::consts::FRAC_PI_2);
        let r = s.rotate_frame(&q).unwrap();
        for xi in [c(0.0, 0.0), c(0.4, -0.2), c(-1.1, 0.6)] {
            let xi_r = direction_to_xi(&(q * xi_to_direction(xi))).unwrap();
            let p = s.surface_point(xi).unwrap().to_vector();
            let pr = r.surface_point(xi_r).unwrap().to_vector();
            assert!((q * p - pr).norm() < 1e-9);
            let (a, b) = (s.curvature_data(xi).unwrap(), r.curvature_data(xi_r).unwrap());
            assert!((a.psi - b.psi).abs() < 1e-9 && (a.sigma.norm() - b.sigma.norm()).abs() < 1e-9);
        }
        let not_rot = Matrix3::new(1.0, 0.1, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0);
        assert!(matches!(s.rotate_frame(&not_rot), Err(GeomError::NotOrthonormal(_))));
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(SupportSurface::sphere(Vector3::zeros(), -1.0).is_err());
        assert!(SupportSurface::axis_ellipsoid(1.0, 0.0, 1.0).is_err());
        assert!(SupportSurface::harmonic(
            1.0,
            vec![HarmonicTerm {
                l: 7,
                m: 0,
                coefficient: 0.1
            }]
        )
        .is_err());
        assert!(SupportSurface::harmonic(
            1.0,
            vec![HarmonicTerm {
                l: 2,
                m: 3,
                coefficient: 0.1
            }]
        )
        .is_err());
        let s = SupportSurface::sphere(Vector3::zeros(), 1.0).unwrap();
        assert!(matches!(s.support_jet(c(2e6, 0.0)), Err(GeomError::ChartOverflow(_))));
    }
}
