//! Property tests for the line-space formulas and the support-surface engine.

use std::f64::consts::PI;

use linecurve::numeric::axis_rotation;
use linecurve::oriented_line_space::{
    angle_between, cone_direction, cone_line, cone_param_a1, cone_param_a2, direction_to_xi, line_parameter,
    line_through_point, point_on_line, xi_to_direction,
};
use linecurve::{AngleConfig, Complex64, DerivativeEngine, OrientedLine, SupportSurface, Vector3};
use proptest::prelude::*;

fn chart_point() -> impl Strategy<Value = Complex64> {
    (0.0..3.0f64, 0.0..2.0 * PI).prop_map(|(r, a)| Complex64::from_polar(r, a))
}

fn small_complex() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| Complex64::new(a, b))
}

fn vec3(range: f64) -> impl Strategy<Value = Vector3<f64>> {
    (-range..range, -range..range, -range..range).prop_map(|(x, y, z)| Vector3::new(x, y, z))
}

fn ellipsoid() -> impl Strategy<Value = SupportSurface> {
    (
        prop::array::uniform3(0.6..2.0f64),
        vec3(1.0).prop_filter("axis", |v| v.norm() > 1e-2),
        0.0..PI,
        vec3(0.3),
    )
        .prop_map(|(axes, axis, angle, c)| SupportSurface::ellipsoid(axes, axis_rotation(&axis, angle), c).unwrap())
}

fn unit_angle(a: f64) -> Complex64 {
    Complex64::from_polar(1.0, a)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cone_direction_keeps_the_angle(xi1 in chart_point(), alpha in 0.1..3.0f64, a1 in 0.0..2.0 * PI) {
        let cfg = AngleConfig::from_alpha(alpha).unwrap();
        let xi2 = cone_direction(xi1, &cfg, a1).unwrap();
        prop_assert!((angle_between(xi1, xi2) - alpha).abs() <= 1e-12);
    }

    #[test]
    fn cone_parameters_invert(xi1 in chart_point(), alpha in 0.1..3.0f64, a1 in 0.0..2.0 * PI) {
        let cfg = AngleConfig::from_alpha(alpha).unwrap();
        let xi2 = cone_direction(xi1, &cfg, a1).unwrap();
        let back = cone_param_a1(xi1, xi2, &cfg, 1e-8).unwrap();
        prop_assert!((unit_angle(back) - unit_angle(a1)).norm() <= 1e-10);
        let a2 = cone_param_a2(xi1, &cfg, a1).unwrap();
        let from_xi2 = cone_param_a1(xi2, xi1, &cfg, 1e-8).unwrap();
        prop_assert!((unit_angle(a2) - unit_angle(from_xi2)).norm() <= 1e-10);
    }

    #[test]
    fn point_and_line_round_trip(xi in chart_point(), eta in small_complex(), r in -3.0..3.0f64) {
        let line = OrientedLine::new(xi, eta);
        let p = point_on_line(&line, r);
        let back = line_through_point(&p, xi);
        prop_assert!((back.eta - eta).norm() <= 1e-10 * (1.0 + eta.norm()));
        prop_assert!((line_parameter(&line, &p) - r).abs() <= 1e-10);
    }

    #[test]
    fn chart_round_trip(xi in chart_point()) {
        let back = direction_to_xi(&xi_to_direction(xi)).unwrap();
        prop_assert!((back - xi).norm() <= 1e-12 * (1.0 + xi.norm_sqr()));
    }

    #[test]
    fn cone_line_meets_its_base(xi in chart_point(), eta in small_complex(), r in -2.0..2.0f64,
                                alpha in 0.1..3.0f64, a1 in 0.0..2.0 * PI) {
        let base = OrientedLine::new(xi, eta);
        let cfg = AngleConfig::from_alpha(alpha).unwrap();
        let line = cone_line(&base, r, &cfg, a1).unwrap();
        let p = point_on_line(&base, r).to_vector();
        let foot = line.point(0.0).to_vector();
        let miss = (p - foot).cross(&line.direction()).norm();
        prop_assert!(miss <= 1e-9 * (1.0 + p.norm()));
        prop_assert!((line.direction().angle(&base.direction()) - alpha).abs() <= 1e-10);
    }

    #[test]
    fn jets_are_conjugation_symmetric(s in ellipsoid(), xi in chart_point()) {
        let j = s.support_jet(xi).unwrap();
        prop_assert!((j.r_xibar - j.r_xi.conj()).norm() <= 1e-10 * (1.0 + j.r_xi.norm()));
        prop_assert!((j.r_xibarxibar - j.r_xixi.conj()).norm() <= 1e-10 * (1.0 + j.r_xixi.norm()));
        prop_assert!(j.r_xixibar.is_finite());
    }

    #[test]
    fn translation_moves_points_and_keeps_curvature(axes in prop::array::uniform3(0.6..2.0f64),
                                                     c in vec3(1.0), xi in chart_point()) {
        let a = SupportSurface::ellipsoid(axes, linecurve::Matrix3::identity(), Vector3::zeros()).unwrap();
        let b = SupportSurface::ellipsoid(axes, linecurve::Matrix3::identity(), c).unwrap();
        let pa = a.surface_point(xi).unwrap().to_vector();
        let pb = b.surface_point(xi).unwrap().to_vector();
        prop_assert!((pb - pa - c).norm() <= 1e-10 * (1.0 + xi.norm_sqr()));
        let (ca, cb) = (a.curvature_data(xi).unwrap(), b.curvature_data(xi).unwrap());
        prop_assert!((ca.psi - cb.psi).abs() <= 1e-9);
        prop_assert!((ca.sigma - cb.sigma).norm() <= 1e-9);
    }

    #[test]
    fn surface_normal_matches_chart(s in ellipsoid(), xi in chart_point()) {
        let [du, dv] = s.surface_point_jacobian(xi).unwrap();
        let n = xi_to_direction(xi);
        let scale = du.norm().max(dv.norm());
        prop_assert!(du.dot(&n).abs() <= 1e-8 * scale);
        prop_assert!(dv.dot(&n).abs() <= 1e-8 * scale);
    }

    #[test]
    fn rotation_is_equivariant(s in ellipsoid(), axis in vec3(1.0).prop_filter("axis", |v| v.norm() > 1e-2),
                               angle in 0.0..PI, xi in (0.0..1.5f64, 0.0..2.0 * PI).prop_map(|(r, a)| Complex64::from_polar(r, a))) {
        let q = axis_rotation(&axis, angle);
        let r = s.rotate_frame(&q).unwrap();
        let image = q * xi_to_direction(xi);
        prop_assume!(image.z > -0.9);
        let xi_r = direction_to_xi(&image).unwrap();
        let p = s.surface_point(xi).unwrap().to_vector();
        let pr = r.surface_point(xi_r).unwrap().to_vector();
        prop_assert!((pr - q * p).norm() <= 1e-9);
        let (c0, c1) = (s.curvature_data(xi).unwrap(), r.curvature_data(xi_r).unwrap());
        prop_assert!((c0.psi - c1.psi).abs() <= 1e-9);
        prop_assert!((c0.sigma.norm() - c1.sigma.norm()).abs() <= 1e-9);
        prop_assert!((c0.kappa - c1.kappa).abs() <= 1e-9 * c0.kappa.abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn radii_agree_with_shape_operator(s in ellipsoid(), xi in (0.0..1.7f64, 0.0..2.0 * PI).prop_map(|(r, a)| Complex64::from_polar(r, a))) {
        let cd = s.curvature_data(xi).unwrap();
        let o = s.shape_operator_oracle(xi).unwrap();
        let big = cd.psi + cd.sigma.norm();
        let small = cd.psi - cd.sigma.norm();
        prop_assert!((big - o.radii[0]).abs() <= 1e-6 * o.radii[0]);
        prop_assert!((small - o.radii[1]).abs() <= 1e-6 * o.radii[1]);
    }

    #[test]
    fn finite_difference_engine_agrees(s in ellipsoid(), xi in (0.0..1.5f64, 0.0..2.0 * PI).prop_map(|(r, a)| Complex64::from_polar(r, a))) {
        let fd = s.clone().with_engine(DerivativeEngine::FiniteDifference { step: None });
        let (a, b) = (s.curvature_data(xi).unwrap(), fd.curvature_data(xi).unwrap());
        let scale = a.psi;
        prop_assert!((a.psi - b.psi).abs() <= 1e-4 * scale);
        prop_assert!((a.sigma - b.sigma).norm() <= 1e-4 * scale);
        prop_assert!(fd.lagrangian_residual(xi).unwrap() <= 1e-8);
    }

    #[test]
    fn spheres_have_no_shear(c in vec3(2.0), radius in 0.5..3.0f64, xi in chart_point()) {
        let s = SupportSurface::sphere(c, radius).unwrap();
        let cd = s.curvature_data(xi).unwrap();
        prop_assert!(cd.sigma.norm() <= 1e-9);
        prop_assert!((cd.psi - radius).abs() <= 1e-9);
        let p = s.surface_point(xi).unwrap().to_vector();
        prop_assert!(((p - c).norm() - radius).abs() <= 1e-10 * (1.0 + c.norm()));
    }
}
