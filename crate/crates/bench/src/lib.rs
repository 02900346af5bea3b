//! Shared fixtures for the benchmarks in `benches/`.

use linecurve::{Matrix3, SupportSurface, Vector3};

pub fn triaxial() -> SupportSurface {
    SupportSurface::axis_ellipsoid(1.0, 1.2, 1.5).expect("valid fixture")
}

/// Coaxial spheroids meeting along a parallel at constant angle.
pub fn coaxial_spheroids() -> (SupportSurface, SupportSurface) {
    (
        SupportSurface::axis_ellipsoid(1.0, 1.0, 1.4).expect("valid fixture"),
        SupportSurface::ellipsoid([1.0, 1.0, 1.1], Matrix3::identity(), Vector3::new(0.0, 0.0, 0.4))
            .expect("valid fixture"),
    )
}

/// Triaxial ellipsoid against an off-centre sphere.
pub fn generic_pair() -> (SupportSurface, SupportSurface) {
    (
        triaxial(),
        SupportSurface::sphere(Vector3::new(0.2, 0.0, 0.0), 1.1).expect("valid fixture"),
    )
}
