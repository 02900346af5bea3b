//! Geometry of convex surfaces through the space of oriented lines.
//!
//! Convex surfaces are given by support functions on the direction sphere;
//! their normal lines form Lagrangian sections `xi -> (xi, eta(xi))` of the
//! space of oriented lines, from which the curvature data `(sigma, psi, kappa)`,
//! principal foliations and umbilic indices are read. Two surfaces meeting
//! along a curve are traced by continuation, and the constant-angle relations
//! between their principal directions are checked numerically along it.

// negated comparisons are how NaN inputs are rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod audit;
pub mod error;
pub mod foliation;
pub mod harmonics;
pub mod intersection_trace;
pub mod jet;
pub mod joachimsthal_checks;
pub mod numeric;
pub mod oriented_line_space;
pub mod selftest;
pub mod support_surface;

pub use audit::Conventions;
pub use error::{GeomError, Result};
pub use foliation::{FoliationReport, UmbilicPoint};
pub use intersection_trace::{IntersectionSample, TraceOptions, TracedIntersection};
pub use joachimsthal_checks::{ParityVerdict, VerificationReport};
pub use oriented_line_space::{AngleConfig, DirectionCoord, OrientedLine, SurfacePoint};
pub use support_surface::{
    CurvatureData, DerivativeEngine, HarmonicTerm, PrincipalData, SupportJet, SupportSurface, SurfaceKind,
};

pub use nalgebra::{Matrix3, Vector3};
pub use num_complex::Complex64;
