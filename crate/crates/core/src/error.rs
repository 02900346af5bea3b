use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("direction is the excluded chart pole (0,0,-1)")]
    PoleExcluded,
    #[error("chart coordinate overflow (|xi| = {0:e}); rotate the frame")]
    ChartOverflow(f64),
    #[error("point is not on the angle circle (|e^iA| - 1 = {0:e})")]
    NotOnCone(f64),
    #[error("surface is not convex here (psi = {psi}, |sigma| = {sigma_abs})")]
    NonConvex { psi: f64, sigma_abs: f64 },
    #[error("matrix is not orthonormal (residual {0:e})")]
    NotOrthonormal(f64),
    #[error("degenerate metric in the finite-difference oracle")]
    DegenerateMetric,
    #[error("invalid surface parameters: {0}")]
    InvalidSurface(String),
    #[error("umbilic point: |sigma| = {sigma_abs:e} below threshold for psi = {psi}")]
    UmbilicPoint { sigma_abs: f64, psi: f64 },
    #[error("umbilic on curve at sample {0}")]
    UmbilicOnCurve(usize),
    #[error("sampling too coarse: angle step {0} exceeds the allowed bound")]
    SamplingTooCoarse(f64),
    #[error("surface is degenerate (sphere-like): umbilic census undefined")]
    DegenerateSurface,
    #[error("umbilic too close to the splitting curve (distance {0:e})")]
    AmbiguousSide(f64),
    #[error("surfaces do not intersect (separation {0:e})")]
    NoIntersection(f64),
    #[error("tangential contact: normals parallel at the seed")]
    TangentialContact,
    #[error("corrector diverged at trace parameter {0}")]
    CorrectorDiverged(f64),
    #[error("open curve: step budget of {0} exhausted before closure")]
    OpenCurveBudgetExceeded(usize),
    #[error("no solution branch for the unit parameterization (modulus defect {0:e})")]
    NoBranch(f64),
    #[error("curve is not constant-angle (deviation {0:e})")]
    NotConstantAngle(f64),
    #[error("operation refused: {0}")]
    Refused(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
