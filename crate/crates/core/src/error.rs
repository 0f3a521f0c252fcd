use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("parameter {0} is outside [0, 1]")]
    ParameterOutOfRange(f64),
    #[error("invalid parameter window [{lo}, {hi}]")]
    InvalidWindow { lo: f64, hi: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("zero-length vector")]
    ZeroVector,
    #[error("tangent vanishes at t = {t}")]
    DegenerateTangent { t: f64 },
    #[error("t = {t} is a breakpoint; curvature is only defined at C2 parameters")]
    AtBreakpoint { t: f64 },
    #[error("consecutive vertices {index} and {next} coincide")]
    DuplicateVertex { index: usize, next: usize },
    #[error("polyline needs at least {needed} vertices, got {got}")]
    TooFewVertices { needed: usize, got: usize },
    #[error("polyline parameters must be strictly increasing in [0, 1]: {0}")]
    BadParams(String),
    #[error("quadrature did not converge: estimate {estimate}, error estimate {error}")]
    QuadratureNotConverged { estimate: f64, error: f64 },
    #[error("empty point set")]
    EmptySet,
    #[error("curve is not simple: two distant parameters come within {distance}")]
    NotSimple { distance: f64 },
    #[error("tube radius is defined for smooth curves, not for polylines")]
    PiecewiseLinear,
    #[error("curvature vanishes at t = {t}; principal normal undefined")]
    VanishingCurvature { t: f64 },
    #[error("offset precondition violated at t = {t}: curvature {kappa} too close to {forbidden}")]
    OffsetCurvature { t: f64, kappa: f64, forbidden: f64 },
    #[error("vertex {index} and its neighbours are collinear")]
    CollinearTriple { index: usize },
    #[error("vertex {index} is not an interior vertex")]
    NotInterior { index: usize },
    #[error("no certificate after {rounds} refinement rounds (Hausdorff bound {hausdorff}, r = {r})")]
    MaxRoundsExceeded { rounds: usize, hausdorff: f64, r: f64 },
    #[error("hull containment still fails for window [{lo}, {hi}] after {splits} splits")]
    ContainmentUnachievable { lo: f64, hi: f64, splits: usize },
    #[error("vertex {index} is {deviation} away from the curve at its parameter")]
    NotInscribed { index: usize, deviation: f64 },
    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),
    #[error("sub-polyline total curvature {total} is not below {limit}")]
    BudgetExceeded { total: f64, limit: f64 },
    #[error("internal invariant breached: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
