use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("confluent interpolation system is ill-conditioned (condition estimate {condition:.3e})")]
    IllConditioned { condition: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("polynomial vanishes identically")]
    ZeroPolynomial,

    #[error("derivative of order {requested} unavailable (maximum {available})")]
    DerivativeUnavailable { requested: usize, available: usize },

    #[error("contact function takes both signs (excursion {excursion:.3e} relative to scale)")]
    NotOneSided { excursion: f64 },

    #[error("denominator vanishes at unlisted point t = {location:.6}")]
    DenominatorVanishesElsewhere { location: f64 },

    #[error("function lies in the Chebyshev space (operator scale {operator_scale:.3e})")]
    FunctionInSpace { operator_scale: f64 },

    #[error("extremal member fails to support the function (deficit {deficit:.3e} relative to scale)")]
    NotSupporting { deficit: f64 },

    #[error("census has no clean maximal or no clean minimal flexes")]
    EmptyCensus,

    #[error("contact set has arcs of positive length; the count is infinite")]
    InfiniteCount,

    #[error("curve is not strictly convex: h + h'' = {radius:.3e} at t = {at:.6}")]
    NotConvex { at: f64, radius: f64 },

    #[error("support function describes a circle; every point is a vertex")]
    CircleDegenerate,

    #[error("osculating conic is not unique (singular value ratio {ratio:.3e})")]
    RankDeficient { ratio: f64 },

    #[error("curve is a conic (fit residual {residual:.3e})")]
    ConicDegenerate { residual: f64 },

    #[error("tangency points coincide")]
    CoincidentPoints,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
