//! Error types shared across the crate.
//!
//! Each layer has its own enum so callers can match on exactly the failures
//! that layer can produce; the engine wraps the lower layers with `#[from]`.

use thiserror::Error;

/// Failures in scalar and point-level geometry.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("a point needs at least two coordinates, got {0}")]
    TooFewCoordinates(usize),

    #[error("coordinates mix exact and float values")]
    MixedModes,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("a simplex needs between 2 and n+1 vertices, got {0}")]
    BadVertexCount(usize),

    #[error("vertices are affinely dependent")]
    DegenerateSimplex,

    #[error("operation needs a full-dimensional simplex, got m = {m} in dimension {n}")]
    NotFullDimensional { m: usize, n: usize },

    #[error("edge lengths must be positive")]
    NonPositiveLength,

    #[error("edge-length function has {got} entries, expected {expected}")]
    BadEdgeCount { expected: usize, got: usize },

    #[error("edge lengths are not realizable by a nondegenerate simplex")]
    InfeasibleLengths,

    #[error("square root of a negative value")]
    NegativeSqrt,

    #[error("cannot parse {0:?} as a scalar")]
    ParseScalar(String),

    #[error("linear system is singular")]
    SingularSystem,
}

/// Failures in sphere-level constructions.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SphereError {
    #[error("sphere radius must be positive")]
    ZeroRadius,

    #[error("spheres are concentric; intersection is not a sphere")]
    ConcentricSpheres,

    #[error("{what} = {value} is outside the valid range {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("cap radius must lie in (0, 2r]")]
    BadCap,

    #[error("length set has no member small enough to continue the chain (room bound {0})")]
    NoSmallLength(f64),

    #[error("target volume {target} exceeds the attainable maximum {max} on this cap")]
    TargetTooLarge { target: f64, max: f64 },

    #[error("target volume must be positive, got {0}")]
    NonPositiveTarget(f64),

    #[error("construction needs ambient dimension >= {needed}, got {got}")]
    DimensionTooSmall { needed: usize, got: usize },

    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Failures when evaluating colorings.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ColoringError {
    #[error("coloring is only defined on exact rational points")]
    UnsupportedPoint,

    #[error("coloring expects dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("the three points are collinear; no circle through them")]
    CollinearPoints,

    #[error("cell index overflows the color range")]
    ColorOverflow,

    #[error("merged strip needs at least 2 colors, got {0}")]
    TooFewColors(u32),

    #[error("grid cell size must be positive")]
    NonPositiveCell,

    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Failures when evaluating or instantiating forcing properties.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PropertyError {
    #[error("property parameters are invalid: {0}")]
    BadParameters(String),

    #[error("exhaustive check over {points} points exceeds the budget {budget}")]
    TooManyPoints { points: usize, budget: usize },

    #[error(transparent)]
    Geometry(#[from] GeometryError),

    #[error(transparent)]
    Sphere(#[from] SphereError),
}

/// Failures at the engine level.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("sphere is not admissible for this condition")]
    NotAdmissible,

    #[error("length-set prefix too large: {sets}^{edges} assignments exceed the enumeration cap")]
    PrefixTooLarge { sets: usize, edges: usize },

    #[error("condition is invalid: {0}")]
    BadCondition(String),

    #[error("finite configuration is invalid: {0}")]
    BadConfig(String),

    #[error("certificate replay failed: {0}")]
    BadCertificate(String),

    #[error(transparent)]
    Coloring(#[from] ColoringError),

    #[error(transparent)]
    Property(#[from] PropertyError),

    #[error(transparent)]
    Geometry(#[from] GeometryError),

    #[error(transparent)]
    Sphere(#[from] SphereError),
}
