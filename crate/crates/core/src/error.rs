use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter {index} = {value} is outside [0, 1]")]
    ParamOutOfRange { index: usize, value: f64 },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("need at least 3 points, found {found}")]
    TooFewPoints { found: usize },
    #[error("face on line {line} has {arity} vertices; only triangles are accepted")]
    NonTriangularFace { line: usize, arity: usize },
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("moment order {order} exceeds the supported maximum of 16")]
    OrderTooLarge { order: u32 },
    #[error("mesh is not watertight ({open_edges} open, {non_manifold_edges} non-manifold edges)")]
    NotWatertight {
        open_edges: usize,
        non_manifold_edges: usize,
    },
    #[error("zeroth moment {m0} is too small to normalise by")]
    ZeroMeasure { m0: f64 },
    #[error("assumption violated: {0}")]
    AssumptionViolated(String),
    #[error("degenerate surface point at (u, v) = ({u}, {v})")]
    DegeneratePoint { u: f64, v: f64 },
    #[error("mesh has {open_edges} boundary edges")]
    HasBoundary { open_edges: usize },
    #[error("profile has zero perimeter")]
    ZeroPerimeter,
    #[error("section at {z} yields {loops} closed loops, expected 1")]
    MultiLoopSection { z: f64, loops: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("design {design_id} lacks component {component}")]
    MissingComponent {
        design_id: String,
        component: String,
    },
    #[error("all rows are identical")]
    DegenerateData,
    #[error("covariance eigenvalue {value} is significantly negative")]
    NegativeEigenvalue { value: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("output variance is zero")]
    ZeroVariance,
    #[error("cosine similarity undefined for an all-zero vector")]
    ZeroVector,
    #[error("kernel matrix not positive definite at jitter cap {jitter}")]
    IllConditioned { jitter: f64 },
    #[error("input contains NaN or infinite values")]
    NanInput,
    #[error("quality {value} at index {index} is negative")]
    NegativeQuality { index: usize, value: f64 },
    #[error("design {design_id}: {source}")]
    Design {
        design_id: String,
        source: Box<Error>,
    },
}

impl Error {
    /// Machine-readable code, stable across releases.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ParamOutOfRange { .. } => "PARAM_OUT_OF_RANGE",
            Error::Parse { .. } => "PARSE_ERROR",
            Error::TooFewPoints { .. } => "TOO_FEW_POINTS",
            Error::NonTriangularFace { .. } => "NON_TRIANGULAR_FACE",
            Error::InvalidGeometry(_) => "INVALID_GEOMETRY",
            Error::Io(_) => "IO_ERROR",
            Error::OrderTooLarge { .. } => "ORDER_TOO_LARGE",
            Error::NotWatertight { .. } => "NOT_WATERTIGHT",
            Error::ZeroMeasure { .. } => "ZERO_MEASURE",
            Error::AssumptionViolated(_) => "ASSUMPTION_VIOLATED",
            Error::DegeneratePoint { .. } => "DEGENERATE_POINT",
            Error::HasBoundary { .. } => "HAS_BOUNDARY",
            Error::ZeroPerimeter => "ZERO_PERIMETER",
            Error::MultiLoopSection { .. } => "MULTI_LOOP_SECTION",
            Error::InvalidArgument(_) => "INVALID_ARGUMENT",
            Error::MissingComponent { .. } => "MISSING_COMPONENT",
            Error::DegenerateData => "DEGENERATE_DATA",
            Error::NegativeEigenvalue { .. } => "NEGATIVE_EIGENVALUE",
            Error::DimensionMismatch { .. } => "DIMENSION_MISMATCH",
            Error::ZeroVariance => "ZERO_VARIANCE",
            Error::ZeroVector => "ZERO_VECTOR",
            Error::IllConditioned { .. } => "ILL_CONDITIONED",
            Error::NanInput => "NAN_INPUT",
            Error::NegativeQuality { .. } => "NEGATIVE_QUALITY",
            Error::Design { source, .. } => source.code(),
        }
    }

    pub fn with_design(self, design_id: impl Into<String>) -> Error {
        match self {
            e @ Error::Design { .. } => e,
            e => Error::Design {
                design_id: design_id.into(),
                source: Box::new(e),
            },
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
