use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("limb `{limb}`: jacobian is singular (smallest singular value {sigma_min:e})")]
    Singular { limb: String, sigma_min: f64 },

    #[error("limb `{limb}`: {joints} joints exceeds the enumeration cap of {cap}")]
    TooManyJoints { limb: String, joints: usize, cap: usize },

    #[error("limb `{limb}`: {source}")]
    Limb {
        limb: String,
        #[source]
        source: Box<Error>,
    },

    #[error("query point lies outside the polytope: facet {facet} violated by {violation:e}")]
    OutsidePolytope { facet: usize, violation: f64 },

    #[error("{path}: {message}")]
    Field { path: String, message: String },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn field(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Field {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn in_limb(self, limb: &str) -> Self {
        match self {
            // already names the limb
            e @ (Error::Singular { .. } | Error::TooManyJoints { .. } | Error::Limb { .. }) => e,
            other => Error::Limb {
                limb: limb.to_string(),
                source: Box::new(other),
            },
        }
    }
}
