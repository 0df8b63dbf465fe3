use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not unitary: residual {residual:.3e} exceeds tolerance {tolerance:.1e}")]
    NotUnitary { residual: f64, tolerance: f64 },

    #[error("permanent of a {n}x{n} matrix exceeds the {algorithm} cap of {cap}")]
    TooLarge {
        n: usize,
        cap: usize,
        algorithm: &'static str,
    },

    #[error("photon number mismatch: input carries {input}, output carries {output}")]
    PhotonNumberMismatch { input: usize, output: usize },

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("visibility undefined: classical coincidence probability {p_classical:.3e}")]
    UndefinedVisibility { p_classical: f64 },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("no convergence after {iterations} iterations (last change {last_change:.3e})")]
    NoConvergence { iterations: usize, last_change: f64 },

    #[error("ill-conditioned reference (input {input}, output {output}): probability {value:.3e}")]
    IllConditionedReference {
        input: usize,
        output: usize,
        value: f64,
    },

    #[error("inconsistent measurement data: {0}")]
    InconsistentData(String),

    #[error("malformed mesh topology: {0}")]
    MalformedTopology(String),

    #[error("phase {target:.6} rad unreachable: maximum achievable phase is {max:.6} rad")]
    UnreachablePhase { target: f64, max: f64 },

    #[error(
        "transmissivity {target:.6} unattainable: attainable interval is [{min:.6}, {max:.6}]"
    )]
    UnattainableTransmissivity { target: f64, min: f64, max: f64 },

    #[error("deformation d = {d} mm is not injective (|d| must stay below {limit} mm)")]
    NonInjectiveDeformation { d: f64, limit: f64 },

    #[error("fabrication infeasible for {} element(s): {}", .0.len(), .0.join("; "))]
    Infeasible(Vec<String>),

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short stable identifier, used as a machine-readable prefix by front
    /// ends.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidDimension(_) => "invalid-dimension",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::NonFinite { .. } => "non-finite",
            Error::NotUnitary { .. } => "not-unitary",
            Error::TooLarge { .. } => "too-large",
            Error::PhotonNumberMismatch { .. } => "photon-number-mismatch",
            Error::InvalidDistribution(_) => "invalid-distribution",
            Error::UndefinedVisibility { .. } => "undefined-visibility",
            Error::Unsupported(_) => "unsupported",
            Error::OutOfRange(_) => "out-of-range",
            Error::NoConvergence { .. } => "no-convergence",
            Error::IllConditionedReference { .. } => "ill-conditioned-reference",
            Error::InconsistentData(_) => "inconsistent-data",
            Error::MalformedTopology(_) => "malformed-topology",
            Error::UnreachablePhase { .. } => "unreachable-phase",
            Error::UnattainableTransmissivity { .. } => "unattainable-transmissivity",
            Error::NonInjectiveDeformation { .. } => "non-injective-deformation",
            Error::Infeasible(_) => "infeasible",
            Error::Parse { .. } | Error::Json(_) | Error::Csv(_) => "parse",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
