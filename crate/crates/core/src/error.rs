use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("class index {class} is outside 1..={scales}")]
    OutOfRangeClass { class: usize, scales: usize },

    #[error("feature size {size} B exceeds the total of all scales ({total} B)")]
    FeatureTooLarge { size: f64, total: f64 },

    #[error("degenerate regression samples: {0}")]
    DegenerateSamples(String),

    #[error("length mismatch: expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("mobile {mobile} has a zero {resource}")]
    ZeroResource { mobile: usize, resource: &'static str },

    #[error("mobile {0} has a zero full-band rate")]
    ZeroRate(usize),

    /// The time left for local inference cannot absorb the local loads even
    /// with every mobile running at its cap.
    #[error("latency budget infeasible: local compute needs {required:.6e} s but only {available:.6e} s remain")]
    LatencyInfeasible { required: f64, available: f64 },

    #[error("could not bracket the latency multiplier within {doublings} doublings")]
    NoBracket { doublings: usize },

    #[error("mean energy {mean_energy:.6e} J at the minimum feature size exceeds the budget {budget:.6e} J")]
    EnergyInfeasible { mean_energy: f64, budget: f64 },

    #[error("initial point infeasible: {0}")]
    InitialInfeasible(String),

    #[error("{mobiles} mobiles exceeds the grid oracle limit of {limit}")]
    TooLarge { mobiles: usize, limit: usize },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("parse error{}: {message}", location(.line, .field))]
    Parse {
        line: Option<usize>,
        field: Option<String>,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("{method}: {source}")]
    Method { method: &'static str, source: Box<Error> },
}

fn location(line: &Option<usize>, field: &Option<String>) -> String {
    match (line, field) {
        (Some(l), Some(f)) => format!(" at line {l}, field `{f}`"),
        (Some(l), None) => format!(" at line {l}"),
        (None, Some(f)) => format!(" in field `{f}`"),
        (None, None) => String::new(),
    }
}

impl Error {
    /// Stable variant name, used for machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::OutOfRangeClass { .. } => "OutOfRangeClass",
            Error::FeatureTooLarge { .. } => "FeatureTooLarge",
            Error::DegenerateSamples(_) => "DegenerateSamples",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::ZeroResource { .. } => "ZeroResource",
            Error::ZeroRate(_) => "ZeroRate",
            Error::LatencyInfeasible { .. } => "LatencyInfeasible",
            Error::NoBracket { .. } => "NoBracket",
            Error::EnergyInfeasible { .. } => "EnergyInfeasible",
            Error::InitialInfeasible(_) => "InitialInfeasible",
            Error::TooLarge { .. } => "TooLarge",
            Error::Validation(_) => "ValidationError",
            Error::Parse { .. } => "ParseError",
            Error::Io(_) => "IoError",
            Error::Method { source, .. } => source.kind(),
        }
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<toml::de::Error> for Error {
    fn from(e: toml::de::Error) -> Self {
        // toml spans are byte offsets; callers that have the source text
        // convert them to line numbers via `parse_error_with_source`.
        Error::Parse {
            line: None,
            field: None,
            message: e.message().to_string(),
        }
    }
}

/// Converts a TOML error into a `Parse` error carrying the 1-based line.
pub(crate) fn parse_error_with_source(e: toml::de::Error, source: &str) -> Error {
    let line = e
        .span()
        .map(|span| source[..span.start.min(source.len())].matches('\n').count() + 1);
    let field = e
        .message()
        .split('`')
        .nth(1)
        .map(str::to_string);
    Error::Parse {
        line,
        field,
        message: e.message().to_string(),
    }
}
