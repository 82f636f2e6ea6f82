use thiserror::Error;

/// Errors raised across the balancer, rate model, simulator and scenario layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unknown {class} node {id} (class has {count} nodes)")]
    UnknownNode {
        class: &'static str,
        id: usize,
        count: usize,
    },

    #[error("decision out of range: alpha={alpha}, beta={beta}")]
    DecisionOutOfRange { alpha: f64, beta: f64 },

    #[error("utility undefined: {0}")]
    UndefinedUtility(String),

    #[error("WiFi offered load must be in (0, 1], got {0}")]
    ZeroWifiLoad(f64),

    #[error("no KKT candidate is primal and dual feasible")]
    NoFeasibleCandidate,

    #[error("feasible KKT candidates disagree: {0}")]
    InconsistentCandidates(String),

    #[error("fixed-point iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("empty feasible set: {0}")]
    EmptyFeasibleSet(String),

    #[error("not enough data: {0}")]
    InsufficientData(String),

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
