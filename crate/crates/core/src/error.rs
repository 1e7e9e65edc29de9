use thiserror::Error;

/// Errors raised by poset construction, pattern systems and the verification routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("unknown element id {0}")]
    UnknownElement(usize),

    #[error("{what} has size {size}, above the limit of {limit} (raise it with PATPOS_MAX_INTERIOR)")]
    SizeGuard {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("crosscut inapplicable: atom subset {atoms:?} has {minimal_upper_bounds} minimal upper bounds")]
    CrosscutInapplicable {
        atoms: Vec<usize>,
        minimal_upper_bounds: usize,
    },

    #[error("atom ordering is missing or malformed for rooted interval {0}")]
    MissingOrdering(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
