use thiserror::Error;

/// Errors surfaced by the library. Input validation problems map to CLI exit
/// code 2, failed verification checks to exit code 1.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent user input (unknown vertex, bad lambda, ...).
    #[error("input error: {0}")]
    Input(String),

    /// A connected component of the requested interior has empty relative
    /// boundary, so the Dirichlet problem has no data to attach to.
    #[error("no boundary: component containing '{vertex}' has empty relative boundary")]
    NoBoundary { vertex: String },

    /// Iterative construction hit its iteration cap before reaching the
    /// requested tolerance.
    #[error("did not converge after {iterations} iterations (last delta {delta:e})")]
    NonConvergence { iterations: usize, delta: f64 },

    /// Two algebraically equal routes disagreed beyond tolerance; this flags
    /// an internal defect, not bad input.
    #[error("internal consistency failure: {0}")]
    Inconsistency(String),

    /// Lattice geometry problems (non-star-like polygon, resolution too
    /// coarse, corkscrew search failure).
    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn geometry(msg: impl Into<String>) -> Self {
        Error::Geometry(msg.into())
    }
}
