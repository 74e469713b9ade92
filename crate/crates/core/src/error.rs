use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input text could not be parsed; `line` is 1-based.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("{0} is not a face of the complex")]
    NotAFace(String),

    /// Facet enumeration hit the facet-count or wall-clock limit.
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),

    /// A theorem was invoked on input outside its hypotheses.
    #[error("hypothesis of {theorem} violated: {detail}")]
    Hypothesis { theorem: &'static str, detail: String },

    /// A step the theorem guarantees did not hold. Either the input map is
    /// not what the caller claims or there is a bug.
    #[error("contradiction in {theorem}: {detail}")]
    Contradiction { theorem: &'static str, detail: String },

    #[error("not a simplicial isomorphism: {0}")]
    InvalidIso(String),

    #[error("precondition failed: {0}")]
    Precondition(String),
}
