use thiserror::Error;

/// Everything that can go wrong in the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("ambiguous configuration: {0}")]
    AmbiguousConfiguration(String),

    #[error("configuration rejected: {0}")]
    ConfigurationRejected(String),

    #[error("word is not reduced: forbidden pair at index {index}")]
    NonReduced { index: usize },

    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("needs more prefix: reached diameter {diameter:e} after {depth} symbols")]
    NeedsMorePrefix { depth: usize, diameter: f64 },

    #[error("not a limit point at depth {depth}: point lies in no generator arc")]
    NotALimitPoint { depth: usize },

    #[error("ambiguous boundary case at depth {depth}: margin {margin:e} is below the error bound {bound:e}")]
    Ambiguous { depth: usize, margin: f64, bound: f64 },

    #[error("ambiguous crossing at step {step}: {reason}")]
    AmbiguousCrossing { step: usize, reason: String },

    #[error("depth guard exceeded: depth {depth} would draw {elements} elements (max depth 8)")]
    DepthGuard { depth: usize, elements: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
