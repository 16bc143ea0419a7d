use thiserror::Error;

use crate::catalog::BuyerId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An item id that does not exist in the ground set.
    #[error("unknown item `{0}`")]
    UnknownItem(String),

    /// An item that exists but was deleted or contracted in the current view.
    #[error("item `{0}` is not in the active ground set")]
    InactiveItem(String),

    #[error("invalid input: {0}")]
    Input(String),

    /// Brute-force enumeration refused because the ground set is too large.
    #[error("{what} has {size} items, above the enumeration limit of {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    /// A bidder answered the auctioneer with a signal the protocol forbids.
    #[error("protocol violation by buyer {buyer}: {message}")]
    Protocol { buyer: BuyerId, message: String },

    #[error("precondition failed for buyer {buyer}: {message}")]
    Precondition { buyer: BuyerId, message: String },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    /// Structured document did not match its schema; `path` locates the field.
    #[error("{path}: {message}")]
    Schema { path: String, message: String },

    #[error("trace line {line}: {message}")]
    TraceParse { line: usize, message: String },
}

impl Error {
    pub(crate) fn input(message: impl Into<String>) -> Self {
        Error::Input(message.into())
    }

    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}
