use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two sets (or a set and a class) were built over different universes.
    UniverseMismatch { expected: usize, found: usize },
    ItemOutOfRange { item: usize, universe: usize },
    /// An exhaustive routine was asked to work beyond its hard limit.
    Capacity {
        what: &'static str,
        limit: usize,
        requested: usize,
    },
    /// An estimator was queried before it saw any data.
    NoData(&'static str),
    Config(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UniverseMismatch { expected, found } => {
                write!(f, "universe mismatch: expected {expected} items, found {found}")
            }
            Error::ItemOutOfRange { item, universe } => {
                write!(f, "item {item} outside universe of size {universe}")
            }
            Error::Capacity {
                what,
                limit,
                requested,
            } => write!(f, "{what}: requested {requested} exceeds limit {limit}"),
            Error::NoData(what) => write!(f, "no data: {what}"),
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn config<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}
