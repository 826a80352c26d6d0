//! Error type shared by every module of the crate.

use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised by constructors and operations of this crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// The relation table of a pre-order is malformed.
    #[error("invalid preorder: {0}")]
    InvalidPreorder(String),
    /// A function table does not cover its whole domain or leaves its codomain.
    #[error("mapping is not total: {0}")]
    NotTotal(String),
    /// A map between pre-orders breaks the order on the listed pairs.
    #[error("map is not order-preserving on {} pair(s)", violations.len())]
    NotMonotone {
        /// Pairs `(x, y)` with `x <= y` whose images are not ordered.
        violations: Vec<(String, String)>,
    },
    /// A label does not name an element of the ambient pre-order or alphabet.
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    /// A segment violates its topology or color invariants.
    #[error("invalid segment: {0}")]
    InvalidSegment(String),
    /// A morphism of segments violates one of its invariants.
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    /// Two values live over different pre-orders.
    #[error("preorder mismatch: {0}")]
    PreorderMismatch(String),
    /// Composition or application with incompatible endpoints.
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    /// A word does not match its truncation set or alphabet.
    #[error("invalid word: {0}")]
    InvalidWord(String),
    /// Sequence or configuration input rejected by an algorithm.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A cone does not commute with its diagram.
    #[error("cone condition violated: {0}")]
    ConeCondition(String),
    /// A functor table is not natural or not functorial.
    #[error("naturality failure: {0}")]
    Naturality(String),
    /// A computation would exceed its configured size cap.
    #[error("resource cap exceeded: {what} needs {needed}, cap is {cap}")]
    ResourceCap {
        /// Name of the exceeded quantity.
        what: String,
        /// Size that would have been produced.
        needed: u128,
        /// Configured maximum.
        cap: u128,
    },
    /// Textual notation that could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
