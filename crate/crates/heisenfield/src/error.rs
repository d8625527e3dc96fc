//! Crate-wide error type.
//!
//! Every fallible operation in the library returns [`Result`]. Variants are
//! grouped roughly by the layer that raises them: field construction and
//! arithmetic, group/black-box plumbing, recovery searches, and the formula
//! engine. Diagnostics carry enough context to be actionable from the CLI
//! without a debugger.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A field constructor was handed a composite characteristic.
    #[error("{0} is not prime")]
    NotPrime(u64),

    /// The modulus handed to an extension-field constructor is unusable
    /// (wrong degree, not monic, coefficients out of range, ...).
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    /// The modulus polynomial factors over GF(p), so the quotient is not a
    /// field.
    #[error("modulus {0} is reducible over GF({1})")]
    ReducibleModulus(String, u64),

    /// Requested field size exceeds the configured bound.
    #[error("field of size {size} exceeds the configured bound {bound}")]
    FieldTooLarge { size: u64, bound: u64 },

    /// Division or inversion of zero.
    #[error("division by zero")]
    DivisionByZero,

    /// An element from one context (field or group) was handed to another.
    #[error("context mismatch: expected an element of {expected}, got {found}")]
    ContextMismatch { expected: String, found: String },

    /// An element id outside the structure's universe.
    #[error("element id {id} out of range for a structure of order {order}")]
    InvalidId { id: usize, order: usize },

    /// An enumeration index does not fit the id scheme (countable hosts).
    #[error("enumeration index overflow: {0}")]
    EnumerationOverflow(String),

    /// The operation needs a finite structure.
    #[error("operation requires a finite structure: {0}")]
    RequiresFinite(String),

    /// A materialization (table, JSON export, automorphism enumeration)
    /// was asked for a structure above its configured order bound.
    #[error("order {order} exceeds the configured bound {bound} for {what}")]
    OrderBound {
        order: usize,
        bound: usize,
        what: String,
    },

    /// Pair search ran out of elements: the host has no non-commuting pair.
    #[error("group is abelian: no non-commuting pair exists")]
    AbelianGroup,

    /// Recovery was attempted at a commuting pair of parameters.
    #[error("parameters commute: {0}")]
    CommutingPair(String),

    /// A recovered-field operation was applied to an element outside its
    /// domain (the ids commuting with both parameters).
    #[error("element id {id} does not commute with both parameters")]
    NotCentral { id: usize },

    /// A search on a countable host exceeded its budget.
    #[error("budget of {budget} exhausted while {what}")]
    BudgetExhausted { budget: usize, what: String },

    /// A finite witness search came up empty: the host does not satisfy the
    /// structural assumptions (it is not a Heisenberg group over a field).
    #[error("no witness found while {0}; host violates the structural assumptions")]
    NoWitness(String),

    /// A multiplication table failed group validation.
    #[error("not a group table: {0}")]
    NotAGroup(String),

    /// A well-definedness check failed: the host passed group validation but
    /// does not behave like a Heisenberg group over a field.
    #[error("host is not a Heisenberg group over a field: {0}")]
    NotHeisenberg(String),

    /// A named hypothesis of the parameter-removal engine failed.
    #[error("interpretation hypothesis `{check}` violated: {detail}")]
    Hypothesis { check: String, detail: String },

    /// Wrong number of arguments for a formula, relation, or datum slot.
    #[error("arity mismatch for {what}: expected {expected}, got {found}")]
    Arity {
        what: String,
        expected: usize,
        found: usize,
    },

    /// A formula mentions an unbound variable, unknown relation, or
    /// out-of-range constant.
    #[error("unknown symbol: {0}")]
    UnknownSymbol(String),

    /// Malformed textual input (field spec, polynomial, s-expression).
    #[error("parse error: {0}")]
    Parse(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Convenience constructor for context-mismatch diagnostics.
    pub(crate) fn ctx_mismatch(expected: impl Into<String>, found: impl std::fmt::Debug) -> Self {
        Error::ContextMismatch {
            expected: expected.into(),
            found: format!("{found:?}"),
        }
    }
}
