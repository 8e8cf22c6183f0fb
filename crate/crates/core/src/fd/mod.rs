//! Finite-domain constraint solving: interval domains, constraint
//! expressions, propagation and labeling search.

mod bounds;
mod compile;
mod domain;
mod expr;
mod global;
mod search;

pub use compile::compile;
pub use domain::Domain;
pub use expr::{complement, CmpOp, Connective, ConstraintExpr, Global, IntExpr};
pub use search::{Csp, SearchLimits, Solutions};

/// Propagation found an empty domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fail;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FdError {
    #[error("complement is only defined for primitive constraints, got `{0}`")]
    ComplementUnsupported(String),
    #[error("`{0}` is not a declared constraint variable")]
    UndeclaredVariable(String),
    #[error("`{0}` is not a constraint")]
    NotAConstraint(String),
    #[error("global constraint `{0}` cannot appear inside a connective")]
    NestedGlobal(String),
    #[error("{name}: {msg}")]
    BadGlobal { name: String, msg: String },
    #[error("variable index {0} is out of range")]
    UnknownVariable(usize),
    #[error("search exceeded {0} nodes")]
    NodeLimit(u64),
}
