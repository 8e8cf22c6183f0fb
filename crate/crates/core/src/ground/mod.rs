//! Grounding: instantiation of non-constraint variables, expansion of
//! intensional lists and translation into a CA program.

mod convert;
mod instantiate;
mod lists;

pub use convert::to_ca_program;
pub use instantiate::{domain_predicates, ground};
pub use lists::{collect_decls, definite_facts, expand_lists};

use crate::ca::CaProgram;
use crate::fd::FdError;
use crate::lang::{parse, preprocess, EzProgram, ParseError, Pos, PreprocessError};

/// Range given to constraint variables declared without bounds.
pub const DEFAULT_RANGE: (i64, i64) = (0, 1 << 20);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroundConfig {
    pub default_range: (i64, i64),
}

impl Default for GroundConfig {
    fn default() -> Self {
        GroundConfig {
            default_range: DEFAULT_RANGE,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Warning {
    EmptyList { pos: Pos, list: String },
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::EmptyList { pos, list } => write!(f, "{pos}: list {list} expands to []"),
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GroundError {
    #[error("{pos}: unsafe variable {var}")]
    Unsafe { pos: Pos, var: String },
    #[error("{pos}: {msg}")]
    Arithmetic { pos: Pos, msg: String },
    #[error("{pos}: condition `{atom}` is not a domain predicate")]
    NonDomainCondition { pos: Pos, atom: String },
    #[error("{pos}: required may only occur in rule heads")]
    RequiredInBody { pos: Pos },
    #[error("{pos}: {msg}")]
    Declaration { pos: Pos, msg: String },
    #[error("{pos}: list {list} names no declared variable or relation")]
    UndeclaredList { pos: Pos, list: String },
    #[error("{pos}: {msg}")]
    TooLarge { pos: Pos, msg: String },
    #[error("{pos}: negative weight {weight} in #sum")]
    NegativeWeight { pos: Pos, weight: i64 },
    #[error("unsupported domain `{0}` (only fd is available)")]
    UnsupportedDomain(String),
    #[error("constraint variables or required atoms used without cspdomain(fd)")]
    MissingDomain,
    #[error("conflicting domains `{0}` and `{1}`")]
    DuplicateDomain(String, String),
    #[error("constraint atom {atom}: {source}")]
    Constraint { atom: String, source: FdError },
    #[error("{0}")]
    Ca(String),
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LoadError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Preprocess(#[from] PreprocessError),
    #[error(transparent)]
    Ground(#[from] GroundError),
}

/// Result of compiling EZ source.
#[derive(Clone, Debug)]
pub struct Loaded {
    /// Ground program with lists expanded.
    pub ground: EzProgram,
    pub ca: CaProgram,
    pub warnings: Vec<Warning>,
}

/// Parse, pre-process, ground, expand lists and translate EZ source.
pub fn load(src: &str, cfg: &GroundConfig) -> Result<Loaded, LoadError> {
    let p = preprocess(&parse(src)?)?;
    let g = ground(&p)?;
    let decls = collect_decls(&g, cfg)?;
    let (g, warnings) = expand_lists(&g, &decls)?;
    let ca = to_ca_program(&g, &decls)?;
    Ok(Loaded {
        ground: g,
        ca,
        warnings,
    })
}
