//! EZ language: terms, rules, parser, pretty printer and the operator
//! rewriting applied before grounding.

pub mod ast;
mod lexer;
mod parser;
mod preprocess;
mod pretty;
pub mod term;

pub use ast::*;
pub use parser::parse;
pub use preprocess::{preprocess, required_args_are_canonical, PreprocessError};
pub use pretty::{pretty_print, rule_to_string};
pub use term::{BinOp, Term, UnOp, GLOBAL_CONSTRAINTS};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("{line}:{col}: `{name}` takes {expected} argument(s), found {found}")]
    ReservedArity {
        line: usize,
        col: usize,
        name: String,
        expected: &'static str,
        found: usize,
    },
}
