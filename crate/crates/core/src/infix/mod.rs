//! Matlab-style infix text to and from OpenMath trees.
//!
//! Grammar, loosest to tightest: `=` (statement level only), `+ -` (left),
//! `* /` (left), prefix `-`, `^` (right). Calls are `name(args…)` for
//! registered function spellings and `cd.name(args…)` for any symbol.
//! A `-` written directly against a number in operand position is part of
//! the literal, so `-2` is the integer −2 while `-(2)` negates 2.

mod lexer;
mod parser;
mod printer;

use thiserror::Error;

use crate::openmath::{OmExpr, SymbolRegistry};

pub use parser::InfixParser;
pub use printer::print_infix_with;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InfixError {
    #[error("illegal character {found:?} at offset {position}")]
    Lex { position: usize, found: char },
    #[error("parse error at offset {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("unknown function {0}")]
    UnknownFunction(String),
}

/// Parses with the standard registry in strict mode.
pub fn parse_infix(text: &str) -> Result<OmExpr, InfixError> {
    InfixParser::new(&SymbolRegistry::standard()).parse(text)
}

pub fn print_infix(expr: &OmExpr) -> String {
    print_infix_with(expr, &SymbolRegistry::standard())
}
