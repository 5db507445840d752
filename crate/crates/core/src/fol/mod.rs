//! First-order formulas: syntax tree, concrete syntax and depth measures.
//!
//! The concrete syntax follows the usual textbook surface form, e.g.
//! `∀a(A(a) → ∀b(¬B(b,c) ∨ ¬C(b)))`. From loosest to tightest binding:
//! `→`, `⊕` (neither chains without parentheses), `∨`, `∧` (both
//! left-associative), then `¬`, quantifiers and atoms. A quantifier is
//! always followed by its variable and a parenthesized body. The ASCII
//! spellings `forall`, `exists`, `~`, `&`, `|`, `xor` and `->` are accepted
//! as aliases.

mod ast;
mod depth;
mod parser;
mod printer;

pub use ast::{Argument, Connective, Formula, Quantifier, Term};
pub use depth::{quantifier_depth, structural_depth};
pub use parser::{parse, parse_with_vocabulary, ParseError, Syntax, TokenKind};
pub use printer::{render, Style};
