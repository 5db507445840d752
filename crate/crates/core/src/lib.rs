//! Synthesis, lexicalization and evaluation tooling for first-order logic
//! to natural language translation.
//!
//! * [`fol`]: formula AST, parser, printer, quantifier depth.
//! * [`generator`]: random formulas from the standard and nested grammars.
//! * [`lexicalizer`]: vocabulary-driven predicate and entity substitution,
//!   operator symbol rewriting.
//! * [`corpus`]: parallel corpus ingestion, splitting and token statistics.
//! * [`metrics`]: edit distance, normalised score, BLEU.
//! * [`translator`]: rule-based English baseline.
//!
//! Real-valued statistics are generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`.

pub mod corpus;
pub mod fol;
pub mod generator;
pub mod lexicalizer;
pub mod metrics;
pub mod real;
pub mod translator;

pub use real::Real;

pub type BleuConfig = metrics::BleuConfig<f64>;
pub type BleuBreakdown = metrics::BleuBreakdown<f64>;
pub type PairScore = metrics::PairScore<f64>;
pub type MetricsReport = metrics::MetricsReport<f64>;
pub type TokenDistribution = corpus::TokenDistribution<f64>;
pub type StatsReport = corpus::StatsReport<f64>;
