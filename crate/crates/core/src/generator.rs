//! Random abstract formulas from two context-free grammars.
//!
//! Standard grammar:
//!
//! ```text
//! F    → Atom | ¬F | (F op F) | Qx(F)
//! Atom → P(t) | P(t, t)
//! ```
//!
//! The nested grammar adds `Atom → P(F) | P(F, t)`. Each draw first picks a
//! target height uniformly from `[min_depth, max_depth]`. Expansion then runs
//! top-down and left to right; at each step a production is picked uniformly
//! among those that can still land the tree exactly on the target.
//!
//! Predicates are named `A, B, …, Z, A1, …` in order of introduction.
//! Variables and free constants share the sequence `a, b, …, z, a1, …`.

use std::collections::HashSet;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fol::{
    quantifier_depth, render, structural_depth, Argument, Connective, Formula, Quantifier, Style,
    Term,
};

/// Chance that an atom reuses an already introduced predicate symbol.
const PREDICATE_REUSE: f64 = 0.2;
/// Chance that a term slot takes an in-scope bound variable when one exists.
const BOUND_TERM: f64 = 0.75;
/// Chance that a constant slot reuses an existing free constant.
const CONSTANT_REUSE: f64 = 0.5;
/// Attempts per formula before a single-sample call gives up on QD bounds.
const SAMPLE_ATTEMPTS: usize = 100_000;
/// Consecutive rejections allowed per requested formula in a corpus run.
const REJECTIONS_PER_ITEM: usize = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grammar {
    Standard,
    Nested,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GrammarChoice {
    Standard,
    Nested,
    /// Alternate standard/nested per accepted formula.
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("invalid generation config: {0}")]
    InvalidConfig(String),
    #[error("no formula satisfies the depth bounds: {0}")]
    DepthUnreachable(String),
    #[error("gave up after {0} consecutive rejected draws; the configuration is over-constrained")]
    ExhaustedSampling(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationConfig {
    pub grammar: GrammarChoice,
    pub min_depth: usize,
    pub max_depth: usize,
    pub count: usize,
    pub seed: u64,
    /// Optional quantifier-depth bounds, enforced by rejection.
    pub min_qd: Option<usize>,
    pub max_qd: Option<usize>,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        Self {
            grammar: GrammarChoice::Both,
            min_depth: 4,
            max_depth: 10,
            count: 1,
            seed: 0,
            min_qd: None,
            max_qd: None,
        }
    }
}

impl GenerationConfig {
    pub fn validate(&self) -> Result<(), GenerateError> {
        let invalid = |m: String| Err(GenerateError::InvalidConfig(m));
        if self.min_depth == 0 {
            return invalid("min_depth must be at least 1".into());
        }
        if self.min_depth > self.max_depth {
            return invalid(format!(
                "min_depth {} exceeds max_depth {}",
                self.min_depth, self.max_depth
            ));
        }
        if self.count == 0 {
            return invalid("count must be at least 1".into());
        }
        if let (Some(lo), Some(hi)) = (self.min_qd, self.max_qd) {
            if lo > hi {
                return invalid(format!("min_qd {lo} exceeds max_qd {hi}"));
            }
        }
        // a formula with quantifier depth q is at least q + 1 levels high
        if let Some(lo) = self.min_qd {
            if lo + 1 > self.max_depth {
                return Err(GenerateError::DepthUnreachable(format!(
                    "quantifier depth {lo} needs a height of at least {}, max_depth is {}",
                    lo + 1,
                    self.max_depth
                )));
            }
        }
        Ok(())
    }

    fn accepts(&self, f: &Formula) -> bool {
        let depth = structural_depth(f);
        let qd = quantifier_depth(f);
        (self.min_depth..=self.max_depth).contains(&depth)
            && self.min_qd.is_none_or(|lo| qd >= lo)
            && self.max_qd.is_none_or(|hi| qd <= hi)
    }
}

/// `a, b, …, z, a1, …, z1, a2, …`
fn sequence_name(index: usize, upper: bool) -> String {
    let base = if upper { b'A' } else { b'a' };
    let letter = (base + (index % 26) as u8) as char;
    match index / 26 {
        0 => letter.to_string(),
        n => format!("{letter}{n}"),
    }
}

#[derive(Clone, Copy)]
enum Production {
    Atom,
    NestedAtom,
    Not,
    Binary,
    Quantified,
}

struct Builder<'r, R: ?Sized> {
    rng: &'r mut R,
    nested: bool,
    predicates: Vec<(String, usize)>,
    next_name: usize,
    scope: Vec<String>,
    constants: Vec<String>,
}

impl<R: Rng + ?Sized> Builder<'_, R> {
    fn fresh_name(&mut self) -> String {
        let name = sequence_name(self.next_name, false);
        self.next_name += 1;
        name
    }

    fn predicate(&mut self, allowed_arities: &[usize]) -> (String, usize) {
        let reusable: Vec<(String, usize)> = self
            .predicates
            .iter()
            .filter(|(_, a)| allowed_arities.contains(a))
            .cloned()
            .collect();
        if !reusable.is_empty() && self.rng.random_bool(PREDICATE_REUSE) {
            return reusable.choose(self.rng).cloned().expect("nonempty");
        }
        let arity = *allowed_arities.choose(self.rng).expect("nonempty");
        let name = sequence_name(self.predicates.len(), true);
        self.predicates.push((name.clone(), arity));
        (name, arity)
    }

    fn term(&mut self) -> Argument {
        if !self.scope.is_empty() && self.rng.random_bool(BOUND_TERM) {
            let v = self.scope.choose(self.rng).cloned().expect("nonempty");
            return Argument::Term(Term::Variable(v));
        }
        if !self.constants.is_empty() && self.rng.random_bool(CONSTANT_REUSE) {
            let c = self.constants.choose(self.rng).cloned().expect("nonempty");
            return Argument::Term(Term::Constant(c));
        }
        let c = self.fresh_name();
        self.constants.push(c.clone());
        Argument::Term(Term::Constant(c))
    }

    /// Builds a subtree whose height lies in `[need, budget]`.
    fn formula(&mut self, need: usize, budget: usize) -> Formula {
        let mut options = Vec::with_capacity(5);
        if need <= 1 {
            options.push(Production::Atom);
        }
        if budget >= 2 {
            options.extend([Production::Not, Production::Binary, Production::Quantified]);
            if self.nested {
                options.push(Production::NestedAtom);
            }
        }
        let child_need = need.saturating_sub(1).max(1);
        match *options.choose(self.rng).expect("budget >= need >= 1") {
            Production::Atom => {
                let (name, arity) = self.predicate(&[1, 2]);
                let args = (0..arity).map(|_| self.term()).collect();
                Formula::atom(name, args)
            }
            Production::NestedAtom => {
                let (name, arity) = self.predicate(&[1, 2]);
                let inner = self.formula(child_need, budget - 1);
                let mut args = vec![Argument::Formula(inner)];
                if arity == 2 {
                    args.push(self.term());
                }
                Formula::atom(name, args)
            }
            Production::Not => Formula::not(self.formula(child_need, budget - 1)),
            Production::Binary => {
                let op = *Connective::ALL.choose(self.rng).expect("nonempty");
                let (left_need, right_need) = if self.rng.random_bool(0.5) {
                    (child_need, 1)
                } else {
                    (1, child_need)
                };
                let left = self.formula(left_need, budget - 1);
                let right = self.formula(right_need, budget - 1);
                Formula::binary(op, left, right)
            }
            Production::Quantified => {
                let q = if self.rng.random_bool(0.5) {
                    Quantifier::ForAll
                } else {
                    Quantifier::Exists
                };
                let var = self.fresh_name();
                self.scope.push(var.clone());
                let body = self.formula(child_need, budget - 1);
                self.scope.pop();
                Formula::quantified(q, var, body)
            }
        }
    }
}

/// One draw, not yet checked against QD bounds; the height is inside the
/// depth bounds by construction.
fn draw<R: Rng + ?Sized>(grammar: Grammar, cfg: &GenerationConfig, rng: &mut R) -> Formula {
    let mut builder = Builder {
        rng,
        nested: grammar == Grammar::Nested,
        predicates: Vec::new(),
        next_name: 0,
        scope: Vec::new(),
        constants: Vec::new(),
    };
    let target = builder.rng.random_range(cfg.min_depth..=cfg.max_depth);
    builder.formula(target, target)
}

fn sample<R: Rng + ?Sized>(
    grammar: Grammar,
    cfg: &GenerationConfig,
    rng: &mut R,
) -> Result<Formula, GenerateError> {
    cfg.validate()?;
    for _ in 0..SAMPLE_ATTEMPTS {
        let f = draw(grammar, cfg, rng);
        if cfg.accepts(&f) {
            return Ok(f);
        }
    }
    Err(GenerateError::ExhaustedSampling(SAMPLE_ATTEMPTS))
}

/// Samples from the standard grammar: no formula-valued atom arguments.
pub fn sample_standard<R: Rng + ?Sized>(
    cfg: &GenerationConfig,
    rng: &mut R,
) -> Result<Formula, GenerateError> {
    sample(Grammar::Standard, cfg, rng)
}

/// Samples from the nested grammar, where atoms may take formulas as arguments.
pub fn sample_nested<R: Rng + ?Sized>(
    cfg: &GenerationConfig,
    rng: &mut R,
) -> Result<Formula, GenerateError> {
    sample(Grammar::Nested, cfg, rng)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedFormula {
    pub id: usize,
    pub grammar: Grammar,
    pub formula: Formula,
    /// Canonical symbolic form, also the de-duplication key.
    pub text: String,
    pub quantifier_depth: usize,
    pub structural_depth: usize,
}

/// Draws `cfg.count` pairwise-distinct formulas in draw order. Duplicates and
/// bound violations are rejected and redrawn from the same seeded stream.
pub fn generate_corpus(cfg: &GenerationConfig) -> Result<Vec<GeneratedFormula>, GenerateError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut seen = HashSet::with_capacity(cfg.count);
    let mut out = Vec::with_capacity(cfg.count);
    let limit = REJECTIONS_PER_ITEM.saturating_mul(cfg.count);
    let mut rejections = 0;
    while out.len() < cfg.count {
        let grammar = match cfg.grammar {
            GrammarChoice::Standard => Grammar::Standard,
            GrammarChoice::Nested => Grammar::Nested,
            GrammarChoice::Both if out.len() % 2 == 0 => Grammar::Standard,
            GrammarChoice::Both => Grammar::Nested,
        };
        let formula = draw(grammar, cfg, &mut rng);
        let text = render(&formula, Style::Symbolic);
        if !cfg.accepts(&formula) || seen.contains(&text) {
            rejections += 1;
            if rejections >= limit {
                return Err(GenerateError::ExhaustedSampling(rejections));
            }
            continue;
        }
        rejections = 0;
        seen.insert(text.clone());
        out.push(GeneratedFormula {
            id: out.len(),
            grammar,
            quantifier_depth: quantifier_depth(&formula),
            structural_depth: structural_depth(&formula),
            formula,
            text,
        });
    }
    Ok(out)
}
