//! Turns abstract formulas (`A(a)`, `B(b,c)`) into readable logical forms by
//! sampling predicates and entity words from a [`Vocabulary`], and rewrites
//! operator symbols into lexical items for text-to-text models.
//!
//! The outermost quantified variable (the first binder in pre-order, or the
//! first term when there is no quantifier) is kept as is, which keeps the
//! subject of the sentence stable. Every other bound variable and free
//! constant receives an entity word
//! drawn from the class that the chosen predicate signature assigns to its
//! first argument position.

mod symbols;
mod vocab;

use std::collections::{BTreeSet, HashMap};

use rand::seq::IndexedRandom;
use rand::Rng;
use thiserror::Error;

use crate::fol::{Argument, Formula, Term};

pub use symbols::{restore_symbols, rewrite_symbols, SymbolError, SymbolMap};
pub use vocab::{EntityClass, PredicateEntry, Vocabulary, VocabularyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexicalizeError {
    #[error("vocabulary has no predicate of arity {0}")]
    NoMatchingPredicate(usize),
    #[error("predicate symbol `{0}` is used with different arities")]
    InconsistentArity(String),
    #[error("formula already contains entity lexemes")]
    NotAbstract,
}

#[derive(Debug)]
struct Entity {
    name: String,
    free: bool,
    class: Option<EntityClass>,
}

/// Resolution of names to entity slots, shared by the analysis and rewrite passes.
#[derive(Default)]
struct Names {
    entities: Vec<Entity>,
    free: HashMap<String, usize>,
    scopes: Vec<(String, usize)>,
}

impl Names {
    fn bind(&mut self, name: &str) -> usize {
        let id = self.entities.len();
        self.entities.push(Entity {
            name: name.to_owned(),
            free: false,
            class: None,
        });
        id
    }

    fn resolve(&mut self, term: &Term) -> usize {
        let name = term.name();
        if let Term::Variable(_) = term {
            if let Some((_, id)) = self.scopes.iter().rev().find(|(n, _)| n == name) {
                return *id;
            }
        }
        if let Some(&id) = self.free.get(name) {
            return id;
        }
        let id = self.entities.len();
        self.entities.push(Entity {
            name: name.to_owned(),
            free: true,
            class: None,
        });
        self.free.insert(name.to_owned(), id);
        id
    }
}

fn collect_predicates(
    f: &Formula,
    out: &mut Vec<(String, usize)>,
) -> Result<(), LexicalizeError> {
    let mut result = Ok(());
    f.walk(&mut |g| {
        if let Formula::Atom { predicate, args } = g {
            match out.iter().find(|(p, _)| p == predicate) {
                Some((_, arity)) if *arity != args.len() => {
                    result = Err(LexicalizeError::InconsistentArity(predicate.clone()));
                }
                Some(_) => {}
                None => out.push((predicate.clone(), args.len())),
            }
            if args
                .iter()
                .any(|a| matches!(a, Argument::Term(Term::Lexeme { .. })))
            {
                result = Err(LexicalizeError::NotAbstract);
            }
        }
    });
    result
}

fn analyze(f: &Formula, chosen: &HashMap<String, &PredicateEntry>, names: &mut Names) {
    match f {
        Formula::Atom { predicate, args } => {
            let signature = &chosen[predicate].signature;
            for (pos, arg) in args.iter().enumerate() {
                match arg {
                    Argument::Term(t) => {
                        let id = names.resolve(t);
                        let slot = &mut names.entities[id];
                        if slot.class.is_none() {
                            slot.class = signature.get(pos).copied();
                        }
                    }
                    Argument::Formula(g) => analyze(g, chosen, names),
                }
            }
        }
        Formula::Not(inner) => analyze(inner, chosen, names),
        Formula::Binary { left, right, .. } => {
            analyze(left, chosen, names);
            analyze(right, chosen, names);
        }
        Formula::Quantified { var, body, .. } => {
            let id = names.bind(var);
            names.scopes.push((var.clone(), id));
            analyze(body, chosen, names);
            names.scopes.pop();
        }
    }
}

fn rewrite(
    f: &Formula,
    chosen: &HashMap<String, &PredicateEntry>,
    words: &[(String, Option<EntityClass>)],
    names: &mut Names,
) -> Formula {
    match f {
        Formula::Atom { predicate, args } => Formula::Atom {
            predicate: chosen[predicate].name.clone(),
            args: args
                .iter()
                .map(|arg| match arg {
                    Argument::Term(t) => {
                        let id = names.resolve(t);
                        let (word, class) = &words[id];
                        let term = match (names.entities[id].free, class) {
                            (true, Some(class)) => Term::Lexeme {
                                text: word.clone(),
                                class: *class,
                            },
                            (true, None) => Term::Constant(word.clone()),
                            (false, _) => Term::Variable(word.clone()),
                        };
                        Argument::Term(term)
                    }
                    Argument::Formula(g) => Argument::Formula(rewrite(g, chosen, words, names)),
                })
                .collect(),
        },
        Formula::Not(inner) => Formula::not(rewrite(inner, chosen, words, names)),
        Formula::Binary { op, left, right } => Formula::binary(
            *op,
            rewrite(left, chosen, words, names),
            rewrite(right, chosen, words, names),
        ),
        Formula::Quantified {
            quantifier,
            var,
            body,
        } => {
            let id = names.bind(var);
            names.scopes.push((var.clone(), id));
            let body = rewrite(body, chosen, words, names);
            names.scopes.pop();
            Formula::quantified(*quantifier, words[id].0.clone(), body)
        }
    }
}

/// Fills an abstract formula with vocabulary predicates and entity words.
///
/// Each distinct predicate symbol maps to one vocabulary predicate of the
/// same arity (distinct symbols get distinct predicates while the vocabulary
/// allows). Entity words are distinct within a formula so no two binders
/// collapse into one name.
pub fn lexicalize<R: Rng + ?Sized>(
    f: &Formula,
    vocab: &Vocabulary,
    rng: &mut R,
) -> Result<Formula, LexicalizeError> {
    let mut symbols = Vec::new();
    collect_predicates(f, &mut symbols)?;

    let mut chosen: HashMap<String, &PredicateEntry> = HashMap::new();
    let mut used_predicates = BTreeSet::new();
    for (symbol, arity) in &symbols {
        let all: Vec<&PredicateEntry> = vocab.with_arity(*arity).collect();
        if all.is_empty() {
            return Err(LexicalizeError::NoMatchingPredicate(*arity));
        }
        let fresh: Vec<&PredicateEntry> = all
            .iter()
            .copied()
            .filter(|p| !used_predicates.contains(&p.name))
            .collect();
        let pool = if fresh.is_empty() { &all } else { &fresh };
        let pick = *pool.choose(rng).expect("pool is nonempty");
        used_predicates.insert(pick.name.clone());
        chosen.insert(symbol.clone(), pick);
    }

    let mut names = Names::default();
    analyze(f, &chosen, &mut names);

    let classes = vocab.populated_classes();
    let kept = names.entities.iter().position(|e| !e.free).unwrap_or(0);
    let mut taken: BTreeSet<String> = names.entities.get(kept).map(|e| e.name.clone()).into_iter().collect();
    let mut words: Vec<(String, Option<EntityClass>)> = Vec::with_capacity(names.entities.len());
    for (id, entity) in names.entities.iter().enumerate() {
        if id == kept || classes.is_empty() {
            words.push((entity.name.clone(), None));
            continue;
        }
        let class = match entity.class {
            Some(c) => c,
            None => *classes.choose(rng).expect("classes is nonempty"),
        };
        let lexicon = vocab.entities(class);
        let fresh: Vec<&String> = lexicon.iter().filter(|w| !taken.contains(*w)).collect();
        let word = match fresh.choose(rng) {
            Some(w) => (*w).clone(),
            None => {
                let base = lexicon.choose(rng).expect("populated class");
                (2..)
                    .map(|n| format!("{base}{n}"))
                    .find(|w| !taken.contains(w))
                    .expect("unbounded suffixes")
            }
        };
        taken.insert(word.clone());
        words.push((word, Some(class)));
    }

    let mut names = Names::default();
    Ok(rewrite(f, &chosen, &words, &mut names))
}
