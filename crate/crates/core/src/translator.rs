//! Rule-based English rendering of lexicalized formulas. One template per
//! node kind, applied recursively; no lexicon beyond the predicate names.

use thiserror::Error;

use crate::fol::{Argument, Connective, Formula, Quantifier};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("predicate `{0}` is still abstract; lexicalize the formula first")]
    UnlexicalizedInput(String),
}

/// `A`, `B`, `A1`: the names the generator hands out.
fn is_abstract_predicate(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next().is_some_and(|c| c.is_ascii_uppercase()) && chars.all(|c| c.is_ascii_digit())
}

fn split_camel(name: &str) -> Vec<String> {
    let mut words: Vec<String> = Vec::new();
    for c in name.chars() {
        if c == '_' {
            words.push(String::new());
        } else if c.is_uppercase() || words.is_empty() {
            words.push(c.to_lowercase().collect());
        } else if let Some(last) = words.last_mut() {
            last.push(c);
        }
    }
    words.retain(|w| !w.is_empty());
    words
}

/// Third-person singular of a bare verb ("like" → "likes").
fn inflect(verb: &str) -> String {
    const KEEP: [&str; 4] = ["is", "has", "was", "does"];
    if KEEP.contains(&verb) || (verb.ends_with('s') && !verb.ends_with("ss")) {
        return verb.to_string();
    }
    if verb == "have" {
        return "has".into();
    }
    if verb == "be" {
        return "is".into();
    }
    let bytes = verb.as_bytes();
    if verb.ends_with('y') && bytes.len() > 1 && !b"aeiou".contains(&bytes[bytes.len() - 2]) {
        return format!("{}ies", &verb[..verb.len() - 1]);
    }
    if ["s", "sh", "ch", "x", "z", "o"].iter().any(|e| verb.ends_with(e)) {
        return format!("{verb}es");
    }
    format!("{verb}s")
}

/// `LivesIn` → "lives in", `IsHappy` → "is happy", `Like` → "likes".
pub fn predicate_phrase(name: &str) -> String {
    let mut words = split_camel(name);
    if let Some(first) = words.first_mut() {
        *first = inflect(first);
    }
    words.join(" ")
}

fn connective(op: Connective, left: String, right: String) -> String {
    match op {
        Connective::And => format!("{left} and {right}"),
        Connective::Or => format!("{left} or {right}"),
        Connective::Implies => format!("if {left}, then {right}"),
        Connective::Xor => format!("either {left} or {right}, but not both"),
    }
}

fn clause(f: &Formula) -> Result<String, TranslateError> {
    Ok(match f {
        Formula::Atom { predicate, args } => {
            if is_abstract_predicate(predicate) {
                return Err(TranslateError::UnlexicalizedInput(predicate.clone()));
            }
            let phrase = predicate_phrase(predicate);
            if f.has_nested_arguments() {
                let parts = args
                    .iter()
                    .map(|a| match a {
                        Argument::Term(t) => Ok(t.name().to_string()),
                        Argument::Formula(g) => clause(g),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                format!("it holds of {} that {phrase}", parts.join(" and "))
            } else {
                let terms: Vec<&str> = args
                    .iter()
                    .filter_map(|a| a.term().map(|t| t.name()))
                    .collect();
                match terms.as_slice() {
                    [] => phrase,
                    [subject] => format!("{subject} {phrase}"),
                    [subject, rest @ ..] => format!("{subject} {phrase} {}", rest.join(" and ")),
                }
            }
        }
        Formula::Not(inner) => format!("it is not the case that {}", clause(inner)?),
        Formula::Binary { op, left, right } => connective(*op, clause(left)?, clause(right)?),
        Formula::Quantified {
            quantifier,
            var,
            body,
        } => match quantifier {
            Quantifier::ForAll => format!("for every {var}, {}", clause(body)?),
            Quantifier::Exists => format!("there exists some {var} such that {}", clause(body)?),
        },
    })
}

/// Renders a lexicalized formula as one English sentence: capitalised, ending
/// with a period.
pub fn translate(f: &Formula) -> Result<String, TranslateError> {
    let body = clause(f)?;
    let mut chars = body.chars();
    let mut out: String = chars.next().map(|c| c.to_uppercase().collect()).unwrap_or_default();
    out.push_str(chars.as_str());
    out.push('.');
    Ok(out)
}
