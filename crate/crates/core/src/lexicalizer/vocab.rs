use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const BUILTIN: &str = include_str!("../../data/default_vocabulary.toml");

/// Words that would be confused with operator spellings once symbols are
/// rewritten into lexical items or ASCII aliases.
const RESERVED: &[&str] = &["and", "or", "implies", "xor", "forall", "exists", "No", "XOR"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EntityClass {
    Person,
    Organization,
    Location,
    Field,
    Object,
    Animal,
    Drink,
}

impl EntityClass {
    pub const ALL: [EntityClass; 7] = [
        EntityClass::Person,
        EntityClass::Organization,
        EntityClass::Location,
        EntityClass::Field,
        EntityClass::Object,
        EntityClass::Animal,
        EntityClass::Drink,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EntityClass::Person => "Person",
            EntityClass::Organization => "Organization",
            EntityClass::Location => "Location",
            EntityClass::Field => "Field",
            EntityClass::Object => "Object",
            EntityClass::Animal => "Animal",
            EntityClass::Drink => "Drink",
        }
    }
}

impl fmt::Display for EntityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EntityClass {
    type Err = VocabularyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EntityClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| VocabularyError::UnknownClass(s.to_owned()))
    }
}

#[derive(Debug, Error)]
pub enum VocabularyError {
    #[error("cannot read vocabulary file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed vocabulary file: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("unknown entity class `{0}`")]
    UnknownClass(String),
    #[error("predicate `{0}` is declared twice")]
    DuplicatePredicate(String),
    #[error("predicate `{name}`: arity {arity} with a signature of length {signature}; arity must be 1 or 2 and match the signature")]
    BadArity {
        name: String,
        arity: usize,
        signature: usize,
    },
    #[error("`{0}` is not a valid identifier")]
    InvalidIdentifier(String),
    #[error("`{0}` is reserved for operator spellings")]
    Reserved(String),
    #[error("predicate `{predicate}` uses class {class}, which has no entities")]
    EmptyClass {
        predicate: String,
        class: EntityClass,
    },
    #[error("vocabulary declares no predicates")]
    NoPredicates,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredicateEntry {
    pub name: String,
    pub signature: Vec<EntityClass>,
}

impl PredicateEntry {
    pub fn arity(&self) -> usize {
        self.signature.len()
    }
}

#[derive(Deserialize)]
struct RawPredicate {
    name: String,
    arity: usize,
    signature: Vec<String>,
}

#[derive(Deserialize)]
struct RawVocabulary {
    predicates: Vec<RawPredicate>,
    #[serde(default)]
    entities: BTreeMap<String, Vec<String>>,
}

/// Predicate and entity lexicon used to fill abstract formulas.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    predicates: Vec<PredicateEntry>,
    entities: BTreeMap<EntityClass, Vec<String>>,
    by_name: HashMap<String, usize>,
    class_of: HashMap<String, EntityClass>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn check_word(word: &str) -> Result<(), VocabularyError> {
    if !is_identifier(word) {
        return Err(VocabularyError::InvalidIdentifier(word.to_owned()));
    }
    if RESERVED.contains(&word) {
        return Err(VocabularyError::Reserved(word.to_owned()));
    }
    Ok(())
}

impl Vocabulary {
    /// The shipped 50-predicate, seven-class lexicon.
    pub fn builtin() -> Self {
        Self::from_toml_str(BUILTIN).expect("builtin vocabulary is valid")
    }

    pub fn builtin_source() -> &'static str {
        BUILTIN
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, VocabularyError> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn from_toml_str(text: &str) -> Result<Self, VocabularyError> {
        let raw: RawVocabulary = toml::from_str(text)?;
        let mut entities = BTreeMap::new();
        for (class, words) in raw.entities {
            let class: EntityClass = class.parse()?;
            for w in &words {
                check_word(w)?;
            }
            entities.insert(class, words);
        }
        let predicates = raw
            .predicates
            .into_iter()
            .map(|p| {
                check_word(&p.name)?;
                if !(1..=2).contains(&p.arity) || p.arity != p.signature.len() {
                    return Err(VocabularyError::BadArity {
                        name: p.name,
                        arity: p.arity,
                        signature: p.signature.len(),
                    });
                }
                let signature = p
                    .signature
                    .iter()
                    .map(|c| c.parse())
                    .collect::<Result<Vec<EntityClass>, _>>()?;
                Ok(PredicateEntry {
                    name: p.name,
                    signature,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(predicates, entities)
    }

    pub fn new(
        predicates: Vec<PredicateEntry>,
        entities: BTreeMap<EntityClass, Vec<String>>,
    ) -> Result<Self, VocabularyError> {
        if predicates.is_empty() {
            return Err(VocabularyError::NoPredicates);
        }
        let mut by_name = HashMap::new();
        for (i, p) in predicates.iter().enumerate() {
            check_word(&p.name)?;
            if !(1..=2).contains(&p.arity()) {
                return Err(VocabularyError::BadArity {
                    name: p.name.clone(),
                    arity: p.arity(),
                    signature: p.arity(),
                });
            }
            if by_name.insert(p.name.clone(), i).is_some() {
                return Err(VocabularyError::DuplicatePredicate(p.name.clone()));
            }
            for class in &p.signature {
                if entities.get(class).is_none_or(|w| w.is_empty()) {
                    return Err(VocabularyError::EmptyClass {
                        predicate: p.name.clone(),
                        class: *class,
                    });
                }
            }
        }
        let mut class_of = HashMap::new();
        for (class, words) in &entities {
            for w in words {
                check_word(w)?;
                class_of.entry(w.clone()).or_insert(*class);
            }
        }
        Ok(Self {
            predicates,
            entities,
            by_name,
            class_of,
        })
    }

    pub fn predicates(&self) -> &[PredicateEntry] {
        &self.predicates
    }

    pub fn predicate(&self, name: &str) -> Option<&PredicateEntry> {
        self.by_name.get(name).map(|&i| &self.predicates[i])
    }

    pub fn with_arity(&self, arity: usize) -> impl Iterator<Item = &PredicateEntry> {
        self.predicates.iter().filter(move |p| p.arity() == arity)
    }

    pub fn entities(&self, class: EntityClass) -> &[String] {
        self.entities.get(&class).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Classes with at least one entity, in declaration order of [`EntityClass::ALL`].
    pub fn populated_classes(&self) -> Vec<EntityClass> {
        EntityClass::ALL
            .into_iter()
            .filter(|c| !self.entities(*c).is_empty())
            .collect()
    }

    /// Class of an entity word, also recognizing the numbered variants
    /// (`chef2`, `chef3`, ...) the lexicalizer makes once a class runs dry.
    pub fn entity_class_of(&self, word: &str) -> Option<EntityClass> {
        if let Some(class) = self.class_of.get(word) {
            return Some(*class);
        }
        let base = word.trim_end_matches(|c: char| c.is_ascii_digit());
        let suffix = &word[base.len()..];
        let numbered = suffix.parse::<u64>().is_ok_and(|n| n >= 2) && !suffix.starts_with('0');
        if numbered {
            self.class_of.get(base).copied()
        } else {
            None
        }
    }
}
