use std::fmt;

use crate::lexicalizer::EntityClass;

/// Binary connectives. Negation and quantifiers are separate node kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Connective {
    And,
    Or,
    Implies,
    Xor,
}

impl Connective {
    pub const ALL: [Connective; 4] = [
        Connective::And,
        Connective::Or,
        Connective::Implies,
        Connective::Xor,
    ];

    /// Binding strength; larger binds tighter.
    pub(crate) fn precedence(self) -> u8 {
        match self {
            Connective::Implies => 1,
            Connective::Xor => 2,
            Connective::Or => 3,
            Connective::And => 4,
        }
    }

    /// `∧` and `∨` chain to the left; `⊕` and `→` need explicit parentheses.
    pub(crate) fn is_left_associative(self) -> bool {
        matches!(self, Connective::And | Connective::Or)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    ForAll,
    Exists,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Variable(String),
    Constant(String),
    /// An entity word inserted by lexicalization.
    Lexeme { text: String, class: EntityClass },
}

impl Term {
    pub fn name(&self) -> &str {
        match self {
            Term::Variable(name) | Term::Constant(name) => name,
            Term::Lexeme { text, .. } => text,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Argument {
    Term(Term),
    /// Formula-valued argument, only produced by the nested grammar.
    Formula(Formula),
}

impl Argument {
    pub fn var(name: impl Into<String>) -> Self {
        Argument::Term(Term::Variable(name.into()))
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Argument::Term(Term::Constant(name.into()))
    }

    pub fn term(&self) -> Option<&Term> {
        match self {
            Argument::Term(t) => Some(t),
            Argument::Formula(_) => None,
        }
    }
}

impl From<Formula> for Argument {
    fn from(f: Formula) -> Self {
        Argument::Formula(f)
    }
}

impl From<Term> for Argument {
    fn from(t: Term) -> Self {
        Argument::Term(t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom {
        predicate: String,
        args: Vec<Argument>,
    },
    Not(Box<Formula>),
    Binary {
        op: Connective,
        left: Box<Formula>,
        right: Box<Formula>,
    },
    Quantified {
        quantifier: Quantifier,
        var: String,
        body: Box<Formula>,
    },
}

impl Formula {
    pub fn atom(predicate: impl Into<String>, args: Vec<Argument>) -> Self {
        Formula::Atom {
            predicate: predicate.into(),
            args,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: Formula) -> Self {
        Formula::Not(Box::new(inner))
    }

    pub fn binary(op: Connective, left: Formula, right: Formula) -> Self {
        Formula::Binary {
            op,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn and(left: Formula, right: Formula) -> Self {
        Self::binary(Connective::And, left, right)
    }

    pub fn or(left: Formula, right: Formula) -> Self {
        Self::binary(Connective::Or, left, right)
    }

    pub fn implies(left: Formula, right: Formula) -> Self {
        Self::binary(Connective::Implies, left, right)
    }

    pub fn xor(left: Formula, right: Formula) -> Self {
        Self::binary(Connective::Xor, left, right)
    }

    pub fn quantified(quantifier: Quantifier, var: impl Into<String>, body: Formula) -> Self {
        Formula::Quantified {
            quantifier,
            var: var.into(),
            body: Box::new(body),
        }
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Self {
        Self::quantified(Quantifier::ForAll, var, body)
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Self {
        Self::quantified(Quantifier::Exists, var, body)
    }

    /// True if any atom in the tree takes a formula-valued argument.
    pub fn has_nested_arguments(&self) -> bool {
        match self {
            Formula::Atom { args, .. } => args.iter().any(|a| matches!(a, Argument::Formula(_))),
            Formula::Not(inner) => inner.has_nested_arguments(),
            Formula::Binary { left, right, .. } => {
                left.has_nested_arguments() || right.has_nested_arguments()
            }
            Formula::Quantified { body, .. } => body.has_nested_arguments(),
        }
    }

    /// Pre-order walk over every formula node, descending into
    /// formula-valued atom arguments.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a Formula)) {
        visit(self);
        match self {
            Formula::Atom { args, .. } => {
                for arg in args {
                    if let Argument::Formula(f) = arg {
                        f.walk(visit);
                    }
                }
            }
            Formula::Not(inner) => inner.walk(visit),
            Formula::Binary { left, right, .. } => {
                left.walk(visit);
                right.walk(visit);
            }
            Formula::Quantified { body, .. } => body.walk(visit),
        }
    }

    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }

    /// Same node kinds, connectives, quantifiers and arities, ignoring every
    /// name (predicates, variables, terms).
    pub fn same_shape(&self, other: &Formula) -> bool {
        match (self, other) {
            (Formula::Atom { args: a, .. }, Formula::Atom { args: b, .. }) => {
                a.len() == b.len()
                    && a.iter().zip(b).all(|(x, y)| match (x, y) {
                        (Argument::Term(_), Argument::Term(_)) => true,
                        (Argument::Formula(f), Argument::Formula(g)) => f.same_shape(g),
                        _ => false,
                    })
            }
            (Formula::Not(a), Formula::Not(b)) => a.same_shape(b),
            (
                Formula::Binary { op: o1, left: l1, right: r1 },
                Formula::Binary { op: o2, left: l2, right: r2 },
            ) => o1 == o2 && l1.same_shape(l2) && r1.same_shape(r2),
            (
                Formula::Quantified { quantifier: q1, body: b1, .. },
                Formula::Quantified { quantifier: q2, body: b2, .. },
            ) => q1 == q2 && b1.same_shape(b2),
            _ => false,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::render(self, super::Style::Symbolic))
    }
}
