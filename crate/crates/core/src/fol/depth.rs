use super::ast::{Argument, Formula};

fn nested_args(args: &[Argument]) -> impl Iterator<Item = &Formula> {
    args.iter().filter_map(|a| match a {
        Argument::Formula(f) => Some(f),
        Argument::Term(_) => None,
    })
}

/// Maximum nesting of quantifiers. Atoms with formula-valued arguments take
/// the largest depth among those arguments.
pub fn quantifier_depth(f: &Formula) -> usize {
    match f {
        Formula::Atom { args, .. } => nested_args(args).map(quantifier_depth).max().unwrap_or(0),
        Formula::Not(inner) => quantifier_depth(inner),
        Formula::Binary { left, right, .. } => quantifier_depth(left).max(quantifier_depth(right)),
        Formula::Quantified { body, .. } => quantifier_depth(body) + 1,
    }
}

/// Height of the formula tree, one level per atom, negation, connective and
/// quantifier node. Terms do not count, so a plain atom has height 1.
pub fn structural_depth(f: &Formula) -> usize {
    match f {
        Formula::Atom { args, .. } => 1 + nested_args(args).map(structural_depth).max().unwrap_or(0),
        Formula::Not(inner) => 1 + structural_depth(inner),
        Formula::Binary { left, right, .. } => 1 + structural_depth(left).max(structural_depth(right)),
        Formula::Quantified { body, .. } => 1 + structural_depth(body),
    }
}

impl Formula {
    pub fn quantifier_depth(&self) -> usize {
        quantifier_depth(self)
    }

    pub fn structural_depth(&self) -> usize {
        structural_depth(self)
    }
}
