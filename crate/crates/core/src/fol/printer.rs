use super::ast::{Argument, Connective, Formula, Quantifier};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Style {
    #[default]
    Symbolic,
    Ascii,
}

impl Style {
    fn not(self) -> &'static str {
        match self {
            Style::Symbolic => "¬",
            Style::Ascii => "~",
        }
    }

    fn connective(self, op: Connective) -> &'static str {
        match (self, op) {
            (Style::Symbolic, Connective::And) => " ∧ ",
            (Style::Symbolic, Connective::Or) => " ∨ ",
            (Style::Symbolic, Connective::Xor) => " ⊕ ",
            (Style::Symbolic, Connective::Implies) => " → ",
            (Style::Ascii, Connective::And) => " & ",
            (Style::Ascii, Connective::Or) => " | ",
            (Style::Ascii, Connective::Xor) => " xor ",
            (Style::Ascii, Connective::Implies) => " -> ",
        }
    }

    fn quantifier(self, q: Quantifier, var: &str, out: &mut String) {
        match (self, q) {
            (Style::Symbolic, Quantifier::ForAll) => out.push('∀'),
            (Style::Symbolic, Quantifier::Exists) => out.push('∃'),
            (Style::Ascii, Quantifier::ForAll) => out.push_str("forall "),
            (Style::Ascii, Quantifier::Exists) => out.push_str("exists "),
        }
        out.push_str(var);
        if self == Style::Ascii {
            out.push(' ');
        }
    }
}

/// Canonical string form: minimal parentheses between connectives, and
/// every quantifier body parenthesized.
pub fn render(f: &Formula, style: Style) -> String {
    let mut out = String::new();
    write_formula(f, style, &mut out);
    out
}

fn write_formula(f: &Formula, style: Style, out: &mut String) {
    match f {
        Formula::Atom { predicate, args } => {
            out.push_str(predicate);
            out.push('(');
            for (i, arg) in args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match arg {
                    Argument::Term(t) => out.push_str(t.name()),
                    Argument::Formula(g) => write_formula(g, style, out),
                }
            }
            out.push(')');
        }
        Formula::Not(inner) => {
            out.push_str(style.not());
            write_operand(inner, 5, false, style, out);
        }
        Formula::Binary { op, left, right } => {
            let prec = op.precedence();
            write_operand(left, prec, !op.is_left_associative(), style, out);
            out.push_str(style.connective(*op));
            write_operand(right, prec, true, style, out);
        }
        Formula::Quantified {
            quantifier,
            var,
            body,
        } => {
            style.quantifier(*quantifier, var, out);
            out.push('(');
            write_formula(body, style, out);
            out.push(')');
        }
    }
}

/// Writes `f` in a context binding with strength `context`; `strict` also
/// parenthesizes an operand of equal strength.
fn write_operand(f: &Formula, context: u8, strict: bool, style: Style, out: &mut String) {
    let needs_parens = match f {
        Formula::Binary { op, .. } => {
            let p = op.precedence();
            p < context || (strict && p == context)
        }
        _ => false,
    };
    if needs_parens {
        out.push('(');
        write_formula(f, style, out);
        out.push(')');
    } else {
        write_formula(f, style, out);
    }
}
