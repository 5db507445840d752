use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::ast::{Argument, Connective, Formula, Quantifier, Term};
use crate::lexicalizer::Vocabulary;

/// Parenthesis/negation nesting beyond this is rejected instead of risking
/// stack exhaustion.
const MAX_NESTING: usize = 128;

/// Which operator spellings the parser accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Syntax {
    /// `¬ ∧ ∨ ⊕ → ∀ ∃`
    Unicode,
    /// `~ & | xor -> forall exists`
    Ascii,
    #[default]
    Either,
}

impl Syntax {
    fn unicode(self) -> bool {
        matches!(self, Syntax::Unicode | Syntax::Either)
    }

    fn ascii(self) -> bool {
        matches!(self, Syntax::Ascii | Syntax::Either)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TokenKind {
    Identifier,
    LeftParen,
    RightParen,
    Comma,
    Not,
    And,
    Or,
    Xor,
    Implies,
    ForAll,
    Exists,
    End,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TokenKind::Identifier => "identifier",
            TokenKind::LeftParen => "'('",
            TokenKind::RightParen => "')'",
            TokenKind::Comma => "','",
            TokenKind::Not => "negation",
            TokenKind::And => "conjunction",
            TokenKind::Or => "disjunction",
            TokenKind::Xor => "exclusive-or",
            TokenKind::Implies => "implication",
            TokenKind::ForAll => "universal quantifier",
            TokenKind::Exists => "existential quantifier",
            TokenKind::End => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: found {found}, expected one of {}", fmt_expected(.expected))]
    Syntax {
        offset: usize,
        expected: Vec<TokenKind>,
        found: String,
    },
    #[error("predicate {predicate} at byte {offset} takes {expected} argument(s), found {found}")]
    Arity {
        offset: usize,
        predicate: String,
        expected: usize,
        found: usize,
    },
    #[error("empty formula")]
    Empty,
    #[error("nesting deeper than {MAX_NESTING} at byte {offset}")]
    TooDeep { offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::Arity { offset, .. }
            | ParseError::TooDeep { offset } => Some(*offset),
            ParseError::Empty => None,
        }
    }
}

fn fmt_expected(expected: &[TokenKind]) -> String {
    expected
        .iter()
        .map(|k| k.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Sym(TokenKind),
    Invalid(String),
}

impl Tok {
    fn kind(&self) -> Option<TokenKind> {
        match self {
            Tok::Ident(_) => Some(TokenKind::Identifier),
            Tok::Sym(k) => Some(*k),
            Tok::Invalid(_) => None,
        }
    }
}

fn lex(text: &str, syntax: Syntax) -> Vec<(Tok, usize)> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(at, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut end = at;
            while let Some(&(i, d)) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    end = i + d.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            let word = &text[at..end];
            let tok = match word {
                "forall" if syntax.ascii() => Tok::Sym(TokenKind::ForAll),
                "exists" if syntax.ascii() => Tok::Sym(TokenKind::Exists),
                "xor" if syntax.ascii() => Tok::Sym(TokenKind::Xor),
                _ => Tok::Ident(word.to_owned()),
            };
            out.push((tok, at));
            continue;
        }
        chars.next();
        let sym = match c {
            '(' => Some(TokenKind::LeftParen),
            ')' => Some(TokenKind::RightParen),
            ',' => Some(TokenKind::Comma),
            '¬' if syntax.unicode() => Some(TokenKind::Not),
            '∧' if syntax.unicode() => Some(TokenKind::And),
            '∨' if syntax.unicode() => Some(TokenKind::Or),
            '⊕' if syntax.unicode() => Some(TokenKind::Xor),
            '→' if syntax.unicode() => Some(TokenKind::Implies),
            '∀' if syntax.unicode() => Some(TokenKind::ForAll),
            '∃' if syntax.unicode() => Some(TokenKind::Exists),
            '~' if syntax.ascii() => Some(TokenKind::Not),
            '&' if syntax.ascii() => Some(TokenKind::And),
            '|' if syntax.ascii() => Some(TokenKind::Or),
            '-' if syntax.ascii() && matches!(chars.peek(), Some(&(_, '>'))) => {
                chars.next();
                Some(TokenKind::Implies)
            }
            _ => None,
        };
        out.push((
            sym.map(Tok::Sym).unwrap_or_else(|| Tok::Invalid(c.to_string())),
            at,
        ));
    }
    out
}

struct Parser<'t, 'v> {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    end_offset: usize,
    expected: BTreeSet<TokenKind>,
    scopes: Vec<String>,
    nesting: usize,
    vocab: Option<&'v Vocabulary>,
    _text: &'t str,
}

type PResult<T> = Result<T, ParseError>;

impl<'t, 'v> Parser<'t, 'v> {
    fn peek_kind(&self) -> TokenKind {
        match self.tokens.get(self.pos) {
            Some((tok, _)) => tok.kind().unwrap_or(TokenKind::End),
            None => TokenKind::End,
        }
    }

    fn peek_is_invalid(&self) -> bool {
        matches!(self.tokens.get(self.pos), Some((Tok::Invalid(_), _)))
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(_, at)| *at)
            .unwrap_or(self.end_offset)
    }

    fn at(&mut self, kind: TokenKind) -> bool {
        if !self.peek_is_invalid() && self.peek_kind() == kind {
            true
        } else {
            self.expected.insert(kind);
            false
        }
    }

    fn bump(&mut self) -> Tok {
        let tok = self.tokens[self.pos].0.clone();
        self.pos += 1;
        self.expected.clear();
        tok
    }

    fn eat(&mut self, kind: TokenKind) -> bool {
        if self.at(kind) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokenKind) -> PResult<()> {
        if self.eat(kind) {
            Ok(())
        } else {
            Err(self.error())
        }
    }

    fn error(&mut self) -> ParseError {
        let found = match self.tokens.get(self.pos) {
            Some((Tok::Ident(s), _)) => format!("identifier `{s}`"),
            Some((Tok::Invalid(s), _)) => format!("`{s}`"),
            Some((Tok::Sym(k), _)) => k.to_string(),
            None => TokenKind::End.to_string(),
        };
        ParseError::Syntax {
            offset: self.offset(),
            expected: std::mem::take(&mut self.expected).into_iter().collect(),
            found,
        }
    }

    fn enter(&mut self) -> PResult<()> {
        self.nesting += 1;
        if self.nesting > MAX_NESTING {
            return Err(ParseError::TooDeep {
                offset: self.offset(),
            });
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.nesting -= 1;
    }

    fn formula(&mut self) -> PResult<Formula> {
        self.enter()?;
        let result = self.implication();
        self.leave();
        result
    }

    fn implication(&mut self) -> PResult<Formula> {
        let left = self.exclusive()?;
        if self.eat(TokenKind::Implies) {
            let right = self.exclusive()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn exclusive(&mut self) -> PResult<Formula> {
        let left = self.disjunction()?;
        if self.eat(TokenKind::Xor) {
            let right = self.disjunction()?;
            return Ok(Formula::xor(left, right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut left = self.conjunction()?;
        while self.eat(TokenKind::Or) {
            let right = self.conjunction()?;
            left = Formula::binary(Connective::Or, left, right);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut left = self.unary()?;
        while self.eat(TokenKind::And) {
            let right = self.unary()?;
            left = Formula::binary(Connective::And, left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> PResult<Formula> {
        if self.eat(TokenKind::Not) {
            self.enter()?;
            let inner = self.unary();
            self.leave();
            return Ok(Formula::not(inner?));
        }
        let quantifier = if self.eat(TokenKind::ForAll) {
            Some(Quantifier::ForAll)
        } else if self.eat(TokenKind::Exists) {
            Some(Quantifier::Exists)
        } else {
            None
        };
        if let Some(quantifier) = quantifier {
            let var = self.identifier()?;
            self.expect(TokenKind::LeftParen)?;
            self.scopes.push(var.clone());
            let body = self.formula();
            self.scopes.pop();
            let body = body?;
            self.expect(TokenKind::RightParen)?;
            return Ok(Formula::quantified(quantifier, var, body));
        }
        self.primary()
    }

    fn identifier(&mut self) -> PResult<String> {
        if self.at(TokenKind::Identifier) {
            match self.bump() {
                Tok::Ident(s) => Ok(s),
                _ => unreachable!("at() checked the kind"),
            }
        } else {
            Err(self.error())
        }
    }

    fn primary(&mut self) -> PResult<Formula> {
        if self.eat(TokenKind::LeftParen) {
            let inner = self.formula()?;
            self.expect(TokenKind::RightParen)?;
            return Ok(inner);
        }
        let offset = self.offset();
        let predicate = self.identifier()?;
        self.expect(TokenKind::LeftParen)?;
        let mut args = vec![self.argument()?];
        while self.eat(TokenKind::Comma) {
            args.push(self.argument()?);
        }
        self.expect(TokenKind::RightParen)?;
        if let Some(entry) = self.vocab.and_then(|v| v.predicate(&predicate)) {
            if entry.arity() != args.len() {
                return Err(ParseError::Arity {
                    offset,
                    predicate,
                    expected: entry.arity(),
                    found: args.len(),
                });
            }
        }
        Ok(Formula::Atom { predicate, args })
    }

    fn argument(&mut self) -> PResult<Argument> {
        let next_is_paren = matches!(
            self.tokens.get(self.pos + 1),
            Some((Tok::Sym(TokenKind::LeftParen), _))
        );
        if self.at(TokenKind::Identifier) && !next_is_paren {
            let name = self.identifier()?;
            return Ok(Argument::Term(self.classify(name)));
        }
        Ok(Argument::Formula(self.formula()?))
    }

    fn classify(&self, name: String) -> Term {
        if self.scopes.contains(&name) {
            return Term::Variable(name);
        }
        match self.vocab.and_then(|v| v.entity_class_of(&name)) {
            Some(class) => Term::Lexeme { text: name, class },
            None => Term::Constant(name),
        }
    }
}

fn run(text: &str, syntax: Syntax, vocab: Option<&Vocabulary>) -> Result<Formula, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    let mut parser = Parser {
        tokens: lex(text, syntax),
        pos: 0,
        end_offset: text.len(),
        expected: BTreeSet::new(),
        scopes: Vec::new(),
        nesting: 0,
        vocab,
        _text: text,
    };
    let formula = parser.formula()?;
    if !parser.at(TokenKind::End) {
        return Err(parser.error());
    }
    Ok(formula)
}

/// Parses a formula string. Identifiers bound by an enclosing quantifier
/// become [`Term::Variable`], all others [`Term::Constant`].
pub fn parse(text: &str, syntax: Syntax) -> Result<Formula, ParseError> {
    run(text, syntax, None)
}

/// Like [`parse`], but checks predicate arities against `vocab` and reads
/// free identifiers found in its entity lexicon as [`Term::Lexeme`].
pub fn parse_with_vocabulary(
    text: &str,
    syntax: Syntax,
    vocab: &Vocabulary,
) -> Result<Formula, ParseError> {
    run(text, syntax, Some(vocab))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked_example() -> Formula {
        Formula::forall(
            "a",
            Formula::implies(
                Formula::atom("A", vec![Argument::var("a")]),
                Formula::forall(
                    "b",
                    Formula::or(
                        Formula::not(Formula::atom(
                            "B",
                            vec![Argument::var("b"), Argument::constant("c")],
                        )),
                        Formula::not(Formula::atom("C", vec![Argument::var("b")])),
                    ),
                ),
            ),
        )
    }

    #[test]
    fn parses_worked_example() {
        let f = parse("∀a(A(a) → ∀b(¬B(b,c) ∨ ¬C(b)))", Syntax::Unicode).unwrap();
        assert_eq!(f, worked_example());
    }

    #[test]
    fn single_atom() {
        assert_eq!(
            parse("P(a)", Syntax::Either).unwrap(),
            Formula::atom("P", vec![Argument::constant("a")])
        );
    }

    #[test]
    fn ascii_aliases_match_unicode() {
        let a = parse("forall x (P(x) & Q(x))", Syntax::Ascii).unwrap();
        let u = parse("∀x(P(x) ∧ Q(x))", Syntax::Unicode).unwrap();
        assert_eq!(a, u);
        let a = parse("~P(a) | (Q(a) xor R(a)) -> S(a)", Syntax::Ascii).unwrap();
        let u = parse("¬P(a) ∨ (Q(a) ⊕ R(a)) → S(a)", Syntax::Unicode).unwrap();
        assert_eq!(a, u);
    }

    #[test]
    fn syntax_modes_are_exclusive() {
        assert!(parse("~P(a)", Syntax::Unicode).is_err());
        assert!(parse("¬P(a)", Syntax::Ascii).is_err());
        assert!(parse("¬P(a) & Q(a)", Syntax::Either).is_ok());
    }

    #[test]
    fn precedence_and_binds_tighter_than_or() {
        let f = parse("P(a) ∨ Q(a) ∧ R(a)", Syntax::Unicode).unwrap();
        let Formula::Binary { op, right, .. } = f else {
            panic!("expected binary")
        };
        assert_eq!(op, Connective::Or);
        assert!(matches!(*right, Formula::Binary { op: Connective::And, .. }));
    }

    #[test]
    fn or_chains_left() {
        let f = parse("P(a) ∨ Q(a) ∨ R(a)", Syntax::Unicode).unwrap();
        let Formula::Binary { left, .. } = f else {
            panic!("expected binary")
        };
        assert!(matches!(*left, Formula::Binary { op: Connective::Or, .. }));
    }

    #[test]
    fn implication_and_xor_do_not_chain() {
        for text in ["P(a) → Q(a) → R(a)", "P(a) ⊕ Q(a) ⊕ R(a)"] {
            let err = parse(text, Syntax::Unicode).unwrap_err();
            assert!(matches!(err, ParseError::Syntax { .. }), "{text}: {err}");
        }
        assert!(parse("P(a) → (Q(a) → R(a))", Syntax::Unicode).is_ok());
    }

    #[test]
    fn quantifier_requires_parenthesized_body() {
        let err = parse("∀x P(x)", Syntax::Unicode).unwrap_err();
        let ParseError::Syntax { offset, expected, .. } = err else {
            panic!("wrong error")
        };
        assert_eq!(offset, "∀x ".len());
        assert_eq!(expected, vec![TokenKind::LeftParen]);
    }

    #[test]
    fn binding_decides_variable_or_constant() {
        let f = parse("∀x(R(x,y)) ∧ S(x)", Syntax::Unicode).unwrap();
        let mut terms = Vec::new();
        f.walk(&mut |g| {
            if let Formula::Atom { args, .. } = g {
                for a in args {
                    if let Argument::Term(t) = a {
                        terms.push(t.clone());
                    }
                }
            }
        });
        assert_eq!(
            terms,
            vec![
                Term::Variable("x".into()),
                Term::Constant("y".into()),
                Term::Constant("x".into())
            ]
        );
    }

    #[test]
    fn nested_formula_arguments() {
        let f = parse("P(Q(a) ∧ R(b), c)", Syntax::Unicode).unwrap();
        let Formula::Atom { args, .. } = &f else {
            panic!()
        };
        assert!(matches!(args[0], Argument::Formula(_)));
        assert!(matches!(args[1], Argument::Term(_)));
        assert!(f.has_nested_arguments());
    }

    #[test]
    fn rejects_bad_input_with_offsets() {
        let cases = [
            ("P()", 2),
            ("P(a", 3),
            ("P(a) ∧", "P(a) ∧".len()),
            ("P", 1),
            ("∀(P(a))", "∀".len()),
            ("P(a) # Q(a)", 5),
        ];
        for (text, at) in cases {
            match parse(text, Syntax::Either) {
                Err(ParseError::Syntax { offset, .. }) => assert_eq!(offset, at, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        assert_eq!(parse("   ", Syntax::Either), Err(ParseError::Empty));
    }

    #[test]
    fn deep_nesting_is_an_error_not_a_crash() {
        let text = format!("{}P(a){}", "(".repeat(10_000), ")".repeat(10_000));
        assert!(matches!(
            parse(&text, Syntax::Either),
            Err(ParseError::TooDeep { .. })
        ));
        let text = format!("{}P(a)", "¬".repeat(10_000));
        assert!(matches!(
            parse(&text, Syntax::Either),
            Err(ParseError::TooDeep { .. })
        ));
    }

    #[test]
    fn arity_checked_against_vocabulary() {
        let vocab = Vocabulary::builtin();
        let err = parse_with_vocabulary("LivesIn(a)", Syntax::Either, &vocab).unwrap_err();
        assert!(matches!(
            err,
            ParseError::Arity { expected: 2, found: 1, .. }
        ));
        let f = parse_with_vocabulary("LivesIn(a, zone)", Syntax::Either, &vocab).unwrap();
        let Formula::Atom { args, .. } = f else {
            panic!()
        };
        assert!(matches!(&args[1], Argument::Term(Term::Lexeme { text, .. }) if text == "zone"));
    }
}
