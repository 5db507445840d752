use thiserror::Error;

/// Operator characters that do not belong to the formula language.
const FOREIGN_OPERATORS: &[char] = &[
    '↔', '⇔', '⇒', '⇐', '⊃', '≡', '⊤', '⊥', '⊻', '∄', '←', '⟷', '⟶', '~', '&', '|', '!',
];

const PREFIX: [char; 3] = ['¬', '∀', '∃'];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolError {
    #[error("unknown logical symbol `{symbol}` at byte {offset}")]
    UnknownSymbol { symbol: char, offset: usize },
    #[error("symbol map must cover ¬ ∀ ∃ ⊕ → ∧ ∨ exactly once each with distinct, nonempty items")]
    NotBijective,
}

/// Bijection between the seven operator symbols and their lexical items.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolMap {
    pairs: Vec<(char, String)>,
}

impl Default for SymbolMap {
    fn default() -> Self {
        let pairs = [
            ('¬', "No"),
            ('∀', "For All"),
            ('∃', "There Exists"),
            ('⊕', "XOR"),
            ('→', "implies"),
            ('∧', "and"),
            ('∨', "or"),
        ];
        Self {
            pairs: pairs.iter().map(|(c, s)| (*c, s.to_string())).collect(),
        }
    }
}

impl SymbolMap {
    pub fn new(pairs: Vec<(char, String)>) -> Result<Self, SymbolError> {
        let symbols = ['¬', '∀', '∃', '⊕', '→', '∧', '∨'];
        let covered = pairs.len() == symbols.len()
            && symbols
                .iter()
                .all(|s| pairs.iter().filter(|(c, _)| c == s).count() == 1);
        let items_ok = pairs.iter().enumerate().all(|(i, (_, item))| {
            let trimmed = item.trim();
            !trimmed.is_empty()
                && trimmed == item
                && item.chars().all(|c| c.is_ascii_alphanumeric() || c == ' ')
                && pairs[..i].iter().all(|(_, other)| other != item)
        });
        if covered && items_ok {
            Ok(Self { pairs })
        } else {
            Err(SymbolError::NotBijective)
        }
    }

    pub fn pairs(&self) -> &[(char, String)] {
        &self.pairs
    }

    pub fn item(&self, symbol: char) -> Option<&str> {
        self.pairs
            .iter()
            .find(|(c, _)| *c == symbol)
            .map(|(_, s)| s.as_str())
    }
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Replaces every operator symbol with its lexical item. A space is added
/// after the item unless the next character is whitespace, `)` or `,`, and
/// before it when it would otherwise run into a preceding word.
pub fn rewrite_symbols(text: &str, map: &SymbolMap) -> Result<String, SymbolError> {
    let mut out = String::with_capacity(text.len() * 2);
    let mut chars = text.char_indices().peekable();
    while let Some((offset, c)) = chars.next() {
        if let Some(item) = map.item(c) {
            if out.chars().next_back().is_some_and(is_word_char) {
                out.push(' ');
            }
            out.push_str(item);
            if let Some(&(_, next)) = chars.peek() {
                if !next.is_whitespace() && next != ')' && next != ',' {
                    out.push(' ');
                }
            }
        } else if FOREIGN_OPERATORS.contains(&c) {
            return Err(SymbolError::UnknownSymbol { symbol: c, offset });
        } else {
            out.push(c);
        }
    }
    Ok(out)
}

/// Inverse of [`rewrite_symbols`] on canonically rendered formulas, where
/// prefix operators are never followed by whitespace and binary operators
/// always sit between single spaces.
pub fn restore_symbols(text: &str, map: &SymbolMap) -> String {
    let mut items: Vec<(char, &str)> = map.pairs().iter().map(|(c, s)| (*c, s.as_str())).collect();
    items.sort_by_key(|(_, s)| std::cmp::Reverse(s.len()));

    let mut out = String::with_capacity(text.len());
    let mut pos = 0;
    let mut prev: Option<char> = None;
    'scan: while pos < text.len() {
        if !prev.is_some_and(is_word_char) {
            for (symbol, item) in &items {
                let rest = &text[pos..];
                if rest.starts_with(item)
                    && !rest[item.len()..].chars().next().is_some_and(is_word_char)
                {
                    out.push(*symbol);
                    pos += item.len();
                    if PREFIX.contains(symbol) && text[pos..].starts_with(' ') {
                        pos += 1;
                    }
                    prev = Some(*symbol);
                    continue 'scan;
                }
            }
        }
        let c = text[pos..].chars().next().expect("pos is on a char boundary");
        out.push(c);
        pos += c.len_utf8();
        prev = Some(c);
    }
    out
}
