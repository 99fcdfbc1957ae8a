use alloc::format;
use alloc::rc::Rc;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// Index of a symbol within its alphabet's declaration order.
pub type SymbolId = usize;

/// Tokens that can never be alphabet symbols: markers and formula keywords.
const RESERVED: &[&str] = &["bos", "eos", "true", "false", "Y", "H", "S", "P"];

/// A finite, non-empty, ordered set of distinct symbols.
///
/// `bos` and `eos` are reserved markers and never members of the set.
/// Alphabets are cheaply cloneable and compared by content.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Rc<Vec<String>>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self, AlphabetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(AlphabetError::Empty);
        }
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() || !s.chars().all(valid_symbol_char) {
                return Err(AlphabetError::BadSymbol(s.clone()));
            }
            if RESERVED.contains(&s.as_str()) {
                return Err(AlphabetError::Reserved(s.clone()));
            }
            if symbols[..i].contains(s) {
                return Err(AlphabetError::Duplicate(s.clone()));
            }
        }
        Ok(Alphabet {
            symbols: Rc::new(symbols),
        })
    }

    /// Parses a string into symbol ids. Accepts whitespace/comma separated
    /// tokens; when every symbol is a single character, an unseparated
    /// string like `"abba"` is split per character.
    pub fn parse_string(&self, text: &str) -> Result<Vec<SymbolId>, AlphabetError> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Vec::new());
        }
        if text.contains(|c: char| c.is_whitespace() || c == ',') {
            return text
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    self.id_of(t)
                        .ok_or_else(|| AlphabetError::UnknownSymbol(t.to_string()))
                })
                .collect();
        }
        if self.symbols.iter().all(|s| s.chars().count() == 1) {
            return text
                .chars()
                .map(|c| {
                    let t = c.to_string();
                    self.id_of(&t)
                        .ok_or_else(|| AlphabetError::UnknownSymbol(t))
                })
                .collect();
        }
        self.id_of(text)
            .map(|id| alloc::vec![id])
            .ok_or_else(|| AlphabetError::UnknownSymbol(text.to_string()))
    }

    /// Renders a symbol-id string back to text, using separators only when
    /// some symbol is wider than one character.
    pub fn format_string(&self, w: &[SymbolId]) -> String {
        if self.symbols.iter().all(|s| s.chars().count() == 1) {
            w.iter().map(|&id| self.symbol(id)).collect()
        } else {
            let parts: Vec<&str> = w.iter().map(|&id| self.symbol(id)).collect();
            parts.join(" ")
        }
    }

    pub fn id_of(&self, symbol: &str) -> Option<SymbolId> {
        self.symbols.iter().position(|s| s == symbol)
    }

    pub fn symbol(&self, id: SymbolId) -> &str {
        &self.symbols[id]
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn ids(&self) -> impl Iterator<Item = SymbolId> {
        0..self.symbols.len()
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.symbols.iter().map(|s| s.as_str())
    }

    /// The alphabet of symbol pairs `(Σ∪{bos}) × (Σ∪{eos})`, used by the
    /// bigram rewriting. A pair of `x` and `y` is named `x.y`.
    pub fn bigram_alphabet(&self) -> Alphabet {
        let mut firsts: Vec<String> = self.symbols().map(|s| s.to_string()).collect();
        firsts.push("bos".to_string());
        let mut seconds: Vec<String> = self.symbols().map(|s| s.to_string()).collect();
        seconds.push("eos".to_string());
        let mut pairs = Vec::new();
        for f in &firsts {
            for s in &seconds {
                pairs.push(format!("{}.{}", f, s));
            }
        }
        Alphabet {
            symbols: Rc::new(pairs),
        }
    }
}

fn valid_symbol_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '.'
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphabetError {
    Empty,
    BadSymbol(String),
    Reserved(String),
    Duplicate(String),
    UnknownSymbol(String),
}

impl fmt::Display for AlphabetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphabetError::Empty => write!(f, "alphabet must be non-empty"),
            AlphabetError::BadSymbol(s) => write!(f, "invalid symbol `{}`", s),
            AlphabetError::Reserved(s) => write!(f, "`{}` is reserved and cannot be a symbol", s),
            AlphabetError::Duplicate(s) => write!(f, "duplicate symbol `{}`", s),
            AlphabetError::UnknownSymbol(s) => write!(f, "symbol `{}` is not in the alphabet", s),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for AlphabetError {}
