use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{InputError, Violation};

/// Left end-marker, read before the input.
pub const LEFT_MARKER: &str = "¢";
/// Right end-marker, read after the input.
pub const RIGHT_MARKER: &str = "$";

/// Input alphabet `Σ`. The tape alphabet is `Σ ∪ {¢, $}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
}

/// A symbol on the tape: an end-marker or the index of an input symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TapeSymbol {
    LeftMarker,
    Input(usize),
    RightMarker,
}

impl TapeSymbol {
    /// Position in tape order `¢, σ_0, …, σ_{k−1}, $`.
    pub fn index(self, alphabet_len: usize) -> usize {
        match self {
            Self::LeftMarker => 0,
            Self::Input(i) => i + 1,
            Self::RightMarker => alphabet_len + 1,
        }
    }
}

/// A word over `Σ`, stored as symbol indices. Markers never appear here.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn from_indices(indices: Vec<usize>) -> Self {
        Self(indices)
    }

    /// `σ^k`
    pub fn repeat(symbol: usize, k: usize) -> Self {
        Self(alloc::vec![symbol; k])
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, symbol: usize) {
        self.0.push(symbol);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Tape contents `¢ w $`.
    pub fn tape(&self) -> impl Iterator<Item = TapeSymbol> + '_ {
        core::iter::once(TapeSymbol::LeftMarker)
            .chain(self.0.iter().map(|&i| TapeSymbol::Input(i)))
            .chain(core::iter::once(TapeSymbol::RightMarker))
    }
}

impl Alphabet {
    /// Collects every naming violation: empty alphabet, empty names or names
    /// containing commas or whitespace, marker clashes, duplicates.
    pub fn new<I, S>(symbols: I) -> Result<Self, Vec<Violation>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        let mut violations = Vec::new();
        if symbols.is_empty() {
            violations.push(Violation::EmptyAlphabet);
        }
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() || s.contains(',') || s.chars().any(char::is_whitespace) {
                violations.push(Violation::InvalidSymbolName { name: s.clone() });
            } else if s == LEFT_MARKER || s == RIGHT_MARKER {
                violations.push(Violation::ReservedSymbol { name: s.clone() });
            }
            if symbols[..i].contains(s) {
                violations.push(Violation::DuplicateSymbol { name: s.clone() });
            }
        }
        if violations.is_empty() {
            Ok(Self { symbols })
        } else {
            Err(violations)
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> &str {
        &self.symbols[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == name)
    }

    /// `|Σ| + 2`
    pub fn tape_len(&self) -> usize {
        self.symbols.len() + 2
    }

    /// Tape symbols in tape order `¢, Σ…, $`.
    pub fn tape_symbols(&self) -> impl Iterator<Item = TapeSymbol> {
        core::iter::once(TapeSymbol::LeftMarker)
            .chain((0..self.symbols.len()).map(TapeSymbol::Input))
            .chain(core::iter::once(TapeSymbol::RightMarker))
    }

    pub fn tape_name(&self, symbol: TapeSymbol) -> &str {
        match symbol {
            TapeSymbol::LeftMarker => LEFT_MARKER,
            TapeSymbol::Input(i) => &self.symbols[i],
            TapeSymbol::RightMarker => RIGHT_MARKER,
        }
    }

    pub fn tape_symbol(&self, name: &str) -> Option<TapeSymbol> {
        match name {
            LEFT_MARKER => Some(TapeSymbol::LeftMarker),
            RIGHT_MARKER => Some(TapeSymbol::RightMarker),
            _ => self.index_of(name).map(TapeSymbol::Input),
        }
    }

    pub fn word<S: AsRef<str>>(&self, names: &[S]) -> Result<Word, InputError> {
        names
            .iter()
            .map(|s| {
                self.index_of(s.as_ref())
                    .ok_or_else(|| InputError::UnknownSymbol(s.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    /// Parses comma-separated symbol names; `""` is the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word, InputError> {
        if text.trim().is_empty() {
            return Ok(Word::empty());
        }
        let names: Vec<&str> = text.split(',').map(str::trim).collect();
        self.word(&names)
    }

    pub fn format_word(&self, word: &Word) -> String {
        let names: Vec<&str> = word.symbols().iter().map(|&i| self.symbol(i)).collect();
        names.join(",")
    }

    pub fn check_word(&self, word: &Word) -> Result<(), InputError> {
        match word.symbols().iter().find(|&&i| i >= self.len()) {
            Some(&index) => Err(InputError::SymbolOutOfRange {
                index,
                size: self.len(),
            }),
            None => Ok(()),
        }
    }

    /// Every word of length exactly `len`, in lexicographic index order.
    pub fn words_of_length(&self, len: usize) -> impl Iterator<Item = Word> + '_ {
        let k = self.len();
        let total = k
            .checked_pow(len as u32)
            .expect("word enumeration overflow");
        (0..total).map(move |mut code| {
            let mut w = alloc::vec![0; len];
            for slot in w.iter_mut().rev() {
                *slot = code % k;
                code /= k;
            }
            Word(w)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn reports_every_naming_problem() {
        let errs = Alphabet::new(["a", "¢", "a", "x,y", ""]).unwrap_err();
        assert_eq!(
            errs,
            vec![
                Violation::ReservedSymbol { name: "¢".into() },
                Violation::DuplicateSymbol { name: "a".into() },
                Violation::InvalidSymbolName { name: "x,y".into() },
                Violation::InvalidSymbolName { name: "".into() },
            ]
        );
        assert_eq!(
            Alphabet::new(Vec::<String>::new()).unwrap_err(),
            vec![Violation::EmptyAlphabet]
        );
    }

    #[test]
    fn tape_order_and_words() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        let tape: Vec<_> = a.tape_symbols().map(|t| a.tape_name(t)).collect();
        assert_eq!(tape, ["¢", "a", "b", "$"]);
        assert_eq!(TapeSymbol::RightMarker.index(2), 3);
        let w = a.parse_word("b,a,b").unwrap();
        assert_eq!(w.symbols(), &[1, 0, 1]);
        assert_eq!(a.format_word(&w), "b,a,b");
        assert!(a.parse_word("").unwrap().is_empty());
        assert_eq!(
            a.parse_word("a,c"),
            Err(InputError::UnknownSymbol("c".into()))
        );
        let tape: Vec<_> = w.tape().collect();
        assert_eq!(tape.first(), Some(&TapeSymbol::LeftMarker));
        assert_eq!(tape.len(), 5);
    }

    #[test]
    fn enumerates_words() {
        let a = Alphabet::new(["0", "1", "2"]).unwrap();
        let words: Vec<Word> = a.words_of_length(2).collect();
        assert_eq!(words.len(), 9);
        assert_eq!(words[5].symbols(), &[1, 2]);
        assert_eq!(a.words_of_length(0).count(), 1);
    }
}
