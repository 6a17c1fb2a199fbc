use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite, sorted, duplicate-free set of letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    letters: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(letters: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        if letters.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet is empty".into()));
        }
        for l in &letters {
            if l.is_empty() || l.chars().any(|c| c.is_whitespace() || c == ',') {
                return Err(Error::InvalidAlphabet(format!("bad letter `{l}`")));
            }
        }
        letters.sort();
        let before = letters.len();
        letters.dedup();
        if letters.len() != before {
            return Err(Error::InvalidAlphabet("duplicate letter".into()));
        }
        Ok(Alphabet { letters })
    }

    /// Parses `ab` as the letters a, b; `a,b` or `a b` as a list of identifiers.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.contains(',') || text.contains(char::is_whitespace) {
            Alphabet::new(
                text.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty()),
            )
        } else {
            Alphabet::new(text.chars().map(String::from))
        }
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn index(&self, letter: &str) -> Option<usize> {
        self.letters.binary_search_by(|l| l.as_str().cmp(letter)).ok()
    }

    pub fn contains(&self, letter: &str) -> bool {
        self.index(letter).is_some()
    }

    fn single_chars(&self) -> bool {
        self.letters.iter().all(|l| l.chars().count() == 1)
    }

    /// All words of exactly `len` letters in lexicographic order, as index vectors.
    pub fn words_of_len(&self, len: usize) -> WordIter {
        WordIter {
            base: self.len(),
            current: Some(vec![0; len]),
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.single_chars() {
            write!(f, "{}", self.letters.concat())
        } else {
            write!(f, "{}", self.letters.join(","))
        }
    }
}

/// Odometer over index vectors of a fixed length.
pub struct WordIter {
    base: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for WordIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        let mut pos = next.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            next[pos] += 1;
            if next[pos] < self.base {
                self.current = Some(next);
                break;
            }
            next[pos] = 0;
        }
        Some(out)
    }
}

/// A finite word; may be empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<String>,
}

impl Word {
    pub fn new<I, S>(letters: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Word {
            letters: letters.into_iter().map(Into::into).collect(),
        }
    }

    pub fn empty() -> Self {
        Word { letters: vec![] }
    }

    /// Builds a word from single characters, e.g. `Word::from_chars("abab")`.
    pub fn from_chars(text: &str) -> Self {
        Word::new(text.chars().map(String::from))
    }

    pub fn from_indices(alphabet: &Alphabet, idx: &[usize]) -> Self {
        Word::new(idx.iter().map(|&i| alphabet.letters()[i].clone()))
    }

    /// Parses a word over `alphabet`. Whitespace or commas separate letters;
    /// otherwise the text is split by longest match against the alphabet.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(Word::empty());
        }
        let letters: Vec<String> = if text.contains(',') || text.contains(char::is_whitespace) {
            text.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(String::from)
                .collect()
        } else {
            let mut out = Vec::new();
            let mut rest = text;
            while !rest.is_empty() {
                let best = alphabet
                    .letters()
                    .iter()
                    .filter(|l| rest.starts_with(l.as_str()))
                    .max_by_key(|l| l.len())
                    .ok_or_else(|| {
                        Error::UnknownLetter(rest.chars().next().unwrap().to_string())
                    })?;
                out.push(best.clone());
                rest = &rest[best.len()..];
            }
            out
        };
        for l in &letters {
            if !alphabet.contains(l) {
                return Err(Error::UnknownLetter(l.clone()));
            }
        }
        Ok(Word { letters })
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The letter at 1-based position `i`.
    pub fn at(&self, i: usize) -> Option<&str> {
        if i == 0 {
            return None;
        }
        self.letters.get(i - 1).map(String::as_str)
    }

    pub fn reversed(&self) -> Self {
        Word {
            letters: self.letters.iter().rev().cloned().collect(),
        }
    }

    /// Letter indices with respect to `alphabet`.
    pub fn indices(&self, alphabet: &Alphabet) -> Result<Vec<usize>> {
        self.letters
            .iter()
            .map(|l| alphabet.index(l).ok_or_else(|| Error::UnknownLetter(l.clone())))
            .collect()
    }

    /// Checks that every letter belongs to `alphabet`.
    pub fn check(&self, alphabet: &Alphabet) -> Result<()> {
        self.indices(alphabet).map(|_| ())
    }

    /// The word `self[from..to]` using 0-based half-open bounds.
    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word {
            letters: self.letters[from..to].to_vec(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Word { letters }
    }

    /// True when `self` occurs as a contiguous factor of `other`.
    pub fn is_factor_of(&self, other: &Word) -> bool {
        self.is_empty()
            || other
                .letters
                .windows(self.len())
                .any(|w| w == self.letters.as_slice())
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.letters.starts_with(&self.letters)
    }

    pub fn is_suffix_of(&self, other: &Word) -> bool {
        other.letters.ends_with(&self.letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.iter().all(|l| l.chars().count() == 1) {
            write!(f, "{}", self.letters.concat())
        } else {
            write!(f, "{}", self.letters.join(" "))
        }
    }
}

/// A nonempty word with a distinguished 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MarkedWord {
    word: Word,
    position: usize,
}

impl MarkedWord {
    pub fn new(word: Word, position: usize) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::OutOfRange("a marked word cannot be empty".into()));
        }
        if position == 0 || position > word.len() {
            return Err(Error::OutOfRange(format!(
                "position {position} not in 1..={}",
                word.len()
            )));
        }
        Ok(MarkedWord { word, position })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn position(&self) -> usize {
        self.position
    }
}
