//! Factorization sequences of a-words: split at every a, then collect and
//! cap each proper subalphabet containing a in a fixed linear order.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::syntax::{Alphabet, Word};

pub type Subalphabet = BTreeSet<String>;

/// One snapshot of the factorization sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub step: String,
    pub factors: Vec<String>,
}

/// A factorization of `word`; `boundaries` are the 1-based factor starts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorizationState {
    pub word: Word,
    pub boundaries: Vec<usize>,
    pub trace: Vec<TraceStep>,
}

fn content(w: &[String]) -> Subalphabet {
    w.iter().cloned().collect()
}

fn show(b: &Subalphabet) -> String {
    format!("{{{}}}", b.iter().cloned().collect::<Vec<_>>().join(","))
}

/// α(w) = A, w starts with a, and the suffix after the last a has content A∖{a}.
pub fn is_a_word(w: &Word, a: &str, alphabet: &Alphabet) -> bool {
    let letters = w.letters();
    if letters.first().map(String::as_str) != Some(a) {
        return false;
    }
    if content(letters) != alphabet.letters().iter().cloned().collect() {
        return false;
    }
    let last = letters.iter().rposition(|l| l == a).expect("starts with a");
    let rest: Subalphabet = alphabet.letters().iter().filter(|l| *l != a).cloned().collect();
    content(&letters[last + 1..]) == rest
}

/// Proper subalphabets containing a, by size and then lexicographically.
pub fn subalphabet_order(alphabet: &Alphabet, a: &str) -> Result<Vec<Subalphabet>> {
    if !alphabet.contains(a) {
        return Err(Error::UnknownLetter(a.to_string()));
    }
    let others: Vec<&String> = alphabet.letters().iter().filter(|l| *l != a).collect();
    let mut out: Vec<Subalphabet> = (0u64..(1 << others.len()) - 1)
        .map(|mask| {
            let mut b: Subalphabet = (0..others.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| others[i].clone())
                .collect();
            b.insert(a.to_string());
            b
        })
        .collect();
    out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.iter().cmp(y.iter())));
    Ok(out)
}

impl FactorizationState {
    pub fn factors(&self) -> Vec<Word> {
        let n = self.word.len();
        self.boundaries
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let end = self.boundaries.get(i + 1).map_or(n, |&t| t - 1);
                self.word.slice(s - 1, end)
            })
            .collect()
    }

    pub fn factor_strings(&self) -> Vec<String> {
        self.factors().iter().map(Word::to_string).collect()
    }

    pub fn contents(&self) -> Vec<Subalphabet> {
        self.factors().iter().map(|f| content(f.letters())).collect()
    }

    fn record(mut self, step: String) -> Self {
        let factors = self.factor_strings();
        self.trace.push(TraceStep { step, factors });
        self
    }

    fn keep(mut self, drop: impl Fn(usize) -> bool) -> Self {
        let kept = (0..self.boundaries.len())
            .filter(|&j| j == 0 || !drop(j))
            .map(|j| self.boundaries[j])
            .collect();
        self.boundaries = kept;
        self
    }

    /// After collecting B, the neighbours of every factor with content B
    /// contain a letter outside B.
    pub fn neighbours_escape(&self, b: &Subalphabet) -> bool {
        let c = self.contents();
        (0..c.len()).filter(|&i| c[i] == *b).all(|i| {
            let escapes = |j: usize| !c[j].is_subset(b);
            (i == 0 || escapes(i - 1)) && (i + 1 == c.len() || escapes(i + 1))
        })
    }
}

impl fmt::Display for FactorizationState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.factor_strings().join("·"))
    }
}

/// The factorization a·u₁ ⋯ a·u_k, one factor per occurrence of a.
pub fn initial_factorization(w: &Word, a: &str, alphabet: &Alphabet) -> Result<FactorizationState> {
    w.check(alphabet)?;
    if !is_a_word(w, a, alphabet) {
        return Err(Error::Precondition(format!("`{w}` is not an {a}-word over {alphabet}")));
    }
    let boundaries = (0..w.len()).filter(|&i| w.letters()[i] == a).map(|i| i + 1).collect();
    let state = FactorizationState {
        word: w.clone(),
        boundaries,
        trace: Vec::new(),
    };
    Ok(state.record("initial".into()))
}

/// Merges every maximal run of consecutive factors with content exactly B.
pub fn collect(state: FactorizationState, b: &Subalphabet) -> FactorizationState {
    let c = state.contents();
    state
        .keep(|j| c[j - 1] == *b && c[j] == *b)
        .record(format!("collect {}", show(b)))
}

/// Merges every factor with content exactly B into its right neighbour.
pub fn cap(state: FactorizationState, b: &Subalphabet) -> FactorizationState {
    let c = state.contents();
    state.keep(|j| c[j - 1] == *b).record(format!("cap {}", show(b)))
}

fn check_order(order: &[Subalphabet], alphabet: &Alphabet, a: &str) -> Result<()> {
    let expected: BTreeSet<Subalphabet> = subalphabet_order(alphabet, a)?.into_iter().collect();
    let given: BTreeSet<Subalphabet> = order.iter().cloned().collect();
    if given != expected || order.len() != expected.len() {
        return Err(Error::Precondition(format!(
            "order must list each proper subalphabet containing {a} once"
        )));
    }
    for (i, x) in order.iter().enumerate() {
        if order[..i].iter().any(|y| x.is_subset(y)) {
            return Err(Error::Precondition(format!("{} follows a superset", show(x))));
        }
    }
    Ok(())
}

/// The full sequence under the default order.
pub fn run_sequence(w: &Word, a: &str, alphabet: &Alphabet) -> Result<FactorizationState> {
    run_sequence_with_order(w, a, alphabet, &subalphabet_order(alphabet, a)?)
}

/// The full sequence under a caller-chosen topological order of the subalphabets.
pub fn run_sequence_with_order(
    w: &Word,
    a: &str,
    alphabet: &Alphabet,
    order: &[Subalphabet],
) -> Result<FactorizationState> {
    check_order(order, alphabet, a)?;
    let mut state = initial_factorization(w, a, alphabet)?;
    for b in order {
        state = collect(state, b);
        if !state.neighbours_escape(b) {
            return Err(Error::Internal(format!("neighbour property fails after collecting {}", show(b))));
        }
        state = cap(state, b);
    }
    let full: Subalphabet = alphabet.letters().iter().cloned().collect();
    if state.contents().iter().any(|c| *c != full) {
        return Err(Error::Internal(format!("final factorization {state} has a deficient factor")));
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    const WORKED: &str = "adccdccadcaaaaddccdcccdbcdcaacabcbbd";

    fn abcd() -> Alphabet {
        Alphabet::parse("abcd").unwrap()
    }

    fn set(s: &str) -> Subalphabet {
        s.chars().map(String::from).collect()
    }

    fn dots(s: &FactorizationState) -> String {
        s.factor_strings().join("·")
    }

    #[test]
    fn a_words() {
        let w = Word::from_chars(WORKED);
        assert!(is_a_word(&w, "a", &abcd()));
        let ab = Alphabet::parse("ab").unwrap();
        assert!(!is_a_word(&Word::from_chars("ba"), "a", &ab));
        assert!(is_a_word(&Word::from_chars("ab"), "a", &ab));
        assert!(!is_a_word(&Word::from_chars("aba"), "a", &ab));
        assert!(!is_a_word(&Word::from_chars("aab"), "a", &abcd()));
    }

    #[test]
    fn orders() {
        let o = subalphabet_order(&abcd(), "a").unwrap();
        assert_eq!(o.len(), 7);
        assert_eq!(o[0], set("a"));
        assert_eq!(o[6], set("acd"));
        assert!(check_order(&o, &abcd(), "a").is_ok());
        assert!(subalphabet_order(&Alphabet::parse("a").unwrap(), "a").unwrap().is_empty());
        assert_eq!(subalphabet_order(&Alphabet::parse("ab").unwrap(), "a").unwrap(), vec![set("a")]);
        let mut bad = o.clone();
        bad.swap(0, 1);
        assert!(check_order(&bad, &abcd(), "a").is_err());
    }

    #[test]
    fn initial_splits_at_a() {
        let s = initial_factorization(&Word::from_chars(WORKED), "a", &abcd()).unwrap();
        assert_eq!(dots(&s), "adccdcc·adc·a·a·a·addccdcccdbcdc·a·ac·abcbbd");
        let ab = Alphabet::parse("ab").unwrap();
        assert_eq!(dots(&initial_factorization(&Word::from_chars("ab"), "a", &ab).unwrap()), "ab");
        assert_eq!(dots(&initial_factorization(&Word::from_chars("aab"), "a", &ab).unwrap()), "a·ab");
        assert!(initial_factorization(&Word::from_chars("ba"), "a", &ab).is_err());
    }

    #[test]
    fn collect_and_cap_steps() {
        let s = initial_factorization(&Word::from_chars(WORKED), "a", &abcd()).unwrap();
        let s = collect(s, &set("a"));
        assert_eq!(dots(&s), "adccdcc·adc·aaa·addccdcccdbcdc·a·ac·abcbbd");
        let s = cap(s, &set("a"));
        assert_eq!(dots(&s), "adccdcc·adc·aaaaddccdcccdbcdc·aac·abcbbd");
        let before = s.boundaries.clone();
        let s = collect(s, &set("ab"));
        assert_eq!(s.boundaries, before);
    }

    #[test]
    fn full_sequence() {
        let s = run_sequence(&Word::from_chars(WORKED), "a", &abcd()).unwrap();
        assert_eq!(dots(&s), "adccdccadcaaaaddccdcccdbcdc·aacabcbbd");
        assert_eq!(s.trace.len(), 15);
        for pair in s.trace.windows(2) {
            assert!(pair[1].factors.len() <= pair[0].factors.len());
        }
        let ab = Alphabet::parse("ab").unwrap();
        assert_eq!(dots(&run_sequence(&Word::from_chars("ab"), "a", &ab).unwrap()), "ab");
    }
}
