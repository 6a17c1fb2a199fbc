//! Ehrenfeucht–Fraïssé games for two-variable logic with betweenness, and
//! the threshold variant in which jumped letter counts are compared up to a
//! per-letter threshold.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::syntax::{Alphabet, MarkedWord, Word};

/// Per-letter thresholds θ(a) ≥ 1. Letters without an entry use 1.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ThresholdProfile {
    theta: BTreeMap<String, u64>,
}

impl ThresholdProfile {
    /// The all-ones profile: the plain betweenness game.
    pub fn ones() -> Self {
        ThresholdProfile::default()
    }

    pub fn new(theta: BTreeMap<String, u64>) -> Result<Self> {
        if let Some((a, _)) = theta.iter().find(|(_, &t)| t == 0) {
            return Err(Error::Precondition(format!("threshold for {a} must be positive")));
        }
        Ok(ThresholdProfile { theta })
    }

    pub fn uniform(alphabet: &Alphabet, t: u64) -> Result<Self> {
        Self::new(alphabet.letters().iter().map(|a| (a.clone(), t)).collect())
    }

    pub fn get(&self, a: &str) -> u64 {
        self.theta.get(a).copied().unwrap_or(1)
    }

    /// Copy with θ(a) increased by one.
    pub fn bumped(&self, a: &str) -> Self {
        let mut theta = self.theta.clone();
        theta.insert(a.to_string(), self.get(a) + 1);
        ThresholdProfile { theta }
    }

    /// θ′ ≥ θ pointwise on the given letters.
    pub fn dominates(&self, other: &ThresholdProfile, letters: &[String]) -> bool {
        letters.iter().all(|a| self.get(a) >= other.get(a))
    }

    pub fn entries(&self) -> &BTreeMap<String, u64> {
        &self.theta
    }
}

/// Which word a move is played in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Player 1's winning strategy: a move, and a continuation for every legal reply.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Strategy {
    pub side: Side,
    /// 1-based destination of Player 1's pebble.
    pub to: usize,
    /// Each legal reply (1-based) with the strategy that beats it. Empty when
    /// no reply exists.
    pub replies: Vec<(usize, Strategy)>,
}

struct Game {
    w: [Vec<usize>; 2],
    /// prefix[s][a][t] = occurrences of letter a among the first t letters of word s.
    prefix: [Vec<Vec<u32>>; 2],
    theta: Vec<u64>,
    memo: HashMap<(usize, usize, usize), bool>,
}

impl Game {
    fn new(w1: &Word, w2: &Word, theta: &ThresholdProfile) -> Game {
        let letters: BTreeSet<String> =
            w1.letters().iter().chain(w2.letters()).cloned().collect();
        let index: HashMap<&String, usize> =
            letters.iter().enumerate().map(|(i, a)| (a, i)).collect();
        let encode = |w: &Word| -> Vec<usize> { w.letters().iter().map(|a| index[a]).collect() };
        let w = [encode(w1), encode(w2)];
        let prefix = [0, 1].map(|s| {
            (0..letters.len())
                .map(|a| {
                    let mut pre = vec![0u32; w[s].len() + 1];
                    for (p, &l) in w[s].iter().enumerate() {
                        pre[p + 1] = pre[p] + (l == a) as u32;
                    }
                    pre
                })
                .collect()
        });
        Game {
            w,
            prefix,
            theta: letters.iter().map(|a| theta.get(a)).collect(),
            memo: HashMap::new(),
        }
    }

    /// Count of letter a strictly between 0-based positions p and q.
    fn jumped(&self, s: usize, a: usize, p: usize, q: usize) -> u32 {
        let (lo, hi) = if p < q { (p, q) } else { (q, p) };
        self.prefix[s][a][hi] - self.prefix[s][a][lo + 1]
    }

    /// Legal replies in word `1 − s` when Player 1 moves `from → to` in word `s`.
    fn replies(&self, s: usize, from: usize, to: usize, other: usize) -> Vec<usize> {
        let t = 1 - s;
        let right = from < to;
        (0..self.w[t].len())
            .filter(|&q| {
                q != other
                    && (other < q) == right
                    && self.w[t][q] == self.w[s][to]
                    && (0..self.theta.len()).all(|a| {
                        let m1 = self.jumped(s, a, from, to) as u64;
                        let m2 = self.jumped(t, a, other, q) as u64;
                        m1 == m2 || (m1 >= self.theta[a] && m2 >= self.theta[a])
                    })
            })
            .collect()
    }

    /// Player 2 survives `k` more rounds from pebbles (j1, j2).
    fn wins(&mut self, j1: usize, j2: usize, k: usize) -> bool {
        if k == 0 {
            return true;
        }
        if let Some(&v) = self.memo.get(&(j1, j2, k)) {
            return v;
        }
        let result = self.find_attack(j1, j2, k).is_none();
        self.memo.insert((j1, j2, k), result);
        result
    }

    /// A Player 1 move that wins against every reply.
    fn find_attack(&mut self, j1: usize, j2: usize, k: usize) -> Option<(usize, usize)> {
        let pebbles = [j1, j2];
        for s in 0..2 {
            for to in 0..self.w[s].len() {
                if to == pebbles[s] {
                    continue;
                }
                let replies = self.replies(s, pebbles[s], to, pebbles[1 - s]);
                let survives = replies.into_iter().any(|q| {
                    let (n1, n2) = if s == 0 { (to, q) } else { (q, to) };
                    self.wins(n1, n2, k - 1)
                });
                if !survives {
                    return Some((s, to));
                }
            }
        }
        None
    }

    fn strategy(&mut self, j1: usize, j2: usize, k: usize) -> Option<Strategy> {
        let (s, to) = self.find_attack(j1, j2, k)?;
        let pebbles = [j1, j2];
        let mut replies = Vec::new();
        for q in self.replies(s, pebbles[s], to, pebbles[1 - s]) {
            let (n1, n2) = if s == 0 { (to, q) } else { (q, to) };
            let sub = self.strategy(n1, n2, k - 1).expect("reply loses");
            replies.push((q + 1, sub));
        }
        Some(Strategy {
            side: if s == 0 { Side::Left } else { Side::Right },
            to: to + 1,
            replies,
        })
    }
}

/// Legal replies j₂′ (1-based) to Player 1 moving `j1 → j1_to` in `w1`
/// while the other pebble sits on `j2` in `w2`.
pub fn legal_response(
    w1: &Word,
    j1: usize,
    j1_to: usize,
    w2: &Word,
    j2: usize,
    theta: &ThresholdProfile,
) -> Result<BTreeSet<usize>> {
    for (w, p) in [(w1, j1), (w1, j1_to), (w2, j2)] {
        if p == 0 || p > w.len() {
            return Err(Error::OutOfRange(format!("position {p} in a word of length {}", w.len())));
        }
    }
    if j1 == j1_to {
        return Err(Error::Precondition("the pebble must move".into()));
    }
    let g = Game::new(w1, w2, theta);
    Ok(g.replies(0, j1 - 1, j1_to - 1, j2 - 1).into_iter().map(|q| q + 1).collect())
}

/// Player 2 wins the k-round θ-game on two marked words.
pub fn decide_equiv(m1: &MarkedWord, m2: &MarkedWord, k: usize, theta: &ThresholdProfile) -> bool {
    if m1.word().at(m1.position()) != m2.word().at(m2.position()) {
        return false;
    }
    let mut g = Game::new(m1.word(), m2.word(), theta);
    g.wins(m1.position() - 1, m2.position() - 1, k)
}

/// Player 2 wins the k-round θ-game on two unmarked words. Zero rounds is a
/// win for Player 2.
pub fn decide_equiv_words(w1: &Word, w2: &Word, k: usize, theta: &ThresholdProfile) -> bool {
    unmarked_attack(w1, w2, k, theta).is_none()
}

/// Player 1's winning strategy in the marked game, if one exists.
pub fn winning_strategy(
    m1: &MarkedWord,
    m2: &MarkedWord,
    k: usize,
    theta: &ThresholdProfile,
) -> Option<Strategy> {
    let mut g = Game::new(m1.word(), m2.word(), theta);
    g.strategy(m1.position() - 1, m2.position() - 1, k)
}

/// Player 1's winning strategy in the unmarked game: the initial placement
/// and the strategy against each same-letter reply.
pub fn winning_strategy_words(
    w1: &Word,
    w2: &Word,
    k: usize,
    theta: &ThresholdProfile,
) -> Option<Strategy> {
    let (s, to) = unmarked_attack(w1, w2, k, theta)?;
    let mut g = Game::new(w1, w2, theta);
    let words = [&g.w[0].clone(), &g.w[1].clone()];
    let mut replies = Vec::new();
    for q in (0..words[1 - s].len()).filter(|&q| words[1 - s][q] == words[s][to]) {
        let (n1, n2) = if s == 0 { (to, q) } else { (q, to) };
        replies.push((q + 1, g.strategy(n1, n2, k - 1).expect("reply loses")));
    }
    Some(Strategy {
        side: if s == 0 { Side::Left } else { Side::Right },
        to: to + 1,
        replies,
    })
}

fn unmarked_attack(
    w1: &Word,
    w2: &Word,
    k: usize,
    theta: &ThresholdProfile,
) -> Option<(usize, usize)> {
    if k == 0 {
        return None;
    }
    let mut g = Game::new(w1, w2, theta);
    let words = [g.w[0].clone(), g.w[1].clone()];
    for s in 0..2 {
        for to in 0..words[s].len() {
            let survives = (0..words[1 - s].len())
                .filter(|&q| words[1 - s][q] == words[s][to])
                .any(|q| {
                    let (n1, n2) = if s == 0 { (to, q) } else { (q, to) };
                    g.wins(n1, n2, k - 1)
                });
            if !survives {
                return Some((s, to));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::from_chars(s)
    }

    fn m(s: &str, i: usize) -> MarkedWord {
        MarkedWord::new(w(s), i).unwrap()
    }

    #[test]
    fn legal_responses() {
        let ones = ThresholdProfile::ones();
        let r = legal_response(&w("aba"), 1, 3, &w("aba"), 1, &ones).unwrap();
        assert_eq!(r.into_iter().collect::<Vec<_>>(), vec![3]);
        let mut theta = BTreeMap::new();
        theta.insert("a".to_string(), 2);
        let theta = ThresholdProfile::new(theta).unwrap();
        let r = legal_response(&w("aab"), 1, 3, &w("aaab"), 1, &theta).unwrap();
        assert!(r.is_empty());
        let r = legal_response(&w("ab"), 1, 2, &w("aab"), 1, &ones).unwrap();
        assert!(r.is_empty());
        assert!(legal_response(&w("ab"), 1, 1, &w("ab"), 1, &ones).is_err());
    }

    #[test]
    fn marked_games() {
        let ones = ThresholdProfile::ones();
        for k in 0..4 {
            assert!(decide_equiv(&m("ab", 1), &m("ab", 1), k, &ones));
        }
        assert!(!decide_equiv(&m("aa", 1), &m("aaa", 1), 2, &ones));
        assert!(!decide_equiv(&m("a", 1), &m("b", 1), 0, &ones));
        assert!(!decide_equiv(&m("ab", 1), &m("ba", 2), 1, &ones));
    }

    #[test]
    fn unmarked_games() {
        let ones = ThresholdProfile::ones();
        assert!(decide_equiv_words(&w("ab"), &w("ba"), 1, &ones));
        assert!(!decide_equiv_words(&w("ab"), &w("ba"), 2, &ones));
        assert!(decide_equiv_words(&w("abba"), &w("abba"), 3, &ones));
        assert!(decide_equiv_words(&w("ab"), &w("b"), 0, &ones));
        assert!(!decide_equiv_words(&w(""), &w("a"), 1, &ones));
        assert!(decide_equiv_words(&w(""), &w(""), 2, &ones));
    }

    #[test]
    fn thresholds_separate_counts() {
        let ones = ThresholdProfile::ones();
        let two = ones.bumped("a");
        assert!(decide_equiv(&m("baab", 1), &m("baaab", 1), 1, &ones));
        assert!(!decide_equiv(&m("baab", 1), &m("baaab", 1), 1, &two));
        assert!(!decide_equiv(&m("bab", 1), &m("baab", 1), 1, &ones));
        assert!(!decide_equiv_words(&w("baab"), &w("baaab"), 2, &ones));
    }

    #[test]
    fn strategy_extraction() {
        let ones = ThresholdProfile::ones();
        let s = winning_strategy_words(&w("ab"), &w("ba"), 2, &ones).unwrap();
        assert_eq!(s.replies.len(), 1);
        assert!(s.replies[0].1.replies.is_empty());
        assert!(winning_strategy_words(&w("ab"), &w("ba"), 1, &ones).is_none());
        let s = winning_strategy(&m("aa", 1), &m("aaa", 1), 2, &ones).unwrap();
        assert!(s.to >= 1);
    }
}
