//! Regular expressions, minimal complete DFAs and their JSON form.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::syntax::{Alphabet, Word};

/// A complete deterministic automaton; letters are alphabet indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    delta: Vec<Vec<usize>>,
    initial: usize,
    finals: Vec<bool>,
}

impl Dfa {
    pub fn new(alphabet: Alphabet, delta: Vec<Vec<usize>>, initial: usize, finals: Vec<bool>) -> Result<Self> {
        let n = delta.len();
        if n == 0 || initial >= n || finals.len() != n {
            return Err(Error::Precondition("malformed automaton".into()));
        }
        for row in &delta {
            if row.len() != alphabet.len() || row.iter().any(|&t| t >= n) {
                return Err(Error::Precondition("transition function is not total".into()));
            }
        }
        Ok(Dfa {
            alphabet,
            delta,
            initial,
            finals,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn states(&self) -> usize {
        self.delta.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals[q]
    }

    pub fn step(&self, q: usize, letter: usize) -> usize {
        self.delta[q][letter]
    }

    pub fn run(&self, word: &[usize]) -> usize {
        word.iter().fold(self.initial, |q, &a| self.delta[q][a])
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        self.finals[self.run(word)]
    }

    pub fn accepts_word(&self, word: &Word) -> Result<bool> {
        Ok(self.accepts(&word.indices(&self.alphabet)?))
    }

    /// The equivalent minimal automaton, states numbered in breadth-first order.
    pub fn minimize(&self) -> Dfa {
        let reach = self.reachable();
        let mut class: Vec<usize> = (0..self.states()).map(|q| usize::from(self.finals[q])).collect();
        let mut count = 0;
        loop {
            let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next = vec![usize::MAX; self.states()];
            for &q in &reach {
                let mut sig = vec![class[q]];
                sig.extend(self.delta[q].iter().map(|&t| class[t]));
                let fresh = ids.len();
                next[q] = *ids.entry(sig).or_insert(fresh);
            }
            let stable = ids.len() == count;
            count = ids.len();
            class = next;
            if stable {
                break;
            }
        }
        let mut order = vec![usize::MAX; count];
        let mut reps = Vec::new();
        let mut queue = VecDeque::from([self.initial]);
        order[class[self.initial]] = 0;
        reps.push(self.initial);
        while let Some(q) = queue.pop_front() {
            for &t in &self.delta[q] {
                if order[class[t]] == usize::MAX {
                    order[class[t]] = reps.len();
                    reps.push(t);
                    queue.push_back(t);
                }
            }
        }
        let delta = reps
            .iter()
            .map(|&q| self.delta[q].iter().map(|&t| order[class[t]]).collect())
            .collect();
        let finals = reps.iter().map(|&q| self.finals[q]).collect();
        Dfa {
            alphabet: self.alphabet.clone(),
            delta,
            initial: 0,
            finals,
        }
    }

    fn reachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.states()];
        let mut out = vec![self.initial];
        seen[self.initial] = true;
        let mut i = 0;
        while i < out.len() {
            for &t in &self.delta[out[i]] {
                if !seen[t] {
                    seen[t] = true;
                    out.push(t);
                }
            }
            i += 1;
        }
        out
    }

    pub fn to_json(&self) -> DfaJson {
        let name = |q: usize| q.to_string();
        DfaJson {
            states: (0..self.states()).map(name).collect(),
            alphabet: self.alphabet.letters().to_vec(),
            delta: (0..self.states())
                .map(|q| {
                    let row = self
                        .alphabet
                        .letters()
                        .iter()
                        .zip(&self.delta[q])
                        .map(|(a, &t)| (a.clone(), name(t)))
                        .collect();
                    (name(q), row)
                })
                .collect(),
            initial: name(self.initial),
            finals: (0..self.states()).filter(|&q| self.finals[q]).map(name).collect(),
        }
    }

    /// Reads the JSON form; missing transitions go to a fresh rejecting sink.
    pub fn from_json(json: &DfaJson) -> Result<Dfa> {
        let alphabet = Alphabet::new(json.alphabet.iter().cloned())?;
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (i, s) in json.states.iter().enumerate() {
            if index.insert(s.as_str(), i).is_some() {
                return Err(Error::Precondition(format!("duplicate state `{s}`")));
            }
        }
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::Precondition(format!("unknown state `{s}`")))
        };
        let n = json.states.len();
        let sink = n;
        let mut delta = vec![vec![sink; alphabet.len()]; n + 1];
        for (from, row) in &json.delta {
            let q = lookup(from)?;
            for (letter, to) in row {
                let a = alphabet
                    .index(letter)
                    .ok_or_else(|| Error::UnknownLetter(letter.clone()))?;
                delta[q][a] = lookup(to)?;
            }
        }
        let mut finals = vec![false; n + 1];
        for f in &json.finals {
            finals[lookup(f)?] = true;
        }
        let initial = lookup(&json.initial)?;
        Dfa::new(alphabet, delta, initial, finals)
    }
}

/// `{states, alphabet, delta: {state: {letter: state}}, initial, finals}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfaJson {
    pub states: Vec<String>,
    pub alphabet: Vec<String>,
    pub delta: BTreeMap<String, BTreeMap<String, String>>,
    pub initial: String,
    pub finals: Vec<String>,
}

#[derive(Debug, Clone)]
enum Regex {
    Empty,
    Epsilon,
    Letter(usize),
    Concat(Box<Regex>, Box<Regex>),
    Union(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
}

struct RegexParser<'a> {
    chars: Vec<char>,
    pos: usize,
    alphabet: &'a Alphabet,
}

impl RegexParser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: 1,
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn union(&mut self) -> Result<Regex> {
        let mut left = self.concat()?;
        while self.peek() == Some('+') {
            self.pos += 1;
            let right = self.concat()?;
            left = Regex::Union(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn concat(&mut self) -> Result<Regex> {
        let mut parts = Vec::new();
        while let Some(c) = self.peek() {
            if c == '+' || c == ')' {
                break;
            }
            parts.push(self.postfix()?);
        }
        if parts.is_empty() {
            return Err(self.error("expected an expression"));
        }
        Ok(parts
            .into_iter()
            .reduce(|a, b| Regex::Concat(Box::new(a), Box::new(b)))
            .expect("nonempty"))
    }

    fn postfix(&mut self) -> Result<Regex> {
        let mut base = self.atom()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    base = Regex::Star(Box::new(base));
                }
                Some('⁺') => {
                    self.pos += 1;
                    base = plus(base);
                }
                Some('^') if self.chars.get(self.pos + 1) == Some(&'+') => {
                    self.pos += 2;
                    base = plus(base);
                }
                _ => return Ok(base),
            }
        }
    }

    fn atom(&mut self) -> Result<Regex> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                if self.peek() == Some(')') {
                    self.pos += 1;
                    return Ok(Regex::Epsilon);
                }
                let inner = self.union()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('ε') => {
                self.pos += 1;
                Ok(Regex::Epsilon)
            }
            Some('∅') => {
                self.pos += 1;
                Ok(Regex::Empty)
            }
            Some(_) => {
                let rest: String = self.chars[self.pos..].iter().collect();
                let best = self
                    .alphabet
                    .letters()
                    .iter()
                    .enumerate()
                    .filter(|(_, l)| rest.starts_with(l.as_str()))
                    .max_by_key(|(_, l)| l.len());
                match best {
                    Some((i, l)) => {
                        self.pos += l.chars().count();
                        Ok(Regex::Letter(i))
                    }
                    None => Err(self.error(format!("unknown letter at `{rest}`"))),
                }
            }
            None => Err(self.error("unexpected end of pattern")),
        }
    }
}

fn plus(r: Regex) -> Regex {
    Regex::Concat(Box::new(r.clone()), Box::new(Regex::Star(Box::new(r))))
}

/// Thompson automaton: `eps[q]` lists ε-successors, `moves[q]` labelled ones.
#[derive(Default)]
struct Nfa {
    eps: Vec<Vec<usize>>,
    moves: Vec<Vec<(usize, usize)>>,
}

impl Nfa {
    fn state(&mut self) -> usize {
        self.eps.push(Vec::new());
        self.moves.push(Vec::new());
        self.eps.len() - 1
    }

    /// Returns (entry, exit) of a fragment for `r`.
    fn build(&mut self, r: &Regex) -> (usize, usize) {
        let (s, t) = (self.state(), self.state());
        match r {
            Regex::Empty => {}
            Regex::Epsilon => self.eps[s].push(t),
            Regex::Letter(a) => self.moves[s].push((*a, t)),
            Regex::Concat(x, y) => {
                let (xs, xt) = self.build(x);
                let (ys, yt) = self.build(y);
                self.eps[s].push(xs);
                self.eps[xt].push(ys);
                self.eps[yt].push(t);
            }
            Regex::Union(x, y) => {
                for part in [x, y] {
                    let (ps, pt) = self.build(part);
                    self.eps[s].push(ps);
                    self.eps[pt].push(t);
                }
            }
            Regex::Star(x) => {
                let (xs, xt) = self.build(x);
                self.eps[s].extend([xs, t]);
                self.eps[xt].extend([xs, t]);
            }
        }
        (s, t)
    }

    fn closure(&self, set: BTreeSet<usize>) -> BTreeSet<usize> {
        let mut out = set.clone();
        let mut stack: Vec<usize> = set.into_iter().collect();
        while let Some(q) = stack.pop() {
            for &t in &self.eps[q] {
                if out.insert(t) {
                    stack.push(t);
                }
            }
        }
        out
    }
}

/// Minimal complete DFA of a pattern built from letters, juxtaposition,
/// `+` (union), postfix `*`, postfix `⁺` or `^+`, parentheses, `ε` and `∅`.
pub fn regex_to_min_dfa(pattern: &str, alphabet: &Alphabet) -> Result<Dfa> {
    let mut parser = RegexParser {
        chars: pattern.chars().collect(),
        pos: 0,
        alphabet,
    };
    let regex = parser.union()?;
    if parser.peek().is_some() {
        return Err(parser.error("unexpected `)`"));
    }
    let mut nfa = Nfa::default();
    let (start, accept) = nfa.build(&regex);
    let first = nfa.closure(BTreeSet::from([start]));
    let mut ids: HashMap<BTreeSet<usize>, usize> = HashMap::from([(first.clone(), 0)]);
    let mut sets = vec![first];
    let mut delta = Vec::new();
    let mut i = 0;
    while i < sets.len() {
        let mut row = Vec::with_capacity(alphabet.len());
        for a in 0..alphabet.len() {
            let moved: BTreeSet<usize> = sets[i]
                .iter()
                .flat_map(|&q| nfa.moves[q].iter().filter(|(b, _)| *b == a).map(|&(_, t)| t))
                .collect();
            let target = nfa.closure(moved);
            let fresh = sets.len();
            let id = *ids.entry(target.clone()).or_insert_with(|| {
                sets.push(target);
                fresh
            });
            row.push(id);
        }
        delta.push(row);
        i += 1;
    }
    let finals = sets.iter().map(|s| s.contains(&accept)).collect();
    Ok(Dfa::new(alphabet.clone(), delta, 0, finals)?.minimize())
}
