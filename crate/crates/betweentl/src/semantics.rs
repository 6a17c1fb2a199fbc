//! Reference semantics over finite words: counting in open intervals,
//! evaluation of temporal and two-variable formulas, and model enumeration.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::syntax::{Alphabet, Fo2, Fo2Kind, Guard, MarkedWord, Subject, Tl, TlKind, Var, Word};

fn check_interval(w: &Word, i: usize, j: usize) -> Result<()> {
    if i == 0 || i >= j || j > w.len() {
        return Err(Error::OutOfRange(format!(
            "interval ({i},{j}) invalid for a word of length {}",
            w.len()
        )));
    }
    Ok(())
}

/// Number of positions k with i < k < j carrying a letter of `b`.
pub fn count_letters(w: &Word, i: usize, j: usize, b: &BTreeSet<String>) -> Result<usize> {
    check_interval(w, i, j)?;
    Ok((i + 1..j).filter(|&k| b.contains(w.at(k).unwrap())).count())
}

/// Number of start positions k with i < k and k + |u| − 1 < j at which u occurs.
pub fn count_factors(w: &Word, i: usize, j: usize, u: &[String]) -> Result<usize> {
    check_interval(w, i, j)?;
    if u.is_empty() {
        return Err(Error::Precondition("factor must be nonempty".into()));
    }
    let letters = w.letters();
    Ok((i + 1..j)
        .filter(|&k| k + u.len() - 1 < j && letters[k - 1..k - 1 + u.len()] == *u)
        .count())
}

/// Evaluates a guard on the open interval (i, j).
pub fn eval_guard(g: &Guard, w: &Word, i: usize, j: usize) -> Result<bool> {
    check_interval(w, i, j)?;
    Ok(match g {
        Guard::Atom(c) => {
            let count = match &c.subject {
                Subject::Letters(b) => count_letters(w, i, j, b)?,
                Subject::Factor(u) => count_factors(w, i, j, u)?,
            };
            c.cmp.holds(count as u64, c.bound)
        }
        Guard::Not(a) => !eval_guard(a, w, i, j)?,
        Guard::And(a, b) => eval_guard(a, w, i, j)? && eval_guard(b, w, i, j)?,
        Guard::Or(a, b) => eval_guard(a, w, i, j)? || eval_guard(b, w, i, j)?,
    })
}

#[derive(Debug, Clone)]
enum CountSubject {
    Letters(Vec<bool>),
    /// `None` entries are letters outside the alphabet: the factor never occurs.
    Factor(Vec<Option<usize>>),
}

#[derive(Debug, Clone)]
enum GuardOp {
    Atom(usize, crate::syntax::Cmp, u64),
    Not(Box<GuardOp>),
    And(Box<GuardOp>, Box<GuardOp>),
    Or(Box<GuardOp>, Box<GuardOp>),
}

#[derive(Debug, Clone)]
enum Op {
    True,
    False,
    Letter(Option<usize>),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Next(usize, usize),
    Prev(usize, usize),
    Future(Option<GuardOp>, usize),
    Past(Option<GuardOp>, usize),
    Until(usize, usize),
    Since(usize, usize),
}

/// A temporal formula compiled against an alphabet for repeated evaluation.
/// Every node is evaluated once per position, so a word costs
/// O(|φ|·|w|²) in the worst case (guards) and O(|φ|·|w|) otherwise.
#[derive(Debug, Clone)]
pub struct TlProgram {
    ops: Vec<Op>,
    subjects: Vec<CountSubject>,
}

impl TlProgram {
    pub fn compile(phi: &Tl, alphabet: &Alphabet) -> TlProgram {
        let order = phi.topological();
        let mut index: HashMap<u64, usize> = HashMap::new();
        let mut subjects: Vec<CountSubject> = Vec::new();
        let mut subject_index: HashMap<Subject, usize> = HashMap::new();
        let mut ops = Vec::with_capacity(order.len());
        for node in &order {
            let ix = |t: &Tl| index[&t.id()];
            let mut guard = |g: &Guard| -> GuardOp {
                compile_guard(g, alphabet, &mut subjects, &mut subject_index)
            };
            let op = match node.kind() {
                TlKind::True => Op::True,
                TlKind::False => Op::False,
                TlKind::Letter(a) => Op::Letter(alphabet.index(a)),
                TlKind::Not(a) => Op::Not(ix(a)),
                TlKind::And(a, b) => Op::And(ix(a), ix(b)),
                TlKind::Or(a, b) => Op::Or(ix(a), ix(b)),
                TlKind::Next(k, a) => Op::Next(*k as usize, ix(a)),
                TlKind::Prev(k, a) => Op::Prev(*k as usize, ix(a)),
                TlKind::Future(g, a) => Op::Future(g.as_ref().map(&mut guard), ix(a)),
                TlKind::Past(g, a) => Op::Past(g.as_ref().map(&mut guard), ix(a)),
                TlKind::Until(a, b) => Op::Until(ix(a), ix(b)),
                TlKind::Since(a, b) => Op::Since(ix(a), ix(b)),
            };
            index.insert(node.id(), ops.len());
            ops.push(op);
        }
        TlProgram { ops, subjects }
    }

    /// Truth values of the formula at every position (0-based) of `word`.
    pub fn eval_positions(&self, word: &[usize]) -> Vec<bool> {
        let n = word.len();
        if n == 0 {
            return vec![];
        }
        let counts = Counts::new(&self.subjects, word);
        let mut val = vec![false; self.ops.len() * n];
        for (k, op) in self.ops.iter().enumerate() {
            let (done, rest) = val.split_at_mut(k * n);
            let out = &mut rest[..n];
            let get = |c: usize| &done[c * n..c * n + n];
            match op {
                Op::True => out.iter_mut().for_each(|v| *v = true),
                Op::False => {}
                Op::Letter(a) => {
                    if let Some(a) = a {
                        for (p, v) in out.iter_mut().enumerate() {
                            *v = word[p] == *a;
                        }
                    }
                }
                Op::Not(a) => {
                    let a = get(*a);
                    for p in 0..n {
                        out[p] = !a[p];
                    }
                }
                Op::And(a, b) => {
                    let (a, b) = (get(*a), get(*b));
                    for p in 0..n {
                        out[p] = a[p] && b[p];
                    }
                }
                Op::Or(a, b) => {
                    let (a, b) = (get(*a), get(*b));
                    for p in 0..n {
                        out[p] = a[p] || b[p];
                    }
                }
                Op::Next(s, a) => {
                    let a = get(*a);
                    for p in 0..n {
                        out[p] = p + s < n && a[p + s];
                    }
                }
                Op::Prev(s, a) => {
                    let a = get(*a);
                    for p in 0..n {
                        out[p] = p >= *s && a[p - s];
                    }
                }
                Op::Future(None, a) => {
                    let a = get(*a);
                    let mut acc = false;
                    for p in (0..n).rev() {
                        out[p] = acc;
                        acc = acc || a[p];
                    }
                }
                Op::Past(None, a) => {
                    let a = get(*a);
                    let mut acc = false;
                    for p in 0..n {
                        out[p] = acc;
                        acc = acc || a[p];
                    }
                }
                Op::Future(Some(g), a) => {
                    let a = get(*a);
                    for i in 0..n {
                        out[i] = (i + 1..n).any(|j| a[j] && counts.guard(g, i, j));
                    }
                }
                Op::Past(Some(g), a) => {
                    let a = get(*a);
                    for i in 0..n {
                        out[i] = (0..i).any(|j| a[j] && counts.guard(g, j, i));
                    }
                }
                Op::Until(a, b) => {
                    let (a, b) = (get(*a), get(*b));
                    let mut acc = false;
                    for p in (0..n).rev() {
                        out[p] = acc;
                        acc = b[p] || (a[p] && acc);
                    }
                }
                Op::Since(a, b) => {
                    let (a, b) = (get(*a), get(*b));
                    let mut acc = false;
                    for p in 0..n {
                        out[p] = acc;
                        acc = b[p] || (a[p] && acc);
                    }
                }
            }
        }
        let root = self.ops.len() - 1;
        val[root * n..root * n + n].to_vec()
    }

    /// Value on the empty word: existential obligations are false.
    pub fn eval_empty(&self) -> bool {
        let mut val = vec![false; self.ops.len()];
        for (k, op) in self.ops.iter().enumerate() {
            val[k] = match op {
                Op::True => true,
                Op::Not(a) => !val[*a],
                Op::And(a, b) => val[*a] && val[*b],
                Op::Or(a, b) => val[*a] || val[*b],
                _ => false,
            };
        }
        val[self.ops.len() - 1]
    }

    /// Sentence semantics: position 1, or the empty-word convention.
    pub fn eval_sentence(&self, word: &[usize]) -> bool {
        if word.is_empty() {
            self.eval_empty()
        } else {
            self.eval_positions(word)[0]
        }
    }
}

fn compile_guard(
    g: &Guard,
    alphabet: &Alphabet,
    subjects: &mut Vec<CountSubject>,
    index: &mut HashMap<Subject, usize>,
) -> GuardOp {
    match g {
        Guard::Atom(c) => {
            let next = subjects.len();
            let ix = *index.entry(c.subject.clone()).or_insert(next);
            if ix == next {
                subjects.push(match &c.subject {
                    Subject::Letters(b) => CountSubject::Letters(
                        alphabet.letters().iter().map(|l| b.contains(l)).collect(),
                    ),
                    Subject::Factor(u) => {
                        CountSubject::Factor(u.iter().map(|l| alphabet.index(l)).collect())
                    }
                });
            }
            GuardOp::Atom(ix, c.cmp, c.bound)
        }
        Guard::Not(a) => GuardOp::Not(Box::new(compile_guard(a, alphabet, subjects, index))),
        Guard::And(a, b) => GuardOp::And(
            Box::new(compile_guard(a, alphabet, subjects, index)),
            Box::new(compile_guard(b, alphabet, subjects, index)),
        ),
        Guard::Or(a, b) => GuardOp::Or(
            Box::new(compile_guard(a, alphabet, subjects, index)),
            Box::new(compile_guard(b, alphabet, subjects, index)),
        ),
    }
}

/// Prefix sums for every counting subject on one word.
struct Counts {
    /// For letters: prefix[t] = hits among positions < t.
    /// For factors: prefix[t] = occurrences starting at positions < t.
    prefix: Vec<Vec<u32>>,
    lens: Vec<usize>,
}

impl Counts {
    fn new(subjects: &[CountSubject], word: &[usize]) -> Counts {
        let n = word.len();
        let mut prefix = Vec::with_capacity(subjects.len());
        let mut lens = Vec::with_capacity(subjects.len());
        for s in subjects {
            let mut pre = vec![0u32; n + 1];
            match s {
                CountSubject::Letters(mask) => {
                    for p in 0..n {
                        pre[p + 1] = pre[p] + mask[word[p]] as u32;
                    }
                    lens.push(1);
                }
                CountSubject::Factor(u) => {
                    for p in 0..n {
                        let hit = p + u.len() <= n
                            && u.iter().enumerate().all(|(k, l)| *l == Some(word[p + k]));
                        pre[p + 1] = pre[p] + hit as u32;
                    }
                    lens.push(u.len());
                }
            }
            prefix.push(pre);
        }
        Counts { prefix, lens }
    }

    /// Count strictly between 0-based positions i < j.
    fn count(&self, s: usize, i: usize, j: usize) -> u64 {
        let len = self.lens[s];
        // starts p with i < p and p + len − 1 < j
        if j < len + i + 1 {
            return 0;
        }
        let last = j - len; // inclusive
        (self.prefix[s][last + 1] - self.prefix[s][i + 1]) as u64
    }

    fn guard(&self, g: &GuardOp, i: usize, j: usize) -> bool {
        match g {
            GuardOp::Atom(s, cmp, bound) => cmp.holds(self.count(*s, i, j), *bound),
            GuardOp::Not(a) => !self.guard(a, i, j),
            GuardOp::And(a, b) => self.guard(a, i, j) && self.guard(b, i, j),
            GuardOp::Or(a, b) => self.guard(a, i, j) || self.guard(b, i, j),
        }
    }
}

/// Alphabet covering the letters of a word and of a formula.
fn local_alphabet(word: &Word, extra: impl IntoIterator<Item = String>) -> Alphabet {
    let mut letters: BTreeSet<String> = word.letters().iter().cloned().collect();
    letters.extend(extra);
    if letters.is_empty() {
        letters.insert("_".into());
    }
    Alphabet::new(letters).expect("nonempty letter set")
}

/// `(w, i) ⊨ φ`.
pub fn eval_tl(phi: &Tl, m: &MarkedWord) -> bool {
    let alphabet = local_alphabet(m.word(), phi.letters());
    let prog = TlProgram::compile(phi, &alphabet);
    let idx = m.word().indices(&alphabet).expect("letters registered");
    prog.eval_positions(&idx)[m.position() - 1]
}

/// `w ⊨ φ`, i.e. `(w, 1) ⊨ φ`, with the empty-word convention.
pub fn eval_tl_sentence(phi: &Tl, w: &Word) -> bool {
    let alphabet = local_alphabet(w, phi.letters());
    let prog = TlProgram::compile(phi, &alphabet);
    let idx = w.indices(&alphabet).expect("letters registered");
    prog.eval_sentence(&idx)
}

/// A partial assignment of positions (1-based) to x and y.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Assignment {
    pub x: Option<usize>,
    pub y: Option<usize>,
}

impl Assignment {
    pub fn new(x: Option<usize>, y: Option<usize>) -> Self {
        Assignment { x, y }
    }
}

/// Evaluator for two-variable formulas on one word. Each node is tabulated
/// over all pairs of positions; index 0 stands for an unassigned variable.
struct Fo2Table<'a> {
    word: &'a Word,
    n: usize,
    /// Keyed by node address; the node is kept alive so the address stays unique.
    memo: HashMap<usize, (Fo2, std::rc::Rc<Vec<bool>>)>,
}

impl<'a> Fo2Table<'a> {
    fn new(word: &'a Word) -> Self {
        Fo2Table {
            word,
            n: word.len(),
            memo: HashMap::new(),
        }
    }

    fn dim(&self) -> usize {
        self.n + 1
    }

    fn between_count(&self, a: usize, b: usize, test: impl Fn(usize) -> bool) -> usize {
        if a == 0 || b == 0 || a >= b {
            return 0;
        }
        (a + 1..b).filter(|&k| test(k)).count()
    }

    fn table(&mut self, f: &Fo2) -> std::rc::Rc<Vec<bool>> {
        if let Some((_, t)) = self.memo.get(&f.ptr()) {
            return t.clone();
        }
        let d = self.dim();
        let mut out = vec![false; d * d];
        let pick = |v: &Var, x: usize, y: usize| match v {
            Var::X => x,
            Var::Y => y,
        };
        let letters = self.word.letters();
        let factor_at = |u: &[String], k: usize| {
            k >= 1 && k - 1 + u.len() <= letters.len() && letters[k - 1..k - 1 + u.len()] == *u
        };
        match f.kind() {
            Fo2Kind::Not(a) => {
                let a = self.table(a);
                for k in 0..d * d {
                    out[k] = !a[k];
                }
            }
            Fo2Kind::And(a, b) => {
                let (a, b) = (self.table(a), self.table(b));
                for k in 0..d * d {
                    out[k] = a[k] && b[k];
                }
            }
            Fo2Kind::Or(a, b) => {
                let (a, b) = (self.table(a), self.table(b));
                for k in 0..d * d {
                    out[k] = a[k] || b[k];
                }
            }
            Fo2Kind::Exists(v, a) | Fo2Kind::Forall(v, a) => {
                let exists = matches!(f.kind(), Fo2Kind::Exists(..));
                let a = self.table(a);
                for other in 0..d {
                    let value = (1..d).fold(!exists, |acc, p| {
                        let (x, y) = match v {
                            Var::X => (p, other),
                            Var::Y => (other, p),
                        };
                        if exists {
                            acc || a[x * d + y]
                        } else {
                            acc && a[x * d + y]
                        }
                    });
                    for p in 0..d {
                        let (x, y) = match v {
                            Var::X => (p, other),
                            Var::Y => (other, p),
                        };
                        out[x * d + y] = value;
                    }
                }
            }
            kind => {
                for x in 0..d {
                    for y in 0..d {
                        let val = match kind {
                            Fo2Kind::True => true,
                            Fo2Kind::False => false,
                            Fo2Kind::Letter(a, v) => {
                                let p = pick(v, x, y);
                                p > 0 && letters[p - 1] == *a
                            }
                            Fo2Kind::Less(a, b) | Fo2Kind::LessEq(a, b) | Fo2Kind::Suc(a, b) => {
                                let (p, q) = (pick(a, x, y), pick(b, x, y));
                                p > 0
                                    && q > 0
                                    && match kind {
                                        Fo2Kind::Less(..) => p < q,
                                        Fo2Kind::LessEq(..) => p <= q,
                                        _ => q == p + 1,
                                    }
                            }
                            Fo2Kind::Between(c, a, b) => {
                                self.between_count(pick(a, x, y), pick(b, x, y), |k| {
                                    letters[k - 1] == *c
                                }) > 0
                            }
                            Fo2Kind::Threshold(c, t, a, b) => {
                                self.between_count(pick(a, x, y), pick(b, x, y), |k| {
                                    letters[k - 1] == *c
                                }) as u64
                                    >= *t
                            }
                            Fo2Kind::BetweenFactor(u, a, b)
                            | Fo2Kind::FactorThreshold(u, _, a, b) => {
                                let (p, q) = (pick(a, x, y), pick(b, x, y));
                                let count = self.between_count(p, q, |k| {
                                    k + u.len() - 1 < q && factor_at(u, k)
                                }) as u64;
                                match kind {
                                    Fo2Kind::FactorThreshold(_, t, ..) => count >= *t,
                                    _ => count > 0,
                                }
                            }
                            _ => unreachable!(),
                        };
                        out[x * d + y] = val;
                    }
                }
            }
        }
        let out = std::rc::Rc::new(out);
        self.memo.insert(f.ptr(), (f.clone(), out.clone()));
        out
    }
}

/// Evaluates an FO² formula under a partial assignment.
pub fn eval_fo2(phi: &Fo2, w: &Word, sigma: Assignment) -> Result<bool> {
    for v in phi.free_vars() {
        let bound = match v {
            Var::X => sigma.x,
            Var::Y => sigma.y,
        };
        match bound {
            None => return Err(Error::UnboundVariable(v.name())),
            Some(p) if p == 0 || p > w.len() => {
                return Err(Error::OutOfRange(format!("{} = {p}", v.name())))
            }
            _ => {}
        }
    }
    let mut t = Fo2Table::new(w);
    let table = t.table(phi);
    let d = t.dim();
    Ok(table[sigma.x.unwrap_or(0) * d + sigma.y.unwrap_or(0)])
}

/// `w ⊨ φ` for an FO² sentence.
pub fn eval_fo2_sentence(phi: &Fo2, w: &Word) -> Result<bool> {
    eval_fo2(phi, w, Assignment::default())
}

/// A sentence of either logic.
#[derive(Debug, Clone)]
pub enum Sentence {
    Tl(Tl),
    Fo2(Fo2),
}

impl Sentence {
    pub fn holds(&self, w: &Word) -> Result<bool> {
        match self {
            Sentence::Tl(f) => Ok(eval_tl_sentence(f, w)),
            Sentence::Fo2(f) => eval_fo2_sentence(f, w),
        }
    }
}

/// Default cap on the number of words examined by `enumerate_models`.
pub const DEFAULT_WORD_BUDGET: usize = 5_000_000;

/// All models of length ≤ `max_len`, in length-then-lexicographic order.
pub fn enumerate_models(
    phi: &Sentence,
    alphabet: &Alphabet,
    max_len: usize,
    budget: usize,
) -> Result<Vec<Word>> {
    let mut total: usize = 0;
    for len in 0..=max_len {
        total = total.saturating_add(alphabet.len().saturating_pow(len as u32));
    }
    if total > budget {
        return Err(Error::Budget(format!(
            "{total} words exceed the budget of {budget}"
        )));
    }
    if let Sentence::Fo2(f) = phi {
        if !f.is_sentence() {
            return Err(Error::UnboundVariable(f.free_vars().iter().next().unwrap().name()));
        }
    }
    let prog = match phi {
        Sentence::Tl(f) => Some(TlProgram::compile(f, alphabet)),
        Sentence::Fo2(_) => None,
    };
    let mut out = Vec::new();
    for len in 0..=max_len {
        let words: Vec<Vec<usize>> = alphabet.words_of_len(len).collect();
        let hits: Vec<Word> = words
            .par_iter()
            .filter(|idx| match (&prog, phi) {
                (Some(p), _) => p.eval_sentence(idx),
                (None, Sentence::Fo2(f)) => {
                    eval_fo2_sentence(f, &Word::from_indices(alphabet, idx)).unwrap_or(false)
                }
                _ => unreachable!(),
            })
            .map(|idx| Word::from_indices(alphabet, idx))
            .collect();
        out.extend(hits);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_fo2, parse_tl};

    fn set(s: &str) -> BTreeSet<String> {
        s.chars().map(String::from).collect()
    }

    fn ab() -> Alphabet {
        Alphabet::parse("ab").unwrap()
    }

    #[test]
    fn letter_counts() {
        let w = Word::from_chars("abab");
        assert_eq!(count_letters(&w, 1, 4, &set("a")).unwrap(), 1);
        assert_eq!(count_letters(&w, 2, 3, &set("ab")).unwrap(), 0);
        let w = Word::from_chars("abc");
        assert_eq!(count_letters(&w, 1, 3, &set("abc")).unwrap(), 1);
        assert!(count_letters(&w, 2, 2, &set("a")).is_err());
        assert!(count_letters(&w, 1, 4, &set("a")).is_err());
    }

    #[test]
    fn factor_counts() {
        let aa = vec!["a".to_string(), "a".to_string()];
        assert_eq!(count_factors(&Word::from_chars("aaaa"), 1, 4, &aa).unwrap(), 1);
        assert_eq!(count_factors(&Word::from_chars("aaaaa"), 1, 5, &aa).unwrap(), 2);
        let bb = vec!["b".to_string(), "b".to_string()];
        assert_eq!(count_factors(&Word::from_chars("xaax"), 1, 4, &bb).unwrap(), 0);
    }

    #[test]
    fn guards() {
        let a = Alphabet::parse("abc").unwrap();
        let g = crate::syntax::parse_guard("#{a}>=2", &a).unwrap();
        assert!(!eval_guard(&g, &Word::from_chars("abab"), 1, 4).unwrap());
        let empty = crate::syntax::parse_guard("#{}=0", &a).unwrap();
        assert!(eval_guard(&empty, &Word::from_chars("abab"), 2, 3).unwrap());
        let fac = crate::syntax::parse_guard("+\"aa\" & !\"bb\"", &a).unwrap();
        assert!(eval_guard(&fac, &Word::from_chars("caac"), 1, 4).unwrap());
    }

    #[test]
    fn temporal_examples() {
        let a = Alphabet::parse("abc").unwrap();
        let stair = parse_tl("F(F[#{a}=2 & #{b}=0] true)", &a).unwrap();
        assert!(eval_tl_sentence(&stair, &Word::from_chars("aaaaa")));
        assert!(!eval_tl_sentence(&stair, &Word::from_chars("aaaa")));
        let fa = parse_tl("F[#{}=0] a", &a).unwrap();
        assert!(eval_tl(&fa, &MarkedWord::new(Word::from_chars("ba"), 1).unwrap()));
        let abp = parse_tl("a & X b & !F(a & X a) & !F(b & X b) & F(b & !X(a | b))", &a).unwrap();
        assert!(eval_tl_sentence(&abp, &Word::from_chars("abab")));
        assert!(!eval_tl_sentence(&abp, &Word::from_chars("abba")));
    }

    #[test]
    fn empty_word_convention() {
        let a = ab();
        assert!(!eval_tl_sentence(&parse_tl("F a", &a).unwrap(), &Word::empty()));
        assert!(eval_tl_sentence(&parse_tl("!F a", &a).unwrap(), &Word::empty()));
        assert!(eval_tl_sentence(&parse_tl("a", &a).unwrap(), &Word::from_chars("a")));
        assert!(!eval_tl_sentence(&parse_tl("a", &a).unwrap(), &Word::empty()));
    }

    #[test]
    fn until_is_strict() {
        let a = ab();
        let u = parse_tl("(a U b)", &a).unwrap();
        assert!(eval_tl_sentence(&u, &Word::from_chars("bb")));
        assert!(!eval_tl_sentence(&u, &Word::from_chars("b")));
        assert!(eval_tl_sentence(&u, &Word::from_chars("baab")));
        assert!(!eval_tl_sentence(&u, &Word::from_chars("baa")));
        assert!(!eval_tl_sentence(&u, &Word::from_chars("bcb")));
        let ft = parse_tl("(true U b)", &a).unwrap();
        let f = parse_tl("F b", &a).unwrap();
        for len in 0..6 {
            for idx in a.words_of_len(len) {
                let w = Word::from_indices(&a, &idx);
                assert_eq!(eval_tl_sentence(&ft, &w), eval_tl_sentence(&f, &w));
            }
        }
    }

    #[test]
    fn fo2_examples() {
        let a = ab();
        let first_a = parse_fo2("forall x. (forall y. x<=y) -> a(x)", Some(&a)).unwrap();
        assert!(eval_fo2_sentence(&first_a, &Word::from_chars("ab")).unwrap());
        assert!(!eval_fo2_sentence(&first_a, &Word::from_chars("ba")).unwrap());
        let fle = parse_fo2(
            "exists x. (forall y. x<=y) & ((a(x) & exists y. (forall x. x<=y) & a(y)) | (b(x) & exists y. (forall x. x<=y) & b(y)))",
            Some(&a),
        )
        .unwrap();
        assert!(eval_fo2_sentence(&fle, &Word::from_chars("aba")).unwrap());
        assert!(!eval_fo2_sentence(&fle, &Word::from_chars("ab")).unwrap());
        let th = parse_fo2("th(a,2)(x,y)", Some(&a)).unwrap();
        let w = Word::from_chars("aabaa");
        assert!(eval_fo2(&th, &w, Assignment::new(Some(1), Some(5))).unwrap());
        assert!(!eval_fo2(&th, &w, Assignment::new(Some(2), Some(5))).unwrap());
        assert!(matches!(
            eval_fo2(&th, &w, Assignment::new(Some(1), None)),
            Err(Error::UnboundVariable('y'))
        ));
    }

    #[test]
    fn model_enumeration() {
        let a = ab();
        let abp = parse_tl("a & X b & !F(a & X a) & !F(b & X b) & F(b & !X(a | b))", &a).unwrap();
        let models = enumerate_models(&Sentence::Tl(abp), &a, 4, DEFAULT_WORD_BUDGET).unwrap();
        let names: Vec<String> = models.iter().map(|w| w.to_string()).collect();
        assert_eq!(names, ["ab", "abab"]);
        let none = enumerate_models(&Sentence::Tl(Tl::ff()), &a, 5, DEFAULT_WORD_BUDGET).unwrap();
        assert!(none.is_empty());
        let one = Alphabet::parse("a").unwrap();
        let fa = parse_tl("F a", &one).unwrap();
        let models = enumerate_models(&Sentence::Tl(fa), &one, 2, DEFAULT_WORD_BUDGET).unwrap();
        assert_eq!(models, vec![Word::from_chars("aa")]);
        assert!(matches!(
            enumerate_models(&Sentence::Tl(Tl::tt()), &a, 30, 1000),
            Err(Error::Budget(_))
        ));
    }
}
