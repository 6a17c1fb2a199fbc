//! Words and FO² sentences over windows of length k: the delay transform
//! removes factor atoms, the expansion transform puts them back.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::syntax::{Alphabet, Fo2, Fo2Kind, Var, Word};

/// Padding symbol of windows reaching before the first position.
pub const PAD: &str = "*";

/// One window: `None` is padding, which only occurs as a prefix.
type Symbols = Vec<Option<String>>;

fn window_name(symbols: &[Option<String>], single: bool) -> String {
    let parts: Vec<&str> = symbols.iter().map(|s| s.as_deref().unwrap_or(PAD)).collect();
    if single {
        parts.concat()
    } else {
        parts.join("_")
    }
}

fn single_chars<'a>(letters: impl IntoIterator<Item = &'a String>) -> bool {
    letters.into_iter().all(|l| l.chars().count() == 1)
}

/// The window sequence of `*^{k−1}w`, one letter per position of w.
pub fn expand_word(w: &Word, k: usize) -> Result<Word> {
    if k < 2 {
        return Err(Error::Precondition(format!("window length {k} must exceed 1")));
    }
    let single = single_chars(w.letters());
    let letters = w.letters();
    Ok(Word::new((0..letters.len()).map(|i| {
        let symbols: Symbols = (0..k)
            .map(|j| (i + j + 1).checked_sub(k).map(|p| letters[p].clone()))
            .collect();
        window_name(&symbols, single)
    })))
}

/// Every window `*^j u` with |u| = k − j ≥ 1.
pub fn expanded_alphabet(alphabet: &Alphabet, k: usize) -> Result<Alphabet> {
    Ok(Alphabet::new(Windows::new(alphabet, k)?.all.into_iter().map(|(n, _)| n)).expect("windows"))
}

struct Windows {
    k: usize,
    all: Vec<(String, Symbols)>,
    by_name: HashMap<String, usize>,
}

impl Windows {
    fn new(alphabet: &Alphabet, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::Precondition(format!("window length {k} must exceed 1")));
        }
        let single = single_chars(alphabet.letters());
        let mut all = Vec::new();
        for pad in (0..k).rev() {
            for u in alphabet.words_of_len(k - pad) {
                let mut symbols: Symbols = vec![None; pad];
                symbols.extend(u.iter().map(|&i| Some(alphabet.letters()[i].clone())));
                all.push((window_name(&symbols, single), symbols));
            }
        }
        let mut by_name = HashMap::new();
        for (i, (name, _)) in all.iter().enumerate() {
            if by_name.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidAlphabet(format!("window name `{name}` is ambiguous")));
            }
        }
        Ok(Windows {
            k,
            all,
            by_name,
        })
    }

    fn names(&self, pred: impl Fn(&[Option<String>]) -> bool) -> Vec<&str> {
        self.all.iter().filter(|(_, s)| pred(s)).map(|(n, _)| n.as_str()).collect()
    }

    fn unary(&self, v: Var, pred: impl Fn(&[Option<String>]) -> bool) -> Fo2 {
        Fo2::any(self.names(pred).into_iter().map(|n| Fo2::letter(n, v)))
    }

    fn between(&self, l: Var, r: Var, pred: impl Fn(&[Option<String>]) -> bool) -> Fo2 {
        Fo2::any(self.names(pred).into_iter().map(|n| Fo2::between(n, l, r)))
    }

    /// r = l + 1, as `l < r` with no window strictly between.
    fn suc(&self, l: Var, r: Var) -> Fo2 {
        Fo2::conj(Fo2::less(l, r), Fo2::neg(self.between(l, r, |_| true)))
    }

    /// The formula `g` evaluated d positions away from `cur`.
    fn hop(&self, cur: Var, d: isize, g: &Fo2) -> Fo2 {
        if d == 0 {
            return g.with_free_var(cur);
        }
        let next = cur.other();
        let step = if d > 0 { self.suc(cur, next) } else { self.suc(next, cur) };
        Fo2::exists(next, Fo2::conj(step, self.hop(next, d - d.signum(), g)))
    }
}

fn ends_with(symbols: &[Option<String>], u: &[String]) -> bool {
    symbols.len() >= u.len()
        && symbols[symbols.len() - u.len()..]
            .iter()
            .zip(u)
            .all(|(s, a)| s.as_deref() == Some(a.as_str()))
}

fn has_factor(symbols: &[Option<String>], u: &[String]) -> bool {
    (u.len()..=symbols.len()).any(|end| ends_with(&symbols[..end], u))
}

#[derive(Clone)]
enum Binary {
    Less,
    LessEq,
    Suc,
    Factor(Vec<String>),
}

enum Leaf {
    Fact(Var, Fo2),
    Closed(Fo2),
    Binary(Binary, bool),
}

/// Where the bound variable y lies relative to the free variable x.
#[derive(Clone, Copy)]
enum Region {
    /// y = x + d with |d| ≤ D.
    Near(isize),
    /// y > x + D.
    Right,
    /// y < x − D.
    Left,
}

struct Delay<'a> {
    windows: &'a Windows,
    reach: isize,
    /// Keyed by node address; the node is kept alive so the address stays unique.
    memo: HashMap<usize, (Fo2, Fo2)>,
}

impl Delay<'_> {
    fn translate(&mut self, f: &Fo2) -> Result<Fo2> {
        if let Some((_, t)) = self.memo.get(&f.ptr()) {
            return Ok(t.clone());
        }
        let w = self.windows;
        let out = match f.kind() {
            Fo2Kind::True | Fo2Kind::False | Fo2Kind::Less(..) | Fo2Kind::LessEq(..) => f.clone(),
            Fo2Kind::Letter(a, v) => w.unary(*v, |s| ends_with(s, std::slice::from_ref(a))),
            Fo2Kind::Suc(a, b) if a == b => Fo2::ff(),
            Fo2Kind::Suc(a, b) => w.suc(*a, *b),
            Fo2Kind::Between(_, a, b) | Fo2Kind::BetweenFactor(_, a, b) if a == b => Fo2::ff(),
            Fo2Kind::Between(c, a, b) => w.between(*a, *b, |s| ends_with(s, std::slice::from_ref(c))),
            Fo2Kind::BetweenFactor(u, a, b) if u.len() == 1 => {
                w.between(*a, *b, |s| ends_with(s, u))
            }
            Fo2Kind::BetweenFactor(..) => {
                return Err(Error::Precondition(format!("{f} is not under a quantifier")))
            }
            Fo2Kind::Threshold(..) | Fo2Kind::FactorThreshold(..) => {
                return Err(Error::Unsupported(format!("threshold atom {f}")))
            }
            Fo2Kind::Not(a) => Fo2::neg(self.translate(a)?),
            Fo2Kind::And(a, b) => Fo2::conj(self.translate(a)?, self.translate(b)?),
            Fo2Kind::Or(a, b) => Fo2::disj(self.translate(a)?, self.translate(b)?),
            Fo2Kind::Exists(v, body) => self.exists(*v, body)?,
            Fo2Kind::Forall(v, body) => Fo2::neg(self.exists(*v, &Fo2::not(body.clone()))?),
        };
        self.memo.insert(f.ptr(), (f.clone(), out.clone()));
        Ok(out)
    }

    fn exists(&mut self, v: Var, body: &Fo2) -> Result<Fo2> {
        if !has_long_factor(body) {
            return Ok(Fo2::exists(v, self.translate(body)?));
        }
        if v == Var::X {
            return Ok(self.exists(Var::Y, &body.swap_vars())?.swap_vars());
        }
        let mut parts = Vec::new();
        for d in -self.reach..=self.reach {
            parts.push(self.region(Region::Near(d), body)?);
        }
        parts.push(self.region(Region::Right, body)?);
        parts.push(self.region(Region::Left, body)?);
        Ok(Fo2::any(parts))
    }

    /// `∃y body` restricted to one region, with x free.
    fn region(&mut self, region: Region, body: &Fo2) -> Result<Fo2> {
        let w = self.windows;
        let reach = self.reach;
        let mapped = self.map_body(body, region)?;
        Ok(match region {
            Region::Near(d) => Fo2::conj(w.hop(Var::X, d, &Fo2::tt()), mapped),
            Region::Right => {
                let inner = Fo2::exists(Var::Y, Fo2::conj(Fo2::less(Var::X, Var::Y), mapped));
                w.hop(Var::X, reach, &inner)
            }
            Region::Left => Fo2::exists(
                Var::Y,
                Fo2::all([
                    Fo2::less(Var::Y, Var::X),
                    w.hop(Var::Y, -reach, &Fo2::tt()),
                    mapped,
                ]),
            ),
        })
    }

    fn map_body(&mut self, f: &Fo2, region: Region) -> Result<Fo2> {
        Ok(match f.kind() {
            Fo2Kind::Not(a) => Fo2::neg(self.map_body(a, region)?),
            Fo2Kind::And(a, b) => Fo2::conj(self.map_body(a, region)?, self.map_body(b, region)?),
            Fo2Kind::Or(a, b) => Fo2::disj(self.map_body(a, region)?, self.map_body(b, region)?),
            _ => {
                let leaf = self.leaf(f)?;
                self.map_leaf(leaf, region)
            }
        })
    }

    fn leaf(&mut self, f: &Fo2) -> Result<Leaf> {
        let binary = |a: &Var, b: &Var, kind: Binary| -> Leaf {
            if a == b {
                Leaf::Closed(match kind {
                    Binary::LessEq => Fo2::tt(),
                    _ => Fo2::ff(),
                })
            } else {
                Leaf::Binary(kind, *a == Var::X)
            }
        };
        Ok(match f.kind() {
            Fo2Kind::Less(a, b) => binary(a, b, Binary::Less),
            Fo2Kind::LessEq(a, b) => binary(a, b, Binary::LessEq),
            Fo2Kind::Suc(a, b) => binary(a, b, Binary::Suc),
            Fo2Kind::Between(c, a, b) => binary(a, b, Binary::Factor(vec![c.clone()])),
            Fo2Kind::BetweenFactor(u, a, b) => binary(a, b, Binary::Factor(u.clone())),
            _ => {
                let t = self.translate(f)?;
                let free = f.free_vars();
                match free.iter().next() {
                    None => Leaf::Closed(t),
                    Some(v) if free.len() == 1 => Leaf::Fact(*v, t),
                    _ => return Err(Error::Internal(format!("unexpected binary leaf {f}"))),
                }
            }
        })
    }

    fn map_leaf(&self, leaf: Leaf, region: Region) -> Fo2 {
        let w = self.windows;
        let k = w.k;
        let reach = self.reach;
        let last = move |n: usize| move |s: &[Option<String>]| s[k - n..].to_vec();
        match (leaf, region) {
            (Leaf::Closed(t), _) => t,
            (Leaf::Fact(Var::X, t), Region::Near(_) | Region::Left) => t,
            (Leaf::Fact(Var::Y, t), Region::Near(d)) => w.hop(Var::X, d, &t),
            (Leaf::Fact(Var::X, t), Region::Right) => w.hop(Var::X, -reach, &t),
            (Leaf::Fact(Var::Y, t), Region::Right) => t,
            (Leaf::Fact(Var::Y, t), Region::Left) => w.hop(Var::Y, -reach, &t),
            (Leaf::Binary(kind, forward), Region::Near(d)) => {
                let gap = d.unsigned_abs();
                if d == 0 || (d > 0) != forward {
                    return Fo2::ff();
                }
                match kind {
                    Binary::Less | Binary::LessEq => Fo2::tt(),
                    Binary::Suc => {
                        if gap == 1 {
                            Fo2::tt()
                        } else {
                            Fo2::ff()
                        }
                    }
                    Binary::Factor(u) => {
                        let inside = move |s: &[Option<String>]| s[k - gap..k - 1].to_vec();
                        let pred = |s: &[Option<String>]| has_factor(&inside(s), &u);
                        if d > 0 {
                            w.hop(Var::X, d, &w.unary(Var::Y, pred))
                        } else {
                            w.unary(Var::X, pred)
                        }
                    }
                }
            }
            (Leaf::Binary(kind, forward), Region::Right | Region::Left) => {
                let toward = matches!(region, Region::Right);
                if forward != toward {
                    return Fo2::ff();
                }
                let (pivot, other) = if toward { (Var::X, Var::Y) } else { (Var::Y, Var::X) };
                match kind {
                    Binary::Less | Binary::LessEq => Fo2::tt(),
                    Binary::Suc => Fo2::ff(),
                    Binary::Factor(u) => {
                        let span = last(reach as usize);
                        Fo2::disj(
                            w.unary(pivot, |s| has_factor(&span(s), &u)),
                            w.between(pivot, other, |s| ends_with(s, &u)),
                        )
                    }
                }
            }
        }
    }
}

fn has_long_factor(f: &Fo2) -> bool {
    match f.kind() {
        Fo2Kind::BetweenFactor(u, a, b) => u.len() > 1 && a != b,
        Fo2Kind::Not(a) => has_long_factor(a),
        Fo2Kind::And(a, b) | Fo2Kind::Or(a, b) => has_long_factor(a) || has_long_factor(b),
        _ => false,
    }
}

/// Rewrites an FO²[<,betfac] sentence over `alphabet` into an FO²[<,bet]
/// sentence over windows of length k = max(2, longest factor), so that
/// `w ⊨ φ` iff `expand_word(w, k) ⊨ φ′`.
///
/// A factor atom `⟨v⟩(x,y)` under `∃y` is resolved by where y lies: within
/// distance D = max(1, |v|−1) of x the letters in between are read off a
/// single window; further right, x is moved to x + D and the remaining
/// occurrences are between-atoms on windows ending in v; further left, y is
/// replaced by y + D in the same way.
pub fn delay_fo2(phi: &Fo2, alphabet: &Alphabet) -> Result<(usize, Fo2)> {
    for a in phi.letters() {
        if !alphabet.contains(&a) {
            return Err(Error::UnknownLetter(a));
        }
    }
    let longest = phi.longest_factor();
    let k = longest.max(2);
    let windows = Windows::new(alphabet, k)?;
    let mut delay = Delay {
        windows: &windows,
        reach: longest.saturating_sub(1).max(1) as isize,
        memo: HashMap::new(),
    };
    Ok((k, delay.translate(phi)?))
}

struct Expansion<'a> {
    windows: &'a Windows,
    alphabet: &'a Alphabet,
}

impl Expansion<'_> {
    fn symbols(&self, name: &str) -> Result<&Symbols> {
        self.windows
            .by_name
            .get(name)
            .map(|&i| &self.windows.all[i].1)
            .ok_or_else(|| Error::UnknownLetter(name.to_string()))
    }

    /// The window ending at `v`, checked letter by letter towards the left.
    fn window_at(&self, symbols: &[Option<String>], v: Var) -> Fo2 {
        let Some(Some(a)) = symbols.last() else {
            return Fo2::tt();
        };
        let rest = &symbols[..symbols.len() - 1];
        let o = v.other();
        let back = match rest.last() {
            None => Fo2::tt(),
            Some(None) => Fo2::neg(Fo2::exists(o, Fo2::suc(o, v))),
            Some(Some(_)) => Fo2::exists(o, Fo2::conj(Fo2::suc(o, v), self.window_at(rest, o))),
        };
        Fo2::conj(Fo2::letter(a, v), back)
    }

    fn forward(&self, cur: Var, d: usize, g: &Fo2) -> Fo2 {
        if d == 0 {
            return g.with_free_var(cur);
        }
        let next = cur.other();
        Fo2::exists(next, Fo2::conj(Fo2::suc(cur, next), self.forward(next, d - 1, g)))
    }

    /// At least n − 1 positions strictly between l and r.
    fn gap_at_least(&self, l: Var, r: Var, n: usize) -> Fo2 {
        Fo2::any(self.alphabet.words_of_len(n - 1).map(|u| {
            let u = Word::from_indices(self.alphabet, &u);
            if u.len() == 1 {
                Fo2::between(&u.letters()[0], l, r)
            } else {
                Fo2::between_factor(u.letters(), l, r)
            }
        }))
    }

    fn translate(&self, f: &Fo2) -> Result<Fo2> {
        Ok(match f.kind() {
            Fo2Kind::True
            | Fo2Kind::False
            | Fo2Kind::Less(..)
            | Fo2Kind::LessEq(..)
            | Fo2Kind::Suc(..) => f.clone(),
            Fo2Kind::Letter(s, v) => self.window_at(self.symbols(s)?, *v),
            Fo2Kind::Between(s, l, r) => {
                let symbols = self.symbols(s)?;
                if l == r {
                    return Ok(Fo2::ff());
                }
                let k = self.windows.k;
                let at = self.window_at(symbols, Var::Y);
                let near = (1..k).map(|d| {
                    Fo2::conj(self.forward(*l, d, &at), self.gap_at_least(*l, *r, d + 1))
                });
                let far = match symbols.iter().cloned().collect::<Option<Vec<String>>>() {
                    Some(u) => Fo2::between_factor(&u, *l, *r),
                    None => Fo2::ff(),
                };
                Fo2::disj(far, Fo2::any(near))
            }
            Fo2Kind::Threshold(..) | Fo2Kind::BetweenFactor(..) | Fo2Kind::FactorThreshold(..) => {
                return Err(Error::Unsupported(format!("atom {f} over windows")))
            }
            Fo2Kind::Not(a) => Fo2::neg(self.translate(a)?),
            Fo2Kind::And(a, b) => Fo2::conj(self.translate(a)?, self.translate(b)?),
            Fo2Kind::Or(a, b) => Fo2::disj(self.translate(a)?, self.translate(b)?),
            Fo2Kind::Exists(v, a) => Fo2::exists(*v, self.translate(a)?),
            Fo2Kind::Forall(v, a) => Fo2::forall(*v, self.translate(a)?),
        })
    }
}

/// Rewrites an FO²[<,bet] formula over windows of length k back into an
/// FO²[<,betfac] formula over `alphabet`.
pub fn expand_fo2(phi: &Fo2, k: usize, alphabet: &Alphabet) -> Result<Fo2> {
    let windows = Windows::new(alphabet, k)?;
    Expansion {
        windows: &windows,
        alphabet,
    }
    .translate(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{eval_fo2, eval_fo2_sentence, Assignment};
    use crate::syntax::parse_fo2;

    fn ab() -> Alphabet {
        Alphabet::parse("ab").unwrap()
    }

    fn only_bet(f: &Fo2) -> bool {
        match f.kind() {
            Fo2Kind::Suc(..)
            | Fo2Kind::Threshold(..)
            | Fo2Kind::BetweenFactor(..)
            | Fo2Kind::FactorThreshold(..) => false,
            Fo2Kind::Not(a) | Fo2Kind::Exists(_, a) | Fo2Kind::Forall(_, a) => only_bet(a),
            Fo2Kind::And(a, b) | Fo2Kind::Or(a, b) => only_bet(a) && only_bet(b),
            _ => true,
        }
    }

    fn delay_agrees(text: &str, alphabet: &Alphabet, lens: std::ops::RangeInclusive<usize>) {
        let phi = parse_fo2(text, Some(alphabet)).unwrap();
        let (k, out) = delay_fo2(&phi, alphabet).unwrap();
        assert!(only_bet(&out), "{text}: {out}");
        for len in lens {
            for idx in alphabet.words_of_len(len) {
                let w = Word::from_indices(alphabet, &idx);
                let expanded = expand_word(&w, k).unwrap();
                assert_eq!(
                    eval_fo2_sentence(&phi, &w).unwrap(),
                    eval_fo2_sentence(&out, &expanded).unwrap(),
                    "{text} on {w}"
                );
            }
        }
    }

    #[test]
    fn window_words() {
        let w = expand_word(&Word::from_chars("ababba"), 3).unwrap();
        assert_eq!(w.letters(), ["**a", "*ab", "aba", "bab", "abb", "bba"]);
        let w = expand_word(&Word::from_chars("aa"), 3).unwrap();
        assert_eq!(w.letters(), ["**a", "*aa"]);
        assert!(expand_word(&Word::from_chars("a"), 1).is_err());
        assert_eq!(expanded_alphabet(&ab(), 3).unwrap().len(), 14);
    }

    #[test]
    fn window_atom_versus_factor() {
        let abc = Alphabet::parse("abc").unwrap();
        let w = Word::from_chars("bbacbab");
        let expanded = expand_word(&w, 4).unwrap();
        let at = Assignment::new(Some(3), Some(7));
        let window = Fo2::between("bbac", Var::X, Var::Y);
        let factor = Fo2::between_factor(&["a".to_string(), "c".to_string()], Var::X, Var::Y);
        assert!(eval_fo2(&window, &expanded, at).unwrap());
        assert!(!eval_fo2(&factor, &w, at).unwrap());
        assert_eq!(expanded.letters()[0], "***b");
        assert!(expanded.indices(&expanded_alphabet(&abc, 4).unwrap()).is_ok());
    }

    #[test]
    fn delay_preserves_models() {
        let abc = Alphabet::parse("abc").unwrap();
        delay_agrees("exists x. exists y. fac(\"ab\")(x,y)", &ab(), 3..=6);
        delay_agrees("forall x. forall y. (x<y & a(x) & a(y)) -> fac(\"bb\")(x,y)", &ab(), 1..=7);
        delay_agrees("exists x. (b(x) & forall y. (x<y -> !fac(\"aba\")(x,y)))", &ab(), 1..=7);
        delay_agrees("exists x. (a(x) & exists y. (y<x & fac(\"ab\")(y,x) & !b(x,y)))", &abc, 1..=5);
        delay_agrees(
            "forall x. (c(x) -> exists y. (fac(\"ac\")(y,x) & !fac(\"ca\")(x,y) & suc(x,y) | a(y)))",
            &abc,
            1..=5,
        );
        delay_agrees("exists x. (a(x) & exists y. (x<y & b(y) & b(x,y)))", &ab(), 1..=6);
    }

    #[test]
    fn letters_only_are_lifted() {
        let phi = parse_fo2("exists x. a(x)", Some(&ab())).unwrap();
        let (k, out) = delay_fo2(&phi, &ab()).unwrap();
        assert_eq!(k, 2);
        assert_eq!(out.to_string(), "exists x. *a(x) | aa(x) | ba(x)");
    }

    #[test]
    fn expansion_displays() {
        let abc = Alphabet::parse("abc").unwrap();
        let e = Expansion {
            windows: &Windows::new(&abc, 3).unwrap(),
            alphabet: &abc,
        };
        let bac = e.translate(&Fo2::letter("bac", Var::X)).unwrap();
        let expected = parse_fo2(
            "c(x) & exists y. (suc(y,x) & a(y) & exists x. (suc(x,y) & b(x)))",
            Some(&abc),
        )
        .unwrap();
        assert_eq!(bac.to_string(), expected.to_string());
        let star = e.translate(&Fo2::letter("*ac", Var::X)).unwrap();
        let expected =
            parse_fo2("c(x) & exists y. (suc(y,x) & a(y) & !exists x. suc(x,y))", Some(&abc))
                .unwrap();
        assert_eq!(star.to_string(), expected.to_string());
    }

    #[test]
    fn round_trip() {
        for text in [
            "exists x. exists y. fac(\"ab\")(x,y)",
            "forall x. (a(x) -> exists y. (fac(\"ba\")(x,y) & b(y)))",
        ] {
            let phi = parse_fo2(text, Some(&ab())).unwrap();
            let (k, delayed) = delay_fo2(&phi, &ab()).unwrap();
            let back = expand_fo2(&delayed, k, &ab()).unwrap();
            for len in 1..=6 {
                for idx in ab().words_of_len(len) {
                    let w = Word::from_indices(&ab(), &idx);
                    assert_eq!(
                        eval_fo2_sentence(&phi, &w).unwrap(),
                        eval_fo2_sentence(&back, &w).unwrap(),
                        "{text} on {w}"
                    );
                }
            }
        }
    }

    #[test]
    fn shadowed_quantifiers_keep_their_atoms() {
        for text in [
            "exists x. forall x. forall y. (forall y. b(y)) & (forall x. suc(y,x))",
            "forall x. !(forall y. !!(exists y. b(x,y) & fac(\"abb\")(x,y))) | (forall y. !!(b(y) & b(x))) & !(exists y. fac(\"baa\")(x,y) | fac(\"bbb\")(y,x))",
        ] {
            let phi = parse_fo2(text, Some(&ab())).unwrap();
            let (k, psi) = delay_fo2(&phi, &ab()).unwrap();
            for len in 0..=6 {
                for x in ab().words_of_len(len) {
                    let x = Word::from_indices(&ab(), &x);
                    let e = expand_word(&x, k).unwrap();
                    assert_eq!(eval_fo2_sentence(&phi, &x).unwrap(), eval_fo2_sentence(&psi, &e).unwrap(), "{text} on {x}");
                }
            }
        }
    }
}
