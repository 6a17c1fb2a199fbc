//! Satisfiability reductions into FO²[<,bet]: corridor tiling and threshold
//! elimination with global counters.
//!
//! Conditions are written to look only at the current position and earlier
//! ones wherever possible, so that a bounded model search can discard a
//! prefix as soon as a universal conjunct fails on it.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::syntax::{Alphabet, Fo2, Fo2Kind, Var, Word};

const COLOURS: [&str; 3] = ["r", "g", "b"];

/// Atoms over an explicit list of letters.
struct Letters<'a> {
    all: &'a [String],
}

impl Letters<'_> {
    fn unary(&self, v: Var, pred: impl Fn(&str) -> bool) -> Fo2 {
        Fo2::any(self.all.iter().filter(|l| pred(l)).map(|l| Fo2::letter(l, v)))
    }

    fn between(&self, l: Var, r: Var, pred: impl Fn(&str) -> bool) -> Fo2 {
        Fo2::any(self.all.iter().filter(|a| pred(a)).map(|a| Fo2::between(a, l, r)))
    }

    fn suc(&self, l: Var, r: Var) -> Fo2 {
        Fo2::conj(Fo2::less(l, r), Fo2::neg(self.between(l, r, |_| true)))
    }

    /// `g` evaluated d positions away from `cur`.
    fn hop(&self, cur: Var, d: isize, g: &Fo2) -> Fo2 {
        if d == 0 {
            return g.with_free_var(cur);
        }
        let next = cur.other();
        let step = if d > 0 { self.suc(cur, next) } else { self.suc(next, cur) };
        Fo2::exists(next, Fo2::conj(step, self.hop(next, d - d.signum(), g)))
    }
}

fn iff(a: Fo2, b: Fo2) -> Fo2 {
    Fo2::disj(Fo2::conj(a.clone(), b.clone()), Fo2::conj(Fo2::neg(a), Fo2::neg(b)))
}

fn xor(a: Fo2, b: Fo2) -> Fo2 {
    Fo2::neg(iff(a, b))
}

fn first(v: Var) -> Fo2 {
    Fo2::neg(Fo2::exists(v.other(), Fo2::less(v.other(), v)))
}

fn last(v: Var) -> Fo2 {
    Fo2::neg(Fo2::exists(v.other(), Fo2::less(v, v.other())))
}

fn forall2(body: Fo2) -> Fo2 {
    Fo2::forall(Var::X, Fo2::forall(Var::Y, body))
}

/// A corridor tiling instance: tiles, horizontal and vertical compatibility,
/// start and final tile, and rows of width 2ⁿ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingInstance {
    pub tiles: Vec<String>,
    pub horizontal: Vec<(String, String)>,
    pub vertical: Vec<(String, String)>,
    pub start: String,
    pub finish: String,
    pub n: usize,
}

impl TilingInstance {
    fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Precondition(format!("malformed instance: {m}")));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        let tiles: BTreeSet<&String> = self.tiles.iter().collect();
        if tiles.len() != self.tiles.len() || tiles.is_empty() {
            return bad("tiles must be distinct and nonempty".into());
        }
        for t in &self.tiles {
            if t.is_empty() || !t.chars().all(|c| c.is_alphanumeric()) || t == "0" || t == "1" {
                return bad(format!("tile name `{t}`"));
            }
        }
        let pairs = self.horizontal.iter().chain(&self.vertical);
        for t in [&self.start, &self.finish].into_iter().chain(pairs.flat_map(|(a, b)| [a, b])) {
            if !tiles.contains(t) {
                return bad(format!("unknown tile `{t}`"));
            }
        }
        Ok(())
    }

    /// Marker letter for tile `t` in colour `c`.
    pub fn marker(t: &str, c: &str) -> String {
        format!("{t}_{c}")
    }

    /// The alphabet of encodings: one marker per tile and colour, and bits 0, 1.
    pub fn alphabet(&self) -> Result<Alphabet> {
        self.check()?;
        let mut letters = vec!["0".to_string(), "1".to_string()];
        for t in &self.tiles {
            letters.extend(COLOURS.iter().map(|c| Self::marker(t, c)));
        }
        Alphabet::new(letters)
    }

    /// The word encoding a tiling given row by row.
    pub fn encode_solution(&self, rows: &[Vec<String>]) -> Word {
        let mut letters = Vec::new();
        for (j, row) in rows.iter().enumerate() {
            for (i, t) in row.iter().enumerate() {
                letters.push(Self::marker(t, COLOURS[j % 3]));
                letters.extend((0..self.n).map(|b| ((i >> b) & 1).to_string()));
            }
        }
        Word::new(letters)
    }
}

/// A sentence satisfiable iff the instance has a solution. Each grid cell is
/// a marker (tile and row colour) followed by its column number in n bits,
/// least significant first.
pub fn encode_tiling(m: &TilingInstance) -> Result<(Fo2, Alphabet)> {
    let alphabet = m.alphabet()?;
    let l = Letters {
        all: alphabet.letters(),
    };
    let n = m.n as isize;
    let (x, y) = (Var::X, Var::Y);
    let mark = |v| l.unary(v, |a| a.contains('_'));
    let bit = |v| l.unary(v, |a| a == "0" || a == "1");
    let one = |v| Fo2::letter("1", v);
    let zero = |v| Fo2::letter("0", v);
    let tile = |t: &str, v| l.unary(v, |a| a.rsplit_once('_').is_some_and(|p| p.0 == t));
    let colour = |c: &str, v| l.unary(v, |a| a.rsplit_once('_').is_some_and(|p| p.1 == c));
    let colour_between = |c: &str| l.between(x, y, |a| a.rsplit_once('_').is_some_and(|p| p.1 == c));
    let back = |v: Var, d: isize, g: Fo2| l.hop(v, -d, &g);
    let mut parts = Vec::new();

    parts.push(Fo2::exists(x, mark(x)));
    parts.push(Fo2::forall(
        x,
        Fo2::implies(first(x), Fo2::all([tile(&m.start, x), colour("r", x)])),
    ));
    // Block structure: a marker is preceded by a full block, a bit by its marker.
    parts.push(Fo2::forall(
        x,
        Fo2::implies(
            Fo2::conj(mark(x), Fo2::neg(first(x))),
            Fo2::all((1..=n).map(|i| back(x, i, bit(x))).chain([back(x, n + 1, mark(x))])),
        ),
    ));
    parts.push(Fo2::forall(
        x,
        Fo2::implies(
            bit(x),
            Fo2::any((1..=n).map(|i| {
                Fo2::all((1..i).map(|j| back(x, j, bit(x))).chain([back(x, i, mark(x))]))
            })),
        ),
    ));
    parts.push(Fo2::forall(
        x,
        Fo2::implies(
            last(x),
            Fo2::all((0..n).map(|i| back(x, i, one(x))).chain([back(x, n, tile(&m.finish, x))])),
        ),
    ));
    // Column counter: zero in the first block, incremented block to block.
    for i in 1..=n {
        let carry = Fo2::all((1..i).map(|j| back(x, j, one(x))));
        parts.push(Fo2::forall(
            x,
            Fo2::implies(
                back(x, i, mark(x)),
                Fo2::all([
                    Fo2::implies(back(x, i, first(x)), zero(x)),
                    Fo2::implies(
                        back(x, n + 1, bit(x)),
                        iff(one(x), back(x, n + 1, xor(one(x), carry.clone()))),
                    ),
                ]),
            ),
        ));
    }
    // Row colour: kept within a row, advanced when the column number is zero.
    let block_zero = Fo2::all((0..n).map(|i| back(x, i, zero(x))));
    parts.push(Fo2::forall(
        x,
        Fo2::implies(
            Fo2::conj(back(x, n, mark(x)), back(x, 2 * n + 1, mark(x))),
            Fo2::any((0..3).map(|c| {
                let now = COLOURS[c];
                let next = COLOURS[(c + 1) % 3];
                Fo2::conj(
                    back(x, 2 * n + 1, colour(now, x)),
                    Fo2::all([
                        Fo2::implies(block_zero.clone(), back(x, n, colour(next, x))),
                        Fo2::implies(Fo2::neg(block_zero.clone()), back(x, n, colour(now, x))),
                    ]),
                )
            })),
        ),
    ));
    // Horizontal neighbours: consecutive markers of one colour.
    let same_colour = Fo2::any(COLOURS.iter().map(|c| Fo2::conj(colour(c, x), colour(c, y))));
    let pairs = |rel: &[(String, String)], a: Fo2Fn, b: Fo2Fn| {
        Fo2::any(rel.iter().map(|(t1, t2)| Fo2::conj(a(t1), b(t2))))
    };
    parts.push(forall2(Fo2::implies(
        Fo2::all([
            Fo2::less(x, y),
            mark(x),
            mark(y),
            Fo2::neg(l.between(x, y, |a| a.contains('_'))),
            same_colour,
        ]),
        pairs(&m.horizontal, &|t| tile(t, x), &|t| tile(t, y)),
    )));
    // Vertical neighbours: last bits of two blocks in rows of successive
    // colours with one colour missing in between, and equal column numbers.
    let successive = Fo2::any((0..3).map(|c| {
        Fo2::conj(back(x, n, colour(COLOURS[c], x)), back(y, n, colour(COLOURS[(c + 1) % 3], y)))
    }));
    let missing = Fo2::any(COLOURS.iter().map(|c| Fo2::neg(colour_between(c))));
    let equal = Fo2::all((0..n).map(|i| iff(back(x, i, one(x)), back(y, i, one(y)))));
    parts.push(forall2(Fo2::implies(
        Fo2::all([
            Fo2::less(x, y),
            back(x, n, mark(x)),
            back(y, n, mark(y)),
            successive,
            missing,
            equal,
        ]),
        pairs(&m.vertical, &|t| back(x, n, tile(t, x)), &|t| back(y, n, tile(t, y))),
    )));
    Ok((Fo2::all(parts), alphabet))
}

type Fo2Fn<'a> = &'a dyn Fn(&str) -> Fo2;

/// Global modulo-2^r counter of one letter, with a colour that advances at
/// each overflow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counter {
    pub letter: String,
    pub bits: usize,
}

impl Counter {
    fn modulus(&self) -> u64 {
        1 << self.bits
    }
}

/// Output of `fo2_threshold_to_between`.
#[derive(Debug, Clone)]
pub struct ThresholdReduction {
    pub formula: Fo2,
    pub alphabet: Alphabet,
    pub counters: Vec<Counter>,
    base: Alphabet,
}

/// A letter of the enlarged alphabet: base letter plus, per counter, the
/// number of occurrences before this position (mod 2^r) and the overflow
/// count mod 3.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Annotated {
    base: String,
    state: Vec<(u64, usize)>,
}

fn annotated_name(a: &Annotated, counters: &[Counter]) -> String {
    let mut s = a.base.clone();
    for ((v, c), counter) in a.state.iter().zip(counters) {
        s.push('_');
        for b in 0..counter.bits {
            s.push(if (v >> b) & 1 == 1 { '1' } else { '0' });
        }
        s.push_str(COLOURS[*c]);
    }
    s
}

impl ThresholdReduction {
    /// The unique annotation of a word over the original alphabet that
    /// satisfies the counter constraints.
    pub fn annotate(&self, w: &Word) -> Result<Word> {
        w.check(&self.base)?;
        let mut state: Vec<(u64, usize)> = vec![(0, 0); self.counters.len()];
        let mut out = Vec::new();
        for a in w.letters() {
            out.push(annotated_name(
                &Annotated {
                    base: a.clone(),
                    state: state.clone(),
                },
                &self.counters,
            ));
            for (s, c) in state.iter_mut().zip(&self.counters) {
                if *a == c.letter {
                    s.0 = (s.0 + 1) % c.modulus();
                    if s.0 == 0 {
                        s.1 = (s.1 + 1) % 3;
                    }
                }
            }
        }
        Ok(Word::new(out))
    }

    /// Drops the annotation.
    pub fn project(&self, w: &Word) -> Word {
        Word::new(w.letters().iter().map(|l| {
            l.split('_').next().unwrap_or(l).to_string()
        }))
    }
}

struct Reducer<'a> {
    counters: &'a [Counter],
    index: BTreeMap<String, usize>,
    letters: Vec<(String, Annotated)>,
}

impl Reducer<'_> {
    fn unary(&self, v: Var, pred: impl Fn(&Annotated) -> bool) -> Fo2 {
        Fo2::any(self.letters.iter().filter(|(_, a)| pred(a)).map(|(n, _)| Fo2::letter(n, v)))
    }

    fn between(&self, l: Var, r: Var, pred: impl Fn(&Annotated) -> bool) -> Fo2 {
        Fo2::any(self.letters.iter().filter(|(_, a)| pred(a)).map(|(n, _)| Fo2::between(n, l, r)))
    }

    fn suc(&self, l: Var, r: Var) -> Fo2 {
        Fo2::conj(Fo2::less(l, r), Fo2::neg(self.between(l, r, |_| true)))
    }

    fn value(&self, j: usize, v: Var, value: u64) -> Fo2 {
        self.unary(v, |a| a.state[j].0 == value)
    }

    fn colour(&self, j: usize, v: Var, c: usize) -> Fo2 {
        self.unary(v, |a| a.state[j].1 == c)
    }

    /// Counter j starts at zero and follows its letter.
    fn constraints(&self, j: usize) -> Vec<Fo2> {
        let c = &self.counters[j];
        let m = c.modulus();
        let (x, y) = (Var::X, Var::Y);
        let init = Fo2::forall(
            x,
            Fo2::implies(first(x), Fo2::conj(self.value(j, x, 0), self.colour(j, x, 0))),
        );
        let mut cases = Vec::new();
        for v in 0..m {
            for k in 0..3 {
                let (nv, nk) = if v + 1 == m { (0, (k + 1) % 3) } else { (v + 1, k) };
                let now = Fo2::conj(self.value(j, x, v), self.colour(j, x, k));
                let counted = Fo2::conj(self.value(j, y, nv), self.colour(j, y, nk));
                let kept = Fo2::conj(self.value(j, y, v), self.colour(j, y, k));
                let is_letter = self.unary(x, |a| a.base == c.letter);
                cases.push(Fo2::conj(
                    now,
                    Fo2::disj(
                        Fo2::conj(is_letter.clone(), counted),
                        Fo2::conj(Fo2::neg(is_letter), kept),
                    ),
                ));
            }
        }
        let step = forall2(Fo2::implies(self.suc(x, y), Fo2::any(cases)));
        vec![init, step]
    }

    /// `#a(l,r) ≥ t` for t ≥ 2 from the counter of a.
    fn threshold(&self, a: &str, t: u64, l: Var, r: Var) -> Fo2 {
        let j = self.index[a];
        let m = self.counters[j].modulus();
        let seen = |c: usize| self.between(l, r, |x| x.state[j].1 == c);
        // Occurrences strictly between, modulo overflows: P(r) − P(l) − [a(l)].
        let diff_at_least = |need: i64| {
            Fo2::any((0..m).flat_map(|pl| {
                [true, false].into_iter().map(move |here| (pl, here))
            }).map(|(pl, here)| {
                let own = self.unary(l, |x| x.state[j].0 == pl && (x.base == a) == here);
                let ok = Fo2::any((0..m).filter(|&pr| {
                    pr as i64 - pl as i64 - here as i64 >= need
                }).map(|pr| self.value(j, r, pr)));
                Fo2::conj(own, ok)
            }))
        };
        let cases = (0..3).map(|k| {
            let k1 = (k + 1) % 3;
            let k2 = (k + 2) % 3;
            let all_three = Fo2::all([seen(k), seen(k1), seen(k2)]);
            let same = Fo2::disj(
                Fo2::disj(seen(k1), seen(k2)),
                Fo2::conj(Fo2::neg(Fo2::disj(seen(k1), seen(k2))), diff_at_least(t as i64)),
            );
            let next = Fo2::disj(
                all_three.clone(),
                Fo2::conj(Fo2::neg(all_three), diff_at_least(t as i64 - m as i64)),
            );
            Fo2::conj(
                self.colour(j, l, k),
                Fo2::any([
                    Fo2::conj(self.colour(j, r, k), same),
                    Fo2::conj(self.colour(j, r, k1), next),
                    self.colour(j, r, k2),
                ]),
            )
        });
        Fo2::conj(Fo2::less(l, r), Fo2::any(cases))
    }

    fn translate(&self, f: &Fo2) -> Result<Fo2> {
        Ok(match f.kind() {
            Fo2Kind::True | Fo2Kind::False | Fo2Kind::Less(..) | Fo2Kind::LessEq(..) => f.clone(),
            Fo2Kind::Letter(a, v) => self.unary(*v, |x| x.base == *a),
            Fo2Kind::Suc(a, b) if a == b => Fo2::ff(),
            Fo2Kind::Suc(a, b) => self.suc(*a, *b),
            Fo2Kind::Between(c, a, b) | Fo2Kind::Threshold(c, 1, a, b) => {
                self.between(*a, *b, |x| x.base == *c)
            }
            Fo2Kind::Threshold(_, 0, ..) => Fo2::tt(),
            Fo2Kind::Threshold(_, _, a, b) if a == b => Fo2::ff(),
            Fo2Kind::Threshold(c, t, a, b) => self.threshold(c, *t, *a, *b),
            Fo2Kind::BetweenFactor(..) | Fo2Kind::FactorThreshold(..) => {
                return Err(Error::Unsupported(format!("factor atom {f}")))
            }
            Fo2Kind::Not(a) => Fo2::neg(self.translate(a)?),
            Fo2Kind::And(a, b) => Fo2::conj(self.translate(a)?, self.translate(b)?),
            Fo2Kind::Or(a, b) => Fo2::disj(self.translate(a)?, self.translate(b)?),
            Fo2Kind::Exists(v, a) => Fo2::exists(*v, self.translate(a)?),
            Fo2Kind::Forall(v, a) => Fo2::forall(*v, self.translate(a)?),
        })
    }
}

fn collect_thresholds(f: &Fo2, out: &mut BTreeMap<String, u64>) {
    match f.kind() {
        Fo2Kind::Threshold(a, t, l, r) if *t >= 2 && l != r => {
            let e = out.entry(a.clone()).or_insert(0);
            *e = (*e).max(*t);
        }
        Fo2Kind::Not(a) | Fo2Kind::Exists(_, a) | Fo2Kind::Forall(_, a) => collect_thresholds(a, out),
        Fo2Kind::And(a, b) | Fo2Kind::Or(a, b) => {
            collect_thresholds(a, out);
            collect_thresholds(b, out);
        }
        _ => {}
    }
}

/// An equisatisfiable FO²[<,bet] sentence for an FO²[<,th] sentence. Each
/// letter a counted with a threshold t ≥ 2 gets a global counter of
/// r = ⌈log₂ t⌉ bits and three overflow colours, carried in the letters of
/// the enlarged alphabet. `#a(x,y) ≥ t` then compares the counters at x
/// and y, using which colours occur in between to bound the overflows.
pub fn fo2_threshold_to_between(phi: &Fo2, alphabet: &Alphabet) -> Result<ThresholdReduction> {
    for a in phi.letters() {
        if !alphabet.contains(&a) {
            return Err(Error::UnknownLetter(a));
        }
    }
    let mut wanted = BTreeMap::new();
    collect_thresholds(phi, &mut wanted);
    let counters: Vec<Counter> = wanted
        .iter()
        .map(|(a, t)| Counter {
            letter: a.clone(),
            bits: crate::syntax::ceil_log2(*t).max(1),
        })
        .collect();
    let mut states: Vec<Vec<(u64, usize)>> = vec![vec![]];
    for c in &counters {
        states = states
            .into_iter()
            .flat_map(|s| {
                (0..c.modulus()).flat_map(move |v| {
                    let s = s.clone();
                    (0..3).map(move |k| {
                        let mut s = s.clone();
                        s.push((v, k));
                        s
                    })
                })
            })
            .collect();
    }
    let mut letters = Vec::new();
    for a in alphabet.letters() {
        if a.contains('_') && !counters.is_empty() {
            return Err(Error::InvalidAlphabet(format!("letter `{a}` contains `_`")));
        }
        for s in &states {
            let ann = Annotated {
                base: a.clone(),
                state: s.clone(),
            };
            letters.push((annotated_name(&ann, &counters), ann));
        }
    }
    let reducer = Reducer {
        counters: &counters,
        index: counters.iter().enumerate().map(|(i, c)| (c.letter.clone(), i)).collect(),
        letters,
    };
    let mut parts = vec![reducer.translate(phi)?];
    for j in 0..counters.len() {
        parts.extend(reducer.constraints(j));
    }
    let enlarged = Alphabet::new(reducer.letters.iter().map(|(n, _)| n.clone()))?;
    Ok(ThresholdReduction {
        formula: Fo2::all(parts),
        alphabet: enlarged,
        counters,
        base: alphabet.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::eval_fo2_sentence;
    use crate::syntax::parse_fo2;

    fn trivial() -> TilingInstance {
        TilingInstance {
            tiles: vec!["t".into()],
            horizontal: vec![("t".into(), "t".into())],
            vertical: vec![("t".into(), "t".into())],
            start: "t".into(),
            finish: "t".into(),
            n: 1,
        }
    }

    #[test]
    fn trivial_tiling_has_encoded_models() {
        let m = trivial();
        let (phi, alphabet) = encode_tiling(&m).unwrap();
        assert_eq!(alphabet.len(), 5);
        assert!(phi.is_sentence());
        let row = vec!["t".to_string(), "t".to_string()];
        for rows in 1..=3 {
            let w = m.encode_solution(&vec![row.clone(); rows]);
            assert!(eval_fo2_sentence(&phi, &w).unwrap(), "{w}");
        }
        let half = Word::new(["t_r", "0"]);
        assert!(!eval_fo2_sentence(&phi, &half).unwrap());
        let wrong_colour = Word::new(["t_r", "0", "t_g", "1"]);
        assert!(!eval_fo2_sentence(&phi, &wrong_colour).unwrap());
        assert!(!eval_fo2_sentence(&phi, &Word::empty()).unwrap());
    }

    #[test]
    fn tiling_checks_neighbours() {
        let mut m = TilingInstance {
            tiles: vec!["p".into(), "q".into()],
            horizontal: vec![("p".into(), "q".into())],
            vertical: vec![("p".into(), "p".into()), ("q".into(), "q".into())],
            start: "p".into(),
            finish: "q".into(),
            n: 1,
        };
        let (phi, _) = encode_tiling(&m).unwrap();
        let pq = vec!["p".to_string(), "q".to_string()];
        let qp = vec!["q".to_string(), "p".to_string()];
        assert!(eval_fo2_sentence(&phi, &m.encode_solution(&[pq.clone(), pq.clone()])).unwrap());
        m.horizontal.push(("q".into(), "p".into()));
        let (phi, _) = encode_tiling(&m).unwrap();
        assert!(!eval_fo2_sentence(&phi, &m.encode_solution(&[pq.clone(), qp])).unwrap());
        m.n = 2;
        let (phi, _) = encode_tiling(&m).unwrap();
        let wide: Vec<String> = ["p", "q", "p", "q"].map(String::from).to_vec();
        assert!(eval_fo2_sentence(&phi, &m.encode_solution(&[wide.clone(), wide])).unwrap());
        assert!(!eval_fo2_sentence(&phi, &m.encode_solution(&[pq])).unwrap());
    }

    #[test]
    fn malformed_instances_are_rejected() {
        let mut m = trivial();
        m.n = 0;
        assert!(encode_tiling(&m).is_err());
        let mut m = trivial();
        m.finish = "u".into();
        assert!(encode_tiling(&m).is_err());
    }

    #[test]
    fn thresholds_become_counters() {
        let ab = Alphabet::parse("ab").unwrap();
        let phi = parse_fo2("exists x. exists y. th(a,4)(x,y)", Some(&ab)).unwrap();
        let red = fo2_threshold_to_between(&phi, &ab).unwrap();
        assert_eq!(red.counters, [Counter { letter: "a".into(), bits: 2 }]);
        assert_eq!(red.alphabet.len(), 2 * 4 * 3);
        for len in 0..=9 {
            for idx in ab.words_of_len(len) {
                let w = Word::from_indices(&ab, &idx);
                let ann = red.annotate(&w).unwrap();
                assert_eq!(red.project(&ann), w);
                assert_eq!(
                    eval_fo2_sentence(&phi, &w).unwrap(),
                    eval_fo2_sentence(&red.formula, &ann).unwrap(),
                    "{w}"
                );
            }
        }
    }

    #[test]
    fn threshold_comparisons_under_overflow() {
        let ab = Alphabet::parse("ab").unwrap();
        for text in [
            "forall x. forall y. (b(x) & b(y) & x<y -> th(a,2)(x,y) | !a(x,y))",
            "exists x. (a(x) & forall y. (x<y -> !th(a,3)(x,y)))",
            "exists x. exists y. (th(a,2)(x,y) & !th(a,3)(x,y) & th(b,2)(x,y))",
        ] {
            let phi = parse_fo2(text, Some(&ab)).unwrap();
            let red = fo2_threshold_to_between(&phi, &ab).unwrap();
            for len in 0..=9 {
                for idx in ab.words_of_len(len) {
                    let w = Word::from_indices(&ab, &idx);
                    let ann = red.annotate(&w).unwrap();
                    assert_eq!(
                        eval_fo2_sentence(&phi, &w).unwrap(),
                        eval_fo2_sentence(&red.formula, &ann).unwrap(),
                        "{text} on {w}"
                    );
                }
            }
        }
    }
}
