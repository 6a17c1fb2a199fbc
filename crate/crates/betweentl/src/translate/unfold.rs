//! Threshold unfolding. A conjunction of counting constraints is unfolded
//! into a chain of jumps over explicitly counted occurrences, tracking the
//! count of every subject up to one more than its largest bound.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::syntax::{end_of, Cmp, Constraint, Fragment, Guard, Subject, Tl, TlKind, Word};

use super::dnf::{conjunct_guard, guard_to_dnf, Conjunct};
use super::try_rewrite;

/// Largest threshold bound unfolded by default.
pub const DEFAULT_CAP: u64 = 8;

/// Counting state machine shared by the letter and factor unfoldings.
struct Counter {
    /// Per constraint: counted patterns, comparator, bound.
    constraints: Vec<(Vec<usize>, Cmp, u64)>,
    caps: Vec<u64>,
    viable: HashMap<Vec<u64>, bool>,
    settled: HashMap<Vec<u64>, bool>,
}

impl Counter {
    fn new(constraints: Vec<(Vec<usize>, Cmp, u64)>, patterns: usize, cap: u64) -> Result<Self> {
        let mut caps = vec![0u64; patterns];
        for (ps, _, bound) in &constraints {
            if *bound > cap {
                return Err(Error::CapExceeded { bound: *bound, cap });
            }
            for &p in ps {
                caps[p] = caps[p].max(bound + 1);
            }
        }
        Ok(Counter {
            constraints,
            caps,
            viable: HashMap::new(),
            settled: HashMap::new(),
        })
    }

    /// The constraints hold for counts `n`; saturated counts stand for
    /// anything above every bound they take part in.
    fn accepts(&self, n: &[u64]) -> bool {
        self.constraints.iter().all(|(ps, cmp, bound)| {
            let saturated = ps.iter().any(|&p| n[p] >= self.caps[p]);
            let count = if saturated {
                bound + 1
            } else {
                ps.iter().map(|&p| n[p]).sum()
            };
            cmp.holds(count, *bound)
        })
    }

    fn unsaturated(&self, n: &[u64]) -> Vec<usize> {
        (0..n.len()).filter(|&p| n[p] < self.caps[p]).collect()
    }

    fn bump(&self, n: &[u64], ps: &[usize]) -> Vec<u64> {
        let mut m = n.to_vec();
        for &p in ps {
            m[p] = (m[p] + 1).min(self.caps[p]);
        }
        m
    }

    /// Some count vector above `n` is accepted.
    fn is_viable(&mut self, n: &[u64]) -> bool {
        if let Some(&v) = self.viable.get(n) {
            return v;
        }
        let v = self.accepts(n)
            || self.unsaturated(n).into_iter().any(|p| {
                let m = self.bump(n, &[p]);
                self.is_viable(&m)
            });
        self.viable.insert(n.to_vec(), v);
        v
    }

    /// Every count vector above `n` is accepted.
    fn is_settled(&mut self, n: &[u64]) -> bool {
        if let Some(&v) = self.settled.get(n) {
            return v;
        }
        let v = self.accepts(n)
            && self.unsaturated(n).into_iter().all(|p| {
                let m = self.bump(n, &[p]);
                self.is_settled(&m)
            });
        self.settled.insert(n.to_vec(), v);
        v
    }
}

fn modal(future: bool, guard: Option<Guard>, body: Tl) -> Tl {
    if body.is_false() {
        return body;
    }
    match (future, guard) {
        (true, Some(g)) => Tl::future_g(g, body),
        (true, None) => Tl::future(body),
        (false, Some(g)) => Tl::past_g(g, body),
        (false, None) => Tl::past(body),
    }
}

/// Unfolds a conjunction of letter-set constraints into single-invariance
/// modalities:
/// Φₙ = [acc(n) ∧ F_{#S(n)=0} γ] ∨ ⋁_{a ∈ S(n)} F_{#S(n)=0}(a ∧ Φₙ₊ₐ),
/// with S(n) the tracked letters whose count is not yet saturated.
pub fn unfold_letter_conjunct(cs: &[Constraint], gamma: &Tl, future: bool, cap: u64) -> Result<Tl> {
    let mut letters: BTreeSet<String> = BTreeSet::new();
    for c in cs {
        match &c.subject {
            Subject::Letters(b) => letters.extend(b.iter().cloned()),
            Subject::Factor(_) => {
                return Err(Error::Precondition("letter constraints expected".into()))
            }
        }
    }
    let letters: Vec<String> = letters.into_iter().collect();
    let index: HashMap<&String, usize> = letters.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let constraints = cs
        .iter()
        .map(|c| match &c.subject {
            Subject::Letters(b) => (b.iter().map(|a| index[a]).collect(), c.cmp, c.bound),
            Subject::Factor(_) => unreachable!(),
        })
        .collect();
    let mut counter = Counter::new(constraints, letters.len(), cap)?;
    let mut memo: HashMap<Vec<u64>, Tl> = HashMap::new();
    Ok(letter_state(&mut counter, &mut memo, &letters, &vec![0; letters.len()], gamma, future))
}

fn letter_state(
    counter: &mut Counter,
    memo: &mut HashMap<Vec<u64>, Tl>,
    letters: &[String],
    n: &[u64],
    gamma: &Tl,
    future: bool,
) -> Tl {
    if let Some(t) = memo.get(n) {
        return t.clone();
    }
    let out = if !counter.is_viable(n) {
        Tl::ff()
    } else if counter.is_settled(n) {
        modal(future, None, gamma.clone())
    } else {
        let open = counter.unsaturated(n);
        let guard = Guard::none_of(open.iter().map(|&p| letters[p].clone()));
        let guard = if open.is_empty() { None } else { Some(guard) };
        let mut parts = Vec::new();
        if counter.accepts(n) {
            parts.push(modal(future, guard.clone(), gamma.clone()));
        }
        for &p in &open {
            let m = counter.bump(n, &[p]);
            let next = letter_state(counter, memo, letters, &m, gamma, future);
            parts.push(modal(future, guard.clone(), Tl::conj(Tl::letter(&letters[p]), next)));
        }
        Tl::any(parts)
    };
    memo.insert(n.to_vec(), out.clone());
    out
}

/// Unfolds an arbitrary conjunction of letter-set and factor constraints
/// directly into LTL by counting occurrence ends. The first |u|−1 positions
/// after the origin are stepped explicitly, since a pattern only counts once
/// it fits entirely after the origin; afterwards
/// Jₙ = (¬E_{S(n)}) U ([acc(n) ∧ γ] ∨ ⋁_{∅≠E⊆S(n)} (Exact_E ∧ J_{n+E})),
/// where E_S says some unsaturated pattern ends here.
pub fn unfold_factor_conjunct(cs: &[Constraint], gamma: &Tl, future: bool, cap: u64) -> Result<Tl> {
    if !future {
        let mirrored: Vec<Constraint> = cs
            .iter()
            .map(|c| {
                let mut c = c.clone();
                if let Subject::Factor(u) = &mut c.subject {
                    u.reverse();
                }
                c
            })
            .collect();
        return Ok(unfold_factor_conjunct(&mirrored, &gamma.mirror(), true, cap)?.mirror());
    }
    let mut patterns: Vec<Vec<String>> = Vec::new();
    let mut intern = |u: Vec<String>| -> usize {
        if let Some(i) = patterns.iter().position(|p| *p == u) {
            i
        } else {
            patterns.push(u);
            patterns.len() - 1
        }
    };
    let mut constraints = Vec::new();
    for c in cs {
        let ps: Vec<usize> = match &c.subject {
            Subject::Letters(b) => b.iter().map(|a| intern(vec![a.clone()])).collect(),
            Subject::Factor(u) => {
                if u.is_empty() {
                    return Err(Error::MalformedGuard("empty factor".into()));
                }
                vec![intern(u.clone())]
            }
        };
        constraints.push((ps, c.cmp, c.bound));
    }
    let counter = Counter::new(constraints, patterns.len(), cap)?;
    let ends = patterns.iter().map(|u| end_of(&Word::new(u.clone()))).collect();
    let mut b = FactorBuilder {
        counter,
        patterns,
        ends,
        gamma: gamma.clone(),
        explicit: HashMap::new(),
        jump: HashMap::new(),
    };
    let longest = b.patterns.iter().map(Vec::len).max().unwrap_or(1);
    let zero = vec![0; b.patterns.len()];
    Ok(b.explicit_state(0, &zero, longest))
}

struct FactorBuilder {
    counter: Counter,
    patterns: Vec<Vec<String>>,
    ends: Vec<Tl>,
    gamma: Tl,
    explicit: HashMap<(usize, Vec<u64>), Tl>,
    jump: HashMap<Vec<u64>, Tl>,
}

impl FactorBuilder {
    fn is_suffix(&self, short: usize, long: usize) -> bool {
        let (s, l) = (&self.patterns[short], &self.patterns[long]);
        s.len() <= l.len() && l[l.len() - s.len()..] == s[..]
    }

    /// Exactly the patterns of `chosen` among `among` end here, or `None`
    /// if that is impossible.
    fn exact(&self, chosen: &[usize], among: &[usize]) -> Option<Tl> {
        for &p in chosen {
            for &q in chosen {
                if !self.is_suffix(p, q) && !self.is_suffix(q, p) {
                    return None;
                }
            }
            for &q in among {
                if !chosen.contains(&q) && self.is_suffix(q, p) {
                    return None;
                }
            }
        }
        Some(Tl::all(among.iter().map(|&p| {
            if chosen.contains(&p) {
                self.ends[p].clone()
            } else {
                Tl::neg(self.ends[p].clone())
            }
        })))
    }

    fn subsets(items: &[usize]) -> Vec<Vec<usize>> {
        (0u32..1 << items.len())
            .map(|mask| {
                items
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, &p)| p)
                    .collect()
            })
            .collect()
    }

    /// Evaluated `d` positions after the origin with counts `n`.
    fn explicit_state(&mut self, d: usize, n: &[u64], longest: usize) -> Tl {
        if let Some(t) = self.explicit.get(&(d, n.to_vec())) {
            return t.clone();
        }
        let out = if !self.counter.is_viable(n) {
            Tl::ff()
        } else if self.counter.is_settled(n) {
            Tl::future(self.gamma.clone())
        } else if d + 1 >= longest {
            self.jump_state(n)
        } else {
            let valid: Vec<usize> = self
                .counter
                .unsaturated(n)
                .into_iter()
                .filter(|&p| self.patterns[p].len() <= d + 1)
                .collect();
            let mut parts = Vec::new();
            if self.counter.accepts(n) {
                parts.push(self.gamma.clone());
            }
            for e in Self::subsets(&valid) {
                if let Some(exact) = self.exact(&e, &valid) {
                    let m = self.counter.bump(n, &e);
                    let next = self.explicit_state(d + 1, &m, longest);
                    parts.push(Tl::conj(exact, next));
                }
            }
            Tl::next_k(1, Tl::any(parts))
        };
        self.explicit.insert((d, n.to_vec()), out.clone());
        out
    }

    fn jump_state(&mut self, n: &[u64]) -> Tl {
        if let Some(t) = self.jump.get(n) {
            return t.clone();
        }
        let out = if !self.counter.is_viable(n) {
            Tl::ff()
        } else if self.counter.is_settled(n) {
            Tl::future(self.gamma.clone())
        } else {
            let open = self.counter.unsaturated(n);
            let mut parts = Vec::new();
            if self.counter.accepts(n) {
                parts.push(self.gamma.clone());
            }
            for e in Self::subsets(&open) {
                if e.is_empty() {
                    continue;
                }
                if let Some(exact) = self.exact(&e, &open) {
                    let m = self.counter.bump(n, &e);
                    let next = self.jump_state(&m);
                    parts.push(Tl::conj(exact, next));
                }
            }
            let target = Tl::any(parts);
            if target.is_false() {
                target
            } else {
                let quiet = Tl::all(open.iter().map(|&p| Tl::neg(self.ends[p].clone())));
                Tl::until(quiet, target)
            }
        };
        self.jump.insert(n.to_vec(), out.clone());
        out
    }
}

/// How a conjunct is handled by the unfolding stage.
enum Route {
    Letters,
    Requirements,
    Counting,
}

fn route(c: &Conjunct) -> Route {
    if c.iter().all(|c| !c.is_factor()) {
        Route::Letters
    } else if c.iter().all(|c| c.requirement().is_some()) {
        Route::Requirements
    } else {
        Route::Counting
    }
}

/// Presence and absence requirements as factor atoms `+u` / `!v`. A present
/// letter set splits into one alternative per letter.
fn requirement_alternatives(c: &Conjunct) -> Vec<Guard> {
    let mut alternatives: Vec<Vec<Constraint>> = vec![vec![]];
    for con in c {
        let present = con.requirement().expect("requirement");
        let words: Vec<Vec<String>> = match &con.subject {
            Subject::Letters(b) => b.iter().map(|a| vec![a.clone()]).collect(),
            Subject::Factor(u) => vec![u.clone()],
        };
        if present {
            let mut next = Vec::new();
            for alt in &alternatives {
                for u in &words {
                    let mut a = alt.clone();
                    let atom = Constraint::factor(u.clone(), Cmp::Gt, 0);
                    if !a.contains(&atom) {
                        a.push(atom);
                    }
                    next.push(a);
                }
            }
            alternatives = next;
        } else {
            for alt in &mut alternatives {
                for u in &words {
                    let atom = Constraint::factor(u.clone(), Cmp::Eq, 0);
                    if !alt.contains(&atom) {
                        alt.push(atom);
                    }
                }
            }
        }
    }
    alternatives
        .into_iter()
        .map(|a| conjunct_guard(&a).unwrap_or_else(|| Guard::none_of(Vec::<String>::new())))
        .collect()
}

fn unfold_conjunct(c: &Conjunct, gamma: &Tl, future: bool, cap: u64) -> Result<Tl> {
    if c.is_empty() {
        return Ok(modal(future, None, gamma.clone()));
    }
    match route(c) {
        Route::Letters => unfold_letter_conjunct(c, gamma, future, cap),
        Route::Requirements => Ok(Tl::any(
            requirement_alternatives(c)
                .into_iter()
                .map(|g| modal(future, Some(g), gamma.clone())),
        )),
        Route::Counting => unfold_factor_conjunct(c, gamma, future, cap),
    }
}

/// The unfolding stage: letter thresholds become single invariances,
/// factor presence/absence conjunctions become requirement guards, and
/// factor thresholds are counted directly in LTL.
pub(crate) fn unfold_stage(phi: &Tl, cap: u64) -> Result<Tl> {
    try_rewrite(phi, |node, kids| {
        let (future, g) = match node.kind() {
            TlKind::Future(Some(g), _) => (true, g),
            TlKind::Past(Some(g), _) => (false, g),
            _ => return Ok(None),
        };
        let parts = guard_to_dnf(g)
            .iter()
            .map(|c| unfold_conjunct(c, &kids[0], future, cap))
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(Tl::any(parts)))
    })
}

fn unfold_letters_only(phi: &Tl, cap: u64, fragment: Fragment) -> Result<Tl> {
    try_rewrite(phi, |node, kids| {
        let (future, g) = match node.kind() {
            TlKind::Future(Some(g), _) => (true, g),
            TlKind::Past(Some(g), _) => (false, g),
            _ => return Ok(None),
        };
        if !g.belongs_to(fragment) {
            return Err(Error::Precondition(format!("guard {g} is outside the {fragment:?} fragment")));
        }
        let parts = guard_to_dnf(g)
            .iter()
            .map(|c| {
                if c.is_empty() {
                    Ok(modal(future, None, kids[0].clone()))
                } else {
                    unfold_letter_conjunct(c, &kids[0], future, cap)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(Tl::any(parts)))
    })
}

/// Boolean threshold guards to invariance guards. The result uses single
/// `#B=0` guards only, so it also lies in the boolean-invariance fragment.
pub fn bth_to_binv(phi: &Tl, cap: u64) -> Result<Tl> {
    unfold_letters_only(phi, cap, Fragment::BTh)
}

/// Boolean invariance guards to single invariance guards, enumerating the
/// orders in which the required letters first appear.
pub fn binv_to_inv(phi: &Tl) -> Result<Tl> {
    unfold_letters_only(phi, 1, Fragment::BInv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::TlProgram;
    use crate::syntax::{parse_tl, Alphabet};

    fn equivalent(a: &Tl, b: &Tl, alphabet: &Alphabet, max_len: usize) -> bool {
        let pa = TlProgram::compile(a, alphabet);
        let pb = TlProgram::compile(b, alphabet);
        (0..=max_len).all(|len| {
            alphabet
                .words_of_len(len)
                .all(|w| pa.eval_positions(&w) == pb.eval_positions(&w))
        })
    }

    #[test]
    fn letter_unfolding_shapes() {
        let abc = Alphabet::parse("abcd").unwrap();
        let phi = parse_tl("F[#{a}=0 & #{b}>0 & #{c}>0] d", &abc).unwrap();
        let out = binv_to_inv(&phi).unwrap();
        assert_eq!(
            out.to_string(),
            "F[#{a,b,c}=0] (b & F[#{a,c}=0] (c & F[#{a}=0] d)) | F[#{a,b,c}=0] (c & F[#{a,b}=0] (b & F[#{a}=0] d))"
        );
        assert!(equivalent(&phi, &out, &abc, 6));
        let phi = parse_tl("F[#{a}=0] b", &abc).unwrap();
        assert_eq!(binv_to_inv(&phi).unwrap(), phi);
        let phi = parse_tl("F[#{a}>0] b", &abc).unwrap();
        assert_eq!(binv_to_inv(&phi).unwrap().to_string(), "F[#{a}=0] (a & F b)");
    }

    #[test]
    fn threshold_unfolding_shapes() {
        let ab = Alphabet::parse("ab").unwrap();
        let phi = parse_tl("F[#{a}>=1] b", &ab).unwrap();
        assert_eq!(bth_to_binv(&phi, 8).unwrap().to_string(), "F[#{a}=0] (a & F b)");
        let phi = parse_tl("F[#{a}>=0] b", &ab).unwrap();
        assert_eq!(bth_to_binv(&phi, 8).unwrap().to_string(), "F b");
        let phi = parse_tl("F[#{a}>=2] b", &ab).unwrap();
        let out = bth_to_binv(&phi, 8).unwrap();
        assert_eq!(out.to_string(), "F[#{a}=0] (a & F[#{a}=0] (a & F b))");
        assert!(equivalent(&phi, &out, &ab, 8));
        let phi = parse_tl("F[#{a}>=9] b", &ab).unwrap();
        assert_eq!(
            bth_to_binv(&phi, 8),
            Err(Error::CapExceeded { bound: 9, cap: 8 })
        );
    }

    #[test]
    fn letter_unfolding_is_equivalent() {
        let ab = Alphabet::parse("abc").unwrap();
        for text in [
            "F[#{a}=2 & #{b}=0] true",
            "P[#{a,b}<3 & #{c}>=1] a",
            "F[!(#{a}=1) | #{b,c}>2] c",
            "P[#{a}=1 & #{b}=1] (a | b)",
        ] {
            let phi = parse_tl(text, &ab).unwrap();
            let out = bth_to_binv(&phi, 8).unwrap();
            assert!(out
                .topological()
                .iter()
                .all(|n| match n.kind() {
                    TlKind::Future(Some(g), _) | TlKind::Past(Some(g), _) =>
                        g.fragment() == Fragment::Inv,
                    _ => true,
                }));
            assert!(equivalent(&phi, &out, &ab, 7), "{text}");
        }
    }

    #[test]
    fn factor_counting_is_equivalent() {
        let ab = Alphabet::parse("ab").unwrap();
        for text in [
            "F[#\"ab\">=2] b",
            "F[#\"aa\"=1] b",
            "F[#\"aba\"<2 & #\"ab\">1] a",
            "P[#\"ab\"=1 & #{a}>=2] b",
            "F[#\"ab\">=1 & #\"ba\"<=1 & #{b}<3] true",
        ] {
            let phi = parse_tl(text, &ab).unwrap();
            let out = unfold_stage(&phi, 8).unwrap();
            assert!(out.is_ltl(), "{out}");
            assert!(equivalent(&phi, &out, &ab, 9), "{text}");
        }
    }
}
