//! Finite semigroups and monoids given by multiplication tables.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::ops::Deref;

use serde::Serialize;

use crate::error::{Error, Result};

use super::dfa::Dfa;

pub const DEFAULT_ELEMENT_BUDGET: usize = 5000;

/// A finite semigroup; elements are `0..size()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSemigroup {
    names: Vec<String>,
    table: Vec<u32>,
    generators: Vec<(String, usize)>,
    identity: Option<usize>,
    accepting: Vec<bool>,
}

/// A finite semigroup with a distinguished identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMonoid(FiniteSemigroup);

impl Deref for FiniteMonoid {
    type Target = FiniteSemigroup;

    fn deref(&self) -> &FiniteSemigroup {
        &self.0
    }
}

#[derive(Serialize)]
struct TableJson<'a> {
    elements: &'a [String],
    identity: Option<&'a str>,
    generators: BTreeMap<&'a str, &'a str>,
    accepting: Vec<&'a str>,
    table: Vec<Vec<&'a str>>,
}

impl Serialize for FiniteSemigroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.size();
        TableJson {
            elements: &self.names,
            identity: self.identity.map(|e| self.name(e)),
            generators: self.generators.iter().map(|(l, g)| (l.as_str(), self.name(*g))).collect(),
            accepting: (0..n).filter(|&i| self.accepting[i]).map(|i| self.name(i)).collect(),
            table: (0..n)
                .map(|i| (0..n).map(|j| self.name(self.mul(i, j))).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl Serialize for FiniteMonoid {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

fn compose(f: &[u32], g: &[u32]) -> Vec<u32> {
    f.iter().map(|&q| g[q as usize]).collect()
}

fn closure(dfa: &Dfa, with_identity: bool, budget: usize) -> Result<FiniteSemigroup> {
    let letters = dfa.alphabet().letters();
    let single = letters.iter().all(|l| l.chars().count() == 1);
    let join = |prefix: &str, letter: &str| match (prefix.is_empty(), single) {
        (true, _) => letter.to_string(),
        (false, true) => format!("{prefix}{letter}"),
        (false, false) => format!("{prefix}.{letter}"),
    };
    let n = dfa.states();
    let gens: Vec<Vec<u32>> = (0..letters.len())
        .map(|a| (0..n).map(|q| dfa.step(q, a) as u32).collect())
        .collect();
    let mut elements: Vec<Vec<u32>> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    // Each element is its parent times a generator, or a root (identity or letter).
    let mut parent: Vec<Option<(usize, usize)>> = Vec::new();
    let mut root_letter: Vec<Option<usize>> = Vec::new();
    let over = |len: usize| {
        if len > budget {
            Err(Error::Budget(format!("semigroup exceeds {budget} elements")))
        } else {
            Ok(())
        }
    };
    let identity = if with_identity {
        let id: Vec<u32> = (0..n as u32).collect();
        index.insert(id.clone(), 0);
        elements.push(id);
        names.push("1".into());
        parent.push(None);
        root_letter.push(None);
        Some(0)
    } else {
        None
    };
    let mut generators = Vec::new();
    for (a, g) in gens.iter().enumerate() {
        let id = match index.get(g) {
            Some(&id) => id,
            None => {
                index.insert(g.clone(), elements.len());
                elements.push(g.clone());
                names.push(letters[a].clone());
                parent.push(None);
                root_letter.push(Some(a));
                elements.len() - 1
            }
        };
        generators.push((letters[a].clone(), id));
    }
    over(elements.len())?;
    let mut right: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < elements.len() {
        let mut row = Vec::with_capacity(gens.len());
        for (a, g) in gens.iter().enumerate() {
            let t = compose(&elements[i], g);
            let id = match index.get(&t) {
                Some(&id) => id,
                None => {
                    let id = elements.len();
                    index.insert(t.clone(), id);
                    elements.push(t);
                    let base = if Some(i) == identity { "" } else { names[i].as_str() };
                    names.push(join(base, &letters[a]));
                    parent.push(Some((i, a)));
                    root_letter.push(None);
                    over(elements.len())?;
                    id
                }
            };
            row.push(id);
        }
        right.push(row);
        i += 1;
    }
    let size = elements.len();
    let mut table = vec![0u32; size * size];
    for j in 0..size {
        for i in 0..size {
            let v = if Some(j) == identity {
                i
            } else if let Some(a) = root_letter[j] {
                right[i][a]
            } else {
                let (p, a) = parent[j].expect("derived element");
                right[table[i * size + p] as usize][a]
            };
            table[i * size + j] = v as u32;
        }
    }
    let accepting = elements
        .iter()
        .map(|t| dfa.is_final(t[dfa.initial()] as usize))
        .collect();
    Ok(FiniteSemigroup {
        names,
        table,
        generators,
        identity,
        accepting,
    })
}

/// Transition monoid of the minimal automaton, identity included.
pub fn syntactic_monoid(dfa: &Dfa, budget: usize) -> Result<FiniteMonoid> {
    closure(&dfa.minimize(), true, budget).map(FiniteMonoid)
}

/// Images of nonempty words under the transition morphism of the minimal automaton.
pub fn syntactic_semigroup(dfa: &Dfa, budget: usize) -> Result<FiniteSemigroup> {
    closure(&dfa.minimize(), false, budget)
}

impl FiniteSemigroup {
    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size() + b] as usize
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn identity(&self) -> Option<usize> {
        self.identity
    }

    pub fn generators(&self) -> &[(String, usize)] {
        &self.generators
    }

    pub fn generator(&self, letter: usize) -> usize {
        self.generators[letter].1
    }

    pub fn is_accepting(&self, a: usize) -> bool {
        self.accepting[a]
    }

    /// Image of a word of letter indices; `None` for the empty word without identity.
    pub fn eval(&self, word: &[usize]) -> Option<usize> {
        let mut it = word.iter().map(|&a| self.generator(a));
        let first = it.next().or(self.identity)?;
        Some(it.fold(first, |acc, g| self.mul(acc, g)))
    }

    pub fn product(&self, parts: &[usize]) -> Option<usize> {
        parts.iter().copied().reduce(|a, b| self.mul(a, b)).or(self.identity)
    }

    pub fn is_idempotent(&self, e: usize) -> bool {
        self.mul(e, e) == e
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.size()).filter(|&e| self.is_idempotent(e)).collect()
    }

    /// The unique idempotent power of `m`.
    pub fn omega_power(&self, m: usize) -> usize {
        let mut p = m;
        while !self.is_idempotent(p) {
            p = self.mul(p, m);
        }
        p
    }

    pub fn is_associative(&self) -> bool {
        let n = self.size();
        (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)))))
    }

    pub fn identity_laws_hold(&self) -> bool {
        self.identity
            .is_none_or(|e| (0..self.size()).all(|a| self.mul(e, a) == a && self.mul(a, e) == a))
    }

    /// Whether the generators generate every element.
    pub fn is_generated(&self) -> bool {
        let gens: Vec<usize> = self.generators.iter().map(|g| g.1).collect();
        let mut seen = vec![false; self.size()];
        let mut queue: VecDeque<usize> = gens.iter().copied().chain(self.identity).collect();
        for &g in &queue {
            seen[g] = true;
        }
        while let Some(a) = queue.pop_front() {
            for &g in &gens {
                let b = self.mul(a, g);
                if !seen[b] {
                    seen[b] = true;
                    queue.push_back(b);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    fn cayley_gens(&self) -> Vec<usize> {
        let mut gens: Vec<usize> = self.generators.iter().map(|g| g.1).collect();
        gens.sort_unstable();
        gens.dedup();
        gens
    }

    /// `s1 ≤_J s2`, that is s1 ∈ S¹ s2 S¹.
    pub fn j_leq(&self, s1: usize, s2: usize) -> bool {
        self.ideal(s2)[s1]
    }

    /// Membership vector of the two-sided ideal S¹ s S¹.
    pub fn ideal(&self, s: usize) -> Vec<bool> {
        let gens = self.cayley_gens();
        let mut seen = vec![false; self.size()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(a) = stack.pop() {
            for &g in &gens {
                for b in [self.mul(a, g), self.mul(g, a)] {
                    if !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        seen
    }

    /// Elements m with e ≤_J m.
    pub fn above(&self, e: usize) -> Vec<usize> {
        let gens = self.cayley_gens();
        let n = self.size();
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for a in 0..n {
            for &g in &gens {
                preds[self.mul(a, g)].push(a);
                preds[self.mul(g, a)].push(a);
            }
        }
        let mut seen = vec![false; n];
        seen[e] = true;
        let mut stack = vec![e];
        while let Some(b) = stack.pop() {
            for &a in &preds[b] {
                if !seen[a] {
                    seen[a] = true;
                    stack.push(a);
                }
            }
        }
        (0..n).filter(|&a| seen[a]).collect()
    }

    /// Closure of `gens` (plus `unit`, if any) under multiplication, sorted.
    pub fn generate(&self, gens: &[usize], unit: Option<usize>) -> Vec<usize> {
        let mut seen = vec![false; self.size()];
        let mut out: Vec<usize> = Vec::new();
        for &g in gens.iter().chain(unit.iter()) {
            if !seen[g] {
                seen[g] = true;
                out.push(g);
            }
        }
        let mut i = 0;
        while i < out.len() {
            for &g in gens {
                let b = self.mul(out[i], g);
                if !seen[b] {
                    seen[b] = true;
                    out.push(b);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// The subset `elems` as a monoid with identity `unit`.
    pub fn restrict(&self, elems: &[usize], unit: usize) -> Result<FiniteMonoid> {
        let pos: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let n = elems.len();
        let mut table = Vec::with_capacity(n * n);
        for &a in elems {
            for &b in elems {
                let p = pos
                    .get(&self.mul(a, b))
                    .ok_or_else(|| Error::Internal("subset is not closed".into()))?;
                table.push(*p as u32);
            }
        }
        let unit = *pos
            .get(&unit)
            .ok_or_else(|| Error::Internal("identity outside the subset".into()))?;
        let names: Vec<String> = elems.iter().map(|&a| self.names[a].clone()).collect();
        let sub = FiniteSemigroup {
            generators: names.iter().cloned().zip(0..n).collect(),
            names,
            table,
            identity: Some(unit),
            accepting: elems.iter().map(|&a| self.accepting[a]).collect(),
        };
        if !sub.identity_laws_hold() {
            return Err(Error::Internal(format!("{} is not an identity", self.names[elems[unit]])));
        }
        Ok(FiniteMonoid(sub))
    }

    fn require_idempotent(&self, e: usize) -> Result<()> {
        if e >= self.size() || !self.is_idempotent(e) {
            return Err(Error::Precondition(format!("element {e} is not an idempotent")));
        }
        Ok(())
    }

    /// The local monoid eSe with identity e.
    pub fn local_monoid(&self, e: usize) -> Result<FiniteMonoid> {
        self.require_idempotent(e)?;
        let mut elems: Vec<usize> = (0..self.size()).map(|s| self.mul(self.mul(e, s), e)).collect();
        elems.sort_unstable();
        elems.dedup();
        self.restrict(&elems, e)
    }
}

impl FiniteMonoid {
    pub fn unit(&self) -> usize {
        self.0.identity.expect("monoid identity")
    }

    pub fn as_semigroup(&self) -> &FiniteSemigroup {
        &self.0
    }

    /// M_e: the submonoid generated by {m : e ≤_J m}.
    pub fn me_submonoid(&self, e: usize) -> Result<Vec<usize>> {
        self.require_idempotent(e)?;
        Ok(self.generate(&self.above(e), Some(self.unit())))
    }

    /// e M_e e as a monoid with identity e.
    pub fn e_me_e(&self, e: usize) -> Result<FiniteMonoid> {
        let me = self.me_submonoid(e)?;
        let mut elems: Vec<usize> = me.iter().map(|&m| self.mul(self.mul(e, m), e)).collect();
        elems.sort_unstable();
        elems.dedup();
        self.restrict(&elems, e)
    }

    /// Direct product, elements ordered as pairs (a, b), generated by (g, 1) and (1, h).
    pub fn product_with(&self, other: &FiniteMonoid) -> FiniteMonoid {
        let (n, m) = (self.size(), other.size());
        let mut table = Vec::with_capacity(n * m * n * m);
        for a in 0..n * m {
            for b in 0..n * m {
                let x = self.mul(a / m, b / m);
                let y = other.mul(a % m, b % m);
                table.push((x * m + y) as u32);
            }
        }
        let names: Vec<String> = (0..n * m)
            .map(|a| format!("({},{})", self.name(a / m), other.name(a % m)))
            .collect();
        let left = self.generators.iter().map(|(l, g)| (format!("({l},1)"), g * m + other.unit()));
        let right = other
            .generators
            .iter()
            .map(|(l, g)| (format!("(1,{l})"), self.unit() * m + g));
        FiniteMonoid(FiniteSemigroup {
            generators: left.chain(right).collect(),
            names,
            table,
            identity: Some(self.unit() * m + other.unit()),
            accepting: vec![false; n * m],
        })
    }
}
