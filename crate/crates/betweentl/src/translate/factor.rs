//! The factor pipeline: splitting requirement sets into single pairs,
//! overlap analysis, and the β construction reducing `F_{u,¬v}γ` to
//! negative-factor modalities.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::syntax::{end_of, st_of, Cmp, Constraint, Guard, Subject, Tl, TlKind, Word};

use super::dnf::conjunct_of;
use super::try_rewrite;

/// Ways the forbidden factor v can straddle an occurrence of u.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OverlapSets {
    /// v₁ with v = v₁u₁, u = u₁u₂ and u₁, u₂, v₁ nonempty.
    pub pre1: Vec<Word>,
    /// v₂ with u = u₁u₂, v = u₂v₂ and u₁, u₂, v₂ nonempty.
    pub post1: Vec<Word>,
    /// v₁ of the factorization v = v₁uv₂ with the shortest v₁.
    pub pre2: Option<Word>,
    /// v₂ of that factorization.
    pub post2: Option<Word>,
    /// Every factorization v = v₁uv₂, by increasing |v₁|.
    pub super_overlaps: Vec<(Word, Word)>,
}

/// Overlap sets of u and v. Requires u, v nonempty and v not a factor of u.
pub fn compute_overlaps(u: &Word, v: &Word) -> Result<OverlapSets> {
    if u.is_empty() || v.is_empty() {
        return Err(Error::Precondition("factors must be nonempty".into()));
    }
    if v.is_factor_of(u) {
        return Err(Error::Precondition(format!("{v} is a factor of {u}")));
    }
    let (ul, vl) = (u.letters(), v.letters());
    let (n, m) = (ul.len(), vl.len());
    let mut pre1 = Vec::new();
    let mut post1 = Vec::new();
    for l in 1..n.min(m) {
        if vl[m - l..] == ul[..l] {
            pre1.push(v.slice(0, m - l));
        }
        if vl[..l] == ul[n - l..] {
            post1.push(v.slice(l, m));
        }
    }
    pre1.sort();
    post1.sort();
    let mut super_overlaps = Vec::new();
    if n < m {
        for start in 0..=m - n {
            if vl[start..start + n] == ul[..] {
                super_overlaps.push((v.slice(0, start), v.slice(start + n, m)));
            }
        }
    }
    let first = super_overlaps.first().cloned();
    Ok(OverlapSets {
        pre1,
        post1,
        pre2: first.as_ref().map(|p| p.0.clone()),
        post2: first.map(|p| p.1),
        super_overlaps,
    })
}

fn words_up_to(set: &[Word], limit: Option<usize>) -> impl Iterator<Item = &Word> {
    set.iter().filter(move |w| limit.map_or(true, |i| w.len() < i))
}

/// `Pre(U)` or, with a limit i, `Pre(U, i)`: some v′ ∈ U (with |v′| < i) ends
/// at the previous position.
fn pre(set: &[Word], limit: Option<usize>) -> Tl {
    Tl::any(words_up_to(set, limit).map(|w| Tl::prev(end_of(w))))
}

/// `Post(V)` or `Post(V, i)`: some v′ ∈ V (with |v′| < i) starts at the next position.
fn post(set: &[Word], limit: Option<usize>) -> Tl {
    Tl::any(words_up_to(set, limit).map(|w| Tl::next(st_of(w))))
}

fn avoid(v: &Word, gamma: &Tl) -> Tl {
    Tl::future_g(Guard::avoid(v.letters()), gamma.clone())
}

/// δ(V) = [F_{¬v}γ ∧ ¬Post(V)] ∨ ⋁_{i=1}^{m} [Xⁱγ ∧ ¬Post(V, i)], m = max |v′|.
pub fn build_delta(set: &[Word], v: &Word, gamma: &Tl) -> Result<Tl> {
    let m = set.iter().map(Word::len).max().unwrap_or(0);
    if m >= v.len() {
        return Err(Error::Precondition(format!(
            "longest word of V has length {m}, not below |v| = {}",
            v.len()
        )));
    }
    let first = Tl::conj(avoid(v, gamma), Tl::neg(post(set, None)));
    let rest = (1..=m).map(|i| Tl::conj(Tl::next_k(i, gamma.clone()), Tl::neg(post(set, Some(i)))));
    Ok(Tl::disj(first, Tl::any(rest)))
}

fn positional_disjunction(v: &Word, k: usize, body: impl Fn(Option<usize>) -> Tl) -> Tl {
    let far = avoid(v, &body(None));
    let near = (1..=k).map(|i| Tl::next_k(i, body(Some(i))));
    Tl::disj(far, Tl::any(near))
}

/// β exactly as displayed: only the super-overlap with the shortest v₁ is
/// considered, which is unsound when u occurs in v more than once.
pub fn build_beta_literal(u: &Word, v: &Word, gamma: &Tl) -> Result<Tl> {
    if u.is_empty() || v.is_empty() {
        return Err(Error::Precondition("factors must be nonempty".into()));
    }
    if v.is_factor_of(u) {
        return Ok(Tl::ff());
    }
    let ov = compute_overlaps(u, v)?;
    let pre2: Vec<Word> = ov.pre2.iter().cloned().collect();
    let post_both: Vec<Word> = ov.post1.iter().chain(ov.post2.iter()).cloned().collect();
    let k = ov.pre1.iter().chain(pre2.iter()).map(Word::len).max().unwrap_or(0);
    let shift = u.len() - 1;
    let delta1 = build_delta(&ov.post1, v, gamma)?;
    let delta12 = build_delta(&post_both, v, gamma)?;
    let body = |limit: Option<usize>| {
        Tl::all([
            st_of(u),
            Tl::neg(pre(&ov.pre1, limit)),
            Tl::disj(
                Tl::conj(Tl::neg(pre(&pre2, limit)), Tl::next_k(shift, delta1.clone())),
                Tl::next_k(shift, delta12.clone()),
            ),
        ])
    };
    Ok(positional_disjunction(v, k, body))
}

/// β for `F_{u,¬v}γ`. Every factorization v = v₁uv₂ is kept: an occurrence
/// straddling u is forbidden when v₁ precedes u inside the interval and v₂
/// follows it before the witness y. Evaluated at the end e of u, a candidate
/// tail v₂ is active when it starts at e+1 (and, for super-overlaps, v₁
/// ends right before u); the witness must then satisfy y − e ≤ |v₂|.
pub fn build_beta(u: &Word, v: &Word, gamma: &Tl) -> Result<Tl> {
    if u.is_empty() || v.is_empty() {
        return Err(Error::Precondition("factors must be nonempty".into()));
    }
    if v.is_factor_of(u) {
        return Ok(Tl::ff());
    }
    let ov = compute_overlaps(u, v)?;
    let k = ov
        .pre1
        .iter()
        .chain(ov.super_overlaps.iter().map(|p| &p.0))
        .map(Word::len)
        .max()
        .unwrap_or(0);
    let shift = u.len() - 1;
    let delta = |limit: Option<usize>| -> Tl {
        let mut active: Vec<(usize, Tl)> = ov
            .post1
            .iter()
            .map(|v2| (v2.len(), Tl::next(st_of(v2))))
            .collect();
        for (v1, v2) in &ov.super_overlaps {
            if limit.map_or(true, |i| v1.len() < i) {
                let before = Tl::prev_k(u.len(), end_of(v1));
                active.push((v2.len(), Tl::conj(Tl::next(st_of(v2)), before)));
            }
        }
        let m = active.iter().map(|a| a.0).max().unwrap_or(0);
        let shorter = |i: usize| Tl::any(active.iter().filter(|a| a.0 < i).map(|a| a.1.clone()));
        let first = Tl::conj(avoid(v, gamma), Tl::neg(Tl::any(active.iter().map(|a| a.1.clone()))));
        let rest = (1..=m).map(|i| Tl::conj(Tl::next_k(i, gamma.clone()), Tl::neg(shorter(i))));
        Tl::disj(first, Tl::any(rest))
    };
    let body = |limit: Option<usize>| {
        Tl::all([
            st_of(u),
            Tl::neg(pre(&ov.pre1, limit)),
            Tl::next_k(shift, delta(limit)),
        ])
    };
    Ok(positional_disjunction(v, k, body))
}

/// Positive and negative factors of a requirement guard, if it is one.
pub(crate) fn requirement_sets(g: &Guard) -> Option<(Vec<Word>, Vec<Word>)> {
    let atoms = conjunct_of(g)?;
    let mut positives = Vec::new();
    let mut negatives = Vec::new();
    for c in atoms {
        let word = match &c.subject {
            Subject::Factor(u) => Word::new(u.clone()),
            Subject::Letters(_) => return None,
        };
        match c.requirement()? {
            true => positives.push(word),
            false => negatives.push(word),
        }
    }
    Some((positives, negatives))
}

fn pair_guard(u: &Word, v: &Word) -> Guard {
    Guard::and(
        Guard::atom(Constraint::factor(u.letters().to_vec(), Cmp::Gt, 0)),
        Guard::atom(Constraint::factor(v.letters().to_vec(), Cmp::Eq, 0)),
    )
}

/// `F_{u₁..u_p,¬v₁..¬v_r}γ` as a conjunction over single pairs. Without
/// negative factors each `u` becomes `F(st(u) ∧ X^{|u|−1} Fγ)`; without
/// positive factors the result is `⋀ F_{¬v}γ`.
pub fn split_requirements(positives: &[Word], negatives: &[Word], gamma: &Tl) -> Tl {
    match (positives.is_empty(), negatives.is_empty()) {
        (true, true) => Tl::future(gamma.clone()),
        (true, false) => Tl::all(negatives.iter().map(|v| avoid(v, gamma))),
        (false, true) => {
            let later = Tl::future(gamma.clone());
            Tl::all(positives.iter().map(|u| {
                Tl::future(Tl::conj(st_of(u), Tl::next_k(u.len() - 1, later.clone())))
            }))
        }
        (false, false) => Tl::all(positives.iter().flat_map(|u| {
            negatives
                .iter()
                .map(move |v| Tl::future_g(pair_guard(u, v), gamma.clone()))
        })),
    }
}

/// Splits every requirement-guarded modality of `phi`.
pub fn split_factor_guard(phi: &Tl) -> Result<Tl> {
    split_stage(phi)
}

fn reversed(words: &[Word]) -> Vec<Word> {
    words.iter().map(Word::reversed).collect()
}

pub(crate) fn split_stage(phi: &Tl) -> Result<Tl> {
    try_rewrite(phi, |node, kids| {
        let (future, g) = match node.kind() {
            TlKind::Future(Some(g), _) => (true, g),
            TlKind::Past(Some(g), _) => (false, g),
            _ => return Ok(None),
        };
        if !g.constraints().iter().any(|c| c.is_factor()) {
            return Ok(None);
        }
        let Some((pos, neg)) = requirement_sets(g) else {
            return Err(Error::Precondition(format!("guard {g} is not a requirement set")));
        };
        if pos.len() <= 1 && neg.len() == 1 && !pos.is_empty() {
            return Ok(None);
        }
        if pos.is_empty() && neg.len() == 1 {
            return Ok(None);
        }
        Ok(Some(if future {
            split_requirements(&pos, &neg, &kids[0])
        } else {
            split_requirements(&reversed(&pos), &reversed(&neg), &kids[0].mirror()).mirror()
        }))
    })
}

pub(crate) fn beta_stage(phi: &Tl, literal: bool) -> Result<Tl> {
    let beta = if literal { build_beta_literal } else { build_beta };
    try_rewrite(phi, |node, kids| {
        let (future, g) = match node.kind() {
            TlKind::Future(Some(g), _) => (true, g),
            TlKind::Past(Some(g), _) => (false, g),
            _ => return Ok(None),
        };
        match requirement_sets(g) {
            Some((pos, neg)) if pos.len() == 1 && neg.len() == 1 => Ok(Some(if future {
                beta(&pos[0], &neg[0], &kids[0])?
            } else {
                beta(&pos[0].reversed(), &neg[0].reversed(), &kids[0].mirror())?.mirror()
            })),
            _ => Ok(None),
        }
    })
}
