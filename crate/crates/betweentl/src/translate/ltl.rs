//! Final stage: negative-factor and invariance modalities as LTL.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::syntax::{end_of, Guard, Subject, Tl, TlKind, Word};

use super::dnf::conjunct_of;
use super::factor::requirement_sets;
use super::try_rewrite;

/// `F_{¬v}γ ≡ (⋁_{d=1}^{|v|−1} X^d γ) ∨ X^{|v|−1}((¬end(v)) U γ)`.
pub fn nfac_word_to_ltl(v: &Word, gamma: &Tl) -> Tl {
    let n = v.len().max(1);
    let near = (1..n).map(|d| Tl::next_k(d, gamma.clone()));
    let far = Tl::next_k(n - 1, Tl::until(Tl::neg(end_of(v)), gamma.clone()));
    Tl::disj(Tl::any(near), far)
}

/// `(⋁_{i=1}^{|v|−1} Xⁱγ) ∨ ((¬end(v)) U γ)`, which forbids occurrences of v
/// that start at the current position.
pub fn nfac_word_to_ltl_literal(v: &Word, gamma: &Tl) -> Tl {
    let near = (1..v.len()).map(|d| Tl::next_k(d, gamma.clone()));
    Tl::disj(Tl::any(near), Tl::until(Tl::neg(end_of(v)), gamma.clone()))
}

enum Simple {
    Avoid(Word),
    Invariance(BTreeSet<String>),
}

fn classify(g: &Guard) -> Option<Simple> {
    if let Some((pos, neg)) = requirement_sets(g) {
        if pos.is_empty() && neg.len() == 1 {
            return Some(Simple::Avoid(neg[0].clone()));
        }
    }
    let atoms = conjunct_of(g)?;
    let mut letters = BTreeSet::new();
    for c in atoms {
        match &c.subject {
            Subject::Letters(b) if c.requirement() == Some(false) => letters.extend(b.iter().cloned()),
            _ => return None,
        }
    }
    Some(Simple::Invariance(letters))
}

fn future_to_ltl(g: &Guard, gamma: &Tl, literal: bool) -> Result<Tl> {
    match classify(g) {
        Some(Simple::Avoid(v)) if literal => Ok(nfac_word_to_ltl_literal(&v, gamma)),
        Some(Simple::Avoid(v)) => Ok(nfac_word_to_ltl(&v, gamma)),
        Some(Simple::Invariance(b)) if b.is_empty() => Ok(Tl::future(gamma.clone())),
        Some(Simple::Invariance(b)) => Ok(Tl::until(
            Tl::all(b.iter().map(|a| Tl::neg(Tl::letter(a)))),
            gamma.clone(),
        )),
        None => Err(Error::Internal(format!("guard {g} survived to the LTL stage"))),
    }
}

fn stage(phi: &Tl, literal: bool) -> Result<Tl> {
    try_rewrite(phi, |node, kids| match node.kind() {
        TlKind::Future(Some(g), _) => future_to_ltl(g, &kids[0], literal).map(Some),
        TlKind::Past(Some(g), _) => {
            let mirrored = crate::syntax::mirror_guard(g);
            Ok(Some(future_to_ltl(&mirrored, &kids[0].mirror(), literal)?.mirror()))
        }
        _ => Ok(None),
    })
}

/// Replaces every `F_{¬v}γ`, `P_{¬v}γ` and invariance modality of `phi`.
pub fn nfac_to_ltl(phi: &Tl) -> Result<Tl> {
    stage(phi, false)
}

/// `nfac_to_ltl` with the literal, boundary-unsafe negative-factor formula.
pub fn nfac_to_ltl_literal(phi: &Tl) -> Result<Tl> {
    stage(phi, true)
}

pub(crate) fn ltl_stage(phi: &Tl, literal: bool) -> Result<Tl> {
    stage(phi, literal)
}
