//! Guard normalization into disjunctive normal form.

use crate::syntax::{Cmp, Constraint, Guard, Tl, TlKind};

use super::rewrite;

/// One disjunct: a conjunction of atomic constraints, `true` when empty.
pub type Conjunct = Vec<Constraint>;

fn negate_constraint(c: &Constraint) -> Vec<Constraint> {
    let with = |cmp: Cmp, bound: u64| Constraint {
        subject: c.subject.clone(),
        cmp,
        bound,
    };
    match c.cmp {
        Cmp::Lt => vec![with(Cmp::Ge, c.bound)],
        Cmp::Le => vec![with(Cmp::Gt, c.bound)],
        Cmp::Gt => vec![with(Cmp::Le, c.bound)],
        Cmp::Ge => vec![with(Cmp::Lt, c.bound)],
        Cmp::Eq => vec![with(Cmp::Lt, c.bound), with(Cmp::Gt, c.bound)],
    }
}

/// `Some(true)` if the constraint holds for every count, `Some(false)` if for none.
fn trivial(c: &Constraint) -> Option<bool> {
    match (c.cmp, c.bound) {
        (Cmp::Ge, 0) => Some(true),
        (Cmp::Lt, 0) => Some(false),
        _ => None,
    }
}

fn nnf_dnf(g: &Guard, positive: bool) -> Vec<Conjunct> {
    match (g, positive) {
        (Guard::Atom(c), true) => vec![vec![c.clone()]],
        (Guard::Atom(c), false) => negate_constraint(c).into_iter().map(|c| vec![c]).collect(),
        (Guard::Not(a), p) => nnf_dnf(a, !p),
        (Guard::Or(a, b), true) | (Guard::And(a, b), false) => {
            let mut out = nnf_dnf(a, positive);
            out.extend(nnf_dnf(b, positive));
            out
        }
        (Guard::And(a, b), true) | (Guard::Or(a, b), false) => {
            let left = nnf_dnf(a, positive);
            let right = nnf_dnf(b, positive);
            let mut out = Vec::with_capacity(left.len() * right.len());
            for l in &left {
                for r in &right {
                    let mut c = l.clone();
                    c.extend(r.iter().cloned());
                    out.push(c);
                }
            }
            out
        }
    }
}

/// Disjunction of conjunctions of atomic constraints with the same value on
/// every interval. Trivial atoms are removed; an empty result means `false`.
pub fn guard_to_dnf(g: &Guard) -> Vec<Conjunct> {
    let mut out: Vec<Conjunct> = Vec::new();
    'conjuncts: for conj in nnf_dnf(g, true) {
        let mut kept: Conjunct = Vec::new();
        for c in conj {
            match trivial(&c) {
                Some(true) => {}
                Some(false) => continue 'conjuncts,
                None => {
                    if !kept.contains(&c) {
                        kept.push(c);
                    }
                }
            }
        }
        if kept.is_empty() {
            return vec![vec![]];
        }
        if !out.contains(&kept) {
            out.push(kept);
        }
    }
    out
}

/// The guard of a conjunct, `None` when the conjunct is empty.
pub fn conjunct_guard(c: &[Constraint]) -> Option<Guard> {
    Guard::all(c.iter().cloned().map(Guard::atom))
}

/// The atomic constraints of a conjunctive guard, `None` if the guard has
/// negation or disjunction.
pub fn conjunct_of(g: &Guard) -> Option<Conjunct> {
    match g {
        Guard::Atom(c) => Some(vec![c.clone()]),
        Guard::And(a, b) => {
            let mut out = conjunct_of(a)?;
            out.extend(conjunct_of(b)?);
            Some(out)
        }
        _ => None,
    }
}

/// Rewrites every guarded modality as a disjunction of modalities whose
/// guards are conjunctions of atoms.
pub fn distribute_dnf(phi: &Tl) -> Tl {
    rewrite(phi, |node, kids| {
        let (future, g) = match node.kind() {
            TlKind::Future(Some(g), _) => (true, g),
            TlKind::Past(Some(g), _) => (false, g),
            _ => return None,
        };
        let body = kids[0].clone();
        Some(Tl::any(guard_to_dnf(g).into_iter().map(|c| {
            let guard = conjunct_guard(&c);
            match (future, guard) {
                (true, Some(g)) => Tl::future_g(g, body.clone()),
                (true, None) => Tl::future(body.clone()),
                (false, Some(g)) => Tl::past_g(g, body.clone()),
                (false, None) => Tl::past(body.clone()),
            }
        })))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::eval_guard;
    use crate::syntax::{parse_guard, Alphabet, Word};

    fn show(d: &[Conjunct]) -> String {
        d.iter()
            .map(|c| conjunct_guard(c).map(|g| g.to_string()).unwrap_or("true".into()))
            .collect::<Vec<_>>()
            .join(" | ")
    }

    #[test]
    fn examples() {
        let a = Alphabet::parse("abc").unwrap();
        let g = parse_guard("!(#{a}=0)", &a).unwrap();
        assert_eq!(show(&guard_to_dnf(&g)), "#{a}>0");
        let g = parse_guard("(#{a}=0 | #{b}=0) & #{c}>0", &a).unwrap();
        assert_eq!(show(&guard_to_dnf(&g)), "#{a}=0 & #{c}>0 | #{b}=0 & #{c}>0");
        let g = parse_guard("!(#{a}>=2)", &a).unwrap();
        assert_eq!(show(&guard_to_dnf(&g)), "#{a}<2");
        let g = parse_guard("#{a}>=0", &a).unwrap();
        assert_eq!(guard_to_dnf(&g), vec![Vec::<Constraint>::new()]);
        let g = parse_guard("#{a}<0", &a).unwrap();
        assert!(guard_to_dnf(&g).is_empty());
    }

    #[test]
    fn dnf_preserves_guard_values() {
        let a = Alphabet::parse("ab").unwrap();
        let guards = [
            "!(#{a}>=2)",
            "!(#{a}=1 & !(#{b}<2))",
            "(#{a}=0 | #\"ab\">1) & !(+\"ba\")",
            "!(#{a,b}=2 | #{a}>3)",
        ];
        for text in guards {
            let g = parse_guard(text, &a).unwrap();
            let d = guard_to_dnf(&g);
            for len in 2..=6 {
                for idx in a.words_of_len(len) {
                    let w = Word::from_indices(&a, &idx);
                    for i in 1..len {
                        for j in i + 1..=len {
                            let direct = eval_guard(&g, &w, i, j).unwrap();
                            let normal = d.iter().any(|c| {
                                c.iter().all(|c| {
                                    eval_guard(&Guard::atom(c.clone()), &w, i, j).unwrap()
                                })
                            });
                            assert_eq!(direct, normal, "{text} on {w} ({i},{j})");
                        }
                    }
                }
            }
        }
    }
}
