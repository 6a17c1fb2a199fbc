use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock, Weak};

use super::guard::{ceil_log2, Guard};
use super::word::Word;

/// Node kinds of the temporal-logic family. Children are interned formulas.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TlKind {
    True,
    False,
    Letter(String),
    Not(Tl),
    And(Tl, Tl),
    Or(Tl, Tl),
    /// `X^n φ` with n ≥ 1.
    Next(u32, Tl),
    /// `Y^n φ` with n ≥ 1.
    Prev(u32, Tl),
    /// Strict future, optionally guarded.
    Future(Option<Guard>, Tl),
    /// Strict past, optionally guarded.
    Past(Option<Guard>, Tl),
    /// Strict until `(α U γ)`.
    Until(Tl, Tl),
    /// Strict since `(α S γ)`.
    Since(Tl, Tl),
}

#[derive(Debug)]
pub struct TlNode {
    id: u64,
    kind: TlKind,
}

/// An interned temporal-logic formula. Structurally equal formulas are the
/// same node, so equality and hashing are by identity.
#[derive(Clone)]
pub struct Tl(Arc<TlNode>);

impl PartialEq for Tl {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}

impl Eq for Tl {}

impl Hash for Tl {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state)
    }
}

impl PartialOrd for Tl {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Tl {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.id.cmp(&other.0.id)
    }
}

impl fmt::Debug for Tl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tl({self})")
    }
}

struct Interner {
    table: HashMap<TlKind, Weak<TlNode>>,
    purge_at: usize,
}

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

fn interner() -> &'static Mutex<Interner> {
    static INTERNER: OnceLock<Mutex<Interner>> = OnceLock::new();
    INTERNER.get_or_init(|| {
        Mutex::new(Interner {
            table: HashMap::new(),
            purge_at: 1 << 16,
        })
    })
}

impl Tl {
    /// Returns the unique node for `kind`.
    pub fn intern(kind: TlKind) -> Tl {
        let mut guard = interner().lock().unwrap_or_else(|e| e.into_inner());
        if let Some(node) = guard.table.get(&kind).and_then(Weak::upgrade) {
            return Tl(node);
        }
        let node = Arc::new(TlNode {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            kind: kind.clone(),
        });
        guard.table.insert(kind, Arc::downgrade(&node));
        if guard.table.len() > guard.purge_at {
            guard.table.retain(|_, w| w.strong_count() > 0);
            guard.purge_at = (guard.table.len() * 2).max(1 << 16);
        }
        Tl(node)
    }

    pub fn kind(&self) -> &TlKind {
        &self.0.kind
    }

    /// Stable identifier of the interned node.
    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn tt() -> Tl {
        Tl::intern(TlKind::True)
    }

    pub fn ff() -> Tl {
        Tl::intern(TlKind::False)
    }

    pub fn letter(a: &str) -> Tl {
        Tl::intern(TlKind::Letter(a.to_string()))
    }

    pub fn not(a: Tl) -> Tl {
        Tl::intern(TlKind::Not(a))
    }

    pub fn and(a: Tl, b: Tl) -> Tl {
        Tl::intern(TlKind::And(a, b))
    }

    pub fn or(a: Tl, b: Tl) -> Tl {
        Tl::intern(TlKind::Or(a, b))
    }

    pub fn next_n(n: u32, a: Tl) -> Tl {
        assert!(n >= 1, "X^n needs n >= 1");
        Tl::intern(TlKind::Next(n, a))
    }

    pub fn prev_n(n: u32, a: Tl) -> Tl {
        assert!(n >= 1, "Y^n needs n >= 1");
        Tl::intern(TlKind::Prev(n, a))
    }

    pub fn next(a: Tl) -> Tl {
        Tl::next_n(1, a)
    }

    pub fn prev(a: Tl) -> Tl {
        Tl::prev_n(1, a)
    }

    pub fn future(a: Tl) -> Tl {
        Tl::intern(TlKind::Future(None, a))
    }

    pub fn past(a: Tl) -> Tl {
        Tl::intern(TlKind::Past(None, a))
    }

    pub fn future_g(g: Guard, a: Tl) -> Tl {
        Tl::intern(TlKind::Future(Some(g), a))
    }

    pub fn past_g(g: Guard, a: Tl) -> Tl {
        Tl::intern(TlKind::Past(Some(g), a))
    }

    pub fn until(a: Tl, b: Tl) -> Tl {
        Tl::intern(TlKind::Until(a, b))
    }

    pub fn since(a: Tl, b: Tl) -> Tl {
        Tl::intern(TlKind::Since(a, b))
    }

    /// `G φ = ¬F¬φ`.
    pub fn globally(a: Tl) -> Tl {
        Tl::not(Tl::future(Tl::not(a)))
    }

    /// `H φ = ¬P¬φ`.
    pub fn historically(a: Tl) -> Tl {
        Tl::not(Tl::past(Tl::not(a)))
    }

    pub fn is_true(&self) -> bool {
        matches!(self.kind(), TlKind::True)
    }

    pub fn is_false(&self) -> bool {
        matches!(self.kind(), TlKind::False)
    }

    /// Negation folding constants and double negation.
    pub fn neg(a: Tl) -> Tl {
        match a.kind() {
            TlKind::True => Tl::ff(),
            TlKind::False => Tl::tt(),
            TlKind::Not(b) => b.clone(),
            _ => Tl::not(a),
        }
    }

    /// Conjunction folding constants and identical operands.
    pub fn conj(a: Tl, b: Tl) -> Tl {
        if a.is_false() || b.is_false() {
            Tl::ff()
        } else if a.is_true() {
            b
        } else if b.is_true() || a == b {
            a
        } else {
            Tl::and(a, b)
        }
    }

    /// Disjunction folding constants and identical operands.
    pub fn disj(a: Tl, b: Tl) -> Tl {
        if a.is_true() || b.is_true() {
            Tl::tt()
        } else if a.is_false() {
            b
        } else if b.is_false() || a == b {
            a
        } else {
            Tl::or(a, b)
        }
    }

    /// `X^n φ` with `X^0 φ = φ`, folding `false`.
    pub fn next_k(n: usize, a: Tl) -> Tl {
        if n == 0 || a.is_false() {
            a
        } else {
            Tl::next_n(n as u32, a)
        }
    }

    /// `Y^n φ` with `Y^0 φ = φ`, folding `false`.
    pub fn prev_k(n: usize, a: Tl) -> Tl {
        if n == 0 || a.is_false() {
            a
        } else {
            Tl::prev_n(n as u32, a)
        }
    }

    /// Right-nested conjunction; `true` when empty.
    pub fn all<I: IntoIterator<Item = Tl>>(items: I) -> Tl {
        let items: Vec<Tl> = items.into_iter().collect();
        items.into_iter().rev().fold(Tl::tt(), |acc, x| Tl::conj(x, acc))
    }

    /// Right-nested disjunction; `false` when empty.
    pub fn any<I: IntoIterator<Item = Tl>>(items: I) -> Tl {
        let items: Vec<Tl> = items.into_iter().collect();
        items.into_iter().rev().fold(Tl::ff(), |acc, x| Tl::disj(x, acc))
    }

    /// Disjunction of the letters in `letters`.
    pub fn any_letter<'a, I: IntoIterator<Item = &'a String>>(letters: I) -> Tl {
        Tl::any(letters.into_iter().map(|l| Tl::letter(l)))
    }

    /// Direct children in order.
    pub fn children(&self) -> Vec<Tl> {
        match self.kind() {
            TlKind::True | TlKind::False | TlKind::Letter(_) => vec![],
            TlKind::Not(a)
            | TlKind::Next(_, a)
            | TlKind::Prev(_, a)
            | TlKind::Future(_, a)
            | TlKind::Past(_, a) => vec![a.clone()],
            TlKind::And(a, b) | TlKind::Or(a, b) | TlKind::Until(a, b) | TlKind::Since(a, b) => {
                vec![a.clone(), b.clone()]
            }
        }
    }

    /// Distinct nodes reachable from `self`, children before parents.
    pub fn topological(&self) -> Vec<Tl> {
        let mut seen: HashSet<u64> = HashSet::new();
        let mut order = Vec::new();
        let mut stack: Vec<(Tl, bool)> = vec![(self.clone(), false)];
        while let Some((node, expanded)) = stack.pop() {
            if expanded {
                order.push(node);
                continue;
            }
            if !seen.insert(node.id()) {
                continue;
            }
            stack.push((node.clone(), true));
            for c in node.children().into_iter().rev() {
                if !seen.contains(&c.id()) {
                    stack.push((c, false));
                }
            }
        }
        order
    }

    /// Number of distinct nodes plus size contributions of guards and exponents.
    pub fn dag_size(&self) -> usize {
        self.topological()
            .iter()
            .map(|n| {
                1 + match n.kind() {
                    TlKind::Future(Some(g), _) | TlKind::Past(Some(g), _) => g.size(),
                    TlKind::Next(k, _) | TlKind::Prev(k, _) => ceil_log2(*k as u64),
                    _ => 0,
                }
            })
            .sum()
    }

    /// Size of the formula written as a tree.
    pub fn tree_size(&self) -> usize {
        let mut memo: HashMap<u64, usize> = HashMap::new();
        for n in self.topological() {
            let own = 1 + match n.kind() {
                TlKind::Future(Some(g), _) | TlKind::Past(Some(g), _) => g.size(),
                TlKind::Next(k, _) | TlKind::Prev(k, _) => ceil_log2(*k as u64),
                _ => 0,
            };
            let s = own + n.children().iter().map(|c| memo[&c.id()]).sum::<usize>();
            memo.insert(n.id(), s);
        }
        memo[&self.id()]
    }

    /// Letters mentioned by atoms and guards.
    pub fn letters(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for n in self.topological() {
            match n.kind() {
                TlKind::Letter(a) => out.push(a.clone()),
                TlKind::Future(Some(g), _) | TlKind::Past(Some(g), _) => {
                    for c in g.constraints() {
                        match &c.subject {
                            super::guard::Subject::Letters(b) => out.extend(b.iter().cloned()),
                            super::guard::Subject::Factor(u) => out.extend(u.iter().cloned()),
                        }
                    }
                }
                _ => {}
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Temporal nesting depth.
    pub fn modal_depth(&self) -> usize {
        let mut memo: HashMap<u64, usize> = HashMap::new();
        for n in self.topological() {
            let inner = n.children().iter().map(|c| memo[&c.id()]).max().unwrap_or(0);
            let own = match n.kind() {
                TlKind::Next(..)
                | TlKind::Prev(..)
                | TlKind::Future(..)
                | TlKind::Past(..)
                | TlKind::Until(..)
                | TlKind::Since(..) => 1,
                _ => 0,
            };
            memo.insert(n.id(), inner + own);
        }
        memo[&self.id()]
    }

    /// True when no node carries a guard.
    pub fn is_ltl(&self) -> bool {
        self.topological().iter().all(|n| {
            !matches!(
                n.kind(),
                TlKind::Future(Some(_), _) | TlKind::Past(Some(_), _)
            )
        })
    }

    /// The time-reversed formula: F↔P, X↔Y, U↔S; guards on factors are reversed.
    pub fn mirror(&self) -> Tl {
        let mut memo: HashMap<u64, Tl> = HashMap::new();
        for n in self.topological() {
            let m = |t: &Tl| memo[&t.id()].clone();
            let out = match n.kind() {
                TlKind::True | TlKind::False | TlKind::Letter(_) => n.clone(),
                TlKind::Not(a) => Tl::not(m(a)),
                TlKind::And(a, b) => Tl::and(m(a), m(b)),
                TlKind::Or(a, b) => Tl::or(m(a), m(b)),
                TlKind::Next(k, a) => Tl::prev_n(*k, m(a)),
                TlKind::Prev(k, a) => Tl::next_n(*k, m(a)),
                TlKind::Future(g, a) => {
                    Tl::intern(TlKind::Past(g.as_ref().map(mirror_guard), m(a)))
                }
                TlKind::Past(g, a) => {
                    Tl::intern(TlKind::Future(g.as_ref().map(mirror_guard), m(a)))
                }
                TlKind::Until(a, b) => Tl::since(m(a), m(b)),
                TlKind::Since(a, b) => Tl::until(m(a), m(b)),
            };
            memo.insert(n.id(), out);
        }
        memo[&self.id()].clone()
    }
}

/// Reverses every factor in a guard.
pub fn mirror_guard(g: &Guard) -> Guard {
    use super::guard::Subject;
    match g {
        Guard::Atom(c) => {
            let mut c = c.clone();
            if let Subject::Factor(u) = &mut c.subject {
                u.reverse();
            }
            Guard::Atom(c)
        }
        Guard::Not(a) => Guard::negate(mirror_guard(a)),
        Guard::And(a, b) => Guard::and(mirror_guard(a), mirror_guard(b)),
        Guard::Or(a, b) => Guard::or(mirror_guard(a), mirror_guard(b)),
    }
}

/// `st(a₁…aₙ) = a₁ ∧ X(a₂ ∧ X(… ∧ X aₙ))`, `st(ε) = true`.
pub fn st_of(u: &Word) -> Tl {
    let mut acc: Option<Tl> = None;
    for a in u.letters().iter().rev() {
        let atom = Tl::letter(a);
        acc = Some(match acc {
            None => atom,
            Some(rest) => Tl::and(atom, Tl::next(rest)),
        });
    }
    acc.unwrap_or_else(Tl::tt)
}

/// `end(a₁…aₙ) = aₙ ∧ Y(aₙ₋₁ ∧ Y(… ∧ Y a₁))`, `end(ε) = true`.
pub fn end_of(u: &Word) -> Tl {
    let mut acc: Option<Tl> = None;
    for a in u.letters().iter() {
        let atom = Tl::letter(a);
        acc = Some(match acc {
            None => atom,
            Some(rest) => Tl::and(atom, Tl::prev(rest)),
        });
    }
    acc.unwrap_or_else(Tl::tt)
}

// Rendering. Precedence levels: 0 until/since, 1 or, 2 and, 3 unary.
impl Tl {
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        match self.kind() {
            TlKind::True => write!(f, "true"),
            TlKind::False => write!(f, "false"),
            TlKind::Letter(a) => write!(f, "{a}"),
            TlKind::Not(a) => {
                if let TlKind::Future(None, b) = a.kind() {
                    if let TlKind::Not(c) = b.kind() {
                        write!(f, "G ")?;
                        return c.fmt_prec(f, 3);
                    }
                }
                if let TlKind::Past(None, b) = a.kind() {
                    if let TlKind::Not(c) = b.kind() {
                        write!(f, "H ")?;
                        return c.fmt_prec(f, 3);
                    }
                }
                write!(f, "!")?;
                a.fmt_prec(f, 3)
            }
            TlKind::And(a, b) => {
                let paren = prec > 2;
                if paren {
                    write!(f, "(")?;
                }
                a.fmt_prec(f, 3)?;
                write!(f, " & ")?;
                b.fmt_prec(f, 2)?;
                if paren {
                    write!(f, ")")?;
                }
                Ok(())
            }
            TlKind::Or(a, b) => {
                let paren = prec > 1;
                if paren {
                    write!(f, "(")?;
                }
                a.fmt_prec(f, 2)?;
                write!(f, " | ")?;
                b.fmt_prec(f, 1)?;
                if paren {
                    write!(f, ")")?;
                }
                Ok(())
            }
            TlKind::Next(k, a) => {
                if *k == 1 {
                    write!(f, "X ")?;
                } else {
                    write!(f, "X^{k} ")?;
                }
                a.fmt_prec(f, 3)
            }
            TlKind::Prev(k, a) => {
                if *k == 1 {
                    write!(f, "Y ")?;
                } else {
                    write!(f, "Y^{k} ")?;
                }
                a.fmt_prec(f, 3)
            }
            TlKind::Future(g, a) => {
                write!(f, "F")?;
                if let Some(g) = g {
                    write!(f, "[{g}]")?;
                }
                write!(f, " ")?;
                a.fmt_prec(f, 3)
            }
            TlKind::Past(g, a) => {
                write!(f, "P")?;
                if let Some(g) = g {
                    write!(f, "[{g}]")?;
                }
                write!(f, " ")?;
                a.fmt_prec(f, 3)
            }
            TlKind::Until(a, b) => {
                write!(f, "(")?;
                a.fmt_prec(f, 1)?;
                write!(f, " U ")?;
                b.fmt_prec(f, 1)?;
                write!(f, ")")
            }
            TlKind::Since(a, b) => {
                write!(f, "(")?;
                a.fmt_prec(f, 1)?;
                write!(f, " S ")?;
                b.fmt_prec(f, 1)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Tl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::guard::{Cmp, Constraint};

    #[test]
    fn interning_shares_nodes() {
        let a1 = Tl::letter("a");
        let a2 = Tl::letter("a");
        assert_eq!(a1, a2);
        assert_eq!(a1.id(), a2.id());
        let c = Tl::and(a1.clone(), a2);
        assert_eq!(c.dag_size(), 2);
        assert_eq!(c.tree_size(), 3);
        assert_eq!(Tl::letter("a").dag_size(), 1);
    }

    #[test]
    fn bound_contributes_log_size() {
        let g = Guard::Atom(Constraint::letters(["a"], Cmp::Ge, 8));
        let f = Tl::future_g(g, Tl::letter("b"));
        // two nodes, |{a}| = 1, ⌈log₂ 8⌉ = 3
        assert_eq!(f.dag_size(), 2 + 1 + 3);
    }

    #[test]
    fn st_and_end() {
        assert_eq!(st_of(&Word::from_chars("ab")).to_string(), "a & X b");
        assert_eq!(end_of(&Word::from_chars("ba")).to_string(), "a & Y b");
        assert!(st_of(&Word::empty()).is_true());
        assert!(end_of(&Word::empty()).is_true());
    }

    #[test]
    fn mirror_is_involutive() {
        let f = Tl::until(Tl::letter("a"), Tl::next_n(3, Tl::past(Tl::letter("b"))));
        assert_eq!(f.mirror().mirror(), f);
        assert_eq!(f.mirror().to_string(), "(a S Y^3 F b)");
    }

    #[test]
    fn folding_constructors() {
        let a = Tl::letter("a");
        assert_eq!(Tl::conj(Tl::tt(), a.clone()), a);
        assert!(Tl::conj(Tl::ff(), a.clone()).is_false());
        assert!(Tl::any(Vec::new()).is_false());
        assert!(Tl::all(Vec::new()).is_true());
        assert_eq!(Tl::neg(Tl::neg(a.clone())), a);
    }
}
