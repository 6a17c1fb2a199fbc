use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// One of the two variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
}

impl Var {
    pub fn other(self) -> Var {
        match self {
            Var::X => Var::Y,
            Var::Y => Var::X,
        }
    }

    pub fn name(self) -> char {
        match self {
            Var::X => 'x',
            Var::Y => 'y',
        }
    }
}

/// Node kinds of two-variable first-order formulas over words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Fo2Kind {
    True,
    False,
    /// `a(x)`.
    Letter(String, Var),
    /// `x < y`.
    Less(Var, Var),
    /// `x <= y`.
    LessEq(Var, Var),
    /// `suc(x,y)`, i.e. y = x + 1.
    Suc(Var, Var),
    /// `a(x,y)`: some a strictly between.
    Between(String, Var, Var),
    /// `th(a,k)(x,y)`: at least k letters a strictly between.
    Threshold(String, u64, Var, Var),
    /// `fac("u")(x,y)`: an occurrence of u strictly between.
    BetweenFactor(Vec<String>, Var, Var),
    /// `facth("u",k)(x,y)`: at least k occurrences of u strictly between.
    FactorThreshold(Vec<String>, u64, Var, Var),
    Not(Fo2),
    And(Fo2, Fo2),
    Or(Fo2, Fo2),
    Exists(Var, Fo2),
    Forall(Var, Fo2),
}

/// A two-variable first-order formula with shared subterms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fo2(Arc<Fo2Kind>);

impl Fo2 {
    pub fn new(kind: Fo2Kind) -> Fo2 {
        Fo2(Arc::new(kind))
    }

    pub fn kind(&self) -> &Fo2Kind {
        &self.0
    }

    /// Address of the shared node, usable as a memo key.
    pub fn ptr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn tt() -> Fo2 {
        Fo2::new(Fo2Kind::True)
    }

    pub fn ff() -> Fo2 {
        Fo2::new(Fo2Kind::False)
    }

    pub fn letter(a: &str, v: Var) -> Fo2 {
        Fo2::new(Fo2Kind::Letter(a.to_string(), v))
    }

    pub fn less(a: Var, b: Var) -> Fo2 {
        Fo2::new(Fo2Kind::Less(a, b))
    }

    pub fn less_eq(a: Var, b: Var) -> Fo2 {
        Fo2::new(Fo2Kind::LessEq(a, b))
    }

    pub fn suc(a: Var, b: Var) -> Fo2 {
        Fo2::new(Fo2Kind::Suc(a, b))
    }

    pub fn between(a: &str, l: Var, r: Var) -> Fo2 {
        Fo2::new(Fo2Kind::Between(a.to_string(), l, r))
    }

    pub fn threshold(a: &str, k: u64, l: Var, r: Var) -> Fo2 {
        Fo2::new(Fo2Kind::Threshold(a.to_string(), k, l, r))
    }

    pub fn between_factor(u: &[String], l: Var, r: Var) -> Fo2 {
        Fo2::new(Fo2Kind::BetweenFactor(u.to_vec(), l, r))
    }

    pub fn factor_threshold(u: &[String], k: u64, l: Var, r: Var) -> Fo2 {
        Fo2::new(Fo2Kind::FactorThreshold(u.to_vec(), k, l, r))
    }

    /// `x = y` as `x <= y ∧ y <= x`.
    pub fn equal(a: Var, b: Var) -> Fo2 {
        Fo2::and(Fo2::less_eq(a, b), Fo2::less_eq(b, a))
    }

    pub fn not(a: Fo2) -> Fo2 {
        Fo2::new(Fo2Kind::Not(a))
    }

    pub fn and(a: Fo2, b: Fo2) -> Fo2 {
        Fo2::new(Fo2Kind::And(a, b))
    }

    pub fn or(a: Fo2, b: Fo2) -> Fo2 {
        Fo2::new(Fo2Kind::Or(a, b))
    }

    pub fn implies(a: Fo2, b: Fo2) -> Fo2 {
        Fo2::or(Fo2::not(a), b)
    }

    pub fn exists(v: Var, a: Fo2) -> Fo2 {
        Fo2::new(Fo2Kind::Exists(v, a))
    }

    pub fn forall(v: Var, a: Fo2) -> Fo2 {
        Fo2::new(Fo2Kind::Forall(v, a))
    }

    pub fn is_true(&self) -> bool {
        matches!(self.kind(), Fo2Kind::True)
    }

    pub fn is_false(&self) -> bool {
        matches!(self.kind(), Fo2Kind::False)
    }

    /// Negation folding constants and double negation.
    pub fn neg(a: Fo2) -> Fo2 {
        match a.kind() {
            Fo2Kind::True => Fo2::ff(),
            Fo2Kind::False => Fo2::tt(),
            Fo2Kind::Not(b) => b.clone(),
            _ => Fo2::not(a),
        }
    }

    /// Conjunction folding constants.
    pub fn conj(a: Fo2, b: Fo2) -> Fo2 {
        if a.is_false() || b.is_false() {
            Fo2::ff()
        } else if a.is_true() {
            b
        } else if b.is_true() {
            a
        } else {
            Fo2::and(a, b)
        }
    }

    /// Disjunction folding constants.
    pub fn disj(a: Fo2, b: Fo2) -> Fo2 {
        if a.is_true() || b.is_true() {
            Fo2::tt()
        } else if a.is_false() {
            b
        } else if b.is_false() {
            a
        } else {
            Fo2::or(a, b)
        }
    }

    /// Right-nested conjunction; `true` when empty.
    pub fn all<I: IntoIterator<Item = Fo2>>(items: I) -> Fo2 {
        let items: Vec<Fo2> = items.into_iter().collect();
        items.into_iter().rev().fold(Fo2::tt(), |acc, x| Fo2::conj(x, acc))
    }

    /// Right-nested disjunction; `false` when empty.
    pub fn any<I: IntoIterator<Item = Fo2>>(items: I) -> Fo2 {
        let items: Vec<Fo2> = items.into_iter().collect();
        items.into_iter().rev().fold(Fo2::ff(), |acc, x| Fo2::disj(x, acc))
    }

    /// Existential quantification folding constant bodies.
    pub fn exists_s(v: Var, a: Fo2) -> Fo2 {
        if a.is_false() {
            a
        } else {
            Fo2::exists(v, a)
        }
    }

    /// Free variables.
    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        match self.kind() {
            Fo2Kind::True | Fo2Kind::False => {}
            Fo2Kind::Letter(_, v) => {
                out.insert(*v);
            }
            Fo2Kind::Less(a, b)
            | Fo2Kind::LessEq(a, b)
            | Fo2Kind::Suc(a, b)
            | Fo2Kind::Between(_, a, b)
            | Fo2Kind::Threshold(_, _, a, b)
            | Fo2Kind::BetweenFactor(_, a, b)
            | Fo2Kind::FactorThreshold(_, _, a, b) => {
                out.insert(*a);
                out.insert(*b);
            }
            Fo2Kind::Not(a) => out = a.free_vars(),
            Fo2Kind::And(a, b) | Fo2Kind::Or(a, b) => {
                out = a.free_vars();
                out.extend(b.free_vars());
            }
            Fo2Kind::Exists(v, a) | Fo2Kind::Forall(v, a) => {
                out = a.free_vars();
                out.remove(v);
            }
        }
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Quantifier nesting depth.
    pub fn quantifier_depth(&self) -> usize {
        match self.kind() {
            Fo2Kind::Not(a) => a.quantifier_depth(),
            Fo2Kind::And(a, b) | Fo2Kind::Or(a, b) => a.quantifier_depth().max(b.quantifier_depth()),
            Fo2Kind::Exists(_, a) | Fo2Kind::Forall(_, a) => 1 + a.quantifier_depth(),
            _ => 0,
        }
    }

    /// Number of nodes written as a tree.
    pub fn size(&self) -> usize {
        1 + match self.kind() {
            Fo2Kind::Not(a) | Fo2Kind::Exists(_, a) | Fo2Kind::Forall(_, a) => a.size(),
            Fo2Kind::And(a, b) | Fo2Kind::Or(a, b) => a.size() + b.size(),
            _ => 0,
        }
    }

    /// Number of distinct shared nodes.
    pub fn dag_size(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(n) = stack.pop() {
            if !seen.insert(n.ptr()) {
                continue;
            }
            match n.kind() {
                Fo2Kind::Not(a) | Fo2Kind::Exists(_, a) | Fo2Kind::Forall(_, a) => {
                    stack.push(a.clone())
                }
                Fo2Kind::And(a, b) | Fo2Kind::Or(a, b) => {
                    stack.push(a.clone());
                    stack.push(b.clone());
                }
                _ => {}
            }
        }
        seen.len()
    }

    /// Letters mentioned anywhere.
    pub fn letters(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_letters(&mut out);
        out
    }

    fn collect_letters(&self, out: &mut BTreeSet<String>) {
        match self.kind() {
            Fo2Kind::Letter(a, _) | Fo2Kind::Between(a, ..) | Fo2Kind::Threshold(a, ..) => {
                out.insert(a.clone());
            }
            Fo2Kind::BetweenFactor(u, ..) | Fo2Kind::FactorThreshold(u, ..) => {
                out.extend(u.iter().cloned());
            }
            Fo2Kind::Not(a) | Fo2Kind::Exists(_, a) | Fo2Kind::Forall(_, a) => {
                a.collect_letters(out)
            }
            Fo2Kind::And(a, b) | Fo2Kind::Or(a, b) => {
                a.collect_letters(out);
                b.collect_letters(out);
            }
            _ => {}
        }
    }

    /// Longest factor in a between-factor or factor-threshold atom.
    pub fn longest_factor(&self) -> usize {
        match self.kind() {
            Fo2Kind::BetweenFactor(u, ..) | Fo2Kind::FactorThreshold(u, ..) => u.len(),
            Fo2Kind::Not(a) | Fo2Kind::Exists(_, a) | Fo2Kind::Forall(_, a) => a.longest_factor(),
            Fo2Kind::And(a, b) | Fo2Kind::Or(a, b) => a.longest_factor().max(b.longest_factor()),
            _ => 0,
        }
    }

    /// Swaps the roles of x and y throughout.
    pub fn swap_vars(&self) -> Fo2 {
        let s = |v: &Var| v.other();
        let k = match self.kind() {
            Fo2Kind::True => Fo2Kind::True,
            Fo2Kind::False => Fo2Kind::False,
            Fo2Kind::Letter(a, v) => Fo2Kind::Letter(a.clone(), s(v)),
            Fo2Kind::Less(a, b) => Fo2Kind::Less(s(a), s(b)),
            Fo2Kind::LessEq(a, b) => Fo2Kind::LessEq(s(a), s(b)),
            Fo2Kind::Suc(a, b) => Fo2Kind::Suc(s(a), s(b)),
            Fo2Kind::Between(c, a, b) => Fo2Kind::Between(c.clone(), s(a), s(b)),
            Fo2Kind::Threshold(c, k, a, b) => Fo2Kind::Threshold(c.clone(), *k, s(a), s(b)),
            Fo2Kind::BetweenFactor(u, a, b) => Fo2Kind::BetweenFactor(u.clone(), s(a), s(b)),
            Fo2Kind::FactorThreshold(u, k, a, b) => {
                Fo2Kind::FactorThreshold(u.clone(), *k, s(a), s(b))
            }
            Fo2Kind::Not(a) => Fo2Kind::Not(a.swap_vars()),
            Fo2Kind::And(a, b) => Fo2Kind::And(a.swap_vars(), b.swap_vars()),
            Fo2Kind::Or(a, b) => Fo2Kind::Or(a.swap_vars(), b.swap_vars()),
            Fo2Kind::Exists(v, a) => Fo2Kind::Exists(s(v), a.swap_vars()),
            Fo2Kind::Forall(v, a) => Fo2Kind::Forall(s(v), a.swap_vars()),
        };
        Fo2::new(k)
    }

    /// Renames the formula so that its only free variable becomes `target`.
    /// The formula must have at most one free variable.
    pub fn with_free_var(&self, target: Var) -> Fo2 {
        let fv = self.free_vars();
        if fv.len() == 1 && !fv.contains(&target) {
            self.swap_vars()
        } else {
            self.clone()
        }
    }
}

fn quoted(u: &[String]) -> String {
    if u.iter().all(|l| l.chars().count() == 1) {
        format!("\"{}\"", u.concat())
    } else {
        format!("\"{}\"", u.join(" "))
    }
}

// Precedence levels: 0 quantifier body, 1 or, 2 and, 3 unary.
impl Fo2 {
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        let n = |v: &Var| v.name();
        match self.kind() {
            Fo2Kind::True => write!(f, "true"),
            Fo2Kind::False => write!(f, "false"),
            Fo2Kind::Letter(a, v) => write!(f, "{a}({})", n(v)),
            Fo2Kind::Less(a, b) => write!(f, "{}<{}", n(a), n(b)),
            Fo2Kind::LessEq(a, b) => write!(f, "{}<={}", n(a), n(b)),
            Fo2Kind::Suc(a, b) => write!(f, "suc({},{})", n(a), n(b)),
            Fo2Kind::Between(c, a, b) => write!(f, "{c}({},{})", n(a), n(b)),
            Fo2Kind::Threshold(c, k, a, b) => write!(f, "th({c},{k})({},{})", n(a), n(b)),
            Fo2Kind::BetweenFactor(u, a, b) => write!(f, "fac({})({},{})", quoted(u), n(a), n(b)),
            Fo2Kind::FactorThreshold(u, k, a, b) => {
                write!(f, "facth({},{k})({},{})", quoted(u), n(a), n(b))
            }
            Fo2Kind::Not(a) => {
                write!(f, "!")?;
                a.fmt_prec(f, 3)
            }
            Fo2Kind::And(a, b) => {
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
            Fo2Kind::Or(a, b) => {
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
            Fo2Kind::Exists(v, a) | Fo2Kind::Forall(v, a) => {
                let q = if matches!(self.kind(), Fo2Kind::Exists(..)) {
                    "exists"
                } else {
                    "forall"
                };
                let paren = prec > 0;
                if paren {
                    write!(f, "(")?;
                }
                write!(f, "{q} {}. ", n(v))?;
                a.fmt_prec(f, 0)?;
                if paren {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Fo2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_variables() {
        let f = Fo2::exists(Var::Y, Fo2::and(Fo2::less(Var::X, Var::Y), Fo2::letter("a", Var::Y)));
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), vec![Var::X]);
        assert!(Fo2::exists(Var::X, f.clone()).is_sentence());
        assert_eq!(Fo2::exists(Var::X, f).quantifier_depth(), 2);
    }

    #[test]
    fn rendering() {
        let f = Fo2::forall(
            Var::X,
            Fo2::implies(
                Fo2::forall(Var::Y, Fo2::less_eq(Var::X, Var::Y)),
                Fo2::letter("a", Var::X),
            ),
        );
        assert_eq!(f.to_string(), "forall x. !(forall y. x<=y) | a(x)");
    }
}
