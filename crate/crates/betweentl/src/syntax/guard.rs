use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

/// Comparison operator of a threshold constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Cmp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

impl Cmp {
    pub fn holds(self, count: u64, bound: u64) -> bool {
        match self {
            Cmp::Lt => count < bound,
            Cmp::Le => count <= bound,
            Cmp::Gt => count > bound,
            Cmp::Ge => count >= bound,
            Cmp::Eq => count == bound,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Ge => ">=",
            Cmp::Eq => "=",
        }
    }
}

/// What a constraint counts: letters from a set, or occurrences of a factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Subject {
    Letters(BTreeSet<String>),
    Factor(Vec<String>),
}

/// `#B ∼ c` or `#"u" ∼ c`, counted strictly between two positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Constraint {
    pub subject: Subject,
    pub cmp: Cmp,
    pub bound: u64,
}

impl Constraint {
    pub fn letters<I, S>(letters: I, cmp: Cmp, bound: u64) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Constraint {
            subject: Subject::Letters(letters.into_iter().map(Into::into).collect()),
            cmp,
            bound,
        }
    }

    pub fn factor<I, S>(factor: I, cmp: Cmp, bound: u64) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Constraint {
            subject: Subject::Factor(factor.into_iter().map(Into::into).collect()),
            cmp,
            bound,
        }
    }

    /// `#B = 0`.
    pub fn is_invariance(&self) -> bool {
        matches!(self.subject, Subject::Letters(_)) && self.cmp == Cmp::Eq && self.bound == 0
    }

    /// Presence (`> 0`, `>= 1`) or absence (`= 0`, `< 1`, `<= 0`) requirement.
    pub fn requirement(&self) -> Option<bool> {
        match (self.cmp, self.bound) {
            (Cmp::Gt, 0) | (Cmp::Ge, 1) => Some(true),
            (Cmp::Eq, 0) | (Cmp::Lt, 1) | (Cmp::Le, 0) => Some(false),
            _ => None,
        }
    }

    pub fn is_factor(&self) -> bool {
        matches!(self.subject, Subject::Factor(_))
    }

    /// Size contribution: |B| or |u| plus the binary length of the bound.
    pub fn size(&self) -> usize {
        let subject = match &self.subject {
            Subject::Letters(b) => b.len(),
            Subject::Factor(u) => u.len(),
        };
        subject + ceil_log2(self.bound)
    }
}

/// ⌈log₂ c⌉, taken as 0 for c ≤ 1.
pub fn ceil_log2(c: u64) -> usize {
    if c <= 1 {
        0
    } else {
        (64 - (c - 1).leading_zeros()) as usize
    }
}

/// A boolean combination of constraints.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Guard {
    Atom(Constraint),
    Not(Box<Guard>),
    And(Box<Guard>, Box<Guard>),
    Or(Box<Guard>, Box<Guard>),
}

/// Syntactic guard fragments, from most to least restrictive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Fragment {
    /// A single `#B = 0`.
    Inv,
    /// A single letter-set constraint.
    Th,
    /// A boolean combination of `#B = 0`.
    BInv,
    /// A boolean combination of letter-set constraints.
    BTh,
    /// A single `#"v" = 0`.
    NFac,
    /// A conjunction of positive factor requirements.
    Fac,
    /// A boolean combination of factor presence and absence requirements.
    BFac,
    /// Anything.
    BThFac,
}

impl Guard {
    pub fn atom(c: Constraint) -> Self {
        Guard::Atom(c)
    }

    pub fn and(a: Guard, b: Guard) -> Self {
        Guard::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Guard, b: Guard) -> Self {
        Guard::Or(Box::new(a), Box::new(b))
    }

    pub fn negate(a: Guard) -> Self {
        Guard::Not(Box::new(a))
    }

    /// `#B = 0`.
    pub fn none_of<I, S>(letters: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Guard::Atom(Constraint::letters(letters, Cmp::Eq, 0))
    }

    /// `!"v"`.
    pub fn avoid(v: &[String]) -> Self {
        Guard::Atom(Constraint::factor(v.iter().cloned(), Cmp::Eq, 0))
    }

    /// `+"u"`.
    pub fn contain(u: &[String]) -> Self {
        Guard::Atom(Constraint::factor(u.iter().cloned(), Cmp::Gt, 0))
    }

    /// Conjunction of the given guards, `None` when empty.
    pub fn all<I: IntoIterator<Item = Guard>>(items: I) -> Option<Guard> {
        let mut items: Vec<Guard> = items.into_iter().collect();
        let mut acc = items.pop()?;
        while let Some(g) = items.pop() {
            acc = Guard::and(g, acc);
        }
        Some(acc)
    }

    pub fn constraints(&self) -> Vec<&Constraint> {
        let mut out = Vec::new();
        self.collect_constraints(&mut out);
        out
    }

    fn collect_constraints<'a>(&'a self, out: &mut Vec<&'a Constraint>) {
        match self {
            Guard::Atom(c) => out.push(c),
            Guard::Not(g) => g.collect_constraints(out),
            Guard::And(a, b) | Guard::Or(a, b) => {
                a.collect_constraints(out);
                b.collect_constraints(out);
            }
        }
    }

    pub fn size(&self) -> usize {
        self.constraints().iter().map(|c| c.size()).sum()
    }

    fn is_conjunction(&self) -> bool {
        match self {
            Guard::Atom(_) => true,
            Guard::And(a, b) => a.is_conjunction() && b.is_conjunction(),
            _ => false,
        }
    }

    /// The most restrictive fragment containing this guard.
    pub fn fragment(&self) -> Fragment {
        let cs = self.constraints();
        let single = matches!(self, Guard::Atom(_));
        let letters_only = cs.iter().all(|c| !c.is_factor());
        if letters_only {
            let inv = if single {
                cs[0].is_invariance()
            } else {
                cs.iter().all(|c| c.requirement().is_some())
            };
            return match (single, inv) {
                (true, true) => Fragment::Inv,
                (true, false) => Fragment::Th,
                (false, true) => Fragment::BInv,
                (false, false) => Fragment::BTh,
            };
        }
        let requirements = cs.iter().all(|c| c.requirement().is_some());
        if single && cs[0].is_factor() && cs[0].requirement() == Some(false) {
            return Fragment::NFac;
        }
        if requirements
            && self.is_conjunction()
            && cs.iter().all(|c| c.is_factor() && c.requirement() == Some(true))
        {
            return Fragment::Fac;
        }
        if requirements {
            Fragment::BFac
        } else {
            Fragment::BThFac
        }
    }

    /// Whether the guard is accepted by the classifier of `fragment`.
    pub fn belongs_to(&self, fragment: Fragment) -> bool {
        let own = self.fragment();
        use Fragment::*;
        match fragment {
            Inv => own == Inv,
            Th => matches!(own, Inv | Th),
            BInv => {
                matches!(own, Inv | BInv)
                    || self
                        .constraints()
                        .iter()
                        .all(|c| !c.is_factor() && c.requirement().is_some())
            }
            BTh => matches!(own, Inv | Th | BInv | BTh),
            NFac => own == NFac,
            Fac => own == Fac,
            BFac => {
                matches!(own, Inv | BInv | NFac | Fac | BFac)
                    || self.constraints().iter().all(|c| c.requirement().is_some())
            }
            BThFac => true,
        }
    }
}

fn write_letter_set(f: &mut fmt::Formatter<'_>, set: &BTreeSet<String>) -> fmt::Result {
    write!(f, "{{")?;
    for (k, l) in set.iter().enumerate() {
        if k > 0 {
            write!(f, ",")?;
        }
        write!(f, "{l}")?;
    }
    write!(f, "}}")
}

fn quoted(u: &[String]) -> String {
    if u.iter().all(|l| l.chars().count() == 1) {
        format!("\"{}\"", u.concat())
    } else {
        format!("\"{}\"", u.join(" "))
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.subject {
            Subject::Letters(b) => {
                write!(f, "#")?;
                write_letter_set(f, b)?;
                write!(f, "{}{}", self.cmp.symbol(), self.bound)
            }
            Subject::Factor(u) => match (self.cmp, self.bound) {
                (Cmp::Gt, 0) => write!(f, "+{}", quoted(u)),
                (Cmp::Eq, 0) => write!(f, "!{}", quoted(u)),
                _ => write!(f, "#{}{}{}", quoted(u), self.cmp.symbol(), self.bound),
            },
        }
    }
}

impl Guard {
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        // 0: or, 1: and, 2: unary
        match self {
            Guard::Atom(c) => write!(f, "{c}"),
            Guard::Not(g) => {
                write!(f, "!")?;
                g.fmt_prec(f, 2)
            }
            Guard::And(a, b) => {
                if prec > 1 {
                    write!(f, "(")?;
                }
                a.fmt_prec(f, 2)?;
                write!(f, " & ")?;
                b.fmt_prec(f, 1)?;
                if prec > 1 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Guard::Or(a, b) => {
                if prec > 0 {
                    write!(f, "(")?;
                }
                a.fmt_prec(f, 1)?;
                write!(f, " | ")?;
                b.fmt_prec(f, 0)?;
                if prec > 0 {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_sizes() {
        assert_eq!(ceil_log2(0), 0);
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(ceil_log2(9), 4);
    }

    #[test]
    fn fragments() {
        let inv = Guard::none_of(["a"]);
        assert_eq!(inv.fragment(), Fragment::Inv);
        let th = Guard::Atom(Constraint::letters(["a"], Cmp::Ge, 2));
        assert_eq!(th.fragment(), Fragment::Th);
        let binv = Guard::and(inv.clone(), Guard::negate(Guard::none_of(["b"])));
        assert_eq!(binv.fragment(), Fragment::BInv);
        let bth = Guard::and(inv.clone(), th.clone());
        assert_eq!(bth.fragment(), Fragment::BTh);
        let aa = vec!["a".to_string(), "a".to_string()];
        assert_eq!(Guard::avoid(&aa).fragment(), Fragment::NFac);
        assert_eq!(Guard::contain(&aa).fragment(), Fragment::Fac);
        let bfac = Guard::and(Guard::contain(&aa), Guard::avoid(&aa));
        assert_eq!(bfac.fragment(), Fragment::BFac);
        for g in [&inv, &th, &binv, &bth] {
            assert!(g.belongs_to(Fragment::BTh));
        }
        assert!(inv.belongs_to(Fragment::BInv) && inv.belongs_to(Fragment::Th));
    }

    #[test]
    fn rendering() {
        let g = Guard::and(
            Guard::Atom(Constraint::letters(["a"], Cmp::Eq, 2)),
            Guard::Atom(Constraint::letters(["b"], Cmp::Eq, 0)),
        );
        assert_eq!(g.to_string(), "#{a}=2 & #{b}=0");
        let aa = vec!["a".to_string(), "a".to_string()];
        assert_eq!(Guard::contain(&aa).to_string(), "+\"aa\"");
        assert_eq!(Guard::avoid(&aa).to_string(), "!\"aa\"");
    }
}
