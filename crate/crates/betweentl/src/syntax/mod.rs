//! Formula ASTs, the text grammar, structural sharing and size measures.

mod fo2;
mod guard;
mod parse;
mod tl;
mod word;

pub use fo2::{Fo2, Fo2Kind, Var};
pub use guard::{ceil_log2, Cmp, Constraint, Fragment, Guard, Subject};
pub use parse::{parse_fo2, parse_guard, parse_tl};
pub use tl::{end_of, mirror_guard, st_of, Tl, TlKind};
pub use word::{Alphabet, MarkedWord, Word, WordIter};

/// Number of distinct interned nodes reachable from `phi`, with guard and
/// exponent contributions.
pub fn dag_size(phi: &Tl) -> usize {
    phi.dag_size()
}
