//! Seeded random formulas and words, and the stage-wise translation suite.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::semantics::TlProgram;
use crate::syntax::{Alphabet, Cmp, Constraint, Fo2, Guard, Tl, Var, Word};
use crate::translate::{pipeline_to_ltl, PipelineOptions};

/// Shape limits of random temporal formulas.
#[derive(Debug, Clone, Copy)]
pub struct TlShape {
    pub max_alphabet: usize,
    pub max_depth: usize,
    pub max_factor: usize,
    pub max_threshold: u64,
}

impl Default for TlShape {
    fn default() -> Self {
        TlShape {
            max_alphabet: 3,
            max_depth: 3,
            max_factor: 4,
            max_threshold: 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CorpusCase {
    pub id: usize,
    pub alphabet: Alphabet,
    pub formula: Tl,
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn alphabet_of_size(n: usize) -> Alphabet {
    Alphabet::new(["a", "b", "c", "d"].iter().take(n.clamp(1, 4)).copied()).expect("letters")
}

fn random_word<R: Rng>(rng: &mut R, alphabet: &Alphabet, min: usize, max: usize) -> Vec<String> {
    let len = rng.gen_range(min..=max);
    (0..len)
        .map(|_| alphabet.letters().choose(rng).expect("nonempty").clone())
        .collect()
}

fn random_cmp<R: Rng>(rng: &mut R) -> Cmp {
    *[Cmp::Lt, Cmp::Le, Cmp::Gt, Cmp::Ge, Cmp::Eq].choose(rng).expect("nonempty")
}

fn random_constraint<R: Rng>(rng: &mut R, alphabet: &Alphabet, shape: &TlShape) -> Constraint {
    let bound = rng.gen_range(0..=shape.max_threshold);
    let cmp = random_cmp(rng);
    if rng.gen_bool(0.5) {
        let mut letters: Vec<String> = alphabet
            .letters()
            .iter()
            .filter(|_| rng.gen_bool(0.5))
            .cloned()
            .collect();
        if letters.is_empty() {
            letters.push(alphabet.letters().choose(rng).expect("nonempty").clone());
        }
        Constraint::letters(letters, cmp, bound)
    } else {
        Constraint::factor(random_word(rng, alphabet, 1, shape.max_factor), cmp, bound)
    }
}

pub fn random_guard<R: Rng>(rng: &mut R, alphabet: &Alphabet, shape: &TlShape) -> Guard {
    let atom = |rng: &mut R| Guard::Atom(random_constraint(rng, alphabet, shape));
    match rng.gen_range(0..6) {
        0 => Guard::Not(Box::new(atom(rng))),
        1 => Guard::And(Box::new(atom(rng)), Box::new(atom(rng))),
        2 => Guard::Or(Box::new(atom(rng)), Box::new(atom(rng))),
        _ => atom(rng),
    }
}

fn random_tl_at<R: Rng>(rng: &mut R, alphabet: &Alphabet, shape: &TlShape, depth: usize) -> Tl {
    let leaf = |rng: &mut R| {
        if rng.gen_bool(0.85) {
            Tl::letter(alphabet.letters().choose(rng).expect("nonempty"))
        } else {
            Tl::tt()
        }
    };
    if depth == 0 || rng.gen_bool(0.2) {
        return leaf(rng);
    }
    let sub = |rng: &mut R, d: usize| random_tl_at(rng, alphabet, shape, d);
    match rng.gen_range(0..10) {
        0 => Tl::not(sub(rng, depth)),
        1 => Tl::and(sub(rng, depth), sub(rng, depth)),
        2 => Tl::or(sub(rng, depth), sub(rng, depth)),
        3 | 4 => {
            let g = random_guard(rng, alphabet, shape);
            Tl::future_g(g, sub(rng, depth - 1))
        }
        5 => {
            let g = random_guard(rng, alphabet, shape);
            Tl::past_g(g, sub(rng, depth - 1))
        }
        6 => Tl::future(sub(rng, depth - 1)),
        7 => Tl::next(sub(rng, depth - 1)),
        8 => Tl::until(sub(rng, depth - 1), sub(rng, depth - 1)),
        _ => Tl::since(sub(rng, depth - 1), sub(rng, depth - 1)),
    }
}

fn has_guard(phi: &Tl) -> bool {
    use crate::syntax::TlKind;
    phi.topological()
        .iter()
        .any(|n| matches!(n.kind(), TlKind::Future(Some(_), _) | TlKind::Past(Some(_), _)))
}

/// A random formula with at least one guarded modality and modal depth ≤ `shape.max_depth`.
pub fn random_guarded_tl<R: Rng>(rng: &mut R, alphabet: &Alphabet, shape: &TlShape) -> Tl {
    let depth = shape.max_depth.max(1);
    loop {
        let phi = random_tl_at(rng, alphabet, shape, depth);
        if has_guard(&phi) && phi.modal_depth() <= depth {
            return phi;
        }
        if phi.modal_depth() < depth {
            let g = random_guard(rng, alphabet, shape);
            return Tl::future_g(g, phi);
        }
    }
}

/// `count` guarded formulas over alphabets of 1 to `shape.max_alphabet` letters.
pub fn guarded_tl_corpus(seed: u64, count: usize, shape: &TlShape) -> Vec<CorpusCase> {
    let mut rng = rng_for(seed);
    (0..count)
        .map(|id| {
            let alphabet = alphabet_of_size(rng.gen_range(1..=shape.max_alphabet.max(1)));
            let formula = random_guarded_tl(&mut rng, &alphabet, shape);
            CorpusCase { id, alphabet, formula }
        })
        .collect()
}

fn random_fo2_at<R: Rng>(rng: &mut R, alphabet: &Alphabet, scope: &[Var], depth: usize, max_factor: usize) -> Fo2 {
    let pick_var = |rng: &mut R| *scope.choose(rng).expect("scope");
    let letter = |rng: &mut R| alphabet.letters().choose(rng).expect("nonempty").clone();
    let atom = |rng: &mut R| {
        let (l, r) = if scope.len() == 2 && rng.gen_bool(0.5) {
            (Var::Y, Var::X)
        } else {
            (Var::X, Var::Y)
        };
        let two = scope.len() == 2;
        match rng.gen_range(0..7) {
            0 if two => Fo2::less(l, r),
            1 if two => Fo2::between(&letter(rng), l, r),
            2 | 3 if two => Fo2::between_factor(&random_word(rng, alphabet, 2, max_factor), l, r),
            4 if two => Fo2::suc(l, r),
            _ => Fo2::letter(&letter(rng), pick_var(rng)),
        }
    };
    if depth == 0 || rng.gen_bool(0.25) {
        return atom(rng);
    }
    match rng.gen_range(0..6) {
        0 => Fo2::not(random_fo2_at(rng, alphabet, scope, depth, max_factor)),
        1 => Fo2::and(
            random_fo2_at(rng, alphabet, scope, depth - 1, max_factor),
            random_fo2_at(rng, alphabet, scope, depth - 1, max_factor),
        ),
        2 => Fo2::or(
            random_fo2_at(rng, alphabet, scope, depth - 1, max_factor),
            random_fo2_at(rng, alphabet, scope, depth - 1, max_factor),
        ),
        _ => {
            let fresh = scope.last().map_or(Var::X, |v| v.other());
            let v = if rng.gen_bool(0.8) { fresh } else { fresh.other() };
            let mut inner_scope = scope.to_vec();
            if !inner_scope.contains(&v) {
                inner_scope.push(v);
            }
            let body = random_fo2_at(rng, alphabet, &inner_scope, depth - 1, max_factor);
            if rng.gen_bool(0.5) {
                Fo2::new(crate::syntax::Fo2Kind::Exists(v, body))
            } else {
                Fo2::new(crate::syntax::Fo2Kind::Forall(v, body))
            }
        }
    }
}

/// Random FO²[<,bet,fac] sentences: letters, order, successor, letter and factor betweenness.
pub fn fo2_betfac_corpus(seed: u64, count: usize, alphabet: &Alphabet, max_factor: usize) -> Vec<Fo2> {
    let mut rng = rng_for(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v = if rng.gen_bool(0.5) { Var::X } else { Var::Y };
        let body = random_fo2_at(&mut rng, alphabet, &[v], 4, max_factor);
        let phi = if rng.gen_bool(0.5) {
            Fo2::new(crate::syntax::Fo2Kind::Exists(v, body))
        } else {
            Fo2::new(crate::syntax::Fo2Kind::Forall(v, body))
        };
        if phi.is_sentence() {
            out.push(phi);
        }
    }
    out
}

/// A random a-word of length at most `max_len` (at least |A| + 1).
pub fn random_a_word<R: Rng>(rng: &mut R, alphabet: &Alphabet, a: &str, max_len: usize) -> Word {
    let rest: Vec<String> = alphabet.letters().iter().filter(|l| *l != a).cloned().collect();
    let tail_min = rest.len();
    let budget = max_len.max(tail_min + 1);
    let middle_len = rng.gen_range(0..=budget - tail_min - 1);
    let mut letters = vec![a.to_string()];
    for _ in 0..middle_len.saturating_sub(1) {
        letters.push(alphabet.letters().choose(rng).expect("nonempty").clone());
    }
    if middle_len > 0 {
        letters.push(a.to_string());
    }
    let extra = rng.gen_range(0..=budget - letters.len() - tail_min);
    let mut tail = rest.clone();
    for _ in 0..extra {
        if let Some(l) = rest.choose(rng) {
            tail.push(l.clone());
        }
    }
    tail.shuffle(rng);
    letters.extend(tail);
    Word::new(letters)
}

/// Words of length ≤ `max_len`, as index vectors.
pub fn all_words(alphabet: &Alphabet, max_len: usize) -> Vec<Vec<usize>> {
    (0..=max_len).flat_map(|n| alphabet.words_of_len(n)).collect()
}

/// Outcome of one stage on one corpus formula.
#[derive(Debug, Clone, Serialize)]
pub struct StageCheck {
    pub stage: String,
    pub dag_size: usize,
    pub mismatches: usize,
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub id: usize,
    pub alphabet: String,
    pub formula: String,
    pub error: Option<String>,
    pub stages: Vec<StageCheck>,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.stages.iter().all(|s| s.mismatches == 0)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub cases: usize,
    pub max_len: usize,
    pub words_checked: usize,
    pub failures: usize,
    pub reports: Vec<CaseReport>,
}

/// Checks one formula: every pipeline stage agrees with it on all words ≤ `max_len`.
pub fn check_translation_case(case: &CorpusCase, max_len: usize, options: PipelineOptions) -> CaseReport {
    let mut report = CaseReport {
        id: case.id,
        alphabet: case.alphabet.to_string(),
        formula: case.formula.to_string(),
        error: None,
        stages: Vec::new(),
    };
    let translation = match pipeline_to_ltl(&case.formula, options) {
        Ok(t) => t,
        Err(e) => {
            report.error = Some(e.to_string());
            return report;
        }
    };
    let words = all_words(&case.alphabet, max_len);
    let reference = TlProgram::compile(&case.formula, &case.alphabet);
    let truth: Vec<bool> = words.iter().map(|w| reference.eval_sentence(w)).collect();
    for stage in &translation.stages {
        let prog = TlProgram::compile(&stage.output, &case.alphabet);
        let bad: Vec<usize> = (0..words.len())
            .filter(|&i| prog.eval_sentence(&words[i]) != truth[i])
            .collect();
        report.stages.push(StageCheck {
            stage: stage.name.to_string(),
            dag_size: stage.output.dag_size(),
            mismatches: bad.len(),
            counterexample: bad
                .first()
                .map(|&i| Word::from_indices(&case.alphabet, &words[i]).to_string()),
        });
    }
    report
}

/// Runs the stage-wise oracle comparison over a seeded corpus, in parallel.
pub fn run_translation_suite(seed: u64, count: usize, max_len: usize, shape: &TlShape) -> Result<SuiteReport> {
    let corpus = guarded_tl_corpus(seed, count, shape);
    let reports: Vec<CaseReport> = corpus
        .par_iter()
        .map(|c| check_translation_case(c, max_len, PipelineOptions::default()))
        .collect();
    let words_checked = corpus
        .iter()
        .map(|c| all_words(&c.alphabet, max_len).len())
        .sum();
    Ok(SuiteReport {
        seed,
        cases: corpus.len(),
        max_len,
        words_checked,
        failures: reports.iter().filter(|r| !r.passed()).count(),
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorize::is_a_word;

    #[test]
    fn corpus_is_deterministic_and_guarded() {
        let shape = TlShape::default();
        let a = guarded_tl_corpus(7, 50, &shape);
        let b = guarded_tl_corpus(7, 50, &shape);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.formula.to_string(), y.formula.to_string());
            assert!(has_guard(&x.formula));
            assert!(x.formula.modal_depth() <= shape.max_depth);
        }
    }

    #[test]
    fn fo2_corpus_is_sentences() {
        let ab = Alphabet::parse("ab").unwrap();
        for phi in fo2_betfac_corpus(3, 40, &ab, 3) {
            assert!(phi.is_sentence());
        }
    }

    #[test]
    fn random_a_words_are_a_words() {
        let mut rng = rng_for(1);
        for n in 1..=4 {
            let alphabet = alphabet_of_size(n);
            for _ in 0..100 {
                let w = random_a_word(&mut rng, &alphabet, "a", 20);
                assert!(is_a_word(&w, "a", &alphabet), "{w}");
                assert!(w.len() <= 20);
            }
        }
    }

    #[test]
    fn small_suite_passes() {
        let report = run_translation_suite(0, 10, 5, &TlShape::default()).unwrap();
        let bad: Vec<_> = report.reports.iter().filter(|r| !r.passed()).collect();
        assert!(bad.is_empty(), "{bad:?}");
    }
}
