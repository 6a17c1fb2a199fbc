//! Acceptance criteria: one PASS/FAIL line per criterion.
//!
//! The process exits non-zero when a criterion fails for a reason other than
//! a documented discrepancy in the published worked examples.

use std::time::Instant;

use betweentl::algebra::{
    in_aperiodic, in_da, in_locally_da, in_meda, regex_to_min_dfa, syntactic_monoid, syntactic_semigroup,
    DEFAULT_ELEMENT_BUDGET,
};
use betweentl::corpus::{fo2_betfac_corpus, guarded_tl_corpus, random_a_word, rng_for, run_translation_suite, TlShape};
use betweentl::factorize::{run_sequence, run_sequence_with_order, Subalphabet};
use betweentl::games::{decide_equiv_words, ThresholdProfile};
use betweentl::sat::{bounded_fo2_search, ltl_to_nfa, shortest_model, BoundedOutcome, SatOptions};
use betweentl::semantics::{enumerate_models, eval_fo2_sentence, Sentence, TlProgram, DEFAULT_WORD_BUDGET};
use betweentl::syntax::{parse_fo2, parse_tl, Alphabet, Cmp, Constraint, Guard, Tl, Word};
use betweentl::translate::{
    build_beta, compute_overlaps, delay_fo2, encode_tiling, expand_word, fo2_threshold_to_between, pipeline_to_ltl,
    PipelineOptions, TilingInstance,
};
use rayon::prelude::*;

struct Outcome {
    pass: bool,
    detail: String,
    /// Set when the failure is a documented discrepancy of the published example.
    known: Option<&'static str>,
}

fn ok(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
        known: None,
    }
}

fn w(s: &str) -> Word {
    Word::from_chars(s)
}

fn words(ws: &[Word]) -> Vec<String> {
    ws.iter().map(Word::to_string).collect()
}

fn overlaps() -> Outcome {
    let mut notes = Vec::new();
    let mut strict = true;
    let mut known = None;
    let none = compute_overlaps(&w("aaa"), &w("bbb")).unwrap();
    let empty = none.pre1.is_empty() && none.post1.is_empty() && none.pre2.is_none() && none.post2.is_none();
    notes.push(format!("aaa/bbb all empty: {empty}"));
    strict &= empty;

    let o = compute_overlaps(&w("ababbb"), &w("bbabab")).unwrap();
    let pre1 = words(&o.pre1) == ["bb", "bbab"];
    let post1 = words(&o.post1) == ["abab"];
    let second = o.pre2.is_none() && o.post2.is_none();
    notes.push(format!(
        "ababbb/bbabab pre1={:?} ({pre1}) post1={:?} ({post1}) pre2/post2 empty ({second})",
        words(&o.pre1),
        words(&o.post1)
    ));
    strict &= pre1 && second;
    if !post1 {
        strict = false;
        if words(&o.post1) == ["abab", "babab"] {
            known = Some(
                "the published Opost1={abab} omits the one-letter overlap b giving babab; \
                 dropping it makes beta wrong on aababbbbababc (unit test single_letter_post_overlap_is_needed)",
            );
        }
    }

    let o = compute_overlaps(&w("aa"), &w("aaaabbaaaa")).unwrap();
    let four = words(&o.pre1) == ["aaaabbaaa"]
        && words(&o.post1) == ["aaabbaaaa"]
        && o.pre2 == Some(Word::empty())
        && o.post2 == Some(w("aabbaaaa"));
    notes.push(format!("aa/aaaabbaaaa four sets: {four}"));
    let all_other = empty && pre1 && second && four;
    Outcome {
        pass: strict && four,
        detail: notes.join("; "),
        known: if all_other { known } else { None },
    }
}

fn pipeline_soundness() -> Outcome {
    let shape = TlShape::default();
    let report = run_translation_suite(0, 200, 8, &shape).unwrap();
    let literal_failures = guarded_tl_corpus(0, 200, &shape)
        .par_iter()
        .filter(|c| {
            let lit = PipelineOptions {
                literal: true,
                ..Default::default()
            };
            !betweentl::corpus::check_translation_case(c, 8, lit).passed()
        })
        .count();
    let first = report.reports.iter().find(|r| !r.passed()).map(|r| r.formula.clone());
    ok(
        report.failures == 0,
        format!(
            "{} formulas x all words <= 8 ({} words): {} failing; literal boundary variant fails on {} formulas{}",
            report.cases,
            report.words_checked,
            report.failures,
            literal_failures,
            first.map(|f| format!("; first failure {f}")).unwrap_or_default()
        ),
    )
}

fn direct_guard(u: &Word, v: &Word) -> Guard {
    Guard::And(
        Box::new(Guard::Atom(Constraint::factor(u.letters().to_vec(), Cmp::Gt, 0))),
        Box::new(Guard::Atom(Constraint::factor(v.letters().to_vec(), Cmp::Eq, 0))),
    )
}

fn beta_exhaustive() -> Outcome {
    let ab = Alphabet::parse("ab").unwrap();
    let factors: Vec<Word> = (1..=4)
        .flat_map(|n| ab.words_of_len(n))
        .map(|x| Word::from_indices(&ab, &x))
        .collect();
    let all: Vec<Vec<usize>> = (0..=9).flat_map(|n| ab.words_of_len(n)).collect();
    let gammas = [Tl::letter("a"), Tl::letter("b"), Tl::future(Tl::letter("a"))];
    let pairs: Vec<(&Word, &Word)> = factors.iter().flat_map(|u| factors.iter().map(move |v| (u, v))).collect();
    let mismatches: usize = pairs
        .par_iter()
        .map(|(u, v)| {
            gammas
                .iter()
                .map(|g| {
                    let beta = TlProgram::compile(&build_beta(u, v, g).unwrap(), &ab);
                    let direct = TlProgram::compile(&Tl::future_g(direct_guard(u, v), g.clone()), &ab);
                    all.iter()
                        .filter(|x| beta.eval_positions(x) != direct.eval_positions(x))
                        .count()
                })
                .sum::<usize>()
        })
        .sum();
    ok(
        mismatches == 0,
        format!(
            "{} (u,v) pairs x 3 gammas x {} words: {mismatches} mismatches",
            pairs.len(),
            all.len()
        ),
    )
}

fn dag_polynomiality() -> Outcome {
    let ab = Alphabet::parse("ab").unwrap();
    let gammas = [
        Tl::letter("a"),
        Tl::future(Tl::letter("a")),
        Tl::future(Tl::and(Tl::letter("a"), Tl::next(Tl::letter("b")))),
    ];
    let mut rng = rng_for(4);
    let mut points: Vec<(f64, f64)> = Vec::new();
    for lu in 1..=10 {
        for lv in 1..=10 {
            for _ in 0..4 {
                let u = Word::from_indices(&ab, &random_indices(&mut rng, lu));
                let v = Word::from_indices(&ab, &random_indices(&mut rng, lv));
                for g in &gammas {
                    let n = (lu + lv + g.dag_size()) as f64;
                    let size = build_beta(&u, &v, g).unwrap().dag_size() as f64;
                    points.push((n, size));
                }
            }
        }
    }
    let mut by_n: std::collections::BTreeMap<u64, f64> = std::collections::BTreeMap::new();
    for (n, s) in &points {
        let e = by_n.entry(*n as u64).or_insert(0.0);
        *e = e.max(*s);
    }
    let xs: Vec<f64> = by_n.keys().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = by_n.values().map(|s| s.ln()).collect();
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let ratio_max = points.iter().map(|(n, s)| s / n.powi(3)).fold(0.0, f64::max);
    ok(
        slope <= 3.0,
        format!(
            "{} samples, fitted exponent of worst-case dag size {slope:.2}; max size/n^3 = {ratio_max:.3}",
            points.len()
        ),
    )
}

fn random_indices(rng: &mut impl rand::Rng, len: usize) -> Vec<usize> {
    (0..len).map(|_| rng.gen_range(0..2)).collect()
}

fn algebra_table() -> Outcome {
    let ab = Alphabet::parse("ab").unwrap();
    let m = |p: &str| syntactic_monoid(&regex_to_min_dfa(p, &ab).unwrap(), DEFAULT_ELEMENT_BUDGET).unwrap();
    let s = |p: &str| syntactic_semigroup(&regex_to_min_dfa(p, &ab).unwrap(), DEFAULT_ELEMENT_BUDGET).unwrap();
    let mut checks = Vec::new();
    let abs = m("(ab)*");
    checks.push((
        "(ab)*: not DA, MeDA, aperiodic",
        !in_da(&abs).unwrap() && in_meda(&abs).unwrap() && in_aperiodic(&abs),
    ));
    let e = |x: &str| abs.eval(&w(x).indices(&ab).unwrap()).unwrap();
    checks.push((
        "M((ab)*) has 6 elements, aba=a, bab=b, a^2=b^2=0",
        abs.size() == 6
            && e("aba") == e("a")
            && e("bab") == e("b")
            && e("aa") == e("bb")
            && (0..abs.size()).all(|x| abs.mul(x, e("aa")) == e("aa") && abs.mul(e("aa"), x) == e("aa")),
    ));
    checks.push(("first-last-equal: DA", in_da(&m("a+b+a(a+b)*a+b(a+b)*b")).unwrap()));
    let bab = "(a+b)*bab⁺ab(a+b)*";
    checks.push((
        "(a+b)*bab+ab(a+b)*: not locally DA, MeDA",
        !in_locally_da(&s(bab)).unwrap() && in_meda(&m(bab)).unwrap(),
    ));
    let bb2 = m("(a(ab)*b)*");
    checks.push(("(a(ab)*b)*: aperiodic, not MeDA", in_aperiodic(&bb2) && !in_meda(&bb2).unwrap()));
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    ok(
        failed.is_empty(),
        if failed.is_empty() {
            format!("{} golden checks hold", checks.len())
        } else {
            format!("failed: {}", failed.join(", "))
        },
    )
}

fn satisfiability() -> Outcome {
    let abc = Alphabet::parse("abc").unwrap();
    let o = SatOptions::default();
    let abp = parse_tl("a & X b & !F(a & X a) & !F(b & X b) & F(b & !X(a | b))", &abc).unwrap();
    let stair = parse_tl("F(F[#{a}=2 & #{b}=0] true)", &abc).unwrap();
    let m1 = shortest_model(&abp, &abc, o).unwrap();
    let m2 = shortest_model(&stair, &abc, o).unwrap();
    let corpus = guarded_tl_corpus(0, 200, &TlShape::default());
    let mismatched: usize = corpus
        .par_iter()
        .filter(|c| {
            let ltl = pipeline_to_ltl(&c.formula, PipelineOptions::default()).unwrap().output;
            let nfa = ltl_to_nfa(&ltl, &c.alphabet, o.max_states).unwrap();
            let mut lang: Vec<Word> = nfa
                .language_up_to(7)
                .iter()
                .map(|x| Word::from_indices(&c.alphabet, x))
                .collect();
            let mut models =
                enumerate_models(&Sentence::Tl(c.formula.clone()), &c.alphabet, 7, DEFAULT_WORD_BUDGET).unwrap();
            lang.sort();
            models.sort();
            lang != models
        })
        .count();
    let pass = m1 == Some(w("ab")) && m2 == Some(w("aaaaa")) && mismatched == 0;
    ok(
        pass,
        format!(
            "(ab)+ model {:?}, STAIR2 model {:?}, automaton language differs on {mismatched} of {} corpus formulas (length <= 7)",
            m1.map(|x| x.to_string()),
            m2.map(|x| x.to_string()),
            corpus.len()
        ),
    )
}

fn games() -> Outcome {
    let one = ThresholdProfile::ones();
    let base = decide_equiv_words(&w("ab"), &w("ba"), 1, &one) && !decide_equiv_words(&w("ab"), &w("ba"), 2, &one);
    let ab = Alphabet::parse("ab").unwrap();
    let all: Vec<Word> = (0..=5)
        .flat_map(|n| ab.words_of_len(n))
        .map(|x| Word::from_indices(&ab, &x))
        .collect();
    let profiles = [ThresholdProfile::ones(), ThresholdProfile::uniform(&ab, 2).unwrap()];
    let (mut checked, mut violations) = (0usize, 0usize);
    for theta in &profiles {
        for k in 1..=2 {
            for w1 in &all {
                for w2 in &all {
                    if !decide_equiv_words(w1, w2, 2 * k, theta) {
                        continue;
                    }
                    for a in ["a", "b"] {
                        checked += 1;
                        if !decide_equiv_words(w1, w2, k, &theta.bumped(a)) {
                            violations += 1;
                        }
                    }
                }
            }
        }
    }
    ok(
        base && violations == 0,
        format!("ab/ba at 1 and 2 rounds: {base}; refinement: {violations} violations in {checked} implications"),
    )
}

fn delay_expansion() -> Outcome {
    let ab = Alphabet::parse("ab").unwrap();
    let example = expand_word(&w("ababba"), 3).unwrap();
    let example_ok = example.letters() == ["**a", "*ab", "aba", "bab", "abb", "bba"];
    let sentences = fo2_betfac_corpus(0, 200, &ab, 3);
    let with_factors = sentences.iter().filter(|p| p.longest_factor() >= 2).count();
    let (mut checked, mut mismatches, mut errors) = (0usize, 0usize, 0usize);
    for phi in &sentences {
        let Ok((k, psi)) = delay_fo2(phi, &ab) else {
            errors += 1;
            continue;
        };
        for len in 3..=6 {
            for x in ab.words_of_len(len) {
                let x = Word::from_indices(&ab, &x);
                checked += 1;
                let lhs = eval_fo2_sentence(phi, &x).unwrap();
                let rhs = eval_fo2_sentence(&psi, &expand_word(&x, k).unwrap()).unwrap();
                if lhs != rhs {
                    mismatches += 1;
                }
            }
        }
    }
    ok(
        example_ok && mismatches == 0 && errors == 0,
        format!(
            "expand_word(ababba,3) = {example}; {} sentences ({with_factors} with factor atoms), {checked} word checks, {mismatches} mismatches, {errors} errors",
            sentences.len()
        ),
    )
}

const THRESHOLD_INSTANCES: [&str; 20] = [
    "exists x. exists y. x<y & th(a,2)(x,y) & b(y)",
    "exists x. exists y. x<y & th(a,3)(x,y) & b(y)",
    "exists x. exists y. x<y & th(b,2)(x,y) & a(x) & a(y)",
    "exists x. exists y. x<y & th(b,3)(x,y) & a(x)",
    "exists x. exists y. x<y & th(a,2)(x,y) & !b(x,y)",
    "exists x. exists y. x<y & th(a,2)(x,y) & b(x,y) & a(y)",
    "exists x. a(x) & exists y. x<y & th(b,2)(x,y) & !a(x,y)",
    "exists x. exists y. x<y & th(a,2)(x,y) & !th(a,3)(x,y) & b(x) & b(y)",
    "(exists x. exists y. x<y & b(x) & b(y)) & forall x. forall y. (x<y & b(x) & b(y)) -> th(a,2)(x,y)",
    "exists x. b(x) & exists y. y<x & th(a,3)(y,x)",
    "exists x. exists y. x<y & a(x) & a(y) & th(a,2)(x,y) & !b(x,y)",
    "exists x. exists y. x<y & th(a,2)(x,y) & th(b,2)(x,y)",
    "(forall x. a(x) -> exists y. x<y & b(y)) & exists x. exists y. x<y & th(a,2)(x,y)",
    "exists x. exists y. th(a,3)(x,y) & !a(x,y)",
    "exists x. exists y. th(a,2)(x,y) & !a(x,y)",
    "(forall x. a(x)) & exists x. exists y. x<y & th(b,2)(x,y)",
    "(forall x. forall y. !th(a,2)(x,y)) & exists x. exists y. th(a,3)(x,y)",
    "exists x. exists y. x<y & th(a,2)(x,y) & !th(a,2)(x,y)",
    "(forall x. b(x)) & exists x. exists y. x<y & th(a,2)(x,y)",
    "exists x. exists y. x<y & th(b,3)(x,y) & !b(x,y)",
];

fn reductions() -> Outcome {
    let trivial = TilingInstance {
        tiles: vec!["t".into()],
        horizontal: vec![("t".into(), "t".into())],
        vertical: vec![("t".into(), "t".into())],
        start: "t".into(),
        finish: "t".into(),
        n: 1,
    };
    let blocked = TilingInstance {
        horizontal: vec![],
        ..trivial.clone()
    };
    let search = |inst: &TilingInstance| {
        let (phi, alphabet) = encode_tiling(inst).unwrap();
        bounded_fo2_search(&phi, &alphabet, 12, usize::MAX).unwrap().outcome
    };
    let tiling_ok = matches!(search(&trivial), BoundedOutcome::Found { .. })
        && matches!(search(&blocked), BoundedOutcome::NoneWithinBound { .. });
    let ab = Alphabet::parse("ab").unwrap();
    let results: Vec<(bool, bool, bool)> = THRESHOLD_INSTANCES
        .par_iter()
        .map(|text| {
            let phi = parse_fo2(text, Some(&ab)).unwrap();
            let red = fo2_threshold_to_between(&phi, &ab).unwrap();
            let a = bounded_fo2_search(&phi, &ab, 10, usize::MAX).unwrap().outcome;
            let b = bounded_fo2_search(&red.formula, &red.alphabet, 10, usize::MAX).unwrap().outcome;
            let forward = match a.model() {
                Some(m) => {
                    let lifted = red.annotate(m).unwrap();
                    eval_fo2_sentence(&red.formula, &lifted).unwrap() && b.model().is_some()
                }
                None => b.model().is_none(),
            };
            let backward = match b.model() {
                Some(m) => eval_fo2_sentence(&phi, &red.project(m)).unwrap(),
                None => a.model().is_none(),
            };
            (forward, backward, a.model().is_some())
        })
        .collect();
    let agree = results.iter().filter(|r| r.0 && r.1).count();
    let sat = results.iter().filter(|r| r.2).count();
    ok(
        tiling_ok && agree == THRESHOLD_INSTANCES.len(),
        format!(
            "tiling trivial found / H-empty none within 12: {tiling_ok}; threshold reduction agrees on {agree}/{} instances ({sat} satisfiable within 10)",
            THRESHOLD_INSTANCES.len()
        ),
    )
}

const PUBLISHED_TRACE: [(&str, &str); 6] = [
    ("initial", "adccdcc·adc·a·a·a·addccdcccdbcdc·a·ac·abcbbd"),
    ("collect {a}", "adccdcc·adc·aaa·addccdcccdbcdc·a·ac·abcbbd"),
    ("cap {a}", "adccdcc·adc·aaaaddccdcccdbcdc·aac·abcbbd"),
    ("cap {a,c}", "adccdcc·adc·aaaaddccdcccdbcdc·aacabcbbd"),
    ("collect {a,c,d}", "adccdccadc·aaaaddccdcccdbcdc·aacabcbbd"),
    ("cap {a,c,d}", "adccdccaddadaaaaddccdcccdbcdc·acabcbbd"),
];

fn factorization() -> Outcome {
    let abcd = Alphabet::parse("abcd").unwrap();
    let order: Vec<Subalphabet> = ["a", "ab", "ac", "abc", "ad", "abd", "acd"]
        .iter()
        .map(|s| s.chars().map(String::from).collect())
        .collect();
    let word = w("adccdccadcaaaaddccdcccdbcdcaacabcbbd");
    let state = run_sequence_with_order(&word, "a", &abcd, &order).unwrap();
    let mut mismatched = Vec::new();
    let mut only_final = true;
    for (step, printed) in PUBLISHED_TRACE {
        let ours = state
            .trace
            .iter()
            .find(|t| t.step == step)
            .map(|t| t.factors.join("·"))
            .unwrap_or_default();
        if ours != printed {
            only_final &= step == "cap {a,c,d}";
            mismatched.push(format!("{step}: ours {ours}, printed {printed}"));
        }
    }
    let printed_final: String = PUBLISHED_TRACE[5].1.replace('·', "");
    let final_is_typo = printed_final.len() != word.len();
    let mut rng = rng_for(10);
    let mut violations = 0;
    for i in 0..500 {
        let n = 1 + i % 4;
        let alphabet = Alphabet::new(["a", "b", "c", "d"].into_iter().take(n)).unwrap();
        let x = random_a_word(&mut rng, &alphabet, "a", 40);
        match run_sequence(&x, "a", &alphabet) {
            Ok(s) => {
                let full = s.contents().iter().all(|c| c.len() == n);
                let concat = s.trace.iter().all(|t| t.factors.concat() == x.to_string());
                if !full || !concat {
                    violations += 1;
                }
            }
            Err(_) => violations += 1,
        }
    }
    Outcome {
        pass: mismatched.is_empty() && violations == 0,
        detail: format!(
            "{} of {} printed steps reproduced{}; 500 random a-words: {violations} invariant violations",
            PUBLISHED_TRACE.len() - mismatched.len(),
            PUBLISHED_TRACE.len(),
            if mismatched.is_empty() {
                String::new()
            } else {
                format!(" (mismatch {})", mismatched.join("; "))
            }
        ),
        known: (only_final && final_is_typo && violations == 0).then_some(
            "the printed final display has 37 letters while the worked word has 36, so no factorization of it can match",
        ),
    }
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("overlap sets", overlaps),
        ("pipeline soundness", pipeline_soundness),
        ("beta construction", beta_exhaustive),
        ("dag-size polynomiality", dag_polynomiality),
        ("algebra golden table", algebra_table),
        ("satisfiability", satisfiability),
        ("games", games),
        ("delay/expansion", delay_expansion),
        ("reductions", reductions),
        ("factorization", factorization),
    ];
    let mut unexpected = 0;
    let mut passed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let secs = start.elapsed().as_secs_f64();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("ACCEPTANCE {}: {verdict} {name} ({secs:.1}s): {}", i + 1, o.detail);
        if o.pass {
            passed += 1;
        } else if let Some(why) = o.known {
            println!("  documented discrepancy: {why}");
        } else {
            unexpected += 1;
        }
    }
    println!("acceptance: {passed}/{} PASS, {unexpected} unexpected failures", criteria.len());
    if unexpected > 0 {
        std::process::exit(1);
    }
}
