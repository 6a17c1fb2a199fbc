use betweentl::algebra::{in_aperiodic, in_da, in_locally_da, syntactic_monoid, syntactic_semigroup, Dfa};
use betweentl::corpus::{
    all_words, check_translation_case, fo2_betfac_corpus, random_a_word, random_guarded_tl, rng_for, CorpusCase,
    TlShape,
};
use betweentl::factorize::run_sequence;
use betweentl::games::{decide_equiv_words, ThresholdProfile};
use betweentl::sat::{shortest_model, SatOptions};
use betweentl::semantics::{enumerate_models, eval_fo2_sentence, Sentence, TlProgram};
use betweentl::syntax::{parse_fo2, parse_tl, Alphabet, Word};
use betweentl::translate::{delay_fo2, expand_fo2, expand_word, expanded_alphabet, PipelineOptions};
use proptest::prelude::*;

fn ab() -> Alphabet {
    Alphabet::parse("ab").unwrap()
}

fn word_over(alphabet: usize, max: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..alphabet, 0..=max)
}

fn random_dfa() -> impl Strategy<Value = Dfa> {
    (1usize..=5).prop_flat_map(|n| {
        (
            prop::collection::vec(prop::collection::vec(0..n, 2), n),
            0..n,
            prop::collection::vec(any::<bool>(), n),
        )
            .prop_map(|(delta, init, finals)| Dfa::new(ab(), delta, init, finals).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tl_print_parse_round_trip(seed in any::<u64>()) {
        let alphabet = Alphabet::parse("abc").unwrap();
        let phi = random_guarded_tl(&mut rng_for(seed), &alphabet, &TlShape::default());
        let again = parse_tl(&phi.to_string(), &alphabet).unwrap();
        prop_assert_eq!(again.to_string(), phi.to_string());
        let (p, q) = (TlProgram::compile(&phi, &alphabet), TlProgram::compile(&again, &alphabet));
        for w in all_words(&alphabet, 4) {
            prop_assert_eq!(p.eval_positions(&w), q.eval_positions(&w));
        }
    }

    #[test]
    fn fo2_print_parse_round_trip(seed in 0u64..1000) {
        for phi in fo2_betfac_corpus(seed, 3, &ab(), 3) {
            let again = parse_fo2(&phi.to_string(), Some(&ab())).unwrap();
            prop_assert_eq!(again.to_string(), phi.to_string());
        }
    }

    #[test]
    fn pipeline_is_sound(seed in any::<u64>()) {
        let alphabet = Alphabet::parse("ab").unwrap();
        let formula = random_guarded_tl(&mut rng_for(seed), &alphabet, &TlShape::default());
        let case = CorpusCase { id: 0, alphabet, formula };
        let report = check_translation_case(&case, 6, PipelineOptions::default());
        prop_assert!(report.passed(), "{:?}", report);
    }

    #[test]
    fn syntactic_monoid_recognizes_the_language(d in random_dfa()) {
        let m = syntactic_monoid(&d, 5000).unwrap();
        let s = syntactic_semigroup(&d, 5000).unwrap();
        prop_assert!(m.is_associative() && m.identity_laws_hold() && m.is_generated());
        prop_assert!(s.is_associative() && s.is_generated());
        let min = d.minimize();
        prop_assert!(min.states() <= d.states());
        for w in all_words(&ab(), 6) {
            prop_assert_eq!(d.accepts(&w), min.accepts(&w));
            prop_assert_eq!(d.accepts(&w), m.is_accepting(m.eval(&w).unwrap()));
        }
        let da = in_da(&m).unwrap();
        prop_assert!(!da || in_aperiodic(&m));
        if da {
            prop_assert!(in_locally_da(&s).unwrap());
        }
    }

    #[test]
    fn factorization_invariants(seed in any::<u64>(), n in 1usize..=4) {
        let alphabet = Alphabet::new(["a", "b", "c", "d"].into_iter().take(n)).unwrap();
        let mut rng = rng_for(seed);
        let w = random_a_word(&mut rng, &alphabet, "a", 30);
        let s = run_sequence(&w, "a", &alphabet).unwrap();
        prop_assert!(s.contents().iter().all(|c| c.len() == n));
        prop_assert!(s.factors().iter().all(|f| f.at(1) == Some("a")));
        for pair in s.trace.windows(2) {
            prop_assert!(pair[1].factors.len() <= pair[0].factors.len());
            prop_assert_eq!(pair[1].factors.concat(), w.to_string());
        }
    }

    #[test]
    fn games_are_monotone_and_symmetric(u in word_over(2, 5), v in word_over(2, 5), k in 1usize..=3) {
        let (u, v) = (Word::from_indices(&ab(), &u), Word::from_indices(&ab(), &v));
        let theta = ThresholdProfile::ones();
        let here = decide_equiv_words(&u, &v, k, &theta);
        prop_assert_eq!(here, decide_equiv_words(&v, &u, k, &theta));
        prop_assert!(decide_equiv_words(&u, &u, k, &theta));
        if decide_equiv_words(&u, &v, k + 1, &theta) {
            prop_assert!(here);
        }
        if decide_equiv_words(&u, &v, k, &theta.bumped("a")) {
            prop_assert!(here);
        }
    }

    #[test]
    fn expansion_preserves_length_and_letters(x in word_over(2, 10), k in 2usize..=4) {
        let w = Word::from_indices(&ab(), &x);
        let e = expand_word(&w, k).unwrap();
        prop_assert_eq!(e.len(), w.len());
        let sigma = expanded_alphabet(&ab(), k).unwrap();
        prop_assert!(e.check(&sigma).is_ok());
        for (i, sym) in e.letters().iter().enumerate() {
            prop_assert!(sym.ends_with(w.at(i + 1).unwrap()));
        }
    }

    #[test]
    fn shortest_model_is_shortest(seed in 0u64..5000) {
        let alphabet = ab();
        let phi = random_guarded_tl(&mut rng_for(seed), &alphabet, &TlShape::default());
        let m = shortest_model(&phi, &alphabet, SatOptions::default()).unwrap();
        let models = enumerate_models(&Sentence::Tl(phi.clone()), &alphabet, 6, 1 << 20).unwrap();
        match (m, models.iter().map(Word::len).min()) {
            (Some(w), Some(best)) => {
                prop_assert_eq!(w.len(), best);
                prop_assert!(models.contains(&w));
            }
            (Some(w), None) => prop_assert!(w.len() > 6),
            (None, found) => prop_assert_eq!(found, None),
        }
    }
}

#[test]
fn expand_fo2_inverts_delay() {
    for phi in fo2_betfac_corpus(7, 10, &ab(), 3) {
        let (k, psi) = delay_fo2(&phi, &ab()).unwrap();
        let back = expand_fo2(&psi, k, &ab()).unwrap();
        for len in 0..=5 {
            for x in ab().words_of_len(len) {
                let x = Word::from_indices(&ab(), &x);
                let e = expand_word(&x, k).unwrap();
                let expected = eval_fo2_sentence(&psi, &e).unwrap();
                assert_eq!(eval_fo2_sentence(&back, &x).unwrap(), expected, "{psi} on {x}");
                assert_eq!(eval_fo2_sentence(&phi, &x).unwrap(), expected, "{phi} on {x}");
            }
        }
    }
}
