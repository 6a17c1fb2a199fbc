use super::*;
use crate::syntax::Alphabet;

fn ab() -> Alphabet {
    Alphabet::parse("ab").unwrap()
}

fn monoid(pattern: &str, alphabet: &Alphabet) -> FiniteMonoid {
    syntactic_monoid(&regex_to_min_dfa(pattern, alphabet).unwrap(), DEFAULT_ELEMENT_BUDGET).unwrap()
}

fn semigroup(pattern: &str, alphabet: &Alphabet) -> FiniteSemigroup {
    syntactic_semigroup(&regex_to_min_dfa(pattern, alphabet).unwrap(), DEFAULT_ELEMENT_BUDGET).unwrap()
}

const BB2: &str = "(a(ab)*b)*";
const FIRST_LAST: &str = "a+b+a(a+b)*a+b(a+b)*b";
const BAB: &str = "(a+b)*bab⁺ab(a+b)*";

#[test]
fn ab_star_monoid_relations() {
    let m = monoid("(ab)*", &ab());
    assert_eq!(m.size(), 6);
    let e = |w: &str| m.eval(&crate::syntax::Word::from_chars(w).indices(&ab()).unwrap()).unwrap();
    assert_eq!(e("aba"), e("a"));
    assert_eq!(e("bab"), e("b"));
    assert_eq!(e("aa"), e("bb"));
    let zero = e("aa");
    assert!((0..m.size()).all(|x| m.mul(x, zero) == zero && m.mul(zero, x) == zero));
    let mut idem: Vec<usize> = m.idempotents();
    idem.sort_unstable();
    let mut expected = vec![m.unit(), e("ab"), e("ba"), zero];
    expected.sort_unstable();
    assert_eq!(idem, expected);
    assert_eq!(m.omega_power(e("a")), zero);
    assert_eq!(m.me_submonoid(e("ab")).unwrap().len(), 6);
    assert_eq!(m.me_submonoid(e("ba")).unwrap().len(), 6);
    assert!(m.me_submonoid(e("a")).is_err());
}

#[test]
fn golden_classification() {
    let m = monoid("(ab)*", &ab());
    assert!(in_aperiodic(&m));
    assert!(!in_da(&m).unwrap());
    assert!(in_meda(&m).unwrap());
    assert!(in_locally_da(&semigroup("(ab)*", &ab())).unwrap());

    let fl = monoid(FIRST_LAST, &ab());
    assert_eq!(fl.size(), 5);
    assert!(in_da(&fl).unwrap());

    assert!(!in_locally_da(&semigroup(BAB, &ab())).unwrap());
    assert!(in_meda(&monoid(BAB, &ab())).unwrap());
    assert!(in_locally_meda(&semigroup(BAB, &ab())).unwrap());

    let bb2 = monoid(BB2, &ab());
    assert!(in_aperiodic(&bb2));
    assert!(!in_meda(&bb2).unwrap());
}

#[test]
fn trivial_and_periodic_monoids() {
    let a = Alphabet::parse("a").unwrap();
    let t = monoid("a*", &a);
    assert_eq!(t.size(), 1);
    assert!(in_aperiodic(&t) && in_da(&t).unwrap() && in_meda(&t).unwrap());
    assert!(in_locally_da(&semigroup("a*", &a)).unwrap());
    let z2 = monoid("(aa)*", &a);
    assert!(!in_aperiodic(&z2));
}

#[test]
fn tables_are_well_formed() {
    for p in ["(ab)*", FIRST_LAST, BAB, BB2, "(aa)*", "a", "ab+ba", "(a+b)*a(a+b)"] {
        let d = regex_to_min_dfa(p, &ab()).unwrap();
        let m = syntactic_monoid(&d, DEFAULT_ELEMENT_BUDGET).unwrap();
        let s = syntactic_semigroup(&d, DEFAULT_ELEMENT_BUDGET).unwrap();
        for t in [m.as_semigroup(), &s] {
            assert!(t.is_associative(), "{p}");
            assert!(t.identity_laws_hold(), "{p}");
            assert!(t.is_generated(), "{p}");
        }
        assert!(s.size() == m.size() || s.size() + 1 == m.size());
        for n in 0..=6 {
            for w in ab().words_of_len(n) {
                assert_eq!(d.accepts(&w), m.is_accepting(m.eval(&w).unwrap()), "{p}");
                if n > 0 {
                    assert_eq!(d.accepts(&w), s.is_accepting(s.eval(&w).unwrap()), "{p}");
                }
            }
        }
        for x in 0..m.size() {
            let w = m.omega_power(x);
            assert!(m.is_idempotent(w));
            let mut p = x;
            let mut found = p == w;
            for _ in 0..m.size() {
                p = m.mul(p, x);
                found |= p == w;
            }
            assert!(found);
            assert!(m.j_leq(x, x));
        }
        let ideals: Vec<Vec<bool>> = (0..m.size()).map(|y| m.ideal(y)).collect();
        for x in 0..m.size() {
            for y in 0..m.size() {
                for z in 0..m.size() {
                    if ideals[y][x] && ideals[z][y] {
                        assert!(ideals[z][x]);
                    }
                }
            }
        }
    }
}

#[test]
fn meda_is_closed_under_products_and_submonoids() {
    let ms: Vec<FiniteMonoid> = ["(ab)*", FIRST_LAST, BAB, BB2].iter().map(|p| monoid(p, &ab())).collect();
    for x in &ms {
        for y in &ms {
            let p = x.product_with(y);
            assert!(p.is_generated());
            let expected = in_meda(x).unwrap() && in_meda(y).unwrap();
            assert_eq!(in_meda(&p).unwrap(), expected);
        }
        if in_meda(x).unwrap() {
            for e in x.idempotents() {
                let sub = x.restrict(&x.me_submonoid(e).unwrap(), x.unit()).unwrap();
                assert!(in_meda(&sub).unwrap());
            }
        }
    }
}

#[test]
fn delay_check_confirms_known_members() {
    let d = regex_to_min_dfa("(ab)*", &ab()).unwrap();
    let v = delay_check(&d, 2, DEFAULT_ELEMENT_BUDGET).unwrap();
    assert!(v.confirmed, "{v:?}");
    assert_eq!(v.verdict, "confirmed-at-2");
    let d = regex_to_min_dfa("ab", &ab()).unwrap();
    assert!(delay_check(&d, 3, DEFAULT_ELEMENT_BUDGET).unwrap().confirmed);
    assert!(delay_check(&d, 1, DEFAULT_ELEMENT_BUDGET).is_err());
}

#[test]
fn bb2_outcomes() {
    let d = regex_to_min_dfa(BB2, &ab()).unwrap();
    let r = classify(&d, &ClassifyOptions::default()).unwrap();
    assert!(r.aperiodic.value && !r.in_meda.value && !r.locally_da.value);
    assert!(r.locally_meda.value);
    assert_eq!(r.delay_confirmed_at, Some(2));
    assert_eq!(r.meda_star_d, Membership::ProvedIn);
}

#[test]
fn delay_check_rejects_periodic_languages() {
    let a = Alphabet::parse("a").unwrap();
    let d = regex_to_min_dfa("(aa)*", &a).unwrap();
    for k in 2..=4 {
        let v = delay_check(&d, k, DEFAULT_ELEMENT_BUDGET).unwrap();
        assert!(!v.confirmed && !v.image_in_meda);
    }
}

#[test]
fn classify_reports() {
    let opts = ClassifyOptions::default();
    let r = classify(&regex_to_min_dfa("(ab)*", &ab()).unwrap(), &opts).unwrap();
    assert!(!r.in_da.value && r.in_meda.value && r.aperiodic.value);
    assert_eq!(r.meda_star_d, Membership::ProvedIn);
    assert!(!r.locally_meda.exact);
    let r = classify(&regex_to_min_dfa("(aa)*", &Alphabet::parse("a").unwrap()).unwrap(), &opts).unwrap();
    assert_eq!(r.meda_star_d, Membership::ProvedOut);
}
