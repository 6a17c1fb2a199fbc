//! Regular languages, their syntactic monoids and variety membership.

mod dfa;
mod semigroup;

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

pub use dfa::{regex_to_min_dfa, Dfa, DfaJson};
pub use semigroup::{syntactic_monoid, syntactic_semigroup, FiniteMonoid, FiniteSemigroup, DEFAULT_ELEMENT_BUDGET};

use crate::error::{Error, Result};
use crate::translate::{delay::PAD, expanded_alphabet};

/// `x·x^ω = x^ω` for every x.
pub fn in_aperiodic(s: &FiniteSemigroup) -> bool {
    (0..s.size()).all(|x| {
        let w = s.omega_power(x);
        s.mul(x, w) == w
    })
}

fn da_by_me(m: &FiniteMonoid) -> Result<bool> {
    for e in m.idempotents() {
        let me = m.me_submonoid(e)?;
        if me.iter().any(|&x| m.mul(m.mul(e, x), e) != e) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn da_by_identity(m: &FiniteSemigroup) -> bool {
    let n = m.size();
    (0..n).all(|x| {
        (0..n).all(|y| {
            let p = m.omega_power(m.mul(x, y));
            m.mul(m.mul(p, x), p) == p
        })
    })
}

/// DA membership; both characterizations are computed and must agree.
pub fn in_da(m: &FiniteMonoid) -> Result<bool> {
    let a = da_by_me(m)?;
    let b = da_by_identity(m);
    if a != b {
        return Err(Error::Internal(format!(
            "DA characterizations disagree on a monoid of size {}: eM_e e={a}, identity={b}",
            m.size()
        )));
    }
    Ok(a)
}

/// Every e M_e e lies in DA.
pub fn in_meda(m: &FiniteMonoid) -> Result<bool> {
    for e in m.idempotents() {
        if !in_da(&m.e_me_e(e)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every local monoid eSe lies in DA.
pub fn in_locally_da(s: &FiniteSemigroup) -> Result<bool> {
    for e in s.idempotents() {
        if !in_da(&s.local_monoid(e)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every local monoid eSe lies in MeDA.
pub fn in_locally_meda(s: &FiniteSemigroup) -> Result<bool> {
    for e in s.idempotents() {
        if !in_meda(&s.local_monoid(e)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of the window-length-k membership test for MeDA*D.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DelayVerdict {
    pub k: usize,
    pub verdict: String,
    pub confirmed: bool,
    pub window_states: usize,
    pub window_monoid_size: usize,
    pub image_size: usize,
    pub image_in_meda: bool,
    pub implication_holds: bool,
    /// Two words agreeing on prefix, suffix and window image but not on their image.
    pub counterexample: Option<(String, String)>,
}

/// Window symbols `*^j u` with their names in the expanded alphabet.
fn windows(d: &Dfa, k: usize) -> Vec<Vec<Option<usize>>> {
    let mut out = Vec::new();
    for pads in (0..k).rev() {
        for u in d.alphabet().words_of_len(k - pads) {
            let mut w = vec![None; pads];
            w.extend(u.into_iter().map(Some));
            out.push(w);
        }
    }
    out
}

fn window_name(d: &Dfa, w: &[Option<usize>]) -> String {
    let letters = d.alphabet().letters();
    let single = letters.iter().all(|l| l.chars().count() == 1);
    let parts: Vec<&str> = w.iter().map(|s| s.map_or(PAD, |a| letters[a].as_str())).collect();
    if single {
        parts.concat()
    } else {
        parts.join("_")
    }
}

/// Automaton over windows accepting the window sequences of words of L.
fn window_automaton(d: &Dfa, k: usize) -> Result<(Dfa, Vec<(Vec<usize>, usize)>)> {
    let alphabet = expanded_alphabet(d.alphabet(), k)?;
    let mut letter_of = Vec::new();
    for w in windows(d, k) {
        let name = window_name(d, &w);
        let idx = alphabet
            .index(&name)
            .ok_or_else(|| Error::Internal(format!("window `{name}` missing from the expanded alphabet")))?;
        letter_of.push((idx, w));
    }
    letter_of.sort_by_key(|(i, _)| *i);
    let full = letter_of
        .iter()
        .filter(|(_, w)| w[0].is_some())
        .map(|(i, w)| (w.iter().flatten().copied().collect(), *i))
        .collect();
    type Key = (usize, Vec<Option<usize>>);
    let start: Key = (d.initial(), vec![None; k - 1]);
    let mut ids: HashMap<Key, usize> = HashMap::from([(start.clone(), 0)]);
    let mut keys = vec![start];
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    let sink = usize::MAX;
    while i < keys.len() {
        let (q, ctx) = keys[i].clone();
        let mut row = Vec::with_capacity(letter_of.len());
        for (_, w) in &letter_of {
            let target = match w[k - 1] {
                Some(a) if w[..k - 1] == ctx[..] => {
                    let key = (d.step(q, a), w[1..].to_vec());
                    let fresh = keys.len();
                    *ids.entry(key.clone()).or_insert_with(|| {
                        keys.push(key);
                        fresh
                    })
                }
                _ => sink,
            };
            row.push(target);
        }
        delta.push(row);
        i += 1;
    }
    let sink_id = keys.len();
    for row in &mut delta {
        for t in row.iter_mut() {
            if *t == sink {
                *t = sink_id;
            }
        }
    }
    delta.push(vec![sink_id; letter_of.len()]);
    let mut finals: Vec<bool> = keys.iter().map(|(q, _)| d.is_final(*q)).collect();
    finals.push(false);
    Ok((Dfa::new(alphabet, delta, 0, finals)?.minimize(), full))
}

const TUPLE_BUDGET: usize = 5_000_000;

/// Semidecision for membership of the language of `d` in MeDA*D at window length k.
///
/// h'' is the syntactic morphism of the window language restricted to full windows.
/// Confirmation requires its image to lie in MeDA and every pair of words of length
/// at least k−1 with equal (k−1)-prefix, (k−1)-suffix and h''-image of their window
/// sequences to have equal syntactic image.
pub fn delay_check(d: &Dfa, k: usize, budget: usize) -> Result<DelayVerdict> {
    if k < 2 {
        return Err(Error::Precondition(format!("window length {k} must be at least 2")));
    }
    let d = d.minimize();
    let (wd, full) = window_automaton(&d, k)?;
    let wm = syntactic_monoid(&wd, budget)?;
    let gens: Vec<usize> = full.iter().map(|(_, b)| wm.generator(*b)).collect();
    let image = wm.generate(&gens, Some(wm.unit()));
    let image_monoid = wm.restrict(&image, wm.unit())?;
    let image_in_meda = in_meda(&image_monoid)?;

    let h = syntactic_monoid(&d, budget)?;
    let n = d.alphabet().len();
    let full_index: HashMap<Vec<usize>, usize> = full.into_iter().map(|(u, b)| (u, wm.generator(b))).collect();
    type Tuple = (Vec<usize>, Vec<usize>, usize, usize);
    let mut seen: HashMap<Tuple, Vec<usize>> = HashMap::new();
    let mut by_key: HashMap<(Vec<usize>, Vec<usize>, usize), (usize, Vec<usize>)> = HashMap::new();
    let mut queue: VecDeque<Tuple> = VecDeque::new();
    for u in d.alphabet().words_of_len(k - 1) {
        let t = (u.clone(), u.clone(), wm.unit(), h.eval(&u).expect("monoid"));
        if seen.insert(t.clone(), u).is_none() {
            queue.push_back(t);
        }
    }
    let mut counterexample = None;
    while let Some(t) = queue.pop_front() {
        let word = seen[&t].clone();
        let (pref, suf, m, s) = t;
        match by_key.get(&(pref.clone(), suf.clone(), m)) {
            Some((s0, w0)) if *s0 != s => {
                let show = |w: &[usize]| crate::syntax::Word::from_indices(d.alphabet(), w).to_string();
                counterexample = Some((show(w0), show(&word)));
                break;
            }
            Some(_) => {}
            None => {
                by_key.insert((pref.clone(), suf.clone(), m), (s, word.clone()));
            }
        }
        for a in 0..n {
            let mut window = suf.clone();
            window.push(a);
            let m2 = wm.mul(m, full_index[&window]);
            let t2 = (pref.clone(), window[1..].to_vec(), m2, h.mul(s, h.generator(a)));
            if !seen.contains_key(&t2) {
                if seen.len() >= TUPLE_BUDGET {
                    return Err(Error::Budget(format!("delay check exceeds {TUPLE_BUDGET} contexts")));
                }
                let mut w2 = word.clone();
                w2.push(a);
                seen.insert(t2.clone(), w2);
                queue.push_back(t2);
            }
        }
    }
    let implication_holds = counterexample.is_none();
    let confirmed = image_in_meda && implication_holds;
    Ok(DelayVerdict {
        k,
        verdict: format!("{}-at-{k}", if confirmed { "confirmed" } else { "not-confirmed" }),
        confirmed,
        window_states: wd.states(),
        window_monoid_size: wm.size(),
        image_size: image.len(),
        image_in_meda,
        implication_holds,
        counterexample,
    })
}

/// A membership answer and whether it is a decision or a heuristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Flag {
    pub value: bool,
    pub exact: bool,
}

impl Flag {
    fn exact(value: bool) -> Self {
        Flag { value, exact: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    ProvedIn,
    ProvedOut,
    Unknown,
}

#[derive(Debug, Clone, Copy)]
pub struct ClassifyOptions {
    pub max_elements: usize,
    /// Largest window length tried by the delay check.
    pub max_delay_k: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            max_elements: DEFAULT_ELEMENT_BUDGET,
            max_delay_k: 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassReport {
    pub dfa_states: usize,
    pub monoid_size: usize,
    pub semigroup_size: usize,
    pub aperiodic: Flag,
    #[serde(rename = "in_DA")]
    pub in_da: Flag,
    #[serde(rename = "locally_DA")]
    pub locally_da: Flag,
    #[serde(rename = "in_MeDA")]
    pub in_meda: Flag,
    #[serde(rename = "locally_MeDA")]
    pub locally_meda: Flag,
    pub delay_confirmed_at: Option<usize>,
    pub delay_attempts: Vec<DelayVerdict>,
    #[serde(rename = "MeDA_star_D")]
    pub meda_star_d: Membership,
    pub warnings: Vec<String>,
}

/// Decides Ap, DA, locally DA and MeDA; bounds MeDA*D from both sides.
pub fn classify(d: &Dfa, options: &ClassifyOptions) -> Result<ClassReport> {
    let d = d.minimize();
    let m = syntactic_monoid(&d, options.max_elements)?;
    let s = syntactic_semigroup(&d, options.max_elements)?;
    let aperiodic = in_aperiodic(&m);
    let in_meda_v = in_meda(&m)?;
    let locally_meda = in_locally_meda(&s)?;
    let mut warnings = vec!["locally_MeDA is a heuristic for MeDA*D".to_string()];
    let mut attempts = Vec::new();
    let mut confirmed_at = None;
    for k in 2..=options.max_delay_k {
        match delay_check(&d, k, options.max_elements) {
            Ok(v) => {
                let ok = v.confirmed;
                attempts.push(v);
                if ok {
                    confirmed_at = Some(k);
                    break;
                }
            }
            Err(Error::Budget(msg)) => {
                warnings.push(format!("delay check at k={k} stopped: {msg}"));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let meda_star_d = if in_meda_v || confirmed_at.is_some() {
        Membership::ProvedIn
    } else if !aperiodic || !locally_meda {
        Membership::ProvedOut
    } else {
        Membership::Unknown
    };
    if confirmed_at.is_some() && !locally_meda {
        warnings.push("delay check confirmed a language whose local monoids are not all in MeDA".into());
    }
    Ok(ClassReport {
        dfa_states: d.states(),
        monoid_size: m.size(),
        semigroup_size: s.size(),
        aperiodic: Flag::exact(aperiodic),
        in_da: Flag::exact(in_da(&m)?),
        locally_da: Flag::exact(in_locally_da(&s)?),
        in_meda: Flag::exact(in_meda_v),
        locally_meda: Flag {
            value: locally_meda,
            exact: false,
        },
        delay_confirmed_at: confirmed_at,
        delay_attempts: attempts,
        meda_star_d,
        warnings,
    })
}

#[cfg(test)]
mod tests;
