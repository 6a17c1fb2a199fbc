//! Python bindings. Library errors surface as `ValueError`.

use std::collections::BTreeMap;

use betweentl_core::algebra::{classify as classify_dfa, regex_to_min_dfa, ClassifyOptions, Membership};
use betweentl_core::factorize::run_sequence;
use betweentl_core::games::{decide_equiv_words, ThresholdProfile};
use betweentl_core::sat::{shortest_model as sat_shortest_model, SatOptions};
use betweentl_core::semantics::{enumerate_models, eval_tl_sentence, Sentence, DEFAULT_WORD_BUDGET};
use betweentl_core::syntax::{parse_fo2, parse_tl, Alphabet, Tl, Word};
use betweentl_core::translate::{expand_word as expand, pipeline_to_ltl, PipelineOptions};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: betweentl_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn alphabet(text: &str) -> PyResult<Alphabet> {
    Alphabet::parse(text).map_err(err)
}

fn formula(text: &str, a: &Alphabet) -> PyResult<Tl> {
    parse_tl(text, a).map_err(err)
}

fn word(text: &str, a: &Alphabet) -> PyResult<Word> {
    Word::parse(text, a).map_err(err)
}

/// Normal form of a temporal formula.
#[pyfunction]
fn parse(formula_text: &str, alphabet_text: &str) -> PyResult<String> {
    Ok(formula(formula_text, &alphabet(alphabet_text)?)?.to_string())
}

/// Normal form of an FO² formula.
#[pyfunction]
fn parse_fo2_formula(formula_text: &str, alphabet_text: &str) -> PyResult<String> {
    let a = alphabet(alphabet_text)?;
    Ok(parse_fo2(formula_text, Some(&a)).map_err(err)?.to_string())
}

/// Whether the word satisfies the temporal formula at its first position.
#[pyfunction]
fn holds(formula_text: &str, alphabet_text: &str, word_text: &str) -> PyResult<bool> {
    let a = alphabet(alphabet_text)?;
    Ok(eval_tl_sentence(&formula(formula_text, &a)?, &word(word_text, &a)?))
}

/// All models of length at most `max_len`, shortest first.
#[pyfunction]
fn models(formula_text: &str, alphabet_text: &str, max_len: usize) -> PyResult<Vec<String>> {
    let a = alphabet(alphabet_text)?;
    let phi = Sentence::Tl(formula(formula_text, &a)?);
    let ws = enumerate_models(&phi, &a, max_len, DEFAULT_WORD_BUDGET).map_err(err)?;
    Ok(ws.iter().map(Word::to_string).collect())
}

/// The LTL formula produced by the translation pipeline.
#[pyfunction]
fn translate(formula_text: &str, alphabet_text: &str) -> PyResult<String> {
    let a = alphabet(alphabet_text)?;
    let t = pipeline_to_ltl(&formula(formula_text, &a)?, PipelineOptions::default()).map_err(err)?;
    Ok(t.output.to_string())
}

/// The shortest, then lexicographically least, model; `None` when unsatisfiable.
#[pyfunction]
fn shortest_model(formula_text: &str, alphabet_text: &str) -> PyResult<Option<String>> {
    let a = alphabet(alphabet_text)?;
    let m = sat_shortest_model(&formula(formula_text, &a)?, &a, SatOptions::default()).map_err(err)?;
    Ok(m.map(|w| w.to_string()))
}

/// Whether Player 2 wins the k-round game with the given thresholds (default 1).
#[pyfunction]
#[pyo3(signature = (left, right, rounds, alphabet_text, theta = None))]
fn equivalent(
    left: &str,
    right: &str,
    rounds: usize,
    alphabet_text: &str,
    theta: Option<BTreeMap<String, u64>>,
) -> PyResult<bool> {
    let a = alphabet(alphabet_text)?;
    let profile = match theta {
        Some(t) => ThresholdProfile::new(t).map_err(err)?,
        None => ThresholdProfile::ones(),
    };
    Ok(decide_equiv_words(&word(left, &a)?, &word(right, &a)?, rounds, &profile))
}

/// Algebraic classification of the language of a regular expression.
#[pyfunction]
fn classify<'py>(py: Python<'py>, regex: &str, alphabet_text: &str) -> PyResult<Bound<'py, PyDict>> {
    let a = alphabet(alphabet_text)?;
    let dfa = regex_to_min_dfa(regex, &a).map_err(err)?;
    let r = classify_dfa(&dfa, &ClassifyOptions::default()).map_err(err)?;
    let d = PyDict::new_bound(py);
    d.set_item("dfa_states", r.dfa_states)?;
    d.set_item("monoid_size", r.monoid_size)?;
    d.set_item("aperiodic", r.aperiodic.value)?;
    d.set_item("in_DA", r.in_da.value)?;
    d.set_item("locally_DA", r.locally_da.value)?;
    d.set_item("in_MeDA", r.in_meda.value)?;
    d.set_item("locally_MeDA", r.locally_meda.value)?;
    d.set_item("delay_confirmed_at", r.delay_confirmed_at)?;
    let verdict = match r.meda_star_d {
        Membership::ProvedIn => "proved-in",
        Membership::ProvedOut => "proved-out",
        Membership::Unknown => "unknown",
    };
    d.set_item("MeDA_star_D", verdict)?;
    Ok(d)
}

/// Final factors of the factorization sequence of an a-word.
#[pyfunction]
fn factorize(word_text: &str, alphabet_text: &str, letter: &str) -> PyResult<Vec<String>> {
    let a = alphabet(alphabet_text)?;
    Ok(run_sequence(&word(word_text, &a)?, letter, &a).map_err(err)?.factor_strings())
}

/// The window expansion of a word.
#[pyfunction]
fn expand_word(word_text: &str, alphabet_text: &str, k: usize) -> PyResult<Vec<String>> {
    let a = alphabet(alphabet_text)?;
    Ok(expand(&word(word_text, &a)?, k).map_err(err)?.letters().to_vec())
}

#[pymodule]
fn betweentl(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(parse_fo2_formula, m)?)?;
    m.add_function(wrap_pyfunction!(holds, m)?)?;
    m.add_function(wrap_pyfunction!(models, m)?)?;
    m.add_function(wrap_pyfunction!(translate, m)?)?;
    m.add_function(wrap_pyfunction!(shortest_model, m)?)?;
    m.add_function(wrap_pyfunction!(equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(factorize, m)?)?;
    m.add_function(wrap_pyfunction!(expand_word, m)?)?;
    Ok(())
}
