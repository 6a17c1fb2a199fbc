//! Command-line front end: every subcommand prints one JSON run report.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error, 3 budget exceeded
//! (the report then carries whatever partial output was computed).

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use betweentl::algebra::{classify, regex_to_min_dfa, ClassifyOptions, Dfa, DfaJson};
use betweentl::corpus::{fo2_betfac_corpus, guarded_tl_corpus, random_a_word, rng_for, run_translation_suite, TlShape};
use betweentl::factorize::{run_sequence, run_sequence_with_order, Subalphabet};
use betweentl::games::{decide_equiv, decide_equiv_words, winning_strategy, winning_strategy_words, ThresholdProfile};
use betweentl::sat::{bounded_fo2_search, model_report, sat_report, SatOptions, DEFAULT_STATE_BUDGET};
use betweentl::semantics::{
    enumerate_models, eval_fo2, eval_tl, Assignment, Sentence, TlProgram, DEFAULT_WORD_BUDGET,
};
use betweentl::syntax::{parse_fo2, parse_tl, Alphabet, Fo2, MarkedWord, Tl, Word};
use betweentl::translate::{delay_fo2, encode_tiling, expand_word, pipeline_to_ltl, PipelineOptions, TilingInstance, DEFAULT_CAP};
use betweentl::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

const DEFAULT_ELEMENTS: usize = betweentl::algebra::DEFAULT_ELEMENT_BUDGET;

#[derive(Parser, Debug)]
#[command(name = "betweentl", version, about = "Between and threshold temporal logics over finite words")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy, Serialize)]
struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Omit wall-clock fields so that output is byte-identical across runs.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Indented output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Words examined by enumeration and bounded search.
    #[arg(long, global = true, default_value_t = DEFAULT_WORD_BUDGET)]
    max_words: usize,
    /// Automaton states explored by the satisfiability procedure.
    #[arg(long, global = true, default_value_t = DEFAULT_STATE_BUDGET)]
    max_states: usize,
    /// Elements of a syntactic monoid or semigroup.
    #[arg(long, global = true, default_value_t = DEFAULT_ELEMENTS)]
    max_elements: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a formula and print its normal form and sizes.
    Parse(FormulaArgs),
    /// Evaluate a formula on a word.
    Eval(EvalArgs),
    /// Enumerate all models up to a length.
    Models(ModelsArgs),
    /// Run the translation pipeline to LTL.
    Translate(TranslateArgs),
    /// Decide satisfiability of a temporal formula.
    Sat(FormulaArgs),
    /// Find a shortest model.
    Model(ModelArgs),
    /// Solve an Ehrenfeucht–Fraïssé game with thresholds.
    Game(GameArgs),
    /// Classify a regular language by its syntactic monoid.
    Classify(ClassifyArgs),
    /// Run the factorization sequence on an a-word.
    Factorize(FactorizeArgs),
    /// Expand a word into windows, or delay an FO² sentence.
    Expand(ExpandArgs),
    /// Encode a corridor tiling instance and search for a model.
    Tiling(TilingArgs),
    /// Generate seeded corpora or run the translation suite.
    Corpus(CorpusArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Logic {
    Tl,
    Fo2,
}

/// Reads `@path` arguments from disk.
fn text_arg(s: &str) -> Result<String, String> {
    match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map(|t| t.trim().to_string())
            .map_err(|e| format!("cannot read {path}: {e}")),
        None => Ok(s.to_string()),
    }
}

#[derive(Args, Debug, Serialize)]
struct FormulaArgs {
    /// Alphabet, as a string of one-character letters or a comma-separated list.
    #[arg(long, value_parser = text_arg)]
    alphabet: String,
    /// Formula text, or @path.
    #[arg(long, value_parser = text_arg)]
    formula: String,
    #[arg(long, value_enum, default_value = "tl")]
    logic: Logic,
}

#[derive(Args, Debug, Serialize)]
struct EvalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    f: FormulaArgs,
    /// Word, or @path.
    #[arg(long, value_parser = text_arg)]
    word: String,
    /// 1-based position for a temporal formula; omitted means the word as a whole.
    #[arg(long)]
    position: Option<usize>,
    /// 1-based value of x for an FO² formula.
    #[arg(long)]
    x: Option<usize>,
    /// 1-based value of y for an FO² formula.
    #[arg(long)]
    y: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct ModelsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    f: FormulaArgs,
    #[arg(long, default_value_t = 6)]
    max_len: usize,
}

#[derive(Args, Debug, Serialize)]
struct TranslateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    f: FormulaArgs,
    /// Largest threshold bound that is unfolded.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u64,
    /// Use the literal boundary variant of the β and LTL constructions.
    #[arg(long)]
    literal: bool,
}

#[derive(Args, Debug, Serialize)]
struct ModelArgs {
    #[command(flatten)]
    #[serde(flatten)]
    f: FormulaArgs,
    /// Length bound of the FO² search.
    #[arg(long, default_value_t = 10)]
    max_len: usize,
}

#[derive(Args, Debug, Serialize)]
struct GameArgs {
    #[arg(long, value_parser = text_arg)]
    alphabet: String,
    #[arg(long, value_parser = text_arg)]
    left: String,
    #[arg(long, value_parser = text_arg)]
    right: String,
    #[arg(long)]
    rounds: usize,
    /// Threshold profile such as `a=2,b=1`; absent letters have threshold 1.
    #[arg(long)]
    theta: Option<String>,
    /// Initial 1-based pebble position in the left word (marked game).
    #[arg(long, requires = "right_pos")]
    left_pos: Option<usize>,
    #[arg(long, requires = "left_pos")]
    right_pos: Option<usize>,
    /// Include Player 1's winning strategy when one exists.
    #[arg(long)]
    strategy: bool,
}

#[derive(Args, Debug, Serialize)]
struct ClassifyArgs {
    #[arg(long, value_parser = text_arg)]
    alphabet: String,
    /// Regular expression, or @path.
    #[arg(long, value_parser = text_arg, conflicts_with = "dfa", required_unless_present = "dfa")]
    regex: Option<String>,
    /// DFA as JSON, or @path.
    #[arg(long, value_parser = text_arg)]
    dfa: Option<String>,
    /// Largest window length tried by the delay check.
    #[arg(long, default_value_t = 3)]
    max_delay_k: usize,
}

#[derive(Args, Debug, Serialize)]
struct FactorizeArgs {
    #[arg(long, value_parser = text_arg)]
    alphabet: String,
    #[arg(long, value_parser = text_arg)]
    word: String,
    #[arg(long, default_value = "a")]
    letter: String,
    /// Subalphabet order such as `a;a,b;a,c;a,b,c`; default is by size then lexicographic.
    #[arg(long, value_parser = text_arg)]
    order: Option<String>,
}

#[derive(Args, Debug, Serialize)]
struct ExpandArgs {
    #[arg(long, value_parser = text_arg)]
    alphabet: String,
    /// Word to expand into windows of length k.
    #[arg(long, value_parser = text_arg, conflicts_with = "formula", required_unless_present = "formula")]
    word: Option<String>,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// FO²[<,betfac] sentence to rewrite over windows.
    #[arg(long, value_parser = text_arg)]
    formula: Option<String>,
}

#[derive(Args, Debug, Serialize)]
struct TilingArgs {
    /// Instance as JSON, or @path.
    #[arg(long, value_parser = text_arg)]
    instance: String,
    /// Length bound of the model search.
    #[arg(long, default_value_t = 12)]
    bound: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Suite {
    /// Stage-wise soundness of the translation pipeline against the semantics.
    Translations,
    /// Random guarded temporal formulas.
    Tl,
    /// Random FO²[<,betfac] sentences.
    Fo2,
    /// Random a-words.
    AWords,
}

#[derive(Args, Debug, Serialize)]
struct CorpusArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long, default_value_t = 200)]
    count: usize,
    /// Word length for the translations suite; largest word length for a-words.
    #[arg(long, default_value_t = 8)]
    max_len: usize,
    /// Alphabet for the fo2 and a-words suites.
    #[arg(long, default_value = "ab")]
    alphabet: String,
}

/// How a subcommand failed.
enum Failure {
    Domain(Error),
    Usage(String),
    Budget { message: String, partial: Value },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Budget(message) => Failure::Budget {
                message,
                partial: Value::Null,
            },
            e => Failure::Domain(e),
        }
    }
}

type Run = Result<(Value, Vec<String>), Failure>;

#[derive(Serialize)]
struct RunReport<'a> {
    command: &'a str,
    status: &'a str,
    inputs: Value,
    outputs: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings: Option<Value>,
    budgets: Global,
    warnings: Vec<String>,
}

fn alphabet(text: &str) -> Result<Alphabet, Failure> {
    Alphabet::parse(text).map_err(Failure::Domain)
}

fn word(text: &str, a: &Alphabet) -> Result<Word, Failure> {
    Word::parse(text, a).map_err(Failure::Domain)
}

enum Formula {
    Tl(Tl),
    Fo2(Fo2),
}

fn formula(f: &FormulaArgs, a: &Alphabet) -> Result<Formula, Failure> {
    Ok(match f.logic {
        Logic::Tl => Formula::Tl(parse_tl(&f.formula, a)?),
        Logic::Fo2 => Formula::Fo2(parse_fo2(&f.formula, Some(a))?),
    })
}

fn sentence(f: Formula) -> Sentence {
    match f {
        Formula::Tl(t) => Sentence::Tl(t),
        Formula::Fo2(t) => Sentence::Fo2(t),
    }
}

fn cmd_parse(f: &FormulaArgs) -> Run {
    let a = alphabet(&f.alphabet)?;
    Ok(match formula(f, &a)? {
        Formula::Tl(t) => (
            json!({
                "formula": t.to_string(),
                "dag_size": t.dag_size(),
                "tree_size": t.tree_size(),
                "modal_depth": t.modal_depth(),
                "is_ltl": t.is_ltl(),
                "letters": t.letters(),
            }),
            vec![],
        ),
        Formula::Fo2(p) => (
            json!({
                "formula": p.to_string(),
                "dag_size": p.dag_size(),
                "size": p.size(),
                "quantifier_depth": p.quantifier_depth(),
                "is_sentence": p.is_sentence(),
                "letters": p.letters(),
            }),
            vec![],
        ),
    })
}

fn cmd_eval(e: &EvalArgs) -> Run {
    let a = alphabet(&e.f.alphabet)?;
    let w = word(&e.word, &a)?;
    Ok(match formula(&e.f, &a)? {
        Formula::Tl(t) => {
            if e.x.is_some() || e.y.is_some() {
                return Err(Failure::Usage("--x/--y apply to FO² formulas".into()));
            }
            let idx = w.indices(&a)?;
            let positions = TlProgram::compile(&t, &a).eval_positions(&idx);
            let holds = match e.position {
                Some(p) => eval_tl(&t, &MarkedWord::new(w.clone(), p)?),
                None => betweentl::semantics::eval_tl_sentence(&t, &w),
            };
            let at: Vec<usize> = (0..positions.len()).filter(|&i| positions[i]).map(|i| i + 1).collect();
            (json!({ "holds": holds, "positions": at }), vec![])
        }
        Formula::Fo2(p) => {
            if e.position.is_some() {
                return Err(Failure::Usage("--position applies to temporal formulas".into()));
            }
            let holds = eval_fo2(&p, &w, Assignment::new(e.x, e.y))?;
            (json!({ "holds": holds }), vec![])
        }
    })
}

fn cmd_models(m: &ModelsArgs, g: &Global) -> Run {
    let a = alphabet(&m.f.alphabet)?;
    let s = sentence(formula(&m.f, &a)?);
    match enumerate_models(&s, &a, m.max_len, g.max_words) {
        Ok(models) => Ok((
            json!({ "count": models.len(), "complete_up_to": m.max_len, "models": words_json(&models) }),
            vec![],
        )),
        Err(Error::Budget(message)) => {
            let reachable = (0..m.max_len)
                .rev()
                .find(|&n| enumerate_models(&s, &a, n, g.max_words).is_ok());
            let partial = match reachable {
                Some(n) => {
                    let models = enumerate_models(&s, &a, n, g.max_words)?;
                    json!({ "count": models.len(), "complete_up_to": n, "models": words_json(&models) })
                }
                None => Value::Null,
            };
            Err(Failure::Budget { message, partial })
        }
        Err(e) => Err(e.into()),
    }
}

fn words_json(ws: &[Word]) -> Vec<String> {
    ws.iter().map(Word::to_string).collect()
}

fn tl_only(f: &FormulaArgs, a: &Alphabet) -> Result<Tl, Failure> {
    match formula(f, a)? {
        Formula::Tl(t) => Ok(t),
        Formula::Fo2(_) => Err(Failure::Usage("this subcommand takes a temporal formula".into())),
    }
}

fn cmd_translate(t: &TranslateArgs) -> Run {
    let a = alphabet(&t.f.alphabet)?;
    let phi = tl_only(&t.f, &a)?;
    let tr = pipeline_to_ltl(
        &phi,
        PipelineOptions {
            cap: t.cap,
            literal: t.literal,
        },
    )?;
    let stages: Vec<Value> = tr
        .stages
        .iter()
        .map(|s| {
            json!({
                "name": s.name,
                "dag_size_in": s.dag_size_in,
                "dag_size_out": s.dag_size_out,
                "wall_ms": s.wall_ms,
                "formula": s.output.to_string(),
            })
        })
        .collect();
    let warnings = if t.literal {
        vec!["the literal boundary variant is unsound on some inputs".to_string()]
    } else {
        vec![]
    };
    Ok((
        json!({
            "input": tr.input.to_string(),
            "output": tr.output.to_string(),
            "dag_size": tr.output.dag_size(),
            "stages": stages,
        }),
        warnings,
    ))
}

fn sat_options(g: &Global) -> SatOptions {
    SatOptions {
        max_states: g.max_states,
        ..SatOptions::default()
    }
}

fn fo2_search(p: &Fo2, a: &Alphabet, max_len: usize, g: &Global) -> Run {
    let s = bounded_fo2_search(p, a, max_len, g.max_words)?;
    let satisfiable = s.outcome.model().map(|_| true);
    Ok((
        json!({
            "satisfiable": satisfiable,
            "model": s.outcome.model().map(Word::to_string),
            "bound": max_len,
            "prefixes_visited": s.prefixes_visited,
        }),
        vec!["FO² satisfiability is decided only up to the length bound".into()],
    ))
}

fn cmd_sat(f: &FormulaArgs, g: &Global, want_model: bool, fo2_bound: usize) -> Run {
    let a = alphabet(&f.alphabet)?;
    match formula(f, &a)? {
        Formula::Tl(t) => {
            let r = if want_model {
                model_report(&t, &a, sat_options(g))
            } else {
                sat_report(&t, &a, sat_options(g))
            };
            match r {
                Ok(r) => Ok((
                    json!({
                        "satisfiable": r.satisfiable,
                        "model": r.model.as_ref().map(Word::to_string),
                        "states_explored": r.states_explored,
                        "mirrored": r.mirrored,
                    }),
                    vec![],
                )),
                Err(Error::Budget(message)) => Err(Failure::Budget {
                    message,
                    partial: json!({ "satisfiable": null, "states_explored": g.max_states }),
                }),
                Err(e) => Err(e.into()),
            }
        }
        Formula::Fo2(p) => fo2_search(&p, &a, fo2_bound, g),
    }
}

fn parse_theta(text: Option<&str>) -> Result<ThresholdProfile, Failure> {
    let Some(text) = text else {
        return Ok(ThresholdProfile::ones());
    };
    let mut map = std::collections::BTreeMap::new();
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        let (l, v) = part
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("threshold entry `{part}` is not letter=value")))?;
        let v: u64 = v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("threshold `{v}` is not a number")))?;
        map.insert(l.trim().to_string(), v);
    }
    Ok(ThresholdProfile::new(map)?)
}

fn cmd_game(ga: &GameArgs) -> Run {
    let a = alphabet(&ga.alphabet)?;
    let (l, r) = (word(&ga.left, &a)?, word(&ga.right, &a)?);
    let theta = parse_theta(ga.theta.as_deref())?;
    let (equivalent, strategy) = match (ga.left_pos, ga.right_pos) {
        (Some(i), Some(j)) => {
            let (m1, m2) = (MarkedWord::new(l, i)?, MarkedWord::new(r, j)?);
            let eq = decide_equiv(&m1, &m2, ga.rounds, &theta);
            (eq, ga.strategy.then(|| winning_strategy(&m1, &m2, ga.rounds, &theta)).flatten())
        }
        _ => {
            let eq = decide_equiv_words(&l, &r, ga.rounds, &theta);
            (eq, ga.strategy.then(|| winning_strategy_words(&l, &r, ga.rounds, &theta)).flatten())
        }
    };
    let mut out = json!({ "equivalent": equivalent, "winner": if equivalent { "player2" } else { "player1" } });
    if ga.strategy {
        out["strategy"] = serde_json::to_value(strategy).expect("serializable");
    }
    Ok((out, vec![]))
}

fn cmd_classify(c: &ClassifyArgs, g: &Global) -> Run {
    let a = alphabet(&c.alphabet)?;
    let dfa = match (&c.regex, &c.dfa) {
        (Some(r), _) => regex_to_min_dfa(r, &a)?,
        (None, Some(d)) => {
            let j: DfaJson = serde_json::from_str(d).map_err(|e| Failure::Usage(format!("DFA JSON: {e}")))?;
            let d = Dfa::from_json(&j)?;
            if d.alphabet() != &a {
                return Err(Failure::Usage(format!("DFA alphabet {} differs from --alphabet {a}", d.alphabet())));
            }
            d
        }
        (None, None) => return Err(Failure::Usage("give --regex or --dfa".into())),
    };
    let options = ClassifyOptions {
        max_elements: g.max_elements,
        max_delay_k: c.max_delay_k,
    };
    match classify(&dfa, &options) {
        Ok(r) => {
            let warnings = r.warnings.clone();
            Ok((serde_json::to_value(&r).expect("serializable"), warnings))
        }
        Err(Error::Budget(message)) => Err(Failure::Budget {
            message,
            partial: json!({ "dfa_states": dfa.minimize().states() }),
        }),
        Err(e) => Err(e.into()),
    }
}

fn cmd_factorize(fa: &FactorizeArgs) -> Run {
    let a = alphabet(&fa.alphabet)?;
    let w = word(&fa.word, &a)?;
    let state = match &fa.order {
        None => run_sequence(&w, &fa.letter, &a)?,
        Some(o) => {
            let order: Vec<Subalphabet> = o
                .split(';')
                .map(|set| set.split(',').map(|l| l.trim().to_string()).collect())
                .collect();
            run_sequence_with_order(&w, &fa.letter, &a, &order)?
        }
    };
    Ok((
        json!({
            "final": state.to_string(),
            "factors": state.factor_strings(),
            "boundaries": state.boundaries,
            "trace": state.trace,
        }),
        vec![],
    ))
}

fn cmd_expand(e: &ExpandArgs) -> Run {
    let a = alphabet(&e.alphabet)?;
    if let Some(text) = &e.word {
        let w = word(text, &a)?;
        let x = expand_word(&w, e.k)?;
        return Ok((json!({ "k": e.k, "expanded": x.letters() }), vec![]));
    }
    let text = e.formula.as_deref().ok_or_else(|| Failure::Usage("give --word or --formula".into()))?;
    let phi = parse_fo2(text, Some(&a))?;
    let (k, psi) = delay_fo2(&phi, &a)?;
    Ok((
        json!({ "k": k, "formula": psi.to_string(), "dag_size": psi.dag_size() }),
        vec![],
    ))
}

fn cmd_tiling(t: &TilingArgs, g: &Global) -> Run {
    let inst: TilingInstance =
        serde_json::from_str(&t.instance).map_err(|e| Failure::Usage(format!("tiling instance JSON: {e}")))?;
    let (phi, a) = encode_tiling(&inst)?;
    let (mut out, warnings) = fo2_search(&phi, &a, t.bound, g)?;
    out["alphabet"] = json!(a.letters());
    out["formula_dag_size"] = json!(phi.dag_size());
    Ok((out, warnings))
}

fn cmd_corpus(c: &CorpusArgs, g: &Global) -> Run {
    let shape = TlShape::default();
    match c.suite {
        Suite::Translations => {
            let r = run_translation_suite(g.seed, c.count, c.max_len, &shape)?;
            if r.failures > 0 {
                let first = r.reports.iter().find(|x| !x.passed()).map(|x| x.formula.clone());
                return Err(Failure::Domain(Error::Internal(format!(
                    "{} of {} cases fail; first: {}",
                    r.failures,
                    r.cases,
                    first.unwrap_or_default()
                ))));
            }
            Ok((serde_json::to_value(&r).expect("serializable"), vec![]))
        }
        Suite::Tl => {
            let cases: Vec<Value> = guarded_tl_corpus(g.seed, c.count, &shape)
                .iter()
                .map(|x| json!({ "id": x.id, "alphabet": x.alphabet.to_string(), "formula": x.formula.to_string() }))
                .collect();
            Ok((json!({ "seed": g.seed, "cases": cases }), vec![]))
        }
        Suite::Fo2 => {
            let a = alphabet(&c.alphabet)?;
            let cases: Vec<String> = fo2_betfac_corpus(g.seed, c.count, &a, 3).iter().map(Fo2::to_string).collect();
            Ok((json!({ "seed": g.seed, "alphabet": a.to_string(), "cases": cases }), vec![]))
        }
        Suite::AWords => {
            let a = alphabet(&c.alphabet)?;
            let first = a.letters()[0].clone();
            let mut rng = rng_for(g.seed);
            let cases: Vec<String> =
                (0..c.count).map(|_| random_a_word(&mut rng, &a, &first, c.max_len).to_string()).collect();
            Ok((json!({ "seed": g.seed, "alphabet": a.to_string(), "letter": first, "cases": cases }), vec![]))
        }
    }
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("wall_ms");
            m.values_mut().for_each(strip_timing);
        }
        Value::Array(xs) => xs.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

fn dispatch(cli: &Cli) -> (&'static str, Value, Run) {
    let g = &cli.global;
    let inputs = |x: &dyn erased::Inputs| x.to_value();
    match &cli.command {
        Command::Parse(a) => ("parse", inputs(a), cmd_parse(a)),
        Command::Eval(a) => ("eval", inputs(a), cmd_eval(a)),
        Command::Models(a) => ("models", inputs(a), cmd_models(a, g)),
        Command::Translate(a) => ("translate", inputs(a), cmd_translate(a)),
        Command::Sat(a) => ("sat", inputs(a), cmd_sat(a, g, true, 10)),
        Command::Model(a) => ("model", inputs(a), cmd_sat(&a.f, g, true, a.max_len)),
        Command::Game(a) => ("game", inputs(a), cmd_game(a)),
        Command::Classify(a) => ("classify", inputs(a), cmd_classify(a, g)),
        Command::Factorize(a) => ("factorize", inputs(a), cmd_factorize(a)),
        Command::Expand(a) => ("expand", inputs(a), cmd_expand(a)),
        Command::Tiling(a) => ("tiling", inputs(a), cmd_tiling(a, g)),
        Command::Corpus(a) => ("corpus", inputs(a), cmd_corpus(a, g)),
    }
}

mod erased {
    pub trait Inputs {
        fn to_value(&self) -> serde_json::Value;
    }

    impl<T: serde::Serialize> Inputs for T {
        fn to_value(&self) -> serde_json::Value {
            serde_json::to_value(self).expect("serializable")
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (command, inputs, run) = dispatch(&cli);
    let wall_ms = start.elapsed().as_secs_f64() * 1000.0;
    let (status, outputs, warnings, code) = match run {
        Ok((out, warnings)) => ("ok", out, warnings, 0),
        Err(Failure::Budget { message, partial }) => (
            "budget-exceeded",
            json!({ "error": message, "partial": partial }),
            vec![],
            3,
        ),
        Err(Failure::Domain(e)) => ("error", json!({ "error": e.to_string() }), vec![], 1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ("usage-error", json!({ "error": m }), vec![], 2)
        }
    };
    let mut report = serde_json::to_value(RunReport {
        command,
        status,
        inputs,
        outputs,
        timings: (!cli.global.no_timing).then(|| json!({ "wall_ms": wall_ms })),
        budgets: cli.global,
        warnings,
    })
    .expect("serializable");
    if cli.global.no_timing {
        strip_timing(&mut report);
    }
    let text = if cli.global.pretty {
        serde_json::to_string_pretty(&report)
    } else {
        serde_json::to_string(&report)
    }
    .expect("serializable");
    let mut stdout = std::io::stdout().lock();
    if writeln!(stdout, "{text}").is_err() {
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
