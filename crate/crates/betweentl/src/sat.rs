//! Finite-word satisfiability for LTL with past, model extraction, and
//! bounded model search for two-variable sentences.
//!
//! The automaton is an on-the-fly tableau. A state records the letter at the
//! current position and three-valued truth values of the temporal nodes of
//! the closure. Past nodes are computed from the previous state. Future nodes
//! are guessed only when an obligation needs them, except below a past
//! operator, where every node is tracked at every position. The formula is
//! mirrored when that leaves fewer nodes to track.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::semantics::{eval_fo2_sentence, TlProgram};
use crate::syntax::{Alphabet, Fo2, Fo2Kind, Tl, TlKind, Var, Word};
use crate::translate::{pipeline_to_ltl, PipelineOptions};

/// Default cap on tableau states.
pub const DEFAULT_STATE_BUDGET: usize = 500_000;

/// Default cap on prefixes visited by `bounded_fo2_sat`.
pub const DEFAULT_SEARCH_BUDGET: usize = 20_000_000;

const UNKNOWN: u8 = 0;
const FALSE: u8 = 1;
const TRUE: u8 = 2;

fn not3(a: u8) -> u8 {
    match a {
        FALSE => TRUE,
        TRUE => FALSE,
        _ => UNKNOWN,
    }
}

fn and3(a: u8, b: u8) -> u8 {
    if a == FALSE || b == FALSE {
        FALSE
    } else if a == TRUE && b == TRUE {
        TRUE
    } else {
        UNKNOWN
    }
}

fn or3(a: u8, b: u8) -> u8 {
    not3(and3(not3(a), not3(b)))
}

fn bool3(b: bool) -> u8 {
    if b {
        TRUE
    } else {
        FALSE
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    True,
    False,
    Letter(Option<usize>),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Next(usize),
    Prev(usize),
    Future(usize),
    Past(usize),
    Until(usize, usize),
    Since(usize, usize),
}

impl Node {
    fn is_future(self) -> bool {
        matches!(self, Node::Next(_) | Node::Future(_) | Node::Until(..))
    }

    fn is_past(self) -> bool {
        matches!(self, Node::Prev(_) | Node::Past(_) | Node::Since(..))
    }

    fn children(self) -> Vec<usize> {
        match self {
            Node::True | Node::False | Node::Letter(_) => vec![],
            Node::Not(a) | Node::Next(a) | Node::Prev(a) | Node::Future(a) | Node::Past(a) => {
                vec![a]
            }
            Node::And(a, b) | Node::Or(a, b) | Node::Until(a, b) | Node::Since(a, b) => vec![a, b],
        }
    }
}

/// Closure of an LTL formula with `X^n`/`Y^n` unrolled into unit steps.
#[derive(Debug, Clone)]
struct Closure {
    nodes: Vec<Node>,
    root: usize,
    /// Nodes tracked at every position.
    tracked: Vec<bool>,
}

impl Closure {
    fn build(phi: &Tl, alphabet: &Alphabet) -> Result<Closure> {
        let mut nodes: Vec<Node> = Vec::new();
        let mut index: HashMap<Node, usize> = HashMap::new();
        let mut add = |n: Node, nodes: &mut Vec<Node>| -> usize {
            *index.entry(n).or_insert_with(|| {
                nodes.push(n);
                nodes.len() - 1
            })
        };
        let mut of: HashMap<u64, usize> = HashMap::new();
        for t in phi.topological() {
            let ix = |c: &Tl| of[&c.id()];
            let idx = match t.kind() {
                TlKind::True => add(Node::True, &mut nodes),
                TlKind::False => add(Node::False, &mut nodes),
                TlKind::Letter(a) => add(Node::Letter(alphabet.index(a)), &mut nodes),
                TlKind::Not(a) => add(Node::Not(ix(a)), &mut nodes),
                TlKind::And(a, b) => add(Node::And(ix(a), ix(b)), &mut nodes),
                TlKind::Or(a, b) => add(Node::Or(ix(a), ix(b)), &mut nodes),
                TlKind::Next(n, a) => {
                    let mut cur = ix(a);
                    for _ in 0..*n {
                        cur = add(Node::Next(cur), &mut nodes);
                    }
                    cur
                }
                TlKind::Prev(n, a) => {
                    let mut cur = ix(a);
                    for _ in 0..*n {
                        cur = add(Node::Prev(cur), &mut nodes);
                    }
                    cur
                }
                TlKind::Future(None, a) => add(Node::Future(ix(a)), &mut nodes),
                TlKind::Past(None, a) => add(Node::Past(ix(a)), &mut nodes),
                TlKind::Until(a, b) => add(Node::Until(ix(a), ix(b)), &mut nodes),
                TlKind::Since(a, b) => add(Node::Since(ix(a), ix(b)), &mut nodes),
                TlKind::Future(Some(_), _) | TlKind::Past(Some(_), _) => {
                    return Err(Error::Unsupported(format!(
                        "guarded modality in automaton input: {t}"
                    )))
                }
            };
            of.insert(t.id(), idx);
        }
        let root = of[&phi.id()];
        let mut tracked = vec![false; nodes.len()];
        for i in (0..nodes.len()).rev() {
            if nodes[i].is_past() || tracked[i] {
                for c in nodes[i].children() {
                    tracked[c] = true;
                }
            }
        }
        Ok(Closure { nodes, root, tracked })
    }

    fn guessed(&self) -> usize {
        (0..self.nodes.len())
            .filter(|&i| self.tracked[i] && self.nodes[i].is_future())
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct State {
    letter: usize,
    vals: Box<[u8]>,
}

#[derive(Debug, Clone, Copy)]
enum Obligation {
    Node(usize),
    Or(usize, usize),
    Until(usize, usize, usize),
}

impl Obligation {
    fn value(self, ev: &[u8]) -> u8 {
        match self {
            Obligation::Node(a) => ev[a],
            Obligation::Or(a, b) => or3(ev[a], ev[b]),
            Obligation::Until(a, g, u) => or3(ev[g], and3(ev[a], ev[u])),
        }
    }

    fn roots(self) -> Vec<usize> {
        match self {
            Obligation::Node(a) => vec![a],
            Obligation::Or(a, b) => vec![a, b],
            Obligation::Until(a, g, u) => vec![g, a, u],
        }
    }
}

struct Tableau {
    closure: Closure,
    letters: usize,
    /// Root must hold at the last position instead of the first.
    anchor_last: bool,
}

/// Exploration result: states by discovery order and successor lists.
struct Graph {
    states: Vec<State>,
    succ: Vec<Vec<usize>>,
    initial: Vec<usize>,
    accepting: Vec<bool>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Stop {
    Never,
    FirstAccepting,
    LevelOfFirstAccepting,
}

impl Tableau {
    fn eval(&self, letter: usize, vals: &[u8], unknown_future: u8) -> Vec<u8> {
        let mut ev = vec![UNKNOWN; vals.len()];
        for (i, n) in self.closure.nodes.iter().enumerate() {
            ev[i] = match *n {
                Node::True => TRUE,
                Node::False => FALSE,
                Node::Letter(a) => bool3(a == Some(letter)),
                Node::Not(a) => not3(ev[a]),
                Node::And(a, b) => and3(ev[a], ev[b]),
                Node::Or(a, b) => or3(ev[a], ev[b]),
                n if n.is_future() && vals[i] == UNKNOWN => unknown_future,
                _ => vals[i],
            };
        }
        ev
    }

    /// An unassigned future node whose value would help decide `i`.
    fn branch_var(&self, i: usize, ev: &[u8], vals: &[u8]) -> Option<usize> {
        if ev[i] != UNKNOWN {
            return None;
        }
        let n = self.closure.nodes[i];
        if n.is_future() && vals[i] == UNKNOWN {
            return Some(i);
        }
        match n {
            Node::Not(_) | Node::And(..) | Node::Or(..) => n
                .children()
                .into_iter()
                .find_map(|c| self.branch_var(c, ev, vals)),
            _ => None,
        }
    }

    fn successors(&self, prev: Option<&State>) -> Result<Vec<State>> {
        let n = self.closure.nodes.len();
        let mut base = vec![UNKNOWN; n];
        let mut obligations: Vec<(Obligation, u8)> = Vec::new();
        match prev {
            None => {
                for (i, node) in self.closure.nodes.iter().enumerate() {
                    if node.is_past() {
                        base[i] = FALSE;
                    }
                }
                if !self.anchor_last {
                    obligations.push((Obligation::Node(self.closure.root), TRUE));
                }
            }
            Some(s) => {
                let pv = self.eval(s.letter, &s.vals, UNKNOWN);
                for (i, node) in self.closure.nodes.iter().enumerate() {
                    match *node {
                        Node::Prev(a) => base[i] = pv[a],
                        Node::Past(a) => base[i] = or3(pv[a], pv[i]),
                        Node::Since(a, g) => base[i] = or3(pv[g], and3(pv[a], pv[i])),
                        Node::Next(a) if pv[i] != UNKNOWN => {
                            obligations.push((Obligation::Node(a), pv[i]))
                        }
                        Node::Future(a) if pv[i] != UNKNOWN => {
                            obligations.push((Obligation::Or(a, i), pv[i]))
                        }
                        Node::Until(a, g) if pv[i] != UNKNOWN => {
                            obligations.push((Obligation::Until(a, g, i), pv[i]))
                        }
                        _ => {}
                    }
                }
            }
        }
        let tracked_future: Vec<usize> = (0..n)
            .filter(|&i| self.closure.tracked[i] && self.closure.nodes[i].is_future())
            .collect();
        let mut out = Vec::new();
        for letter in 0..self.letters {
            let mut stack = vec![base.clone()];
            while let Some(vals) = stack.pop() {
                let ev = self.eval(letter, &vals, UNKNOWN);
                let mut branch = None;
                let mut dead = false;
                for (ob, want) in &obligations {
                    match ob.value(&ev) {
                        UNKNOWN => {
                            if branch.is_none() {
                                branch = ob.roots().into_iter().find_map(|r| self.branch_var(r, &ev, &vals));
                                if branch.is_none() {
                                    return Err(Error::Internal(
                                        "undecidable obligation in tableau".into(),
                                    ));
                                }
                            }
                        }
                        v if v != *want => {
                            dead = true;
                            break;
                        }
                        _ => {}
                    }
                }
                if dead {
                    continue;
                }
                let branch = branch.or_else(|| tracked_future.iter().copied().find(|&i| vals[i] == UNKNOWN));
                match branch {
                    Some(i) => {
                        for v in [TRUE, FALSE] {
                            let mut next = vals.clone();
                            next[i] = v;
                            stack.push(next);
                        }
                    }
                    None => out.push(State {
                        letter,
                        vals: vals.into_boxed_slice(),
                    }),
                }
            }
        }
        Ok(out)
    }

    fn accepting(&self, s: &State) -> bool {
        let no_pending = self
            .closure
            .nodes
            .iter()
            .enumerate()
            .all(|(i, n)| !n.is_future() || s.vals[i] != TRUE);
        no_pending && (!self.anchor_last || self.eval(s.letter, &s.vals, FALSE)[self.closure.root] == TRUE)
    }

    fn explore(&self, budget: usize, stop: Stop) -> Result<Graph> {
        let mut g = Graph {
            states: Vec::new(),
            succ: Vec::new(),
            initial: Vec::new(),
            accepting: Vec::new(),
        };
        let mut index: HashMap<State, usize> = HashMap::new();
        let mut intern = |s: State, g: &mut Graph| -> Result<(usize, bool)> {
            if let Some(&i) = index.get(&s) {
                return Ok((i, false));
            }
            if g.states.len() >= budget {
                return Err(Error::Budget(format!("more than {budget} automaton states")));
            }
            let i = g.states.len();
            g.accepting.push(self.accepting(&s));
            g.states.push(s.clone());
            g.succ.push(Vec::new());
            index.insert(s, i);
            Ok((i, true))
        };
        let mut level: Vec<usize> = Vec::new();
        for s in self.successors(None)? {
            let (i, fresh) = intern(s, &mut g)?;
            if fresh {
                g.initial.push(i);
                level.push(i);
            }
        }
        let mut found = level.iter().any(|&i| g.accepting[i]);
        while !level.is_empty() {
            if found && stop != Stop::Never {
                break;
            }
            let mut next_level = Vec::new();
            for &i in &level {
                let state = g.states[i].clone();
                for t in self.successors(Some(&state))? {
                    let (j, fresh) = intern(t, &mut g)?;
                    g.succ[i].push(j);
                    if fresh {
                        next_level.push(j);
                        found |= g.accepting[j];
                        if found && stop == Stop::FirstAccepting {
                            return Ok(g);
                        }
                    }
                }
            }
            level = next_level;
        }
        Ok(g)
    }
}

/// A nondeterministic finite automaton over alphabet indices.
#[derive(Debug, Clone, Serialize)]
pub struct Nfa {
    pub alphabet: Vec<String>,
    pub states: usize,
    /// Transitions `(from, letter, to)`.
    pub transitions: Vec<(usize, usize, usize)>,
    pub initial: Vec<usize>,
    pub accepting: Vec<usize>,
}

impl Nfa {
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.states];
        for &(p, a, q) in &self.transitions {
            adj[p].push((a, q));
        }
        for row in &mut adj {
            row.sort_unstable();
            row.dedup();
        }
        adj
    }

    fn accepting_mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.states];
        for &q in &self.accepting {
            m[q] = true;
        }
        m
    }

    /// Reverses every transition and swaps initial and accepting states.
    pub fn reversed(&self) -> Nfa {
        Nfa {
            alphabet: self.alphabet.clone(),
            states: self.states,
            transitions: self.transitions.iter().map(|&(p, a, q)| (q, a, p)).collect(),
            initial: self.accepting.clone(),
            accepting: self.initial.clone(),
        }
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        let adj = self.adjacency();
        let mut cur = vec![false; self.states];
        for &q in &self.initial {
            cur[q] = true;
        }
        for &a in word {
            let mut next = vec![false; self.states];
            for p in (0..self.states).filter(|&p| cur[p]) {
                for &(b, q) in &adj[p] {
                    if a == b {
                        next[q] = true;
                    }
                }
            }
            cur = next;
        }
        let acc = self.accepting_mask();
        (0..self.states).any(|q| cur[q] && acc[q])
    }

    /// Accepted words of length ≤ `max_len` in length-then-lexicographic order.
    pub fn language_up_to(&self, max_len: usize) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let acc = self.accepting_mask();
        let mut start: Vec<usize> = self.initial.clone();
        start.sort_unstable();
        start.dedup();
        let mut level: Vec<(Vec<usize>, Vec<usize>)> = vec![(Vec::new(), start)];
        let mut out = Vec::new();
        for len in 0..=max_len {
            for (w, set) in &level {
                if set.iter().any(|&q| acc[q]) {
                    out.push(w.clone());
                }
            }
            if len == max_len {
                break;
            }
            let mut next_level = Vec::new();
            for (w, set) in &level {
                for a in 0..self.alphabet.len() {
                    let mut next: Vec<usize> = set
                        .iter()
                        .flat_map(|&p| adj[p].iter().filter(|e| e.0 == a).map(|e| e.1))
                        .collect();
                    next.sort_unstable();
                    next.dedup();
                    if !next.is_empty() {
                        let mut w2 = w.clone();
                        w2.push(a);
                        next_level.push((w2, next));
                    }
                }
            }
            level = next_level;
        }
        out
    }

    /// Distance from each state to acceptance.
    fn distance_to_accept(&self) -> Vec<Option<usize>> {
        let mut rev = vec![Vec::new(); self.states];
        for &(p, _, q) in &self.transitions {
            rev[q].push(p);
        }
        let mut dist = vec![None; self.states];
        let mut queue = VecDeque::new();
        for &q in &self.accepting {
            if dist[q].is_none() {
                dist[q] = Some(0);
                queue.push_back(q);
            }
        }
        while let Some(q) = queue.pop_front() {
            let d = dist[q].unwrap();
            for &p in &rev[q] {
                if dist[p].is_none() {
                    dist[p] = Some(d + 1);
                    queue.push_back(p);
                }
            }
        }
        dist
    }

    pub fn is_empty(&self) -> bool {
        self.shortest_accepted().is_none()
    }

    /// The length-minimal, then lexicographically least accepted word.
    pub fn shortest_accepted(&self) -> Option<Vec<usize>> {
        let dist = self.distance_to_accept();
        let len = self.initial.iter().filter_map(|&q| dist[q]).min()?;
        let adj = self.adjacency();
        let mut cur: Vec<usize> = self
            .initial
            .iter()
            .copied()
            .filter(|&q| dist[q] == Some(len))
            .collect();
        let mut word = Vec::with_capacity(len);
        for step in 0..len {
            let remaining = len - step - 1;
            let letter = (0..self.alphabet.len()).find(|&a| {
                cur.iter()
                    .any(|&p| adj[p].iter().any(|&(b, q)| b == a && dist[q] == Some(remaining)))
            })?;
            let mut next: Vec<usize> = cur
                .iter()
                .flat_map(|&p| {
                    adj[p]
                        .iter()
                        .filter(|&&(b, q)| b == letter && dist[q] == Some(remaining))
                        .map(|&(_, q)| q)
                        .collect::<Vec<_>>()
                })
                .collect();
            next.sort_unstable();
            next.dedup();
            word.push(letter);
            cur = next;
        }
        Some(word)
    }
}

/// Options for the satisfiability procedures.
#[derive(Debug, Clone, Copy)]
pub struct SatOptions {
    pub max_states: usize,
    pub pipeline: PipelineOptions,
}

impl Default for SatOptions {
    fn default() -> Self {
        SatOptions {
            max_states: DEFAULT_STATE_BUDGET,
            pipeline: PipelineOptions::default(),
        }
    }
}

/// Outcome of a satisfiability query.
#[derive(Debug, Clone, Serialize)]
pub struct SatReport {
    pub satisfiable: bool,
    pub model: Option<Word>,
    pub states_explored: usize,
    /// The formula is handled mirrored, over reversed words.
    pub mirrored: bool,
}

fn to_ltl(phi: &Tl, options: &SatOptions) -> Result<Tl> {
    if phi.is_ltl() {
        Ok(phi.clone())
    } else {
        Ok(pipeline_to_ltl(phi, options.pipeline)?.output)
    }
}

fn tableau(phi: &Tl, alphabet: &Alphabet) -> Result<(Tableau, bool)> {
    let forward = Closure::build(phi, alphabet)?;
    let backward = Closure::build(&phi.mirror(), alphabet)?;
    let mirrored = backward.guessed() < forward.guessed();
    let closure = if mirrored { backward } else { forward };
    Ok((
        Tableau {
            closure,
            letters: alphabet.len(),
            anchor_last: mirrored,
        },
        mirrored,
    ))
}

fn graph_to_nfa(g: &Graph, alphabet: &Alphabet, empty_accepted: bool, mirrored: bool) -> Nfa {
    let mut transitions = Vec::new();
    for &i in &g.initial {
        transitions.push((0, g.states[i].letter, i + 1));
    }
    for (i, succ) in g.succ.iter().enumerate() {
        for &j in succ {
            transitions.push((i + 1, g.states[j].letter, j + 1));
        }
    }
    let mut accepting: Vec<usize> = (0..g.states.len()).filter(|&i| g.accepting[i]).map(|i| i + 1).collect();
    if empty_accepted {
        accepting.insert(0, 0);
    }
    let nfa = Nfa {
        alphabet: alphabet.letters().to_vec(),
        states: g.states.len() + 1,
        transitions,
        initial: vec![0],
        accepting,
    };
    if mirrored {
        nfa.reversed()
    } else {
        nfa
    }
}

fn accepts_empty(phi: &Tl, alphabet: &Alphabet) -> bool {
    TlProgram::compile(phi, alphabet).eval_empty()
}

/// NFA for the models of an LTL formula (with past and `X^n`/`Y^n`).
pub fn ltl_to_nfa(phi: &Tl, alphabet: &Alphabet, max_states: usize) -> Result<Nfa> {
    if !phi.is_ltl() {
        return Err(Error::Unsupported(format!("not an LTL formula: {phi}")));
    }
    let (t, mirrored) = tableau(phi, alphabet)?;
    let g = t.explore(max_states, Stop::Never)?;
    Ok(graph_to_nfa(&g, alphabet, accepts_empty(phi, alphabet), mirrored))
}

fn decide(phi: &Tl, alphabet: &Alphabet, options: SatOptions, want_model: bool) -> Result<SatReport> {
    let ltl = to_ltl(phi, &options)?;
    if accepts_empty(&ltl, alphabet) {
        return Ok(SatReport {
            satisfiable: true,
            model: Some(Word::empty()),
            states_explored: 0,
            mirrored: false,
        });
    }
    let (t, mirrored) = tableau(&ltl, alphabet)?;
    let stop = if want_model {
        Stop::LevelOfFirstAccepting
    } else {
        Stop::FirstAccepting
    };
    let g = t.explore(options.max_states, stop)?;
    let satisfiable = g.accepting.iter().any(|&a| a);
    let model = if want_model && satisfiable {
        let nfa = graph_to_nfa(&g, alphabet, false, mirrored);
        let w = nfa
            .shortest_accepted()
            .ok_or_else(|| Error::Internal("accepting state without accepted word".into()))?;
        Some(Word::from_indices(alphabet, &w))
    } else {
        None
    };
    Ok(SatReport {
        satisfiable,
        model,
        states_explored: g.states.len(),
        mirrored,
    })
}

/// Whether some finite word (possibly empty) is a model. Guarded formulas
/// are translated to LTL first.
pub fn is_satisfiable(phi: &Tl, alphabet: &Alphabet, options: SatOptions) -> Result<bool> {
    Ok(decide(phi, alphabet, options, false)?.satisfiable)
}

/// Satisfiability with exploration statistics.
pub fn sat_report(phi: &Tl, alphabet: &Alphabet, options: SatOptions) -> Result<SatReport> {
    decide(phi, alphabet, options, false)
}

/// Satisfiability with the shortest, then lexicographically least, model.
pub fn model_report(phi: &Tl, alphabet: &Alphabet, options: SatOptions) -> Result<SatReport> {
    decide(phi, alphabet, options, true)
}

/// The shortest, then lexicographically least, model, or `None` when
/// unsatisfiable.
pub fn shortest_model(phi: &Tl, alphabet: &Alphabet, options: SatOptions) -> Result<Option<Word>> {
    Ok(decide(phi, alphabet, options, true)?.model)
}

/// Result of a bounded search, distinguishing "none up to the bound" from
/// unsatisfiability.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BoundedOutcome {
    Found { model: Word },
    NoneWithinBound { max_len: usize },
}

impl BoundedOutcome {
    pub fn model(&self) -> Option<&Word> {
        match self {
            BoundedOutcome::Found { model } => Some(model),
            BoundedOutcome::NoneWithinBound { .. } => None,
        }
    }
}

/// A bounded search result with the number of prefixes visited.
#[derive(Debug, Clone, Serialize)]
pub struct BoundedSearch {
    pub outcome: BoundedOutcome,
    pub prefixes_visited: usize,
    pub pruning_conjuncts: usize,
}

fn conjuncts(f: &Fo2, out: &mut Vec<Fo2>) {
    match f.kind() {
        Fo2Kind::And(a, b) => {
            conjuncts(a, out);
            conjuncts(b, out);
        }
        _ => out.push(f.clone()),
    }
}

fn bounds_above(v: Var, f: &Fo2) -> bool {
    let o = v.other();
    match f.kind() {
        Fo2Kind::Less(a, b) | Fo2Kind::LessEq(a, b) | Fo2Kind::Suc(a, b) => *a == v && *b == o,
        Fo2Kind::Not(g) => matches!(g.kind(), Fo2Kind::Less(a, b) | Fo2Kind::LessEq(a, b) if *a == o && *b == v),
        Fo2Kind::And(a, b) => bounds_above(v, a) || bounds_above(v, b),
        _ => false,
    }
}

fn bounds_above_neg(v: Var, f: &Fo2) -> bool {
    match f.kind() {
        Fo2Kind::Not(g) => bounds_above(v, g),
        Fo2Kind::Or(a, b) => bounds_above_neg(v, a) || bounds_above_neg(v, b),
        _ => false,
    }
}

/// Truth on positions of a prefix is unchanged by extending the word:
/// every quantifier is bounded above by the other, already placed variable.
fn past_stable(f: &Fo2) -> bool {
    match f.kind() {
        Fo2Kind::Not(a) => past_stable(a),
        Fo2Kind::And(a, b) | Fo2Kind::Or(a, b) => past_stable(a) && past_stable(b),
        Fo2Kind::Exists(v, b) => bounds_above(*v, b) && past_stable(b),
        Fo2Kind::Forall(v, b) => bounds_above_neg(*v, b) && past_stable(b),
        _ => true,
    }
}

/// A universal sentence split into its quantified variables and a
/// past-stable matrix: once false on a prefix it is false on every
/// extension.
#[derive(Debug, Clone)]
struct Universal {
    vars: Vec<Var>,
    matrix: Fo2,
}

fn universal(f: &Fo2) -> Option<Universal> {
    let mut vars = Vec::new();
    let mut cur = f.clone();
    loop {
        let (v, body) = match cur.kind() {
            Fo2Kind::Forall(v, b) => (*v, b.clone()),
            Fo2Kind::Not(g) => match g.kind() {
                Fo2Kind::Exists(v, b) => (*v, Fo2::not(b.clone())),
                _ => break,
            },
            _ => break,
        };
        if !vars.contains(&v) {
            vars.push(v);
        }
        cur = body;
    }
    past_stable(&cur).then_some(Universal { vars, matrix: cur })
}

/// Direct evaluation at one assignment; 0 marks an unassigned variable.
fn holds_at(f: &Fo2, w: &[String], x: usize, y: usize) -> bool {
    let pick = |v: &Var| match v {
        Var::X => x,
        Var::Y => y,
    };
    let count = |l: usize, r: usize, test: &dyn Fn(usize) -> bool| -> u64 {
        if l == 0 || r == 0 || l >= r {
            0
        } else {
            (l + 1..r).filter(|&k| test(k)).count() as u64
        }
    };
    let factor_count = |u: &[String], l: usize, r: usize| {
        count(l, r, &|k| k + u.len() - 1 < r && w[k - 1..k - 1 + u.len()] == *u)
    };
    match f.kind() {
        Fo2Kind::True => true,
        Fo2Kind::False => false,
        Fo2Kind::Letter(a, v) => {
            let p = pick(v);
            p > 0 && w[p - 1] == *a
        }
        Fo2Kind::Less(a, b) | Fo2Kind::LessEq(a, b) | Fo2Kind::Suc(a, b) => {
            let (p, q) = (pick(a), pick(b));
            p > 0
                && q > 0
                && match f.kind() {
                    Fo2Kind::Less(..) => p < q,
                    Fo2Kind::LessEq(..) => p <= q,
                    _ => q == p + 1,
                }
        }
        Fo2Kind::Between(c, a, b) => count(pick(a), pick(b), &|k| w[k - 1] == *c) > 0,
        Fo2Kind::Threshold(c, t, a, b) => count(pick(a), pick(b), &|k| w[k - 1] == *c) >= *t,
        Fo2Kind::BetweenFactor(u, a, b) => factor_count(u, pick(a), pick(b)) > 0,
        Fo2Kind::FactorThreshold(u, t, a, b) => factor_count(u, pick(a), pick(b)) >= *t,
        Fo2Kind::Not(a) => !holds_at(a, w, x, y),
        Fo2Kind::And(a, b) => holds_at(a, w, x, y) && holds_at(b, w, x, y),
        Fo2Kind::Or(a, b) => holds_at(a, w, x, y) || holds_at(b, w, x, y),
        Fo2Kind::Exists(v, a) | Fo2Kind::Forall(v, a) => {
            let mut values = (1..=w.len()).map(|p| match v {
                Var::X => holds_at(a, w, p, y),
                Var::Y => holds_at(a, w, x, p),
            });
            if matches!(f.kind(), Fo2Kind::Exists(..)) {
                values.any(|b| b)
            } else {
                values.all(|b| b)
            }
        }
    }
}

impl Universal {
    /// Some assignment involving the last position falsifies the matrix.
    fn violated_at_end(&self, w: &[String]) -> bool {
        let m = w.len();
        let bad = |x: usize, y: usize| !holds_at(&self.matrix, w, x, y);
        match self.vars.as_slice() {
            [] => bad(0, 0),
            [Var::X] => bad(m, 0),
            [Var::Y] => bad(0, m),
            _ => (1..=m).any(|p| bad(m, p) || (p < m && bad(p, m))),
        }
    }
}

/// Least model (by length, then lexicographically) of length ≤ `max_len`.
/// Prefixes are pruned with the universal conjuncts whose matrix is
/// past-stable; each extension only checks assignments that involve the
/// new last position.
pub fn bounded_fo2_search(phi: &Fo2, alphabet: &Alphabet, max_len: usize, budget: usize) -> Result<BoundedSearch> {
    if !phi.is_sentence() {
        let v = phi.free_vars().into_iter().next().map(Var::name).unwrap_or('x');
        return Err(Error::UnboundVariable(v));
    }
    for a in phi.letters() {
        if !alphabet.contains(&a) {
            return Err(Error::UnknownLetter(a));
        }
    }
    let mut all = Vec::new();
    conjuncts(phi, &mut all);
    let pruning: Vec<Universal> = all.iter().filter_map(universal).collect();
    let mut visited = 0usize;
    let mut ctx = Search {
        phi,
        pruning: &pruning,
        alphabet,
        visited: &mut visited,
        budget,
    };
    for len in 0..=max_len {
        let mut prefix: Vec<String> = Vec::with_capacity(len);
        if let Some(w) = ctx.run(len, &mut prefix)? {
            return Ok(BoundedSearch {
                outcome: BoundedOutcome::Found { model: w },
                prefixes_visited: visited,
                pruning_conjuncts: pruning.len(),
            });
        }
    }
    Ok(BoundedSearch {
        outcome: BoundedOutcome::NoneWithinBound { max_len },
        prefixes_visited: visited,
        pruning_conjuncts: pruning.len(),
    })
}

struct Search<'a> {
    phi: &'a Fo2,
    pruning: &'a [Universal],
    alphabet: &'a Alphabet,
    visited: &'a mut usize,
    budget: usize,
}

impl Search<'_> {
    fn run(&mut self, len: usize, prefix: &mut Vec<String>) -> Result<Option<Word>> {
        *self.visited += 1;
        if *self.visited > self.budget {
            return Err(Error::Budget(format!("more than {} prefixes visited", self.budget)));
        }
        if !prefix.is_empty() && self.pruning.iter().any(|u| u.violated_at_end(prefix)) {
            return Ok(None);
        }
        if prefix.len() == len {
            let w = Word::new(prefix.iter().cloned());
            return Ok(if eval_fo2_sentence(self.phi, &w)? { Some(w) } else { None });
        }
        for a in self.alphabet.letters() {
            prefix.push(a.clone());
            let found = self.run(len, prefix)?;
            prefix.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
}

/// `bounded_fo2_search` with the default budget.
pub fn bounded_fo2_sat(phi: &Fo2, alphabet: &Alphabet, max_len: usize) -> Result<BoundedOutcome> {
    Ok(bounded_fo2_search(phi, alphabet, max_len, DEFAULT_SEARCH_BUDGET)?.outcome)
}
