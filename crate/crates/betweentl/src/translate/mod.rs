//! Formula-to-formula transformations: guard normalization, threshold
//! unfolding, the factor pipeline down to LTL, the delay and expansion
//! transforms, and the reduction generators.

use std::collections::HashMap;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::syntax::{Tl, TlKind};

pub mod delay;
pub mod dnf;
pub mod factor;
pub mod ltl;
pub mod reductions;
pub mod unfold;

pub use delay::{delay_fo2, expand_fo2, expand_word, expanded_alphabet};
pub use dnf::{distribute_dnf, guard_to_dnf, Conjunct};
pub use factor::{
    build_beta, build_beta_literal, build_delta, compute_overlaps, split_factor_guard,
    OverlapSets,
};
pub use ltl::{nfac_to_ltl, nfac_to_ltl_literal};
pub use reductions::{
    encode_tiling, fo2_threshold_to_between, Counter, ThresholdReduction, TilingInstance,
};
pub use unfold::{binv_to_inv, bth_to_binv, DEFAULT_CAP};

/// Rebuilds `node` over new children, keeping its operator and guard.
pub(crate) fn rebuild(node: &Tl, kids: &[Tl]) -> Tl {
    match node.kind() {
        TlKind::True | TlKind::False | TlKind::Letter(_) => node.clone(),
        TlKind::Not(_) => Tl::not(kids[0].clone()),
        TlKind::And(..) => Tl::and(kids[0].clone(), kids[1].clone()),
        TlKind::Or(..) => Tl::or(kids[0].clone(), kids[1].clone()),
        TlKind::Next(k, _) => Tl::next_n(*k, kids[0].clone()),
        TlKind::Prev(k, _) => Tl::prev_n(*k, kids[0].clone()),
        TlKind::Future(g, _) => Tl::intern(TlKind::Future(g.clone(), kids[0].clone())),
        TlKind::Past(g, _) => Tl::intern(TlKind::Past(g.clone(), kids[0].clone())),
        TlKind::Until(..) => Tl::until(kids[0].clone(), kids[1].clone()),
        TlKind::Since(..) => Tl::since(kids[0].clone(), kids[1].clone()),
    }
}

/// Bottom-up rewrite over the dag. `f` sees each node with its rewritten
/// children and returns a replacement, or `None` to keep the operator.
pub(crate) fn rewrite(phi: &Tl, mut f: impl FnMut(&Tl, &[Tl]) -> Option<Tl>) -> Tl {
    try_rewrite(phi, |n, k| Ok(f(n, k))).expect("infallible rewrite")
}

pub(crate) fn try_rewrite(
    phi: &Tl,
    mut f: impl FnMut(&Tl, &[Tl]) -> Result<Option<Tl>>,
) -> Result<Tl> {
    let mut memo: HashMap<u64, Tl> = HashMap::new();
    for node in phi.topological() {
        let kids: Vec<Tl> = node.children().iter().map(|c| memo[&c.id()].clone()).collect();
        let out = match f(&node, &kids)? {
            Some(t) => t,
            None => rebuild(&node, &kids),
        };
        memo.insert(node.id(), out);
    }
    Ok(memo[&phi.id()].clone())
}

/// Size statistics of one pipeline stage.
#[derive(Debug, Clone, Serialize)]
pub struct StageReport {
    pub name: &'static str,
    pub dag_size_in: usize,
    pub dag_size_out: usize,
    pub wall_ms: f64,
    #[serde(skip)]
    pub output: Tl,
}

/// Result of `pipeline_to_ltl`.
#[derive(Debug, Clone)]
pub struct Translation {
    pub input: Tl,
    pub output: Tl,
    pub stages: Vec<StageReport>,
}

/// Options of the translation pipeline.
#[derive(Debug, Clone, Copy)]
pub struct PipelineOptions {
    /// Largest threshold bound that is unfolded.
    pub cap: u64,
    /// Use the literal β and LTL constructions instead of the corrected ones.
    pub literal: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            cap: DEFAULT_CAP,
            literal: false,
        }
    }
}

/// Translates a guarded formula to LTL through the stages
/// dnf → unfold → split → beta → ltl, recording each intermediate formula.
pub fn pipeline_to_ltl(phi: &Tl, options: PipelineOptions) -> Result<Translation> {
    type Stage = Box<dyn Fn(&Tl) -> Result<Tl>>;
    let stages: Vec<(&'static str, Stage)> = vec![
        ("dnf", Box::new(|t: &Tl| Ok(distribute_dnf(t)))),
        ("unfold", Box::new(move |t: &Tl| unfold::unfold_stage(t, options.cap))),
        ("split", Box::new(|t: &Tl| factor::split_stage(t))),
        ("beta", Box::new(move |t: &Tl| factor::beta_stage(t, options.literal))),
        ("ltl", Box::new(move |t: &Tl| ltl::ltl_stage(t, options.literal))),
    ];
    let mut current = phi.clone();
    let mut reports = Vec::new();
    for (name, stage) in stages {
        let start = Instant::now();
        let next = stage(&current)?;
        reports.push(StageReport {
            name,
            dag_size_in: current.dag_size(),
            dag_size_out: next.dag_size(),
            wall_ms: start.elapsed().as_secs_f64() * 1000.0,
            output: next.clone(),
        });
        current = next;
    }
    if !current.is_ltl() {
        return Err(Error::Internal(format!("pipeline output is not LTL: {current}")));
    }
    Ok(Translation {
        input: phi.clone(),
        output: current,
        stages: reports,
    })
}
