//! Leaf-attachment construction of global lca-networks.
//!
//! Starting from a single vertex, a new leaf with parent set `W` is attached
//! whenever `L(W|v) = ∪_{w∈W} LCA({w, v})` has a unique minimal element for
//! every existing vertex `v` (rule O*). Graphs built this way are exactly
//! the networks with the global lca-property.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dag::{Dag, Poset, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::lca::{has_global_lca, Lca};

/// Origin label used when a trace does not name one.
pub const DEFAULT_ORIGIN: &str = "v0";

/// One leaf attachment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub leaf: String,
    pub parents: Vec<String>,
}

/// A start vertex and the leaf attachments that build a graph from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionTrace {
    pub origin: String,
    pub steps: Vec<Step>,
}

impl ConstructionTrace {
    pub fn new(origin: impl Into<String>) -> Self {
        ConstructionTrace { origin: origin.into(), steps: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl fmt::Display for ConstructionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "origin {}", self.origin)?;
        for s in &self.steps {
            writeln!(f, "leaf {} <- {{{}}}", s.leaf, s.parents.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for ConstructionTrace {
    type Err = Error;

    /// Reads `origin <label>` (optional, first) and `leaf <label> <- {p,...}`
    /// lines. Blank lines and `#` comments are skipped.
    fn from_str(s: &str) -> Result<Self> {
        let mut origin = None;
        let mut steps = Vec::new();
        for (no, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::MalformedInput(format!("line {}: {msg}", no + 1));
            if let Some(rest) = line.strip_prefix("origin ") {
                if origin.is_some() || !steps.is_empty() {
                    return Err(bad("origin must come first and only once"));
                }
                origin = Some(single_token(rest).ok_or_else(|| bad("expected one origin label"))?);
            } else if let Some(rest) = line.strip_prefix("leaf ") {
                let (leaf, parents) = rest.split_once("<-").ok_or_else(|| bad("expected `leaf <label> <- {...}`"))?;
                let leaf = single_token(leaf).ok_or_else(|| bad("expected one leaf label"))?;
                let inner = parents
                    .trim()
                    .strip_prefix('{')
                    .and_then(|p| p.strip_suffix('}'))
                    .ok_or_else(|| bad("parent set must be written as {p1,p2,...}"))?;
                let parents: Vec<String> =
                    inner.split(',').map(str::trim).filter(|p| !p.is_empty()).map(String::from).collect();
                if parents.is_empty() {
                    return Err(bad("parent set is empty"));
                }
                steps.push(Step { leaf, parents });
            } else {
                return Err(bad("expected `origin` or `leaf`"));
            }
        }
        Ok(ConstructionTrace { origin: origin.unwrap_or_else(|| DEFAULT_ORIGIN.to_string()), steps })
    }
}

fn single_token(s: &str) -> Option<String> {
    let mut it = s.split_whitespace();
    let t = it.next()?;
    it.next().is_none().then(|| t.to_string())
}

/// A failed replay, with the 1-based number of the offending step.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("step {step}: {source}")]
pub struct ReplayError {
    pub step: usize,
    #[source]
    pub source: Error,
}

/// `L(W|v)`: the union of `LCA({w, v})` over `w ∈ W`.
pub fn l_set(lca: &Lca<'_>, w: &VertexSet, v: Vertex) -> Result<VertexSet> {
    if w.is_empty() {
        return Err(Error::EmptyQuery);
    }
    let mut out = VertexSet::new();
    for u in w {
        out = out.union(&lca.lca_set(&VertexSet::pair(u, v))?);
    }
    Ok(out)
}

/// Minimal elements of `set` under `order`.
pub fn minimal(order: &Poset, set: &VertexSet) -> VertexSet {
    set.iter().filter(|&u| !set.iter().any(|z| order.lt(z, u))).collect()
}

/// First vertex `v` for which `L(W|v)` lacks a unique minimal element.
pub fn o_star_violation(lca: &Lca<'_>, w: &VertexSet) -> Result<Option<Vertex>> {
    for v in lca.graph().vertices() {
        if minimal(lca.order(), &l_set(lca, w, v)?).len() != 1 {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Rule (O*) for parent set `w`. With `validate`, first confirms that `g`
/// has the global lca-property.
pub fn check_o_star(g: &Dag, w: &VertexSet, validate: bool) -> Result<Option<Vertex>> {
    if validate && !has_global_lca(g) {
        return Err(Error::NotGlobalLca);
    }
    o_star_violation(&Lca::new(g), w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExtendMode {
    /// Enforce rule (O*).
    #[default]
    Checked,
    /// Plain leaf attachment.
    Unchecked,
}

/// Attaches a new leaf `label` with parent set `w`.
pub fn extend(g: &Dag, w: &VertexSet, label: &str, mode: ExtendMode) -> Result<Dag> {
    if w.is_empty() {
        return Err(Error::EmptyQuery);
    }
    if g.id(label).is_some() {
        return Err(Error::LabelCollision(label.to_string()));
    }
    if mode == ExtendMode::Checked {
        if let Some(v) = o_star_violation(&Lca::new(g), w)? {
            return Err(Error::OStarViolated { witness: g.label(v).to_string() });
        }
    }
    g.add_leaf(label, w)
}

/// Rebuilds a graph from a trace.
pub fn replay(trace: &ConstructionTrace, mode: ExtendMode) -> Result<Dag, ReplayError> {
    let mut g = Dag::k1(&trace.origin).map_err(|source| ReplayError { step: 0, source })?;
    for (i, step) in trace.steps.iter().enumerate() {
        let err = |source| ReplayError { step: i + 1, source };
        let w = g.vertex_set(&step.parents).map_err(err)?;
        g = extend(&g, &w, &step.leaf, mode).map_err(err)?;
    }
    Ok(g)
}

/// Peels leaves off `g` and replays them, checking (O*) at every step.
///
/// Succeeds exactly on networks with the global lca-property.
pub fn deconstruct(g: &Dag) -> Result<ConstructionTrace> {
    if !g.is_network() {
        return Err(Error::NotHolju { prefix_size: g.n(), reason: "graph has more than one root".into() });
    }
    let mut peeled = Vec::with_capacity(g.n() - 1);
    let mut cur = g.clone();
    while cur.n() > 1 {
        let x = *cur.topological_order().last().expect("non-empty");
        peeled.push(Step {
            leaf: cur.label(x).to_string(),
            parents: cur.labels_of(&cur.parents(x).iter().copied().collect()),
        });
        cur = cur.remove_vertex(x)?;
    }
    let trace = ConstructionTrace { origin: cur.label(0).to_string(), steps: peeled.into_iter().rev().collect() };

    let mut built = Dag::k1(&trace.origin)?;
    for step in &trace.steps {
        let w = built.vertex_set(&step.parents)?;
        if let Some(v) = o_star_violation(&Lca::new(&built), &w)? {
            return Err(Error::NotHolju {
                prefix_size: built.n(),
                reason: format!(
                    "(O*) fails for leaf {} with W = {{{}}} at {}",
                    step.leaf,
                    step.parents.join(","),
                    built.label(v)
                ),
            });
        }
        built = built.add_leaf(&step.leaf, &w)?;
    }
    debug_assert!(built.same_labeled(g));
    Ok(trace)
}

/// Parameters of [`random_global_lca`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    /// Upper bound on `|W|`.
    pub max_parents: usize,
    /// Rejected samples per step before falling back to a single parent.
    pub retry_budget: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { max_parents: 3, retry_budget: 32 }
    }
}

/// Grows a random global lca-network on `n` vertices labeled `v0, v1, ...`.
///
/// `|W|` is geometric with ratio 1/2, capped by `max_parents`; parents are
/// drawn uniformly without replacement. Deterministic in all arguments.
pub fn random_global_lca(n: usize, seed: u64, params: GenParams) -> Result<(Dag, ConstructionTrace)> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Dag::k1(DEFAULT_ORIGIN)?;
    let mut trace = ConstructionTrace::new(DEFAULT_ORIGIN);
    for i in 1..n {
        let cap = params.max_parents.max(1).min(g.n());
        let lca = Lca::new(&g);
        let mut chosen = None;
        for _ in 0..params.retry_budget {
            let mut k = 1;
            while k < cap && rng.gen_bool(0.5) {
                k += 1;
            }
            let w: VertexSet = sample(&mut rng, g.n(), k).into_iter().collect();
            if o_star_violation(&lca, &w)?.is_none() {
                chosen = Some(w);
                break;
            }
        }
        let w = chosen.unwrap_or_else(|| VertexSet::singleton(rng.gen_range(0..g.n())));
        let label = format!("v{i}");
        trace.steps.push(Step { leaf: label.clone(), parents: g.labels_of(&w) });
        g = g.add_leaf(&label, &w)?;
    }
    Ok((g, trace))
}
