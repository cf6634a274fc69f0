//! Graph transformations: shortcut removal, leaf extension, lopping,
//! Hasse diagrams and regularity.

use crate::dag::{Dag, Poset, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::setsys::{clusters, SetSystem};

/// Suffix marking the leaves added by [`lxt`].
pub const SYNTHETIC_SUFFIX: &str = "__lx";

/// Label of the synthetic leaf attached to `host`.
pub fn synthetic_label(host: &str) -> String {
    format!("{host}{SYNTHETIC_SUFFIX}")
}

/// Host label of a synthetic leaf label, if it is one.
pub fn synthetic_host(label: &str) -> Option<&str> {
    label.strip_suffix(SYNTHETIC_SUFFIX).filter(|h| !h.is_empty())
}

/// Edges `(u, w)` bypassed by a longer directed path.
pub fn shortcuts(g: &Dag) -> Vec<(Vertex, Vertex)> {
    let p = g.reachability();
    g.edges().filter(|&(u, w)| g.children(u).iter().any(|&c| c != w && p.leq(w, c))).collect()
}

pub fn is_shortcut_free(g: &Dag) -> bool {
    shortcuts(g).is_empty()
}

/// `g` without its shortcuts. Ids are preserved.
pub fn sf(g: &Dag) -> Dag {
    let cut = shortcuts(g);
    if cut.is_empty() {
        return g.clone();
    }
    g.without_edges(&cut)
}

/// Adds a leaf `<v>__lx` below every inner vertex `v`.
///
/// Original ids are kept; the new leaves get ids `n..` in increasing order of
/// their hosts.
pub fn lxt(g: &Dag) -> Result<Dag> {
    let inner = g.inner();
    let mut labels = g.labels().to_vec();
    let mut edges: Vec<(Vertex, Vertex)> = g.edges().collect();
    for v in &inner {
        let label = synthetic_label(g.label(v));
        if g.id(&label).is_some() {
            return Err(Error::LabelCollision(label));
        }
        edges.push((v, labels.len()));
        labels.push(label);
    }
    Dag::from_parts(labels, edges)
}

/// The ids that [`lxt`] added to an extension of a graph with `n` vertices.
pub fn lxt_synthetic(ext: &Dag, n: usize) -> VertexSet {
    (n..ext.n()).collect()
}

/// Which tree-leaf child [`lop`] removes below each inner vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LopPolicy {
    /// Synthetic (`__lx`) leaves first, then the lowest id.
    #[default]
    SyntheticFirst,
    LowestId,
    HighestId,
}

/// Removes exactly one tree-leaf child of every inner vertex.
pub fn lop(g: &Dag, policy: LopPolicy) -> Result<Dag> {
    if let Some(v) = g.tree_leaf_child_violation() {
        return Err(Error::NotTreeLeafChild(g.label(v).to_string()));
    }
    let drop: VertexSet = g
        .inner()
        .iter()
        .map(|v| {
            let mut kids = g.tree_leaf_children(v);
            match policy {
                LopPolicy::SyntheticFirst => {
                    let kids: Vec<Vertex> = kids.collect();
                    kids.iter().copied().find(|&c| synthetic_host(g.label(c)).is_some()).unwrap_or(kids[0])
                }
                LopPolicy::LowestId => kids.next().expect("checked above"),
                LopPolicy::HighestId => kids.last().expect("checked above"),
            }
        })
        .collect();
    g.remove_vertices(&drop)
}

/// Label used for a set-valued Hasse vertex.
pub fn set_label(s: &SetSystem, set: &VertexSet) -> String {
    format!("{{{}}}", s.labels_of(set).join(","))
}

/// Hasse diagram of `(s, ⊆)`: an edge `A -> B` iff `B ⊊ A` with nothing in
/// between. Vertex `i` is member `i`, labeled by its elements.
pub fn hasse(s: &SetSystem) -> Dag {
    let labels = s.members().iter().map(|m| set_label(s, m)).collect();
    hasse_with_labels(s, labels).expect("set labels are distinct")
}

/// As [`hasse`], with caller-chosen vertex labels (one per member).
pub fn hasse_with_labels(s: &SetSystem, labels: Vec<String>) -> Result<Dag> {
    let m = s.members();
    let strict = |a: usize, b: usize| a != b && m[b].is_subset(&m[a]);
    hasse_of(m.len(), strict, labels)
}

/// Hasse diagram of a poset: an edge `v -> u` iff `u` is covered by `v`.
pub fn hasse_poset(p: &Poset, labels: Vec<String>) -> Result<Dag> {
    hasse_of(p.n(), |v, u| p.lt(u, v), labels)
}

/// Covers of the strict relation `below(a, b)` ("b is strictly below a").
fn hasse_of(n: usize, below: impl Fn(usize, usize) -> bool, labels: Vec<String>) -> Result<Dag> {
    if labels.len() != n {
        return Err(Error::MalformedInput(format!("{} labels for {n} elements", labels.len())));
    }
    let mut edges = Vec::new();
    for a in 0..n {
        for b in (0..n).filter(|&b| below(a, b)) {
            if !(0..n).any(|c| below(a, c) && below(c, b)) {
                edges.push((a, b));
            }
        }
    }
    Dag::from_parts(labels, edges)
}

/// Whether `v ↦ C(v)` is an isomorphism onto the Hasse diagram of the clusters.
pub fn is_regular(g: &Dag) -> bool {
    let c = clusters(g);
    let map: Vec<usize> = g.vertices().map(|v| c.witness(v).expect("per-vertex system")).collect();
    let mut seen = vec![false; c.len()];
    for &i in &map {
        if std::mem::replace(&mut seen[i], true) {
            return false;
        }
    }
    let h = hasse(&c);
    h.edge_count() == g.edge_count() && g.edges().all(|(u, v)| h.has_edge(map[u], map[v]))
}
