//! Labeled DAGs, vertex sets and the reachability order.
//!
//! Vertices are dense ids `0..n` assigned in first-appearance order. Labels
//! only matter at the boundary (parsing, printing, comparing graphs that
//! were built independently).

use std::collections::{HashMap, HashSet};
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Dense vertex id within one [`Dag`].
pub type Vertex = usize;

/// A sorted, duplicate-free set of vertex ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn singleton(v: Vertex) -> Self {
        Self(vec![v])
    }

    pub fn pair(u: Vertex, v: Vertex) -> Self {
        [u, v].into_iter().collect()
    }

    pub fn from_bits(bits: &FixedBitSet) -> Self {
        Self(bits.ones().collect())
    }

    pub fn to_bits(&self, n: usize) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(n);
        for &v in &self.0 {
            bits.insert(v);
        }
        bits
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn first(&self) -> Option<Vertex> {
        self.0.first().copied()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.len() <= other.len() && self.iter().all(|v| other.contains(v))
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        Self(self.iter().filter(|&v| other.contains(v)).collect())
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.iter().chain(other.iter()).collect()
    }

    pub fn insert(&mut self, v: Vertex) {
        if let Err(pos) = self.0.binary_search(&v) {
            self.0.insert(pos, v);
        }
    }

    pub fn remove(&mut self, v: Vertex) -> bool {
        match self.0.binary_search(&v) {
            Ok(pos) => {
                self.0.remove(pos);
                true
            }
            Err(_) => false,
        }
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        let mut v: Vec<Vertex> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = Vertex;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, Vertex>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

fn check_label(label: &str) -> Result<()> {
    if label.is_empty() || label.chars().any(char::is_whitespace) {
        return Err(Error::InvalidLabel(label.to_string()));
    }
    Ok(())
}

/// Incremental construction of a [`Dag`] that keeps first-appearance ids.
#[derive(Debug, Default)]
pub struct DagBuilder {
    labels: Vec<String>,
    index: HashMap<String, Vertex>,
    edges: Vec<(Vertex, Vertex)>,
    seen: HashSet<(Vertex, Vertex)>,
}

impl DagBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id for `label`, creating the vertex if needed.
    pub fn vertex(&mut self, label: &str) -> Result<Vertex> {
        if let Some(&v) = self.index.get(label) {
            return Ok(v);
        }
        check_label(label)?;
        let v = self.labels.len();
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), v);
        Ok(v)
    }

    /// Adds a vertex that must not exist yet.
    pub fn new_vertex(&mut self, label: &str) -> Result<Vertex> {
        if self.index.contains_key(label) {
            return Err(Error::DuplicateLabel(label.to_string()));
        }
        self.vertex(label)
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }

    /// Adds an edge; self-loops and repeated edges are rejected at once.
    pub fn edge(&mut self, parent: &str, child: &str) -> Result<()> {
        if parent == child {
            return Err(Error::SelfLoop(parent.to_string()));
        }
        let u = self.vertex(parent)?;
        let v = self.vertex(child)?;
        if !self.seen.insert((u, v)) {
            return Err(Error::DuplicateEdge(parent.to_string(), child.to_string()));
        }
        self.edges.push((u, v));
        Ok(())
    }

    pub fn build(self) -> Result<Dag> {
        Dag::from_parts(self.labels, self.edges)
    }
}

/// A finite directed acyclic graph with distinct string labels.
///
/// Immutable after construction. Adjacency lists are sorted by id.
#[derive(Debug, Clone)]
pub struct Dag {
    labels: Vec<String>,
    index: HashMap<String, Vertex>,
    children: Vec<Vec<Vertex>>,
    parents: Vec<Vec<Vertex>>,
    topo: Vec<Vertex>,
}

impl PartialEq for Dag {
    /// Structural equality: same labels under the same ids and same edges.
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.children == other.children
    }
}

impl Eq for Dag {}

impl Dag {
    /// Builds a DAG from labeled edges plus labels of isolated vertices.
    ///
    /// Ids follow first appearance, edges before isolated labels.
    pub fn from_edges<S: AsRef<str>>(edges: &[(S, S)], isolated: &[S]) -> Result<Dag> {
        let mut b = DagBuilder::new();
        for (u, v) in edges {
            b.edge(u.as_ref(), v.as_ref())?;
        }
        for label in isolated {
            b.new_vertex(label.as_ref())?;
        }
        b.build()
    }

    /// Builds a DAG from a label table and id edges, validating everything.
    pub fn from_parts(labels: Vec<String>, edges: Vec<(Vertex, Vertex)>) -> Result<Dag> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut index = HashMap::with_capacity(n);
        for (v, label) in labels.iter().enumerate() {
            check_label(label)?;
            if index.insert(label.clone(), v).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        let mut children = vec![Vec::new(); n];
        let mut parents = vec![Vec::new(); n];
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::UnknownVertex(format!("#{}", u.max(v))));
            }
            if u == v {
                return Err(Error::SelfLoop(labels[u].clone()));
            }
            children[u].push(v);
            parents[v].push(u);
        }
        for (u, cs) in children.iter_mut().enumerate() {
            cs.sort_unstable();
            if let Some(w) = cs.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateEdge(labels[u].clone(), labels[w[0]].clone()));
            }
        }
        for ps in &mut parents {
            ps.sort_unstable();
        }
        let topo = topological_order(&children, &parents)
            .map_err(|cycle| Error::CycleDetected(cycle.iter().map(|&v| labels[v].clone()).collect()))?;
        Ok(Dag { labels, index, children, parents, topo })
    }

    /// The single-vertex graph.
    pub fn k1(label: &str) -> Result<Dag> {
        Dag::from_parts(vec![label.to_string()], Vec::new())
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.children.iter().map(Vec::len).sum()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n()
    }

    pub fn label(&self, v: Vertex) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn id(&self, label: &str) -> Option<Vertex> {
        self.index.get(label).copied()
    }

    /// Looks up a label, failing with [`Error::UnknownVertex`].
    pub fn vertex(&self, label: &str) -> Result<Vertex> {
        self.id(label).ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn vertex_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<VertexSet> {
        labels.iter().map(|l| self.vertex(l.as_ref())).collect()
    }

    pub fn labels_of(&self, set: &VertexSet) -> Vec<String> {
        set.iter().map(|v| self.labels[v].clone()).collect()
    }

    pub fn children(&self, v: Vertex) -> &[Vertex] {
        &self.children[v]
    }

    pub fn parents(&self, v: Vertex) -> &[Vertex] {
        &self.parents[v]
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        self.parents[v].len()
    }

    pub fn out_degree(&self, v: Vertex) -> usize {
        self.children[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.children[u].binary_search(&v).is_ok()
    }

    /// All edges `(parent, child)` in lexicographic id order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.children.iter().enumerate().flat_map(|(u, cs)| cs.iter().map(move |&v| (u, v)))
    }

    /// A topological order: parents precede children.
    pub fn topological_order(&self) -> &[Vertex] {
        &self.topo
    }

    pub fn is_leaf(&self, v: Vertex) -> bool {
        self.children[v].is_empty()
    }

    pub fn leaves(&self) -> VertexSet {
        self.vertices().filter(|&v| self.is_leaf(v)).collect()
    }

    pub fn roots(&self) -> VertexSet {
        self.vertices().filter(|&v| self.parents[v].is_empty()).collect()
    }

    pub fn inner(&self) -> VertexSet {
        self.vertices().filter(|&v| !self.is_leaf(v)).collect()
    }

    pub fn is_network(&self) -> bool {
        self.roots().len() == 1
    }

    /// The unique root of a network.
    pub fn root(&self) -> Option<Vertex> {
        let roots = self.roots();
        (roots.len() == 1).then(|| roots.as_slice()[0])
    }

    /// Leaves of in-degree one.
    pub fn is_tree_leaf(&self, v: Vertex) -> bool {
        self.is_leaf(v) && self.parents[v].len() == 1
    }

    pub fn tree_leaf_children(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.children[v].iter().copied().filter(|&c| self.is_tree_leaf(c))
    }

    /// First inner vertex without a tree-leaf child, if any.
    pub fn tree_leaf_child_violation(&self) -> Option<Vertex> {
        self.vertices().find(|&v| !self.is_leaf(v) && self.tree_leaf_children(v).next().is_none())
    }

    pub fn is_tree_leaf_child(&self) -> bool {
        self.tree_leaf_child_violation().is_none()
    }

    /// The DAG with every edge flipped; ids and labels are kept.
    pub fn reverse(&self) -> Dag {
        Dag {
            labels: self.labels.clone(),
            index: self.index.clone(),
            children: self.parents.clone(),
            parents: self.children.clone(),
            topo: self.topo.iter().rev().copied().collect(),
        }
    }

    /// The subgraph induced by `keep`; ids are renumbered in increasing order.
    pub fn induced(&self, keep: &VertexSet) -> Result<Dag> {
        let mut new_id = vec![usize::MAX; self.n()];
        let mut labels = Vec::with_capacity(keep.len());
        for (i, v) in keep.iter().enumerate() {
            new_id[v] = i;
            labels.push(self.labels[v].clone());
        }
        let edges = self
            .edges()
            .filter(|&(u, v)| keep.contains(u) && keep.contains(v))
            .map(|(u, v)| (new_id[u], new_id[v]))
            .collect();
        Dag::from_parts(labels, edges)
    }

    /// `G - v`.
    pub fn remove_vertex(&self, v: Vertex) -> Result<Dag> {
        if self.n() == 1 {
            return Err(Error::LastVertex);
        }
        let keep: VertexSet = self.vertices().filter(|&u| u != v).collect();
        self.induced(&keep)
    }

    /// Removes several vertices at once.
    pub fn remove_vertices(&self, drop: &VertexSet) -> Result<Dag> {
        let keep: VertexSet = self.vertices().filter(|&u| !drop.contains(u)).collect();
        if keep.is_empty() {
            return Err(Error::LastVertex);
        }
        self.induced(&keep)
    }

    /// Removes the given edges, keeping all vertices and ids.
    pub fn without_edges(&self, drop: &[(Vertex, Vertex)]) -> Dag {
        let edges = self.edges().filter(|e| !drop.contains(e)).collect();
        Dag::from_parts(self.labels.clone(), edges).expect("edge removal keeps a DAG valid")
    }

    /// Appends a new leaf with parent set `parents`. The new vertex gets id `n`.
    pub fn add_leaf(&self, label: &str, parents: &VertexSet) -> Result<Dag> {
        if self.index.contains_key(label) {
            return Err(Error::LabelCollision(label.to_string()));
        }
        let x = self.n();
        let mut labels = self.labels.clone();
        labels.push(label.to_string());
        let mut edges: Vec<_> = self.edges().collect();
        for p in parents {
            if p >= x {
                return Err(Error::UnknownVertex(format!("#{p}")));
            }
            edges.push((p, x));
        }
        Dag::from_parts(labels, edges)
    }

    /// Equality up to id assignment: same labels and same labeled edges.
    pub fn same_labeled(&self, other: &Dag) -> bool {
        if self.n() != other.n() || self.edge_count() != other.edge_count() {
            return false;
        }
        let Some(map) = self.labels.iter().map(|l| other.id(l)).collect::<Option<Vec<_>>>() else {
            return false;
        };
        self.edges().all(|(u, v)| other.has_edge(map[u], map[v]))
    }

    /// The reachability order `u ⪯ v` iff there is a directed path from `v` to `u`.
    pub fn reachability(&self) -> Poset {
        let n = self.n();
        let mut below = vec![FixedBitSet::with_capacity(n); n];
        for &v in self.topo.iter().rev() {
            let mut row = FixedBitSet::with_capacity(n);
            row.insert(v);
            for &c in &self.children[v] {
                row.union_with(&below[c]);
            }
            below[v] = row;
        }
        Poset::from_below(below)
    }
}

/// Kahn's algorithm; on failure returns one directed cycle.
fn topological_order(
    children: &[Vec<Vertex>],
    parents: &[Vec<Vertex>],
) -> std::result::Result<Vec<Vertex>, Vec<Vertex>> {
    let n = children.len();
    let mut indeg: Vec<usize> = parents.iter().map(Vec::len).collect();
    let mut ready: Vec<Vertex> = (0..n).rev().filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop() {
        order.push(v);
        for &c in children[v].iter().rev() {
            indeg[c] -= 1;
            if indeg[c] == 0 {
                ready.push(c);
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    // Every remaining vertex has a remaining parent, so walking parents
    // backwards must revisit a vertex.
    let start = (0..n).find(|&v| indeg[v] > 0).expect("unprocessed vertex");
    let mut pos = vec![usize::MAX; n];
    let mut walk = Vec::new();
    let mut v = start;
    while pos[v] == usize::MAX {
        pos[v] = walk.len();
        walk.push(v);
        v = *parents[v].iter().find(|&&p| indeg[p] > 0).expect("remaining parent");
    }
    let mut cycle: Vec<Vertex> = walk[pos[v]..].to_vec();
    cycle.reverse();
    cycle.push(cycle[0]);
    Err(cycle)
}

/// A finite partial order stored as dense down-sets and up-sets.
///
/// `leq(u, v)` reads "u is below v". For a DAG, the down-set of `v` is its
/// descendant set and the up-set is its ancestor set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    below: Vec<FixedBitSet>,
    above: Vec<FixedBitSet>,
}

impl Poset {
    fn from_below(below: Vec<FixedBitSet>) -> Poset {
        let n = below.len();
        let mut above = vec![FixedBitSet::with_capacity(n); n];
        for (v, row) in below.iter().enumerate() {
            for u in row.ones() {
                above[u].insert(v);
            }
        }
        Poset { below, above }
    }

    /// Builds a relation from a predicate. No order axioms are enforced;
    /// see [`Poset::partial_order_violation`].
    pub fn from_fn(n: usize, leq: impl Fn(usize, usize) -> bool) -> Poset {
        let below = (0..n)
            .map(|v| {
                let mut row = FixedBitSet::with_capacity(n);
                for u in 0..n {
                    if leq(u, v) {
                        row.insert(u);
                    }
                }
                row
            })
            .collect();
        Poset::from_below(below)
    }

    pub fn n(&self) -> usize {
        self.below.len()
    }

    pub fn leq(&self, u: usize, v: usize) -> bool {
        self.below[v].contains(u)
    }

    pub fn lt(&self, u: usize, v: usize) -> bool {
        u != v && self.leq(u, v)
    }

    pub fn comparable(&self, u: usize, v: usize) -> bool {
        self.leq(u, v) || self.leq(v, u)
    }

    /// Everything below `v`, including `v`.
    pub fn down_set(&self, v: usize) -> &FixedBitSet {
        &self.below[v]
    }

    /// Everything above `v`, including `v`.
    pub fn up_set(&self, v: usize) -> &FixedBitSet {
        &self.above[v]
    }

    /// The transposed (dual) order.
    pub fn dual(&self) -> Poset {
        Poset { below: self.above.clone(), above: self.below.clone() }
    }

    /// Returns a description of the first violated axiom, if any.
    pub fn partial_order_violation(&self) -> Option<String> {
        let n = self.n();
        for v in 0..n {
            if !self.leq(v, v) {
                return Some(format!("not reflexive at {v}"));
            }
        }
        for u in 0..n {
            for v in 0..n {
                if u != v && self.leq(u, v) && self.leq(v, u) {
                    return Some(format!("not antisymmetric at ({u},{v})"));
                }
                if self.leq(u, v) && !self.below[u].is_subset(&self.below[v]) {
                    return Some(format!("not transitive at ({u},{v})"));
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Dag {
        Dag::from_edges(&[("a", "b"), ("b", "c")], &[]).unwrap()
    }

    fn k22() -> Dag {
        Dag::from_edges(&[("r1", "l1"), ("r1", "l2"), ("r2", "l1"), ("r2", "l2")], &[]).unwrap()
    }

    #[test]
    fn build_assigns_first_appearance_ids() {
        let g = path3();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.labels(), ["a", "b", "c"]);
        let g = Dag::from_edges(&[("a", "b")], &["z"]).unwrap();
        assert_eq!(g.id("z"), Some(2));
        assert_eq!(g.out_degree(2) + g.in_degree(2), 0);
    }

    #[test]
    fn build_rejects_invalid_input() {
        assert!(matches!(Dag::from_edges(&[("a", "b"), ("b", "a")], &[]), Err(Error::CycleDetected(_))));
        assert_eq!(Dag::from_edges(&[("a", "a")], &[]), Err(Error::SelfLoop("a".into())));
        assert_eq!(Dag::from_edges(&[("a", "b"), ("a", "b")], &[]), Err(Error::DuplicateEdge("a".into(), "b".into())));
        assert_eq!(Dag::from_edges(&[("a", "b")], &["a"]), Err(Error::DuplicateLabel("a".into())));
        assert!(matches!(Dag::from_edges(&[("a b", "c")], &[]), Err(Error::InvalidLabel(_))));
        assert_eq!(Dag::from_edges::<&str>(&[], &[]), Err(Error::EmptyGraph));
    }

    #[test]
    fn cycle_witness_is_a_cycle() {
        let err = Dag::from_edges(&[("s", "a"), ("a", "b"), ("b", "c"), ("c", "a")], &[]).unwrap_err();
        let Error::CycleDetected(cycle) = err else { panic!() };
        assert_eq!(cycle.first(), cycle.last());
        assert_eq!(cycle.len(), 4);
        assert!(!cycle.contains(&"s".to_string()));
    }

    #[test]
    fn reachability_of_fixtures() {
        let g = path3();
        let p = g.reachability();
        let [a, b, c] = [0, 1, 2];
        assert!(p.lt(c, b) && p.lt(b, a) && p.lt(c, a));
        assert!(!p.leq(a, c));

        let g = k22();
        let p = g.reachability();
        let v = |s| g.id(s).unwrap();
        for l in ["l1", "l2"] {
            for r in ["r1", "r2"] {
                assert!(p.lt(v(l), v(r)));
            }
        }
        assert!(!p.comparable(v("r1"), v("r2")));
        assert!(!p.comparable(v("l1"), v("l2")));

        let k1 = Dag::k1("v").unwrap();
        let p = k1.reachability();
        assert!(p.leq(0, 0));
        assert!(p.partial_order_violation().is_none());
    }

    #[test]
    fn leaves_roots_inner() {
        let g = path3();
        assert_eq!(g.leaves(), VertexSet::singleton(2));
        assert_eq!(g.roots(), VertexSet::singleton(0));
        assert_eq!(g.inner(), VertexSet::pair(0, 1));
        assert!(g.is_network());

        let g = k22();
        assert_eq!(g.labels_of(&g.leaves()), ["l1", "l2"]);
        assert_eq!(g.labels_of(&g.roots()), ["r1", "r2"]);
        assert!(!g.is_network());

        let k1 = Dag::k1("v").unwrap();
        assert_eq!(k1.leaves(), k1.roots());
        assert!(k1.is_network());
    }

    #[test]
    fn crossed_is_a_network() {
        let g =
            Dag::from_edges(&[("a", "b"), ("a", "c"), ("b", "x"), ("b", "y"), ("c", "x"), ("c", "y")], &[]).unwrap();
        assert!(g.is_network());
        assert_eq!(g.in_degree(g.id("x").unwrap()), 2);
    }

    #[test]
    fn reverse_and_remove() {
        let g = path3();
        let r = g.reverse();
        assert!(r.has_edge(2, 1) && r.has_edge(1, 0));
        assert_eq!(r.reverse(), g);
        assert_eq!(k22().reverse().labels_of(&k22().reverse().roots()), ["l1", "l2"]);

        let h = g.remove_vertex(1).unwrap();
        assert_eq!(h.n(), 2);
        assert_eq!(h.edge_count(), 0);
        assert_eq!(h.labels(), ["a", "c"]);
        assert_eq!(Dag::k1("v").unwrap().remove_vertex(0), Err(Error::LastVertex));
    }

    #[test]
    fn same_labeled_ignores_ids() {
        let g = Dag::from_edges(&[("a", "b"), ("a", "c")], &[]).unwrap();
        let h = Dag::from_edges(&[("a", "c"), ("a", "b")], &[]).unwrap();
        assert_ne!(g, h);
        assert!(g.same_labeled(&h));
        let k = Dag::from_edges(&[("a", "c"), ("b", "c")], &[]).unwrap();
        assert!(!g.same_labeled(&k));
    }

    #[test]
    fn vertex_set_ops() {
        let a: VertexSet = [3, 1, 2, 3].into_iter().collect();
        assert_eq!(a.as_slice(), [1, 2, 3]);
        let b: VertexSet = [2, 5].into_iter().collect();
        assert_eq!(a.intersection(&b), VertexSet::singleton(2));
        assert_eq!(a.union(&b).len(), 4);
        assert!(VertexSet::singleton(2).is_subset(&a));
        assert_eq!(a.to_string(), "{1,2,3}");
    }
}
