//! Common ancestors, LCA sets and recognition of the global lca-property.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::dag::{Dag, Poset, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::setsys::{clusters, descendants, next_combination, DEFAULT_MAX_SUBSETS};
use crate::transform::lxt;

/// LCA queries against a fixed DAG. Holds the reachability order.
#[derive(Debug, Clone)]
pub struct Lca<'g> {
    g: &'g Dag,
    order: Poset,
}

impl<'g> Lca<'g> {
    pub fn new(g: &'g Dag) -> Self {
        Lca { g, order: g.reachability() }
    }

    pub fn graph(&self) -> &'g Dag {
        self.g
    }

    pub fn order(&self) -> &Poset {
        &self.order
    }

    fn anc_bits(&self, a: &VertexSet) -> Result<FixedBitSet> {
        let mut it = a.iter();
        let first = it.next().ok_or(Error::EmptyQuery)?;
        let mut bits = self.order.up_set(first).clone();
        for x in it {
            bits.intersect_with(self.order.up_set(x));
        }
        Ok(bits)
    }

    /// Common ancestors of `a`, members of `a` included where they qualify.
    pub fn anc(&self, a: &VertexSet) -> Result<VertexSet> {
        Ok(VertexSet::from_bits(&self.anc_bits(a)?))
    }

    /// Minimal common ancestors of `a`.
    pub fn lca_set(&self, a: &VertexSet) -> Result<VertexSet> {
        let anc = self.anc_bits(a)?;
        Ok(anc
            .ones()
            .filter(|&v| {
                // v is minimal iff no other common ancestor lies below it.
                let mut below = self.order.down_set(v).clone();
                below.intersect_with(&anc);
                below.count_ones(..) == 1
            })
            .collect())
    }

    /// The unique LCA of `a`.
    pub fn lca(&self, a: &VertexSet) -> Result<Vertex> {
        let set = self.lca_set(a)?;
        match set.len() {
            0 => Err(Error::NoLca),
            1 => Ok(set.as_slice()[0]),
            _ => Err(Error::AmbiguousLca(set)),
        }
    }

    /// First pair `u < v` (by id) drawn from `ground` without a unique LCA.
    pub fn pair_violation(&self, ground: &VertexSet) -> Option<Query> {
        let g = ground.as_slice();
        for (i, &u) in g.iter().enumerate() {
            for &v in &g[i + 1..] {
                let query = VertexSet::pair(u, v);
                let lca = self.lca_set(&query).expect("non-empty query");
                if lca.len() != 1 {
                    return Some(Query { query, lca });
                }
            }
        }
        None
    }

    /// First non-empty subset of `ground` (by size, then lexicographically)
    /// without a unique LCA.
    pub fn subset_violation(&self, ground: &VertexSet, max_subsets: usize) -> Result<Option<Query>> {
        let m = ground.len();
        let total = if m >= usize::BITS as usize { usize::MAX } else { (1usize << m) - 1 };
        if total > max_subsets {
            return Err(Error::SizeLimitExceeded { size: total, cap: max_subsets });
        }
        let g = ground.as_slice();
        for size in 1..=m {
            let mut idx: Vec<usize> = (0..size).collect();
            loop {
                let query: VertexSet = idx.iter().map(|&i| g[i]).collect();
                let lca = self.lca_set(&query)?;
                if lca.len() != 1 {
                    return Ok(Some(Query { query, lca }));
                }
                if !next_combination(&mut idx, m) {
                    break;
                }
            }
        }
        Ok(None)
    }
}

/// A query set together with its (non-singleton) LCA set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub query: VertexSet,
    pub lca: VertexSet,
}

pub fn anc(g: &Dag, a: &VertexSet) -> Result<VertexSet> {
    Lca::new(g).anc(a)
}

pub fn lca_set(g: &Dag, a: &VertexSet) -> Result<VertexSet> {
    Lca::new(g).lca_set(a)
}

pub fn lca(g: &Dag, a: &VertexSet) -> Result<Vertex> {
    Lca::new(g).lca(a)
}

/// The four recognition routes for the global lca-property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Route {
    PairwiseVertex,
    LxtLeafPairs,
    JoinSemilattice,
    DescendantClosed,
}

impl Route {
    pub const ALL: [Route; 4] =
        [Route::PairwiseVertex, Route::LxtLeafPairs, Route::JoinSemilattice, Route::DescendantClosed];

    pub fn name(self) -> &'static str {
        match self {
            Route::PairwiseVertex => "pairwise",
            Route::LxtLeafPairs => "lxt",
            Route::JoinSemilattice => "join-semilattice",
            Route::DescendantClosed => "descendants",
        }
    }

    pub fn from_name(name: &str) -> Option<Route> {
        Route::ALL.into_iter().find(|r| r.name() == name)
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Why a graph fails the global lca-property. Ids refer to the input graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A query set whose LCA set is not a singleton.
    Query(Query),
    /// Two descendant sets whose non-empty intersection is no descendant set.
    DescendantPair { first: Vertex, second: Vertex, meet: VertexSet },
    /// The graph is not a network.
    MultipleRoots(VertexSet),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalLcaReport {
    pub holds: bool,
    pub route: Route,
    pub witness: Option<Witness>,
}

impl GlobalLcaReport {
    fn new(route: Route, witness: Option<Witness>) -> Self {
        GlobalLcaReport { holds: witness.is_none(), route, witness }
    }
}

/// Checks `|LCA({u, v})| = 1` for all vertex pairs.
pub fn has_global_lca_pairwise(g: &Dag) -> GlobalLcaReport {
    let lca = Lca::new(g);
    let all = g.vertices().collect();
    GlobalLcaReport::new(Route::PairwiseVertex, lca.pair_violation(&all).map(Witness::Query))
}

/// Checks the pairwise-lca-property of `lxt(g)` on its leaves. The witness
/// is translated back to `g`: a synthetic leaf stands for its host.
pub fn has_global_lca_via_lxt(g: &Dag) -> GlobalLcaReport {
    let Ok(ext) = lxt(g) else {
        // Only a label clash can stop the extension; fall back to plain labels.
        return has_global_lca_via_lxt(&relabeled(g));
    };
    let n = g.n();
    let inner = g.inner();
    let host = |x: Vertex| if x < n { x } else { inner.as_slice()[x - n] };
    let lca = Lca::new(&ext);
    let witness = lca.pair_violation(&ext.leaves()).map(|q| {
        let query = q.query.iter().map(host).collect();
        Witness::Query(Query { query, lca: q.lca })
    });
    GlobalLcaReport::new(Route::LxtLeafPairs, witness)
}

fn relabeled(g: &Dag) -> Dag {
    let labels = g.vertices().map(|v| format!("v{v}")).collect();
    Dag::from_parts(labels, g.edges().collect()).expect("fresh labels")
}

/// Checks that `(V, ⪯)` is a join-semilattice.
pub fn has_global_lca_via_join(g: &Dag) -> GlobalLcaReport {
    let witness = join_violation(&g.reachability())
        .map(|(x, y, lca)| Witness::Query(Query { query: VertexSet::pair(x, y), lca }));
    GlobalLcaReport::new(Route::JoinSemilattice, witness)
}

/// Checks that the descendant system of a network is closed.
pub fn has_global_lca_via_descendants(g: &Dag) -> GlobalLcaReport {
    let roots = g.roots();
    if roots.len() != 1 {
        return GlobalLcaReport::new(Route::DescendantClosed, Some(Witness::MultipleRoots(roots)));
    }
    let d = descendants(g);
    let witness = d.closed_violation().map(|(i, j)| {
        let owner = |k: usize| g.vertices().find(|&v| d.witness(v) == Some(k)).expect("descendant sets are per vertex");
        let (a, b) = (owner(i), owner(j));
        let (first, second) = (a.min(b), a.max(b));
        Witness::DescendantPair { first, second, meet: d.members()[i].intersection(&d.members()[j]) }
    });
    GlobalLcaReport::new(Route::DescendantClosed, witness)
}

pub fn recognize(g: &Dag, route: Route) -> GlobalLcaReport {
    match route {
        Route::PairwiseVertex => has_global_lca_pairwise(g),
        Route::LxtLeafPairs => has_global_lca_via_lxt(g),
        Route::JoinSemilattice => has_global_lca_via_join(g),
        Route::DescendantClosed => has_global_lca_via_descendants(g),
    }
}

/// Runs every route, in [`Route::ALL`] order.
pub fn recognize_all(g: &Dag) -> [GlobalLcaReport; 4] {
    Route::ALL.map(|r| recognize(g, r))
}

pub fn has_global_lca(g: &Dag) -> bool {
    has_global_lca_pairwise(g).holds
}

/// First pair `x < y` without a least upper bound, with the minimal upper
/// bounds. Works on the relation alone.
pub fn join_violation(p: &Poset) -> Option<(usize, usize, VertexSet)> {
    let n = p.n();
    for x in 0..n {
        for y in x + 1..n {
            let upper: Vec<usize> = (0..n).filter(|&z| p.leq(x, z) && p.leq(y, z)).collect();
            let least = upper.iter().filter(|&&z| upper.iter().all(|&u| p.leq(z, u))).count();
            if least != 1 {
                let minimal =
                    upper.iter().copied().filter(|&z| !upper.iter().any(|&u| u != z && p.leq(u, z))).collect();
                return Some((x, y, minimal));
            }
        }
    }
    None
}

pub fn is_join_semilattice(p: &Poset) -> bool {
    join_violation(p).is_none()
}

/// First pair `u < v` where comparability and cluster comparability differ.
pub fn pcc_violation(g: &Dag) -> Option<(Vertex, Vertex)> {
    let p = g.reachability();
    let c = clusters(g);
    for u in g.vertices() {
        for v in u + 1..g.n() {
            let (cu, cv) = (c.member_of(u).unwrap(), c.member_of(v).unwrap());
            if p.comparable(u, v) != (cu.is_subset(cv) || cv.is_subset(cu)) {
                return Some((u, v));
            }
        }
    }
    None
}

pub fn satisfies_pcc(g: &Dag) -> bool {
    pcc_violation(g).is_none()
}

/// PCC together with pairwise distinct clusters.
pub fn is_lca_relevant(g: &Dag) -> bool {
    clusters(g).len() == g.n() && satisfies_pcc(g)
}

/// First vertex `v` with `lca(C(v)) != v`.
pub fn strong_cl_violation(g: &Dag) -> Option<Vertex> {
    let lca = Lca::new(g);
    let c = clusters(g);
    g.vertices().find(|&v| lca.lca(c.member_of(v).unwrap()) != Ok(v))
}

pub fn satisfies_strong_cl(g: &Dag) -> bool {
    strong_cl_violation(g).is_none()
}

/// Brute force over all non-empty leaf subsets; returns the first failing one.
pub fn lca_property_violation(g: &Dag, max_subsets: usize) -> Result<Option<Query>> {
    Lca::new(g).subset_violation(&g.leaves(), max_subsets)
}

pub fn has_lca_property_exhaustive(g: &Dag, max_subsets: usize) -> Result<bool> {
    Ok(lca_property_violation(g, max_subsets)?.is_none())
}

/// [`has_lca_property_exhaustive`] with the default cap.
pub fn has_lca_property(g: &Dag) -> Result<bool> {
    has_lca_property_exhaustive(g, DEFAULT_MAX_SUBSETS)
}

/// First leaf pair without a unique LCA.
pub fn pairwise_lca_violation(g: &Dag) -> Option<Query> {
    Lca::new(g).pair_violation(&g.leaves())
}

pub fn has_pairwise_lca_property(g: &Dag) -> bool {
    pairwise_lca_violation(g).is_none()
}
