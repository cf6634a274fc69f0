//! Isomorphism testing for small DAGs.
//!
//! Vertices are colored by degree, depth and reachability profiles, the
//! coloring is refined by neighbour colors until stable, and a backtracking
//! search then extends a partial map color class by color class.

use std::collections::BTreeMap;

use crate::dag::{Dag, Vertex};
use crate::error::{Error, Result};

/// Default vertex cap for [`are_isomorphic`].
pub const DEFAULT_MAX_VERTICES: usize = 24;

/// Returns a witness bijection `g -> h` when the graphs are isomorphic.
///
/// Fails with [`Error::SizeLimitExceeded`] when either graph has more than
/// `max_vertices` vertices.
pub fn isomorphism(g: &Dag, h: &Dag, max_vertices: usize) -> Result<Option<Vec<Vertex>>> {
    let size = g.n().max(h.n());
    if size > max_vertices {
        return Err(Error::SizeLimitExceeded { size, cap: max_vertices });
    }
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    let (cg, ch) = refine(g, h);
    let mut hist_g = cg.clone();
    let mut hist_h = ch.clone();
    hist_g.sort_unstable();
    hist_h.sort_unstable();
    if hist_g != hist_h {
        return Ok(None);
    }

    let mut class_size = BTreeMap::new();
    for &c in &cg {
        *class_size.entry(c).or_insert(0usize) += 1;
    }
    // Small classes first, topological position as tie-breaker so that
    // neighbours of mapped vertices come early.
    let pos: Vec<usize> = {
        let mut pos = vec![0; g.n()];
        for (i, &v) in g.topological_order().iter().enumerate() {
            pos[v] = i;
        }
        pos
    };
    let mut order: Vec<Vertex> = g.vertices().collect();
    order.sort_by_key(|&v| (class_size[&cg[v]], pos[v]));

    let mut search =
        Search { g, h, cg: &cg, ch: &ch, order: &order, map: vec![usize::MAX; g.n()], used: vec![false; h.n()] };
    Ok(search.extend(0).then_some(search.map))
}

/// Convenience wrapper around [`isomorphism`].
pub fn are_isomorphic(g: &Dag, h: &Dag, max_vertices: usize) -> Result<bool> {
    Ok(isomorphism(g, h, max_vertices)?.is_some())
}

/// Checks that `map` is an edge-preserving bijection `g -> h`.
pub fn is_isomorphism(g: &Dag, h: &Dag, map: &[Vertex]) -> bool {
    if g.n() != h.n() || map.len() != g.n() || g.edge_count() != h.edge_count() {
        return false;
    }
    let mut seen = vec![false; h.n()];
    for &m in map {
        if m >= h.n() || std::mem::replace(&mut seen[m], true) {
            return false;
        }
    }
    g.edges().all(|(u, v)| h.has_edge(map[u], map[v]))
}

struct Search<'a> {
    g: &'a Dag,
    h: &'a Dag,
    cg: &'a [usize],
    ch: &'a [usize],
    order: &'a [Vertex],
    map: Vec<Vertex>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        let Some(&v) = self.order.get(depth) else {
            return true;
        };
        for u in 0..self.h.n() {
            if self.used[u] || self.ch[u] != self.cg[v] || !self.consistent(v, u) {
                continue;
            }
            self.map[v] = u;
            self.used[u] = true;
            if self.extend(depth + 1) {
                return true;
            }
            self.used[u] = false;
            self.map[v] = usize::MAX;
        }
        false
    }

    fn consistent(&self, v: Vertex, u: Vertex) -> bool {
        self.order.iter().all(|&w| {
            let m = self.map[w];
            m == usize::MAX
                || (self.g.has_edge(v, w) == self.h.has_edge(u, m) && self.g.has_edge(w, v) == self.h.has_edge(m, u))
        })
    }
}

/// Joint color refinement of both graphs so that color ids are comparable.
fn refine(g: &Dag, h: &Dag) -> (Vec<usize>, Vec<usize>) {
    let initial = |d: &Dag| -> Vec<Vec<usize>> {
        let p = d.reachability();
        let (depth, height) = depth_height(d);
        d.vertices()
            .map(|v| {
                vec![
                    d.in_degree(v),
                    d.out_degree(v),
                    p.down_set(v).count_ones(..),
                    p.up_set(v).count_ones(..),
                    depth[v],
                    height[v],
                ]
            })
            .collect()
    };
    let (mut cg, mut ch) = compress(initial(g), initial(h));
    let mut classes = count_classes(&cg, &ch);
    loop {
        let step = |d: &Dag, c: &[usize]| -> Vec<Vec<usize>> {
            d.vertices()
                .map(|v| {
                    let mut kids: Vec<usize> = d.children(v).iter().map(|&x| c[x]).collect();
                    let mut pars: Vec<usize> = d.parents(v).iter().map(|&x| c[x]).collect();
                    kids.sort_unstable();
                    pars.sort_unstable();
                    let mut sig = vec![c[v], usize::MAX];
                    sig.extend(kids);
                    sig.push(usize::MAX);
                    sig.extend(pars);
                    sig
                })
                .collect()
        };
        let (ng, nh) = compress(step(g, &cg), step(h, &ch));
        let next = count_classes(&ng, &nh);
        cg = ng;
        ch = nh;
        if next == classes {
            return (cg, ch);
        }
        classes = next;
    }
}

fn compress(a: Vec<Vec<usize>>, b: Vec<Vec<usize>>) -> (Vec<usize>, Vec<usize>) {
    let mut ids = BTreeMap::new();
    for sig in a.iter().chain(b.iter()) {
        ids.entry(sig.clone()).or_insert(0);
    }
    for (i, id) in ids.values_mut().enumerate() {
        *id = i;
    }
    (a.iter().map(|s| ids[s]).collect(), b.iter().map(|s| ids[s]).collect())
}

fn count_classes(a: &[usize], b: &[usize]) -> usize {
    let mut all: Vec<usize> = a.iter().chain(b).copied().collect();
    all.sort_unstable();
    all.dedup();
    all.len()
}

/// Longest path from a root, and longest path to a leaf.
fn depth_height(d: &Dag) -> (Vec<usize>, Vec<usize>) {
    let mut depth = vec![0; d.n()];
    for &v in d.topological_order() {
        for &c in d.children(v) {
            depth[c] = depth[c].max(depth[v] + 1);
        }
    }
    let mut height = vec![0; d.n()];
    for &v in d.topological_order().iter().rev() {
        for &c in d.children(v) {
            height[v] = height[v].max(height[c] + 1);
        }
    }
    (depth, height)
}
