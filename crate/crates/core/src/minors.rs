//! Disjoint directed paths, strict K₂,₂ subdivisions and X/X′ subdivisions.
//!
//! Path systems are found with a pebble game on the topological order: the
//! unfinished pebble lowest in the order always moves next, so every vertex
//! a pebble leaves lies below all pebbles and can never be entered again.
//! A pebble may only step onto a vertex already holding another pebble when
//! the two paths are allowed to share it.

use std::collections::HashMap;

use crate::dag::{Dag, Poset, Vertex, VertexSet};
use crate::error::{Error, Result};

/// Default vertex cap for the subdivision searches.
pub const DEFAULT_MAX_VERTICES: usize = 24;

/// A subdivided K₂,₂: roots `(r, r′)`, sinks `(ℓ, ℓ′)` and the paths
/// `r→ℓ`, `r→ℓ′`, `r′→ℓ`, `r′→ℓ′` in that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct K22Subdivision {
    pub roots: (Vertex, Vertex),
    pub sinks: (Vertex, Vertex),
    pub paths: [Vec<Vertex>; 4],
}

impl K22Subdivision {
    /// Re-checks the certificate against `g`. Returns a description of the
    /// first defect. With `strict`, the roots and the sinks must also be
    /// pairwise incomparable in `g`.
    pub fn defect(&self, g: &Dag, strict: bool) -> Option<String> {
        let (r, r2) = self.roots;
        let (l, l2) = self.sinks;
        let ends = [(r, l), (r, l2), (r2, l), (r2, l2)];
        for (k, (path, &(s, t))) in self.paths.iter().zip(&ends).enumerate() {
            if let Some(d) = path_defect(g, path, s, t) {
                return Some(format!("path {k}: {d}"));
            }
        }
        let set = |k: usize| -> VertexSet { self.paths[k].iter().copied().collect() };
        let expect = [
            (0, 1, VertexSet::singleton(r)),
            (2, 3, VertexSet::singleton(r2)),
            (0, 3, VertexSet::new()),
            (2, 1, VertexSet::new()),
            (0, 2, VertexSet::singleton(l)),
            (1, 3, VertexSet::singleton(l2)),
        ];
        for (a, b, want) in expect {
            let got = set(a).intersection(&set(b));
            if got != want {
                return Some(format!("paths {a} and {b} share {got}, expected {want}"));
            }
        }
        if strict {
            let p = g.reachability();
            if p.comparable(r, r2) {
                return Some("roots are comparable".into());
            }
            if p.comparable(l, l2) {
                return Some("sinks are comparable".into());
            }
        }
        None
    }

    pub fn is_valid(&self, g: &Dag, strict: bool) -> bool {
        self.defect(g, strict).is_none()
    }
}

/// An X (`top == bottom`) or X′ subdivision: paths `r→top`, `r′→top`,
/// `top→bottom`, `bottom→ℓ`, `bottom→ℓ′`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XSubdivision {
    pub roots: (Vertex, Vertex),
    pub sinks: (Vertex, Vertex),
    pub top: Vertex,
    pub bottom: Vertex,
    pub paths: [Vec<Vertex>; 5],
}

impl XSubdivision {
    pub fn is_x_prime(&self) -> bool {
        self.top != self.bottom
    }

    /// Re-checks the certificate: endpoints, edges and internal disjointness.
    pub fn defect(&self, g: &Dag) -> Option<String> {
        let (r, r2) = self.roots;
        let (l, l2) = self.sinks;
        let (v, w) = (self.top, self.bottom);
        let ends = [(r, v), (r2, v), (v, w), (w, l), (w, l2)];
        for (k, (path, &(s, t))) in self.paths.iter().zip(&ends).enumerate() {
            if let Some(d) = path_defect(g, path, s, t) {
                return Some(format!("path {k}: {d}"));
            }
        }
        // Allowed shared vertices for each pair of paths.
        let allowed = |a: usize, b: usize| -> VertexSet {
            match (a, b) {
                (0, 1) | (0, 2) | (1, 2) => VertexSet::singleton(v),
                (2, 3) | (2, 4) | (3, 4) => VertexSet::singleton(w),
                _ if v == w => VertexSet::singleton(v),
                _ => VertexSet::new(),
            }
        };
        for a in 0..5 {
            for b in a + 1..5 {
                let pa: VertexSet = self.paths[a].iter().copied().collect();
                let pb: VertexSet = self.paths[b].iter().copied().collect();
                let shared = pa.intersection(&pb);
                if !shared.is_subset(&allowed(a, b)) {
                    return Some(format!("paths {a} and {b} share {shared}"));
                }
            }
        }
        None
    }
}

fn path_defect(g: &Dag, path: &[Vertex], s: Vertex, t: Vertex) -> Option<String> {
    if path.first() != Some(&s) || path.last() != Some(&t) {
        return Some("wrong endpoints".into());
    }
    if let Some(w) = path.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
        return Some(format!("missing edge {} -> {}", g.label(w[0]), g.label(w[1])));
    }
    None
}

/// The pebble game. Pebble `i` walks from `starts[i]` to `targets[i]`.
struct Pebbles<'a> {
    g: &'a Dag,
    pos: Vec<usize>,
    starts: Vec<Vertex>,
    targets: Vec<Vertex>,
    /// Pairs of pebbles allowed to meet at a vertex, with that vertex.
    meet: Vec<(usize, usize, Vertex)>,
}

impl Pebbles<'_> {
    fn may_enter(&self, state: &[Vertex], i: usize, x: Vertex) -> bool {
        let endpoint = |j: usize| self.starts[j] == x || self.targets[j] == x;
        let own = self.starts[i] == x || self.targets[i] == x;
        if !own && (0..state.len()).any(endpoint) {
            return false;
        }
        state.iter().enumerate().all(|(j, &y)| {
            j == i || y != x || self.meet.iter().any(|&(a, b, m)| m == x && ((a, b) == (i, j) || (a, b) == (j, i)))
        })
    }

    fn key(&self, state: &[Vertex]) -> u64 {
        state.iter().fold(0u64, |k, &v| k * self.g.n() as u64 + v as u64)
    }

    /// Paths for every pebble, or `None` when the targets are unreachable.
    fn solve(&self) -> Option<Vec<Vec<Vertex>>> {
        let start = self.starts.clone();
        let mut parent: HashMap<u64, Option<Vec<Vertex>>> = HashMap::new();
        parent.insert(self.key(&start), None);
        let mut stack = vec![start];
        while let Some(state) = stack.pop() {
            let mover =
                (0..state.len()).filter(|&i| state[i] != self.targets[i]).min_by_key(|&i| (self.pos[state[i]], i));
            let Some(i) = mover else {
                return Some(self.unwind(&parent, state));
            };
            for &c in self.g.children(state[i]).iter().rev() {
                if !self.may_enter(&state, i, c) {
                    continue;
                }
                let mut next = state.clone();
                next[i] = c;
                let k = self.key(&next);
                if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(k) {
                    e.insert(Some(state.clone()));
                    stack.push(next);
                }
            }
        }
        None
    }

    fn unwind(&self, parent: &HashMap<u64, Option<Vec<Vertex>>>, end: Vec<Vertex>) -> Vec<Vec<Vertex>> {
        let mut states = vec![end];
        while let Some(Some(p)) = parent.get(&self.key(states.last().unwrap())) {
            states.push(p.clone());
        }
        states.reverse();
        (0..self.starts.len())
            .map(|i| {
                let mut path: Vec<Vertex> = states.iter().map(|s| s[i]).collect();
                path.dedup();
                path
            })
            .collect()
    }
}

fn positions(g: &Dag) -> Vec<usize> {
    let mut pos = vec![0; g.n()];
    for (i, &v) in g.topological_order().iter().enumerate() {
        pos[v] = i;
    }
    pos
}

/// Vertex-disjoint directed paths `s1 → t1` and `s2 → t2` (endpoints included).
pub fn two_disjoint_paths(g: &Dag, (s1, t1): (Vertex, Vertex), (s2, t2): (Vertex, Vertex)) -> Option<[Vec<Vertex>; 2]> {
    let ends = [s1, t1, s2, t2];
    if ends.iter().any(|&v| v >= g.n()) || s1 == s2 || s1 == t2 || t1 == s2 || t1 == t2 {
        return None;
    }
    let game = Pebbles { g, pos: positions(g), starts: vec![s1, s2], targets: vec![t1, t2], meet: Vec::new() };
    let mut paths = game.solve()?;
    let p2 = paths.pop().unwrap();
    let p1 = paths.pop().unwrap();
    Some([p1, p2])
}

/// A K₂,₂ subdivision with the given roots and sinks, if one exists.
pub fn k22_with_endpoints(g: &Dag, roots: (Vertex, Vertex), sinks: (Vertex, Vertex)) -> Option<K22Subdivision> {
    let (r, r2) = roots;
    let (l, l2) = sinks;
    if r == r2 || l == l2 || [r, r2].iter().any(|x| [l, l2].contains(x)) {
        return None;
    }
    let game = Pebbles {
        g,
        pos: positions(g),
        starts: vec![r, r, r2, r2],
        targets: vec![l, l2, l, l2],
        meet: vec![(0, 2, l), (1, 3, l2)],
    };
    let paths = game.solve()?;
    let paths: [Vec<Vertex>; 4] = paths.try_into().expect("four pebbles");
    Some(K22Subdivision { roots, sinks, paths })
}

fn check_size(g: &Dag, max_vertices: usize) -> Result<()> {
    if g.n() > max_vertices {
        return Err(Error::SizeLimitExceeded { size: g.n(), cap: max_vertices });
    }
    Ok(())
}

/// Endpoint quadruples `(r, r′, ℓ, ℓ′)` that could carry a strict K₂,₂:
/// `r < r′` and `ℓ < ℓ′` by id, both pairs incomparable, and both sinks
/// below both roots.
fn strict_quadruples(p: &Poset) -> Vec<((Vertex, Vertex), (Vertex, Vertex))> {
    let n = p.n();
    let mut out = Vec::new();
    for r in 0..n {
        for r2 in r + 1..n {
            if p.comparable(r, r2) {
                continue;
            }
            let mut common = p.down_set(r).clone();
            common.intersect_with(p.down_set(r2));
            let below: Vec<Vertex> = common.ones().collect();
            for (i, &l) in below.iter().enumerate() {
                for &l2 in &below[i + 1..] {
                    if !p.comparable(l, l2) {
                        out.push(((r, r2), (l, l2)));
                    }
                }
            }
        }
    }
    out
}

/// Up to `limit` strict K₂,₂ subdivisions, at most one per endpoint
/// quadruple, ordered by endpoint ids.
pub fn find_strict_k22(g: &Dag, limit: usize, max_vertices: usize) -> Result<Vec<K22Subdivision>> {
    check_size(g, max_vertices)?;
    let mut out = Vec::new();
    for (roots, sinks) in strict_quadruples(&g.reachability()) {
        if out.len() >= limit {
            break;
        }
        if let Some(h) = k22_with_endpoints(g, roots, sinks) {
            out.push(h);
        }
    }
    Ok(out)
}

/// A shortest directed path `s → t`, if any.
fn shortest_path(g: &Dag, s: Vertex, t: Vertex) -> Option<Vec<Vertex>> {
    let mut prev = vec![usize::MAX; g.n()];
    let mut queue = std::collections::VecDeque::from([s]);
    prev[s] = s;
    while let Some(v) = queue.pop_front() {
        if v == t {
            let mut path = vec![t];
            while *path.last().unwrap() != s {
                path.push(prev[*path.last().unwrap()]);
            }
            path.reverse();
            return Some(path);
        }
        for &c in g.children(v) {
            if prev[c] == usize::MAX {
                prev[c] = v;
                queue.push_back(c);
            }
        }
    }
    None
}

/// An X or X′ subdivision with roots `r, r′` and sinks `ℓ, ℓ′`.
///
/// Expects incomparable roots and incomparable sinks. The top center is a
/// maximal vertex lying below both roots and above both sinks, the bottom
/// center a minimal such vertex below the top; by that choice any paths
/// between the centers and the endpoints are internally disjoint.
pub fn has_x_or_xprime(g: &Dag, roots: (Vertex, Vertex), sinks: (Vertex, Vertex)) -> Option<XSubdivision> {
    let p = g.reachability();
    x_or_xprime_in(g, &p, roots, sinks)
}

fn x_or_xprime_in(g: &Dag, p: &Poset, (r, r2): (Vertex, Vertex), (l, l2): (Vertex, Vertex)) -> Option<XSubdivision> {
    let centers: Vec<Vertex> = g
        .vertices()
        .filter(|&c| p.leq(c, r) && p.leq(c, r2) && p.leq(l, c) && p.leq(l2, c) && ![r, r2, l, l2].contains(&c))
        .collect();
    let top = *centers.iter().find(|&&v| !centers.iter().any(|&u| p.lt(v, u)))?;
    let bottom = *centers.iter().find(|&&w| p.leq(w, top) && !centers.iter().any(|&u| p.lt(u, w)))?;
    let path = |s, t| shortest_path(g, s, t).expect("order guarantees a path");
    Some(XSubdivision {
        roots: (r, r2),
        sinks: (l, l2),
        top,
        bottom,
        paths: [path(r, top), path(r2, top), path(top, bottom), path(bottom, l), path(bottom, l2)],
    })
}

/// A strict K₂,₂ subdivision whose endpoints carry no X or X′ subdivision.
///
/// `None` means every strict K₂,₂ subdivision is matched by an X or X′
/// subdivision on the same endpoints, which happens exactly for networks
/// with the global lca-property.
pub fn minor_counterexample(g: &Dag, max_vertices: usize) -> Result<Option<K22Subdivision>> {
    if !g.is_network() {
        return Err(Error::NotANetwork);
    }
    check_size(g, max_vertices)?;
    let p = g.reachability();
    for (roots, sinks) in strict_quadruples(&p) {
        if x_or_xprime_in(g, &p, roots, sinks).is_some() {
            continue;
        }
        if let Some(h) = k22_with_endpoints(g, roots, sinks) {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

pub fn verify_minor_theorem(g: &Dag, max_vertices: usize) -> Result<bool> {
    Ok(minor_counterexample(g, max_vertices)?.is_none())
}
