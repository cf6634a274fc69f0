//! Blocks, level-1 networks and galled trees.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dag::{Dag, Vertex, VertexSet};
use crate::error::{Error, Result};

/// A maximal biconnected subgraph of the underlying undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub vertices: VertexSet,
    /// Directed edges of `g` inside the block, sorted.
    pub edges: Vec<(Vertex, Vertex)>,
}

impl Block {
    /// Vertices with more than one incoming block edge.
    pub fn hybrids(&self) -> VertexSet {
        self.vertices.iter().filter(|&v| self.in_degree(v) > 1).collect()
    }

    fn in_degree(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|e| e.1 == v).count()
    }

    fn out_degree(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|e| e.0 == v).count()
    }

    /// A single vertex, a single edge, or two directed paths between the
    /// same two vertices that share nothing else.
    pub fn is_gall(&self) -> bool {
        let k = self.vertices.len();
        if k <= 2 {
            return true;
        }
        if self.edges.len() != k {
            return false;
        }
        let (mut sources, mut sinks) = (0, 0);
        for v in &self.vertices {
            match (self.in_degree(v), self.out_degree(v)) {
                (0, 2) => sources += 1,
                (2, 0) => sinks += 1,
                (1, 1) => {}
                _ => return false,
            }
        }
        sources == 1 && sinks == 1
    }
}

/// Blocks with their edges, by the low-point method. Isolated vertices form
/// singleton blocks. Sorted by vertex set.
pub fn block_decomposition(g: &Dag) -> Vec<Block> {
    let n = g.n();
    let adj: Vec<Vec<Vertex>> = g
        .vertices()
        .map(|v| {
            let mut a: Vec<Vertex> = g.children(v).iter().chain(g.parents(v)).copied().collect();
            a.sort_unstable();
            a
        })
        .collect();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut edge_stack: Vec<(Vertex, Vertex)> = Vec::new();
    let mut out = Vec::new();

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        if adj[root].is_empty() {
            disc[root] = time;
            time += 1;
            out.push(Block { vertices: VertexSet::singleton(root), edges: Vec::new() });
            continue;
        }
        // Iterative DFS: (vertex, parent, next neighbour index).
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut stack = vec![(root, usize::MAX, 0usize)];
        while let Some(&mut (v, parent, ref mut next)) = stack.last_mut() {
            if let Some(&u) = adj[v].get(*next) {
                *next += 1;
                if disc[u] == usize::MAX {
                    edge_stack.push((v, u));
                    disc[u] = time;
                    low[u] = time;
                    time += 1;
                    stack.push((u, v, 0));
                } else if u != parent && disc[u] < disc[v] {
                    edge_stack.push((v, u));
                    low[v] = low[v].min(disc[u]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] >= disc[parent] {
                        let mut vertices = Vec::new();
                        let mut edges = Vec::new();
                        while let Some((a, b)) = edge_stack.pop() {
                            vertices.push(a);
                            vertices.push(b);
                            edges.push(if g.has_edge(a, b) { (a, b) } else { (b, a) });
                            if (a, b) == (parent, v) {
                                break;
                            }
                        }
                        edges.sort_unstable();
                        out.push(Block { vertices: vertices.into_iter().collect(), edges });
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    out
}

/// Vertex sets of the blocks.
pub fn blocks(g: &Dag) -> Vec<VertexSet> {
    block_decomposition(g).into_iter().map(|b| b.vertices).collect()
}

/// Every block holds at most one hybrid.
///
/// In a network all incoming edges of a vertex lie in one block, so a
/// vertex counts as a hybrid of the block that contains its incoming edges.
pub fn is_level1(g: &Dag) -> Result<bool> {
    if !g.is_network() {
        return Err(Error::NotANetwork);
    }
    Ok(block_decomposition(g).iter().all(|b| b.hybrids().len() <= 1))
}

/// Every block is a vertex, an edge or a gall.
pub fn is_galled_tree(g: &Dag) -> Result<bool> {
    if !g.is_network() {
        return Err(Error::NotANetwork);
    }
    Ok(block_decomposition(g).iter().all(Block::is_gall))
}

/// Shape of the networks produced by [`random_level1`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Level1Kind {
    /// Every cycle block has two sides.
    GalledTree,
    /// Cycle blocks may have three sides into a common hybrid.
    #[default]
    Level1,
}

/// Grows a random level-1 network on `n` vertices labeled `v0, v1, ...`.
///
/// Each step either hangs a tree child below a random vertex or, with
/// probability 0.4 and enough room left, a gall: two or three new paths of
/// one to three edges from a random vertex into a new hybrid, at most one of
/// them a single edge. Galls may hang below earlier hybrids.
pub fn random_level1(n: usize, seed: u64, kind: Level1Kind) -> Result<Dag> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut count = 1;
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    while count < n {
        let room = n - count;
        let top = rng.gen_range(0..count);
        let sides = match kind {
            Level1Kind::GalledTree => 2,
            Level1Kind::Level1 => rng.gen_range(2..=3),
        };
        let mut lens: Vec<usize> = (0..sides).map(|_| rng.gen_range(1..=3)).collect();
        for len in lens.iter_mut().skip(1) {
            *len = (*len).max(2);
        }
        let needed = 1 + lens.iter().map(|l| l - 1).sum::<usize>();
        if room >= 3 && needed <= room && rng.gen_bool(0.4) {
            let hybrid = count;
            count += 1;
            for len in lens {
                let mut prev = top;
                for _ in 1..len {
                    edges.push((prev, count));
                    prev = count;
                    count += 1;
                }
                edges.push((prev, hybrid));
            }
        } else {
            edges.push((top, count));
            count += 1;
        }
    }
    let labels = (0..n).map(|i| format!("v{i}")).collect();
    Dag::from_parts(labels, edges)
}
