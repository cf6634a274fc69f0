//! Seeded random DAGs and networks for tests and experiments.

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::dag::{Dag, Vertex};

/// A random DAG on `n >= 1` vertices labeled `v0, v1, ...`.
///
/// A random permutation fixes the topological order, so ids are not
/// topologically sorted; each forward pair becomes an edge with
/// probability `density`.
pub fn random_dag<R: Rng>(n: usize, density: f64, rng: &mut R) -> Dag {
    let (_, mut edges) = forward_edges(n, density, rng);
    edges.sort_unstable();
    build(n, edges)
}

/// As [`random_dag`], then every parentless vertex except the first in the
/// hidden order receives a random earlier parent, leaving a single root.
pub fn random_network<R: Rng>(n: usize, density: f64, rng: &mut R) -> Dag {
    let (order, mut edges) = forward_edges(n, density, rng);
    let mut has_parent = vec![false; n];
    for &(_, c) in &edges {
        has_parent[c] = true;
    }
    for i in 1..n {
        let v = order[i];
        if !has_parent[v] {
            edges.push((order[rng.gen_range(0..i)], v));
        }
    }
    edges.sort_unstable();
    build(n, edges)
}

/// A random network in which every vertex after the first (in a hidden
/// order) picks between one and `max_parents` distinct earlier parents.
pub fn random_parent_network<R: Rng>(n: usize, max_parents: usize, rng: &mut R) -> Dag {
    assert!(n >= 1, "a DAG needs a vertex");
    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let k = rng.gen_range(1..=max_parents.max(1)).min(i);
        for j in sample(rng, i, k) {
            edges.push((order[j], order[i]));
        }
    }
    edges.sort_unstable();
    build(n, edges)
}

/// A random layered network. Layer 0 is the root; each vertex of a later
/// layer is joined to each vertex of the previous layer with probability
/// `density` and gets one random parent there if none was drawn.
pub fn random_layered_network<R: Rng>(layers: &[usize], density: f64, rng: &mut R) -> Dag {
    let mut sizes = vec![1];
    sizes.extend(layers.iter().copied().filter(|&s| s > 0));
    let mut edges = Vec::new();
    let mut start = 0;
    for w in sizes.windows(2) {
        let (prev, next) = (start..start + w[0], start + w[0]..start + w[0] + w[1]);
        for v in next.clone() {
            let before = edges.len();
            for u in prev.clone() {
                if rng.gen_bool(density) {
                    edges.push((u, v));
                }
            }
            if edges.len() == before {
                edges.push((rng.gen_range(prev.clone()), v));
            }
        }
        start = prev.end;
    }
    build(sizes.iter().sum(), edges)
}

fn forward_edges<R: Rng>(n: usize, density: f64, rng: &mut R) -> (Vec<Vertex>, Vec<(Vertex, Vertex)>) {
    assert!(n >= 1, "a DAG needs a vertex");
    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                edges.push((order[i], order[j]));
            }
        }
    }
    (order, edges)
}

fn build(n: usize, edges: Vec<(Vertex, Vertex)>) -> Dag {
    let labels = (0..n).map(|i| format!("v{i}")).collect();
    Dag::from_parts(labels, edges).expect("forward edges form a DAG")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn networks_have_one_root() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=12 {
            for _ in 0..20 {
                let d = rng.gen_range(0.0..0.7);
                let g = random_network(n, d, &mut rng);
                assert_eq!(g.n(), n);
                assert!(g.is_network());
            }
        }
    }

    #[test]
    fn other_models_are_networks() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..=12 {
            let g = random_parent_network(n, 3, &mut rng);
            assert_eq!(g.n(), n);
            assert!(g.is_network());
        }
        let g = random_layered_network(&[2, 3, 3], 0.5, &mut rng);
        assert_eq!(g.n(), 9);
        assert!(g.is_network());
        assert_eq!(g.roots(), crate::VertexSet::singleton(0));
    }

    #[test]
    fn seeded_output_is_reproducible() {
        let a = random_dag(9, 0.3, &mut ChaCha8Rng::seed_from_u64(5));
        let b = random_dag(9, 0.3, &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(a, b);
        let empty = random_dag(4, 0.0, &mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(empty.edge_count(), 0);
    }
}
