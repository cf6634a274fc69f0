#![allow(dead_code)]

use lcadag::corpus::{random_dag, random_network, random_parent_network};
use lcadag::holju::{random_global_lca, GenParams};
use lcadag::Dag;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn dag(edges: &[(&str, &str)]) -> Dag {
    Dag::from_edges(edges, &[]).unwrap()
}

pub fn crossed() -> Dag {
    dag(&[("a", "b"), ("a", "c"), ("b", "x"), ("b", "y"), ("c", "x"), ("c", "y")])
}

pub fn k22() -> Dag {
    dag(&[("r1", "l1"), ("r1", "l2"), ("r2", "l1"), ("r2", "l2")])
}

/// Random networks from three models in turn: the leaf-attachment
/// generator, random parent choice, and the plain random model (twice).
pub fn network_corpus(count: usize, max_n: usize, base_seed: u64) -> Vec<Dag> {
    (0..count as u64)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(base_seed + i);
            let n = rng.gen_range(1..=max_n);
            if i % 4 == 0 {
                random_global_lca(n, base_seed + i, GenParams::default()).unwrap().0
            } else if i % 4 == 1 {
                random_parent_network(n, 3, &mut rng)
            } else {
                let density = rng.gen_range(0.05..0.6);
                random_network(n, density, &mut rng)
            }
        })
        .collect()
}

/// Random DAGs, not necessarily networks.
pub fn dag_corpus(count: usize, max_n: usize, base_seed: u64) -> Vec<Dag> {
    (0..count as u64)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(base_seed + i);
            let n = rng.gen_range(1..=max_n);
            let density = rng.gen_range(0.05..0.6);
            if i % 2 == 0 {
                random_dag(n, density, &mut rng)
            } else {
                random_network(n, density, &mut rng)
            }
        })
        .collect()
}
