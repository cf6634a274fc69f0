mod common;

use std::collections::BTreeSet;

use lcadag::corpus::{random_dag, random_network, random_parent_network};
use lcadag::holju::{
    deconstruct, extend, l_set, minimal, random_global_lca, replay, ConstructionTrace, ExtendMode, GenParams,
};
use lcadag::iso::are_isomorphic;
use lcadag::lca::{has_global_lca, recognize_all, satisfies_pcc, Lca};
use lcadag::level1::{is_galled_tree, is_level1, random_level1, Level1Kind};
use lcadag::minors::verify_minor_theorem;
use lcadag::reconstruct::{
    descendants_from_lxt_clusters, rebuild_sf_from_descendants, verify_lop_hasse_reconstruction,
};
use lcadag::setsys::{clusters, descendants, SetSystem};
use lcadag::text::{parse_edge_list, write_edge_list};
use lcadag::transform::{hasse, is_shortcut_free, lop, lxt, sf, LopPolicy};
use lcadag::{Dag, Vertex, VertexSet};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ISO_CAP: usize = 24;

fn any_dag() -> impl Strategy<Value = Dag> {
    (1usize..=12, 0.0f64..0.7, any::<u64>(), any::<bool>()).prop_map(|(n, p, seed, net)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if net {
            random_network(n, p, &mut rng)
        } else {
            random_dag(n, p, &mut rng)
        }
    })
}

fn any_network() -> impl Strategy<Value = Dag> {
    (1usize..=11, 0.0f64..0.7, any::<u64>(), 0u8..3).prop_map(|(n, p, seed, model)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match model {
            0 => random_network(n, p, &mut rng),
            1 => random_parent_network(n, 3, &mut rng),
            _ => random_global_lca(n, seed, GenParams::default()).unwrap().0,
        }
    })
}

fn global_network() -> impl Strategy<Value = Dag> {
    (1usize..=12, any::<u64>()).prop_map(|(n, seed)| random_global_lca(n, seed, GenParams::default()).unwrap().0)
}

/// Plain DFS over child lists.
fn dfs_reach(g: &Dag, from: Vertex) -> BTreeSet<Vertex> {
    let mut seen = BTreeSet::from([from]);
    let mut stack = vec![from];
    while let Some(v) = stack.pop() {
        for &c in g.children(v) {
            if seen.insert(c) {
                stack.push(c);
            }
        }
    }
    seen
}

fn subsets(ground: &VertexSet) -> impl Iterator<Item = VertexSet> + '_ {
    let k = ground.len();
    (1u32..(1 << k))
        .map(move |mask| ground.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| v).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn reachability_matches_dfs(g in any_dag()) {
        let order = g.reachability();
        prop_assert!(order.partial_order_violation().is_none());
        for v in g.vertices() {
            let reach = dfs_reach(&g, v);
            for u in g.vertices() {
                prop_assert_eq!(order.leq(u, v), reach.contains(&u));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn topological_order_respects_edges(g in any_dag()) {
        let topo = g.topological_order();
        let mut pos = vec![usize::MAX; g.n()];
        for (i, &v) in topo.iter().enumerate() {
            pos[v] = i;
        }
        prop_assert!(pos.iter().all(|&p| p != usize::MAX));
        for (u, v) in g.edges() {
            prop_assert!(pos[u] < pos[v]);
        }
    }

    #[test]
    fn reverse_is_transpose(g in any_dag()) {
        let r = g.reverse();
        prop_assert_eq!(r.edge_count(), g.edge_count());
        for (u, v) in g.edges() {
            prop_assert!(r.has_edge(v, u));
        }
        prop_assert!(r.reverse().same_labeled(&g));
    }

    #[test]
    fn isomorphism_reflexive_and_symmetric(g in any_dag(), h in any_dag()) {
        prop_assert!(are_isomorphic(&g, &g, ISO_CAP).unwrap());
        prop_assert_eq!(are_isomorphic(&g, &h, ISO_CAP).unwrap(), are_isomorphic(&h, &g, ISO_CAP).unwrap());
    }

    #[test]
    fn edge_list_round_trip(g in any_dag()) {
        prop_assert!(parse_edge_list(&write_edge_list(&g)).unwrap().same_labeled(&g));
    }

    #[test]
    fn sf_is_idempotent_and_keeps_order(g in any_dag()) {
        let s = sf(&g);
        prop_assert!(is_shortcut_free(&s));
        prop_assert!(sf(&s).same_labeled(&s));
        let (a, b) = (g.reachability(), s.reachability());
        for u in g.vertices() {
            for v in g.vertices() {
                prop_assert_eq!(a.leq(u, v), b.leq(u, v));
            }
        }
        prop_assert!(clusters(&s).same_family(&clusters(&g)));
    }

    #[test]
    fn lxt_is_tree_leaf_child(g in any_dag()) {
        let e = lxt(&g).unwrap();
        prop_assert!(e.is_tree_leaf_child());
        for v in &e.inner() {
            prop_assert!(e.out_degree(v) > 1);
        }
        prop_assert!(e.induced(&g.vertices().collect()).unwrap().same_labeled(&g));
    }

    #[test]
    fn sf_commutes_with_lop(g in any_dag()) {
        let g = lxt(&g).unwrap();
        let a = sf(&lop(&g, LopPolicy::default()).unwrap());
        let b = lop(&sf(&g), LopPolicy::default()).unwrap();
        prop_assert!(are_isomorphic(&a, &b, ISO_CAP).unwrap());
    }

    #[test]
    fn hasse_is_shortcut_free(g in any_dag()) {
        prop_assert!(is_shortcut_free(&hasse(&clusters(&g))));
        prop_assert!(is_shortcut_free(&hasse(&descendants(&g))));
    }

    #[test]
    fn clusters_are_descendants_on_leaves(g in any_dag()) {
        let leaves = g.leaves();
        let expected: BTreeSet<Vec<String>> = g
            .vertices()
            .map(|v| {
                let mut l = g.labels_of(&dfs_reach(&g, v).into_iter().filter(|&u| leaves.contains(u)).collect());
                l.sort();
                l
            })
            .collect();
        prop_assert_eq!(clusters(&g).family(), expected);
    }

    #[test]
    fn descendant_inclusion_is_the_order(g in any_dag()) {
        let order = g.reachability();
        let d: Vec<BTreeSet<Vertex>> = g.vertices().map(|v| dfs_reach(&g, v)).collect();
        for u in g.vertices() {
            for v in g.vertices() {
                prop_assert_eq!(d[u].is_subset(&d[v]), order.leq(u, v));
            }
        }
    }

    #[test]
    fn closure_is_a_closure_operator(g in any_network()) {
        let c = clusters(&g);
        let ground = c.ground().clone();
        if ground.len() > 6 { return Ok(()); }
        for a in subsets(&ground) {
            let cl = c.closure(&a).unwrap();
            prop_assert!(a.is_subset(&cl));
            prop_assert_eq!(c.closure(&cl).unwrap(), cl.clone());
            for b in subsets(&ground).filter(|b| a.is_subset(b)) {
                prop_assert!(cl.is_subset(&c.closure(&b).unwrap()));
            }
        }
    }

    #[test]
    fn closed_clustering_systems_are_pre_ary(g in any_network()) {
        let c = clusters(&g);
        if !(c.is_closed() && c.is_clustering_system()) { return Ok(()); }
        prop_assert!(c.is_pre_k_ary(c.ground().len(), 1 << 16).unwrap());
    }

    #[test]
    fn lca_sets_are_antichains(g in any_dag()) {
        let lca = Lca::new(&g);
        let ground: VertexSet = g.vertices().take(7).collect();
        for a in subsets(&ground) {
            let l = lca.lca_set(&a).unwrap();
            for x in &l {
                for y in &l {
                    prop_assert!(x == y || !lca.order().comparable(x, y));
                }
            }
        }
    }

    #[test]
    fn anc_is_antitone(g in any_dag()) {
        let lca = Lca::new(&g);
        let ground: VertexSet = g.vertices().take(6).collect();
        for a in subsets(&ground) {
            let anc_a = lca.anc(&a).unwrap();
            for b in subsets(&ground).filter(|b| a.is_subset(b)) {
                prop_assert!(lca.anc(&b).unwrap().is_subset(&anc_a));
            }
        }
    }

    #[test]
    fn global_lca_is_associative(g in global_network()) {
        let lca = Lca::new(&g);
        let vs: Vec<Vertex> = g.vertices().collect();
        for &x in &vs {
            for &y in &vs {
                for &z in vs.iter().take(5) {
                    let xy = lca.lca(&VertexSet::pair(x, y)).unwrap();
                    let yz = lca.lca(&VertexSet::pair(y, z)).unwrap();
                    let left = lca.lca(&VertexSet::pair(xy, z)).unwrap();
                    let right = lca.lca(&VertexSet::pair(x, yz)).unwrap();
                    prop_assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn routes_agree(g in any_dag()) {
        let reports = recognize_all(&g);
        prop_assert!(reports.iter().all(|r| r.holds == reports[0].holds));
        let brute = Lca::new(&g).subset_violation(&g.vertices().collect(), 1 << 16).unwrap().is_none();
        prop_assert_eq!(reports[0].holds, brute);
    }

    #[test]
    fn global_lca_implies_closed_network(g in any_dag()) {
        if !has_global_lca(&g) { return Ok(()); }
        prop_assert!(g.is_network());
        prop_assert!(clusters(&g).is_closed());
        prop_assert!(descendants(&g).is_closed());
    }

    #[test]
    fn pcc_clustering_systems_closed_iff_global(g in any_dag()) {
        let c = clusters(&g);
        if !(satisfies_pcc(&g) && c.is_clustering_system()) { return Ok(()); }
        prop_assert_eq!(has_global_lca(&g), c.is_closed());
    }

    #[test]
    fn tree_leaf_child_satisfies_pcc(g in any_dag()) {
        prop_assert!(satisfies_pcc(&lxt(&g).unwrap()));
    }

    #[test]
    fn unchecked_extend_keeps_old_lcas(g in any_network(), pick in any::<u64>()) {
        let parents: VertexSet = g.vertices().filter(|&v| pick >> (v % 64) & 1 == 1).collect();
        if parents.is_empty() { return Ok(()); }
        let h = extend(&g, &parents, "fresh", ExtendMode::Unchecked).unwrap();
        let (old, new) = (Lca::new(&g), Lca::new(&h));
        let ground: VertexSet = g.vertices().take(6).collect();
        for a in subsets(&ground) {
            prop_assert_eq!(old.lca_set(&a).unwrap(), new.lca_set(&a).unwrap());
        }
    }

    #[test]
    fn checked_extend_sets_lca_with_new_leaf(g in global_network(), pick in any::<u64>()) {
        let parents: VertexSet = g.vertices().filter(|&v| pick >> (v % 64) & 1 == 1).collect();
        if parents.is_empty() { return Ok(()); }
        let lca = Lca::new(&g);
        match extend(&g, &parents, "fresh", ExtendMode::Checked) {
            Ok(h) => {
                prop_assert!(has_global_lca(&h));
                let x = h.vertex("fresh").unwrap();
                let after = Lca::new(&h);
                for v in g.vertices() {
                    let l = minimal(lca.order(), &l_set(&lca, &parents, v).unwrap());
                    prop_assert_eq!(after.lca_set(&VertexSet::pair(x, v)).unwrap(), l);
                }
            }
            Err(_) => {
                let bad = lcadag::holju::o_star_violation(&lca, &parents).unwrap();
                prop_assert!(bad.is_some());
            }
        }
    }

    #[test]
    fn traces_stay_global(n in 1usize..=14, seed in any::<u64>()) {
        let (g, trace) = random_global_lca(n, seed, GenParams::default()).unwrap();
        prop_assert!(replay(&trace, ExtendMode::Checked).unwrap().same_labeled(&g));
        for k in 0..=trace.len() {
            let prefix = ConstructionTrace { origin: trace.origin.clone(), steps: trace.steps[..k].to_vec() };
            prop_assert!(has_global_lca(&replay(&prefix, ExtendMode::Checked).unwrap()));
        }
    }

    #[test]
    fn deconstruct_matches_recognition(g in any_network()) {
        match deconstruct(&g) {
            Ok(t) => {
                prop_assert!(has_global_lca(&g));
                prop_assert!(replay(&t, ExtendMode::Checked).unwrap().same_labeled(&g));
            }
            Err(_) => prop_assert!(!has_global_lca(&g)),
        }
    }

    #[test]
    fn strict_k22_comes_with_x(g in global_network()) {
        prop_assert!(verify_minor_theorem(&g, ISO_CAP).unwrap());
    }

    #[test]
    fn galled_trees_are_level1(g in any_network()) {
        if is_galled_tree(&g).unwrap() {
            prop_assert!(is_level1(&g).unwrap());
        }
    }

    #[test]
    fn lxt_keeps_level1(n in 1usize..=20, seed in any::<u64>(), galled in any::<bool>()) {
        let kind = if galled { Level1Kind::GalledTree } else { Level1Kind::Level1 };
        let g = random_level1(n, seed, kind).unwrap();
        prop_assert!(is_level1(&g).unwrap());
        prop_assert!(is_level1(&lxt(&g).unwrap()).unwrap());
        prop_assert!(has_global_lca(&g));
    }

    #[test]
    fn closed_extended_clusters_give_closed_descendants(g in any_dag()) {
        let e = lxt(&g).unwrap();
        if clusters(&e).is_closed() {
            prop_assert!(descendants(&g).is_closed());
        }
    }

    #[test]
    fn descendants_recovered_from_lxt(g in any_dag()) {
        let c = clusters(&lxt(&g).unwrap());
        let d: SetSystem = descendants_from_lxt_clusters(&c, None::<&[&str]>).unwrap();
        prop_assert!(d.same_family(&descendants(&g)));
    }

    #[test]
    fn rebuild_inverts_descendants(g in any_dag()) {
        prop_assert!(rebuild_sf_from_descendants(&descendants(&g)).unwrap().same_labeled(&sf(&g)));
        prop_assert!(verify_lop_hasse_reconstruction(&g, ISO_CAP).unwrap());
    }
}
