//! Recovering a DAG, up to shortcuts, from its set systems.

use std::collections::HashMap;

use crate::dag::{Dag, VertexSet};
use crate::error::{Error, Result};
use crate::iso::are_isomorphic;
use crate::setsys::{clusters, SetSystem};
use crate::transform::{hasse, lop, lxt, sf, synthetic_host, LopPolicy};

/// Turns the clusters of `lxt(g)` into the descendant system of `g`: drop
/// the singletons of synthetic leaves, then replace each synthetic leaf
/// `<v>__lx` by `v`.
///
/// Synthetic leaves are recognized by their label, or, when
/// `original_leaves` is given, as the ground elements outside it.
pub fn descendants_from_lxt_clusters<S: AsRef<str>>(c: &SetSystem, original_leaves: Option<&[S]>) -> Result<SetSystem> {
    let is_original = |label: &str| match original_leaves {
        Some(orig) => orig.iter().any(|o| o.as_ref() == label),
        None => synthetic_host(label).is_none(),
    };
    let mut universe: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut image = vec![usize::MAX; c.universe().len()];
    let mut synthetic = vec![false; c.universe().len()];
    for x in c.ground() {
        let label = c.label(x);
        let target = if is_original(label) {
            label
        } else {
            synthetic[x] = true;
            synthetic_host(label)
                .ok_or_else(|| Error::MalformedInput(format!("cannot derive the host of synthetic leaf {label:?}")))?
        };
        let next = universe.len();
        let id = *index.entry(target.to_string()).or_insert(next);
        if id == next {
            universe.push(target.to_string());
        } else {
            return Err(Error::MalformedInput(format!("label {target:?} arises twice")));
        }
        image[x] = id;
    }
    let members = c
        .members()
        .iter()
        .filter(|m| !(m.len() == 1 && synthetic[m.as_slice()[0]]))
        .map(|m| m.iter().map(|x| image[x]).collect::<VertexSet>());
    let ground = (0..universe.len()).collect();
    SetSystem::new(universe, ground, members.collect::<Vec<_>>())
}

/// Rebuilds `sf(g)` from `descendants(g)`: `D(u)` is the smallest member
/// containing `u`, and `u -> v` is an edge iff `v ∈ D(u)` and no third
/// vertex of `D(u)` has `v` below it.
pub fn rebuild_sf_from_descendants(d: &SetSystem) -> Result<Dag> {
    let bad = |msg: String| Error::InconsistentFamily(msg);
    let vertices: VertexSet = d.members().iter().fold(VertexSet::new(), |acc, m| acc.union(m));
    if vertices.is_empty() {
        return Err(Error::EmptyGraph);
    }
    if d.len() != vertices.len() {
        return Err(bad(format!("{} members for {} vertices", d.len(), vertices.len())));
    }
    let mut owner: HashMap<&VertexSet, usize> = HashMap::new();
    let mut desc: Vec<&VertexSet> = Vec::with_capacity(vertices.len());
    for (i, u) in vertices.iter().enumerate() {
        let supers: Vec<&VertexSet> = d.members().iter().filter(|m| m.contains(u)).collect();
        let least = supers.iter().copied().find(|m| supers.iter().all(|o| m.is_subset(o)));
        let Some(du) = least else {
            return Err(bad(format!("no least member contains {}", d.label(u))));
        };
        if let Some(&j) = owner.get(du) {
            let other = vertices.as_slice()[j];
            return Err(bad(format!("{} and {} share the member {}", d.label(other), d.label(u), du)));
        }
        owner.insert(du, i);
        desc.push(du);
    }
    let pos = |v: usize| vertices.as_slice().binary_search(&v).expect("vertex");
    for (i, u) in vertices.iter().enumerate() {
        if desc[i].len() == 1 && desc[i].as_slice()[0] != u {
            return Err(bad(format!("singleton member of {} is not itself", d.label(u))));
        }
        if let Some(v) = desc[i].iter().find(|&v| !desc[pos(v)].is_subset(desc[i])) {
            return Err(bad(format!("{} lies below {} but its member is not nested", d.label(v), d.label(u))));
        }
    }
    let labels = vertices.iter().map(|u| d.label(u).to_string()).collect();
    let mut edges = Vec::new();
    for (i, u) in vertices.iter().enumerate() {
        for v in desc[i].iter().filter(|&v| v != u) {
            let j = pos(v);
            let covered = desc[i].iter().any(|w| w != u && w != v && desc[pos(w)].contains(v));
            if !covered {
                edges.push((i, j));
            }
        }
    }
    Dag::from_parts(labels, edges)
}

/// Checks `sf(g) ≅ lop(hasse(clusters(lxt(g))))`.
pub fn verify_lop_hasse_reconstruction(g: &Dag, max_vertices: usize) -> Result<bool> {
    let h = lop_hasse(g)?;
    are_isomorphic(&sf(g), &h, max_vertices)
}

/// `lop(hasse(clusters(lxt(g))))`.
pub fn lop_hasse(g: &Dag) -> Result<Dag> {
    lop(&hasse(&clusters(&lxt(g)?)), LopPolicy::LowestId)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setsys::descendants;

    fn dag(edges: &[(&str, &str)]) -> Dag {
        Dag::from_edges(edges, &[]).unwrap()
    }

    fn crossed() -> Dag {
        dag(&[("a", "b"), ("a", "c"), ("b", "x"), ("b", "y"), ("c", "x"), ("c", "y")])
    }

    fn path3() -> Dag {
        dag(&[("a", "b"), ("b", "c")])
    }

    fn shortcut() -> Dag {
        dag(&[("a", "b"), ("b", "c"), ("a", "c")])
    }

    fn lists(v: &[&[&str]]) -> Vec<Vec<String>> {
        v.iter().map(|s| s.iter().map(|x| x.to_string()).collect()).collect()
    }

    const NONE: Option<&[&str]> = None;

    #[test]
    fn descendants_via_lxt() {
        let cherry = dag(&[("r", "x"), ("r", "y")]);
        let c = clusters(&lxt(&cherry).unwrap());
        assert_eq!(c.sorted_labels(), lists(&[&["r__lx"], &["x"], &["y"], &["r__lx", "x", "y"]]));
        let d = descendants_from_lxt_clusters(&c, NONE).unwrap();
        assert_eq!(d.sorted_labels(), lists(&[&["x"], &["y"], &["r", "x", "y"]]));
        assert!(d.same_family(&descendants(&cherry)));
        let d = descendants_from_lxt_clusters(&clusters(&lxt(&path3()).unwrap()), NONE).unwrap();
        assert_eq!(d.sorted_labels(), lists(&[&["c"], &["b", "c"], &["a", "b", "c"]]));
        let k1 = Dag::k1("v").unwrap();
        assert!(descendants_from_lxt_clusters(&clusters(&k1), NONE).unwrap().same_family(&descendants(&k1)));
    }

    #[test]
    fn explicit_original_leaves() {
        let c = clusters(&lxt(&crossed()).unwrap());
        let d = descendants_from_lxt_clusters(&c, Some(&["x", "y"][..])).unwrap();
        assert!(d.same_family(&descendants(&crossed())));
        let odd = SetSystem::from_labels(&["x", "q"], &[vec!["x"], vec!["q"], vec!["x", "q"]]).unwrap();
        assert!(matches!(descendants_from_lxt_clusters(&odd, Some(&["x"][..])), Err(Error::MalformedInput(_))));
    }

    #[test]
    fn rebuild_from_descendants() {
        assert!(rebuild_sf_from_descendants(&descendants(&shortcut())).unwrap().same_labeled(&path3()));
        assert!(rebuild_sf_from_descendants(&descendants(&crossed())).unwrap().same_labeled(&crossed()));
        let k1 = Dag::k1("v").unwrap();
        assert!(rebuild_sf_from_descendants(&descendants(&k1)).unwrap().same_labeled(&k1));
    }

    #[test]
    fn rebuild_rejects_bad_families() {
        let s = SetSystem::from_labels(&["x", "y"], &[vec!["x", "y"]]).unwrap();
        assert!(matches!(rebuild_sf_from_descendants(&s), Err(Error::InconsistentFamily(_))));
        let s = SetSystem::from_labels(&["x", "y", "z"], &[vec!["x", "y"], vec!["y", "z"], vec!["z"]]).unwrap();
        assert!(matches!(rebuild_sf_from_descendants(&s), Err(Error::InconsistentFamily(_))));
        let s = SetSystem::from_labels(&["x", "y"], &[vec!["x"], vec!["y"]]).unwrap();
        assert!(rebuild_sf_from_descendants(&s).is_ok());
    }

    #[test]
    fn lop_hasse_examples() {
        assert!(verify_lop_hasse_reconstruction(&crossed(), 24).unwrap());
        assert!(verify_lop_hasse_reconstruction(&shortcut(), 24).unwrap());
        assert!(verify_lop_hasse_reconstruction(&Dag::k1("v").unwrap(), 24).unwrap());
    }
}
