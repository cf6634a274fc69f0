//! Set systems derived from a DAG and their structural predicates.
//!
//! A [`SetSystem`] stores its members over a label universe so that systems
//! coming from different graphs (or from a file) can be compared as
//! families. Members are kept distinct and in canonical order: by size,
//! then lexicographically by id.

use std::collections::{BTreeSet, HashMap};

use crate::dag::{Dag, Vertex, VertexSet};
use crate::error::{Error, Result};

/// Default bound on the number of subsets enumerated by exhaustive checks.
pub const DEFAULT_MAX_SUBSETS: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    universe: Vec<String>,
    ground: VertexSet,
    members: Vec<VertexSet>,
    witness: Option<Vec<usize>>,
}

impl SetSystem {
    /// Builds a system from possibly repeated sets. Ids index `universe`.
    pub fn new(universe: Vec<String>, ground: VertexSet, sets: impl IntoIterator<Item = VertexSet>) -> Result<Self> {
        if let Some(v) = ground.iter().find(|&v| v >= universe.len()) {
            return Err(Error::MalformedInput(format!("ground element #{v} outside universe")));
        }
        let mut members: Vec<VertexSet> = sets.into_iter().collect();
        if let Some(bad) = members.iter().find(|m| !m.is_subset(&ground)) {
            return Err(Error::MalformedInput(format!("member {bad} is not a subset of the ground set")));
        }
        members.sort_by(canonical_cmp);
        members.dedup();
        Ok(SetSystem { universe, ground, members, witness: None })
    }

    /// Builds a system from label lists; the ground set is given explicitly.
    pub fn from_labels<S: AsRef<str>>(ground: &[S], sets: &[Vec<S>]) -> Result<Self> {
        let universe: Vec<String> = ground.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, l) in universe.iter().enumerate() {
            if index.insert(l.as_str(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let members =
            sets.iter()
                .map(|set| {
                    set.iter()
                        .map(|l| {
                            index.get(l.as_ref()).copied().ok_or_else(|| {
                                Error::MalformedInput(format!("{:?} is not in the ground set", l.as_ref()))
                            })
                        })
                        .collect::<Result<VertexSet>>()
                })
                .collect::<Result<Vec<_>>>()?;
        let ground = (0..universe.len()).collect();
        SetSystem::new(universe, ground, members)
    }

    /// Builds a system with a vertex witness: `defining[v]` is the defining set of `v`.
    fn with_witness(universe: Vec<String>, ground: VertexSet, defining: Vec<VertexSet>) -> Self {
        let mut sys = SetSystem::new(universe, ground, defining.iter().cloned()).expect("sets lie in the ground set");
        let index = sys.index();
        sys.witness = Some(defining.iter().map(|s| index[s]).collect());
        sys
    }

    fn index(&self) -> HashMap<&VertexSet, usize> {
        self.members.iter().enumerate().map(|(i, m)| (m, i)).collect()
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn ground(&self) -> &VertexSet {
        &self.ground
    }

    pub fn members(&self) -> &[VertexSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, set: &VertexSet) -> bool {
        self.members.binary_search_by(|m| canonical_cmp(m, set)).is_ok()
    }

    /// Index of the member that `v` defines, when the system was derived per vertex.
    pub fn witness(&self, v: Vertex) -> Option<usize> {
        self.witness.as_ref().map(|w| w[v])
    }

    /// The member defined by `v`, when the system was derived per vertex.
    pub fn member_of(&self, v: Vertex) -> Option<&VertexSet> {
        self.witness(v).map(|i| &self.members[i])
    }

    pub fn label(&self, v: Vertex) -> &str {
        &self.universe[v]
    }

    pub fn labels_of(&self, set: &VertexSet) -> Vec<String> {
        let mut out: Vec<String> = set.iter().map(|v| self.universe[v].clone()).collect();
        out.sort();
        out
    }

    /// Members as label lists, sorted by size and then lexicographically.
    pub fn sorted_labels(&self) -> Vec<Vec<String>> {
        let mut out: Vec<Vec<String>> = self.members.iter().map(|m| self.labels_of(m)).collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// The family as a label-level set, for comparing systems across universes.
    pub fn family(&self) -> BTreeSet<Vec<String>> {
        self.members.iter().map(|m| self.labels_of(m)).collect()
    }

    pub fn same_family(&self, other: &SetSystem) -> bool {
        self.family() == other.family()
    }

    /// First pair of members (by index) whose non-empty intersection is not a member.
    pub fn closed_violation(&self) -> Option<(usize, usize)> {
        let index = self.index();
        for i in 0..self.members.len() {
            for j in i + 1..self.members.len() {
                let meet = self.members[i].intersection(&self.members[j]);
                if !meet.is_empty() && !index.contains_key(&meet) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_closed(&self) -> bool {
        self.closed_violation().is_none()
    }

    /// All singletons of the ground set present and the empty set absent.
    pub fn is_grounded(&self) -> bool {
        !self.contains(&VertexSet::new()) && self.ground.iter().all(|x| self.contains(&VertexSet::singleton(x)))
    }

    pub fn is_rooted(&self) -> bool {
        self.contains(&self.ground)
    }

    pub fn is_clustering_system(&self) -> bool {
        self.is_grounded() && self.is_rooted()
    }

    /// Intersection of all members containing `a`.
    pub fn closure(&self, a: &VertexSet) -> Result<VertexSet> {
        if a.is_empty() {
            return Err(Error::EmptyQuery);
        }
        let mut result: Option<VertexSet> = None;
        for m in self.members.iter().filter(|m| a.is_subset(m)) {
            result = Some(match result {
                None => m.clone(),
                Some(r) => r.intersection(m),
            });
        }
        result.ok_or(Error::NoSuperset)
    }

    /// First pair `{x, y}` (with `x = y` allowed) lacking a unique
    /// inclusion-minimal member that contains it.
    pub fn pre_binary_violation(&self) -> Option<VertexSet> {
        for x in &self.ground {
            for y in self.ground.iter().filter(|&y| y >= x) {
                let pair = VertexSet::pair(x, y);
                let supers: Vec<&VertexSet> = self.members.iter().filter(|m| pair.is_subset(m)).collect();
                let minimal =
                    supers.iter().filter(|m| !supers.iter().any(|o| o.len() < m.len() && o.is_subset(m))).count();
                if minimal != 1 {
                    return Some(pair);
                }
            }
        }
        None
    }

    pub fn is_pre_binary(&self) -> bool {
        self.pre_binary_violation().is_none()
    }

    /// First non-empty `A` with `|A| <= k` (size-lexicographic order) whose
    /// closure is undefined or not a member.
    pub fn pre_k_ary_violation(&self, k: usize, max_subsets: usize) -> Result<Option<VertexSet>> {
        let m = self.ground.len();
        if k == 0 || k > m.max(1) {
            return Err(Error::MalformedInput(format!("k = {k} must lie in 1..={m}")));
        }
        let total = (1..=k).fold(0usize, |acc, s| acc.saturating_add(binomial(m, s)));
        if total > max_subsets {
            return Err(Error::SizeLimitExceeded { size: total, cap: max_subsets });
        }
        let ground = self.ground.as_slice();
        for size in 1..=k {
            let mut idx: Vec<usize> = (0..size).collect();
            loop {
                let a: VertexSet = idx.iter().map(|&i| ground[i]).collect();
                match self.closure(&a) {
                    Ok(cl) if self.contains(&cl) => {}
                    _ => return Ok(Some(a)),
                }
                if !next_combination(&mut idx, m) {
                    break;
                }
            }
        }
        Ok(None)
    }

    pub fn is_pre_k_ary(&self, k: usize, max_subsets: usize) -> Result<bool> {
        Ok(self.pre_k_ary_violation(k, max_subsets)?.is_none())
    }
}

fn canonical_cmp(a: &VertexSet, b: &VertexSet) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Advances `idx` to the next k-combination of `0..n` in lexicographic order.
pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The clustering system: leaves below each vertex, over `L(g)`.
pub fn clusters(g: &Dag) -> SetSystem {
    let p = g.reachability();
    let leaves = g.leaves();
    let defining = g.vertices().map(|v| VertexSet::from_bits(p.down_set(v)).intersection(&leaves)).collect();
    SetSystem::with_witness(g.labels().to_vec(), leaves, defining)
}

/// The descendant system over `V(g)`.
pub fn descendants(g: &Dag) -> SetSystem {
    let p = g.reachability();
    let defining = g.vertices().map(|v| VertexSet::from_bits(p.down_set(v))).collect();
    SetSystem::with_witness(g.labels().to_vec(), g.vertices().collect(), defining)
}

/// The ancestor system over `V(g)`.
pub fn ancestors(g: &Dag) -> SetSystem {
    let p = g.reachability();
    let defining = g.vertices().map(|v| VertexSet::from_bits(p.up_set(v))).collect();
    SetSystem::with_witness(g.labels().to_vec(), g.vertices().collect(), defining)
}

/// Vertices between `u` and `v`: `D(u) ∩ ANC(v)`.
pub fn intermediary(g: &Dag, u: Vertex, v: Vertex) -> VertexSet {
    let p = g.reachability();
    let mut bits = p.down_set(u).clone();
    bits.intersect_with(p.up_set(v));
    VertexSet::from_bits(&bits)
}

/// The intermediary system over `V(g)`; contains `∅` whenever some ordered
/// pair is not joined by a directed path.
pub fn intermediaries(g: &Dag) -> SetSystem {
    let p = g.reachability();
    let mut sets = Vec::with_capacity(g.n() * g.n());
    for u in g.vertices() {
        for v in g.vertices() {
            let mut bits = p.down_set(u).clone();
            bits.intersect_with(p.up_set(v));
            sets.push(VertexSet::from_bits(&bits));
        }
    }
    SetSystem::new(g.labels().to_vec(), g.vertices().collect(), sets).expect("subsets of V")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn crossed() -> Dag {
        Dag::from_edges(&[("a", "b"), ("a", "c"), ("b", "x"), ("b", "y"), ("c", "x"), ("c", "y")], &[]).unwrap()
    }

    fn path3() -> Dag {
        Dag::from_edges(&[("a", "b"), ("b", "c")], &[]).unwrap()
    }

    fn k22() -> Dag {
        Dag::from_edges(&[("r1", "l1"), ("r1", "l2"), ("r2", "l1"), ("r2", "l2")], &[]).unwrap()
    }

    fn lists(v: &[&[&str]]) -> Vec<Vec<String>> {
        v.iter().map(|s| s.iter().map(|x| x.to_string()).collect()).collect()
    }

    #[test]
    fn cluster_systems() {
        assert_eq!(clusters(&crossed()).sorted_labels(), lists(&[&["x"], &["y"], &["x", "y"]]));
        assert_eq!(clusters(&path3()).sorted_labels(), lists(&[&["c"]]));
        assert_eq!(clusters(&k22()).sorted_labels(), lists(&[&["l1"], &["l2"], &["l1", "l2"]]));
        let c = clusters(&crossed());
        assert_eq!(c.member_of(0), c.member_of(1));
    }

    #[test]
    fn descendant_systems() {
        let d = descendants(&crossed());
        assert!(d.family().contains(&vec!["b".to_string(), "x".into(), "y".into()]));
        assert!(d.family().contains(&vec!["c".to_string(), "x".into(), "y".into()]));
        assert_eq!(d.len(), 5);
        assert_eq!(descendants(&path3()).sorted_labels(), lists(&[&["c"], &["b", "c"], &["a", "b", "c"]]));
        let g = crossed();
        for v in g.vertices() {
            assert_eq!(d.contains(&VertexSet::singleton(v)), g.is_leaf(v));
        }
    }

    #[test]
    fn ancestor_systems() {
        assert_eq!(ancestors(&path3()).sorted_labels(), lists(&[&["a"], &["a", "b"], &["a", "b", "c"]]));
        let g = crossed();
        let a = ancestors(&g);
        assert_eq!(a.labels_of(a.member_of(g.id("x").unwrap()).unwrap()), ["a", "b", "c", "x"]);
        assert!(a.same_family(&descendants(&g.reverse())));
    }

    #[test]
    fn intermediary_systems() {
        let g = path3();
        assert_eq!(g.labels_of(&intermediary(&g, 0, 2)), ["a", "b", "c"]);
        assert!(intermediary(&g, 2, 0).is_empty());
        let b = intermediaries(&g);
        assert!(b.contains(&VertexSet::new()));
        assert!(!b.is_grounded());
        let f = crossed();
        assert_eq!(f.labels_of(&intermediary(&f, 0, 3)), ["a", "b", "c", "x"]);
        let k1 = Dag::k1("v").unwrap();
        assert_eq!(intermediaries(&k1).sorted_labels(), lists(&[&["v"]]));
    }

    #[test]
    fn closedness() {
        assert!(clusters(&crossed()).is_closed());
        let d = descendants(&crossed());
        let (i, j) = d.closed_violation().unwrap();
        assert_eq!(d.labels_of(&d.members()[i]), ["b", "x", "y"]);
        assert_eq!(d.labels_of(&d.members()[j]), ["c", "x", "y"]);
        let laminar =
            SetSystem::from_labels(&["a", "b", "c", "d"], &[vec!["a"], vec!["a", "b"], vec!["c", "d"], vec!["d"]])
                .unwrap();
        assert!(laminar.is_closed());
    }

    #[test]
    fn grounded_and_rooted() {
        assert!(clusters(&crossed()).is_clustering_system());
        let s = SetSystem::from_labels(&["x", "y"], &[vec!["x"], vec!["y"]]).unwrap();
        assert!(s.is_grounded());
        assert!(!s.is_rooted());
    }

    #[test]
    fn closure_function() {
        let c = clusters(&crossed());
        let g = crossed();
        let xy = g.vertex_set(&["x", "y"]).unwrap();
        assert_eq!(c.closure(&xy).unwrap(), xy);
        let s = SetSystem::from_labels(&["x", "y", "z", "w"], &[vec!["x", "y", "z"], vec!["x", "y", "w"]]).unwrap();
        assert_eq!(s.labels_of(&s.closure(&VertexSet::singleton(0)).unwrap()), ["x", "y"]);
        let c = clusters(&k22());
        let l = k22().vertex_set(&["l1", "l2"]).unwrap();
        assert_eq!(c.closure(&l).unwrap(), l);
        let s = SetSystem::from_labels(&["x", "y"], &[vec!["x"]]).unwrap();
        assert_eq!(s.closure(&VertexSet::singleton(1)), Err(Error::NoSuperset));
        assert_eq!(s.closure(&VertexSet::new()), Err(Error::EmptyQuery));
    }

    #[test]
    fn pre_binary_and_k_ary() {
        assert!(clusters(&crossed()).is_pre_binary());
        let s = SetSystem::from_labels(
            &["x", "y", "z", "w"],
            &[
                vec!["x", "y", "z"],
                vec!["x", "y", "w"],
                vec!["x"],
                vec!["y"],
                vec!["z"],
                vec!["w"],
                vec!["x", "y", "z", "w"],
            ],
        )
        .unwrap();
        assert_eq!(s.pre_binary_violation(), Some(VertexSet::pair(0, 1)));
        assert_eq!(s.pre_k_ary_violation(2, DEFAULT_MAX_SUBSETS).unwrap(), Some(VertexSet::pair(0, 1)));
        assert!(s.is_pre_k_ary(1, DEFAULT_MAX_SUBSETS).unwrap());
        assert!(matches!(s.pre_k_ary_violation(4, 3), Err(Error::SizeLimitExceeded { size: 15, cap: 3 })));
    }

    #[test]
    fn combinations_are_lexicographic() {
        let mut idx = vec![0, 1];
        let mut seen = vec![idx.clone()];
        while next_combination(&mut idx, 4) {
            seen.push(idx.clone());
        }
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(binomial(12, 6), 924);
    }
}
