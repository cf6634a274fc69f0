//! Predicate evaluation and its human and JSON renderings.

use std::time::Instant;

use clap::ValueEnum;
use lcadag::lca::{self, GlobalLcaReport, Route, Witness as LcaWitness};
use lcadag::level1::{block_decomposition, Block};
use lcadag::minors::minor_counterexample;
use lcadag::setsys::clusters;
use lcadag::transform::is_regular;
use lcadag::{Dag, VertexSet};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::Caps;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Predicate {
    GlobalLca,
    LcaRelevant,
    Pcc,
    Regular,
    Level1,
    Galled,
    JoinSemilattice,
    MinorTheorem,
}

impl Predicate {
    pub fn name(self) -> &'static str {
        match self {
            Predicate::GlobalLca => "global-lca",
            Predicate::LcaRelevant => "lca-relevant",
            Predicate::Pcc => "pcc",
            Predicate::Regular => "regular",
            Predicate::Level1 => "level1",
            Predicate::Galled => "galled",
            Predicate::JoinSemilattice => "join-semilattice",
            Predicate::MinorTheorem => "minor-theorem",
        }
    }
}

/// Why a predicate fails: a kind tag plus either vertices or sets of vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub kind: &'static str,
    pub vertices: Option<Vec<String>>,
    pub sets: Option<Vec<Vec<String>>>,
}

impl Witness {
    fn vertices(kind: &'static str, v: Vec<String>) -> Self {
        Witness { kind, vertices: Some(v), sets: None }
    }

    fn sets(kind: &'static str, s: Vec<Vec<String>>) -> Self {
        Witness { kind, vertices: None, sets: Some(s) }
    }

    fn to_json(&self) -> Value {
        let mut m = serde_json::Map::new();
        m.insert("type".into(), json!(self.kind));
        if let Some(v) = &self.vertices {
            m.insert("vertices".into(), json!(v));
        }
        if let Some(s) = &self.sets {
            m.insert("sets".into(), json!(s));
        }
        Value::Object(m)
    }

    fn describe(&self) -> String {
        let set = |s: &[String]| format!("{{{}}}", s.join(","));
        match (self.kind, &self.vertices, &self.sets) {
            ("lca-query", _, Some(s)) => format!("LCA({}) = {}", set(&s[0]), set(&s[1])),
            ("join", _, Some(s)) => format!("{} has minimal upper bounds {}", set(&s[0]), set(&s[1])),
            ("descendant-pair", _, Some(s)) => {
                format!("D({}) ∩ D({}) = {} is not a descendant set", s[0][0], s[1][0], set(&s[2]))
            }
            ("k22", _, Some(s)) => {
                let paths: Vec<String> = s.iter().map(|p| p.join("->")).collect();
                format!("strict K22 without X or X' subdivision: {}", paths.join(", "))
            }
            (kind, Some(v), _) => format!("{kind} {}", set(v)),
            (kind, _, _) => kind.to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub predicate: Predicate,
    pub holds: bool,
    pub routes: Option<Vec<Route>>,
    pub witness: Option<Witness>,
    pub timing_ms: f64,
}

impl Report {
    pub fn exit_code(&self) -> u8 {
        if self.holds {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = serde_json::Map::new();
        m.insert("predicate".into(), json!(self.predicate.name()));
        m.insert("holds".into(), json!(self.holds));
        match self.routes.as_deref() {
            Some([one]) => {
                m.insert("route".into(), json!(one.name()));
            }
            Some(many) => {
                m.insert("routes".into(), json!(many.iter().map(|r| r.name()).collect::<Vec<_>>()));
            }
            None => {}
        }
        m.insert("witness".into(), self.witness.as_ref().map_or(Value::Null, Witness::to_json));
        m.insert("timing_ms".into(), json!(self.timing_ms));
        Value::Object(m)
    }

    pub fn to_text(&self) -> String {
        let verdict = if self.holds { "holds" } else { "fails" };
        let mut out = format!("{}: {verdict}", self.predicate.name());
        if let Some(routes) = &self.routes {
            let names: Vec<&str> = routes.iter().map(|r| r.name()).collect();
            out.push_str(&format!(" (routes: {})", names.join(", ")));
        }
        if let Some(w) = &self.witness {
            out.push_str(&format!("\nwitness: {}", w.describe()));
        } else if !self.holds {
            out.push_str("\nwitness: none available");
        }
        out
    }
}

fn sorted(g: &Dag, s: &VertexSet) -> Vec<String> {
    let mut l = g.labels_of(s);
    l.sort();
    l
}

fn label_all(g: &Dag, vs: impl IntoIterator<Item = usize>) -> Vec<String> {
    vs.into_iter().map(|v| g.label(v).to_string()).collect()
}

fn multiple_roots(g: &Dag) -> Option<Witness> {
    (!g.is_network()).then(|| Witness::vertices("multiple-roots", sorted(g, &g.roots())))
}

fn from_lca_witness(g: &Dag, w: &LcaWitness) -> Witness {
    match w {
        LcaWitness::Query(q) => Witness::sets("lca-query", vec![sorted(g, &q.query), sorted(g, &q.lca)]),
        LcaWitness::DescendantPair { first, second, meet } => {
            Witness::sets("descendant-pair", vec![label_all(g, [*first]), label_all(g, [*second]), sorted(g, meet)])
        }
        LcaWitness::MultipleRoots(r) => Witness::vertices("multiple-roots", sorted(g, r)),
    }
}

/// Runs the global lca recognition on the chosen routes; disagreement is an
/// invariant violation.
fn global_lca(g: &Dag, routes: &[Route]) -> Result<(bool, Option<Witness>), CliError> {
    let reports: Vec<GlobalLcaReport> = routes.iter().map(|&r| lca::recognize(g, r)).collect();
    let holds = reports[0].holds;
    if let Some(odd) = reports.iter().find(|r| r.holds != holds) {
        return Err(CliError::Invariant(format!(
            "route {} says {} but route {} says {}",
            reports[0].route, holds, odd.route, odd.holds
        )));
    }
    let witness = reports.iter().find_map(|r| r.witness.as_ref()).map(|w| from_lca_witness(g, w));
    Ok((holds, witness))
}

fn lca_relevant(g: &Dag) -> Option<Witness> {
    let c = clusters(g);
    for u in g.vertices() {
        for v in u + 1..g.n() {
            if c.member_of(u) == c.member_of(v) {
                return Some(Witness::vertices("equal-clusters", label_all(g, [u, v])));
            }
        }
    }
    pcc(g)
}

fn pcc(g: &Dag) -> Option<Witness> {
    lca::pcc_violation(g).map(|(u, v)| Witness::vertices("pcc-pair", label_all(g, [u, v])))
}

fn level1(g: &Dag) -> Option<Witness> {
    multiple_roots(g).or_else(|| {
        block_decomposition(g)
            .iter()
            .map(Block::hybrids)
            .find(|h| h.len() > 1)
            .map(|h| Witness::vertices("block-hybrids", sorted(g, &h)))
    })
}

fn galled(g: &Dag) -> Option<Witness> {
    multiple_roots(g).or_else(|| {
        block_decomposition(g)
            .iter()
            .find(|b| !b.is_gall())
            .map(|b| Witness::vertices("non-gall-block", sorted(g, &b.vertices)))
    })
}

fn minor_theorem(g: &Dag, caps: &Caps) -> Result<Option<Witness>, CliError> {
    if let Some(w) = multiple_roots(g) {
        return Ok(Some(w));
    }
    Ok(minor_counterexample(g, caps.max_vertices)?
        .map(|k| Witness::sets("k22", k.paths.iter().map(|p| label_all(g, p.iter().copied())).collect())))
}

pub fn evaluate(g: &Dag, p: Predicate, route: Option<Route>, caps: &Caps) -> Result<Report, CliError> {
    let start = Instant::now();
    let by_witness = |w: Option<Witness>| (w.is_none(), w);
    let mut routes = None;
    let (holds, witness) = match p {
        Predicate::GlobalLca => {
            let chosen = route.map_or_else(|| Route::ALL.to_vec(), |r| vec![r]);
            let verdict = global_lca(g, &chosen)?;
            routes = Some(chosen);
            verdict
        }
        Predicate::LcaRelevant => by_witness(lca_relevant(g)),
        Predicate::Pcc => by_witness(pcc(g)),
        // No compact witness for a failed regularity check.
        Predicate::Regular => (is_regular(g), None),
        Predicate::Level1 => by_witness(level1(g)),
        Predicate::Galled => by_witness(galled(g)),
        Predicate::JoinSemilattice => by_witness(
            lca::join_violation(&g.reachability())
                .map(|(x, y, ubs)| Witness::sets("join", vec![sorted(g, &VertexSet::pair(x, y)), sorted(g, &ubs)])),
        ),
        Predicate::MinorTheorem => by_witness(minor_theorem(g, caps)?),
    };
    Ok(Report { predicate: p, holds, routes, witness, timing_ms: start.elapsed().as_secs_f64() * 1e3 })
}
