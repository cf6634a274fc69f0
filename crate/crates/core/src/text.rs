//! Plain edge-list format: one `parent child` pair per line, `#` comments,
//! and `node <label>` lines for vertices without edges.

use crate::dag::{Dag, DagBuilder};
use crate::error::{Error, Result};

/// Parses an edge list. Ids follow first appearance.
pub fn parse_edge_list(text: &str) -> Result<Dag> {
    let mut b = DagBuilder::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |e: Error| match e {
            Error::InvalidLabel(_) | Error::SelfLoop(_) | Error::DuplicateEdge(..) => {
                Error::MalformedInput(format!("line {}: {e}", no + 1))
            }
            other => other,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            ["node", label] => {
                b.vertex(label).map_err(at)?;
            }
            [parent, child] => b.edge(parent, child).map_err(at)?,
            _ => {
                return Err(Error::MalformedInput(format!(
                    "line {}: expected `parent child` or `node <label>`",
                    no + 1
                )))
            }
        }
    }
    b.build()
}

/// Writes `g` as an edge list: isolated vertices first, then edges in id order.
pub fn write_edge_list(g: &Dag) -> String {
    let mut out = String::new();
    for v in g.vertices().filter(|&v| g.in_degree(v) == 0 && g.out_degree(v) == 0) {
        out.push_str(&format!("node {}\n", g.label(v)));
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("{} {}\n", g.label(u), g.label(v)));
    }
    out
}
