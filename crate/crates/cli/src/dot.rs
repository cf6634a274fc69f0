//! A small DOT subset: `digraph [name] { ... }` with node statements and
//! edge statements (`a -> b -> c;`). Attributes, subgraphs and undirected
//! edges are rejected.

use lcadag::{Dag, DagBuilder};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Id(String),
    Arrow,
    Open,
    Close,
    Semi,
}

/// Tokens with their 1-based line numbers.
fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, CliError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1;
    let err = |line: usize, msg: &str| CliError::Input(format!("line {line}: {msg}"));
    while let Some(c) = chars.next() {
        match c {
            '\n' => line += 1,
            c if c.is_whitespace() => {}
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
            }
            '/' if chars.peek() == Some(&'/') => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
            }
            '/' if chars.peek() == Some(&'*') => {
                chars.next();
                let mut prev = ' ';
                loop {
                    let Some(c) = chars.next() else {
                        return Err(err(line, "unterminated comment"));
                    };
                    if c == '\n' {
                        line += 1;
                    }
                    if prev == '*' && c == '/' {
                        break;
                    }
                    prev = c;
                }
            }
            '{' => out.push((Token::Open, line)),
            '}' => out.push((Token::Close, line)),
            ';' => out.push((Token::Semi, line)),
            '-' if chars.peek() == Some(&'>') => {
                chars.next();
                out.push((Token::Arrow, line));
            }
            '"' => {
                let start = line;
                let mut s = String::new();
                loop {
                    match chars.next() {
                        None => return Err(err(start, "unterminated string")),
                        Some('"') => break,
                        Some('\\') => match chars.next() {
                            Some(e @ ('"' | '\\')) => s.push(e),
                            Some(e) => {
                                s.push('\\');
                                s.push(e);
                            }
                            None => return Err(err(start, "unterminated string")),
                        },
                        Some(c) => {
                            if c == '\n' {
                                line += 1;
                            }
                            s.push(c);
                        }
                    }
                }
                out.push((Token::Id(s), start));
            }
            c if is_bare(c) => {
                let mut s = String::from(c);
                while chars.peek().is_some_and(|&c| is_bare(c)) {
                    s.push(chars.next().unwrap());
                }
                out.push((Token::Id(s), line));
            }
            '[' | '=' => return Err(err(line, "attributes are not supported")),
            '-' => return Err(err(line, "only directed edges `->` are supported")),
            c => return Err(err(line, &format!("unexpected character {c:?}"))),
        }
    }
    Ok(out)
}

fn is_bare(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '.') || !c.is_ascii()
}

/// Whether `text` looks like DOT rather than an edge list.
pub fn looks_like_dot(text: &str) -> bool {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#') && !l.starts_with("//"))
        .is_some_and(|l| l.starts_with("digraph") || l.starts_with("strict"))
}

pub fn parse_dot(text: &str) -> Result<Dag, CliError> {
    let tokens = tokenize(text)?;
    let mut it = tokens.into_iter().peekable();
    let err = |line: usize, msg: &str| CliError::Input(format!("line {line}: {msg}"));
    match it.next() {
        Some((Token::Id(k), _)) if k == "digraph" => {}
        Some((Token::Id(k), line)) if k == "strict" || k == "graph" => {
            return Err(err(line, "only plain `digraph` is supported"));
        }
        Some((_, line)) => return Err(err(line, "expected `digraph`")),
        None => return Err(CliError::Input("empty DOT input".into())),
    }
    if matches!(it.peek(), Some((Token::Id(_), _))) {
        it.next();
    }
    match it.next() {
        Some((Token::Open, _)) => {}
        Some((_, line)) => return Err(err(line, "expected `{`")),
        None => return Err(CliError::Input("unexpected end of input".into())),
    }
    let mut b = DagBuilder::new();
    let lib = |line: usize| move |e: lcadag::Error| CliError::Input(format!("line {line}: {e}"));
    loop {
        match it.next() {
            Some((Token::Close, _)) => break,
            Some((Token::Semi, _)) => {}
            Some((Token::Id(first), line)) => {
                if matches!(first.as_str(), "subgraph" | "node" | "edge" | "graph") {
                    return Err(err(line, &format!("`{first}` statements are not supported")));
                }
                b.vertex(&first).map_err(lib(line))?;
                let mut prev = first;
                while matches!(it.peek(), Some((Token::Arrow, _))) {
                    it.next();
                    match it.next() {
                        Some((Token::Id(next), line)) => {
                            b.edge(&prev, &next).map_err(lib(line))?;
                            prev = next;
                        }
                        Some((_, line)) => return Err(err(line, "expected a vertex after `->`")),
                        None => return Err(CliError::Input("unexpected end of input".into())),
                    }
                }
            }
            Some((_, line)) => return Err(err(line, "expected a statement")),
            None => return Err(CliError::Input("missing `}`".into())),
        }
    }
    if let Some((_, line)) = it.next() {
        return Err(err(line, "trailing input after `}`"));
    }
    Ok(b.build()?)
}

fn quote(label: &str) -> String {
    format!("\"{}\"", label.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Writes every vertex as a node statement, then the edges in id order.
pub fn write_dot(g: &Dag) -> String {
    let mut out = String::from("digraph G {\n");
    for v in g.vertices() {
        out.push_str(&format!("  {};\n", quote(g.label(v))));
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("  {} -> {};\n", quote(g.label(u)), quote(g.label(v))));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_subset() {
        let g = parse_dot("digraph g { // comment\n a -> b -> c; \"a\" -> c\n d; }").unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 3);
        assert!(g.has_edge(g.id("a").unwrap(), g.id("c").unwrap()));
    }

    #[test]
    fn round_trip() {
        let g = Dag::from_edges(&[("{x,y}", "x"), ("q\"t", "x")], &["iso"]).unwrap();
        assert!(parse_dot(&write_dot(&g)).unwrap().same_labeled(&g));
    }

    #[test]
    fn rejects_outside_subset() {
        for bad in [
            "digraph { a -> b [color=red]; }",
            "graph { a -- b }",
            "digraph { a -> }",
            "digraph { a -> b",
            "digraph { subgraph s { a } }",
        ] {
            assert!(matches!(parse_dot(bad), Err(CliError::Input(_))), "{bad}");
        }
        let Err(CliError::Input(msg)) = parse_dot("digraph {\n a -> b;\n a -> a;\n}") else { panic!() };
        assert!(msg.starts_with("line 3"), "{msg}");
    }

    #[test]
    fn detection() {
        assert!(looks_like_dot("# c\n\ndigraph {}"));
        assert!(!looks_like_dot("a b\n"));
    }
}
