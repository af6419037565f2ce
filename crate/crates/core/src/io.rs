//! Instance and assignment file formats.
//!
//! * DIMACS `.col`: `c` comments, one `p edge N M` header, `e u v` lines
//!   with 1-based ids.
//! * Plain edge list: `u v` per line, 0-based, `#` comments.
//! * Assignment: one color per line, line `i` holds the color of node `i`.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{ColorAssignment, Graph};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Reject repeated or reversed edge lines instead of collapsing them.
    pub strict: bool,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn parse_dimacs(text: &str) -> Result<Graph> {
    parse_dimacs_with(text, ParseOptions::default())
}

pub fn parse_dimacs_with(text: &str, opts: ParseOptions) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("c") => continue,
            Some("p") => {
                if n.is_some() {
                    return Err(parse_err(lineno, "duplicate 'p' line"));
                }
                let format = tokens
                    .next()
                    .ok_or_else(|| parse_err(lineno, "missing format in 'p' line"))?;
                if format != "edge" && format != "col" {
                    return Err(parse_err(lineno, format!("unsupported format '{format}'")));
                }
                let nodes = parse_usize(tokens.next(), lineno, "node count")?;
                // the declared edge count is informational: many published
                // files count each edge twice
                let _ = parse_usize(tokens.next(), lineno, "edge count")?;
                if tokens.next().is_some() {
                    return Err(parse_err(lineno, "trailing tokens in 'p' line"));
                }
                n = Some(nodes);
            }
            Some("e") => {
                let nodes = n.ok_or_else(|| parse_err(lineno, "edge before 'p' line"))?;
                let u = parse_usize(tokens.next(), lineno, "edge endpoint")?;
                let v = parse_usize(tokens.next(), lineno, "edge endpoint")?;
                if tokens.next().is_some() {
                    return Err(parse_err(lineno, "trailing tokens in 'e' line"));
                }
                for id in [u, v] {
                    if id == 0 || id > nodes {
                        return Err(parse_err(
                            lineno,
                            format!("node id {id} outside 1..={nodes}"),
                        ));
                    }
                }
                if u == v {
                    return Err(parse_err(lineno, format!("self-loop on node {u}")));
                }
                edges.push((lineno, u - 1, v - 1));
            }
            Some(other) => {
                return Err(parse_err(lineno, format!("unknown line type '{other}'")));
            }
            None => continue,
        }
    }
    let n = n.ok_or_else(|| parse_err(0, "missing 'p' line"))?;
    if opts.strict {
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        for &(lineno, u, v) in &edges {
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(parse_err(lineno, format!("duplicate edge {} {}", u + 1, v + 1)));
            }
        }
    }
    Graph::from_edges(n, edges.into_iter().map(|(_, u, v)| (u, v)))
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("malformed {what} '{tok}'")))
}

pub fn write_dimacs(g: &Graph) -> String {
    let mut out = String::with_capacity(16 + 12 * g.m());
    writeln!(out, "p edge {} {}", g.n(), g.m()).unwrap();
    for &(u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    out
}

/// Parses a 0-based edge list. The node count is one more than the largest
/// id seen unless `n` is supplied.
pub fn parse_edge_list(text: &str, n: Option<usize>) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut max_id = None::<usize>;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let u = parse_usize(tokens.next(), lineno, "node id")?;
        let v = parse_usize(tokens.next(), lineno, "node id")?;
        if tokens.next().is_some() {
            return Err(parse_err(lineno, "expected exactly two ids"));
        }
        if u == v {
            return Err(parse_err(lineno, format!("self-loop on node {u}")));
        }
        if let Some(n) = n {
            if u >= n || v >= n {
                return Err(parse_err(lineno, format!("node id outside 0..{n}")));
            }
        }
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.push((u, v));
    }
    let n = n.unwrap_or_else(|| max_id.map_or(0, |m| m + 1));
    Graph::from_edges(n, edges)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "# {} nodes, {} edges", g.n(), g.m()).unwrap();
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

/// Reads a graph, choosing the format by extension: `.col`/`.dimacs` are
/// DIMACS, anything else is tried as DIMACS first and then as an edge list.
pub fn read_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)?;
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    match ext {
        "col" | "dimacs" => parse_dimacs(&text),
        "txt" | "edges" | "el" => parse_edge_list(&text, None),
        _ => parse_dimacs(&text).or_else(|e| parse_edge_list(&text, None).map_err(|_| e)),
    }
}

pub fn write_assignment(a: &ColorAssignment) -> String {
    let mut out = String::with_capacity(3 * a.len());
    for &c in a.colors() {
        writeln!(out, "{c}").unwrap();
    }
    out
}

pub fn parse_assignment(text: &str, k: usize) -> Result<ColorAssignment> {
    let mut colors = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        colors.push(parse_usize(Some(line), idx + 1, "color")?);
    }
    ColorAssignment::new(colors, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_small_instance() {
        let g = parse_dimacs("p edge 3 2\ne 1 2\ne 2 3").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn collapses_duplicates() {
        let g = parse_dimacs("p edge 2 2\ne 1 2\ne 2 1").unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
        let strict = parse_dimacs_with("p edge 2 2\ne 1 2\ne 2 1", ParseOptions { strict: true });
        assert!(matches!(strict, Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn isolated_nodes_kept() {
        let g = parse_dimacs("c comment\np edge 5 1\ne 1 2\n").unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.degree(4), 0);
    }

    #[test]
    fn errors_name_the_line() {
        let cases = [
            ("e 1 2\n", 1),
            ("p edge 3 1\np edge 3 1\n", 2),
            ("p edge 3 1\nc ok\ne 1 4\n", 3),
            ("p edge 3 1\ne 1 x\n", 2),
            ("p edge 3 1\ne 0 1\n", 2),
            ("p edge 3 1\nq 1 2\n", 2),
        ];
        for (text, line) in cases {
            match parse_dimacs(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
        assert!(matches!(
            parse_dimacs("c nothing\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn writes_empty_and_triangle() {
        assert_eq!(write_dimacs(&Graph::empty(1)), "p edge 1 0\n");
        let tri = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let text = write_dimacs(&tri);
        assert_eq!(text.lines().filter(|l| l.starts_with("e ")).count(), 3);
        assert!(text.contains("e 1 2\n") && text.contains("e 2 3\n") && text.contains("e 1 3\n"));
    }

    #[test]
    fn edge_list_format() {
        let g = parse_edge_list("# header\n0 1\n1 2 # trailing\n\n", None).unwrap();
        assert_eq!((g.n(), g.m()), (3, 2));
        let again = parse_edge_list(&write_edge_list(&g), Some(3)).unwrap();
        assert_eq!(again, g);
        assert!(parse_edge_list("0 5\n", Some(3)).is_err());
    }

    #[test]
    fn assignment_format() {
        let a = ColorAssignment::new(vec![2, 0, 1], 3).unwrap();
        let text = write_assignment(&a);
        assert_eq!(text, "2\n0\n1\n");
        assert_eq!(parse_assignment(&text, 3).unwrap(), a);
        assert!(parse_assignment("0\n3\n", 3).is_err());
    }
}
