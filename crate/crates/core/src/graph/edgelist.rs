//! Human-writable edge-list text format.
//!
//! One item per line: a single `p <n> <m>` header first, then `e <u> <v>`
//! edges (m of them), optional `c <v> <color>` assignments, `#` comments
//! ignored anywhere.

use super::Graph;
use crate::error::GraphError;

pub fn parse(text: &str) -> Result<Graph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut colors: Vec<Option<u32>> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tok = line.split_whitespace();
        let kind = tok.next().unwrap();
        let fail = |reason: String| GraphError::EdgeList {
            line: line_no,
            reason,
        };
        match kind {
            "p" => {
                if header.is_some() {
                    return Err(fail("duplicate header".into()));
                }
                let n = parse_num(tok.next(), line_no, "n")?;
                let m = parse_num(tok.next(), line_no, "m")?;
                colors = vec![None; n];
                header = Some((n, m));
            }
            "e" => {
                let (n, _) = header.ok_or_else(|| fail("edge before header".into()))?;
                let u = parse_num(tok.next(), line_no, "u")?;
                let v = parse_num(tok.next(), line_no, "v")?;
                if u == v {
                    return Err(fail(format!("self-loop at vertex {u}")));
                }
                if u >= n || v >= n {
                    return Err(fail(format!("vertex index out of range (n = {n})")));
                }
                let e = (u.min(v), u.max(v));
                if edges.contains(&e) {
                    return Err(fail(format!("duplicate edge ({}, {})", e.0, e.1)));
                }
                edges.push(e);
            }
            "c" => {
                let (n, _) = header.ok_or_else(|| fail("color before header".into()))?;
                let v = parse_num(tok.next(), line_no, "v")?;
                let c = parse_num(tok.next(), line_no, "color")?;
                if v >= n {
                    return Err(GraphError::ColorForUnknownVertex { vertex: v, n });
                }
                colors[v] = Some(c as u32);
            }
            other => return Err(fail(format!("unknown line kind {other:?}"))),
        }
    }

    let (n, m) = header.ok_or(GraphError::EdgeList {
        line: 0,
        reason: "missing p header".into(),
    })?;
    if edges.len() != m {
        return Err(GraphError::EdgeList {
            line: 0,
            reason: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    let colors: Vec<u32> = colors.into_iter().map(|c| c.unwrap_or(0)).collect();
    Graph::new(n, edges, Some(colors))
}

pub fn encode(g: &Graph) -> String {
    let mut out = format!("p {} {}\n", g.n(), g.num_edges());
    for &(u, v) in g.edges() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    for (v, &c) in g.colors().iter().enumerate() {
        if c != 0 {
            out.push_str(&format!("c {v} {c}\n"));
        }
    }
    out
}

fn parse_num(tok: Option<&str>, line: usize, what: &str) -> Result<usize, GraphError> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| GraphError::EdgeList {
            line,
            reason: format!("missing or invalid {what}"),
        })
}
