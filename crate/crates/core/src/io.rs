//! Graph and partition file formats.
//!
//! METIS/Chaco graphs: a header `n m [fmt]` followed by one line per vertex
//! (1-indexed neighbor lists). `fmt` is read as three digits
//! `[sizes][vertex weights][edge weights]`; sizes are not supported.
//! Lines starting with `%` are comments.
//!
//! Edge lists: one `i j [weight]` per line, 1-indexed, each undirected edge
//! listed once; the vertex count is the largest index seen.
//!
//! Partition files hold one label per vertex line: `0` for shore A, `1` for
//! shore B, `2` for the separator.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Result, VsepError};
use crate::graph::WeightedGraph;
use crate::qp::Label;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Metis,
    EdgeList,
}

impl GraphFormat {
    /// Guesses the format from a file extension; anything that is not an
    /// edge-list extension is treated as METIS.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("edges" | "edgelist" | "el" | "txt") => GraphFormat::EdgeList,
            _ => GraphFormat::Metis,
        }
    }
}

impl FromStr for GraphFormat {
    type Err = VsepError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "metis" | "chaco" | "graph" => Ok(GraphFormat::Metis),
            "edgelist" | "edges" | "edge-list" => Ok(GraphFormat::EdgeList),
            other => Err(VsepError::InvalidArgument(format!(
                "unknown graph format '{other}'"
            ))),
        }
    }
}

/// A parsed graph together with the number of self-loops that were dropped.
#[derive(Clone, Debug)]
pub struct ParsedGraph {
    pub graph: WeightedGraph,
    pub dropped_self_loops: usize,
}

pub fn load_graph(path: impl AsRef<Path>, format: GraphFormat) -> Result<WeightedGraph> {
    let text = std::fs::read_to_string(path.as_ref())?;
    let parsed = match format {
        GraphFormat::Metis => parse_metis(&text)?,
        GraphFormat::EdgeList => parse_edge_list(&text)?,
    };
    if parsed.dropped_self_loops > 0 {
        log::warn!(
            "{}: dropped {} self-loop(s)",
            path.as_ref().display(),
            parsed.dropped_self_loops
        );
    }
    Ok(parsed.graph)
}

fn parse_err(line: usize, message: impl Into<String>) -> VsepError {
    VsepError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_num<T: FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} '{tok}'")))
}

pub fn parse_metis(text: &str) -> Result<ParsedGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l))
        .filter(|(_, l)| !l.trim_start().starts_with('%'));

    let (header_line, header) = loop {
        match lines.next() {
            Some((k, l)) if !l.trim().is_empty() => break (k, l),
            Some(_) => continue,
            None => return Err(parse_err(1, "missing header line")),
        }
    };
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() < 2 || head.len() > 4 {
        return Err(parse_err(header_line, "header must be 'n m [fmt [ncon]]'"));
    }
    let n: usize = parse_num(head[0], header_line, "vertex count")?;
    let m: usize = parse_num(head[1], header_line, "edge count")?;
    let fmt = head.get(2).copied().unwrap_or("0");
    if fmt.len() > 3 || !fmt.chars().all(|ch| ch == '0' || ch == '1') {
        return Err(parse_err(
            header_line,
            format!("unsupported fmt code '{fmt}'"),
        ));
    }
    let fmt = format!("{fmt:0>3}");
    let digits: Vec<bool> = fmt.chars().map(|ch| ch == '1').collect();
    if digits[0] {
        return Err(parse_err(
            header_line,
            "vertex sizes (fmt 1xx) are not supported",
        ));
    }
    let (vertex_weighted, edge_weighted) = (digits[1], digits[2]);
    if let Some(ncon) = head.get(3) {
        let ncon: usize = parse_num(ncon, header_line, "ncon")?;
        if ncon > 1 {
            return Err(parse_err(
                header_line,
                "multi-constraint weights are not supported",
            ));
        }
    }

    let mut weights = vec![1.0; n];
    // (neighbor, weight) per vertex, plus the line each vertex came from.
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    let mut vertex_line = vec![header_line; n];
    let mut loops = 0usize;
    for u in 0..n {
        let Some((line, content)) = lines.next() else {
            // missing trailing lines are isolated vertices
            break;
        };
        vertex_line[u] = line;
        let mut toks = content.split_whitespace();
        if vertex_weighted {
            let tok = toks
                .next()
                .ok_or_else(|| parse_err(line, "missing vertex weight"))?;
            let w: f64 = parse_num(tok, line, "vertex weight")?;
            if !(w.is_finite() && w > 0.0) {
                return Err(VsepError::NonPositiveWeight {
                    vertex: u + 1,
                    weight: w,
                });
            }
            weights[u] = w;
        }
        while let Some(tok) = toks.next() {
            let v: usize = parse_num(tok, line, "neighbor index")?;
            if v == 0 || v > n {
                return Err(parse_err(
                    line,
                    format!("neighbor {v} out of range 1..={n}"),
                ));
            }
            let w = if edge_weighted {
                let wt = toks
                    .next()
                    .ok_or_else(|| parse_err(line, format!("missing weight for neighbor {v}")))?;
                let w: f64 = parse_num(wt, line, "edge weight")?;
                if !(w.is_finite() && w > 0.0) {
                    return Err(parse_err(line, format!("edge weight {w} is not positive")));
                }
                w
            } else {
                1.0
            };
            if v - 1 == u {
                loops += 1;
                continue;
            }
            adj[u].push((v - 1, w));
        }
        adj[u].sort_by_key(|&(v, _)| v);
        if let Some(win) = adj[u].windows(2).find(|win| win[0].0 == win[1].0) {
            return Err(VsepError::DuplicateEdge {
                line,
                u: u + 1,
                v: win[0].0 + 1,
            });
        }
    }
    if let Some((line, l)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(parse_err(
            line,
            format!("unexpected content after {n} vertex lines: '{}'", l.trim()),
        ));
    }

    let mut edges = Vec::new();
    for u in 0..n {
        for &(v, w) in &adj[u] {
            let back = adj[v]
                .binary_search_by_key(&u, |&(x, _)| x)
                .ok()
                .map(|k| adj[v][k].1);
            if back != Some(w) {
                return Err(VsepError::AsymmetricEdge {
                    line: vertex_line[u],
                    u: u + 1,
                    v: v + 1,
                });
            }
            if u < v {
                edges.push((u, v, w));
            }
        }
    }
    if m != edges.len() && m != edges.len() + loops {
        return Err(parse_err(
            header_line,
            format!("header declares {m} edges but {} were listed", edges.len()),
        ));
    }
    let (graph, _) = WeightedGraph::from_edges(n, &edges)?;
    let graph = graph.with_vertex_weights(weights)?;
    Ok(ParsedGraph {
        graph,
        dropped_self_loops: loops,
    })
}

pub fn parse_edge_list(text: &str) -> Result<ParsedGraph> {
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    let mut n = 0usize;
    let mut loops = 0usize;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('%') || content.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        if toks.len() < 2 || toks.len() > 3 {
            return Err(parse_err(line, "expected 'i j [weight]'"));
        }
        let u: usize = parse_num(toks[0], line, "vertex index")?;
        let v: usize = parse_num(toks[1], line, "vertex index")?;
        if u == 0 || v == 0 {
            return Err(parse_err(line, "vertex indices are 1-based"));
        }
        let w = match toks.get(2) {
            Some(tok) => {
                let w: f64 = parse_num(tok, line, "edge weight")?;
                if !(w.is_finite() && w > 0.0) {
                    return Err(parse_err(line, format!("edge weight {w} is not positive")));
                }
                w
            }
            None => 1.0,
        };
        n = n.max(u).max(v);
        if u == v {
            loops += 1;
            continue;
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(VsepError::DuplicateEdge { line, u, v });
        }
        edges.push((u - 1, v - 1, w));
    }
    let (graph, _) = WeightedGraph::from_edges(n, &edges)?;
    Ok(ParsedGraph {
        graph,
        dropped_self_loops: loops,
    })
}

fn fmt_num(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

/// Serializes a graph in METIS format; vertex and edge weights are emitted
/// only when some value differs from 1. Vertex costs are not representable.
pub fn write_metis(g: &WeightedGraph) -> String {
    let vw = g.weights().iter().any(|&w| w != 1.0);
    let ew = g.edges().any(|(_, _, w)| w != 1.0);
    let mut out = format!("{} {}", g.n(), g.num_edges());
    if vw || ew {
        let _ = write!(out, " 0{}{}", u8::from(vw), u8::from(ew));
    }
    out.push('\n');
    for u in 0..g.n() {
        let mut toks = Vec::new();
        if vw {
            toks.push(fmt_num(g.weights()[u]));
        }
        for (&v, &w) in g.neighbors(u).iter().zip(g.edge_weights(u)) {
            toks.push((v + 1).to_string());
            if ew {
                toks.push(fmt_num(w));
            }
        }
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_partition(text: &str, n: usize) -> Result<Vec<Label>> {
    let mut labels = Vec::with_capacity(n);
    for (k, raw) in text.lines().enumerate() {
        let content = raw.trim();
        if content.is_empty() || content.starts_with('%') || content.starts_with('#') {
            continue;
        }
        let label = match content {
            "0" | "A" | "a" => Label::A,
            "1" | "B" | "b" => Label::B,
            "2" | "S" | "s" => Label::S,
            other => return Err(parse_err(k + 1, format!("invalid label '{other}'"))),
        };
        labels.push(label);
    }
    if labels.len() != n {
        return Err(VsepError::DimensionMismatch {
            expected: n,
            found: labels.len(),
        });
    }
    Ok(labels)
}

pub fn write_partition(labels: &[Label]) -> String {
    let mut out = String::with_capacity(labels.len() * 2);
    for l in labels {
        out.push(match l {
            Label::A => '0',
            Label::B => '1',
            Label::S => '2',
        });
        out.push('\n');
    }
    out
}
