use std::fmt::Write as _;
use std::str::FromStr;

use super::Digraph;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// `{"n": 3, "edges": [[0,1],[1,2]]}`
    Json,
    /// First line `n`, then one `u v` pair per line; `#` starts a comment.
    EdgeList,
    /// Graphviz, export only.
    Dot,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "edgelist" | "edges" => Ok(Format::EdgeList),
            "dot" => Ok(Format::Dot),
            _ => Err(Error::parse(1, 1, format!("unknown format `{s}`"))),
        }
    }
}

pub fn encode(g: &Digraph, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string(g).expect("digraph serializes"),
        Format::EdgeList => {
            let mut out = format!("{}\n", g.vertex_count());
            for (u, v) in g.edges() {
                writeln!(out, "{u} {v}").unwrap();
            }
            out
        }
        Format::Dot => to_dot(g, "G"),
    }
}

pub fn decode(text: &str, format: Format) -> Result<Digraph> {
    match format {
        Format::Json => decode_json(text),
        Format::EdgeList => decode_edgelist(text),
        Format::Dot => Err(Error::FormatUnsupported("dot")),
    }
}

/// DOT with bare integer node ids. Every vertex is declared so isolated
/// vertices survive the export.
pub(crate) fn to_dot(g: &Digraph, name: &str) -> String {
    let mut out = format!("digraph {name} {{\n");
    for u in 0..g.vertex_count() {
        writeln!(out, "  {u};").unwrap();
    }
    for (u, v) in g.edges() {
        writeln!(out, "  {u} -> {v};").unwrap();
    }
    out.push_str("}\n");
    out
}

fn decode_json(text: &str) -> Result<Digraph> {
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Repr {
        n: usize,
        edges: Vec<[usize; 2]>,
    }
    let repr: Repr = serde_json::from_str(text)
        .map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))?;
    Digraph::new(repr.n, repr.edges.into_iter().map(|[u, v]| (u, v)))
}

fn decode_edgelist(text: &str) -> Result<Digraph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let fields: Vec<(usize, &str)> = fields_with_columns(line);
        if fields.is_empty() {
            continue;
        }
        let number = |(col, s): (usize, &str)| {
            s.parse::<usize>().map_err(|_| {
                Error::parse(
                    lineno + 1,
                    col,
                    format!("expected a vertex number, found `{s}`"),
                )
            })
        };
        match n {
            None => {
                if fields.len() != 1 {
                    return Err(Error::parse(
                        lineno + 1,
                        fields[1].0,
                        "the first line must hold only the vertex count",
                    ));
                }
                n = Some(number(fields[0])?);
            }
            Some(_) => {
                if fields.len() != 2 {
                    let col = fields.get(2).map_or(fields[0].0, |f| f.0);
                    return Err(Error::parse(lineno + 1, col, "expected `u v`"));
                }
                edges.push((number(fields[0])?, number(fields[1])?));
            }
        }
    }
    let n = n.ok_or_else(|| Error::parse(1, 1, "missing vertex count"))?;
    Digraph::new(n, edges)
}

/// Whitespace-separated fields with their 1-based columns.
fn fields_with_columns(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}
