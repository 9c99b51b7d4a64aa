//! Plain-text and JSON encodings of colored graphs.
//!
//! Text format: a header line `n k`, then one `u v c` line per edge, 1-based.
//! Lines starting with `#` and blank lines are ignored. Output is sorted.

use serde::{Deserialize, Serialize};

use super::{ColoredGraph, GraphError};

fn parse_err(line: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        msg: msg.into(),
    }
}

fn numbers(line: usize, text: &str, expected: usize) -> Result<Vec<usize>, GraphError> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != expected {
        return Err(parse_err(
            line,
            format!("expected {expected} fields, found {}", fields.len()),
        ));
    }
    fields
        .iter()
        .map(|f| {
            f.parse::<usize>()
                .map_err(|_| parse_err(line, format!("`{f}` is not a non-negative integer")))
        })
        .collect()
}

/// Parses a single colored graph in text format.
pub fn parse_colored_graph(text: &str) -> Result<ColoredGraph, GraphError> {
    let mut graphs = parse_colored_graphs(text)?;
    match graphs.len() {
        1 => Ok(graphs.remove(0)),
        0 => Err(parse_err(0, "no graph found")),
        m => Err(parse_err(0, format!("expected one graph, found {m}"))),
    }
}

/// Parses one or more colored graphs. Text-format graphs are delimited by
/// their header edge counts being implicit, so multiple graphs must be given
/// as NDJSON (one JSON object per line); a single text-format graph is also
/// accepted.
pub fn parse_colored_graphs(text: &str) -> Result<Vec<ColoredGraph>, GraphError> {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'));
    if first.is_some_and(|l| l.starts_with('{')) {
        return text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                let json: ColoredGraphJson =
                    serde_json::from_str(l).map_err(|e| parse_err(i + 1, e.to_string()))?;
                json.try_into()
            })
            .collect();
    }
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let Some((hline, header)) = lines.next() else {
        return Ok(Vec::new());
    };
    let h = numbers(hline, header, 2)?;
    let (n, k) = (h[0], h[1]);
    let mut triples = Vec::new();
    for (i, l) in lines {
        let f = numbers(i, l, 3)?;
        triples.push((f[0], f[1], f[2]));
    }
    let g = ColoredGraph::new(n, triples)?;
    if g.k() != k {
        return Err(parse_err(
            hline,
            format!("header declares {k} colors, edges use {}", g.k()),
        ));
    }
    Ok(vec![g])
}

pub fn write_colored_graph(g: &ColoredGraph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.k());
    for (u, v, c) in g.labeled_edges() {
        out.push_str(&format!("{u} {v} {c}\n"));
    }
    out
}

/// JSON shape of a colored graph: `{"n": 4, "k": 2, "edges": [[1,2,1], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColoredGraphJson {
    pub n: usize,
    pub k: usize,
    pub edges: Vec<[usize; 3]>,
}

impl From<&ColoredGraph> for ColoredGraphJson {
    fn from(g: &ColoredGraph) -> Self {
        ColoredGraphJson {
            n: g.n(),
            k: g.k(),
            edges: g.labeled_edges().into_iter().map(|(u, v, c)| [u, v, c]).collect(),
        }
    }
}

impl TryFrom<ColoredGraphJson> for ColoredGraph {
    type Error = GraphError;
    fn try_from(j: ColoredGraphJson) -> Result<Self, GraphError> {
        let g = ColoredGraph::new(j.n, j.edges.iter().map(|e| (e[0], e[1], e[2])))?;
        if g.k() != j.k {
            return Err(parse_err(0, format!("declared {} colors, edges use {}", j.k, g.k())));
        }
        Ok(g)
    }
}

impl Serialize for ColoredGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ColoredGraphJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ColoredGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ColoredGraphJson::deserialize(d)?;
        ColoredGraph::try_from(j).map_err(serde::de::Error::custom)
    }
}
