//! graph6 encoding of undirected simple graphs.

use super::{GraphError, SimpleGraph};

fn err(msg: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line: 0,
        msg: msg.into(),
    }
}

pub fn decode_graph6(s: &str) -> Result<SimpleGraph, GraphError> {
    let s = s.trim();
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes: Vec<u8> = s.bytes().collect();
    if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(err(format!("invalid graph6 character in `{s}`")));
    }
    let (n, body) = match bytes.as_slice() {
        [] => return Err(err("empty graph6 string")),
        [126, 126, rest @ ..] => {
            if rest.len() < 6 {
                return Err(err("truncated graph6 size"));
            }
            let n = rest[..6].iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            (n, &rest[6..])
        }
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(err("truncated graph6 size"));
            }
            let n = rest[..3].iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            (n, &rest[3..])
        }
        [first, rest @ ..] => ((first - 63) as usize, rest),
    };
    let pairs = n * n.saturating_sub(1) / 2;
    if body.len() != pairs.div_ceil(6) {
        return Err(err(format!(
            "graph6 body has {} bytes, expected {} for n = {n}",
            body.len(),
            pairs.div_ceil(6)
        )));
    }
    let bit = |k: usize| (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    SimpleGraph::new(n, edges)
}

pub fn encode_graph6(g: &SimpleGraph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        out.extend((0..3).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
    } else {
        out.extend([126, 126]);
        out.extend((0..6).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
    }
    let pairs = n * n.saturating_sub(1) / 2;
    let mut bits = vec![false; pairs];
    for &(u, v) in g.edges() {
        bits[v * (v - 1) / 2 + u] = true;
    }
    for chunk in bits.chunks(6) {
        let mut b = 0u8;
        for (i, &set) in chunk.iter().enumerate() {
            if set {
                b |= 1 << (5 - i);
            }
        }
        out.push(b + 63);
    }
    String::from_utf8(out).expect("graph6 is ASCII")
}
