//! graph6, plain edge lists, decomposition JSON and canon text.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::ColoredGraph;
use crate::nested::NestedDecomposition;
use crate::treedec::RootedTreeDecomposition;

const GRAPH6_HEADER: &str = ">>graph6<<";

fn parse_err(line: usize, offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        offset,
        message: message.into(),
    }
}

/// Parses one graph6 string (an optional `>>graph6<<` header is accepted).
pub fn parse_graph6(s: &str) -> Result<ColoredGraph> {
    let s = s.trim_end_matches(['\n', '\r']);
    let (skip, body) = match s.strip_prefix(GRAPH6_HEADER) {
        Some(rest) => (GRAPH6_HEADER.len(), rest),
        None => (0, s),
    };
    let bytes = body.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(parse_err(
                1,
                skip + i,
                format!("byte {b:#04x} outside the graph6 range"),
            ));
        }
    }
    let six = |i: usize| (bytes[i] - 63) as usize;
    let (n, start) = match bytes {
        [] => return Err(parse_err(1, skip, "empty graph6 string")),
        [126, 126, ..] => {
            if bytes.len() < 8 {
                return Err(parse_err(1, skip + bytes.len(), "truncated vertex count"));
            }
            ((2..8).fold(0, |acc, i| (acc << 6) | six(i)), 8)
        }
        [126, ..] => {
            if bytes.len() < 4 {
                return Err(parse_err(1, skip + bytes.len(), "truncated vertex count"));
            }
            ((1..4).fold(0, |acc, i| (acc << 6) | six(i)), 4)
        }
        _ => (six(0), 1),
    };
    let pairs = n * n.saturating_sub(1) / 2;
    let need = pairs.div_ceil(6);
    let data = &bytes[start..];
    if data.len() != need {
        return Err(parse_err(
            1,
            skip + start + data.len().min(need),
            format!(
                "expected {need} adjacency bytes for {n} vertices, found {}",
                data.len()
            ),
        ));
    }
    let mut edges = Vec::new();
    let mut bit = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = data[bit / 6] - 63;
            if byte & (1 << (5 - bit % 6)) != 0 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    if bit % 6 != 0 && (data[bit / 6] - 63) & ((1 << (6 - bit % 6)) - 1) != 0 {
        return Err(parse_err(1, skip + start + bit / 6, "nonzero padding bits"));
    }
    ColoredGraph::from_edges(n, &edges)
}

/// graph6 encoding of the adjacency structure; vertices are numbered by
/// their rank and edge colors are dropped.
pub fn emit_graph6(g: &ColoredGraph) -> String {
    let vs = g.vertices();
    let n = vs.len();
    let mut out: Vec<u8> = Vec::new();
    if n < 63 {
        out.push(n as u8 + 63);
    } else if n < 258_048 {
        out.push(126);
        out.extend((0..3).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
    } else {
        out.extend([126, 126]);
        out.extend((0..6).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
    }
    let mut cur = 0u8;
    let mut bit = 0;
    for j in 1..n {
        for i in 0..j {
            cur <<= 1;
            if g.is_adjacent(vs[i], vs[j]) {
                cur |= 1;
            }
            bit += 1;
            if bit == 6 {
                out.push(cur + 63);
                cur = 0;
                bit = 0;
            }
        }
    }
    if bit > 0 {
        out.push((cur << (6 - bit)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

/// Parses `n m` followed by `m` lines `u v [color]`, vertices `0..n`.
/// Blank lines and lines starting with `#` are ignored.
pub fn parse_edgelist(s: &str) -> Result<ColoredGraph> {
    let mut lines = s
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, 0, "missing header"))?;
    let nums = numbers(hline, header)?;
    let [n, m] = nums[..] else {
        return Err(parse_err(hline, 0, "header must be `n m`"));
    };
    if n < 0 || m < 0 {
        return Err(parse_err(hline, 0, "header values must be nonnegative"));
    }
    let n = n as usize;
    let mut g = ColoredGraph::new(n);
    let mut count = 0;
    for (ln, line) in lines {
        let f = numbers(ln, line)?;
        let (u, v, c) = match f[..] {
            [u, v] => (u, v, 1),
            [u, v, c] => (u, v, c),
            _ => return Err(parse_err(ln, 0, "edge line must be `u v [color]`")),
        };
        for x in [u, v] {
            if x < 0 || x as usize >= n {
                return Err(parse_err(ln, 0, format!("vertex {x} outside 0..{n}")));
            }
        }
        if c < 1 {
            return Err(parse_err(
                ln,
                0,
                format!("edge color {c} must be at least 1"),
            ));
        }
        g.add_colored_edge(u as usize, v as usize, c as i32)
            .map_err(|e| parse_err(ln, 0, e.to_string()))?;
        count += 1;
    }
    if count != m as usize {
        return Err(parse_err(
            hline,
            0,
            format!("header announces {m} edges, found {count}"),
        ));
    }
    Ok(g)
}

fn numbers(line_no: usize, line: &str) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for tok in line.split_whitespace() {
        let at = line[offset..].find(tok).map_or(offset, |p| offset + p);
        offset = at + tok.len();
        out.push(
            tok.parse::<i64>()
                .map_err(|_| parse_err(line_no, at, format!("`{tok}` is not an integer")))?,
        );
    }
    Ok(out)
}

/// `n m` header plus one `u v` line per edge, with a third column for
/// colors other than 1.
pub fn emit_edgelist(g: &ColoredGraph) -> String {
    let vs = g.vertices();
    let rank = |v| vs.binary_search(&v).expect("vertex of g");
    let edges = g.edges();
    let mut s = format!("{} {}\n", g.n(), edges.len());
    for (u, v, c) in edges {
        if c == 1 {
            s.push_str(&format!("{} {}\n", rank(u), rank(v)));
        } else {
            s.push_str(&format!("{} {} {}\n", rank(u), rank(v), c));
        }
    }
    s
}

/// Edge list if the first meaningful line holds a digit, graph6 otherwise.
pub fn parse_graph(s: &str) -> Result<ColoredGraph> {
    let first = s
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    if first.bytes().any(|b| b.is_ascii_digit()) {
        parse_edgelist(s)
    } else {
        parse_graph6(first)
    }
}

/// `{nodes, parent, bags, root}` for a rooted tree decomposition.
pub fn tree_json(d: &RootedTreeDecomposition) -> Value {
    json!({
        "nodes": (0..d.len()).collect::<Vec<_>>(),
        "parent": d.parent,
        "bags": d.bags,
        "root": d.root,
    })
}

/// Preorder-numbered nested decomposition with per-node families.
pub fn nested_json(nd: &NestedDecomposition) -> Value {
    let nodes = nd.preorder();
    let families: Vec<Value> = nodes
        .iter()
        .map(|(n, _)| {
            Value::Array(
                n.family
                    .iter()
                    .map(|m| {
                        json!({
                            "decomposition": tree_json(&m.decomposition),
                            "distinguished": m.distinguished.map(|(a, b)| vec![a, b]),
                        })
                    })
                    .collect(),
            )
        })
        .collect();
    json!({
        "nodes": (0..nodes.len()).collect::<Vec<_>>(),
        "parent": nodes.iter().map(|(_, p)| *p).collect::<Vec<_>>(),
        "bags": nodes.iter().map(|(n, _)| n.bag.clone()).collect::<Vec<_>>(),
        "families": families,
    })
}

/// Top-level decomposition document.
pub fn emit_decomposition_json(
    stage: &str,
    k: usize,
    k_prime: Option<usize>,
    n: usize,
    decomposition: Value,
    metadata: Value,
) -> String {
    let doc = json!({
        "stage": stage,
        "k": k,
        "k_prime": k_prime,
        "n": n,
        "decomposition": decomposition,
        "metadata": metadata,
    });
    serde_json::to_string_pretty(&doc).expect("JSON values serialize")
}

/// `n` on the first line, then the row-major matrix, one row per line.
pub fn emit_canon(n: usize, matrix: &[i32]) -> String {
    let mut s = format!("{n}\n");
    for row in matrix.chunks(n.max(1)).take(n) {
        let cells: Vec<String> = row.iter().map(i32::to_string).collect();
        s.push_str(&cells.join(" "));
        s.push('\n');
    }
    s
}
