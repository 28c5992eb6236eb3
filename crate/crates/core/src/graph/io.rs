//! graph6 tokens and the plain `n m` edge-list format.

use super::{Graph, GraphError, MAX_VERTICES};

const HEADER: &str = ">>graph6<<";

fn g6_value(c: u8, pos: usize) -> Result<u64, GraphError> {
    if (63..=126).contains(&c) {
        Ok((c - 63) as u64)
    } else {
        Err(GraphError::Graph6(format!(
            "invalid character {:?} at byte {pos}",
            c as char
        )))
    }
}

/// Parse one graph6 token (an optional `>>graph6<<` header is accepted).
pub fn parse_graph6(text: &str) -> Result<Graph, GraphError> {
    let token = text.trim();
    let token = token.strip_prefix(HEADER).unwrap_or(token);
    let bytes = token.as_bytes();
    if bytes.is_empty() {
        return Err(GraphError::Graph6("empty token".into()));
    }
    let (n, body) = if bytes[0] == b'~' {
        if bytes.get(1) == Some(&b'~') {
            return Err(GraphError::Graph6("8-byte size field is not supported".into()));
        }
        if bytes.len() < 4 {
            return Err(GraphError::Graph6("truncated size field".into()));
        }
        let mut n = 0u64;
        for (i, &c) in bytes[1..4].iter().enumerate() {
            n = n << 6 | g6_value(c, i + 1)?;
        }
        (n as usize, &bytes[4..])
    } else {
        (g6_value(bytes[0], 0)? as usize, &bytes[1..])
    };
    if n > MAX_VERTICES {
        return Err(GraphError::TooManyVertices(n));
    }
    let nbits = n * n.saturating_sub(1) / 2;
    let need = nbits.div_ceil(6);
    if body.len() != need {
        return Err(GraphError::Graph6(format!(
            "expected {need} data bytes for {n} vertices, found {}",
            body.len()
        )));
    }
    let mut data = Vec::with_capacity(need);
    for (i, &c) in body.iter().enumerate() {
        data.push(g6_value(c, i + bytes.len() - body.len())?);
    }
    let mut pairs = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if data[k / 6] >> (5 - k % 6) & 1 == 1 {
                pairs.push((i, j));
            }
            k += 1;
        }
    }
    Graph::from_edge_list(n, &pairs)
}

/// Encode as a graph6 token (no header, no newline).
pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(b'~');
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            k += 1;
            if k % 6 == 0 {
                out.push(acc + 63);
                acc = 0;
            }
        }
    }
    if k % 6 != 0 {
        out.push((acc << (6 - k % 6)) + 63);
    }
    String::from_utf8(out).expect("graph6 is ASCII")
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize, GraphError> {
    let tok = tok.ok_or_else(|| GraphError::EdgeList(format!("line {line}: missing {what}")))?;
    tok.parse()
        .map_err(|_| GraphError::EdgeList(format!("line {line}: {what} {tok:?} is not a non-negative integer")))
}

/// Parse `n m` followed by `m` lines `u v` (0-based labels). Blank lines and
/// lines starting with `#` are ignored.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (ln, header) = lines.next().ok_or_else(|| GraphError::EdgeList("empty input".into()))?;
    let mut it = header.split_whitespace();
    let n = parse_usize(it.next(), ln, "vertex count")?;
    let m = parse_usize(it.next(), ln, "edge count")?;
    if it.next().is_some() {
        return Err(GraphError::EdgeList(format!("line {ln}: trailing tokens in header")));
    }
    let mut pairs = Vec::with_capacity(m);
    for (ln, line) in lines {
        let mut it = line.split_whitespace();
        let u = parse_usize(it.next(), ln, "endpoint")?;
        let v = parse_usize(it.next(), ln, "endpoint")?;
        if it.next().is_some() {
            return Err(GraphError::EdgeList(format!("line {ln}: trailing tokens")));
        }
        pairs.push((u, v));
    }
    if pairs.len() != m {
        return Err(GraphError::EdgeList(format!(
            "header declares {m} edges, found {}",
            pairs.len()
        )));
    }
    Graph::from_edge_list(n, &pairs)
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

/// Parse an input that is either one edge list (first line has two
/// integers) or a sequence of graph6 tokens, one per line.
pub fn parse_graphs(text: &str) -> Result<Vec<Graph>, GraphError> {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'));
    let Some(first) = first else {
        return Ok(Vec::new());
    };
    let looks_like_edge_list = {
        let toks: Vec<&str> = first.split_whitespace().collect();
        toks.len() == 2 && toks.iter().all(|t| t.parse::<usize>().is_ok())
    };
    if looks_like_edge_list {
        return parse_edge_list(text).map(|g| vec![g]);
    }
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse_graph6)
        .collect()
}
