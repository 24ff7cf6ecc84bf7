//! DIMACS and plain edge-list readers and writers.
//!
//! DIMACS files use 1-based vertex ids (`p edge N M`, `e u v`, `c` comments).
//! Edge lists use 0-based ids, one `u v` pair per line, `#` comments and an
//! optional leading `n N` line fixing the vertex count. Internally every
//! graph is 0-based; the conversion happens only here.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexId};

/// Upper limit on declared vertex counts, so that noise such as
/// `p edge 999999999999 0` is rejected instead of allocated.
pub const MAX_VERTICES: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("missing `p edge N M` header")]
    MissingHeader,
    #[error("line {0}: malformed")]
    MalformedLine(usize),
    #[error("line {0}: vertex out of range")]
    VertexOutOfRange(usize),
    #[error("line {0}: self-loop")]
    SelfLoop(usize),
    #[error("line {0}: vertex count exceeds {MAX_VERTICES}")]
    TooManyVertices(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Dimacs,
    EdgeList,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dimacs" => Ok(Format::Dimacs),
            "edgelist" => Ok(Format::EdgeList),
            other => Err(format!("unknown format `{other}` (expected dimacs or edgelist)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Dimacs => "dimacs",
            Format::EdgeList => "edgelist",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphDocument {
    pub graph: Graph,
    pub comments: Vec<String>,
    pub source_format: Format,
    /// Non-fatal findings, e.g. a header edge count that disagrees with the
    /// number of distinct edges read.
    pub warnings: Vec<String>,
}

impl GraphDocument {
    pub fn new(graph: Graph, source_format: Format) -> Self {
        GraphDocument {
            graph,
            comments: Vec::new(),
            source_format,
            warnings: Vec::new(),
        }
    }
}

pub fn parse(text: &[u8], format: Format) -> Result<GraphDocument, ParseError> {
    match format {
        Format::Dimacs => parse_dimacs(text),
        Format::EdgeList => parse_edgelist(text),
    }
}

pub fn serialize(doc: &GraphDocument, format: Format) -> Vec<u8> {
    match format {
        Format::Dimacs => serialize_dimacs(doc),
        Format::EdgeList => serialize_edgelist(doc),
    }
}

fn numbered_lines(text: &[u8]) -> impl Iterator<Item = (usize, String)> + '_ {
    text.split(|&b| b == b'\n')
        .enumerate()
        .map(|(i, raw)| (i + 1, String::from_utf8_lossy(raw).trim().to_string()))
}

fn parse_count(token: &str, lineno: usize) -> Result<usize, ParseError> {
    token.parse().map_err(|_| ParseError::MalformedLine(lineno))
}

fn build(n: usize, edges: &[(VertexId, VertexId)], lines: &[usize]) -> Result<Graph, ParseError> {
    Graph::new(n, edges).map_err(|e| {
        let culprit = |pred: &dyn Fn(&(VertexId, VertexId)) -> bool| {
            edges.iter().position(pred).map(|i| lines[i]).unwrap_or(0)
        };
        match e {
            GraphError::SelfLoop(_) => ParseError::SelfLoop(culprit(&|&(u, v)| u == v)),
            _ => ParseError::VertexOutOfRange(culprit(&|&(u, v)| u >= n || v >= n)),
        }
    })
}

pub fn parse_dimacs(text: &[u8]) -> Result<GraphDocument, ParseError> {
    let mut comments = Vec::new();
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut edge_lines = Vec::new();

    for (lineno, line) in numbered_lines(text) {
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("c") => {
                let body = line[1..].trim_start();
                comments.push(body.to_string());
            }
            Some("p") => {
                if header.is_some() {
                    return Err(ParseError::MalformedLine(lineno));
                }
                let (Some("edge"), Some(n), Some(m), None) =
                    (tokens.next(), tokens.next(), tokens.next(), tokens.next())
                else {
                    return Err(ParseError::MalformedLine(lineno));
                };
                let n = parse_count(n, lineno)?;
                let m = parse_count(m, lineno)?;
                if n > MAX_VERTICES {
                    return Err(ParseError::TooManyVertices(lineno));
                }
                header = Some((n, m));
            }
            Some("e") => {
                let Some((n, _)) = header else {
                    return Err(ParseError::MissingHeader);
                };
                let (Some(u), Some(v), None) = (tokens.next(), tokens.next(), tokens.next())
                else {
                    return Err(ParseError::MalformedLine(lineno));
                };
                let u = parse_count(u, lineno)?;
                let v = parse_count(v, lineno)?;
                if u == 0 || v == 0 || u > n || v > n {
                    return Err(ParseError::VertexOutOfRange(lineno));
                }
                edges.push((u - 1, v - 1));
                edge_lines.push(lineno);
            }
            _ => return Err(ParseError::MalformedLine(lineno)),
        }
    }

    let (n, declared_m) = header.ok_or(ParseError::MissingHeader)?;
    let graph = build(n, &edges, &edge_lines)?;
    let mut warnings = Vec::new();
    if graph.m() != declared_m {
        warnings.push(format!(
            "header declares {declared_m} edges but {} distinct edges were read",
            graph.m()
        ));
    }
    Ok(GraphDocument {
        graph,
        comments,
        source_format: Format::Dimacs,
        warnings,
    })
}

/// Comments first (`c ...`), then `p edge n m`, then edges ascending by
/// `(u, v)` with `u < v`, 1-based.
pub fn serialize_dimacs(doc: &GraphDocument) -> Vec<u8> {
    let g = &doc.graph;
    let mut out = String::new();
    for c in &doc.comments {
        if c.is_empty() {
            out.push_str("c\n");
        } else {
            out.push_str(&format!("c {c}\n"));
        }
    }
    out.push_str(&format!("p edge {} {}\n", g.n(), g.m()));
    for (u, v) in g.edges() {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out.into_bytes()
}

pub fn parse_edgelist(text: &[u8]) -> Result<GraphDocument, ParseError> {
    let mut comments = Vec::new();
    let mut declared_n: Option<usize> = None;
    let mut seen_data = false;
    let mut edges = Vec::new();
    let mut edge_lines = Vec::new();
    let mut max_id: Option<usize> = None;

    for (lineno, line) in numbered_lines(text) {
        if line.is_empty() {
            continue;
        }
        if let Some(body) = line.strip_prefix('#') {
            comments.push(body.trim_start().to_string());
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(ParseError::MalformedLine(lineno));
        };
        if a == "n" && !seen_data {
            seen_data = true;
            let n = parse_count(b, lineno)?;
            if n > MAX_VERTICES {
                return Err(ParseError::TooManyVertices(lineno));
            }
            declared_n = Some(n);
            continue;
        }
        seen_data = true;
        let u = parse_count(a, lineno)?;
        let v = parse_count(b, lineno)?;
        if u.max(v) >= MAX_VERTICES {
            return Err(ParseError::TooManyVertices(lineno));
        }
        if let Some(n) = declared_n {
            if u >= n || v >= n {
                return Err(ParseError::VertexOutOfRange(lineno));
            }
        }
        max_id = Some(max_id.map_or(u.max(v), |x| x.max(u).max(v)));
        edges.push((u, v));
        edge_lines.push(lineno);
    }

    let n = declared_n.unwrap_or_else(|| max_id.map_or(0, |x| x + 1));
    let graph = build(n, &edges, &edge_lines)?;
    Ok(GraphDocument {
        graph,
        comments,
        source_format: Format::EdgeList,
        warnings: Vec::new(),
    })
}

/// Comments (`# ...`), an `n N` line, then `u v` pairs ascending, 0-based.
pub fn serialize_edgelist(doc: &GraphDocument) -> Vec<u8> {
    let g = &doc.graph;
    let mut out = String::new();
    for c in &doc.comments {
        if c.is_empty() {
            out.push_str("#\n");
        } else {
            out.push_str(&format!("# {c}\n"));
        }
    }
    out.push_str(&format!("n {}\n", g.n()));
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out.into_bytes()
}
