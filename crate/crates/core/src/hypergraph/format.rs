//! Text and JSON encodings.
//!
//! Text: a header line `n=<int>`, an optional `parties=<name> <name> ...` line
//! naming the vertices in order, then one hyperedge per line as
//! whitespace-separated vertex indices (or declared names). `#` starts a
//! comment. Repeated lines encode multiplicity.

use std::collections::HashMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{Hyperedge, Hypergraph, VertexSet, MAX_VERTICES};
use crate::error::{Error, ParseError, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct JsonHypergraph {
    n: u32,
    edges: Vec<Vec<u32>>,
}

impl From<Hypergraph> for JsonHypergraph {
    fn from(h: Hypergraph) -> Self {
        JsonHypergraph {
            n: h.n,
            edges: h.edges.iter().map(|e| e.vertices().to_vec()).collect(),
        }
    }
}

impl TryFrom<JsonHypergraph> for Hypergraph {
    type Error = Error;

    fn try_from(j: JsonHypergraph) -> Result<Self> {
        Hypergraph::from_lists(j.n, j.edges)
    }
}

pub(super) fn to_text(h: &Hypergraph) -> String {
    let mut out = format!("n={}\n", h.n);
    for e in &h.edges {
        let mut first = true;
        for v in e.vertices().iter() {
            if !first {
                out.push(' ');
            }
            first = false;
            write!(out, "{v}").expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

pub(super) fn parse_json(text: &str) -> Result<Hypergraph> {
    let raw: JsonHypergraph = serde_json::from_str(text)
        .map_err(|e| ParseError::new(e.line(), format!("invalid JSON: {e}")))?;
    Hypergraph::try_from(raw).map_err(|e| ParseError::new(1, e.to_string()).into())
}

pub(super) fn parse_text(text: &str) -> Result<Hypergraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(1, "missing `n=<int>` header"))?;
    let n = parse_header(header_line, header)?;

    let mut names: HashMap<String, u32> = HashMap::new();
    let mut edges = Vec::new();
    let mut first_body = true;
    for (line_no, line) in lines {
        if first_body {
            first_body = false;
            if let Some(rest) = key_value(line, "parties") {
                names = parse_parties(line_no, rest, n)?;
                continue;
            }
        }
        edges.push(parse_edge(line_no, line, n, &names)?);
    }
    Hypergraph::new(n, edges)
}

fn key_value<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    let rest = line.strip_prefix(key)?.trim_start();
    rest.strip_prefix('=').map(str::trim)
}

fn parse_header(line_no: usize, line: &str) -> Result<u32> {
    let value = key_value(line, "n")
        .ok_or_else(|| ParseError::new(line_no, format!("expected `n=<int>`, found `{line}`")))?;
    let n: u64 = value
        .parse()
        .map_err(|_| ParseError::new(line_no, format!("invalid vertex count `{value}`")))?;
    if n == 0 || n > MAX_VERTICES as u64 {
        return Err(ParseError::new(line_no, Error::BadVertexCount(n).to_string()).into());
    }
    Ok(n as u32)
}

fn parse_parties(line_no: usize, rest: &str, n: u32) -> Result<HashMap<String, u32>> {
    let list: Vec<&str> = rest.split_whitespace().collect();
    if list.len() != n as usize {
        return Err(ParseError::new(
            line_no,
            format!("parties line names {} parties, expected {n}", list.len()),
        )
        .into());
    }
    let mut names = HashMap::new();
    for (i, name) in list.into_iter().enumerate() {
        if names.insert(name.to_string(), i as u32 + 1).is_some() {
            return Err(ParseError::new(line_no, format!("party `{name}` declared twice")).into());
        }
    }
    Ok(names)
}

fn parse_edge(
    line_no: usize,
    line: &str,
    n: u32,
    names: &HashMap<String, u32>,
) -> Result<Hyperedge> {
    let mut set = VertexSet::EMPTY;
    for token in line.split_whitespace() {
        let v = match names.get(token) {
            Some(&v) => v as u64,
            None => token.parse::<u64>().map_err(|_| {
                ParseError::new(
                    line_no,
                    format!("`{token}` is not a vertex index or party name"),
                )
            })?,
        };
        if v == 0 || v > n as u64 {
            return Err(ParseError::new(
                line_no,
                Error::VertexOutOfRange { vertex: v, n }.to_string(),
            )
            .into());
        }
        let v = v as u32;
        if set.contains(v) {
            return Err(ParseError::new(line_no, Error::RepeatedVertex(v).to_string()).into());
        }
        set.insert(v);
    }
    Hyperedge::new(set).map_err(|e| ParseError::new(line_no, e.to_string()).into())
}
