//! Text formats: graphs (`n m`, vertex names, edges by name) and the line
//! reader shared by the presentation and chain parsers.

use std::fmt::Write as _;

use crate::graph::SimplicialGraph;

/// A malformed input file; `line` is 1-based.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        Self { line, message: message.into() }
    }
}

/// Non-blank lines that are not `#` comments, with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Parses a graph from the front of `lines`, leaving the rest untouched.
pub(crate) fn parse_graph_lines<'a, I>(lines: &mut I, last_line: usize) -> Result<SimplicialGraph, ParseError>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(last_line.max(1), "missing `n m` header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let parse_count = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| ParseError::new(header_line, format!("expected a count, found `{s}`")))
    };
    if fields.len() != 2 {
        return Err(ParseError::new(header_line, "header must be `n m`"));
    }
    let (n, m) = (parse_count(fields[0])?, parse_count(fields[1])?);
    let mut names = Vec::with_capacity(n);
    let mut seen = std::collections::HashSet::new();
    for k in 0..n {
        let (line, name) = lines.next().ok_or_else(|| {
            ParseError::new(last_line, format!("expected {n} vertex names, found {k}"))
        })?;
        if name.split_whitespace().count() != 1 {
            return Err(ParseError::new(line, format!("vertex name `{name}` contains whitespace")));
        }
        if !seen.insert(name.to_string()) {
            return Err(ParseError::new(line, format!("duplicate vertex `{name}`")));
        }
        names.push(name.to_string());
    }
    let mut edges = Vec::with_capacity(m);
    for k in 0..m {
        let (line, edge) = lines.next().ok_or_else(|| {
            ParseError::new(last_line, format!("expected {m} edges, found {k}"))
        })?;
        let ends: Vec<&str> = edge.split_whitespace().collect();
        if ends.len() != 2 {
            return Err(ParseError::new(line, "edge must be `u v`"));
        }
        for end in &ends {
            if !seen.contains(*end) {
                return Err(ParseError::new(line, format!("unknown vertex `{end}`")));
            }
        }
        if ends[0] == ends[1] {
            return Err(ParseError::new(line, format!("self-loop at `{}`", ends[0])));
        }
        edges.push((ends[0].to_string(), ends[1].to_string()));
    }
    SimplicialGraph::new(names, edges).map_err(|e| ParseError::new(header_line, e.to_string()))
}

pub fn parse_graph(text: &str) -> Result<SimplicialGraph, ParseError> {
    let last = text.lines().count();
    let mut lines = content_lines(text);
    let g = parse_graph_lines(&mut lines, last)?;
    if let Some((line, extra)) = lines.next() {
        return Err(ParseError::new(line, format!("unexpected trailing line `{extra}`")));
    }
    Ok(g)
}

pub fn write_graph(g: &SimplicialGraph) -> String {
    let mut out = String::new();
    let edges = g.edges();
    let _ = writeln!(out, "{} {}", g.vertex_count(), edges.len());
    for name in g.names() {
        let _ = writeln!(out, "{name}");
    }
    for (u, v) in edges {
        let _ = writeln!(out, "{} {}", g.name(u), g.name(v));
    }
    out
}
