//! Text formats: rays files, hyper-graph files and DOT export.
//!
//! Rays: one ray per line, `re0 im0 re1 im1 re2 im2`. Hyper-graphs: a
//! `vertices <k>` header followed by `edge <i> <j> <n>` lines, 1-based.
//! In both, `#` starts a comment and blank lines are skipped.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expansion::ExpandedGraph;
use crate::hypergraph::HyperGraph;
use crate::linalg3::Ray;

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(k, line)| {
        let body = line.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((k + 1, body))
    })
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Parses a rays file. Rays must have unit norm within 1e-6 unless
/// `normalize` is set, in which case any non-zero vector is accepted.
pub fn parse_rays(text: &str, normalize: bool) -> Result<Vec<Ray>> {
    let mut rays = Vec::new();
    for (line, body) in content_lines(text) {
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(parse_error(line, format!("expected 6 reals, found {}", fields.len())));
        }
        let mut x = [0.0; 6];
        for (slot, field) in x.iter_mut().zip(&fields) {
            *slot = field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_error(line, format!("'{field}' is not a finite real")))?;
        }
        let amps = [
            Complex64::new(x[0], x[1]),
            Complex64::new(x[2], x[3]),
            Complex64::new(x[4], x[5]),
        ];
        let ray = if normalize { Ray::normalized(amps) } else { Ray::new(amps) };
        rays.push(ray.map_err(|e| parse_error(line, e.to_string()))?);
    }
    Ok(rays)
}

pub fn write_rays(rays: &[Ray]) -> String {
    let mut out = String::new();
    for r in rays {
        let a = r.amplitudes();
        let _ = writeln!(out, "{} {} {} {} {} {}", a[0].re, a[0].im, a[1].re, a[1].im, a[2].re, a[2].im);
    }
    out
}

fn parse_index(field: &str, line: usize, count: usize) -> Result<usize> {
    let value: i64 = field
        .parse()
        .map_err(|_| parse_error(line, format!("'{field}' is not an integer vertex index")))?;
    if value < 1 || value as usize > count {
        return Err(parse_error(line, format!("vertex {value} out of range 1..={count}")));
    }
    Ok(value as usize - 1)
}

pub fn parse_hypergraph(text: &str) -> Result<HyperGraph> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines.next().ok_or_else(|| parse_error(1, "missing 'vertices <k>' header"))?;
    let count = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["vertices", k] => k
            .parse::<usize>()
            .ok()
            .filter(|&k| k > 0)
            .ok_or_else(|| parse_error(header_line, format!("'{k}' is not a positive vertex count")))?,
        _ => return Err(parse_error(header_line, "expected 'vertices <k>'")),
    };
    let mut edges = Vec::new();
    let mut first_seen = std::collections::HashMap::new();
    for (line, body) in lines {
        let fields: Vec<&str> = body.split_whitespace().collect();
        let ["edge", i, j, n] = fields[..] else {
            return Err(parse_error(line, format!("expected 'edge <i> <j> <n>', found '{body}'")));
        };
        let (i, j) = (parse_index(i, line, count)?, parse_index(j, line, count)?);
        let weight: i64 = n
            .parse()
            .map_err(|_| parse_error(line, format!("'{n}' is not an integer weight")))?;
        if weight < 0 {
            return Err(parse_error(line, format!("negative weight {weight}")));
        }
        let weight = u32::try_from(weight).map_err(|_| parse_error(line, format!("weight {weight} too large")))?;
        if i == j {
            return Err(parse_error(line, format!("self-loop at vertex {}", i + 1)));
        }
        let key = (i.min(j), i.max(j));
        if let Some(prev) = first_seen.insert(key, line) {
            return Err(parse_error(
                line,
                format!("duplicate edge ({}, {}), first given on line {prev}", key.0 + 1, key.1 + 1),
            ));
        }
        edges.push((i, j, weight));
    }
    HyperGraph::new(count, edges)
}

pub fn write_hypergraph(h: &HyperGraph) -> String {
    let mut out = format!("vertices {}\n", h.vertex_count());
    for e in h.edges() {
        let _ = writeln!(out, "edge {} {} {}", e.i + 1, e.j + 1, e.weight);
    }
    out
}

/// Undirected DOT graph. Nodes carry `P<i>` / `e<edge>:<kind><level>` labels;
/// bases are listed as comments.
pub fn write_dot(g: &ExpandedGraph) -> String {
    let label = |v: usize| g.vertices()[v].to_string();
    let mut out = String::from("graph expanded {\n");
    for basis in g.bases() {
        let _ = writeln!(out, "  // basis {} {} {}", label(basis[0]), label(basis[1]), label(basis[2]));
    }
    for (v, vertex) in g.vertices().iter().enumerate() {
        let _ = writeln!(out, "  n{v} [label=\"{vertex}\"];");
    }
    for &(a, b) in g.edges() {
        let _ = writeln!(out, "  n{a} -- n{b};");
    }
    out.push_str("}\n");
    out
}
