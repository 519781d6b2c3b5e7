//! Edge-list text format: header `N d`, then one `u v` line per edge (0-based,
//! `u < v`, sorted). Writing a parsed file reproduces it byte for byte.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::RegularGraph;

pub fn format_edge_list(g: &RegularGraph) -> String {
    let mut out = String::with_capacity(16 + g.n() * g.d() * 6);
    writeln!(out, "{} {}", g.n(), g.d()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<RegularGraph> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hl, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty edge list".into(),
    })?;
    let nums = parse_pair(header, hl + 1)?;
    let (n, d) = (nums.0, nums.1);
    let mut edges = Vec::with_capacity(n * d / 2);
    for (i, line) in lines {
        edges.push(parse_pair(line, i + 1)?);
    }
    if edges.len() * 2 != n * d {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected {} edges, found {}", n * d / 2, edges.len()),
        });
    }
    RegularGraph::from_edges(n, d, &edges)
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace().map(str::parse::<usize>);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
        _ => Err(Error::Parse {
            line: lineno,
            msg: format!("expected two non-negative integers, got {line:?}"),
        }),
    }
}

pub fn write_edge_list(g: &RegularGraph, path: &Path) -> Result<()> {
    std::fs::write(path, format_edge_list(g)).map_err(|e| Error::io(path, e))
}

pub fn read_edge_list(path: &Path) -> Result<RegularGraph> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text)
}
