//! Text formats for trees and decompositions.
//!
//! A voltage tree is one record per line: `n <modulus>`, then `loop <v>
//! <label>` and `edge <u> <v> <label>` records. An integer-labeled tree
//! replaces the `n` record with `labels integer`; its loop labels are
//! positive integers and its edge labels are normalized away on load. A
//! decomposition lists one `path <v1> <v2> ..` record per path. Vertices
//! are 0-based; blank lines and `#` comments are ignored.

use crate::error::{Error, Result};
use crate::prime_ham::IntegerLabeledTree;
use crate::tree_ham::Decomposition;
use crate::voltage::VoltageTree;

/// Either input flavor, distinguished by the header record.
#[derive(Debug, Clone)]
pub enum ParsedTree {
    Voltage(VoltageTree),
    Integer(IntegerLabeledTree),
}

fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(no, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            None
        } else {
            Some((no + 1, line.split_whitespace().collect()))
        }
    })
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse::<T>().map_err(|_| Error::Parse(format!("line {line}: bad number `{tok}`")))
}

struct RawTree {
    header: (String, String),
    loops: Vec<(usize, i64)>,
    edges: Vec<(usize, usize, i64)>,
}

fn parse_raw(text: &str) -> Result<RawTree> {
    let mut header: Option<(String, String)> = None;
    let mut loops = Vec::new();
    let mut edges = Vec::new();
    for (line, toks) in records(text) {
        match toks[0] {
            "n" | "labels" => {
                if header.is_some() {
                    return Err(Error::Parse(format!("line {line}: duplicate header")));
                }
                if toks.len() != 2 {
                    return Err(Error::Parse(format!("line {line}: header needs one argument")));
                }
                header = Some((toks[0].to_string(), toks[1].to_string()));
            }
            "loop" => {
                if toks.len() != 3 {
                    return Err(Error::Parse(format!("line {line}: loop needs `loop <v> <label>`")));
                }
                loops.push((parse_num(toks[1], line)?, parse_num(toks[2], line)?));
            }
            "edge" => {
                if toks.len() != 4 {
                    return Err(Error::Parse(format!(
                        "line {line}: edge needs `edge <u> <v> <label>`"
                    )));
                }
                edges.push((
                    parse_num(toks[1], line)?,
                    parse_num(toks[2], line)?,
                    parse_num(toks[3], line)?,
                ));
            }
            other => {
                return Err(Error::Parse(format!("line {line}: unknown record `{other}`")));
            }
        }
    }
    let header = header.ok_or_else(|| Error::Parse("missing `n` or `labels` header".into()))?;
    Ok(RawTree { header, loops, edges })
}

fn collect_loops(raw: &RawTree) -> Result<Vec<i64>> {
    let m = raw
        .loops
        .iter()
        .map(|&(v, _)| v + 1)
        .chain(raw.edges.iter().flat_map(|&(u, v, _)| [u + 1, v + 1]))
        .max()
        .unwrap_or(0);
    if m == 0 {
        return Err(Error::Parse("no vertices declared".into()));
    }
    let mut labels = vec![None; m];
    for &(v, l) in &raw.loops {
        if labels[v].replace(l).is_some() {
            return Err(Error::Parse(format!("vertex {v} has two loop records")));
        }
    }
    labels
        .into_iter()
        .enumerate()
        .map(|(v, l)| l.ok_or_else(|| Error::Parse(format!("vertex {v} has no loop record"))))
        .collect()
}

/// Parses either tree flavor, deciding by the header.
pub fn parse_tree(text: &str) -> Result<ParsedTree> {
    let raw = parse_raw(text)?;
    let loops = collect_loops(&raw)?;
    match raw.header.0.as_str() {
        "n" => {
            let n: u64 = raw
                .header
                .1
                .parse()
                .map_err(|_| Error::Parse(format!("bad modulus `{}`", raw.header.1)))?;
            Ok(ParsedTree::Voltage(VoltageTree::new(n, loops, raw.edges.clone())?))
        }
        _ => {
            if raw.header.1 != "integer" {
                return Err(Error::Parse(format!("bad header `labels {}`", raw.header.1)));
            }
            let positive: Vec<u64> = loops
                .iter()
                .map(|&l| {
                    u64::try_from(l)
                        .ok()
                        .filter(|&x| x > 0)
                        .ok_or_else(|| Error::Parse(format!("loop label {l} must be positive")))
                })
                .collect::<Result<_>>()?;
            // Edge labels are normalized away for integer-labeled trees.
            let edges: Vec<(usize, usize)> =
                raw.edges.iter().map(|&(u, v, _)| (u, v)).collect();
            Ok(ParsedTree::Integer(IntegerLabeledTree::new(positive, edges)?))
        }
    }
}

pub fn parse_voltage_tree(text: &str) -> Result<VoltageTree> {
    match parse_tree(text)? {
        ParsedTree::Voltage(t) => Ok(t),
        ParsedTree::Integer(_) => {
            Err(Error::Parse("expected an `n <modulus>` header, found `labels integer`".into()))
        }
    }
}

pub fn parse_integer_tree(text: &str) -> Result<IntegerLabeledTree> {
    match parse_tree(text)? {
        ParsedTree::Integer(t) => Ok(t),
        ParsedTree::Voltage(_) => {
            Err(Error::Parse("expected a `labels integer` header, found `n <modulus>`".into()))
        }
    }
}

/// Parses `path <v1> <v2> ..` records into a decomposition.
pub fn parse_decomposition(text: &str) -> Result<Decomposition> {
    let mut paths = Vec::new();
    for (line, toks) in records(text) {
        if toks[0] != "path" {
            return Err(Error::Parse(format!("line {line}: unknown record `{}`", toks[0])));
        }
        if toks.len() < 3 {
            return Err(Error::Parse(format!("line {line}: a path needs at least two vertices")));
        }
        let vs: Result<Vec<usize>> = toks[1..].iter().map(|t| parse_num(t, line)).collect();
        paths.push(vs?);
    }
    if paths.is_empty() {
        return Err(Error::Parse("decomposition file lists no paths".into()));
    }
    Ok(Decomposition::new(paths))
}
