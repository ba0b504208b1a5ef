//! JSON and DOT rendering. All collections are emitted in their canonical
//! order, so identical inputs produce byte-identical output.

use serde::Serialize;

use zlift::lift::{EdgeSet, LiftGraph, LiftVertex};
use zlift::oracle::ValidationReport;
use zlift::path_ham::AlternatingEdgeSet;

#[derive(Serialize)]
pub struct JsonValidation {
    pub passed: bool,
    pub violations: Vec<JsonViolation>,
}

#[derive(Serialize)]
pub struct JsonViolation {
    pub invariant: String,
    pub witness: String,
}

pub fn validation_json(report: &ValidationReport) -> JsonValidation {
    JsonValidation {
        passed: report.passed(),
        violations: report
            .violations()
            .iter()
            .map(|(invariant, witness)| JsonViolation {
                invariant: invariant.clone(),
                witness: witness.clone(),
            })
            .collect(),
    }
}

pub fn vertex_json(v: LiftVertex) -> [u64; 2] {
    [v.base as u64, v.g]
}

pub fn cycle_json(cycle: &[LiftVertex]) -> Vec<[u64; 2]> {
    cycle.iter().map(|&v| vertex_json(v)).collect()
}

pub fn edges_json(edges: &EdgeSet) -> Vec<[[u64; 2]; 2]> {
    edges
        .iter()
        .map(|e| {
            let (a, b) = e.ends();
            [vertex_json(a), vertex_json(b)]
        })
        .collect()
}

#[derive(Serialize)]
pub struct JsonMatching {
    pub fiber: usize,
    pub edges: Vec<[[u64; 2]; 2]>,
}

pub fn matching_json(m: &AlternatingEdgeSet) -> JsonMatching {
    JsonMatching { fiber: m.fiber, edges: edges_json(&m.edge_set()) }
}

pub fn print_json<T: Serialize>(value: &T) {
    let text = serde_json::to_string_pretty(value).expect("serialization cannot fail");
    print_str(&format!("{text}\n"));
}

/// Writes to stdout, exiting quietly with the conventional status when the
/// reading end of a pipe has gone away.
pub fn print_str(s: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if out.write_all(s.as_bytes()).and_then(|()| out.flush()).is_err() {
        std::process::exit(141);
    }
}

/// DOT rendering: highlighted edges are drawn bold red (a constructed cycle
/// or factor), removed edges dashed; everything else is gray.
pub fn dot_graph(lift: &LiftGraph, highlight: &EdgeSet, removed: &EdgeSet) -> String {
    let mut out = String::from("graph lift {\n  node [shape=point];\n");
    for v in lift.vertices() {
        out.push_str(&format!("  \"{}_{}\" [xlabel=\"({},{})\"];\n", v.base, v.g, v.base, v.g));
    }
    for e in lift.edges() {
        let (a, b) = e.ends();
        let attr = if highlight.contains(&e) {
            " [color=red, penwidth=2]"
        } else if removed.contains(&e) {
            " [style=dashed]"
        } else {
            " [color=gray]"
        };
        out.push_str(&format!(
            "  \"{}_{}\" -- \"{}_{}\"{};\n",
            a.base, a.g, b.base, b.g, attr
        ));
    }
    // Edges of the construction that are not lift edges never exist;
    // removed matchings outside the lift would be a bug upstream.
    out.push_str("}\n");
    out
}
