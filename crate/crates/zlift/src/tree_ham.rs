//! Hamiltonian cycles in tree lifts built by gluing odd shifting paths.
//!
//! A tree is decomposed into strictly internally disjoint odd shifting
//! paths that partition its edges. Each joint carries the sum of twice the
//! component bounds of its incident paths; when every joint weight stays
//! within the group order, the path cycles can be spliced one at a time
//! into a single Hamiltonian cycle of the whole lift: the next path's cycle
//! is opened along a long run of fiber edges that the current cycle keeps
//! in the joint fiber, and the two are stitched along that run.

use std::collections::{BTreeMap, BTreeSet};

use crate::billiard::{component_bound, is_odd_shifting, BilliardParams};
use crate::error::{Error, Result};
use crate::lift::{build_lift, consecutive_runs, trace_cycle, EdgeSet, LiftEdge, LiftVertex};
use crate::oracle::is_hamiltonian_cycle;
use crate::path_ham::{ham_cycle_odd_shifting, CycleCertificate};
use crate::voltage::VoltageTree;

/// A proposed decomposition of a reflexive tree into paths, each given as a
/// base-vertex sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    paths: Vec<Vec<usize>>,
}

impl Decomposition {
    pub fn new(paths: Vec<Vec<usize>>) -> Decomposition {
        Decomposition { paths }
    }

    pub fn paths(&self) -> &[Vec<usize>] {
        &self.paths
    }
}

/// Joint weights of a verified decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointWeights {
    endpoint_voltage: u64,
    n: u64,
    weights: BTreeMap<usize, u64>,
    path_bounds: Vec<u64>,
}

impl JointWeights {
    pub fn endpoint_voltage(&self) -> u64 {
        self.endpoint_voltage
    }

    /// Weight of each joint: the sum of `2c` over incident paths.
    pub fn weights(&self) -> &BTreeMap<usize, u64> {
        &self.weights
    }

    /// Component bound of each decomposition path.
    pub fn path_bounds(&self) -> &[u64] {
        &self.path_bounds
    }

    pub fn properly_weighted(&self) -> bool {
        self.weights.values().all(|&w| w <= self.n)
    }

    /// First joint exceeding the group order, if any.
    pub fn overweight_joint(&self) -> Option<(usize, u64)> {
        self.weights.iter().find(|&(_, &w)| w > self.n).map(|(&v, &w)| (v, w))
    }
}

/// The voltage tree induced on a base-vertex sequence, relabeled
/// positionally; cut edges stay zero.
fn subpath_tree(t: &VoltageTree, seq: &[usize]) -> Result<VoltageTree> {
    let loops: Vec<i64> = seq.iter().map(|&v| t.loop_label(v) as i64).collect();
    let edges: Vec<(usize, usize, i64)> = (0..seq.len() - 1).map(|i| (i, i + 1, 0)).collect();
    VoltageTree::new(t.order(), loops, edges)
}

fn map_vertex(seq: &[usize], v: LiftVertex) -> LiftVertex {
    LiftVertex::new(seq[v.base], v.g)
}

fn map_edges(seq: &[usize], edges: &EdgeSet) -> EdgeSet {
    edges
        .iter()
        .map(|e| {
            let (a, b) = e.ends();
            LiftEdge::new(map_vertex(seq, a), map_vertex(seq, b))
        })
        .collect()
}

/// Checks every decomposition invariant and returns the joint weight table.
/// The properly-weighted verdict is reported, not enforced.
pub fn verify_decomposition(t: &VoltageTree, dec: &Decomposition) -> Result<JointWeights> {
    if !t.has_zero_cut_edges() {
        return Err(Error::CutEdgesNotNormalized);
    }
    let paths = dec.paths();
    if paths.is_empty() {
        return Err(Error::NotAPartition("decomposition has no paths".into()));
    }
    let m = t.vertex_count();
    let group = t.group();
    let n = group.order();

    // Each member is a genuine path in the tree.
    for (i, seq) in paths.iter().enumerate() {
        if seq.len() < 2 {
            return Err(Error::NotAPartition(format!("path {i} has fewer than two vertices")));
        }
        let distinct: BTreeSet<usize> = seq.iter().copied().collect();
        if distinct.len() != seq.len() {
            return Err(Error::NotAPartition(format!("path {i} repeats a vertex")));
        }
        for w in seq.windows(2) {
            if w[0] >= m || w[1] >= m || t.arc_label(w[0], w[1]).is_none() {
                return Err(Error::NotAPartition(format!(
                    "path {i} uses a non-edge ({}, {})",
                    w[0], w[1]
                )));
            }
        }
    }

    // Non-loop edges are partitioned.
    let mut usage: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for seq in paths {
        for w in seq.windows(2) {
            *usage.entry((w[0].min(w[1]), w[0].max(w[1]))).or_insert(0) += 1;
        }
    }
    for &(u, v, _) in t.tree_edges() {
        match usage.get(&(u, v)) {
            Some(1) => {}
            Some(k) => {
                return Err(Error::NotAPartition(format!("edge ({u}, {v}) covered {k} times")))
            }
            None => return Err(Error::NotAPartition(format!("edge ({u}, {v}) not covered"))),
        }
    }

    // Strict internal disjointness: a shared vertex must be an endpoint of
    // every path it lies on.
    let mut internal_on: Vec<Option<usize>> = vec![None; m];
    let mut seen_on: Vec<usize> = vec![0; m];
    for seq in paths {
        for (pos, &v) in seq.iter().enumerate() {
            seen_on[v] += 1;
            if pos != 0 && pos != seq.len() - 1 {
                internal_on[v] = Some(v);
            }
        }
    }
    for v in 0..m {
        if internal_on[v].is_some() && seen_on[v] > 1 {
            return Err(Error::NotInternallyDisjoint(v));
        }
    }

    // Common endpoint voltage, coprime to the group order.
    let r = t.loop_label(paths[0][0]);
    for (i, seq) in paths.iter().enumerate() {
        for &end in [seq.first(), seq.last()].iter().flatten() {
            if t.loop_label(*end) != r {
                return Err(Error::EndpointVoltageMismatch(format!(
                    "path {i} endpoint {end} carries {} instead of {r}",
                    t.loop_label(*end)
                )));
            }
        }
    }
    if !group.is_unit(r) {
        return Err(Error::EndpointVoltageMismatch(format!("voltage {r} is not coprime to {n}")));
    }

    // Every member is odd shifting at its own track count.
    let mut path_bounds = Vec::with_capacity(paths.len());
    for (i, seq) in paths.iter().enumerate() {
        let sub = subpath_tree(t, seq)?;
        let c = component_bound(&sub).map_err(|_| Error::PathNotOddShifting(i))?;
        let params = BilliardParams { l: 0, r, d: (2 * c) as usize };
        match is_odd_shifting(&sub, params) {
            Ok(Some(_)) => path_bounds.push(c),
            _ => return Err(Error::PathNotOddShifting(i)),
        }
    }

    let mut weights: BTreeMap<usize, u64> = BTreeMap::new();
    for (seq, &c) in paths.iter().zip(&path_bounds) {
        for &end in &[seq[0], *seq.last().unwrap()] {
            *weights.entry(end).or_insert(0) += 2 * c;
        }
    }
    Ok(JointWeights { endpoint_voltage: r, n, weights, path_bounds })
}

/// Positions (multiples of the fiber step) of the fiber edges of `edges`
/// over `base`: position `p` stands for the edge between group values
/// `p * r` and `(p + 1) * r`.
fn fiber_positions(
    t: &VoltageTree,
    edges: &EdgeSet,
    base: usize,
    r_inv: u64,
) -> Result<BTreeSet<u64>> {
    let group = t.group();
    let r = t.loop_label(base);
    let mut out = BTreeSet::new();
    for e in edges {
        if !e.in_fiber(base) {
            continue;
        }
        let (a, b) = e.ends();
        let x = if group.add(a.g, r) == b.g {
            a.g
        } else if group.add(b.g, r) == a.g {
            b.g
        } else {
            return Err(Error::InternalInvariantBroken(format!(
                "fiber edge at base {base} does not step by the loop voltage"
            )));
        };
        out.insert(group.mul(x, r_inv));
    }
    Ok(out)
}

/// The longest run of fiber edges of `edges` over `base`, as
/// (start position, length); ties break toward the smaller start.
fn longest_fiber_run(
    t: &VoltageTree,
    edges: &EdgeSet,
    base: usize,
    r_inv: u64,
) -> Result<(u64, u64)> {
    let positions = fiber_positions(t, edges, base, r_inv)?;
    if positions.is_empty() {
        return Err(Error::InternalInvariantBroken(format!(
            "cycle keeps no fiber edges over joint {base}"
        )));
    }
    if positions.len() as u64 == t.order() {
        return Err(Error::InternalInvariantBroken(format!(
            "cycle contains the whole fiber over joint {base}"
        )));
    }
    let runs = consecutive_runs(&positions, t.order());
    runs.into_iter()
        .max_by_key(|&(start, len)| (len, std::cmp::Reverse(start)))
        .ok_or_else(|| Error::InternalInvariantBroken("no fiber runs".into()))
}

/// Glues the cycles of a properly weighted odd shifting decomposition into
/// a Hamiltonian cycle of the tree lift.
pub fn ham_cycle_from_decomposition(t: &VoltageTree, dec: &Decomposition) -> Result<CycleCertificate> {
    let weights = verify_decomposition(t, dec)?;
    if let Some((joint, weight)) = weights.overweight_joint() {
        return Err(Error::NotProperlyWeighted { joint, weight, n: t.order() });
    }
    let group = t.group();
    let n = group.order();
    let r = weights.endpoint_voltage();
    let r_inv = group.inv(r)?;
    let paths = dec.paths();
    let k = paths.len();

    if k == 1 {
        let sub = subpath_tree(t, &paths[0])?;
        let cert = ham_cycle_odd_shifting(&sub, 0)?;
        let cycle: Vec<LiftVertex> = cert.cycle.iter().map(|&v| map_vertex(&paths[0], v)).collect();
        let remap = |aes: crate::path_ham::AlternatingEdgeSet| crate::path_ham::AlternatingEdgeSet {
            fiber: paths[0][aes.fiber],
            edges: aes
                .edges
                .iter()
                .map(|e| {
                    let (a, b) = e.ends();
                    LiftEdge::new(map_vertex(&paths[0], a), map_vertex(&paths[0], b))
                })
                .collect(),
        };
        let cert = CycleCertificate {
            cycle,
            left: cert.left.map(remap),
            right: cert.right.map(remap),
        };
        let report = is_hamiltonian_cycle(&build_lift(t), &cert.cycle);
        if !report.passed() {
            return Err(Error::InternalInvariantBroken(format!(
                "single-path gluing failed validation: {:?}",
                report.violations()[0]
            )));
        }
        return Ok(cert);
    }

    // Attachment order: grow from the first path, always picking the
    // lowest-indexed path meeting the union in exactly one endpoint.
    let mut used = vec![false; k];
    used[0] = true;
    let mut order = vec![0usize];
    let mut union_vertices: BTreeSet<usize> = paths[0].iter().copied().collect();
    while order.len() < k {
        let mut found = None;
        for (i, seq) in paths.iter().enumerate() {
            if used[i] {
                continue;
            }
            let first_in = union_vertices.contains(&seq[0]);
            let last_in = union_vertices.contains(seq.last().unwrap());
            if first_in ^ last_in {
                found = Some(i);
                break;
            }
        }
        let i = found.ok_or_else(|| {
            Error::InternalInvariantBroken("no path attaches at exactly one endpoint".into())
        })?;
        used[i] = true;
        union_vertices.extend(paths[i].iter().copied());
        order.push(i);
    }

    // Running joint weights of the attached portion.
    let mut partial: BTreeMap<usize, u64> = BTreeMap::new();
    let add_weight = |partial: &mut BTreeMap<usize, u64>, idx: usize| {
        let seq = &paths[idx];
        let w = 2 * weights.path_bounds()[idx];
        for &end in &[seq[0], *seq.last().unwrap()] {
            *partial.entry(end).or_insert(0) += w;
        }
    };

    let first = order[0];
    let sub = subpath_tree(t, &paths[first])?;
    let mut cycle_edges = map_edges(&paths[first], &ham_cycle_odd_shifting(&sub, 0)?.edges());
    add_weight(&mut partial, first);

    for &idx in &order[1..] {
        // Orient with the attachment joint first; shared vertices are
        // endpoints of both paths, so the joint is already weighted.
        let mut qseq = paths[idx].clone();
        if !partial.contains_key(&qseq[0]) {
            qseq.reverse();
        }
        let joint = qseq[0];
        let c_q = weights.path_bounds()[idx];

        let (run_start, run_len) = longest_fiber_run(t, &cycle_edges, joint, r_inv)?;
        let omega_partial = partial.get(&joint).copied().unwrap_or(0);
        if run_len < n.saturating_sub(omega_partial) {
            return Err(Error::InternalInvariantBroken(format!(
                "fiber run over joint {joint} has {run_len} edges, below {}",
                n.saturating_sub(omega_partial)
            )));
        }
        if run_len < 2 * c_q {
            return Err(Error::InternalInvariantBroken(format!(
                "fiber run over joint {joint} is shorter than the matching to delete"
            )));
        }

        // Open the new path's cycle along the run and stitch.
        let l_attach = group.mul(run_start, r);
        let sub = subpath_tree(t, &qseq)?;
        let cert = ham_cycle_odd_shifting(&sub, l_attach)?;
        let ck = map_edges(&qseq, &cert.edges());

        let run_edge = |p: u64| {
            let x = group.mul(p % n, r);
            LiftEdge::new(
                LiftVertex::new(joint, x),
                LiftVertex::new(joint, group.add(x, r)),
            )
        };
        let run_edges: EdgeSet = (run_start..run_start + run_len).map(run_edge).collect();
        for e in &run_edges {
            if !cycle_edges.remove(e) {
                return Err(Error::InternalInvariantBroken("run edge missing from cycle".into()));
            }
        }
        for e in ck {
            if e.in_fiber(joint) && !run_edges.contains(&e) {
                continue; // fiber edges outside the run stay with the old cycle
            }
            if !cycle_edges.insert(e) {
                return Err(Error::InternalInvariantBroken("stitched cycles share an edge".into()));
            }
        }
        add_weight(&mut partial, idx);
    }

    let cycle = trace_cycle(&cycle_edges)
        .ok_or_else(|| Error::InternalInvariantBroken("glued edges are not a single cycle".into()))?;
    let cert = CycleCertificate { cycle, left: None, right: None };
    let report = is_hamiltonian_cycle(&build_lift(t), &cert.cycle);
    if !report.passed() {
        return Err(Error::InternalInvariantBroken(format!(
            "glued cycle failed validation: {:?}",
            report.violations()[0]
        )));
    }
    // Every joint keeps a long fiber run: at least n minus its weight.
    for (&joint, &w) in weights.weights() {
        let (_, len) = longest_fiber_run(t, &cert.edges(), joint, r_inv)?;
        if len < n.saturating_sub(w) {
            return Err(Error::InternalInvariantBroken(format!(
                "joint {joint} keeps a run of {len} edges, below {}",
                n.saturating_sub(w)
            )));
        }
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_force_decomposition_search, brute_force_hamiltonian};

    fn star(n: u64, arms: usize, label: i64) -> VoltageTree {
        let loops = vec![label; arms + 1];
        let edges: Vec<(usize, usize, i64)> = (1..=arms).map(|v| (0, v, 0)).collect();
        VoltageTree::new(n, loops, edges).unwrap()
    }

    #[test]
    fn single_path_weights() {
        let t = VoltageTree::new(7, vec![1, 1, 1], vec![(0, 1, 0), (1, 2, 0)]).unwrap();
        let dec = Decomposition::new(vec![vec![0, 1, 2]]);
        let w = verify_decomposition(&t, &dec).unwrap();
        assert_eq!(w.endpoint_voltage(), 1);
        assert_eq!(w.weights().get(&0), Some(&2));
        assert_eq!(w.weights().get(&2), Some(&2));
        assert_eq!(w.weights().get(&1), None);
        assert!(w.properly_weighted());
    }

    #[test]
    fn star_weights_sum_at_center() {
        // Three two-vertex arms with component bound 1 each: the center
        // joint weighs 6, so n >= 6 is required.
        let t6 = star(6, 3, 1);
        let dec = Decomposition::new(vec![vec![0, 1], vec![0, 2], vec![0, 3]]);
        let w = verify_decomposition(&t6, &dec).unwrap();
        assert_eq!(w.weights().get(&0), Some(&6));
        assert!(w.properly_weighted());
        let t5 = star(5, 3, 1);
        let w5 = verify_decomposition(&t5, &dec).unwrap();
        assert!(!w5.properly_weighted());
        assert!(matches!(
            ham_cycle_from_decomposition(&t5, &dec),
            Err(Error::NotProperlyWeighted { joint: 0, weight: 6, n: 5 })
        ));
    }

    #[test]
    fn internal_sharing_is_rejected() {
        let t = VoltageTree::new(
            7,
            vec![1, 1, 1, 1],
            vec![(0, 1, 0), (1, 2, 0), (1, 3, 0)],
        )
        .unwrap();
        // Vertex 1 is internal to the first path and also on the second.
        let dec = Decomposition::new(vec![vec![0, 1, 2], vec![1, 3]]);
        assert_eq!(verify_decomposition(&t, &dec), Err(Error::NotInternallyDisjoint(1)));
    }

    #[test]
    fn partition_errors() {
        let t = VoltageTree::new(7, vec![1, 1, 1], vec![(0, 1, 0), (1, 2, 0)]).unwrap();
        let missing = Decomposition::new(vec![vec![0, 1]]);
        assert!(matches!(verify_decomposition(&t, &missing), Err(Error::NotAPartition(_))));
        let doubled = Decomposition::new(vec![vec![0, 1, 2], vec![0, 1]]);
        assert!(matches!(verify_decomposition(&t, &doubled), Err(Error::NotAPartition(_))));
    }

    #[test]
    fn two_arm_gluing_matches_brute_force() {
        // Two two-vertex odd shifting paths sharing one joint over Z_5:
        // a 15-vertex lift.
        let t = star(5, 2, 1);
        let dec = Decomposition::new(vec![vec![0, 1], vec![0, 2]]);
        let cert = ham_cycle_from_decomposition(&t, &dec).unwrap();
        assert_eq!(cert.cycle.len(), 15);
        let lift = build_lift(&t);
        assert!(is_hamiltonian_cycle(&lift, &cert.cycle).passed());
        assert!(brute_force_hamiltonian(&lift, 24).unwrap().is_some());
    }

    #[test]
    fn single_path_delegates() {
        let t = VoltageTree::new(7, vec![1, 1, 1], vec![(0, 1, 0), (1, 2, 0)]).unwrap();
        let dec = Decomposition::new(vec![vec![0, 1, 2]]);
        let cert = ham_cycle_from_decomposition(&t, &dec).unwrap();
        assert!(is_hamiltonian_cycle(&build_lift(&t), &cert.cycle).passed());
        assert!(cert.left.is_some());
    }

    #[test]
    fn joint_fiber_loses_one_edge_per_incident_path() {
        // Each splice at the center removes one alternating edge there, so
        // the final cycle keeps n - weight/2 center-fiber edges.
        let t = star(6, 3, 1);
        let dec = Decomposition::new(vec![vec![0, 1], vec![0, 2], vec![0, 3]]);
        let cert = ham_cycle_from_decomposition(&t, &dec).unwrap();
        let lift = build_lift(&t);
        assert!(is_hamiltonian_cycle(&lift, &cert.cycle).passed());
        let kept = fiber_positions(&t, &cert.edges(), 0, 1).unwrap();
        assert_eq!(kept.len(), 3);
    }

    #[test]
    fn search_oracle_agrees() {
        let t = star(6, 3, 1);
        let found = brute_force_decomposition_search(&t).unwrap().unwrap();
        assert_eq!(found.paths().len(), 3);
        assert!(verify_decomposition(&t, &found).is_ok());
        // A tree with mismatched endpoint voltages has no decomposition.
        let bad = VoltageTree::new(7, vec![1, 2], vec![(0, 1, 0)]).unwrap();
        assert!(brute_force_decomposition_search(&bad).unwrap().is_none());
    }
}
