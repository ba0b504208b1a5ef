//! Independent validators and exhaustive oracles.
//!
//! Everything here checks structure directly against the definition of the
//! covering graph, without reusing any construction bookkeeping, so a
//! passing report certifies an output and a brute-force result can be
//! frozen into a test as an expected value.

use std::collections::BTreeSet;

use crate::billiard::PathFamily;
use crate::error::{Error, Result};
use crate::group::gcd;
use crate::lift::{EdgeSet, LiftGraph, LiftVertex};
use crate::tree_ham::Decomposition;
use crate::voltage::VoltageTree;

/// Outcome of a validator: either clean, or a list of named violations
/// with witnesses.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    violations: Vec<(String, String)>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[(String, String)] {
        &self.violations
    }

    pub fn push(&mut self, invariant: &str, witness: String) {
        self.violations.push((invariant.to_string(), witness));
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }
}

/// Checks that `cycle` is a simple cycle in `g` visiting every vertex
/// exactly once. The sequence is closed implicitly: the last vertex must be
/// adjacent to the first.
pub fn is_hamiltonian_cycle(g: &LiftGraph, cycle: &[LiftVertex]) -> ValidationReport {
    let mut report = simple_cycle_report(g, cycle);
    let mut seen: BTreeSet<LiftVertex> = cycle.iter().copied().collect();
    for v in g.vertices() {
        if !seen.remove(&v) {
            report.push("coverage", format!("vertex ({}, {}) not visited", v.base, v.g));
        }
    }
    for v in seen {
        report.push("coverage", format!("({}, {}) is not a lift vertex", v.base, v.g));
    }
    report
}

/// Checks simple-cycle structure only (distinct vertices, consecutive
/// adjacency, closure), without requiring coverage.
pub fn simple_cycle_report(g: &LiftGraph, cycle: &[LiftVertex]) -> ValidationReport {
    let mut report = ValidationReport::default();
    if cycle.len() < 3 {
        report.push("simple", format!("cycle has {} vertices, needs at least 3", cycle.len()));
        return report;
    }
    let distinct: BTreeSet<&LiftVertex> = cycle.iter().collect();
    if distinct.len() != cycle.len() {
        report.push("simple", "repeated vertex in cycle".into());
    }
    for w in cycle.windows(2) {
        if !g.has_edge(w[0], w[1]) {
            report.push(
                "adjacency",
                format!("({}, {}) !~ ({}, {})", w[0].base, w[0].g, w[1].base, w[1].g),
            );
        }
    }
    let (first, last) = (cycle[0], *cycle.last().unwrap());
    if !g.has_edge(last, first) {
        report.push("adjacency", "cycle does not close".into());
    }
    report
}

/// Checks that `edges` forms a spanning 2-regular subgraph of `g`.
pub fn is_two_factor(g: &LiftGraph, edges: &EdgeSet) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut degree = vec![0usize; g.vertex_count()];
    for e in edges {
        let (a, b) = e.ends();
        if !g.has_edge(a, b) {
            report.push("adjacency", format!("({}, {})-({}, {}) is not a lift edge", a.base, a.g, b.base, b.g));
            continue;
        }
        degree[g.index(a)] += 1;
        degree[g.index(b)] += 1;
    }
    for (i, &d) in degree.iter().enumerate() {
        if d != 2 {
            let v = g.vertex(i);
            report.push("degree", format!("vertex ({}, {}) has degree {} in the factor", v.base, v.g, d));
        }
    }
    report
}

/// Checks all properties the billiard family promises: valid disjoint
/// paths, the prescribed starts, arithmetic-progression arrivals with the
/// interior-voltage offset formula, whole-component coverage of interior
/// fibers, no fiber re-entry, and the recorded exit offsets and orders.
pub fn validate_path_family(g: &LiftGraph, fam: &PathFamily) -> ValidationReport {
    let mut report = ValidationReport::default();
    let t = g.base();
    let group = t.group();
    let n = group.order();
    let seq = fam.sequence();
    let m = seq.len();
    let params = fam.params();
    let d = params.d;

    // Paths are simple and vertex-disjoint, and start where required.
    let mut used = vec![false; g.vertex_count()];
    for (j, path) in fam.paths().iter().enumerate() {
        for w in path.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                report.push("path", format!("path {j} has a non-edge step"));
            }
        }
        for &v in path {
            let idx = g.index(v);
            if used[idx] {
                report.push("disjoint", format!("vertex ({}, {}) used twice", v.base, v.g));
            }
            used[idx] = true;
        }
        let want = LiftVertex::new(seq[0], group.add(params.l, group.mul(j as u64, params.r)));
        if path.first() != Some(&want) {
            report.push("start", format!("path {j} does not begin at (v_1, l + {j}r)"));
        }
    }

    // Arrival progressions and the offset formula.
    let mut formula_offset = params.l;
    for t_pos in 1..=m {
        if t_pos >= 2 {
            formula_offset = group.sub(formula_offset, t.loop_label(seq[t_pos - 2]));
        }
        // No sweep happens at the first fiber, so the formula skips v_1.
        let expected_i = if t_pos == 1 {
            params.l
        } else {
            group.add(formula_offset, t.loop_label(seq[0]))
        };
        let recorded = fam.arrival_offset(t_pos);
        if t_pos >= 2 && recorded != expected_i {
            report.push(
                "arrival-formula",
                format!("i_{t_pos} = {recorded}, interior voltages give {expected_i}"),
            );
        }
        let mut arrived: Vec<u64> = Vec::with_capacity(d);
        for (j, path) in fam.paths().iter().enumerate() {
            match path.iter().find(|v| v.base == seq[t_pos - 1]) {
                Some(v) => arrived.push(v.g),
                None => report.push("arrival", format!("path {j} misses fiber {t_pos}")),
            }
        }
        let mut expected: Vec<u64> =
            (0..d).map(|q| group.add(recorded, group.mul(q as u64, params.r))).collect();
        expected.sort_unstable();
        arrived.sort_unstable();
        if arrived != expected {
            report.push("arrival", format!("fiber {t_pos} arrivals are not i_t + j*r"));
        }
        // Exit offsets at interior fibers.
        if t_pos >= 2 && t_pos < m {
            let alpha = group.sub(recorded, t.loop_label(seq[t_pos - 1]));
            if fam.exit_offset(t_pos) != Some(alpha) {
                report.push("exit-offset", format!("alpha_{t_pos} != i_{t_pos} - sigma(v_{t_pos})"));
            }
            let order = &fam.orders()[t_pos - 1];
            for (j, path) in fam.paths().iter().enumerate() {
                let last_here = path.iter().rev().find(|v| v.base == seq[t_pos - 1]);
                let want = group.add(alpha, group.mul(order.apply(j) as u64, params.r));
                if last_here.map(|v| v.g) != Some(want) {
                    report.push("order", format!("path {j} does not exit fiber {t_pos} at its slot"));
                }
            }
        }
    }

    // Whole-component coverage of interior fibers.
    let mut visited = vec![false; n as usize];
    for t_pos in 2..m {
        let base = seq[t_pos - 1];
        let a = t.loop_label(base);
        visited.iter_mut().for_each(|x| *x = false);
        for path in fam.paths() {
            for v in path.iter().filter(|v| v.base == base) {
                visited[v.g as usize] = true;
            }
        }
        let step = if a == 0 { n } else { a };
        let comp_len = n / gcd(n, step);
        for start in 0..n {
            if !visited[start as usize] {
                continue;
            }
            let mut x = start;
            for _ in 0..comp_len {
                if !visited[x as usize] {
                    report.push(
                        "coverage",
                        format!("fiber {t_pos}: component of offset {start} only partly visited"),
                    );
                    break;
                }
                x = group.add(x, a);
            }
        }
    }

    // No path returns to a fiber it has left.
    for (j, path) in fam.paths().iter().enumerate() {
        for t_pos in 1..=m {
            let base = seq[t_pos - 1];
            let positions: Vec<usize> =
                path.iter().enumerate().filter(|(_, v)| v.base == base).map(|(i, _)| i).collect();
            if let (Some(&first), Some(&last)) = (positions.first(), positions.last()) {
                if last - first + 1 != positions.len() {
                    report.push("reentry", format!("path {j} re-enters fiber {t_pos}"));
                }
            }
        }
    }

    report
}

/// Exact Hamiltonian cycle search by backtracking with lowest-degree-first
/// vertex ordering. Returns a cycle, or `None` when the graph has none.
pub fn brute_force_hamiltonian(g: &LiftGraph, bound: usize) -> Result<Option<Vec<LiftVertex>>> {
    let size = g.vertex_count();
    if size > bound || size > 64 {
        return Err(Error::TooLarge(format!("{size} vertices exceeds the oracle bound {bound}")));
    }
    if size < 3 {
        return Ok(None);
    }
    // Relabel by ascending degree, ties by vertex order.
    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by_key(|&i| (g.degree(g.vertex(i)), i));
    let mut rank = vec![0usize; size];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    let mut adj = vec![0u64; size];
    for i in 0..size {
        for w in g.neighbors(g.vertex(i)) {
            adj[rank[i]] |= 1 << rank[g.index(w)];
        }
    }

    fn extend(adj: &[u64], path: &mut Vec<usize>, visited: u64) -> bool {
        let cur = *path.last().unwrap();
        if path.len() == adj.len() {
            return adj[cur] & 1 != 0;
        }
        let mut cand = adj[cur] & !visited;
        while cand != 0 {
            let next = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            path.push(next);
            if extend(adj, path, visited | (1 << next)) {
                return true;
            }
            path.pop();
        }
        false
    }

    let mut path = vec![0usize];
    if extend(&adj, &mut path, 1) {
        Ok(Some(path.into_iter().map(|i| g.vertex(order[i])).collect()))
    } else {
        Ok(None)
    }
}

/// Exact maximum simple-cycle length by exhaustive search; 0 for forests.
pub fn longest_cycle_brute(g: &LiftGraph, bound: usize) -> Result<usize> {
    let size = g.vertex_count();
    if size > bound || size > 64 {
        return Err(Error::TooLarge(format!("{size} vertices exceeds the oracle bound {bound}")));
    }
    let mut adj = vec![0u64; size];
    for (i, mask) in adj.iter_mut().enumerate() {
        for w in g.neighbors(g.vertex(i)) {
            *mask |= 1 << g.index(w);
        }
    }

    // Enumerates simple paths whose minimum vertex is the start.
    fn search(adj: &[u64], start: usize, cur: usize, visited: u64, len: usize, best: &mut usize) {
        let mut cand = adj[cur] & !visited;
        if len >= 3 && adj[cur] & (1 << start) != 0 && len > *best {
            *best = len;
        }
        while cand != 0 {
            let next = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            if next > start {
                search(adj, start, next, visited | (1 << next), len + 1, best);
            }
        }
    }

    let mut best = 0usize;
    for start in 0..size {
        search(&adj, start, start, 1 << start, 1, &mut best);
    }
    Ok(best)
}

/// Enumerates edge partitions of a small tree into paths and returns the
/// first partition that verifies as a decomposition into odd shifting paths
/// with a common endpoint voltage, in deterministic order.
pub fn brute_force_decomposition_search(t: &VoltageTree) -> Result<Option<Decomposition>> {
    let m = t.vertex_count();
    if m > 8 {
        return Err(Error::TooLarge(format!("{m} vertices exceeds the search bound 8")));
    }
    let edges: Vec<(usize, usize)> =
        t.tree_edges().iter().map(|&(u, v, _)| (u, v)).collect();
    if edges.is_empty() {
        return Ok(None);
    }

    // Set partitions of the edge index set, in restricted-growth order.
    let k = edges.len();
    let mut assignment = vec![0usize; k];
    loop {
        if let Some(dec) = partition_as_decomposition(t, &edges, &assignment) {
            return Ok(Some(dec));
        }
        // Next restricted-growth string.
        let mut i = k;
        loop {
            if i == 1 {
                return Ok(None);
            }
            i -= 1;
            let max_prev = assignment[..i].iter().copied().max().unwrap_or(0);
            if assignment[i] <= max_prev {
                assignment[i] += 1;
                for a in assignment.iter_mut().skip(i + 1) {
                    *a = 0;
                }
                break;
            }
        }
    }
}

fn partition_as_decomposition(
    t: &VoltageTree,
    edges: &[(usize, usize)],
    assignment: &[usize],
) -> Option<Decomposition> {
    use crate::tree_ham::verify_decomposition;
    let blocks = assignment.iter().copied().max().unwrap() + 1;
    let mut paths_vertices: Vec<Vec<usize>> = Vec::new();
    for b in 0..blocks {
        let block: Vec<(usize, usize)> = edges
            .iter()
            .zip(assignment)
            .filter(|&(_, &a)| a == b)
            .map(|(&e, _)| e)
            .collect();
        paths_vertices.push(block_as_path(t.vertex_count(), &block)?);
    }
    let dec = Decomposition::new(paths_vertices);
    verify_decomposition(t, &dec).ok().map(|_| dec)
}

/// Orders a connected, max-degree-2 edge set as a vertex path.
fn block_as_path(m: usize, block: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut deg = vec![0usize; m];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); m];
    for &(u, v) in block {
        deg[u] += 1;
        deg[v] += 1;
        if deg[u] > 2 || deg[v] > 2 {
            return None;
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    let ends: Vec<usize> = (0..m).filter(|&v| deg[v] == 1).collect();
    if ends.len() != 2 {
        return None;
    }
    let mut seq = vec![ends[0]];
    let mut prev = usize::MAX;
    let mut cur = ends[0];
    loop {
        let next = adj[cur].iter().copied().find(|&x| x != prev);
        match next {
            Some(nx) => {
                seq.push(nx);
                prev = cur;
                cur = nx;
            }
            None => break,
        }
    }
    if seq.len() == block.len() + 1 {
        Some(seq)
    } else {
        None // block is disconnected
    }
}

/// Exact graph-isomorphism test by backtracking, for cross-checking label
/// rewrites on small lifts.
pub fn brute_force_isomorphic(a: &LiftGraph, b: &LiftGraph, bound: usize) -> Result<bool> {
    let size = a.vertex_count();
    if size > bound || size > 64 {
        return Err(Error::TooLarge(format!("{size} vertices exceeds the oracle bound {bound}")));
    }
    if size != b.vertex_count() || a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    let mut deg_a: Vec<usize> = (0..size).map(|i| a.degree(a.vertex(i))).collect();
    let mut deg_b: Vec<usize> = (0..size).map(|i| b.degree(b.vertex(i))).collect();
    {
        let mut sa = deg_a.clone();
        let mut sb = deg_b.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return Ok(false);
        }
    }
    let adj_a: Vec<u64> = (0..size)
        .map(|i| a.neighbors(a.vertex(i)).fold(0u64, |acc, w| acc | 1 << a.index(w)))
        .collect();
    let adj_b: Vec<u64> = (0..size)
        .map(|i| b.neighbors(b.vertex(i)).fold(0u64, |acc, w| acc | 1 << b.index(w)))
        .collect();
    deg_a.sort_unstable();
    deg_b.sort_unstable();

    fn assign(
        i: usize,
        mapping: &mut Vec<usize>,
        used: &mut u64,
        adj_a: &[u64],
        adj_b: &[u64],
    ) -> bool {
        let size = adj_a.len();
        if i == size {
            return true;
        }
        for cand in 0..size {
            if *used & (1 << cand) != 0 {
                continue;
            }
            if adj_a[i].count_ones() != adj_b[cand].count_ones() {
                continue;
            }
            // Consistency with already-assigned vertices.
            let ok = (0..i).all(|j| {
                let edge_a = adj_a[i] & (1 << j) != 0;
                let edge_b = adj_b[cand] & (1 << mapping[j]) != 0;
                edge_a == edge_b
            });
            if !ok {
                continue;
            }
            mapping.push(cand);
            *used |= 1 << cand;
            if assign(i + 1, mapping, used, adj_a, adj_b) {
                return true;
            }
            mapping.pop();
            *used &= !(1 << cand);
        }
        false
    }

    let mut mapping = Vec::with_capacity(size);
    let mut used = 0u64;
    Ok(assign(0, &mut mapping, &mut used, &adj_a, &adj_b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::billiard::{extended_billiard, BilliardParams};
    use crate::lift::build_lift;
    use crate::voltage::VoltageTree;

    fn cycle_graph(n: u64) -> LiftGraph {
        build_lift(&VoltageTree::new(n, vec![1], vec![]).unwrap())
    }

    #[test]
    fn fiber_cycle_is_hamiltonian() {
        let g = cycle_graph(5);
        let cycle: Vec<LiftVertex> = (0..5).map(|i| LiftVertex::new(0, i)).collect();
        assert!(is_hamiltonian_cycle(&g, &cycle).passed());
        let missing = &cycle[..4];
        let report = is_hamiltonian_cycle(&g, missing);
        assert!(report.violations().iter().any(|(name, _)| name == "coverage"));
    }

    #[test]
    fn two_factor_checks_degree() {
        let t = VoltageTree::new(5, vec![1, 1], vec![(0, 1, 0)]).unwrap();
        let g = build_lift(&t);
        let mut edges = EdgeSet::new();
        for base in 0..2 {
            edges.extend(g.fiber_edges(base));
        }
        assert!(is_two_factor(&g, &edges).passed());
        let first = *edges.iter().next().unwrap();
        edges.remove(&first);
        let report = is_two_factor(&g, &edges);
        assert!(report.violations().iter().any(|(name, _)| name == "degree"));
    }

    #[test]
    fn path_family_validates() {
        let t = VoltageTree::new(5, vec![1, 2, 1], vec![(0, 1, 0), (1, 2, 0)]).unwrap();
        let g = build_lift(&t);
        let fam = extended_billiard(&t, BilliardParams { l: 0, r: 1, d: 2 }).unwrap();
        assert!(validate_path_family(&g, &fam).passed());
        // Single-vertex families validate vacuously.
        let t1 = VoltageTree::new(7, vec![3], vec![]).unwrap();
        let fam1 = extended_billiard(&t1, BilliardParams { l: 2, r: 3, d: 2 }).unwrap();
        assert!(validate_path_family(&build_lift(&t1), &fam1).passed());
    }

    #[test]
    fn brute_force_finds_fiber_cycle() {
        let g = cycle_graph(5);
        let found = brute_force_hamiltonian(&g, 24).unwrap().unwrap();
        assert!(is_hamiltonian_cycle(&g, &found).passed());
    }

    #[test]
    fn brute_force_detects_none() {
        // Two fibers with zero cut structure possible: loop labels 0 give
        // isolated vertices, so no Hamiltonian cycle exists.
        let t = VoltageTree::new(3, vec![0, 0], vec![(0, 1, 0)]).unwrap();
        let g = build_lift(&t);
        assert_eq!(brute_force_hamiltonian(&g, 24).unwrap(), None);
        let big = cycle_graph(40);
        assert!(matches!(brute_force_hamiltonian(&big, 24), Err(Error::TooLarge(_))));
    }

    #[test]
    fn two_vertex_tree_lift_is_hamiltonian() {
        let t = VoltageTree::new(5, vec![1, 1], vec![(0, 1, 0)]).unwrap();
        let g = build_lift(&t);
        let found = brute_force_hamiltonian(&g, 24).unwrap().unwrap();
        assert!(is_hamiltonian_cycle(&g, &found).passed());
    }

    #[test]
    fn longest_cycle_examples() {
        assert_eq!(longest_cycle_brute(&cycle_graph(7), 18).unwrap(), 7);
        // Two disjoint triangles: gcd(6, 2) = 2 components of length 3.
        let t = VoltageTree::new(6, vec![2], vec![]).unwrap();
        assert_eq!(longest_cycle_brute(&build_lift(&t), 18).unwrap(), 3);
        // A forest has no cycle.
        let t0 = VoltageTree::new(4, vec![0], vec![]).unwrap();
        assert_eq!(longest_cycle_brute(&build_lift(&t0), 18).unwrap(), 0);
    }

    #[test]
    fn isomorphism_oracle() {
        let a = VoltageTree::new(6, vec![1, 1], vec![(0, 1, 2)]).unwrap();
        let b = VoltageTree::new(6, vec![1, 1], vec![(0, 1, 0)]).unwrap();
        let c = VoltageTree::new(6, vec![1, 2], vec![(0, 1, 0)]).unwrap();
        assert!(brute_force_isomorphic(&build_lift(&a), &build_lift(&b), 24).unwrap());
        assert!(!brute_force_isomorphic(&build_lift(&a), &build_lift(&c), 24).unwrap());
    }
}
