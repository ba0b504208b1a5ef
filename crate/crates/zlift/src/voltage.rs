//! Reflexive voltage trees over Z_n.
//!
//! A [`VoltageTree`] is a tree in which every vertex carries exactly one
//! loop; tree arcs and primary loops carry group labels, and the opposite
//! arc (or secondary loop) implicitly carries the inverse label. Labels are
//! stored only for the canonical arc orientation `u < v` and for the primary
//! loop, which enforces the inverse-pair rule by construction.

use crate::error::{Error, Result};
use crate::group::Group;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoltageTree {
    group: Group,
    /// Primary loop label per vertex.
    loops: Vec<u64>,
    /// Tree edges in canonical orientation (u < v) with the label of arc (u, v).
    edges: Vec<(usize, usize, u64)>,
    /// Neighbor lists, sorted.
    adj: Vec<Vec<usize>>,
}

impl VoltageTree {
    /// Builds a reflexive voltage tree. `loops[v]` labels the primary loop at
    /// `v`; each entry of `edges` is `(u, v, label)` for the arc `(u, v)`.
    /// Labels are reduced mod n.
    pub fn new(n: u64, loops: Vec<i64>, edges: Vec<(usize, usize, i64)>) -> Result<VoltageTree> {
        let group = Group::new(n)?;
        let m = loops.len();
        if m == 0 {
            return Err(Error::InvalidTree("tree must have at least one vertex".into()));
        }
        if edges.len() != m - 1 {
            return Err(Error::InvalidTree(format!(
                "a tree on {m} vertices needs {} edges, got {}",
                m - 1,
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); m];
        let mut canonical = Vec::with_capacity(edges.len());
        for &(u, v, label) in &edges {
            if u >= m || v >= m {
                return Err(Error::InvalidTree(format!("edge ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidTree(format!("explicit self edge at {u}")));
            }
            if adj[u].contains(&v) {
                return Err(Error::InvalidTree(format!("duplicate edge ({u}, {v})")));
            }
            adj[u].push(v);
            adj[v].push(u);
            // Store the label of the arc (min, max).
            let l = group.elem(label);
            if u < v {
                canonical.push((u, v, l));
            } else {
                canonical.push((v, u, group.neg(l)));
            }
        }
        // Connectivity; m - 1 edges without duplicates then implies acyclic.
        let mut seen = vec![false; m];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidTree("tree is not connected".into()));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        canonical.sort_unstable();
        Ok(VoltageTree {
            group,
            loops: loops.iter().map(|&l| group.elem(l)).collect(),
            edges: canonical,
            adj,
        })
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn order(&self) -> u64 {
        self.group.order()
    }

    /// Number of base vertices.
    pub fn vertex_count(&self) -> usize {
        self.loops.len()
    }

    /// Primary loop label at `v`.
    pub fn loop_label(&self, v: usize) -> u64 {
        self.loops[v]
    }

    pub fn loop_labels(&self) -> &[u64] {
        &self.loops
    }

    /// Canonical tree edges `(u, v, label)` with `u < v`.
    pub fn tree_edges(&self) -> &[(usize, usize, u64)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Label of the arc `(u, v)` for adjacent `u`, `v`.
    pub fn arc_label(&self, u: usize, v: usize) -> Option<u64> {
        let (a, b) = (u.min(v), u.max(v));
        let l = self
            .edges
            .binary_search_by(|&(x, y, _)| (x, y).cmp(&(a, b)))
            .ok()
            .map(|i| self.edges[i].2)?;
        Some(if u < v { l } else { self.group.neg(l) })
    }

    pub fn has_zero_cut_edges(&self) -> bool {
        self.edges.iter().all(|&(_, _, l)| l == 0)
    }

    /// Vertex sequence of the base when it is a path, starting from the
    /// lower-numbered endpoint. A single vertex is a path of length 0.
    pub fn path_sequence(&self) -> Result<Vec<usize>> {
        let m = self.vertex_count();
        if m == 1 {
            return Ok(vec![0]);
        }
        let ends: Vec<usize> = (0..m).filter(|&v| self.degree(v) == 1).collect();
        if ends.len() != 2 || (0..m).any(|v| self.degree(v) > 2) {
            return Err(Error::NotAPath);
        }
        let mut seq = Vec::with_capacity(m);
        let mut prev = usize::MAX;
        let mut cur = ends[0];
        loop {
            seq.push(cur);
            let next = self.adj[cur].iter().copied().find(|&x| x != prev);
            match next {
                Some(nx) => {
                    prev = cur;
                    cur = nx;
                }
                None => break,
            }
        }
        debug_assert_eq!(seq.len(), m);
        Ok(seq)
    }
}

/// Sets every tree-edge label to 0. The lift of the result is isomorphic to
/// the lift of the input because each tree edge is a cut-edge.
pub fn normalize_cut_edges(t: &VoltageTree) -> VoltageTree {
    let mut out = t.clone();
    for e in &mut out.edges {
        e.2 = 0;
    }
    out
}

/// Multiplies every label by the unit `u`. The lift of the result is
/// isomorphic to the lift of the input via `(v, g) -> (v, u * g)`.
pub fn rescale_by_unit(t: &VoltageTree, u: u64) -> Result<VoltageTree> {
    let g = t.group;
    if !g.is_unit(g.reduce(u)) {
        return Err(Error::NonUnit(g.reduce(u), g.order()));
    }
    let u = g.reduce(u);
    let mut out = t.clone();
    for l in &mut out.loops {
        *l = g.mul(*l, u);
    }
    for e in &mut out.edges {
        e.2 = g.mul(e.2, u);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_path(n: u64, l0: i64, l1: i64, edge: i64) -> VoltageTree {
        VoltageTree::new(n, vec![l0, l1], vec![(0, 1, edge)]).unwrap()
    }

    #[test]
    fn arc_labels_are_inverse_pairs() {
        let t = two_path(7, 2, 3, 5);
        assert_eq!(t.arc_label(0, 1), Some(5));
        assert_eq!(t.arc_label(1, 0), Some(2));
        assert_eq!(t.arc_label(0, 0), None);
    }

    #[test]
    fn rejects_non_trees() {
        assert!(VoltageTree::new(5, vec![0, 0, 0], vec![(0, 1, 0)]).is_err());
        assert!(VoltageTree::new(5, vec![0, 0], vec![(0, 0, 0)]).is_err());
        assert!(VoltageTree::new(5, vec![0, 0, 0], vec![(0, 1, 0), (1, 0, 0)]).is_err());
        assert!(VoltageTree::new(0, vec![0], vec![]).is_err());
    }

    #[test]
    fn normalize_zeroes_every_edge() {
        let t = VoltageTree::new(7, vec![1, 1, 1], vec![(0, 1, 3), (1, 2, 4)]).unwrap();
        let z = normalize_cut_edges(&t);
        assert!(z.has_zero_cut_edges());
        assert_eq!(z.loop_labels(), t.loop_labels());
        // Fixed point.
        assert_eq!(normalize_cut_edges(&z), z);
    }

    #[test]
    fn rescale_examples() {
        // Loops (3, 3) in Z_7 scaled by 3^{-1} = 5 become (1, 1).
        let t = two_path(7, 3, 3, 0);
        let r = rescale_by_unit(&t, 5).unwrap();
        assert_eq!(r.loop_labels(), &[1, 1]);
        // Unit 1 is the identity.
        assert_eq!(rescale_by_unit(&t, 1).unwrap(), t);
        // Loops (2, 4) in Z_9 scaled by 2 become (4, 8).
        let t = two_path(9, 2, 4, 0);
        assert_eq!(rescale_by_unit(&t, 2).unwrap().loop_labels(), &[4, 8]);
        // Non-units are rejected.
        assert!(rescale_by_unit(&two_path(10, 1, 1, 0), 4).is_err());
    }

    #[test]
    fn path_sequence_orientation() {
        let t = VoltageTree::new(5, vec![1, 1, 1], vec![(2, 1, 0), (0, 2, 0)]).unwrap();
        assert_eq!(t.path_sequence().unwrap(), vec![0, 2, 1]);
        let star = VoltageTree::new(5, vec![1; 4], vec![(0, 1, 0), (0, 2, 0), (0, 3, 0)]).unwrap();
        assert_eq!(star.path_sequence(), Err(Error::NotAPath));
    }
}
