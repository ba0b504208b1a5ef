//! Covering graphs of voltage trees.
//!
//! The lift of `(T, sigma)` has vertex set `V(T) x Z_n`, with `(u, a)`
//! adjacent to `(v, b)` exactly when some arc `(u, v)` carries label
//! `b - a`. Vertices are ordered base-major, then by group value, so every
//! construction on a lift is reproducible byte for byte.

use std::collections::BTreeSet;

use crate::group::gcd;
use crate::voltage::VoltageTree;

/// A vertex of a lift: a base vertex paired with a group value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LiftVertex {
    pub base: usize,
    pub g: u64,
}

impl LiftVertex {
    pub fn new(base: usize, g: u64) -> LiftVertex {
        LiftVertex { base, g }
    }
}

/// An undirected lift edge stored with its endpoints in sorted order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LiftEdge {
    a: LiftVertex,
    b: LiftVertex,
}

impl LiftEdge {
    pub fn new(x: LiftVertex, y: LiftVertex) -> LiftEdge {
        assert!(x != y, "self edges are never stored");
        if x <= y {
            LiftEdge { a: x, b: y }
        } else {
            LiftEdge { a: y, b: x }
        }
    }

    pub fn ends(&self) -> (LiftVertex, LiftVertex) {
        (self.a, self.b)
    }

    pub fn touches(&self, v: LiftVertex) -> bool {
        self.a == v || self.b == v
    }

    pub fn other(&self, v: LiftVertex) -> Option<LiftVertex> {
        if self.a == v {
            Some(self.b)
        } else if self.b == v {
            Some(self.a)
        } else {
            None
        }
    }

    /// Both endpoints lie in the fiber over `base`.
    pub fn in_fiber(&self, base: usize) -> bool {
        self.a.base == base && self.b.base == base
    }
}

/// Deterministically ordered edge set.
pub type EdgeSet = BTreeSet<LiftEdge>;

/// The covering graph of a voltage tree.
#[derive(Debug, Clone)]
pub struct LiftGraph {
    base: VoltageTree,
    adj: Vec<Vec<u32>>,
}

impl LiftGraph {
    pub fn base(&self) -> &VoltageTree {
        &self.base
    }

    pub fn order(&self) -> u64 {
        self.base.order()
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn index(&self, v: LiftVertex) -> usize {
        v.base * self.base.order() as usize + v.g as usize
    }

    pub fn vertex(&self, index: usize) -> LiftVertex {
        let n = self.base.order() as usize;
        LiftVertex::new(index / n, (index % n) as u64)
    }

    pub fn vertices(&self) -> impl Iterator<Item = LiftVertex> + '_ {
        (0..self.vertex_count()).map(|i| self.vertex(i))
    }

    pub fn fiber(&self, base: usize) -> impl Iterator<Item = LiftVertex> + '_ {
        (0..self.base.order()).map(move |g| LiftVertex::new(base, g))
    }

    pub fn neighbors(&self, v: LiftVertex) -> impl Iterator<Item = LiftVertex> + '_ {
        self.adj[self.index(v)].iter().map(move |&i| self.vertex(i as usize))
    }

    pub fn degree(&self, v: LiftVertex) -> usize {
        self.adj[self.index(v)].len()
    }

    pub fn has_edge(&self, x: LiftVertex, y: LiftVertex) -> bool {
        if x.base >= self.base.vertex_count() || y.base >= self.base.vertex_count() {
            return false;
        }
        let n = self.order();
        if x.g >= n || y.g >= n {
            return false;
        }
        self.adj[self.index(x)].binary_search(&(self.index(y) as u32)).is_ok()
    }

    /// All edges in canonical order.
    pub fn edges(&self) -> EdgeSet {
        let mut out = EdgeSet::new();
        for v in self.vertices() {
            let vi = self.index(v);
            for &wi in &self.adj[vi] {
                if (wi as usize) > vi {
                    out.insert(LiftEdge::new(v, self.vertex(wi as usize)));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|l| l.len()).sum::<usize>() / 2
    }

    /// Edges with both endpoints in the fiber over `base`.
    pub fn fiber_edges(&self, base: usize) -> EdgeSet {
        let mut out = EdgeSet::new();
        for v in self.fiber(base) {
            for w in self.neighbors(v) {
                if w.base == base && v < w {
                    out.insert(LiftEdge::new(v, w));
                }
            }
        }
        out
    }

    /// Number of cycles the fiber over a loop vertex decomposes into:
    /// gcd(n, sigma(v)); a zero loop label leaves the fiber edgeless.
    pub fn fiber_component_count(&self, base: usize) -> u64 {
        let s = self.base.loop_label(base);
        if s == 0 {
            self.order()
        } else {
            gcd(self.order(), s)
        }
    }
}

/// Builds the covering graph of `t` with the deterministic vertex order.
pub fn build_lift(t: &VoltageTree) -> LiftGraph {
    let n = t.order();
    let m = t.vertex_count();
    let size = m * n as usize;
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); size];
    let idx = |base: usize, g: u64| (base * n as usize + g as usize) as u32;
    let group = t.group();

    let push = |adj: &mut Vec<Vec<u32>>, a: u32, b: u32| {
        if a == b {
            return; // zero-label loop arcs collapse; no self edges stored
        }
        if !adj[a as usize].contains(&b) {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
    };

    for v in 0..m {
        let s = t.loop_label(v);
        if s != 0 {
            for g in 0..n {
                push(&mut adj, idx(v, g), idx(v, group.add(g, s)));
            }
        }
    }
    for &(u, v, l) in t.tree_edges() {
        for g in 0..n {
            push(&mut adj, idx(u, g), idx(v, group.add(g, l)));
        }
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    LiftGraph { base: t.clone(), adj }
}

/// Applies the shift automorphism `(v, g) -> (v, g + a)` to a set of edges.
pub fn shift_edges(t: &VoltageTree, edges: &EdgeSet, a: u64) -> EdgeSet {
    let g = t.group();
    let a = g.reduce(a);
    edges
        .iter()
        .map(|e| {
            let (x, y) = e.ends();
            LiftEdge::new(
                LiftVertex::new(x.base, g.add(x.g, a)),
                LiftVertex::new(y.base, g.add(y.g, a)),
            )
        })
        .collect()
}

/// Applies the shift automorphism to a vertex sequence.
pub fn shift_vertices(t: &VoltageTree, vs: &[LiftVertex], a: u64) -> Vec<LiftVertex> {
    let g = t.group();
    let a = g.reduce(a);
    vs.iter().map(|v| LiftVertex::new(v.base, g.add(v.g, a))).collect()
}

/// Relabels group values by the unit `u`: `(v, g) -> (v, u * g)`. This is the
/// lift isomorphism that matches `rescale_by_unit` on the base.
pub fn rescale_edges(t: &VoltageTree, edges: &EdgeSet, u: u64) -> EdgeSet {
    let g = t.group();
    edges
        .iter()
        .map(|e| {
            let (x, y) = e.ends();
            LiftEdge::new(
                LiftVertex::new(x.base, g.mul(x.g, u)),
                LiftVertex::new(y.base, g.mul(y.g, u)),
            )
        })
        .collect()
}

/// Maximal runs of cyclically consecutive values in `positions` (mod `n`),
/// as (start, length) pairs ordered by start. A full circle reports as the
/// single run (0, n).
pub fn consecutive_runs(positions: &BTreeSet<u64>, n: u64) -> Vec<(u64, u64)> {
    if positions.len() as u64 == n {
        return vec![(0, n)];
    }
    let mut runs = Vec::new();
    for &p in positions {
        let prev = if p == 0 { n - 1 } else { p - 1 };
        if positions.contains(&prev) {
            continue;
        }
        let mut len = 1u64;
        let mut x = p;
        loop {
            let next = if x + 1 == n { 0 } else { x + 1 };
            if positions.contains(&next) {
                len += 1;
                x = next;
            } else {
                break;
            }
        }
        runs.push((p, len));
    }
    runs
}

/// Connected components of an edge set, as sorted vertex lists, ordered by
/// their smallest vertex.
pub fn edge_set_components(edges: &EdgeSet) -> Vec<Vec<LiftVertex>> {
    use std::collections::BTreeMap;
    let mut adj: BTreeMap<LiftVertex, Vec<LiftVertex>> = BTreeMap::new();
    for e in edges {
        let (a, b) = e.ends();
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let mut seen: BTreeSet<LiftVertex> = BTreeSet::new();
    let mut out = Vec::new();
    for &start in adj.keys() {
        if seen.contains(&start) {
            continue;
        }
        let mut comp = Vec::new();
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(x) = stack.pop() {
            comp.push(x);
            for &y in &adj[&x] {
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Walks a 2-regular edge set into an ordered closed vertex sequence.
/// Returns `None` unless the edges form one single cycle.
pub fn trace_cycle(edges: &EdgeSet) -> Option<Vec<LiftVertex>> {
    use std::collections::BTreeMap;
    if edges.is_empty() {
        return None;
    }
    let mut adj: BTreeMap<LiftVertex, Vec<LiftVertex>> = BTreeMap::new();
    for e in edges {
        let (a, b) = e.ends();
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    if adj.values().any(|l| l.len() != 2) {
        return None;
    }
    for l in adj.values_mut() {
        l.sort_unstable();
    }
    let start = *adj.keys().next().unwrap();
    let mut cycle = vec![start];
    let mut prev = start;
    let mut cur = adj[&start][0];
    while cur != start {
        cycle.push(cur);
        let nbrs = &adj[&cur];
        let next = if nbrs[0] == prev { nbrs[1] } else { nbrs[0] };
        prev = cur;
        cur = next;
    }
    if cycle.len() == adj.len() {
        Some(cycle)
    } else {
        None
    }
}
