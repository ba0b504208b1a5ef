//! Long cycles in tree lifts with unit loop voltages.
//!
//! When every loop voltage is coprime to `n` and the tree's maximum degree
//! stays below `n / omega`, the lift carries a cycle through almost all
//! vertices. The construction eliminates leaves against a root orientation
//! and replays them in reverse: each leaf fiber is entered by cutting a
//! short subpath out of the parent fiber's cycle arc and detouring the long
//! way around the leaf fiber, guided by a near-zero multiple of the leaf
//! voltage.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::group::{gcd, Group};
use crate::lift::{
    consecutive_runs, rescale_edges, trace_cycle, EdgeSet, LiftEdge, LiftVertex,
};
use crate::path_ham::CycleCertificate;
use crate::voltage::{rescale_by_unit, VoltageTree};

/// A multiple of a generator landing near zero: `k * g = h` with
/// `distance(h) <= floor(n / m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NearZeroMultiple {
    pub k: u64,
    pub h: u64,
    pub dist: u64,
}

/// The multiple of `g` among `k in [1, m]` closest to zero (smallest `k`
/// on ties, the zero multiple itself excluded); the pigeonhole guarantees a
/// distance of at most `floor(n / m)`.
pub fn near_zero_multiple(group: Group, g: u64, m: u64) -> Result<NearZeroMultiple> {
    let n = group.order();
    if gcd(g, n) != 1 {
        return Err(Error::NotGenerator(g, n));
    }
    if m == 0 || m > n {
        return Err(Error::InvalidParams(format!("m={m} not in [1, n]")));
    }
    let mut best: Option<NearZeroMultiple> = None;
    let mut h = 0u64;
    for k in 1..=m.min(n - 1) {
        h = group.add(h, group.reduce(g));
        let dist = group.distance(h);
        if best.is_none_or(|b| dist < b.dist) {
            best = Some(NearZeroMultiple { k, h, dist });
        }
    }
    let best = best.ok_or_else(|| Error::InvalidParams("no nonzero multiple in range".into()))?;
    if best.dist > n / m {
        return Err(Error::InternalInvariantBroken(format!(
            "no multiple of {g} within {} of zero among the first {m}",
            n / m
        )));
    }
    Ok(best)
}

/// Every edge directed toward the root, so each vertex points out at most
/// once.
#[derive(Debug, Clone)]
pub struct TreeOrientation {
    root: usize,
    parent: Vec<Option<usize>>,
    children: Vec<usize>,
}

impl TreeOrientation {
    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn out_degree(&self, v: usize) -> u64 {
        u64::from(self.parent[v].is_some())
    }

    pub fn in_degree(&self, v: usize) -> u64 {
        self.children[v] as u64
    }
}

/// Orients every edge toward vertex 0.
pub fn orient_tree(t: &VoltageTree) -> TreeOrientation {
    let m = t.vertex_count();
    let root = 0usize;
    let mut parent = vec![None; m];
    let mut seen = vec![false; m];
    let mut stack = vec![root];
    seen[root] = true;
    while let Some(x) = stack.pop() {
        for &y in t.neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                parent[y] = Some(x);
                stack.push(y);
            }
        }
    }
    let mut children = vec![0usize; m];
    for p in parent.iter().flatten() {
        children[*p] += 1;
    }
    TreeOrientation { root, parent, children }
}

/// Budget parameters of a long-cycle run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleBudget {
    pub omega: u64,
    pub s: u64,
}

impl CycleBudget {
    pub fn new(omega: u64) -> CycleBudget {
        CycleBudget { omega, s: ceil_sqrt(omega) }
    }

    /// `n (1 - 1/s - s/omega) >= s`, as integers.
    pub fn length_hypothesis(&self, n: u64) -> bool {
        let (s, w) = (self.s as i128, self.omega as i128);
        let n = n as i128;
        n * (s * w - w - s * s) >= s * s * w
    }

    /// `max degree <= n / omega`, as integers.
    pub fn degree_hypothesis(&self, n: u64, max_degree: u64) -> bool {
        max_degree as u128 * self.omega as u128 <= n as u128
    }

    /// Per-fiber deficit: `missing <= out * n/s + in * s`, as integers.
    pub fn fiber_deficit_ok(&self, n: u64, missing: u64, out_deg: u64, in_deg: u64) -> bool {
        (self.s as u128) * missing as u128
            <= out_deg as u128 * n as u128 + in_deg as u128 * (self.s as u128) * self.s as u128
    }

    /// Global bound: `covered >= (1 - 1/s - s/omega) * total`, as integers.
    pub fn global_bound_ok(&self, covered: u64, total: u64) -> bool {
        let (s, w) = (self.s as u128, self.omega as u128);
        (covered as u128) * s * w >= total as u128 * (s * w - w - s * s)
    }
}

pub fn ceil_sqrt(x: u64) -> u64 {
    let mut s = (x as f64).sqrt() as u64;
    while s * s < x {
        s += 1;
    }
    while s > 0 && (s - 1) * (s - 1) >= x {
        s -= 1;
    }
    s
}

/// Builds a cycle covering at least `(1 - 1/s - s/omega)` of the lift.
pub fn long_cycle(t: &VoltageTree, omega: u64) -> Result<CycleCertificate> {
    let group = t.group();
    let n = group.order();
    let m = t.vertex_count();
    if !t.has_zero_cut_edges() {
        return Err(Error::CutEdgesNotNormalized);
    }
    for v in 0..m {
        if gcd(t.loop_label(v), n) != 1 {
            return Err(Error::HypothesisViolated(format!(
                "loop voltage {} at vertex {v} is not coprime to {n}",
                t.loop_label(v)
            )));
        }
    }
    if omega == 0 {
        return Err(Error::HypothesisViolated("omega must be positive".into()));
    }
    let budget = CycleBudget::new(omega);
    if !budget.degree_hypothesis(n, t.max_degree() as u64) {
        return Err(Error::HypothesisViolated(format!(
            "maximum degree {} exceeds n/omega = {n}/{omega}",
            t.max_degree()
        )));
    }
    if !budget.length_hypothesis(n) {
        return Err(Error::HypothesisViolated(format!(
            "n(1 - 1/s - s/omega) < s for n={n}, omega={omega}"
        )));
    }
    let s = budget.s;
    let orientation = orient_tree(t);

    // Leaf elimination order: lowest-id leaf of the remaining tree, never
    // the root.
    let mut degree: Vec<usize> = (0..m).map(|v| t.degree(v)).collect();
    let mut alive = vec![true; m];
    let mut removal: Vec<(usize, usize)> = Vec::new();
    for _ in 0..m.saturating_sub(1) {
        let leaf = (0..m)
            .find(|&v| alive[v] && v != orientation.root() && degree[v] <= 1)
            .ok_or_else(|| Error::InternalInvariantBroken("no removable leaf".into()))?;
        let parent = t
            .neighbors(leaf)
            .iter()
            .copied()
            .find(|&w| alive[w])
            .ok_or_else(|| Error::InternalInvariantBroken("leaf has no live neighbor".into()))?;
        alive[leaf] = false;
        degree[parent] -= 1;
        removal.push((leaf, parent));
    }

    // Start from the root fiber and replay the removals in reverse.
    let root = orientation.root();
    let mut cycle: EdgeSet = (0..n)
        .map(|g| {
            LiftEdge::new(
                LiftVertex::new(root, g),
                LiftVertex::new(root, group.add(g, t.loop_label(root))),
            )
        })
        .collect();
    for &(leaf, parent) in removal.iter().rev() {
        cycle = attach_leaf(t, &cycle, leaf, parent, s)?;
    }

    let traced = trace_cycle(&cycle)
        .ok_or_else(|| Error::InternalInvariantBroken("result is not a single cycle".into()))?;
    validate_long_cycle(t, &traced, &cycle, &orientation, budget)?;
    Ok(CycleCertificate { cycle: traced, left: None, right: None })
}

/// One leaf step, in coordinates rescaled so the parent fiber steps by 1.
fn attach_leaf(
    t: &VoltageTree,
    cycle: &EdgeSet,
    leaf: usize,
    parent: usize,
    s: u64,
) -> Result<EdgeSet> {
    let group = t.group();
    let n = group.order();
    let unit = group.inv(t.loop_label(parent))?;
    let scaled_tree = rescale_by_unit(t, unit)?;
    let mut work = rescale_edges(t, cycle, unit);
    let leaf_step = scaled_tree.loop_label(leaf);

    // The parent fiber's current arc.
    let positions: BTreeSet<u64> = work
        .iter()
        .filter(|e| e.in_fiber(parent))
        .map(|e| {
            let (a, b) = e.ends();
            if group.add(a.g, 1) == b.g {
                a.g
            } else {
                b.g
            }
        })
        .collect();
    let runs = consecutive_runs(&positions, n);
    if runs.len() != 1 {
        return Err(Error::InternalInvariantBroken(format!(
            "parent fiber {parent} holds {} arcs instead of one",
            runs.len()
        )));
    }
    let (start, len) = runs[0];
    if len < s {
        return Err(Error::InternalInvariantBroken(format!(
            "parent fiber {parent} keeps only {len} edges, fewer than {s}"
        )));
    }

    // Near-zero multiple of the leaf voltage; the detour removes `dist`
    // parent edges and walks `n - k` leaf edges.
    let m_bound = (n / s).max(1).min(n);
    let mut nz = near_zero_multiple(group, leaf_step, m_bound)?;
    if nz.dist > s {
        nz = (1..=m_bound)
            .map(|k| {
                let h = group.mul(group.reduce(k), leaf_step);
                NearZeroMultiple { k, h, dist: group.distance(h) }
            })
            .find(|c| c.dist <= s)
            .ok_or_else(|| {
                Error::InternalInvariantBroken(format!(
                    "no multiple of {leaf_step} within {s} of zero"
                ))
            })?;
    }
    let d = nz.dist;

    // Choose the arc end whose inward step matches the sign of h.
    let (v0, vd) = if nz.h == d {
        (start, group.add(start, d))
    } else {
        let end = group.add(start, group.reduce(len));
        (end, group.sub(end, d))
    };
    // Remove the subpath from v0 to vd.
    let mut x = v0;
    for _ in 0..d {
        let next = if nz.h == d { group.add(x, 1) } else { group.sub(x, 1) };
        let e = LiftEdge::new(LiftVertex::new(parent, x), LiftVertex::new(parent, next));
        if !work.remove(&e) {
            return Err(Error::InternalInvariantBroken("subpath edge missing".into()));
        }
        x = next;
    }
    // Rungs into the leaf fiber.
    work.insert(LiftEdge::new(LiftVertex::new(parent, v0), LiftVertex::new(leaf, v0)));
    work.insert(LiftEdge::new(LiftVertex::new(parent, vd), LiftVertex::new(leaf, vd)));
    // The long way around the leaf fiber: n - k steps of -leaf_step.
    let mut cur = v0;
    for _ in 0..(n - nz.k) {
        let next = group.sub(cur, leaf_step);
        work.insert(LiftEdge::new(LiftVertex::new(leaf, cur), LiftVertex::new(leaf, next)));
        cur = next;
    }
    if cur != vd {
        return Err(Error::InternalInvariantBroken("leaf detour does not close".into()));
    }

    Ok(rescale_edges(t, &work, t.loop_label(parent)))
}

fn validate_long_cycle(
    t: &VoltageTree,
    traced: &[LiftVertex],
    edges: &EdgeSet,
    orientation: &TreeOrientation,
    budget: CycleBudget,
) -> Result<()> {
    let group = t.group();
    let n = group.order();
    let m = t.vertex_count();
    for w in 0..m {
        let step = t.loop_label(w);
        let positions: BTreeSet<u64> = edges
            .iter()
            .filter(|e| e.in_fiber(w))
            .map(|e| {
                let (a, b) = e.ends();
                if group.add(a.g, step) == b.g {
                    a.g
                } else {
                    b.g
                }
            })
            .collect();
        let missing = n - positions.len() as u64;
        if !budget.fiber_deficit_ok(n, missing, orientation.out_degree(w), orientation.in_degree(w))
        {
            return Err(Error::InternalInvariantBroken(format!(
                "fiber {w} misses {missing} edges, over its budget"
            )));
        }
        // The kept edges form a path (or the whole fiber cycle): positions
        // are consecutive along multiples of the step.
        let scaled: BTreeSet<u64> =
            positions.iter().map(|&x| group.mul(x, group.inv(step).unwrap())).collect();
        if !scaled.is_empty() && consecutive_runs(&scaled, n).len() != 1 {
            return Err(Error::InternalInvariantBroken(format!(
                "fiber {w} intersection is not a single path"
            )));
        }
    }
    if !budget.global_bound_ok(traced.len() as u64, m as u64 * n) {
        return Err(Error::InternalInvariantBroken(format!(
            "cycle covers {} of {} vertices, below the bound",
            traced.len(),
            m as u64 * n
        )));
    }
    Ok(())
}

/// Outcome of the circumference parameter check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamCheck {
    /// Degree bound 0: a single vertex, trivially covered by its fiber.
    TrivialDeltaZero,
    Accepted { omega: u64, s: u64 },
}

/// Translates `(delta, epsilon)` into the smallest workable `omega` and
/// verifies both long-cycle hypotheses for it.
pub fn check_circumference_params(delta: u64, epsilon: f64, n: u64) -> Result<ParamCheck> {
    if !(epsilon > 0.0 && epsilon <= 0.5) {
        return Err(Error::ParamsRejected(format!("epsilon={epsilon} not in (0, 1/2]")));
    }
    if delta == 0 {
        return Ok(ParamCheck::TrivialDeltaZero);
    }
    if (n as f64) * epsilon * epsilon < 5.0 * delta as f64 {
        return Err(Error::ParamsRejected(format!(
            "n={n} is below 5*delta/epsilon^2 = {}",
            5.0 * delta as f64 / (epsilon * epsilon)
        )));
    }
    // Smallest omega with 1/s + s/omega < epsilon.
    let cap = (16.0 / (epsilon * epsilon)) as u64 + 100;
    let omega = (1..=cap)
        .find(|&w| {
            let s = ceil_sqrt(w);
            ((w + s * s) as f64) < epsilon * (s * w) as f64
        })
        .ok_or_else(|| Error::ParamsRejected("no omega satisfies the epsilon bound".into()))?;
    let budget = CycleBudget::new(omega);
    if !budget.degree_hypothesis(n, delta) {
        return Err(Error::ParamsRejected(format!("derived omega={omega} fails delta*omega <= n")));
    }
    if !budget.length_hypothesis(n) {
        return Err(Error::ParamsRejected(format!(
            "derived omega={omega} fails n(1 - 1/s - s/omega) >= s"
        )));
    }
    Ok(ParamCheck::Accepted { omega, s: budget.s })
}


#[cfg(test)]
mod oracle_tests {
    use super::*;
    use crate::lift::build_lift;
    use crate::oracle::longest_cycle_brute;

    #[test]
    fn exact_search_confirms_the_constructed_length() {
        // Small enough for the exhaustive longest-cycle search: the optimum
        // is at least what the construction achieves.
        let t = VoltageTree::new(18, vec![5], vec![]).unwrap();
        let cert = long_cycle(&t, 6).unwrap();
        let best = longest_cycle_brute(&build_lift(&t), 18).unwrap();
        assert!(best >= cert.cycle.len());
        assert_eq!(best, 18);
    }
}
