//! Constructions on lifts of reflexive paths: a spanning 2-factor for any
//! even track count in range, and a Hamiltonian cycle when the path is odd
//! shifting. Both run the billiard strategy with the endpoint voltage
//! rescaled to 1, close the path family inside the two endpoint fibers, and
//! map the result back through the inverse rescaling.

use crate::billiard::{component_bound, extended_billiard, is_odd_shifting, BilliardParams, PathFamily};
use crate::error::{Error, Result};
use crate::lift::{build_lift, rescale_edges, EdgeSet, LiftEdge, LiftVertex, trace_cycle};
use crate::oracle::{is_hamiltonian_cycle, is_two_factor};
use crate::voltage::{rescale_by_unit, VoltageTree};

/// Edges inside one fiber forming a color class of a proper 2-coloring of a
/// path in that fiber: consecutive along the fiber cycle with exactly one
/// skipped edge between neighbors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternatingEdgeSet {
    pub fiber: usize,
    pub edges: Vec<LiftEdge>,
}

impl AlternatingEdgeSet {
    pub fn edge_set(&self) -> EdgeSet {
        self.edges.iter().copied().collect()
    }

    /// Structural check of the alternating consecutive property. The fiber
    /// cycle steps by the loop voltage; each edge must start two steps
    /// after the previous one.
    pub fn is_alternating_consecutive(&self, t: &VoltageTree) -> bool {
        let group = t.group();
        let n = group.order();
        let s = t.loop_label(self.fiber);
        if s == 0 || self.edges.is_empty() {
            return false;
        }
        // Identify each edge by the endpoint x with the edge {x, x + s}.
        let mut starts = Vec::new();
        for e in &self.edges {
            let (a, b) = e.ends();
            if a.base != self.fiber || b.base != self.fiber {
                return false;
            }
            if group.add(a.g, s) == b.g {
                starts.push(a.g);
            } else if group.add(b.g, s) == a.g {
                starts.push(b.g);
            } else {
                return false;
            }
        }
        let set: std::collections::BTreeSet<u64> = starts.iter().copied().collect();
        if set.len() != starts.len() {
            return false;
        }
        let two_s = group.add(s, s);
        // Some rotation must chain the starts by steps of 2s, spanning a
        // path (2k - 1 fiber edges), not the whole cycle.
        let k = starts.len() as u64;
        if k == 1 {
            return true;
        }
        'candidate: for &first in &set {
            let mut x = first;
            for _ in 1..k {
                x = group.add(x, two_s);
                if !set.contains(&x) {
                    continue 'candidate;
                }
            }
            // The covering path uses 2k - 1 consecutive fiber edges.
            if n / crate::group::gcd(n, s) >= 2 * k {
                return true;
            }
        }
        false
    }
}

/// A 2-factor of a path lift together with the two removed matchings and
/// the drift between the two endpoint progressions.
#[derive(Debug, Clone)]
pub struct TwoFactorResult {
    pub factor: EdgeSet,
    pub left: AlternatingEdgeSet,
    pub right: AlternatingEdgeSet,
    pub drift: u64,
}

/// An ordered cycle in a lift, with the endpoint-fiber matchings exposed
/// when the construction produces them.
#[derive(Debug, Clone)]
pub struct CycleCertificate {
    pub cycle: Vec<LiftVertex>,
    pub left: Option<AlternatingEdgeSet>,
    pub right: Option<AlternatingEdgeSet>,
}

impl CycleCertificate {
    pub fn edges(&self) -> EdgeSet {
        let mut out = EdgeSet::new();
        for w in self.cycle.windows(2) {
            out.insert(LiftEdge::new(w[0], w[1]));
        }
        if self.cycle.len() >= 3 {
            out.insert(LiftEdge::new(*self.cycle.last().unwrap(), self.cycle[0]));
        }
        out
    }
}

struct PathContext {
    rescaled: VoltageTree,
    seq: Vec<usize>,
    r: u64,
    d: usize,
    l_scaled: u64,
}

fn check_hypotheses(t: &VoltageTree, d: usize, l: u64) -> Result<PathContext> {
    let seq = t.path_sequence()?;
    let m = seq.len();
    if m < 2 {
        return Err(Error::HypothesisViolated("path needs at least two vertices".into()));
    }
    if !t.has_zero_cut_edges() {
        return Err(Error::CutEdgesNotNormalized);
    }
    let group = t.group();
    let n = group.order();
    if n < 3 {
        return Err(Error::HypothesisViolated(format!("group order {n} is degenerate")));
    }
    let r = t.loop_label(seq[0]);
    if t.loop_label(seq[m - 1]) != r {
        return Err(Error::HypothesisViolated("endpoint voltages differ".into()));
    }
    if !group.is_unit(r) {
        return Err(Error::HypothesisViolated(format!("endpoint voltage {r} is not coprime to {n}")));
    }
    if l >= n {
        return Err(Error::HypothesisViolated(format!("offset l={l} not in [0, n-1]")));
    }
    let c = component_bound(t)?;
    if !d.is_multiple_of(2) || (d as u64) < 2 * c || d as u64 > n {
        return Err(Error::HypothesisViolated(format!(
            "track count d={d} must be even with {} <= d <= {n}",
            2 * c
        )));
    }
    let unit = group.inv(r)?;
    Ok(PathContext {
        rescaled: rescale_by_unit(t, unit)?,
        seq,
        r,
        d,
        l_scaled: group.mul(l, unit),
    })
}

/// Edges that close a billiard family into a 2-factor, all in rescaled
/// coordinates where the fiber step is 1: the interior matchings on slots
/// 1..d-2 in each endpoint fiber and the two wrap-around fiber paths.
fn closing_edges(
    ctx: &PathContext,
    fam: &PathFamily,
) -> (EdgeSet, Vec<LiftEdge>, Vec<LiftEdge>, u64) {
    let group = ctx.rescaled.group();
    let n = group.order();
    let m = ctx.seq.len();
    let d = ctx.d as u64;
    let (v_first, v_last) = (ctx.seq[0], ctx.seq[m - 1]);
    let g0 = fam.arrival_offset(m);

    let mut edges = EdgeSet::new();
    for path in fam.paths() {
        for w in path.windows(2) {
            edges.insert(LiftEdge::new(w[0], w[1]));
        }
    }
    let fiber_edge = |base: usize, x: u64| {
        LiftEdge::new(LiftVertex::new(base, x), LiftVertex::new(base, group.add(x, 1)))
    };
    for (base, start) in [(v_first, ctx.l_scaled), (v_last, g0)] {
        // Interior matching on slots 1..d-2.
        let mut k = 1;
        while k < d.saturating_sub(2) {
            edges.insert(fiber_edge(base, group.add(start, k)));
            k += 2;
        }
        // Wrap path from slot d-1 all the way around to slot 0.
        for j in 0..=(n - d) {
            edges.insert(fiber_edge(base, group.add(start, group.reduce(d - 1 + j))));
        }
    }
    let removed = |base: usize, start: u64| -> Vec<LiftEdge> {
        (0..d / 2).map(|k| fiber_edge(base, group.add(start, 2 * k))).collect()
    };
    let left = removed(v_first, ctx.l_scaled);
    let right = removed(v_last, g0);
    let drift = group.sub(g0, ctx.l_scaled);
    (edges, left, right, drift)
}

fn unscale_matching(t: &VoltageTree, fiber: usize, edges: &[LiftEdge], r: u64) -> AlternatingEdgeSet {
    let group = t.group();
    AlternatingEdgeSet {
        fiber,
        edges: edges
            .iter()
            .map(|e| {
                let (a, b) = e.ends();
                LiftEdge::new(
                    LiftVertex::new(a.base, group.mul(a.g, r)),
                    LiftVertex::new(b.base, group.mul(b.g, r)),
                )
            })
            .collect(),
    }
}

/// Builds a 2-factor of the path lift for any even `d` between twice the
/// component bound and `n`, exposing the removed endpoint matchings.
pub fn two_factor_of_path(t: &VoltageTree, d: usize, l: u64) -> Result<TwoFactorResult> {
    let ctx = check_hypotheses(t, d, l)?;
    let fam = extended_billiard(&ctx.rescaled, BilliardParams { l: ctx.l_scaled, r: 1, d })?;
    let (edges, left, right, drift_scaled) = closing_edges(&ctx, &fam);
    let m = ctx.seq.len();
    let result = TwoFactorResult {
        factor: rescale_edges(t, &edges, ctx.r),
        left: unscale_matching(t, ctx.seq[0], &left, ctx.r),
        right: unscale_matching(t, ctx.seq[m - 1], &right, ctx.r),
        drift: t.group().mul(drift_scaled, ctx.r),
    };
    let report = is_two_factor(&build_lift(t), &result.factor);
    if !report.passed() {
        return Err(Error::InternalInvariantBroken(format!(
            "2-factor validation failed: {:?}",
            report.violations()[0]
        )));
    }
    Ok(result)
}

/// Builds a Hamiltonian cycle of the lift of an odd shifting path, with the
/// two removed matchings exposed.
pub fn ham_cycle_odd_shifting(t: &VoltageTree, l: u64) -> Result<CycleCertificate> {
    let seq = t.path_sequence()?;
    if seq.len() < 2 {
        return Err(Error::HypothesisViolated("path needs at least two vertices".into()));
    }
    let r = t.loop_label(seq[0]);
    let c = component_bound(t)?;
    let d = (2 * c) as usize;
    let ctx = check_hypotheses(t, d, l)?;
    if is_odd_shifting(t, BilliardParams { l, r, d })?.is_none() {
        return Err(Error::NotOddShifting);
    }
    let fam = extended_billiard(&ctx.rescaled, BilliardParams { l: ctx.l_scaled, r: 1, d })?;
    let (edges, left, right, _) = closing_edges(&ctx, &fam);
    let unscaled = rescale_edges(t, &edges, ctx.r);
    let cycle = trace_cycle(&unscaled).ok_or_else(|| {
        Error::InternalInvariantBroken("closed billiard family is not a single cycle".into())
    })?;
    let m = ctx.seq.len();
    let cert = CycleCertificate {
        cycle,
        left: Some(unscale_matching(t, ctx.seq[0], &left, ctx.r)),
        right: Some(unscale_matching(t, ctx.seq[m - 1], &right, ctx.r)),
    };
    let report = is_hamiltonian_cycle(&build_lift(t), &cert.cycle);
    if !report.passed() {
        return Err(Error::InternalInvariantBroken(format!(
            "Hamiltonian validation failed: {:?}",
            report.violations()[0]
        )));
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift::shift_edges;
    use crate::oracle::brute_force_hamiltonian;

    fn path(n: u64, loops: &[i64]) -> VoltageTree {
        let edges: Vec<(usize, usize, i64)> = (0..loops.len() - 1).map(|i| (i, i + 1, 0)).collect();
        VoltageTree::new(n, loops.to_vec(), edges).unwrap()
    }

    #[test]
    fn two_vertex_factor_is_hamiltonian_for_prime_order() {
        // d = 2 on a two-vertex path over Z_5: one cycle through all 10
        // vertices, single-edge matchings on both sides.
        let t = path(5, &[1, 1]);
        let f = two_factor_of_path(&t, 2, 0).unwrap();
        assert_eq!(f.left.edges.len(), 1);
        assert_eq!(f.right.edges.len(), 1);
        let cycle = trace_cycle(&f.factor).expect("single cycle");
        assert!(is_hamiltonian_cycle(&build_lift(&t), &cycle).passed());
        let brute = brute_force_hamiltonian(&build_lift(&t), 24).unwrap();
        assert!(brute.is_some());
    }

    #[test]
    fn left_matching_is_the_stated_edge_list() {
        let t = path(11, &[3, 1, 3]);
        let l = 2u64;
        let f = two_factor_of_path(&t, 4, l).unwrap();
        let g = t.group();
        let r = 3u64;
        let expect: Vec<LiftEdge> = (0..2u64)
            .map(|k| {
                LiftEdge::new(
                    LiftVertex::new(0, g.add(l, g.mul(2 * k, r))),
                    LiftVertex::new(0, g.add(l, g.mul(2 * k + 1, r))),
                )
            })
            .collect();
        assert_eq!(f.left.edges, expect);
        assert!(f.left.is_alternating_consecutive(&t));
        assert!(f.right.is_alternating_consecutive(&t));
        // The factor holds every endpoint-fiber edge outside the matching.
        let lift = build_lift(&t);
        let fiber = lift.fiber_edges(0);
        let left_set = f.left.edge_set();
        for e in &fiber {
            assert_eq!(f.factor.contains(e), !left_set.contains(e));
        }
    }

    #[test]
    fn factor_shift_equivariance() {
        let t = path(9, &[2, 3, 2]);
        let base = two_factor_of_path(&t, 4, 1).unwrap();
        let shifted = two_factor_of_path(&t, 4, t.group().add(1, 1)).unwrap();
        assert_eq!(shift_edges(&t, &base.factor, 1), shifted.factor);
    }

    #[test]
    fn degenerate_full_width_factor() {
        // d = n leaves a single wrap edge per endpoint fiber.
        let t = path(6, &[1, 1]);
        let f = two_factor_of_path(&t, 6, 0).unwrap();
        assert_eq!(f.left.edges.len(), 3);
        assert!(is_two_factor(&build_lift(&t), &f.factor).passed());
    }

    #[test]
    fn hypothesis_violations_are_reported() {
        assert!(matches!(
            two_factor_of_path(&path(10, &[2, 2]), 2, 0),
            Err(Error::HypothesisViolated(_))
        ));
        assert!(matches!(
            two_factor_of_path(&path(5, &[1, 1]), 3, 0),
            Err(Error::HypothesisViolated(_))
        ));
        assert!(matches!(
            two_factor_of_path(&path(5, &[1, 2]), 2, 0),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn odd_shifting_two_vertex_cycle_matches_brute_force() {
        let t = path(5, &[1, 1]);
        let cert = ham_cycle_odd_shifting(&t, 0).unwrap();
        assert_eq!(cert.cycle.len(), 10);
        let lift = build_lift(&t);
        assert!(is_hamiltonian_cycle(&lift, &cert.cycle).passed());
        assert!(brute_force_hamiltonian(&lift, 24).unwrap().is_some());
    }

    #[test]
    fn composite_odd_shifting_path_is_hamiltonian() {
        // Four order preserving segments joined over Z_12, running d = 4.
        let segs = vec![
            path(12, &[1, 3, 9, 1]),
            path(12, &[1, 1]),
            path(12, &[1, 5, 7, 1]),
            path(12, &[1, 1]),
        ];
        let joined = crate::billiard::join_order_preserving_paths(&segs, 1).unwrap();
        let cert = ham_cycle_odd_shifting(&joined, 0).unwrap();
        let lift = build_lift(&joined);
        assert!(is_hamiltonian_cycle(&lift, &cert.cycle).passed());
        assert_eq!(cert.cycle.len(), lift.vertex_count());
        assert!(cert.left.unwrap().edges.len() == 2);
    }

    #[test]
    fn ham_cycle_shift_equivariance() {
        let t = path(7, &[1, 1, 1]);
        let a = ham_cycle_odd_shifting(&t, 0).unwrap();
        let b = ham_cycle_odd_shifting(&t, 1).unwrap();
        assert_eq!(shift_edges(&t, &a.edges(), 1), b.edges());
    }

    #[test]
    fn non_odd_shifting_is_rejected() {
        let t = path(7, &[1, 2, 5, 1]);
        assert_eq!(ham_cycle_odd_shifting(&t, 0).unwrap_err(), Error::NotOddShifting);
    }
}
