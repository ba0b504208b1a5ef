//! The extended billiard strategy on lifts of reflexive paths.
//!
//! Given a reflexive path with zero cut-edge labels, the strategy grows a
//! family of `d` vertex-disjoint paths fiber by fiber: paths enter a fiber at
//! an arithmetic progression of group values with common difference `r`, and
//! inside each interior fiber every path sweeps forward in steps of the loop
//! voltage until the next vertex is some path's arrival vertex. The family
//! leaves each interior fiber fully covered whenever it meets all of its
//! components, and the order in which paths exit a fiber is a permutation
//! that depends only on the fiber's loop voltage.

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};
use crate::group::{gcd, Group};
use crate::lift::LiftVertex;
use crate::perm::Perm;
use crate::voltage::VoltageTree;

/// Parameters of a billiard run: the start offset `l`, the progression
/// stride `r`, and the number of paths `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BilliardParams {
    pub l: u64,
    pub r: u64,
    pub d: usize,
}

/// The result of a billiard run.
///
/// `paths[j]` starts at `(v_1, l + j*r)`. `arrivals[t-1]` is the offset
/// `i_t` of the arrival progression in the fiber over the `t`-th path
/// vertex; `exit_offsets[t-1]` is the offset after the sweep at an interior
/// fiber; `orders[t-1]` maps each path index to the progression slot it
/// occupies when it leaves the `t`-th fiber.
#[derive(Debug, Clone)]
pub struct PathFamily {
    params: BilliardParams,
    sequence: Vec<usize>,
    paths: Vec<Vec<LiftVertex>>,
    arrivals: Vec<u64>,
    exit_offsets: Vec<Option<u64>>,
    orders: Vec<Perm>,
}

impl PathFamily {
    pub fn params(&self) -> BilliardParams {
        self.params
    }

    /// Base vertices in path order.
    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    pub fn paths(&self) -> &[Vec<LiftVertex>] {
        &self.paths
    }

    /// `i_t` for 1-based `t`.
    pub fn arrival_offset(&self, t: usize) -> u64 {
        self.arrivals[t - 1]
    }

    pub fn arrivals(&self) -> &[u64] {
        &self.arrivals
    }

    /// `alpha_t` for 1-based interior `t`.
    pub fn exit_offset(&self, t: usize) -> Option<u64> {
        self.exit_offsets[t - 1]
    }

    /// Path order permutations, entry `t - 1` for the `t`-th fiber,
    /// `1 <= t <= m - 1`. Entry 0 is the identity.
    pub fn orders(&self) -> &[Perm] {
        &self.orders
    }

    /// The order in which paths enter the last fiber.
    pub fn final_order(&self) -> &Perm {
        self.orders.last().expect("orders never empty")
    }
}

/// Checks shape and parameter preconditions shared by the billiard
/// operations and returns the path's vertex sequence.
fn check_path_params(t: &VoltageTree, params: BilliardParams) -> Result<Vec<usize>> {
    let seq = t.path_sequence()?;
    if !t.has_zero_cut_edges() {
        return Err(Error::CutEdgesNotNormalized);
    }
    let n = t.order();
    if params.r == 0 || params.r >= n {
        return Err(Error::InvalidParams(format!("stride r={} not in [1, n-1]", params.r)));
    }
    if params.l >= n {
        return Err(Error::InvalidParams(format!("offset l={} not in [0, n-1]", params.l)));
    }
    if params.d == 0 || params.d as u64 > n {
        return Err(Error::InvalidParams(format!("path count d={} not in [1, n]", params.d)));
    }
    // d start vertices l, l+r, .. must be distinct in Z_n.
    if params.d as u64 > n / gcd(params.r, n) {
        return Err(Error::InvalidParams(format!(
            "arrival vertices collide: d={} exceeds the order {} of r={}",
            params.d,
            n / gcd(params.r, n),
            params.r
        )));
    }
    Ok(seq)
}

/// Half the maximum number of components over the interior fibers of a
/// reflexive path, rounded up. Two-vertex paths have no interior and get 1.
pub fn component_bound(t: &VoltageTree) -> Result<u64> {
    let seq = t.path_sequence()?;
    let m = seq.len();
    if m < 2 {
        return Err(Error::NotAPath);
    }
    if m == 2 {
        return Ok(1);
    }
    let n = t.order();
    let mx = seq[1..m - 1]
        .iter()
        .map(|&v| {
            let s = t.loop_label(v);
            if s == 0 {
                n
            } else {
                gcd(n, s)
            }
        })
        .max()
        .unwrap();
    Ok(mx.div_ceil(2))
}

/// Runs the extended billiard strategy.
pub fn extended_billiard(t: &VoltageTree, params: BilliardParams) -> Result<PathFamily> {
    let seq = check_path_params(t, params)?;
    let group = t.group();
    let n = group.order();
    let m = seq.len();
    let d = params.d;
    let (l, r) = (params.l, params.r);

    let mut paths: Vec<Vec<LiftVertex>> = (0..d)
        .map(|j| vec![LiftVertex::new(seq[0], group.add(l, group.mul(j as u64, r)))])
        .collect();
    let mut arrivals = vec![l];
    let mut exit_offsets: Vec<Option<u64>> = vec![None];
    let mut orders = vec![Perm::identity(d)];
    let mut offset = l; // arrival offset at the current fiber
    let mut order = Perm::identity(d); // path index -> slot

    let mut slot_of = vec![usize::MAX; n as usize];
    for t_pos in 1..=m {
        if t_pos >= 2 && t_pos < m {
            let a = t.loop_label(seq[t_pos - 1]);
            if a != 0 {
                let arr: Vec<u64> =
                    (0..d).map(|q| group.add(offset, group.mul(q as u64, r))).collect();
                for (q, &x) in arr.iter().enumerate() {
                    slot_of[x as usize] = q;
                }
                let mut step = vec![usize::MAX; d];
                for (j, path) in paths.iter_mut().enumerate() {
                    let q = order.apply(j);
                    let mut cur = arr[q];
                    loop {
                        let nxt = group.add(cur, a);
                        if slot_of[nxt as usize] != usize::MAX {
                            step[q] = slot_of[nxt as usize];
                            break;
                        }
                        path.push(LiftVertex::new(seq[t_pos - 1], nxt));
                        cur = nxt;
                    }
                }
                for &x in &arr {
                    slot_of[x as usize] = usize::MAX;
                }
                let step = Perm::from_images(step)
                    .map_err(|_| Error::InternalInvariantBroken("fiber sweep not a bijection".into()))?;
                order = step.compose(&order);
                offset = group.sub(offset, a);
            }
            exit_offsets.push(Some(offset));
            orders.push(order.clone());
        }
        if t_pos < m {
            for (j, path) in paths.iter_mut().enumerate() {
                let val = group.add(offset, group.mul(order.apply(j) as u64, r));
                path.push(LiftVertex::new(seq[t_pos], val));
            }
            arrivals.push(offset);
            if t_pos + 1 == m {
                exit_offsets.push(None);
            }
        }
    }

    Ok(PathFamily { params, sequence: seq, paths, arrivals, exit_offsets, orders })
}

/// The reorder a single fiber sweep applies to progression slots; depends
/// only on the group order, the fiber's loop voltage `a`, `r`, and `d`.
pub fn fiber_step_perm(group: Group, a: u64, r: u64, d: usize) -> Result<Perm> {
    let n = group.order();
    if d as u64 > n / gcd(r, n) {
        return Err(Error::InvalidParams("arrival vertices collide".into()));
    }
    let a = group.reduce(a);
    if a == 0 {
        return Ok(Perm::identity(d));
    }
    let arr: Vec<u64> = (0..d).map(|q| group.mul(q as u64, r)).collect();
    let mut images = vec![usize::MAX; d];
    for (q, &x) in arr.iter().enumerate() {
        let mut cur = x;
        loop {
            cur = group.add(cur, a);
            if let Some(q2) = arr.iter().position(|&y| y == cur) {
                images[q] = q2;
                break;
            }
        }
    }
    Perm::from_images(images)
        .map_err(|_| Error::InternalInvariantBroken("fiber sweep not a bijection".into()))
}

/// The permutation applied to the path order at the `t`-th fiber (1-based,
/// interior): the order leaving fiber `t` composed with the inverse of the
/// order leaving fiber `t - 1`.
pub fn step_permutation(t: &VoltageTree, params: BilliardParams, t_pos: usize) -> Result<Perm> {
    let seq = check_path_params(t, params)?;
    let m = seq.len();
    if t_pos < 2 || t_pos > m.saturating_sub(1) {
        return Err(Error::IndexOutOfRange(t_pos));
    }
    let fam = extended_billiard(t, params)?;
    Ok(fam.orders[t_pos - 1].compose(&fam.orders[t_pos - 2].inverse()))
}

/// True when the sweeps at fibers `t` and `t + 1` cancel.
pub fn is_order_preserving_pair(
    t: &VoltageTree,
    params: BilliardParams,
    t_pos: usize,
) -> Result<bool> {
    let seq = check_path_params(t, params)?;
    let m = seq.len();
    if t_pos < 2 || m < 4 || t_pos > m - 2 {
        return Err(Error::IndexOutOfRange(t_pos));
    }
    let group = t.group();
    let first = fiber_step_perm(group, t.loop_label(seq[t_pos - 1]), params.r, params.d)?;
    let second = fiber_step_perm(group, t.loop_label(seq[t_pos]), params.r, params.d)?;
    Ok(second.compose(&first).is_identity())
}

/// Deletes the order preserving pair at positions `t`, `t + 1` and joins
/// their neighbors with a zero-labeled edge.
pub fn smooth_pair(t: &VoltageTree, params: BilliardParams, t_pos: usize) -> Result<VoltageTree> {
    if !is_order_preserving_pair(t, params, t_pos)? {
        return Err(Error::NotOrderPreserving(t_pos));
    }
    let seq = t.path_sequence()?;
    let loops: Vec<i64> = seq
        .iter()
        .enumerate()
        .filter(|&(i, _)| i + 1 != t_pos && i + 1 != t_pos + 1)
        .map(|(_, &v)| t.loop_label(v) as i64)
        .collect();
    let edges: Vec<(usize, usize, i64)> = (0..loops.len() - 1).map(|i| (i, i + 1, 0)).collect();
    VoltageTree::new(t.order(), loops, edges)
}

/// Decides whether some sequence of smoothings reduces the path to its two
/// endpoints. Exhaustive backtracking over all smoothing orders; greedy
/// left-to-right reduction is not sufficient in principle.
pub fn is_order_preserving_path(t: &VoltageTree, params: BilliardParams) -> Result<bool> {
    let seq = check_path_params(t, params)?;
    let m = seq.len();
    if m % 2 != 0 {
        return Err(Error::OddVertexCount);
    }
    if m == 2 {
        return Ok(true);
    }
    let group = t.group();
    let word: Vec<u64> = seq[1..m - 1].iter().map(|&v| t.loop_label(v)).collect();
    let mut phi: BTreeMap<u64, Perm> = BTreeMap::new();
    for &w in &word {
        if let std::collections::btree_map::Entry::Vacant(e) = phi.entry(w) {
            e.insert(fiber_step_perm(group, w, params.r, params.d)?);
        }
    }
    let mut dead: HashSet<Vec<u64>> = HashSet::new();

    fn reduce(word: &[u64], phi: &BTreeMap<u64, Perm>, dead: &mut HashSet<Vec<u64>>) -> bool {
        if word.is_empty() {
            return true;
        }
        if dead.contains(word) {
            return false;
        }
        for i in 0..word.len() - 1 {
            if phi[&word[i + 1]].compose(&phi[&word[i]]).is_identity() {
                let mut next = Vec::with_capacity(word.len() - 2);
                next.extend_from_slice(&word[..i]);
                next.extend_from_slice(&word[i + 2..]);
                if reduce(&next, phi, dead) {
                    return true;
                }
            }
        }
        dead.insert(word.to_vec());
        false
    }

    Ok(reduce(&word, &phi, &mut dead))
}

/// Reads off whether the final path order is a cyclic shift by an odd
/// amount, and returns that amount. Two-vertex paths shift by one: their
/// two paths can be stitched at either fiber in either order.
pub fn is_odd_shifting(t: &VoltageTree, params: BilliardParams) -> Result<Option<u64>> {
    let seq = t.path_sequence()?;
    let m = seq.len();
    if m < 2 {
        return Err(Error::NotAPath);
    }
    let r1 = t.loop_label(seq[0]);
    let rm = t.loop_label(seq[m - 1]);
    if r1 != rm || r1 != params.r {
        return Err(Error::EndpointVoltageMismatch(format!(
            "endpoint voltages ({r1}, {rm}) must both equal r={}",
            params.r
        )));
    }
    let c = component_bound(t)?;
    if params.d as u64 != 2 * c {
        return Err(Error::InvalidParams(format!(
            "d={} but the path requires d = {}",
            params.d,
            2 * c
        )));
    }
    if m == 2 {
        check_path_params(t, params)?;
        return Ok(Some(1));
    }
    let fam = extended_billiard(t, params)?;
    let d = params.d as u64;
    Ok(match fam.final_order().cyclic_shift() {
        Some(shift) => {
            let s = (d - shift as u64) % d;
            if s % 2 == 1 {
                Some(s)
            } else {
                None
            }
        }
        None => None,
    })
}

/// Concatenates an even number of order preserving paths whose endpoint
/// loops all carry the same voltage `r` coprime to the group order; shared
/// junction vertices are merged. The result is an odd shifting path.
pub fn join_order_preserving_paths(paths: &[VoltageTree], r: u64) -> Result<VoltageTree> {
    if paths.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !paths.len().is_multiple_of(2) {
        return Err(Error::OddCount);
    }
    let n = paths[0].order();
    let group = paths[0].group();
    if !group.is_unit(group.reduce(r)) {
        return Err(Error::NonUnit(group.reduce(r), n));
    }
    let mut loops: Vec<i64> = Vec::new();
    for (idx, p) in paths.iter().enumerate() {
        if p.order() != n {
            return Err(Error::InvalidParams("group orders differ".into()));
        }
        let seq = p.path_sequence()?;
        if seq.len() < 2 {
            return Err(Error::NotAPath);
        }
        if p.loop_label(seq[0]) != r || p.loop_label(*seq.last().unwrap()) != r {
            return Err(Error::EndpointVoltageMismatch(format!(
                "path {idx} endpoints must carry voltage {r}"
            )));
        }
        let skip = usize::from(idx > 0);
        loops.extend(seq[skip..].iter().map(|&v| p.loop_label(v) as i64));
    }
    let edges: Vec<(usize, usize, i64)> = (0..loops.len() - 1).map(|i| (i, i + 1, 0)).collect();
    let joined = VoltageTree::new(n, loops, edges)?;
    let d = 2 * component_bound(&joined)?;
    let params = BilliardParams { l: 0, r, d: d as usize };
    for (idx, p) in paths.iter().enumerate() {
        if !is_order_preserving_path(p, params)? {
            return Err(Error::NotOrderPreserving(idx));
        }
    }
    if is_odd_shifting(&joined, params)?.is_none() {
        return Err(Error::InternalInvariantBroken(
            "joined path failed the odd shifting check".into(),
        ));
    }
    Ok(joined)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: u64, loops: &[i64]) -> VoltageTree {
        let edges: Vec<(usize, usize, i64)> = (0..loops.len() - 1).map(|i| (i, i + 1, 0)).collect();
        VoltageTree::new(n, loops.to_vec(), edges).unwrap()
    }

    #[test]
    fn sweep_stops_at_next_arrival() {
        // Z_5 fiber with loop voltage 2, arrivals {0, 1}: the first path
        // claims 0, 2, 4 and stops because 4 + 2 = 1 is the second path's
        // arrival vertex.
        let t = path(5, &[1, 2, 1]);
        let fam = extended_billiard(&t, BilliardParams { l: 0, r: 1, d: 2 }).unwrap();
        let p0: Vec<(usize, u64)> = fam.paths()[0].iter().map(|v| (v.base, v.g)).collect();
        assert_eq!(p0, vec![(0, 0), (1, 0), (1, 2), (1, 4), (2, 4)]);
        let p1: Vec<(usize, u64)> = fam.paths()[1].iter().map(|v| (v.base, v.g)).collect();
        assert_eq!(p1, vec![(0, 1), (1, 1), (1, 3), (2, 3)]);
        assert_eq!(fam.exit_offset(2), Some(3));
        assert_eq!(fam.final_order().images(), &[1, 0]);
    }

    #[test]
    fn single_fiber_family_is_points() {
        let t = VoltageTree::new(6, vec![5], vec![]).unwrap();
        let fam = extended_billiard(&t, BilliardParams { l: 1, r: 2, d: 3 }).unwrap();
        assert_eq!(fam.paths().len(), 3);
        for (j, p) in fam.paths().iter().enumerate() {
            assert_eq!(p.len(), 1);
            assert_eq!(p[0], LiftVertex::new(0, (1 + 2 * j as u64) % 6));
        }
    }

    #[test]
    fn colliding_arrivals_rejected() {
        let t = path(8, &[1, 1, 1]);
        // r = 4 has order 2 in Z_8; three paths cannot start distinct.
        assert!(matches!(
            extended_billiard(&t, BilliardParams { l: 0, r: 4, d: 3 }),
            Err(Error::InvalidParams(_))
        ));
        assert!(extended_billiard(&t, BilliardParams { l: 0, r: 4, d: 2 }).is_ok());
    }

    #[test]
    fn component_bound_examples() {
        assert_eq!(component_bound(&path(7, &[3, 4])).unwrap(), 1);
        assert_eq!(component_bound(&path(7, &[1, 2, 3, 1])).unwrap(), 1);
        assert_eq!(component_bound(&path(12, &[1, 4, 6, 1])).unwrap(), 3);
        assert!(component_bound(&VoltageTree::new(7, vec![1], vec![]).unwrap()).is_err());
    }

    #[test]
    fn arrival_offsets_follow_interior_voltages() {
        // i_t = l - (sigma(v_2) + .. + sigma(v_{t-1})).
        let t = path(11, &[1, 3, 7, 2, 1]);
        let fam = extended_billiard(&t, BilliardParams { l: 4, r: 1, d: 2 }).unwrap();
        let g = t.group();
        let mut expect = 4u64;
        assert_eq!(fam.arrival_offset(1), 4);
        for tp in 2..=5usize {
            assert_eq!(fam.arrival_offset(tp), expect, "t={tp}");
            if tp <= 4 {
                expect = g.sub(expect, t.loop_label(tp - 1));
            }
        }
        // alpha_t = i_t - sigma(v_t) at interior fibers.
        for tp in 2..=4usize {
            assert_eq!(fam.exit_offset(tp), Some(g.sub(fam.arrival_offset(tp), t.loop_label(tp - 1))));
        }
    }

    #[test]
    fn step_permutation_matches_single_fiber_rule() {
        let t = path(5, &[1, 2, 2, 1]);
        let params = BilliardParams { l: 0, r: 1, d: 2 };
        for tp in 2..=3 {
            let from_run = step_permutation(&t, params, tp).unwrap();
            let direct = fiber_step_perm(t.group(), 2, 1, 2).unwrap();
            assert_eq!(from_run, direct);
        }
        assert_eq!(step_permutation(&t, params, 1), Err(Error::IndexOutOfRange(1)));
        assert_eq!(step_permutation(&t, params, 4), Err(Error::IndexOutOfRange(4)));
        // Zero voltage leaves the order alone.
        assert!(fiber_step_perm(t.group(), 0, 1, 2).unwrap().is_identity());
    }

    #[test]
    fn orders_telescope_through_step_permutations() {
        let t = path(9, &[1, 2, 6, 3, 1]);
        let params = BilliardParams { l: 2, r: 1, d: 6 };
        let fam = extended_billiard(&t, params).unwrap();
        let mut acc = Perm::identity(6);
        for tp in 2..=4 {
            acc = step_permutation(&t, params, tp).unwrap().compose(&acc);
        }
        assert_eq!(&acc, fam.final_order());
    }

    #[test]
    fn inverse_pairs_preserve_order() {
        let t = path(7, &[1, 3, 4, 1]);
        let params = BilliardParams { l: 0, r: 1, d: 2 };
        assert!(is_order_preserving_pair(&t, params, 2).unwrap());
        // (0, 0) composes to the identity as well.
        let t0 = path(7, &[1, 0, 0, 1]);
        assert!(is_order_preserving_pair(&t0, params, 2).unwrap());
        // Over Z_5 with d = 2, the pair (2, 2) composes to the identity.
        let t2 = path(5, &[1, 2, 2, 1]);
        assert!(is_order_preserving_pair(&t2, params, 2).unwrap());
    }

    #[test]
    fn smoothing_reduces_paths() {
        let params = BilliardParams { l: 0, r: 1, d: 2 };
        let t = path(7, &[2, 3, 4, 5]);
        let s = smooth_pair(&t, params, 2).unwrap();
        assert_eq!(s.vertex_count(), 2);
        assert_eq!(s.loop_labels(), &[2, 5]);
        // A pair that does not cancel is rejected.
        let bad = path(7, &[2, 0, 3, 5]);
        assert_eq!(smooth_pair(&bad, params, 2), Err(Error::NotOrderPreserving(2)));
        // Six vertices smoothed twice end as the bare endpoints.
        let t6 = path(7, &[1, 2, 5, 3, 4, 1]);
        let once = smooth_pair(&t6, params, 3).unwrap();
        assert_eq!(once.loop_labels(), &[1, 2, 4, 1]);
        let twice = smooth_pair(&once, params, 2).unwrap();
        assert_eq!(twice.loop_labels(), &[1, 1]);
    }

    #[test]
    fn order_preserving_path_search() {
        let params = BilliardParams { l: 0, r: 1, d: 2 };
        assert!(is_order_preserving_path(&path(5, &[1, 1]), params).unwrap());
        assert!(is_order_preserving_path(&path(5, &[1, 2, 3, 1]), params).unwrap());
        assert!(is_order_preserving_path(&path(5, &[1, 1, 2, 1]), params).unwrap());
        assert_eq!(
            is_order_preserving_path(&path(5, &[1, 2, 3]), params),
            Err(Error::OddVertexCount)
        );
    }

    #[test]
    fn odd_shifting_detection() {
        // All-1 paths over Z_7 shift by one per interior vertex.
        let t3 = path(7, &[1, 1, 1]);
        assert_eq!(is_odd_shifting(&t3, BilliardParams { l: 0, r: 1, d: 2 }).unwrap(), Some(1));
        // An interior inverse pair composes to the identity: no odd shift.
        let t4 = path(7, &[1, 2, 5, 1]);
        assert_eq!(is_odd_shifting(&t4, BilliardParams { l: 0, r: 1, d: 2 }).unwrap(), None);
        // Two-vertex paths count as shifted by one.
        let t2 = path(7, &[1, 1]);
        assert_eq!(is_odd_shifting(&t2, BilliardParams { l: 0, r: 1, d: 2 }).unwrap(), Some(1));
        // Mismatched endpoints are rejected.
        assert!(matches!(
            is_odd_shifting(&path(7, &[1, 1, 2]), BilliardParams { l: 0, r: 1, d: 2 }),
            Err(Error::EndpointVoltageMismatch(_))
        ));
        // d must be twice the component bound.
        assert!(matches!(
            is_odd_shifting(&t3, BilliardParams { l: 0, r: 1, d: 4 }),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn four_joined_segments_shift_by_one() {
        // Four order preserving segments over Z_12 with a common endpoint
        // voltage 1; one segment has an interior inverse pair with gcd 3,
        // so the joined path runs four tracks. The three junctions each
        // shift the order by one slot: the final order is P_1 P_2 P_3 P_0.
        let segs = vec![
            path(12, &[1, 3, 9, 1]),
            path(12, &[1, 1]),
            path(12, &[1, 5, 7, 1]),
            path(12, &[1, 1]),
        ];
        let joined = join_order_preserving_paths(&segs, 1).unwrap();
        assert_eq!(joined.vertex_count(), 9);
        let c = component_bound(&joined).unwrap();
        assert_eq!(c, 2);
        let params = BilliardParams { l: 0, r: 1, d: 4 };
        let fam = extended_billiard(&joined, params).unwrap();
        assert_eq!(fam.final_order().images(), &[3, 0, 1, 2]);
        assert_eq!(is_odd_shifting(&joined, params).unwrap(), Some(1));
    }

    #[test]
    fn join_input_validation() {
        assert_eq!(join_order_preserving_paths(&[], 1), Err(Error::EmptyInput));
        let p = path(5, &[1, 1]);
        assert_eq!(join_order_preserving_paths(std::slice::from_ref(&p), 1), Err(Error::OddCount));
        let joined = join_order_preserving_paths(&[p.clone(), p.clone()], 1).unwrap();
        assert_eq!(joined.vertex_count(), 3);
        assert_eq!(joined.loop_labels(), &[1, 1, 1]);
        let mismatched = path(5, &[1, 2]);
        assert!(matches!(
            join_order_preserving_paths(&[p, mismatched], 1),
            Err(Error::EndpointVoltageMismatch(_))
        ));
    }
}
