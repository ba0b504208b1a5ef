//! Cross-module properties checked on randomized small instances.

use std::collections::BTreeSet;

use proptest::prelude::*;

use zlift::billiard::{extended_billiard, BilliardParams};
use zlift::lift::{build_lift, shift_edges, LiftVertex};
use zlift::oracle::{brute_force_isomorphic, is_two_factor, validate_path_family};
use zlift::path_ham::two_factor_of_path;
use zlift::voltage::{normalize_cut_edges, rescale_by_unit, VoltageTree};

/// Random reflexive tree with `m` vertices over `Z_n`, with a lift of at
/// most 24 vertices.
fn small_tree() -> impl Strategy<Value = VoltageTree> {
    (2u64..=8, 1usize..=4)
        .prop_flat_map(|(n, m)| {
            let loops = proptest::collection::vec(0i64..n as i64, m);
            let parents = proptest::collection::vec(0usize..m.max(2) - 1, m.saturating_sub(1));
            let labels = proptest::collection::vec(0i64..n as i64, m.saturating_sub(1));
            (Just(n), Just(m), loops, parents, labels)
        })
        .prop_filter_map("lift too large", |(n, m, loops, parents, labels)| {
            if n as usize * m > 24 {
                return None;
            }
            let edges: Vec<(usize, usize, i64)> = parents
                .iter()
                .zip(&labels)
                .enumerate()
                .map(|(i, (&p, &l))| (p.min(i), i + 1, l))
                .collect();
            VoltageTree::new(n, loops, edges).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shifts_are_automorphisms(t in small_tree(), a in 0u64..8) {
        let lift = build_lift(&t);
        let all = lift.edges();
        let a = a % t.order();
        prop_assert_eq!(shift_edges(&t, &all, a), all);
    }

    #[test]
    fn cut_edge_labels_do_not_change_the_lift(t in small_tree()) {
        let z = normalize_cut_edges(&t);
        let iso = brute_force_isomorphic(&build_lift(&t), &build_lift(&z), 24).unwrap();
        prop_assert!(iso);
    }

    #[test]
    fn unit_rescaling_preserves_the_lift(t in small_tree(), u in 1u64..8) {
        let u = u % t.order();
        prop_assume!(t.group().is_unit(u) && u != 0);
        let r = rescale_by_unit(&t, u).unwrap();
        let iso = brute_force_isomorphic(&build_lift(&t), &build_lift(&r), 24).unwrap();
        prop_assert!(iso);
    }

    #[test]
    fn shifted_two_factors_stay_two_factors(a in 0u64..5) {
        let t = VoltageTree::new(5, vec![1, 2, 1], vec![(0, 1, 0), (1, 2, 0)]).unwrap();
        let f = two_factor_of_path(&t, 2, 0).unwrap();
        let shifted = shift_edges(&t, &f.factor, a);
        prop_assert!(is_two_factor(&build_lift(&t), &shifted).passed());
    }
}

#[test]
fn label_rewrites_on_worked_examples() {
    // Zeroing the labels (2, 5) on a 3-vertex path over Z_6 and doubling
    // the loops (2, 4) over Z_9 both leave the lift unchanged up to
    // isomorphism, confirmed by the exact search on the 18-vertex lifts.
    let t = VoltageTree::new(6, vec![1, 1, 1], vec![(0, 1, 2), (1, 2, 5)]).unwrap();
    let z = normalize_cut_edges(&t);
    assert!(z.tree_edges().iter().all(|&(_, _, l)| l == 0));
    assert!(brute_force_isomorphic(&build_lift(&t), &build_lift(&z), 24).unwrap());

    let t = VoltageTree::new(9, vec![2, 4], vec![(0, 1, 0)]).unwrap();
    let r = rescale_by_unit(&t, 2).unwrap();
    assert_eq!(r.loop_labels(), &[4, 8]);
    assert!(brute_force_isomorphic(&build_lift(&t), &build_lift(&r), 24).unwrap());
}

/// The sweep rule "stop when the next vertex is an arrival vertex" matches
/// the rule "stop when the next vertex already belongs to a path", no
/// matter in which order the paths are extended inside a fiber.
#[test]
fn sweep_rule_is_order_independent() {
    let cases: Vec<(u64, Vec<i64>, BilliardParams)> = vec![
        (5, vec![1, 2, 1], BilliardParams { l: 0, r: 1, d: 2 }),
        (6, vec![1, 3, 1], BilliardParams { l: 0, r: 1, d: 6 }),
        (12, vec![1, 3, 4, 1], BilliardParams { l: 5, r: 1, d: 4 }),
        (9, vec![2, 6, 3, 2], BilliardParams { l: 1, r: 2, d: 3 }),
        (10, vec![1, 5, 0, 2, 1], BilliardParams { l: 3, r: 3, d: 2 }),
    ];
    for (n, loops, params) in cases {
        let edges: Vec<(usize, usize, i64)> =
            (0..loops.len() - 1).map(|i| (i, i + 1, 0)).collect();
        let t = VoltageTree::new(n, loops.clone(), edges).unwrap();
        let fam = extended_billiard(&t, params).unwrap();
        assert!(validate_path_family(&build_lift(&t), &fam).passed());

        // Replay with the already-claimed stop rule under many orders.
        for seed in 0..8u64 {
            let claimed = sequential_sweep(&t, params, seed);
            for (j, path) in fam.paths().iter().enumerate() {
                let mine: BTreeSet<LiftVertex> = path.iter().copied().collect();
                assert_eq!(mine, claimed[j], "n={n} loops={loops:?} seed={seed} path={j}");
            }
        }
    }
}

/// Extends paths one at a time in a seed-shuffled order, stopping each
/// sweep when the next vertex already belongs to any path.
fn sequential_sweep(
    t: &VoltageTree,
    params: BilliardParams,
    seed: u64,
) -> Vec<BTreeSet<LiftVertex>> {
    let seq = t.path_sequence().unwrap();
    let group = t.group();
    let m = seq.len();
    let d = params.d;
    let mut claimed: Vec<BTreeSet<LiftVertex>> = (0..d)
        .map(|j| {
            let start = group.add(params.l, group.mul(j as u64, params.r));
            [LiftVertex::new(seq[0], start)].into_iter().collect()
        })
        .collect();
    let mut offsets: Vec<u64> =
        (0..d).map(|j| group.add(params.l, group.mul(j as u64, params.r))).collect();
    let mut state = seed.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
    for t_pos in 2..=m {
        let base = seq[t_pos - 1];
        // Cross over.
        for j in 0..d {
            claimed[j].insert(LiftVertex::new(base, offsets[j]));
        }
        if t_pos == m {
            break;
        }
        let a = t.loop_label(base);
        if a == 0 {
            continue;
        }
        // Shuffle the extension order.
        let mut order: Vec<usize> = (0..d).collect();
        for i in (1..d).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (state >> 33) as usize % (i + 1));
        }
        let mut owned: BTreeSet<u64> = offsets.iter().copied().collect();
        for &j in &order {
            let mut cur = offsets[j];
            loop {
                let next = group.add(cur, a);
                if owned.contains(&next) {
                    break;
                }
                owned.insert(next);
                claimed[j].insert(LiftVertex::new(base, next));
                cur = next;
            }
            offsets[j] = cur;
        }
    }
    claimed
}
