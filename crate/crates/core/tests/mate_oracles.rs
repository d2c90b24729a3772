//! Dense and sparse mate routes against each other and against brute force.

use nearfact::combinatorics::Combinations;
use nearfact::{
    compute_mate, compute_mate_dense, compute_mate_sparse, dense_inverse, matrix_product_check, verify,
    GroupSpec, GroupSubset, MateAlgorithm, Rational,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Multiset check written directly from the definition.
fn covers(g: &GroupSpec, a: &[usize], b: &[usize], lambda: u64) -> bool {
    let mut hist = vec![0u64; g.order()];
    for &x in a {
        for &y in b {
            hist[g.add_idx(x, y)] += 1;
        }
    }
    hist[0] == 0 && hist[1..].iter().all(|&c| c == lambda)
}

fn groups_up_to(n: u64) -> Vec<GroupSpec> {
    (2..=n).flat_map(|k| GroupSpec::all_of_order(k).unwrap()).collect()
}

fn subset(g: &GroupSpec, idx: &[usize]) -> GroupSubset {
    GroupSubset::from_indices(g, idx.iter().copied()).unwrap()
}

#[test]
fn dense_and_sparse_agree_on_random_inputs() {
    let groups = groups_up_to(60);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut found = 0;
    for _ in 0..300 {
        let g = groups.choose(&mut rng).unwrap();
        let n = g.order();
        let lambda = rng.gen_range(1..=2u64);
        let total = lambda * (n as u64 - 1);
        let sizes: Vec<usize> = (1..n).filter(|&r| total.is_multiple_of(r as u64) && total / r as u64 <= n as u64).collect();
        let r = *sizes.choose(&mut rng).unwrap();
        let mut pool: Vec<usize> = (0..n).collect();
        pool.shuffle(&mut rng);
        let a = subset(g, &pool[..r]);
        let (dense, sparse) = match (compute_mate_dense(g, &a, lambda), compute_mate_sparse(g, &a, lambda)) {
            (Ok(d), Ok(s)) => (d, s),
            (d, s) => panic!("{} A={a}: routes disagree on preconditions: {d:?} vs {s:?}", g.literal()),
        };
        assert!(dense.same_outcome(&sparse), "{} A={a} lambda={lambda}: {dense:?} vs {sparse:?}", g.literal());
        if let Some(b) = &sparse.mate {
            found += 1;
            assert!(covers(g, &a.to_vec(), &b.to_vec(), lambda));
        }
    }
    // Random sets rarely have mates; the draw must still exercise the positive path.
    assert!(found > 0);
}

#[test]
fn mates_are_unique_in_small_groups() {
    for g in groups_up_to(16) {
        let n = g.order();
        for lambda in 1..=2u64 {
            for r in 1..=4.min(n) {
                let total = lambda * (n as u64 - 1);
                if !total.is_multiple_of(r as u64) || total / r as u64 > n as u64 {
                    for a in Combinations::new(n, r) {
                        let res = compute_mate_sparse(&g, &subset(&g, &a), lambda);
                        assert!(res.map_or(true, |m| m.mate.is_none()));
                    }
                    continue;
                }
                let s = (total / r as u64) as usize;
                for a in Combinations::new(n, r) {
                    // b in -A would put 0 into A + B.
                    let pool: Vec<usize> = (0..n).filter(|&x| !a.contains(&g.neg_idx(x))).collect();
                    let mates: Vec<Vec<usize>> = Combinations::new(pool.len(), s)
                        .map(|c| c.iter().map(|&i| pool[i]).collect::<Vec<usize>>())
                        .filter(|b| covers(&g, &a, b, lambda))
                        .collect();
                    assert!(mates.len() <= 1, "{} A={a:?} has {} mates", g.literal(), mates.len());
                    let sa = subset(&g, &a);
                    let got = compute_mate(&g, &sa, lambda, MateAlgorithm::Sparse).unwrap();
                    assert_eq!(got.mate.map(|m| m.to_vec()), mates.first().cloned());
                }
            }
        }
    }
}

#[test]
fn worked_example_in_z7() {
    let g: GroupSpec = "Z7".parse().unwrap();
    let a = GroupSubset::parse(&g, "0,3").unwrap();
    let inv = dense_inverse(&g, &a).unwrap();
    let half = Rational::new(1.into(), 2.into());
    assert_eq!(inv.rows(), 7);
    assert!(inv.entries().all(|v| *v == half || *v == -half.clone()));
    let expected = GroupSubset::parse(&g, "1,2,3").unwrap();
    for alg in [MateAlgorithm::Dense, MateAlgorithm::Sparse] {
        assert_eq!(compute_mate(&g, &a, 1, alg).unwrap().mate, Some(expected.clone()));
    }
}

fn arb_pair() -> impl Strategy<Value = (GroupSpec, Vec<usize>, Vec<usize>, u64)> {
    let groups = groups_up_to(24);
    (0..groups.len(), 1..=2u64, any::<u64>()).prop_map(move |(i, lambda, seed)| {
        let g = groups[i].clone();
        let n = g.order();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pool: Vec<usize> = (0..n).collect();
        pool.shuffle(&mut rng);
        let r = rng.gen_range(1..n);
        let s = rng.gen_range(1..=n);
        let a = pool[..r].to_vec();
        pool.shuffle(&mut rng);
        (g, a, pool[..s].to_vec(), lambda)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn verify_matches_matrix_identity((g, a, b, lambda) in arb_pair()) {
        let (sa, sb) = (subset(&g, &a), subset(&g, &b));
        prop_assert_eq!(verify(&g, &sa, &sb, lambda), matrix_product_check(&g, &sa, &sb, lambda));
        prop_assert_eq!(verify(&g, &sa, &sb, lambda), covers(&g, &a, &b, lambda));
    }

    #[test]
    fn verify_is_swap_invariant((g, a, b, lambda) in arb_pair()) {
        let (sa, sb) = (subset(&g, &a), subset(&g, &b));
        prop_assert_eq!(verify(&g, &sa, &sb, lambda), verify(&g, &sb, &sa, lambda));
    }

    #[test]
    fn mate_of_mate_is_original(n in 3u64..40) {
        let g = GroupSpec::cyclic(n).unwrap();
        // Intervals and their periodic partners give near-factorizations of every cyclic group.
        for r in 2..n {
            if (n - 1) % r != 0 { continue; }
            let a = subset(&g, &(0..r as usize).collect::<Vec<_>>());
            let Some(b) = compute_mate_sparse(&g, &a, 1).unwrap().mate else { continue };
            let back = compute_mate_sparse(&g, &b, 1).unwrap().mate;
            prop_assert_eq!(back, Some(a));
        }
    }
}
