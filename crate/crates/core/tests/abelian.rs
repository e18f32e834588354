mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use fpres::abelian::{FiniteAbelianGroup, Subgroup};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solver_matches_enumeration(seed in any::<u64>()) {
        let sys = common::random_nondegenerate(&mut StdRng::seed_from_u64(seed), 32);
        prop_assert_eq!(common::congruence_trial(&sys), Ok(()));
    }

    #[test]
    fn degenerate_solution_sets(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let sys = common::random_system(&mut rng, 32);
        let k: Vec<u64> = sys.orders.iter().map(|&n| rand::Rng::random_range(&mut rng, 0..n)).collect();
        let sys = sys.solved_by(&k);
        prop_assert_eq!(common::solution_set_trial(&sys), Ok(()));
    }

    #[test]
    fn lifted_characters(seed in any::<u64>()) {
        let out = common::lift_trial(&mut StdRng::seed_from_u64(seed), 64);
        prop_assert!(out.ok(1e-12), "{:?}", out);
    }

    #[test]
    fn subgroup_is_closed(seed in any::<u64>()) {
        let (g, h) = common::random_pair(&mut StdRng::seed_from_u64(seed), 64);
        for &x in h.members() {
            prop_assert!(h.contains(g.neg(x)));
            for &y in h.members() {
                prop_assert!(h.contains(g.add(x, y)));
            }
        }
        prop_assert_eq!(g.order() % h.len(), 0);
    }
}

#[test]
fn unsolvable_system_is_reported() {
    // 2k/4 + 1/4 ≡ 0 (mod 1) over Z_4 has no solution.
    let sys = common::RawSystem {
        orders: vec![4],
        r: vec![vec![2]],
        p: vec![1],
        den: vec![4],
    };
    assert!(sys.brute_force().is_empty());
    assert!(sys.build().solve_all().is_err());
}

#[test]
fn element_orders_by_enumeration() {
    let g = FiniteAbelianGroup::decompose(&[4, 2]).unwrap();
    for x in g.ids() {
        let n = (1..=g.order() as u64).find(|&n| g.scale(x, n as i64) == 0).unwrap();
        assert_eq!(g.element_order(x), n);
    }
    let whole = Subgroup::whole(&g);
    assert_eq!(whole.len(), 8);
}
