mod common;

use common::{ef1_by_definition, instance_and_start};
use ef1reform::model::{apply_exchange, replay, Distance};
use ef1reform::oracle::{exchange_distance_bfs, OracleBudget};
use ef1reform::{
    is_ef1, is_weak_ef1, round_robin, Allocation, ExchangeStep, SizeVector, UtilityClass,
};
use proptest::prelude::*;

fn some_step(alloc: &Allocation, pick: (usize, usize, usize, usize)) -> Option<ExchangeStep> {
    let n = alloc.num_agents();
    let a = pick.0 % n;
    let b = (a + 1 + pick.1 % (n - 1)) % n;
    let (ba, bb) = (alloc.bundle(a), alloc.bundle(b));
    if ba.is_empty() || bb.is_empty() {
        return None;
    }
    Some(ExchangeStep::new(
        a,
        b,
        ba[pick.2 % ba.len()],
        bb[pick.3 % bb.len()],
    ))
}

proptest! {
    #[test]
    fn ef1_matches_definition(
        (inst, alloc) in instance_and_start(UtilityClass::General, 2..=4, 0..=7, 5)
    ) {
        prop_assert_eq!(is_ef1(&inst, &alloc), ef1_by_definition(&inst, &alloc));
        if is_ef1(&inst, &alloc) && inst.is_identical() {
            prop_assert!(is_weak_ef1(&inst, &alloc));
        }
    }

    #[test]
    fn exchanges_keep_sizes_and_invert(
        (inst, alloc) in instance_and_start(UtilityClass::General, 2..=4, 2..=8, 3),
        pick in (0usize..8, 0usize..8, 0usize..8, 0usize..8),
    ) {
        if let Some(step) = some_step(&alloc, pick) {
            let next = apply_exchange(&alloc, &step).unwrap();
            prop_assert_eq!(next.size_vector(), alloc.size_vector());
            next.check_for(&inst).unwrap();
            prop_assert_eq!(apply_exchange(&next, &step.inverse()).unwrap(), alloc.clone());
            prop_assert_eq!(replay(&alloc, &[step, step.inverse()]).unwrap(), alloc);
        }
    }

    #[test]
    fn balanced_round_robin_is_ef1(
        (inst, _) in instance_and_start(UtilityClass::General, 2..=4, 0..=9, 6)
    ) {
        let n = inst.num_agents();
        let m = inst.num_goods();
        let mut sizes: Vec<usize> = (0..n).map(|i| m / n + usize::from(i < m % n)).collect();
        sizes.reverse();
        let sv = SizeVector(sizes);
        // agents with more goods pick first
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(sv.0[i]));
        let rr = round_robin(&inst, &sv, &order).unwrap();
        prop_assert_eq!(rr.size_vector(), sv);
        prop_assert!(ef1_by_definition(&inst, &rr));
    }

    #[test]
    fn mismatched_sizes_are_infinitely_far(
        (_inst, a) in instance_and_start(UtilityClass::General, 2..=3, 1..=6, 1),
        (_inst2, b) in instance_and_start(UtilityClass::General, 2..=3, 1..=6, 1),
    ) {
        if a.num_agents() == b.num_agents() && a.num_goods() == b.num_goods() {
            let d = exchange_distance_bfs(&a, &b, OracleBudget::default()).unwrap().distance;
            prop_assert_eq!(d == Distance::Infinite, a.size_vector() != b.size_vector());
        }
    }
}
