#![allow(dead_code)]

use ef1reform::model::Instance;
use ef1reform::{Allocation, UtilityClass};
use proptest::prelude::*;

/// EF1 straight from the definition, kept independent of the library.
pub fn ef1_by_definition(inst: &Instance<u64>, alloc: &Allocation) -> bool {
    let n = inst.num_agents();
    (0..n).all(|i| {
        let own: u64 = alloc.bundle(i).iter().map(|&g| inst.value(i, g)).sum();
        (0..n).filter(|&j| j != i).all(|j| {
            let b = alloc.bundle(j);
            let total: u64 = b.iter().map(|&g| inst.value(i, g)).sum();
            total <= own || b.iter().any(|&g| total - inst.value(i, g) <= own)
        })
    })
}

pub fn rows_for(
    class: UtilityClass,
    n: usize,
    m: usize,
    max_u: u64,
) -> BoxedStrategy<Vec<Vec<u64>>> {
    let cap = if class.is_binary() { 1 } else { max_u };
    if class.is_identical() {
        proptest::collection::vec(0..=cap, m)
            .prop_map(move |row| vec![row; n])
            .boxed()
    } else {
        proptest::collection::vec(proptest::collection::vec(0..=cap, m), n).boxed()
    }
}

/// An instance of the class with an arbitrary allocation (owners drawn freely,
/// so bundles may be empty).
pub fn instance_and_start(
    class: UtilityClass,
    agents: std::ops::RangeInclusive<usize>,
    goods: std::ops::RangeInclusive<usize>,
    max_u: u64,
) -> impl Strategy<Value = (Instance<u64>, Allocation)> {
    (agents, goods).prop_flat_map(move |(n, m)| {
        (
            rows_for(class, n, m, max_u),
            proptest::collection::vec(0..n, m),
        )
            .prop_map(move |(rows, owners)| {
                (
                    Instance::new(rows).unwrap(),
                    Allocation::from_owners(&owners, n),
                )
            })
    })
}

/// An `s`-balanced start: a random permutation of goods dealt in blocks.
pub fn balanced_start(
    class: UtilityClass,
    n: usize,
    s: usize,
    max_u: u64,
) -> impl Strategy<Value = (Instance<u64>, Allocation)> {
    let m = n * s;
    (
        rows_for(class, n, m, max_u),
        Just((0..m).collect::<Vec<_>>()).prop_shuffle(),
    )
        .prop_map(move |(rows, perm)| {
            let mut owners = vec![0; m];
            for (k, &g) in perm.iter().enumerate() {
                owners[g] = k / s;
            }
            (
                Instance::new(rows).unwrap(),
                Allocation::from_owners(&owners, n),
            )
        })
}
