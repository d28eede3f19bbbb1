use ef1reform::generators::{
    fixture_sources, gen_balanced_multi_partition, reduce, reduce_identical_constant, Reduction,
    SourceProblem,
};
use ef1reform::model::replay;
use ef1reform::oracle::OracleBudget;
use ef1reform::{is_ef1, Error};
use proptest::prelude::*;

#[test]
fn every_fixture_round_trips() {
    for target in Reduction::ALL {
        let sources = fixture_sources(target);
        let answers: Vec<bool> = sources
            .iter()
            .map(|s| s.solve_bruteforce().unwrap())
            .collect();
        assert!(answers.iter().filter(|&&a| a).count() >= 2, "{target}");
        assert!(answers.iter().filter(|&&a| !a).count() >= 2, "{target}");
        for (src, want) in sources.iter().zip(answers) {
            let red = reduce(src, target).unwrap();
            assert_eq!(red.size_vector.total(), red.instance.num_goods());
            red.size_vector.check_for(&red.instance).unwrap();
            let got = red.oracle_answer(OracleBudget::default()).unwrap();
            assert_eq!(got, want, "{target} on {src:?}");
        }
    }
}

#[test]
fn minkcov_has_five_fixtures_with_both_answers() {
    let answers: Vec<bool> = fixture_sources(Reduction::Beneficial)
        .iter()
        .map(|s| s.solve_bruteforce().unwrap())
        .collect();
    assert!(answers.len() >= 5);
    assert!(answers.contains(&true) && answers.contains(&false));
}

#[test]
fn optimal_targets_have_consistent_witnesses() {
    for target in [
        Reduction::OptimalTwoAgent,
        Reduction::OptimalIdentical,
        Reduction::OptimalBinary,
    ] {
        for src in fixture_sources(target) {
            let red = reduce(&src, target).unwrap();
            let start = red.initial_allocation.clone().unwrap();
            assert_eq!(start.size_vector(), red.size_vector);
            let k = red.budget_k.unwrap();
            let found = ef1reform::oracle::ef1_within_exchanges(
                &red.instance,
                &start,
                k,
                OracleBudget::default(),
            )
            .unwrap();
            if let Some(trace) = found {
                assert!(trace.len() as u64 <= k);
                assert!(is_ef1(&red.instance, &replay(&start, &trace).unwrap()));
            }
        }
    }
}

#[test]
fn identical_constant_with_four_agents() {
    for src in fixture_sources(Reduction::IdenticalConstant) {
        let red = reduce_identical_constant(&src, 4).unwrap();
        assert_eq!(red.instance.num_agents(), 4);
        assert_eq!(
            red.oracle_answer(OracleBudget::default()).unwrap(),
            src.solve_bruteforce().unwrap()
        );
    }
    let src = &fixture_sources(Reduction::IdenticalConstant)[0];
    assert!(matches!(
        reduce_identical_constant(src, 2),
        Err(Error::InvalidInstance(_))
    ));
}

#[test]
fn two_agent_rejects_more_parts() {
    let src = gen_balanced_multi_partition(
        &SourceProblem::PartitionEq {
            values: vec![1, 3, 2, 2],
        },
        3,
    )
    .unwrap();
    assert!(matches!(
        reduce(&src, Reduction::TwoAgentGeneral),
        Err(Error::MalformedSource(_))
    ));
    assert!(reduce(&src, Reduction::OptimalIdentical).is_ok());
}

proptest! {
    #[test]
    fn bmp_invariants(w in proptest::collection::vec(0u64..6, 1..4), p in 2usize..5) {
        let mut values = w.clone();
        values.extend(w.iter().rev());
        let src = SourceProblem::PartitionEq { values };
        let out = gen_balanced_multi_partition(&src, p).unwrap();
        let SourceProblem::BalancedMultiPartition { p: pp, q, k, values } = &out else {
            panic!("wrong tag");
        };
        prop_assert_eq!(*pp, p);
        prop_assert_eq!(values.len(), p * q);
        prop_assert!(values.iter().all(|&x| *k < x && x <= 2 * k));
        prop_assert_eq!(values.iter().sum::<u64>(), (p as u64) * (*q as u64 + 1) * k);
    }

    #[test]
    fn bmp_preserves_answers(values in proptest::collection::vec(0u64..6, 4..=6), p in 2usize..4) {
        prop_assume!(values.len() % 2 == 0);
        let src = SourceProblem::PartitionEq { values: values.clone() };
        let total: u64 = values.iter().sum();
        match gen_balanced_multi_partition(&src, p) {
            Ok(out) => prop_assert_eq!(
                out.solve_bruteforce().unwrap(),
                src.solve_bruteforce().unwrap()
            ),
            Err(_) => prop_assert!(
                total % 2 == 1 || values.iter().any(|&w| 2 * w > total)
            ),
        }
    }
}
