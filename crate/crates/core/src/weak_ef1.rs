//! Reaching weak-EF1 under identical utilities by repeatedly swapping the
//! best good of the richest agent with the worst good of the poorest.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::model::{apply_exchange_in_place, is_weak_ef1, Allocation, ExchangeStep, Instance};
use crate::scalar::Utility;

/// One round of [`algorithm_a`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep<U> {
    /// 1-based round number.
    pub round: usize,
    pub strong: usize,
    pub weak: usize,
    /// Most valuable good of the strong agent, handed to the weak agent.
    pub good_strong: usize,
    /// Least valuable good of the weak agent, handed to the strong agent.
    pub good_weak: usize,
    pub value_strong: U,
    pub value_weak: U,
    /// Bundle utilities before and after the exchange.
    pub before: Vec<U>,
    pub after: Vec<U>,
}

impl<U> TraceStep<U> {
    pub fn exchange(&self) -> ExchangeStep {
        ExchangeStep::new(self.strong, self.weak, self.good_strong, self.good_weak)
    }
}

pub const GOOD_EXCHANGED_TWICE: &str = "good-exchanged-twice";
pub const STRONG_WEAK_OVERLAP: &str = "strong-weak-overlap";
pub const STRONG_UTILITY_INCREASED: &str = "strong-utility-increased";
pub const WEAK_UTILITY_DECREASED: &str = "weak-utility-decreased";
pub const NON_IMPROVING_SWAP: &str = "non-improving-swap";

/// Runs the algorithm from an `s`-balanced start until the allocation is
/// weak-EF1. Ties go to the lowest agent index, then the lowest good index.
pub fn algorithm_a<U: Utility>(
    inst: &Instance<U>,
    start: &Allocation,
) -> Result<(Allocation, Vec<TraceStep<U>>)> {
    if !inst.is_identical() {
        return Err(Error::WrongClass {
            expected: "identical utilities".into(),
            found: inst.class().to_string(),
        });
    }
    start.check_for(inst)?;
    if start.size_vector().common_size().is_none() {
        return Err(Error::NotSBalanced(format!(
            "size vector {}",
            start.size_vector()
        )));
    }
    let n = inst.num_agents();
    let u = |g: usize| inst.value(0, g);
    let mut cur = start.clone();
    let mut trace = Vec::new();
    let cap = inst.num_goods() / 2;
    while !is_weak_ef1(inst, &cur) {
        assert!(trace.len() < cap, "exceeded floor(m/2) rounds");
        let before: Vec<U> = (0..n)
            .map(|k| inst.bundle_value(0, cur.bundle(k)))
            .collect();
        let strong = (0..n).rev().max_by_key(|&k| before[k]).expect("n >= 2");
        let weak = (0..n).min_by_key(|&k| before[k]).expect("n >= 2");
        let good_strong = *cur
            .bundle(strong)
            .iter()
            .rev()
            .max_by_key(|&&g| u(g))
            .expect("the richest bundle is non-empty");
        let good_weak = *cur
            .bundle(weak)
            .iter()
            .min_by_key(|&&g| u(g))
            .expect("s-balanced bundles are non-empty");
        apply_exchange_in_place(
            &mut cur,
            &ExchangeStep::new(strong, weak, good_strong, good_weak),
        )?;
        let after = (0..n)
            .map(|k| inst.bundle_value(0, cur.bundle(k)))
            .collect();
        trace.push(TraceStep {
            round: trace.len() + 1,
            strong,
            weak,
            good_strong,
            good_weak,
            value_strong: u(good_strong),
            value_weak: u(good_weak),
            before,
            after,
        });
    }
    Ok((cur, trace))
}

/// Names of the structural properties the trace violates; empty when all
/// hold. Fails on traces that are internally inconsistent.
pub fn verify_trace<U: Utility>(trace: &[TraceStep<U>]) -> Result<Vec<&'static str>> {
    let malformed = |t: usize, what: &str| Err(Error::MalformedTrace(format!("round {t}: {what}")));
    let n = trace.first().map_or(0, |s| s.before.len());
    for (k, st) in trace.iter().enumerate() {
        if st.round != k + 1 {
            return malformed(k + 1, &format!("numbered {}", st.round));
        }
        if st.before.len() != n || st.after.len() != n {
            return malformed(st.round, "utility vectors of different lengths");
        }
        if st.strong >= n || st.weak >= n || st.strong == st.weak {
            return malformed(st.round, "strong and weak agents must be distinct agents");
        }
        if st.good_strong == st.good_weak {
            return malformed(st.round, "a good cannot be swapped with itself");
        }
        if k > 0 && trace[k - 1].after != st.before {
            return malformed(st.round, "utilities do not continue the previous round");
        }
        let consistent = (0..n).all(|a| {
            let expected = if a == st.strong {
                (st.before[a] + st.value_weak).checked_sub(&st.value_strong)
            } else if a == st.weak {
                (st.before[a] + st.value_strong).checked_sub(&st.value_weak)
            } else {
                Some(st.before[a])
            };
            expected == Some(st.after[a])
        });
        if !consistent {
            return malformed(st.round, "utilities after the swap do not match the goods");
        }
    }

    let mut violations = Vec::new();
    let mut seen = HashSet::new();
    if trace
        .iter()
        .any(|st| !seen.insert(st.good_strong) | !seen.insert(st.good_weak))
    {
        violations.push(GOOD_EXCHANGED_TWICE);
    }
    let strong: HashSet<usize> = trace.iter().map(|st| st.strong).collect();
    let weak: HashSet<usize> = trace.iter().map(|st| st.weak).collect();
    if !strong.is_disjoint(&weak) {
        violations.push(STRONG_WEAK_OVERLAP);
    }
    // utility of each agent over time, starting from the initial allocation
    let series = |a: usize| {
        std::iter::once(trace[0].before[a]).chain(trace.iter().map(move |st| st.after[a]))
    };
    let increases = |a: usize| series(a).zip(series(a).skip(1)).any(|(x, y)| y > x);
    let decreases = |a: usize| series(a).zip(series(a).skip(1)).any(|(x, y)| y < x);
    if strong.iter().any(|&a| increases(a)) {
        violations.push(STRONG_UTILITY_INCREASED);
    }
    if weak.iter().any(|&a| decreases(a)) {
        violations.push(WEAK_UTILITY_DECREASED);
    }
    if trace.iter().any(|st| st.value_strong <= st.value_weak) {
        violations.push(NON_IMPROVING_SWAP);
    }
    Ok(violations)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alloc(b: &[&[usize]], m: usize) -> Allocation {
        Allocation::new(b.iter().map(|x| x.to_vec()).collect(), m).unwrap()
    }

    #[test]
    fn one_round_example() {
        let inst = Instance::<u64>::identical(2, vec![1, 1, 0, 0]).unwrap();
        let start = alloc(&[&[0, 1], &[2, 3]], 4);
        let (end, trace) = algorithm_a(&inst, &start).unwrap();
        assert_eq!(trace.len(), 1);
        assert_eq!(end, alloc(&[&[1, 2], &[0, 3]], 4));
        assert!(is_weak_ef1(&inst, &end));
        assert!(verify_trace(&trace).unwrap().is_empty());
    }

    #[test]
    fn already_weak_ef1() {
        let inst = Instance::<u64>::identical(2, vec![1, 0, 1, 0]).unwrap();
        let start = alloc(&[&[0, 1], &[2, 3]], 4);
        assert!(algorithm_a(&inst, &start).unwrap().1.is_empty());
        let zeros = Instance::<u64>::identical(3, vec![0; 3]).unwrap();
        let start = alloc(&[&[0], &[1], &[2]], 3);
        assert!(algorithm_a(&zeros, &start).unwrap().1.is_empty());
        assert!(verify_trace::<u64>(&[]).unwrap().is_empty());
    }

    #[test]
    fn preconditions() {
        let general = Instance::<u64>::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let start = alloc(&[&[0], &[1]], 2);
        assert!(matches!(
            algorithm_a(&general, &start),
            Err(Error::WrongClass { .. })
        ));
        let inst = Instance::<u64>::identical(2, vec![1, 1, 1]).unwrap();
        let uneven = alloc(&[&[0], &[1, 2]], 3);
        assert!(matches!(
            algorithm_a(&inst, &uneven),
            Err(Error::NotSBalanced(_))
        ));
    }

    fn step(round: usize, strong: usize, weak: usize, g: usize, h: usize) -> TraceStep<u64> {
        TraceStep {
            round,
            strong,
            weak,
            good_strong: g,
            good_weak: h,
            value_strong: 2,
            value_weak: 1,
            before: vec![5, 1, 3],
            after: vec![4, 2, 3],
        }
    }

    #[test]
    fn negative_controls() {
        let mut second = step(2, 0, 1, 0, 5);
        second.before = vec![4, 2, 3];
        second.after = vec![3, 3, 3];
        let trace = vec![step(1, 0, 1, 0, 1), second];
        assert_eq!(verify_trace(&trace).unwrap(), vec![GOOD_EXCHANGED_TWICE]);

        let mut second = step(2, 1, 2, 7, 8);
        second.before = vec![4, 2, 3];
        second.after = vec![4, 1, 4];
        let trace = vec![step(1, 0, 1, 0, 1), second];
        let v = verify_trace(&trace).unwrap();
        assert!(v.contains(&STRONG_WEAK_OVERLAP));
        assert!(v.contains(&WEAK_UTILITY_DECREASED));

        let mut bad = step(1, 0, 1, 0, 1);
        bad.value_strong = 1;
        bad.value_weak = 1;
        bad.after = vec![5, 1, 3];
        assert_eq!(verify_trace(&[bad]).unwrap(), vec![NON_IMPROVING_SWAP]);

        let mut up = step(1, 0, 1, 0, 1);
        up.value_strong = 1;
        up.value_weak = 2;
        up.after = vec![6, 0, 3];
        let v = verify_trace(&[up]).unwrap();
        assert!(v.contains(&STRONG_UTILITY_INCREASED));
    }

    #[test]
    fn malformed_traces() {
        assert!(matches!(
            verify_trace(&[step(2, 0, 1, 0, 1)]),
            Err(Error::MalformedTrace(_))
        ));
        let mut s = step(1, 0, 1, 0, 1);
        s.after = vec![9, 9, 9];
        assert!(matches!(verify_trace(&[s]), Err(Error::MalformedTrace(_))));
        assert!(matches!(
            verify_trace(&[step(1, 1, 1, 0, 1)]),
            Err(Error::MalformedTrace(_))
        ));
    }
}
