//! Deciding whether an EF1 allocation with a given size vector exists.

use std::collections::{BTreeMap, HashSet};
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::model::{Instance, SizeVector, UtilityClass};
use crate::oracle::{exists_ef1_bruteforce, OracleBudget};
use crate::scalar::{ge_minus, Utility};

/// Largest `n` routed to the binary class enumeration by [`reformable`].
pub const MAX_AGENTS_BINARY_ENUM: usize = 4;
/// Largest `n` routed to the dynamic program by [`reformable`].
pub const MAX_AGENTS_DP: usize = 3;

fn wrong_class<U: Utility>(expected: &str, inst: &Instance<U>) -> Error {
    Error::WrongClass {
        expected: expected.to_string(),
        found: format!("{} with {} agents", inst.class(), inst.num_agents()),
    }
}

/// Two agents with identical utilities: give the agent with fewer goods the
/// most valuable ones and check that agent alone.
pub fn reformable_two_identical<U: Utility>(inst: &Instance<U>, sv: &SizeVector) -> Result<bool> {
    if inst.num_agents() != 2 || !inst.is_identical() {
        return Err(wrong_class("two agents with identical utilities", inst));
    }
    sv.check_for(inst)?;
    let small = sv.0[0].min(sv.0[1]);
    let mut goods: Vec<usize> = (0..inst.num_goods()).collect();
    goods.sort_by(|&x, &y| inst.value(0, y).cmp(&inst.value(0, x)).then(x.cmp(&y)));
    let (top, rest) = goods.split_at(small);
    if rest.is_empty() {
        return Ok(true);
    }
    let own = inst.bundle_value(0, top);
    Ok(ge_minus(
        own,
        inst.bundle_value(0, rest),
        inst.top_value(0, rest),
    ))
}

/// Partial-allocation summary of the dynamic program. For agents `i, j`,
/// `a[i*n+j]` is `u_i` of agent `j`'s partial bundle and `b[i*n+j]` the
/// largest single-good utility in it; `c[j]` is its size.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DpState<U> {
    pub a: Vec<U>,
    pub b: Vec<U>,
    pub c: Vec<usize>,
}

impl<U: Utility> DpState<U> {
    fn empty(n: usize) -> Self {
        DpState {
            a: vec![U::zero(); n * n],
            b: vec![U::zero(); n * n],
            c: vec![0; n],
        }
    }

    fn accepts(&self, n: usize) -> bool {
        (0..n).all(|i| {
            (0..n).all(|j| {
                i == j
                    || self.c[j] == 0
                    || ge_minus(self.a[i * n + i], self.a[i * n + j], self.b[i * n + j])
            })
        })
    }
}

/// Sparse version of the pseudopolynomial dynamic program, processing goods
/// in index order.
pub fn reformable_dp<U: Utility>(
    inst: &Instance<U>,
    sv: &SizeVector,
    budget: OracleBudget,
) -> Result<bool> {
    let order: Vec<usize> = (0..inst.num_goods()).collect();
    reformable_dp_with_order(inst, sv, &order, budget)
}

/// [`reformable_dp`] with an explicit processing order of the goods.
/// Each layer of reachable states counts against the budget.
pub fn reformable_dp_with_order<U: Utility>(
    inst: &Instance<U>,
    sv: &SizeVector,
    order: &[usize],
    budget: OracleBudget,
) -> Result<bool> {
    sv.check_for(inst)?;
    let n = inst.num_agents();
    let m = inst.num_goods();
    let mut seen = vec![false; m];
    if order.len() != m
        || order
            .iter()
            .any(|&g| g >= m || std::mem::replace(&mut seen[g], true))
    {
        return Err(Error::InvalidOrder(format!(
            "{order:?} is not a permutation of the goods"
        )));
    }
    let mut layer: HashSet<DpState<U>> = HashSet::from([DpState::empty(n)]);
    for &g in order {
        let mut next = HashSet::with_capacity(layer.len() * 2);
        for st in &layer {
            for j in 0..n {
                if st.c[j] == sv.0[j] {
                    continue;
                }
                let mut s = st.clone();
                for i in 0..n {
                    let v = inst.value(i, g);
                    s.a[i * n + j] = s.a[i * n + j] + v;
                    if v > s.b[i * n + j] {
                        s.b[i * n + j] = v;
                    }
                }
                s.c[j] += 1;
                next.insert(s);
            }
        }
        budget.check(next.len())?;
        layer = next;
    }
    Ok(layer.iter().any(|s| s.accepts(n)))
}

/// Counts of goods per valuation type and agent; the signature of an
/// equivalence class of allocations under binary utilities.
///
/// Keys are good types (bit `i` set iff agent `i` values the good); each
/// value holds one count per agent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeCountMatrix {
    pub counts: BTreeMap<u64, Vec<usize>>,
}

impl TypeCountMatrix {
    /// Signature of a concrete allocation.
    pub fn of<U: Utility>(inst: &Instance<U>, alloc: &crate::model::Allocation) -> Self {
        let n = inst.num_agents();
        let mut counts: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for g in 0..inst.num_goods() {
            counts
                .entry(inst.good_type(g))
                .or_insert_with(|| vec![0; n]);
        }
        for (j, bundle) in alloc.bundles().iter().enumerate() {
            for &g in bundle {
                counts.get_mut(&inst.good_type(g)).expect("type registered")[j] += 1;
            }
        }
        TypeCountMatrix { counts }
    }

    /// `u_i` of agent `j`'s bundle.
    pub fn utility(&self, i: usize, j: usize) -> usize {
        self.counts
            .iter()
            .filter(|(t, _)| *t >> i & 1 == 1)
            .map(|(_, c)| c[j])
            .sum()
    }

    pub fn is_ef1(&self, n: usize) -> bool {
        (0..n).all(|i| {
            let own = self.utility(i, i);
            (0..n).all(|j| {
                if i == j {
                    return true;
                }
                let other = self.utility(i, j);
                let removable = usize::from(other > 0);
                own + removable >= other
            })
        })
    }
}

/// Number of goods of each type, types ascending.
pub(crate) fn type_totals<U: Utility>(inst: &Instance<U>) -> Vec<(u64, usize)> {
    let mut totals: BTreeMap<u64, usize> = BTreeMap::new();
    for g in 0..inst.num_goods() {
        *totals.entry(inst.good_type(g)).or_default() += 1;
    }
    totals.into_iter().collect()
}

/// Calls `f` with every composition of `total` into `parts` non-negative
/// summands, lexicographically, skipping those exceeding `caps`.
pub(crate) fn for_each_composition<B>(
    total: usize,
    caps: &[usize],
    f: &mut impl FnMut(&[usize]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    fn go<B>(
        k: usize,
        left: usize,
        caps: &[usize],
        cur: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        if k + 1 == caps.len() {
            if left <= caps[k] {
                cur.push(left);
                let r = f(cur);
                cur.pop();
                return r;
            }
            return ControlFlow::Continue(());
        }
        // the remaining parts can absorb at most `room`
        let room: usize = caps[k + 1..].iter().sum();
        let lo = left.saturating_sub(room);
        for x in lo..=left.min(caps[k]) {
            cur.push(x);
            let r = go(k + 1, left - x, caps, cur, f);
            cur.pop();
            r?;
        }
        ControlFlow::Continue(())
    }
    if caps.is_empty() {
        return if total == 0 {
            f(&[])
        } else {
            ControlFlow::Continue(())
        };
    }
    go(0, total, caps, &mut Vec::with_capacity(caps.len()), f)
}

/// Visits every EF1 class with size vector `sv` in canonical order: types
/// ascending, compositions of each type lexicographic. Stops early when `f`
/// breaks. Every search node counts against `budget`.
pub fn for_each_ef1_class<U: Utility, B>(
    inst: &Instance<U>,
    sv: &SizeVector,
    budget: OracleBudget,
    mut f: impl FnMut(&TypeCountMatrix) -> ControlFlow<B>,
) -> Result<Option<B>> {
    if !inst.is_binary() || inst.num_agents() > 64 {
        return Err(wrong_class("binary utilities", inst));
    }
    sv.check_for(inst)?;
    let n = inst.num_agents();
    let totals = type_totals(inst);
    let mut rows: Vec<Vec<usize>> = Vec::with_capacity(totals.len());
    let mut room = sv.0.clone();
    let mut nodes = 0usize;
    let r = class_rec(
        &totals,
        0,
        &mut rows,
        &mut room,
        &mut nodes,
        budget,
        &mut |rows| {
            let tcm = TypeCountMatrix {
                counts: totals
                    .iter()
                    .map(|&(t, _)| t)
                    .zip(rows.iter().cloned())
                    .collect(),
            };
            if tcm.is_ef1(n) {
                f(&tcm)
            } else {
                ControlFlow::Continue(())
            }
        },
    );
    Ok(match r? {
        ControlFlow::Break(b) => Some(b),
        ControlFlow::Continue(()) => None,
    })
}

fn class_rec<B>(
    totals: &[(u64, usize)],
    k: usize,
    rows: &mut Vec<Vec<usize>>,
    room: &mut Vec<usize>,
    nodes: &mut usize,
    budget: OracleBudget,
    f: &mut impl FnMut(&[Vec<usize>]) -> ControlFlow<B>,
) -> Result<ControlFlow<B>> {
    *nodes += 1;
    budget.check(*nodes)?;
    if k == totals.len() {
        // every type placed; the room left must be zero since totals sum to m
        debug_assert!(room.iter().all(|&r| r == 0));
        return Ok(f(rows));
    }
    let mut err = None;
    let caps = room.clone();
    let flow = for_each_composition(totals[k].1, &caps, &mut |comp| {
        for (r, &x) in room.iter_mut().zip(comp) {
            *r -= x;
        }
        rows.push(comp.to_vec());
        let r = class_rec(totals, k + 1, rows, room, nodes, budget, f);
        rows.pop();
        for (r, &x) in room.iter_mut().zip(comp) {
            *r += x;
        }
        match r {
            Ok(ControlFlow::Continue(())) => ControlFlow::Continue(()),
            Ok(ControlFlow::Break(b)) => ControlFlow::Break(Some(b)),
            Err(e) => {
                err = Some(e);
                ControlFlow::Break(None)
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(match flow {
        ControlFlow::Break(Some(b)) => ControlFlow::Break(b),
        _ => ControlFlow::Continue(()),
    })
}

/// All EF1 classes with size vector `sv`, in canonical order.
pub fn enumerate_ef1_classes<U: Utility>(
    inst: &Instance<U>,
    sv: &SizeVector,
    budget: OracleBudget,
) -> Result<Vec<TypeCountMatrix>> {
    let mut out = Vec::new();
    for_each_ef1_class::<U, ()>(inst, sv, budget, |c| {
        out.push(c.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Binary utilities: some EF1 class exists.
pub fn reformable_binary_const<U: Utility>(
    inst: &Instance<U>,
    sv: &SizeVector,
    budget: OracleBudget,
) -> Result<bool> {
    Ok(for_each_ef1_class(inst, sv, budget, |_| ControlFlow::Break(()))?.is_some())
}

/// Identical binary utilities: `m_1 <= s_0 n + n - n_0`, where `s_0` is the
/// smallest size, `n_0` the number of agents of that size and `m_1` the
/// number of valuable goods.
pub fn reformable_identical_binary<U: Utility>(
    inst: &Instance<U>,
    sv: &SizeVector,
) -> Result<bool> {
    if inst.class() != UtilityClass::IdenticalBinary {
        return Err(wrong_class("identical binary utilities", inst));
    }
    sv.check_for(inst)?;
    let n = inst.num_agents();
    let s0 = *sv.0.iter().min().expect("n >= 2");
    let n0 = sv.0.iter().filter(|&&s| s == s0).count();
    let m1 = inst.row(0).iter().filter(|u| !u.is_zero()).count();
    Ok(m1 <= s0 * n + n - n0)
}

/// Which solver answered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReformMethod {
    Balanced,
    IdenticalBinary,
    TwoIdentical,
    BinaryClasses,
    Dp,
    Oracle,
}

impl ReformMethod {
    pub fn tag(self) -> &'static str {
        match self {
            ReformMethod::Balanced => "balanced",
            ReformMethod::IdenticalBinary => "identical-binary-threshold",
            ReformMethod::TwoIdentical => "two-identical",
            ReformMethod::BinaryClasses => "binary-classes",
            ReformMethod::Dp => "dp",
            ReformMethod::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveOptions {
    pub budget: OracleBudget,
    /// Skip the specialised solvers and use brute force.
    pub force_oracle: bool,
}

/// Decides reformability with the cheapest applicable method.
pub fn reformable<U: Utility>(
    inst: &Instance<U>,
    sv: &SizeVector,
    opts: &SolveOptions,
) -> Result<bool> {
    reformable_with_method(inst, sv, opts).map(|(ans, _)| ans)
}

pub fn reformable_with_method<U: Utility>(
    inst: &Instance<U>,
    sv: &SizeVector,
    opts: &SolveOptions,
) -> Result<(bool, ReformMethod)> {
    sv.check_for(inst)?;
    let n = inst.num_agents();
    let too_large = |what: &str| {
        Error::TooLarge(format!(
            "{what} exceeded the budget of {} states ({} agents, {} goods)",
            opts.budget.max_states,
            n,
            inst.num_goods()
        ))
    };
    if opts.force_oracle {
        return exists_ef1_bruteforce(inst, sv, opts.budget)
            .map(|a| (a, ReformMethod::Oracle))
            .map_err(|e| match e {
                Error::BudgetExceeded { .. } => too_large("brute force"),
                e => e,
            });
    }
    let class = inst.class();
    if sv.is_balanced() {
        return Ok((true, ReformMethod::Balanced));
    }
    if class == UtilityClass::IdenticalBinary {
        return Ok((
            reformable_identical_binary(inst, sv)?,
            ReformMethod::IdenticalBinary,
        ));
    }
    if class.is_identical() && n == 2 {
        return Ok((
            reformable_two_identical(inst, sv)?,
            ReformMethod::TwoIdentical,
        ));
    }
    if class.is_binary() && n <= MAX_AGENTS_BINARY_ENUM {
        match reformable_binary_const(inst, sv, opts.budget) {
            Ok(a) => return Ok((a, ReformMethod::BinaryClasses)),
            Err(Error::BudgetExceeded { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    if n <= MAX_AGENTS_DP {
        match reformable_dp(inst, sv, opts.budget) {
            Ok(a) => return Ok((a, ReformMethod::Dp)),
            Err(Error::BudgetExceeded { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    match exists_ef1_bruteforce(inst, sv, opts.budget) {
        Ok(a) => Ok((a, ReformMethod::Oracle)),
        Err(Error::BudgetExceeded { .. }) => Err(too_large("every applicable method")),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ident(row: &[u64], n: usize) -> Instance<u64> {
        Instance::identical(n, row.to_vec()).unwrap()
    }

    fn sv(v: &[usize]) -> SizeVector {
        SizeVector(v.to_vec())
    }

    fn b() -> OracleBudget {
        OracleBudget::default()
    }

    #[test]
    fn two_identical_examples() {
        assert!(reformable_two_identical(&ident(&[4, 3, 2, 1], 2), &sv(&[1, 3])).unwrap());
        assert!(!reformable_two_identical(&ident(&[2, 2, 2, 2], 2), &sv(&[1, 3])).unwrap());
        assert!(!reformable_two_identical(&ident(&[2, 2, 2, 2], 2), &sv(&[3, 1])).unwrap());
        assert!(reformable_two_identical(&ident(&[2, 2, 2, 2], 2), &sv(&[2, 2])).unwrap());
        let general = Instance::<u64>::new(vec![vec![2, 1], vec![1, 2]]).unwrap();
        assert!(matches!(
            reformable_two_identical(&general, &sv(&[1, 1])),
            Err(Error::WrongClass { .. })
        ));
    }

    #[test]
    fn dp_examples() {
        let inst = Instance::<u64>::new(vec![vec![2, 1], vec![1, 2]]).unwrap();
        assert!(reformable_dp(&inst, &sv(&[1, 1]), b()).unwrap());
        assert!(!reformable_dp(&inst, &sv(&[0, 2]), b()).unwrap());
        assert!(!reformable_dp_with_order(&inst, &sv(&[0, 2]), &[1, 0], b()).unwrap());
        assert!(reformable_dp_with_order(&inst, &sv(&[1, 1]), &[0, 0], b()).is_err());
    }

    #[test]
    fn dispatcher_examples() {
        let o = SolveOptions::default();
        let inst = ident(&[2, 2, 2, 2], 2);
        assert_eq!(
            reformable_with_method(&inst, &sv(&[2, 2]), &o).unwrap(),
            (true, ReformMethod::Balanced)
        );
        assert!(!reformable(&inst, &sv(&[1, 3]), &o).unwrap());
        let inst = Instance::<u64>::new(vec![vec![2, 1], vec![1, 2]]).unwrap();
        assert_eq!(
            reformable_with_method(&inst, &sv(&[0, 2]), &o).unwrap(),
            (false, ReformMethod::Dp)
        );
        let forced = SolveOptions {
            force_oracle: true,
            ..o
        };
        assert_eq!(
            reformable_with_method(&inst, &sv(&[0, 2]), &forced).unwrap(),
            (false, ReformMethod::Oracle)
        );
    }

    #[test]
    fn class_enumeration_examples() {
        let inst = ident(&[1, 1], 2);
        let classes = enumerate_ef1_classes(&inst, &sv(&[1, 1]), b()).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].counts[&0b11], vec![1, 1]);

        let inst = Instance::<u64>::new(vec![vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        assert!(enumerate_ef1_classes(&inst, &sv(&[0, 3]), b())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn compositions_are_lexicographic() {
        let mut seen = Vec::new();
        let _ = for_each_composition::<()>(2, &[2, 2, 2], &mut |c| {
            seen.push(c.to_vec());
            ControlFlow::Continue(())
        });
        assert_eq!(seen.first().unwrap(), &vec![0, 0, 2]);
        assert_eq!(seen.last().unwrap(), &vec![2, 0, 0]);
        assert_eq!(seen.len(), 6);
        assert!(seen.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn identical_binary_examples() {
        let four = ident(&[1, 1, 1, 1], 2);
        assert!(!reformable_identical_binary(&four, &sv(&[1, 3])).unwrap());
        let three = ident(&[1, 1, 1, 0], 2);
        assert!(reformable_identical_binary(&three, &sv(&[1, 3])).unwrap());
        let none = ident(&[0, 0, 0, 0], 2);
        assert!(reformable_identical_binary(&none, &sv(&[0, 4])).unwrap());
    }
}
