//! Worst-case exchange counts from `s`-balanced allocations: bound formulas,
//! the constructive upper bound, and the extremal instance families.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::model::{round_robin_into, Allocation, Distance, ExchangeTrace, Instance};
use crate::optimal::{exchange_distance_exact, exchange_plan, optimal_identical_binary};
use crate::scalar::Utility;

type Q = Ratio<i64>;

fn q(v: u64) -> Q {
    Q::from_integer(i64::try_from(v).expect("bound parameters fit in i64"))
}

fn check_params(n: u64, s: u64) {
    assert!(n >= 2, "need at least two agents, got {n}");
    assert!(s >= 1, "need at least one good per agent, got {s}");
}

/// Upper bound on the exchanges needed from any `s`-balanced allocation
/// with `n` agents.
///
/// # Panics
/// If `n < 2` or `s < 1`.
pub fn upper_bound_formula(n: u64, s: u64) -> u64 {
    check_params(n, s);
    let r = s % n;
    let v = if n == 2 {
        (q(s) - q(r)) / 2
    } else if r == 0 {
        q(s) * (q(n) - 1) / 2
    } else {
        q(s) * (q(n) - 1) / 2 + q(r) * (q(n) - 3) / 2 + 1
    };
    assert!(
        v.is_integer(),
        "upper bound {v} is not integral for n={n}, s={s}"
    );
    v.to_integer() as u64
}

/// Lower bound on the worst case, as an exact rational.
pub fn lower_bound_formula(n: u64, s: u64) -> Q {
    check_params(n, s);
    let r = s % n;
    let base = q(s) * (q(n) - 1) / 2;
    if r == 0 {
        base
    } else {
        base - (q(n) - q(r)) / 2
    }
}

/// `n s` goods where good `i*s + j` is worthless to agent `i` and worth one
/// to everyone else; agent `i` starts with exactly the goods worthless to it.
pub fn lower_bound_instance(n: usize, s: usize) -> (Instance<u64>, Allocation) {
    check_params(n as u64, s as u64);
    let m = n * s;
    let rows = (0..n)
        .map(|k| (0..m).map(|g| u64::from(g / s != k)).collect())
        .collect();
    let inst = Instance::new(rows).expect("valid by construction");
    let bundles = (0..n).map(|i| (i * s..(i + 1) * s).collect()).collect();
    (inst, Allocation::from_partition(bundles))
}

/// Categories of goods processed in order by [`constrained_round_robin`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryPlan {
    pub categories: Vec<Vec<usize>>,
}

impl CategoryPlan {
    /// `C_i` is the first `qn` goods of `A_i` by index; the leftovers fill
    /// `D_1, ..., D_r` in order, each taking from the lowest-index agent
    /// that still has unselected goods.
    pub fn for_start(start: &Allocation) -> Result<Self> {
        let s = s_balanced(start)?;
        let n = start.num_agents();
        let (qn, r) = ((s / n) * n, s % n);
        let mut categories: Vec<Vec<usize>> =
            start.bundles().iter().map(|b| b[..qn].to_vec()).collect();
        let mut leftovers = start.bundles().iter().flat_map(|b| b[qn..].iter().copied());
        for _ in 0..r {
            categories.push(leftovers.by_ref().take(n).collect());
        }
        Ok(CategoryPlan { categories })
    }
}

fn s_balanced(start: &Allocation) -> Result<usize> {
    start
        .size_vector()
        .common_size()
        .ok_or_else(|| Error::NotSBalanced(format!("size vector {}", start.size_vector())))
}

/// EF1 allocation in which every agent receives `|C| / n` goods of each
/// category `C`.
///
/// Before each category the envy graph of the partial allocation is made
/// acyclic by rotating bundles along envy cycles; agents then pick in a
/// topological order of that graph, enviers first.
pub fn constrained_round_robin<U: Utility>(
    inst: &Instance<U>,
    plan: &CategoryPlan,
) -> Result<Allocation> {
    let n = inst.num_agents();
    if let Some(c) = plan.categories.iter().find(|c| c.len() % n != 0) {
        return Err(Error::Divisibility(format!(
            "category of {} goods for {n} agents",
            c.len()
        )));
    }
    let covered: usize = plan.categories.iter().map(Vec::len).sum();
    if covered != inst.num_goods() {
        return Err(Error::InvalidAllocation(format!(
            "categories cover {covered} goods, instance has {}",
            inst.num_goods()
        )));
    }
    let mut bundles: Vec<Vec<usize>> = vec![Vec::new(); n];
    for cat in &plan.categories {
        eliminate_envy_cycles(inst, &mut bundles);
        let order = envy_order(inst, &bundles);
        let quota = vec![cat.len() / n; n];
        round_robin_into(inst, cat, &quota, &order, &mut bundles);
    }
    Allocation::new(bundles, inst.num_goods())
}

fn envies<U: Utility>(inst: &Instance<U>, bundles: &[Vec<usize>], i: usize, j: usize) -> bool {
    inst.bundle_value(i, &bundles[i]) < inst.bundle_value(i, &bundles[j])
}

/// Rotates bundles along envy cycles until none is left. Each rotation
/// strictly raises the own-bundle utility of every agent on the cycle.
fn eliminate_envy_cycles<U: Utility>(inst: &Instance<U>, bundles: &mut [Vec<usize>]) {
    while let Some(cycle) = find_envy_cycle(inst, bundles) {
        // agent cycle[k] takes the bundle of cycle[k + 1]
        let first = bundles[cycle[0]].clone();
        for k in 0..cycle.len() - 1 {
            bundles[cycle[k]] = bundles[cycle[k + 1]].clone();
        }
        bundles[*cycle.last().expect("non-empty")] = first;
    }
}

/// First directed cycle found by depth-first search from the lowest agent,
/// successors ascending.
fn find_envy_cycle<U: Utility>(inst: &Instance<U>, bundles: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = bundles.len();
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; n];
    let mut stack: Vec<usize> = Vec::new();
    fn dfs<U: Utility>(
        v: usize,
        inst: &Instance<U>,
        bundles: &[Vec<usize>],
        state: &mut [u8],
        stack: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        state[v] = 1;
        stack.push(v);
        for w in 0..bundles.len() {
            if w == v || !envies(inst, bundles, v, w) {
                continue;
            }
            if state[w] == 1 {
                let at = stack.iter().position(|&x| x == w).expect("on stack");
                return Some(stack[at..].to_vec());
            }
            if state[w] == 0 {
                if let Some(c) = dfs(w, inst, bundles, state, stack) {
                    return Some(c);
                }
            }
        }
        stack.pop();
        state[v] = 2;
        None
    }
    (0..n).find_map(|v| {
        if state[v] == 0 {
            dfs(v, inst, bundles, &mut state, &mut stack)
        } else {
            None
        }
    })
}

/// Topological order of the (acyclic) envy graph with enviers before the
/// agents they envy, lowest index first among the available agents.
fn envy_order<U: Utility>(inst: &Instance<U>, bundles: &[Vec<usize>]) -> Vec<usize> {
    let n = bundles.len();
    let mut indeg: Vec<usize> = (0..n)
        .map(|j| {
            (0..n)
                .filter(|&i| i != j && envies(inst, bundles, i, j))
                .count()
        })
        .collect();
    let mut ready: BTreeSet<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for (j, d) in indeg.iter_mut().enumerate() {
            if v != j && envies(inst, bundles, v, j) {
                *d -= 1;
                if *d == 0 {
                    ready.insert(j);
                }
            }
        }
    }
    assert_eq!(order.len(), n, "envy graph has a cycle");
    order
}

/// Result of [`construct_ef1_within_bound`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub target: Allocation,
    /// Exact exchange distance from the start to `target`.
    pub count: u64,
    /// A shortest exchange sequence reaching `target`.
    pub trace: ExchangeTrace,
    /// Categories used when `n >= 3`.
    pub plan: Option<CategoryPlan>,
}

/// An EF1 `s`-balanced target reachable within [`upper_bound_formula`]
/// exchanges, with its exact distance from `start`.
pub fn construct_ef1_within_bound<U: Utility>(
    inst: &Instance<U>,
    start: &Allocation,
) -> Result<Construction> {
    start.check_for(inst)?;
    let s = s_balanced(start)?;
    let n = inst.num_agents();
    let (target, plan) = if n == 2 {
        let mut bundles = vec![Vec::new(); 2];
        let (hi, lo) = (s.div_ceil(2), s / 2);
        round_robin_into(inst, start.bundle(0), &[hi, lo], &[0, 1], &mut bundles);
        round_robin_into(inst, start.bundle(1), &[lo, hi], &[1, 0], &mut bundles);
        (Allocation::from_partition(bundles), None)
    } else {
        let plan = CategoryPlan::for_start(start)?;
        (constrained_round_robin(inst, &plan)?, Some(plan))
    };
    let count = match exchange_distance_exact(start, &target)? {
        Distance::Finite(k) => k,
        Distance::Infinite => unreachable!("target keeps the size vector"),
    };
    let trace = exchange_plan(start, &target)?;
    Ok(Construction {
        target,
        count,
        trace,
        plan,
    })
}

/// Which family of bounds a report describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundFamily {
    General,
    IdenticalBinary,
}

impl fmt::Display for BoundFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundFamily::General => "general",
            BoundFamily::IdenticalBinary => "identical-binary",
        })
    }
}

/// Bounds on the worst-case exchange count and, where measured, the count
/// achieved on the family's extremal instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub n: u64,
    pub s: u64,
    pub lower: Q,
    pub upper: Q,
    pub achieved: Option<u64>,
    pub family: BoundFamily,
}

/// Bounds for arbitrary utilities. `achieved` is left empty: measuring it on
/// the lower-bound instance needs a search (see [`lower_bound_instance`]).
pub fn general_bounds(n: u64, s: u64) -> BoundReport {
    BoundReport {
        n,
        s,
        lower: lower_bound_formula(n, s),
        upper: q(upper_bound_formula(n, s)),
        achieved: None,
        family: BoundFamily::General,
    }
}

/// Identical binary instance where the first `floor(n/2)` agents hold `s`
/// valuable goods each and everyone else holds worthless goods.
pub fn idenbin_extremal_instance(n: usize, s: usize) -> (Instance<u64>, Allocation) {
    check_params(n as u64, s as u64);
    let valuable = (n / 2) * s;
    let row = (0..n * s).map(|g| u64::from(g < valuable)).collect();
    let inst = Instance::identical(n, row).expect("valid by construction");
    let bundles = (0..n).map(|i| (i * s..(i + 1) * s).collect()).collect();
    (inst, Allocation::from_partition(bundles))
}

/// Bounds for identical binary utilities together with the optimal count on
/// the extremal instance.
pub fn idenbin_bounds(n: u64, s: u64) -> BoundReport {
    check_params(n, s);
    let (lower, upper) = if n.is_multiple_of(2) {
        (q((n / 2) * (s / 2)), q(s * n) / 4)
    } else {
        (
            q(n.div_ceil(2) * ((s * (n - 1)) / (2 * n))),
            q(s * (n - 1) * (n + 1)) / q(4 * n),
        )
    };
    assert!(lower <= upper, "lower {lower} exceeds upper {upper}");
    let (inst, start) = idenbin_extremal_instance(n as usize, s as usize);
    let (achieved, _) =
        optimal_identical_binary(&inst, &start).expect("s-balanced starts are reformable");
    BoundReport {
        n,
        s,
        lower,
        upper,
        achieved: Some(achieved),
        family: BoundFamily::IdenticalBinary,
    }
}
