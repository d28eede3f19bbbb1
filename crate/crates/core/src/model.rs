//! Domain types, the EF1 and weak-EF1 predicates, exchanges and round-robin.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result, Side};
use crate::scalar::{ge_minus, Utility};

/// `n` agents with additive, non-negative integer utilities over `m` goods.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance<U> {
    n: usize,
    m: usize,
    // row-major, `n * m`
    utilities: Vec<U>,
}

impl<U: Utility> Instance<U> {
    /// Builds an instance from one utility row per agent.
    pub fn new(rows: Vec<Vec<U>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != m) {
            return Err(Error::InvalidInstance(format!(
                "row {i} has {} utilities, expected {m}",
                r.len()
            )));
        }
        Self::from_row_major(n, m, rows.into_iter().flatten().collect())
    }

    pub fn from_row_major(n: usize, m: usize, utilities: Vec<U>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInstance(format!(
                "need at least 2 agents, got {n}"
            )));
        }
        if utilities.len() != n * m {
            return Err(Error::InvalidInstance(format!(
                "expected {n}x{m} = {} utilities, got {}",
                n * m,
                utilities.len()
            )));
        }
        for i in 0..n {
            let mut total = U::zero();
            for &u in &utilities[i * m..(i + 1) * m] {
                total = total.checked_add(&u).ok_or_else(|| {
                    Error::InvalidInstance(format!("total utility of agent {i} overflows"))
                })?;
            }
        }
        Ok(Instance { n, m, utilities })
    }

    /// All agents share the utility row `row`.
    pub fn identical(n: usize, row: Vec<U>) -> Result<Self> {
        let m = row.len();
        let utilities = (0..n).flat_map(|_| row.iter().copied()).collect();
        Self::from_row_major(n, m, utilities)
    }

    #[inline]
    pub fn num_agents(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn num_goods(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn value(&self, agent: usize, good: usize) -> U {
        self.utilities[agent * self.m + good]
    }

    pub fn row(&self, agent: usize) -> &[U] {
        &self.utilities[agent * self.m..(agent + 1) * self.m]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[U]> + '_ {
        (0..self.n).map(move |i| self.row(i))
    }

    pub fn bundle_value(&self, agent: usize, bundle: &[usize]) -> U {
        bundle.iter().map(|&g| self.value(agent, g)).sum()
    }

    /// Largest single-good value of `bundle` for `agent`; zero when empty.
    pub fn top_value(&self, agent: usize, bundle: &[usize]) -> U {
        bundle
            .iter()
            .map(|&g| self.value(agent, g))
            .max()
            .unwrap_or_else(U::zero)
    }

    /// `max_{g in M} u_agent(g)`.
    pub fn max_value(&self, agent: usize) -> U {
        self.row(agent)
            .iter()
            .copied()
            .max()
            .unwrap_or_else(U::zero)
    }

    pub fn is_identical(&self) -> bool {
        let first = self.row(0);
        (1..self.n).all(|i| self.row(i) == first)
    }

    pub fn is_binary(&self) -> bool {
        self.utilities.iter().all(|&u| u <= U::one())
    }

    pub fn class(&self) -> UtilityClass {
        UtilityClass::from_flags(self.is_identical(), self.is_binary())
    }

    /// Valuation vector of a good as an `n`-bit integer: bit `i` is set iff
    /// agent `i` values the good. Only meaningful for binary instances.
    pub fn good_type(&self, good: usize) -> u64 {
        debug_assert!(self.n <= 64);
        (0..self.n)
            .filter(|&i| !self.value(i, good).is_zero())
            .fold(0u64, |acc, i| acc | (1 << i))
    }

    /// Same instance with goods relabelled: new good `k` is old good `order[k]`.
    pub fn permute_goods(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.m);
        let utilities = (0..self.n)
            .flat_map(|i| order.iter().map(move |&g| self.value(i, g)))
            .collect();
        Instance {
            n: self.n,
            m: self.m,
            utilities,
        }
    }
}

/// Bundle cardinalities of an allocation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SizeVector(pub Vec<usize>);

impl SizeVector {
    pub fn new(sizes: Vec<usize>) -> Self {
        SizeVector(sizes)
    }

    /// `(s, s, ..., s)` for `n` agents.
    pub fn uniform(n: usize, s: usize) -> Self {
        SizeVector(vec![s; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Every pair of sizes differs by at most one.
    pub fn is_balanced(&self) -> bool {
        match (self.0.iter().min(), self.0.iter().max()) {
            (Some(lo), Some(hi)) => hi - lo <= 1,
            _ => true,
        }
    }

    /// `Some(s)` if every agent holds exactly `s` goods.
    pub fn common_size(&self) -> Option<usize> {
        let first = *self.0.first()?;
        self.0.iter().all(|&s| s == first).then_some(first)
    }

    /// Checks the vector against an instance: one entry per agent, summing to `m`.
    pub fn check_for<U: Utility>(&self, inst: &Instance<U>) -> Result<()> {
        if self.len() != inst.num_agents() {
            return Err(Error::InvalidSizeVector(format!(
                "{} entries for {} agents",
                self.len(),
                inst.num_agents()
            )));
        }
        if self.total() != inst.num_goods() {
            return Err(Error::InvalidSizeVector(format!(
                "sizes sum to {}, instance has {} goods",
                self.total(),
                inst.num_goods()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for SizeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Ordered partition of the goods `0..m` into one bundle per agent.
///
/// Bundles are kept sorted so iteration order is deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Allocation {
    bundles: Vec<Vec<usize>>,
}

impl Allocation {
    /// Validates that `bundles` partition `0..m`.
    pub fn new(mut bundles: Vec<Vec<usize>>, m: usize) -> Result<Self> {
        let mut seen = vec![false; m];
        for (i, b) in bundles.iter_mut().enumerate() {
            b.sort_unstable();
            for &g in b.iter() {
                if g >= m {
                    return Err(Error::InvalidAllocation(format!(
                        "bundle {i} contains g{g}, but there are only {m} goods"
                    )));
                }
                if seen[g] {
                    return Err(Error::InvalidAllocation(format!("g{g} appears twice")));
                }
                seen[g] = true;
            }
        }
        if let Some(g) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidAllocation(format!("g{g} is not allocated")));
        }
        Ok(Allocation { bundles })
    }

    /// Trusted constructor for bundles already known to partition the goods.
    pub(crate) fn from_partition(mut bundles: Vec<Vec<usize>>) -> Self {
        for b in &mut bundles {
            b.sort_unstable();
        }
        Allocation { bundles }
    }

    /// Builds the allocation where good `g` belongs to agent `owners[g]`.
    pub fn from_owners(owners: &[usize], n: usize) -> Self {
        let mut bundles = vec![Vec::new(); n];
        for (g, &i) in owners.iter().enumerate() {
            bundles[i].push(g);
        }
        Allocation { bundles }
    }

    pub fn num_agents(&self) -> usize {
        self.bundles.len()
    }

    pub fn num_goods(&self) -> usize {
        self.bundles.iter().map(Vec::len).sum()
    }

    pub fn bundles(&self) -> &[Vec<usize>] {
        &self.bundles
    }

    pub fn bundle(&self, agent: usize) -> &[usize] {
        &self.bundles[agent]
    }

    pub fn into_bundles(self) -> Vec<Vec<usize>> {
        self.bundles
    }

    pub fn holder(&self, good: usize) -> Option<usize> {
        self.bundles
            .iter()
            .position(|b| b.binary_search(&good).is_ok())
    }

    /// `owners[g]` is the agent holding good `g`.
    pub fn owners(&self) -> Vec<usize> {
        let mut owners = vec![0; self.num_goods()];
        for (i, b) in self.bundles.iter().enumerate() {
            for &g in b {
                owners[g] = i;
            }
        }
        owners
    }

    pub fn size_vector(&self) -> SizeVector {
        SizeVector(self.bundles.iter().map(Vec::len).collect())
    }

    /// The allocation has as many bundles as agents and covers all goods.
    pub fn check_for<U: Utility>(&self, inst: &Instance<U>) -> Result<()> {
        if self.num_agents() != inst.num_agents() {
            return Err(Error::InvalidAllocation(format!(
                "{} bundles for {} agents",
                self.num_agents(),
                inst.num_agents()
            )));
        }
        if self.num_goods() != inst.num_goods() {
            return Err(Error::InvalidAllocation(format!(
                "allocation covers {} goods, instance has {}",
                self.num_goods(),
                inst.num_goods()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, b) in self.bundles.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            let goods: Vec<String> = b.iter().map(|g| format!("g{g}")).collect();
            write!(f, "{{{}}}", goods.join(","))?;
        }
        f.write_str(")")
    }
}

/// Agent `agent_a` gives `good_a` to `agent_b` and receives `good_b` in return.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExchangeStep {
    pub agent_a: usize,
    pub agent_b: usize,
    pub good_a: usize,
    pub good_b: usize,
}

impl ExchangeStep {
    pub fn new(agent_a: usize, agent_b: usize, good_a: usize, good_b: usize) -> Self {
        ExchangeStep {
            agent_a,
            agent_b,
            good_a,
            good_b,
        }
    }

    /// The step that undoes `self` when applied right after it.
    pub fn inverse(&self) -> Self {
        ExchangeStep::new(self.agent_a, self.agent_b, self.good_b, self.good_a)
    }
}

pub type ExchangeTrace = Vec<ExchangeStep>;

/// Number of exchanges, or `Infinite` when no sequence reaches the goal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Distance {
    Finite(u64),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<u64> {
        match self {
            Distance::Finite(k) => Some(k),
            Distance::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Distance::Infinite
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(k) => write!(f, "{k}"),
            Distance::Infinite => f.write_str("INFINITY"),
        }
    }
}

/// Dispatch key for the utility classes the solvers specialise on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UtilityClass {
    General,
    Identical,
    Binary,
    IdenticalBinary,
}

impl UtilityClass {
    pub fn from_flags(identical: bool, binary: bool) -> Self {
        match (identical, binary) {
            (true, true) => UtilityClass::IdenticalBinary,
            (true, false) => UtilityClass::Identical,
            (false, true) => UtilityClass::Binary,
            (false, false) => UtilityClass::General,
        }
    }

    pub fn is_identical(self) -> bool {
        matches!(
            self,
            UtilityClass::Identical | UtilityClass::IdenticalBinary
        )
    }

    pub fn is_binary(self) -> bool {
        matches!(self, UtilityClass::Binary | UtilityClass::IdenticalBinary)
    }

    pub fn tag(self) -> &'static str {
        match self {
            UtilityClass::General => "general",
            UtilityClass::Identical => "identical",
            UtilityClass::Binary => "binary",
            UtilityClass::IdenticalBinary => "identical-binary",
        }
    }
}

impl fmt::Display for UtilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for UtilityClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(UtilityClass::General),
            "identical" => Ok(UtilityClass::Identical),
            "binary" => Ok(UtilityClass::Binary),
            "identical-binary" => Ok(UtilityClass::IdenticalBinary),
            other => Err(Error::InvalidInstance(format!(
                "unknown utility class `{other}`"
            ))),
        }
    }
}

pub fn classify_utilities<U: Utility>(inst: &Instance<U>) -> UtilityClass {
    inst.class()
}

pub fn size_vector(alloc: &Allocation) -> SizeVector {
    alloc.size_vector()
}

pub fn is_balanced(sv: &SizeVector) -> bool {
    sv.is_balanced()
}

/// Agent `i` is EF1 towards agent `j`.
pub fn is_ef1_pair<U: Utility>(
    inst: &Instance<U>,
    alloc: &Allocation,
    i: usize,
    j: usize,
) -> Result<bool> {
    let n = alloc.num_agents().min(inst.num_agents());
    for agent in [i, j] {
        if agent >= n {
            return Err(Error::AgentOutOfRange { agent, n });
        }
    }
    Ok(ef1_towards(inst, alloc, i, j))
}

fn ef1_towards<U: Utility>(inst: &Instance<U>, alloc: &Allocation, i: usize, j: usize) -> bool {
    let other = alloc.bundle(j);
    if other.is_empty() {
        return true;
    }
    let own = inst.bundle_value(i, alloc.bundle(i));
    ge_minus(own, inst.bundle_value(i, other), inst.top_value(i, other))
}

pub fn is_ef1<U: Utility>(inst: &Instance<U>, alloc: &Allocation) -> bool {
    let n = alloc.num_agents();
    (0..n).all(|i| (0..n).all(|j| i == j || ef1_towards(inst, alloc, i, j)))
}

/// Envy towards any bundle is at most the agent's single most valuable good
/// in the whole instance. Compared in integers: `u_i(A_i) >= u_i(A_j) - max_g u_i(g)`.
pub fn is_weak_ef1<U: Utility>(inst: &Instance<U>, alloc: &Allocation) -> bool {
    let n = alloc.num_agents();
    (0..n).all(|i| {
        let own = inst.bundle_value(i, alloc.bundle(i));
        let slack = inst.max_value(i);
        (0..n).all(|j| i == j || ge_minus(own, inst.bundle_value(i, alloc.bundle(j)), slack))
    })
}

pub fn apply_exchange(alloc: &Allocation, step: &ExchangeStep) -> Result<Allocation> {
    let mut next = alloc.clone();
    apply_exchange_in_place(&mut next, step)?;
    Ok(next)
}

pub fn apply_exchange_in_place(alloc: &mut Allocation, step: &ExchangeStep) -> Result<()> {
    let n = alloc.num_agents();
    for agent in [step.agent_a, step.agent_b] {
        if agent >= n {
            return Err(Error::AgentOutOfRange { agent, n });
        }
    }
    if step.agent_a == step.agent_b {
        return Err(Error::InvalidStep(format!(
            "agent {} cannot exchange with itself",
            step.agent_a
        )));
    }
    let pos_a = alloc.bundles[step.agent_a]
        .binary_search(&step.good_a)
        .map_err(|_| Error::GoodNotHeld {
            side: Side::A,
            agent: step.agent_a,
            good: step.good_a,
        })?;
    let pos_b = alloc.bundles[step.agent_b]
        .binary_search(&step.good_b)
        .map_err(|_| Error::GoodNotHeld {
            side: Side::B,
            agent: step.agent_b,
            good: step.good_b,
        })?;
    let a = &mut alloc.bundles[step.agent_a];
    a.remove(pos_a);
    let at = a.binary_search(&step.good_b).unwrap_err();
    a.insert(at, step.good_b);
    let b = &mut alloc.bundles[step.agent_b];
    b.remove(pos_b);
    let at = b.binary_search(&step.good_a).unwrap_err();
    b.insert(at, step.good_a);
    Ok(())
}

/// Replays `trace` from `start`, failing on the first invalid step.
pub fn replay(start: &Allocation, trace: &[ExchangeStep]) -> Result<Allocation> {
    let mut cur = start.clone();
    for step in trace {
        apply_exchange_in_place(&mut cur, step)?;
    }
    Ok(cur)
}

/// Round-robin picking with per-agent quotas.
///
/// Agents take turns in `order`, skipping those whose quota is filled; each
/// pick is a remaining good of maximum utility to the picker, lowest index
/// on ties. `order` must list agents with larger quotas before smaller ones.
pub fn round_robin<U: Utility>(
    inst: &Instance<U>,
    sv: &SizeVector,
    order: &[usize],
) -> Result<Allocation> {
    sv.check_for(inst)?;
    let n = inst.num_agents();
    let mut seen = vec![false; n];
    if order.len() != n
        || order
            .iter()
            .any(|&i| i >= n || std::mem::replace(&mut seen[i], true))
    {
        return Err(Error::InvalidOrder(format!(
            "{order:?} is not a permutation of the {n} agents"
        )));
    }
    if let Some(w) = order.windows(2).find(|w| sv.0[w[0]] < sv.0[w[1]]) {
        return Err(Error::InvalidOrder(format!(
            "agent {} (quota {}) picks before agent {} (quota {})",
            w[0], sv.0[w[0]], w[1], sv.0[w[1]]
        )));
    }
    let goods: Vec<usize> = (0..inst.num_goods()).collect();
    let mut bundles = vec![Vec::new(); n];
    round_robin_into(inst, &goods, sv.as_slice(), order, &mut bundles);
    for b in &mut bundles {
        b.sort_unstable();
    }
    Ok(Allocation { bundles })
}

/// Round-robin over the subset `goods`, appending picks to `bundles`.
/// `quota[i]` goods are handed to agent `i`; quotas must sum to `goods.len()`.
pub(crate) fn round_robin_into<U: Utility>(
    inst: &Instance<U>,
    goods: &[usize],
    quota: &[usize],
    order: &[usize],
    bundles: &mut [Vec<usize>],
) {
    let mut remaining: Vec<usize> = goods.to_vec();
    remaining.sort_unstable();
    let mut left = quota.to_vec();
    while !remaining.is_empty() {
        let mut picked_any = false;
        for &i in order {
            if left[i] == 0 || remaining.is_empty() {
                continue;
            }
            let (pos, _) = remaining
                .iter()
                .enumerate()
                .fold(None::<(usize, U)>, |best, (p, &g)| {
                    let v = inst.value(i, g);
                    match best {
                        Some((_, bv)) if bv >= v => best,
                        _ => Some((p, v)),
                    }
                })
                .expect("remaining is non-empty");
            bundles[i].push(remaining.remove(pos));
            left[i] -= 1;
            picked_any = true;
        }
        assert!(picked_any, "quotas do not cover the goods");
    }
}
