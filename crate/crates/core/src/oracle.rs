//! Brute-force ground truth: allocation enumeration, breadth-first search over
//! exchanges, and the beneficial-exchange search.
//!
//! States are owner vectors (`owners[g]` is the agent holding good `g`), which
//! are in bijection with allocations and so serve as a canonical hash key.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::model::{Allocation, Distance, ExchangeStep, ExchangeTrace, Instance, SizeVector};
use crate::scalar::{ge_minus, Utility};

pub const DEFAULT_MAX_STATES: usize = 5_000_000;

/// Cap on the number of states a search may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_states: usize,
}

impl OracleBudget {
    pub fn new(max_states: usize) -> Self {
        OracleBudget { max_states }
    }

    pub(crate) fn exceeded(&self) -> Error {
        Error::BudgetExceeded {
            limit: self.max_states,
        }
    }

    pub(crate) fn check(&self, used: usize) -> Result<()> {
        if used > self.max_states {
            Err(self.exceeded())
        } else {
            Ok(())
        }
    }
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget::new(DEFAULT_MAX_STATES)
    }
}

/// `m! / (s_1! ... s_n!)`, saturating at `u128::MAX`.
pub fn multinomial(sizes: &[usize]) -> u128 {
    let mut acc: u128 = 1;
    let mut total: u128 = 0;
    for &s in sizes {
        for k in 1..=s as u128 {
            total += 1;
            // acc * total / k stays integral: acc * C(total, k) built incrementally
            acc = match acc.checked_mul(total) {
                Some(v) => v / k,
                None => return u128::MAX,
            };
        }
    }
    acc
}

/// Owner vectors with a fixed size vector, in lexicographic order.
pub struct AllocationIter {
    owners: Vec<usize>,
    n: usize,
    done: bool,
}

impl AllocationIter {
    fn new(sv: &SizeVector) -> Self {
        let owners = sv
            .as_slice()
            .iter()
            .enumerate()
            .flat_map(|(i, &s)| std::iter::repeat_n(i, s))
            .collect();
        AllocationIter {
            owners,
            n: sv.len(),
            done: false,
        }
    }
}

impl Iterator for AllocationIter {
    type Item = Allocation;

    fn next(&mut self) -> Option<Allocation> {
        if self.done {
            return None;
        }
        let out = Allocation::from_owners(&self.owners, self.n);
        self.done = !next_permutation(&mut self.owners);
        Some(out)
    }
}

/// Rearranges `v` into its lexicographic successor; false if `v` was the last.
pub(crate) fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Every allocation with size vector `sv`, each once, lexicographic in the
/// owner vector. Fails up front if their number exceeds the budget.
pub fn enumerate_allocations<U: Utility>(
    inst: &Instance<U>,
    sv: &SizeVector,
    budget: OracleBudget,
) -> Result<AllocationIter> {
    sv.check_for(inst)?;
    if multinomial(sv.as_slice()) > budget.max_states as u128 {
        return Err(budget.exceeded());
    }
    Ok(AllocationIter::new(sv))
}

/// Reusable buffers for evaluating EF1 directly on an owner vector.
pub(crate) struct Ef1Scratch<U> {
    n: usize,
    value: Vec<U>,
    top: Vec<U>,
    size: Vec<usize>,
}

impl<U: Utility> Ef1Scratch<U> {
    pub(crate) fn new(n: usize) -> Self {
        Ef1Scratch {
            n,
            value: vec![U::zero(); n * n],
            top: vec![U::zero(); n * n],
            size: vec![0; n],
        }
    }

    pub(crate) fn is_ef1<O: Copy + Into<usize>>(
        &mut self,
        inst: &Instance<U>,
        owners: &[O],
    ) -> bool {
        let n = self.n;
        self.value.iter_mut().for_each(|v| *v = U::zero());
        self.top.iter_mut().for_each(|v| *v = U::zero());
        self.size.iter_mut().for_each(|v| *v = 0);
        for (g, &o) in owners.iter().enumerate() {
            let j = o.into();
            self.size[j] += 1;
            for i in 0..n {
                let v = inst.value(i, g);
                let k = i * n + j;
                self.value[k] = self.value[k] + v;
                if v > self.top[k] {
                    self.top[k] = v;
                }
            }
        }
        (0..n).all(|i| {
            let own = self.value[i * n + i];
            (0..n).all(|j| {
                i == j
                    || self.size[j] == 0
                    || ge_minus(own, self.value[i * n + j], self.top[i * n + j])
            })
        })
    }
}

/// Whether some allocation with size vector `sv` is EF1. Stops at the first
/// witness; every allocation examined counts against the budget.
pub fn exists_ef1_bruteforce<U: Utility>(
    inst: &Instance<U>,
    sv: &SizeVector,
    budget: OracleBudget,
) -> Result<bool> {
    Ok(find_ef1_bruteforce(inst, sv, budget)?.is_some())
}

/// First EF1 allocation with size vector `sv` in enumeration order.
pub fn find_ef1_bruteforce<U: Utility>(
    inst: &Instance<U>,
    sv: &SizeVector,
    budget: OracleBudget,
) -> Result<Option<Allocation>> {
    sv.check_for(inst)?;
    let mut owners = AllocationIter::new(sv).owners;
    let mut scratch = Ef1Scratch::new(inst.num_agents());
    let mut visited = 0usize;
    loop {
        visited += 1;
        budget.check(visited)?;
        if scratch.is_ef1(inst, &owners) {
            return Ok(Some(Allocation::from_owners(&owners, sv.len())));
        }
        if !next_permutation(&mut owners) {
            return Ok(None);
        }
    }
}

/// Outcome of a breadth-first search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub distance: Distance,
    /// Witness exchanges, present when the distance is finite.
    pub trace: Option<ExchangeTrace>,
    pub states_visited: usize,
}

fn owners_key(alloc: &Allocation) -> Result<Box<[u8]>> {
    if alloc.num_agents() > u8::MAX as usize + 1 {
        return Err(Error::TooLarge(format!("{} agents", alloc.num_agents())));
    }
    Ok(alloc.owners().into_iter().map(|o| o as u8).collect())
}

/// Plain BFS over owner vectors. Neighbours are generated in lexicographic
/// order of `(agent_a, agent_b, good_a, good_b)` with `agent_a < agent_b`.
fn bfs_owners(
    start: Box<[u8]>,
    n: usize,
    budget: OracleBudget,
    mut is_goal: impl FnMut(&[u8]) -> bool,
) -> Result<SearchResult> {
    if is_goal(&start) {
        return Ok(SearchResult {
            distance: Distance::Finite(0),
            trace: Some(Vec::new()),
            states_visited: 1,
        });
    }
    let mut index: HashMap<Box<[u8]>, u32> = HashMap::new();
    let mut parent: Vec<(u32, ExchangeStep)> = Vec::new();
    let mut states: Vec<Box<[u8]>> = Vec::new();
    index.insert(start.clone(), 0);
    parent.push((0, ExchangeStep::new(0, 0, 0, 0)));
    states.push(start);
    let mut frontier = vec![0u32];
    let mut depth = 0u64;
    let mut bundles: Vec<Vec<usize>> = vec![Vec::new(); n];
    while !frontier.is_empty() {
        depth += 1;
        let mut next = Vec::new();
        for &id in &frontier {
            let cur = states[id as usize].clone();
            bundles.iter_mut().for_each(Vec::clear);
            for (g, &o) in cur.iter().enumerate() {
                bundles[o as usize].push(g);
            }
            let mut buf = cur.to_vec();
            for a in 0..n {
                for b in a + 1..n {
                    for &ga in &bundles[a] {
                        for &gb in &bundles[b] {
                            buf[ga] = b as u8;
                            buf[gb] = a as u8;
                            if !index.contains_key(buf.as_slice()) {
                                let key: Box<[u8]> = buf.clone().into_boxed_slice();
                                let nid = states.len() as u32;
                                index.insert(key.clone(), nid);
                                parent.push((id, ExchangeStep::new(a, b, ga, gb)));
                                let goal = is_goal(&key);
                                states.push(key);
                                budget.check(states.len())?;
                                if goal {
                                    let trace = unwind(&parent, nid);
                                    return Ok(SearchResult {
                                        distance: Distance::Finite(depth),
                                        trace: Some(trace),
                                        states_visited: states.len(),
                                    });
                                }
                                next.push(nid);
                            }
                            buf[ga] = a as u8;
                            buf[gb] = b as u8;
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(SearchResult {
        distance: Distance::Infinite,
        trace: None,
        states_visited: states.len(),
    })
}

fn unwind(parent: &[(u32, ExchangeStep)], mut id: u32) -> ExchangeTrace {
    let mut trace = Vec::new();
    while id != 0 {
        let (p, step) = parent[id as usize];
        trace.push(step);
        id = p;
    }
    trace.reverse();
    trace
}

/// Minimum number of exchanges from `start` to any EF1 allocation.
///
/// The search exhausts the reachable layer (every allocation with the start's
/// size vector) before answering `Infinite`.
pub fn min_exchanges_bfs<U: Utility>(
    inst: &Instance<U>,
    start: &Allocation,
    budget: OracleBudget,
) -> Result<SearchResult> {
    start.check_for(inst)?;
    let n = inst.num_agents();
    let mut scratch = Ef1Scratch::new(n);
    bfs_owners(owners_key(start)?, n, budget, |o| scratch.is_ef1(inst, o))
}

/// Minimum number of exchanges turning `start` into exactly `target`.
pub fn exchange_distance_bfs(
    start: &Allocation,
    target: &Allocation,
    budget: OracleBudget,
) -> Result<SearchResult> {
    if start.num_agents() != target.num_agents() || start.num_goods() != target.num_goods() {
        return Err(Error::InvalidAllocation(
            "allocations are over different agents or goods".into(),
        ));
    }
    if start.size_vector() != target.size_vector() {
        return Ok(SearchResult {
            distance: Distance::Infinite,
            trace: None,
            states_visited: 0,
        });
    }
    let goal = owners_key(target)?;
    bfs_owners(owners_key(start)?, start.num_agents(), budget, |o| {
        o == &*goal
    })
}

/// BFS on the quotient by interchangeable goods.
///
/// Goods whose utility columns coincide are indistinguishable to every agent,
/// so permuting them is an automorphism of the exchange graph that fixes the
/// EF1 set; distances to that set are therefore preserved. A state records,
/// for each class of interchangeable goods, the sorted owners of its goods.
/// Exact like [`min_exchanges_bfs`] and usually far smaller.
pub fn min_exchanges_bfs_typed<U: Utility>(
    inst: &Instance<U>,
    start: &Allocation,
    budget: OracleBudget,
) -> Result<SearchResult> {
    typed_search(inst, start, None, budget)
}

/// A shortest trace to EF1 of at most `k` exchanges, if one exists. Only the
/// first `k` layers of the quotient search are explored.
pub fn ef1_within_exchanges<U: Utility>(
    inst: &Instance<U>,
    start: &Allocation,
    k: u64,
    budget: OracleBudget,
) -> Result<Option<ExchangeTrace>> {
    Ok(typed_search(inst, start, Some(k), budget)?.trace)
}

fn typed_search<U: Utility>(
    inst: &Instance<U>,
    start: &Allocation,
    max_depth: Option<u64>,
    budget: OracleBudget,
) -> Result<SearchResult> {
    start.check_for(inst)?;
    let n = inst.num_agents();
    let m = inst.num_goods();
    if n > u8::MAX as usize + 1 {
        return Err(Error::TooLarge(format!("{n} agents")));
    }
    // class id per good; goods of one class occupy a contiguous slot range
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut col_index: HashMap<Vec<U>, usize> = HashMap::new();
    for g in 0..m {
        let col: Vec<U> = (0..n).map(|i| inst.value(i, g)).collect();
        let c = *col_index.entry(col).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[c].push(g);
    }
    let order: Vec<usize> = classes.iter().flatten().copied().collect();
    let offsets: Vec<usize> = classes
        .iter()
        .scan(0, |acc, c| {
            let o = *acc;
            *acc += c.len();
            Some(o)
        })
        .collect();
    // reordered instance: slot k holds good order[k]
    let sorted = inst.permute_goods(&order);
    let canon = |slots: &mut [u8]| {
        for (c, members) in classes.iter().enumerate() {
            slots[offsets[c]..offsets[c] + members.len()].sort_unstable();
        }
    };
    let owners = start.owners();
    let mut start_key: Vec<u8> = order.iter().map(|&g| owners[g] as u8).collect();
    canon(&mut start_key);

    let mut scratch = Ef1Scratch::new(n);
    if scratch.is_ef1(&sorted, &start_key) {
        return Ok(SearchResult {
            distance: Distance::Finite(0),
            trace: Some(Vec::new()),
            states_visited: 1,
        });
    }
    // quotient step: (agent_a, agent_b, class_a, class_b)
    let mut index: HashMap<Box<[u8]>, u32> = HashMap::new();
    let mut parent: Vec<(u32, [usize; 4])> = vec![(0, [0; 4])];
    let mut states: Vec<Box<[u8]>> = vec![start_key.clone().into_boxed_slice()];
    index.insert(start_key.into_boxed_slice(), 0);
    let mut frontier = vec![0u32];
    let mut depth = 0u64;
    let nc = classes.len();
    while !frontier.is_empty() && max_depth.is_none_or(|k| depth < k) {
        depth += 1;
        let mut next = Vec::new();
        for &id in &frontier {
            let cur = states[id as usize].clone();
            // first slot of each (agent, class) pair, if any
            let mut first = vec![usize::MAX; n * nc];
            for (c, members) in classes.iter().enumerate() {
                for k in (offsets[c]..offsets[c] + members.len()).rev() {
                    first[cur[k] as usize * nc + c] = k;
                }
            }
            for a in 0..n {
                for b in a + 1..n {
                    for ca in 0..nc {
                        let ka = first[a * nc + ca];
                        if ka == usize::MAX {
                            continue;
                        }
                        for cb in 0..nc {
                            let kb = first[b * nc + cb];
                            if cb == ca || kb == usize::MAX {
                                continue;
                            }
                            let mut buf = cur.to_vec();
                            buf[ka] = b as u8;
                            buf[kb] = a as u8;
                            canon(&mut buf);
                            if index.contains_key(buf.as_slice()) {
                                continue;
                            }
                            let key = buf.into_boxed_slice();
                            let nid = states.len() as u32;
                            index.insert(key.clone(), nid);
                            parent.push((id, [a, b, ca, cb]));
                            let goal = scratch.is_ef1(&sorted, &key);
                            states.push(key);
                            budget.check(states.len())?;
                            if goal {
                                let trace = lift_trace(start, &classes, &parent, nid);
                                return Ok(SearchResult {
                                    distance: Distance::Finite(depth),
                                    trace: Some(trace),
                                    states_visited: states.len(),
                                });
                            }
                            next.push(nid);
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(SearchResult {
        distance: Distance::Infinite,
        trace: None,
        states_visited: states.len(),
    })
}

/// Replays quotient steps on the concrete start, always moving the
/// lowest-index good of the named class.
fn lift_trace(
    start: &Allocation,
    classes: &[Vec<usize>],
    parent: &[(u32, [usize; 4])],
    mut id: u32,
) -> ExchangeTrace {
    let mut steps = Vec::new();
    while id != 0 {
        let (p, s) = parent[id as usize];
        steps.push(s);
        id = p;
    }
    steps.reverse();
    let mut owners = start.owners();
    steps
        .into_iter()
        .map(|[a, b, ca, cb]| {
            let ga = *classes[ca]
                .iter()
                .find(|&&g| owners[g] == a)
                .expect("class held by a");
            let gb = *classes[cb]
                .iter()
                .find(|&&g| owners[g] == b)
                .expect("class held by b");
            owners[ga] = b;
            owners[gb] = a;
            ExchangeStep::new(a, b, ga, gb)
        })
        .collect()
}

/// Whether an exchange strictly benefits both participants.
pub fn is_beneficial<U: Utility>(inst: &Instance<U>, step: &ExchangeStep) -> bool {
    inst.value(step.agent_a, step.good_b) > inst.value(step.agent_a, step.good_a)
        && inst.value(step.agent_b, step.good_a) > inst.value(step.agent_b, step.good_b)
}

/// Outcome of the beneficial-exchange search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeneficialResult {
    pub reachable: bool,
    pub trace: Option<ExchangeTrace>,
    pub states_visited: usize,
}

/// Whether an EF1 allocation is reachable from `start` using only exchanges
/// that strictly benefit both agents.
///
/// Each beneficial exchange raises the sum of own-bundle utilities, so the
/// state graph is acyclic and a state seen once without success never
/// succeeds later.
pub fn beneficial_reachable_ef1<U: Utility>(
    inst: &Instance<U>,
    start: &Allocation,
    budget: OracleBudget,
) -> Result<BeneficialResult> {
    start.check_for(inst)?;
    let n = inst.num_agents();
    let mut search = Beneficial {
        inst,
        n,
        budget,
        failed: HashSet::new(),
        scratch: Ef1Scratch::new(n),
        path: Vec::new(),
        visited: 0,
    };
    let mut owners: Vec<u8> = owners_key(start)?.into_vec();
    let reachable = search.dfs(&mut owners)?;
    Ok(BeneficialResult {
        reachable,
        trace: reachable.then(|| search.path.clone()),
        states_visited: search.visited,
    })
}

struct Beneficial<'a, U> {
    inst: &'a Instance<U>,
    n: usize,
    budget: OracleBudget,
    failed: HashSet<Box<[u8]>>,
    scratch: Ef1Scratch<U>,
    path: ExchangeTrace,
    visited: usize,
}

impl<U: Utility> Beneficial<'_, U> {
    fn dfs(&mut self, owners: &mut Vec<u8>) -> Result<bool> {
        self.visited += 1;
        self.budget.check(self.visited)?;
        if self.scratch.is_ef1(self.inst, owners) {
            return Ok(true);
        }
        let m = owners.len();
        for a in 0..self.n {
            for b in a + 1..self.n {
                for ga in 0..m {
                    if owners[ga] as usize != a {
                        continue;
                    }
                    for gb in 0..m {
                        if owners[gb] as usize != b {
                            continue;
                        }
                        let step = ExchangeStep::new(a, b, ga, gb);
                        if !is_beneficial(self.inst, &step) {
                            continue;
                        }
                        owners[ga] = b as u8;
                        owners[gb] = a as u8;
                        if !self.failed.contains(owners.as_slice()) {
                            self.path.push(step);
                            if self.dfs(owners)? {
                                return Ok(true);
                            }
                            self.path.pop();
                            self.failed.insert(owners.clone().into_boxed_slice());
                        }
                        owners[ga] = a as u8;
                        owners[gb] = b as u8;
                    }
                }
            }
        }
        Ok(false)
    }
}
