//! Minimum number of exchanges to an EF1 allocation, and exact exchange
//! distance between two allocations.

use std::collections::{BTreeMap, HashMap};
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::model::{
    apply_exchange_in_place, is_ef1, is_ef1_pair, Allocation, Distance, ExchangeStep,
    ExchangeTrace, Instance, UtilityClass,
};
use crate::oracle::{min_exchanges_bfs, min_exchanges_bfs_typed, OracleBudget};
use crate::reformability::{
    for_each_composition, for_each_ef1_class, reformable_identical_binary,
    reformable_two_identical, SolveOptions, TypeCountMatrix,
};
use crate::scalar::Utility;

/// Largest `n` routed to the binary movement enumeration.
pub const MAX_AGENTS_BINARY_MOVES: usize = 3;

/// Agent multigraph with `weight(i, j)` parallel edges, one per good that
/// agent `i` holds now and agent `j` holds in the target.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExchangeGraph {
    n: usize,
    w: Vec<usize>,
}

impl ExchangeGraph {
    pub fn new(start: &Allocation, target: &Allocation) -> Result<Self> {
        check_pair(start, target)?;
        let n = start.num_agents();
        let dest = target.owners();
        let mut w = vec![0; n * n];
        for (i, bundle) in start.bundles().iter().enumerate() {
            for &g in bundle {
                w[i * n + dest[g]] += 1;
            }
        }
        Ok(ExchangeGraph { n, w })
    }

    /// Graph from a row-major `n x n` weight matrix.
    pub fn from_weights(n: usize, w: Vec<usize>) -> Self {
        assert_eq!(w.len(), n * n);
        ExchangeGraph { n, w }
    }

    pub fn num_agents(&self) -> usize {
        self.n
    }

    pub fn weight(&self, i: usize, j: usize) -> usize {
        self.w[i * self.n + j]
    }

    pub fn num_edges(&self) -> usize {
        self.w.iter().sum()
    }

    /// In-degree equals out-degree everywhere.
    pub fn is_balanced(&self) -> bool {
        let n = self.n;
        (0..n).all(|v| {
            let out: usize = (0..n).map(|j| self.w[v * n + j]).sum();
            let inn: usize = (0..n).map(|i| self.w[i * n + v]).sum();
            out == inn
        })
    }

    /// Maximum number of circuits in a partition of the edges.
    pub fn max_circuits(&self) -> usize {
        let loops: usize = (0..self.n).map(|i| self.weight(i, i)).sum();
        let mut packer = CyclePacker::new(self);
        loops + packer.best(&mut packer.start.clone())
    }

    /// One maximum circuit partition of the non-loop edges, as agent cycles.
    pub fn cycle_decomposition(&self) -> Vec<Vec<usize>> {
        let mut packer = CyclePacker::new(self);
        let mut w = packer.start.clone();
        let mut cycles = Vec::new();
        loop {
            let target = packer.best(&mut w);
            if target == 0 {
                break;
            }
            let (i, j) = packer.first_edge(&w).expect("edges remain");
            let mut chosen = None;
            for cyc in packer.cycles_through(&w, i, j) {
                packer.apply(&mut w, &cyc, false);
                let rest = packer.best(&mut w);
                packer.apply(&mut w, &cyc, true);
                if rest + 1 == target {
                    chosen = Some(cyc);
                    break;
                }
            }
            let cyc = chosen.expect("an optimal cycle exists");
            packer.apply(&mut w, &cyc, false);
            cycles.push(cyc);
        }
        cycles
    }
}

/// Exact circuit packing on a balanced multigraph without loops.
///
/// Any circuit splits into simple cycles, so a maximum partition uses simple
/// cycles only. The lexicographically first edge lies on some cycle of every
/// partition; branching over the simple cycles through it is exhaustive.
struct CyclePacker {
    n: usize,
    start: Vec<usize>,
    memo: HashMap<Vec<usize>, usize>,
}

impl CyclePacker {
    fn new(g: &ExchangeGraph) -> Self {
        let n = g.n;
        let mut start = g.w.clone();
        for i in 0..n {
            start[i * n + i] = 0;
        }
        CyclePacker {
            n,
            start,
            memo: HashMap::new(),
        }
    }

    fn first_edge(&self, w: &[usize]) -> Option<(usize, usize)> {
        let n = self.n;
        (0..n * n).find(|&k| w[k] > 0).map(|k| (k / n, k % n))
    }

    /// Simple cycles `[i, j, ...]` using edge `(i, j)`, in lexicographic order.
    fn cycles_through(&self, w: &[usize], i: usize, j: usize) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut out = Vec::new();
        let mut path = vec![i, j];
        let mut on_path = vec![false; n];
        on_path[i] = true;
        on_path[j] = true;
        fn extend(
            n: usize,
            w: &[usize],
            path: &mut Vec<usize>,
            on_path: &mut [bool],
            out: &mut Vec<Vec<usize>>,
        ) {
            let last = *path.last().expect("non-empty");
            let first = path[0];
            for v in 0..n {
                if w[last * n + v] == 0 {
                    continue;
                }
                if v == first {
                    out.push(path.clone());
                } else if !on_path[v] {
                    on_path[v] = true;
                    path.push(v);
                    extend(n, w, path, on_path, out);
                    path.pop();
                    on_path[v] = false;
                }
            }
        }
        extend(n, w, &mut path, &mut on_path, &mut out);
        out
    }

    fn apply(&self, w: &mut [usize], cyc: &[usize], restore: bool) {
        let n = self.n;
        for k in 0..cyc.len() {
            let e = cyc[k] * n + cyc[(k + 1) % cyc.len()];
            if restore {
                w[e] += 1;
            } else {
                w[e] -= 1;
            }
        }
    }

    fn best(&mut self, w: &mut Vec<usize>) -> usize {
        let Some((i, j)) = self.first_edge(w) else {
            return 0;
        };
        if let Some(&v) = self.memo.get(w.as_slice()) {
            return v;
        }
        let ceiling = w.iter().sum::<usize>() / 2;
        let mut best = 0;
        for cyc in self.cycles_through(w, i, j) {
            self.apply(w, &cyc, false);
            let r = 1 + self.best(w);
            self.apply(w, &cyc, true);
            best = best.max(r);
            if best == ceiling {
                break;
            }
        }
        self.memo.insert(w.clone(), best);
        best
    }
}

fn check_pair(start: &Allocation, target: &Allocation) -> Result<()> {
    if start.num_agents() != target.num_agents() || start.num_goods() != target.num_goods() {
        return Err(Error::InvalidAllocation(
            "allocations are over different agents or goods".into(),
        ));
    }
    Ok(())
}

/// `m - c*`, or `Infinite` when the size vectors differ.
pub fn exchange_distance_exact(start: &Allocation, target: &Allocation) -> Result<Distance> {
    check_pair(start, target)?;
    if start.size_vector() != target.size_vector() {
        return Ok(Distance::Infinite);
    }
    let g = ExchangeGraph::new(start, target)?;
    Ok(Distance::Finite(
        (start.num_goods() - g.max_circuits()) as u64,
    ))
}

/// A shortest exchange sequence from `start` to `target`.
///
/// Each cycle `a_1 -> ... -> a_L` of a maximum circuit partition is realised
/// by `L - 1` exchanges in which `a_1` trades successively with `a_2 .. a_L`.
pub fn exchange_plan(start: &Allocation, target: &Allocation) -> Result<ExchangeTrace> {
    check_pair(start, target)?;
    if start.size_vector() != target.size_vector() {
        return Err(Error::InvalidSizeVector(format!(
            "{} and {} differ",
            start.size_vector(),
            target.size_vector()
        )));
    }
    let n = start.num_agents();
    let g = ExchangeGraph::new(start, target)?;
    let dest = target.owners();
    // unused goods per (holder, destination), ascending
    let mut pool: Vec<Vec<usize>> = vec![Vec::new(); n * n];
    for (i, bundle) in start.bundles().iter().enumerate() {
        for &g in bundle {
            if dest[g] != i {
                pool[i * n + dest[g]].push(g);
            }
        }
    }
    for p in &mut pool {
        p.reverse();
    }
    let mut trace = Vec::new();
    for cyc in g.cycle_decomposition() {
        let len = cyc.len();
        let goods: Vec<usize> = (0..len)
            .map(|k| {
                let (a, b) = (cyc[k], cyc[(k + 1) % len]);
                pool[a * n + b].pop().expect("edge has a good")
            })
            .collect();
        for k in 1..len {
            trace.push(ExchangeStep::new(cyc[0], cyc[k], goods[k - 1], goods[k]));
        }
    }
    Ok(trace)
}

fn wrong_class<U: Utility>(expected: &str, inst: &Instance<U>) -> Error {
    Error::WrongClass {
        expected: expected.to_string(),
        found: format!("{} with {} agents", inst.class(), inst.num_agents()),
    }
}

/// Two agents with identical utilities: the richer agent repeatedly hands
/// its most valuable good to the poorer agent in exchange for the poorer
/// agent's least valuable good.
pub fn optimal_two_identical<U: Utility>(
    inst: &Instance<U>,
    start: &Allocation,
) -> Result<(u64, ExchangeTrace)> {
    if inst.num_agents() != 2 || !inst.is_identical() {
        return Err(wrong_class("two agents with identical utilities", inst));
    }
    start.check_for(inst)?;
    if !reformable_two_identical(inst, &start.size_vector())? {
        return Err(Error::Unreformable);
    }
    let u = |g: usize| inst.value(0, g);
    let (poor, rich) =
        if inst.bundle_value(0, start.bundle(0)) <= inst.bundle_value(0, start.bundle(1)) {
            (0, 1)
        } else {
            (1, 0)
        };
    let mut cur = start.clone();
    let mut trace = Vec::new();
    while !is_ef1_pair(inst, &cur, poor, rich)? {
        // first maximum / first minimum by index
        let give = *cur
            .bundle(rich)
            .iter()
            .rev()
            .max_by_key(|&&g| u(g))
            .expect("the envied bundle is non-empty");
        let take = *cur
            .bundle(poor)
            .iter()
            .min_by_key(|&&g| u(g))
            .expect("a reformable poorer agent holds a good");
        let step = ExchangeStep::new(rich, poor, give, take);
        apply_exchange_in_place(&mut cur, &step)?;
        trace.push(step);
        assert!(
            trace.len() <= inst.num_goods(),
            "greedy failed to terminate"
        );
    }
    Ok((trace.len() as u64, trace))
}

/// Identical binary utilities: `max{c_0, c_1}` with `F = floor(m_1 / n)`.
///
/// The witness repeatedly swaps a valuable good of a richest agent with a
/// non-valuable good of a poorest agent among those holding one.
pub fn optimal_identical_binary<U: Utility>(
    inst: &Instance<U>,
    start: &Allocation,
) -> Result<(u64, ExchangeTrace)> {
    if inst.class() != UtilityClass::IdenticalBinary {
        return Err(wrong_class("identical binary utilities", inst));
    }
    start.check_for(inst)?;
    if !reformable_identical_binary(inst, &start.size_vector())? {
        return Err(Error::Unreformable);
    }
    let n = inst.num_agents();
    let valuable = |g: usize| !inst.value(0, g).is_zero();
    let m1 = (0..inst.num_goods()).filter(|&g| valuable(g)).count();
    let f = m1 / n;
    let util: Vec<usize> = start
        .bundles()
        .iter()
        .map(|b| b.iter().filter(|&&g| valuable(g)).count())
        .collect();
    let c0: usize = util.iter().filter(|&&x| x <= f).map(|&x| f - x).sum();
    let c1: usize = util.iter().filter(|&&x| x > f).map(|&x| x - (f + 1)).sum();
    let count = c0.max(c1);

    let mut cur = start.clone();
    let mut trace = Vec::new();
    loop {
        let u: Vec<usize> = cur
            .bundles()
            .iter()
            .map(|b| b.iter().filter(|&&g| valuable(g)).count())
            .collect();
        let hi = *u.iter().max().expect("n >= 2");
        let lo = *u.iter().min().expect("n >= 2");
        if hi <= lo + 1 {
            break;
        }
        let rich = u.iter().position(|&x| x == hi).expect("max exists");
        let poor = (0..n)
            .filter(|&j| cur.bundle(j).iter().any(|&g| !valuable(g)))
            .min_by_key(|&j| u[j])
            .expect("reformable allocation has a receiver");
        let give = *cur
            .bundle(rich)
            .iter()
            .find(|&&g| valuable(g))
            .expect("rich holds one");
        let take = *cur
            .bundle(poor)
            .iter()
            .find(|&&g| !valuable(g))
            .expect("poor holds one");
        let step = ExchangeStep::new(rich, poor, give, take);
        apply_exchange_in_place(&mut cur, &step)?;
        trace.push(step);
        assert!(
            trace.len() <= inst.num_goods(),
            "witness failed to terminate"
        );
    }
    debug_assert_eq!(trace.len(), count);
    Ok((count as u64, trace))
}

/// A chosen EF1 target and the exchanges reaching it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryPlan {
    pub count: u64,
    pub target: Allocation,
    pub trace: ExchangeTrace,
}

/// Binary utilities, few agents: minimise `m - c*` over every EF1 class and
/// every way of moving goods of each type into it. `None` when no EF1 class
/// exists. Each distinct movement matrix counts against the budget.
pub fn optimal_binary_const<U: Utility>(
    inst: &Instance<U>,
    start: &Allocation,
    budget: OracleBudget,
) -> Result<Option<BinaryPlan>> {
    if !inst.is_binary() {
        return Err(wrong_class("binary utilities", inst));
    }
    start.check_for(inst)?;
    let n = inst.num_agents();
    let m = inst.num_goods();
    let held = TypeCountMatrix::of(inst, start);
    let mut graphs: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut states = 0usize;
    // (count, class, per-type movements)
    let mut best: Option<(usize, TypeCountMatrix, Vec<Vec<usize>>)> = None;
    let mut err = None;
    for_each_ef1_class(inst, &start.size_vector(), budget, |class| {
        // combined weight matrix -> first per-type movements producing it
        let mut layer: BTreeMap<Vec<usize>, Vec<Vec<usize>>> = BTreeMap::new();
        layer.insert(vec![0; n * n], Vec::new());
        for (t, want) in &class.counts {
            let moves = movements(&held.counts[t], want);
            let mut next = BTreeMap::new();
            for (w, hist) in &layer {
                for x in &moves {
                    let sum: Vec<usize> = w.iter().zip(x).map(|(a, b)| a + b).collect();
                    next.entry(sum).or_insert_with(|| {
                        let mut h = hist.clone();
                        h.push(x.clone());
                        h
                    });
                }
            }
            states += next.len();
            if let Err(e) = budget.check(states) {
                err = Some(e);
                return ControlFlow::Break(());
            }
            layer = next;
        }
        for (w, hist) in layer {
            let c = *graphs
                .entry(w.clone())
                .or_insert_with(|| ExchangeGraph::from_weights(n, w).max_circuits());
            let count = m - c;
            if best.as_ref().is_none_or(|(b, _, _)| count < *b) {
                best = Some((count, class.clone(), hist));
            }
        }
        if best.as_ref().is_some_and(|(b, _, _)| *b == 0) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    let Some((count, class, hist)) = best else {
        return Ok(None);
    };
    // realise the movements on concrete goods, lowest index first
    let mut owners = start.owners();
    for ((t, _), x) in class.counts.iter().zip(&hist) {
        for i in 0..n {
            let mine: Vec<usize> = start
                .bundle(i)
                .iter()
                .copied()
                .filter(|&g| inst.good_type(g) == *t)
                .collect();
            let mut it = mine.into_iter();
            for j in 0..n {
                for g in it.by_ref().take(x[i * n + j]) {
                    owners[g] = j;
                }
            }
        }
    }
    let target = Allocation::from_owners(&owners, n);
    let trace = exchange_plan(start, &target)?;
    debug_assert_eq!(trace.len(), count);
    Ok(Some(BinaryPlan {
        count: count as u64,
        target,
        trace,
    }))
}

/// Every `n x n` matrix with row sums `have` and column sums `want`,
/// rows in agent order, each row's composition lexicographic.
fn movements(have: &[usize], want: &[usize]) -> Vec<Vec<usize>> {
    let n = have.len();
    let mut out = Vec::new();
    fn rows(
        i: usize,
        n: usize,
        have: &[usize],
        room: &mut Vec<usize>,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == n {
            if room.iter().all(|&r| r == 0) {
                out.push(cur.clone());
            }
            return;
        }
        let caps = room.clone();
        let _ = for_each_composition::<()>(have[i], &caps, &mut |row| {
            for (r, &x) in room.iter_mut().zip(row) {
                *r -= x;
            }
            cur.extend_from_slice(row);
            rows(i + 1, n, have, room, cur, out);
            cur.truncate(cur.len() - n);
            for (r, &x) in room.iter_mut().zip(row) {
                *r += x;
            }
            ControlFlow::Continue(())
        });
    }
    rows(0, n, have, &mut want.to_vec(), &mut Vec::new(), &mut out);
    out
}

/// Which solver answered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimalMethod {
    TwoIdentical,
    IdenticalBinary,
    BinaryMoves,
    Bfs,
}

impl OptimalMethod {
    pub fn tag(self) -> &'static str {
        match self {
            OptimalMethod::TwoIdentical => "two-identical-greedy",
            OptimalMethod::IdenticalBinary => "identical-binary-formula",
            OptimalMethod::BinaryMoves => "binary-movements",
            OptimalMethod::Bfs => "bfs",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalResult {
    pub distance: Distance,
    /// A shortest sequence of exchanges, when the distance is finite.
    pub trace: Option<ExchangeTrace>,
    pub method: OptimalMethod,
}

/// Minimum number of exchanges from `start` to an EF1 allocation, with the
/// cheapest applicable method.
pub fn optimal_exchanges<U: Utility>(
    inst: &Instance<U>,
    start: &Allocation,
    opts: &SolveOptions,
) -> Result<OptimalResult> {
    start.check_for(inst)?;
    let n = inst.num_agents();
    let finite = |(k, trace): (u64, ExchangeTrace), method| OptimalResult {
        distance: Distance::Finite(k),
        trace: Some(trace),
        method,
    };
    let infinite = |method| OptimalResult {
        distance: Distance::Infinite,
        trace: None,
        method,
    };
    let bfs = |typed: bool| -> Result<OptimalResult> {
        let r = if typed {
            min_exchanges_bfs_typed(inst, start, opts.budget)?
        } else {
            min_exchanges_bfs(inst, start, opts.budget)?
        };
        Ok(OptimalResult {
            distance: r.distance,
            trace: r.trace,
            method: OptimalMethod::Bfs,
        })
    };
    if opts.force_oracle {
        return bfs(false);
    }
    if is_ef1(inst, start) {
        let method = match inst.class() {
            c if c.is_identical() && n == 2 => OptimalMethod::TwoIdentical,
            UtilityClass::IdenticalBinary => OptimalMethod::IdenticalBinary,
            c if c.is_binary() && n <= MAX_AGENTS_BINARY_MOVES => OptimalMethod::BinaryMoves,
            _ => OptimalMethod::Bfs,
        };
        return Ok(finite((0, Vec::new()), method));
    }
    let class = inst.class();
    if class.is_identical() && n == 2 {
        return match optimal_two_identical(inst, start) {
            Ok(r) => Ok(finite(r, OptimalMethod::TwoIdentical)),
            Err(Error::Unreformable) => Ok(infinite(OptimalMethod::TwoIdentical)),
            Err(e) => Err(e),
        };
    }
    if class == UtilityClass::IdenticalBinary {
        return match optimal_identical_binary(inst, start) {
            Ok(r) => Ok(finite(r, OptimalMethod::IdenticalBinary)),
            Err(Error::Unreformable) => Ok(infinite(OptimalMethod::IdenticalBinary)),
            Err(e) => Err(e),
        };
    }
    if class.is_binary() && n <= MAX_AGENTS_BINARY_MOVES {
        match optimal_binary_const(inst, start, opts.budget) {
            Ok(Some(p)) => return Ok(finite((p.count, p.trace), OptimalMethod::BinaryMoves)),
            Ok(None) => return Ok(infinite(OptimalMethod::BinaryMoves)),
            Err(Error::BudgetExceeded { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    bfs(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::replay;
    use crate::oracle::exchange_distance_bfs;

    fn alloc(b: &[&[usize]], m: usize) -> Allocation {
        Allocation::new(b.iter().map(|x| x.to_vec()).collect(), m).unwrap()
    }

    fn ident(row: &[u64], n: usize) -> Instance<u64> {
        Instance::identical(n, row.to_vec()).unwrap()
    }

    #[test]
    fn distance_examples() {
        let a = alloc(&[&[0], &[1], &[2]], 3);
        assert_eq!(
            exchange_distance_exact(&a, &a).unwrap(),
            Distance::Finite(0)
        );
        let crossed = alloc(&[&[1], &[0], &[2]], 3);
        assert_eq!(
            exchange_distance_exact(&a, &crossed).unwrap(),
            Distance::Finite(1)
        );
        let rotated = alloc(&[&[1], &[2], &[0]], 3);
        assert_eq!(
            exchange_distance_exact(&a, &rotated).unwrap(),
            Distance::Finite(2)
        );
        let other = alloc(&[&[0, 1], &[2], &[]], 3);
        assert_eq!(
            exchange_distance_exact(&a, &other).unwrap(),
            Distance::Infinite
        );
    }

    #[test]
    fn plan_reaches_target() {
        let a = alloc(&[&[0, 1], &[2, 3], &[4, 5]], 6);
        let b = alloc(&[&[2, 4], &[0, 5], &[1, 3]], 6);
        let plan = exchange_plan(&a, &b).unwrap();
        assert_eq!(replay(&a, &plan).unwrap(), b);
        let bfs = exchange_distance_bfs(&a, &b, OracleBudget::default()).unwrap();
        assert_eq!(Distance::Finite(plan.len() as u64), bfs.distance);
        assert_eq!(exchange_distance_exact(&a, &b).unwrap(), bfs.distance);
    }

    #[test]
    fn circuits_prefer_short_cycles() {
        // two 2-cycles beat one 4-edge circuit through the same vertices
        let g = ExchangeGraph::from_weights(3, vec![0, 1, 1, 1, 0, 0, 1, 0, 0]);
        assert!(g.is_balanced());
        assert_eq!(g.max_circuits(), 2);
        let g = ExchangeGraph::from_weights(3, vec![0, 1, 0, 0, 0, 1, 1, 0, 0]);
        assert_eq!(g.max_circuits(), 1);
    }

    #[test]
    fn two_identical_examples() {
        let inst = ident(&[5, 4, 3, 2, 1, 0], 2);
        let start = alloc(&[&[0, 1, 2], &[3, 4, 5]], 6);
        let (k, trace) = optimal_two_identical(&inst, &start).unwrap();
        assert_eq!(k, 1);
        assert_eq!(trace, vec![ExchangeStep::new(0, 1, 0, 5)]);
        let ef1 = alloc(&[&[0, 4, 5], &[1, 2, 3]], 6);
        assert_eq!(optimal_two_identical(&inst, &ef1).unwrap(), (0, vec![]));
        let flat = ident(&[2, 2, 2, 2], 2);
        assert_eq!(
            optimal_two_identical(&flat, &alloc(&[&[0], &[1, 2, 3]], 4)),
            Err(Error::Unreformable)
        );
    }

    #[test]
    fn identical_binary_examples() {
        let inst = ident(&[1, 1, 1, 1, 0, 0], 2);
        let start = alloc(&[&[0, 1, 2], &[3, 4, 5]], 6);
        let (k, trace) = optimal_identical_binary(&inst, &start).unwrap();
        assert_eq!(k, 1);
        assert!(is_ef1(&inst, &replay(&start, &trace).unwrap()));

        let inst = ident(&[1, 1, 1, 0, 0, 0], 3);
        let start = alloc(&[&[0, 1], &[2, 3], &[4, 5]], 6);
        assert_eq!(optimal_identical_binary(&inst, &start).unwrap().0, 1);

        let inst = ident(&[1, 0, 1, 0, 1, 0], 3);
        let start = alloc(&[&[0, 1], &[2, 3], &[4, 5]], 6);
        assert_eq!(
            optimal_identical_binary(&inst, &start).unwrap(),
            (0, vec![])
        );
    }

    #[test]
    fn dispatcher_examples() {
        let o = SolveOptions::default();
        let inst = ident(&[5, 4, 3, 2, 1, 0], 2);
        let start = alloc(&[&[0, 1, 2], &[3, 4, 5]], 6);
        let r = optimal_exchanges(&inst, &start, &o).unwrap();
        assert_eq!(r.distance, Distance::Finite(1));
        assert_eq!(r.method, OptimalMethod::TwoIdentical);
        let forced = optimal_exchanges(
            &inst,
            &start,
            &SolveOptions {
                force_oracle: true,
                ..o
            },
        );
        assert_eq!(forced.unwrap().distance, Distance::Finite(1));

        let flat = ident(&[2, 2, 2, 2], 2);
        let r = optimal_exchanges(&flat, &alloc(&[&[0], &[1, 2, 3]], 4), &o).unwrap();
        assert_eq!(r.distance, Distance::Infinite);
        assert!(r.trace.is_none());
    }

    #[test]
    fn binary_moves_matches_bfs_small() {
        let inst = Instance::<u64>::new(vec![
            vec![1, 1, 0, 1, 0],
            vec![0, 1, 1, 1, 0],
            vec![1, 0, 0, 1, 1],
        ])
        .unwrap();
        let start = alloc(&[&[0, 1, 3], &[], &[2, 4]], 5);
        let plan = optimal_binary_const(&inst, &start, OracleBudget::default()).unwrap();
        let bfs = min_exchanges_bfs(&inst, &start, OracleBudget::default()).unwrap();
        match (plan, bfs.distance) {
            (Some(p), Distance::Finite(k)) => {
                assert_eq!(p.count, k);
                assert!(is_ef1(&inst, &replay(&start, &p.trace).unwrap()));
            }
            (None, Distance::Infinite) => {}
            other => panic!("disagreement: {other:?}"),
        }
    }
}
