//! Source problems of the hardness reductions, with brute-force solvers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A decision problem instance that the reductions start from. Elements and
/// vertices are 0-indexed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "kebab-case")]
pub enum SourceProblem {
    /// Split `2q` integers into two halves of `q` integers with equal sums.
    PartitionEq { values: Vec<u64> },
    /// Split `pq` integers, each in `(K, 2K]` and summing to `p(q+1)K`, into
    /// `p` parts of `q` integers with equal sums.
    BalancedMultiPartition {
        p: usize,
        q: usize,
        k: u64,
        values: Vec<u64>,
    },
    /// Split `3q` integers, each strictly between `K/4` and `K/2` and summing
    /// to `qK`, into `q` triples of sum `K`.
    ThreePartition { q: usize, k: u64, values: Vec<u64> },
    /// Proper coloring of a simple graph with `colors` colors.
    GraphColoring {
        vertices: usize,
        edges: Vec<[usize; 2]>,
        colors: usize,
    },
    /// Exact cover of `elements` (a multiple of 3) by `q = elements/3` of the
    /// given triples.
    X3c {
        elements: usize,
        sets: Vec<[usize; 3]>,
    },
    /// Pick `l` of the sets so that their union has at most `k` elements.
    MinKCoverage {
        elements: usize,
        sets: Vec<Vec<usize>>,
        k: usize,
        l: usize,
    },
}

fn malformed<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::MalformedSource(msg.into()))
}

impl SourceProblem {
    pub fn tag(&self) -> &'static str {
        match self {
            SourceProblem::PartitionEq { .. } => "partition-eq",
            SourceProblem::BalancedMultiPartition { .. } => "balanced-multi-partition",
            SourceProblem::ThreePartition { .. } => "three-partition",
            SourceProblem::GraphColoring { .. } => "graph-coloring",
            SourceProblem::X3c { .. } => "x3c",
            SourceProblem::MinKCoverage { .. } => "min-k-coverage",
        }
    }

    /// Checks the structural constraints of the payload.
    pub fn validate(&self) -> Result<()> {
        match self {
            SourceProblem::PartitionEq { values } => {
                if values.is_empty() || values.len() % 2 != 0 {
                    return malformed("partition-eq needs a positive even number of values");
                }
                Ok(())
            }
            SourceProblem::BalancedMultiPartition { p, q, k, values } => {
                if *p < 2 || *q < 1 || *k < 1 {
                    return malformed("balanced-multi-partition needs p >= 2, q >= 1, K >= 1");
                }
                if values.len() != p * q {
                    return malformed(format!("expected {} values, got {}", p * q, values.len()));
                }
                if let Some(x) = values.iter().find(|&&x| x <= *k || x > 2 * k) {
                    return malformed(format!("value {x} outside ({k}, {}]", 2 * k));
                }
                let sum: u64 = values.iter().sum();
                if sum != (*p as u64) * (*q as u64 + 1) * k {
                    return malformed(format!("values sum to {sum}, not p(q+1)K"));
                }
                Ok(())
            }
            SourceProblem::ThreePartition { q, k, values } => {
                if *q < 1 || values.len() != 3 * q {
                    return malformed("three-partition needs 3q values with q >= 1");
                }
                if let Some(x) = values.iter().find(|&&x| 4 * x <= *k || 2 * x >= *k) {
                    return malformed(format!("value {x} outside (K/4, K/2) for K = {k}"));
                }
                if values.iter().sum::<u64>() != *q as u64 * k {
                    return malformed("three-partition values must sum to qK");
                }
                Ok(())
            }
            SourceProblem::GraphColoring {
                vertices,
                edges,
                colors,
            } => {
                if *colors < 1 {
                    return malformed("need at least one color");
                }
                for (r, &[a, b]) in edges.iter().enumerate() {
                    if a >= *vertices || b >= *vertices {
                        return malformed(format!("edge {r} has an endpoint out of range"));
                    }
                    if a == b {
                        return malformed(format!("edge {r} is a self-loop"));
                    }
                }
                Ok(())
            }
            SourceProblem::X3c { elements, sets } => {
                if *elements == 0 || elements % 3 != 0 {
                    return malformed("x3c needs a positive multiple of 3 elements");
                }
                for (j, set) in sets.iter().enumerate() {
                    if set.iter().any(|&x| x >= *elements) {
                        return malformed(format!("set {j} has an element out of range"));
                    }
                    if set[0] == set[1] || set[0] == set[2] || set[1] == set[2] {
                        return malformed(format!("set {j} repeats an element"));
                    }
                }
                Ok(())
            }
            SourceProblem::MinKCoverage {
                elements,
                sets,
                k,
                l,
            } => {
                if *elements == 0 || sets.is_empty() || *k < 1 || *l < 1 {
                    return malformed("min-k-coverage needs positive q, p, k and l");
                }
                if k > elements || *l > sets.len() {
                    return malformed("min-k-coverage needs k <= q and l <= p");
                }
                for (j, set) in sets.iter().enumerate() {
                    if set.iter().any(|&x| x >= *elements) {
                        return malformed(format!("set {j} has an element out of range"));
                    }
                }
                Ok(())
            }
        }
    }

    /// Answer of the source problem by exhaustive search.
    pub fn solve_bruteforce(&self) -> Result<bool> {
        self.validate()?;
        Ok(match self {
            SourceProblem::PartitionEq { values } => {
                let sum: u64 = values.iter().sum();
                sum.is_multiple_of(2) && equal_parts(values, 2, values.len() / 2, sum / 2)
            }
            SourceProblem::BalancedMultiPartition { p, q, k, values } => {
                equal_parts(values, *p, *q, (*q as u64 + 1) * k)
            }
            SourceProblem::ThreePartition { q, k, values } => equal_parts(values, *q, 3, *k),
            SourceProblem::GraphColoring {
                vertices,
                edges,
                colors,
            } => colorable(*vertices, edges, *colors),
            SourceProblem::X3c { elements, sets } => {
                exact_cover(sets, &mut vec![false; *elements], elements / 3)
            }
            SourceProblem::MinKCoverage {
                elements,
                sets,
                k,
                l,
            } => small_cover(sets, 0, *l, &mut vec![0; *elements], 0, *k),
        })
    }
}

/// Whether `values` splits into `parts` groups of `card` values summing to
/// `target` each.
fn equal_parts(values: &[u64], parts: usize, card: usize, target: u64) -> bool {
    if values.len() != parts * card {
        return false;
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut count = vec![0; parts];
    let mut sum = vec![0; parts];
    fill(&sorted, 0, card, target, &mut count, &mut sum)
}

fn fill(
    vals: &[u64],
    idx: usize,
    card: usize,
    target: u64,
    count: &mut [usize],
    sum: &mut [u64],
) -> bool {
    if idx == vals.len() {
        return sum.iter().all(|&s| s == target);
    }
    for j in 0..count.len() {
        // empty groups are interchangeable
        if count[j] == 0 && count[..j].contains(&0) {
            break;
        }
        if count[j] < card && sum[j] + vals[idx] <= target {
            count[j] += 1;
            sum[j] += vals[idx];
            if fill(vals, idx + 1, card, target, count, sum) {
                return true;
            }
            count[j] -= 1;
            sum[j] -= vals[idx];
        }
    }
    false
}

fn colorable(vertices: usize, edges: &[[usize; 2]], colors: usize) -> bool {
    let mut adj = vec![Vec::new(); vertices];
    for &[a, b] in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    fn go(v: usize, adj: &[Vec<usize>], colors: usize, col: &mut [usize]) -> bool {
        if v == adj.len() {
            return true;
        }
        let used = col[..v].iter().copied().max().map_or(0, |c| c + 1);
        for c in 0..colors.min(used + 1) {
            if adj[v].iter().all(|&w| w >= v || col[w] != c) {
                col[v] = c;
                if go(v + 1, adj, colors, col) {
                    return true;
                }
            }
        }
        false
    }
    go(0, &adj, colors, &mut vec![0; vertices])
}

fn exact_cover(sets: &[[usize; 3]], covered: &mut [bool], left: usize) -> bool {
    let Some(first) = covered.iter().position(|&c| !c) else {
        return left == 0;
    };
    if left == 0 {
        return false;
    }
    for &s in sets {
        if s.contains(&first) && s.iter().all(|&x| !covered[x]) {
            s.iter().for_each(|&x| covered[x] = true);
            if exact_cover(sets, covered, left - 1) {
                return true;
            }
            s.iter().for_each(|&x| covered[x] = false);
        }
    }
    false
}

fn small_cover(
    sets: &[Vec<usize>],
    from: usize,
    left: usize,
    hits: &mut [usize],
    union: usize,
    k: usize,
) -> bool {
    if union > k {
        return false;
    }
    if left == 0 {
        return true;
    }
    for j in from..sets.len() {
        if sets.len() - j < left {
            break;
        }
        let mut added = 0;
        for &x in &sets[j] {
            if hits[x] == 0 {
                added += 1;
            }
            hits[x] += 1;
        }
        if small_cover(sets, j + 1, left - 1, hits, union + added, k) {
            return true;
        }
        for &x in &sets[j] {
            hits[x] -= 1;
        }
    }
    false
}

/// Turns an equal-cardinality partition instance into a balanced
/// multi-partition instance with `p` parts and the same answer.
pub fn gen_balanced_multi_partition(source: &SourceProblem, p: usize) -> Result<SourceProblem> {
    let SourceProblem::PartitionEq { values } = source else {
        return Err(Error::IncompatibleReduction {
            source_tag: source.tag().into(),
            target: "balanced-multi-partition".into(),
        });
    };
    source.validate()?;
    if p < 2 {
        return malformed("p must be at least 2");
    }
    let q = values.len() / 2;
    let total: u64 = values.iter().sum();
    if !total.is_multiple_of(2) {
        return malformed(format!("odd total {total} cannot be halved"));
    }
    let half = total / 2;
    if let Some(w) = values.iter().find(|&&w| w > half) {
        return malformed(format!("value {w} exceeds half the total {half}"));
    }
    let k = half + q as u64;
    let mut padded = values.clone();
    padded.extend(std::iter::repeat_n(half, p - 2));
    padded.resize(p * q, 0);
    let out = SourceProblem::BalancedMultiPartition {
        p,
        q,
        k,
        values: padded.into_iter().map(|w| w + k + 1).collect(),
    };
    out.validate()?;
    Ok(out)
}
