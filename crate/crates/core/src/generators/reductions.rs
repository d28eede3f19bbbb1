//! The hardness constructions, emitted exactly as built in their proofs.

use crate::error::{Error, Result};
use crate::model::{Allocation, Instance, SizeVector};

use super::source::SourceProblem;
use super::{ReducedInstance, Reduction};

fn incompatible(source: &SourceProblem, target: Reduction) -> Error {
    Error::IncompatibleReduction {
        source_tag: source.tag().into(),
        target: target.tag().into(),
    }
}

fn bmp(source: &SourceProblem, target: Reduction) -> Result<(usize, usize, u64, &[u64])> {
    match source {
        SourceProblem::BalancedMultiPartition { p, q, k, values } => {
            source.validate()?;
            Ok((*p, *q, *k, values))
        }
        _ => Err(incompatible(source, target)),
    }
}

fn two_part(source: &SourceProblem, target: Reduction) -> Result<(usize, u64, &[u64])> {
    let (p, q, k, x) = bmp(source, target)?;
    if p != 2 {
        return Err(Error::MalformedSource(format!(
            "{target} needs p = 2, got {p}"
        )));
    }
    if q < 2 {
        return Err(Error::MalformedSource(format!(
            "{target} needs q >= 2, got {q}"
        )));
    }
    Ok((q, k, x))
}

/// Rows of the two-agent instance over `Y = X + {2K, 0}` padded with
/// `0, 0, 2K, 2K`; agent 1 adds `4K` to every good.
fn two_agent_rows(k: u64, x: &[u64]) -> [Vec<u64>; 2] {
    let mut u2 = x.to_vec();
    u2.extend([2 * k, 0, 0, 0, 2 * k, 2 * k]);
    let u1 = u2.iter().map(|&v| v + 4 * k).collect();
    [u1, u2]
}

pub(super) fn two_agent_general(source: &SourceProblem) -> Result<ReducedInstance> {
    let target = Reduction::TwoAgentGeneral;
    let (q, k, x) = two_part(source, target)?;
    let [u1, u2] = two_agent_rows(k, x);
    Ok(ReducedInstance {
        target,
        instance: Instance::new(vec![u1, u2])?,
        size_vector: SizeVector(vec![q + 2, q + 4]),
        initial_allocation: None,
        budget_k: None,
    })
}

pub(super) fn identical_constant(source: &SourceProblem, n: usize) -> Result<ReducedInstance> {
    let target = Reduction::IdenticalConstant;
    let (p, q, k, x) = bmp(source, target)?;
    if p != 2 {
        return Err(Error::MalformedSource(format!(
            "{target} needs p = 2, got {p}"
        )));
    }
    if n < 3 {
        return Err(Error::InvalidInstance(format!(
            "{target} needs n >= 3, got {n}"
        )));
    }
    let mut row = x.to_vec();
    row.extend(std::iter::repeat_n((q as u64 + 1) * k, n));
    let mut sizes = vec![q + 1, q + 1];
    sizes.resize(n, 1);
    Ok(ReducedInstance {
        target,
        instance: Instance::identical(n, row)?,
        size_vector: SizeVector(sizes),
        initial_allocation: None,
        budget_k: None,
    })
}

pub(super) fn identical_general(source: &SourceProblem) -> Result<ReducedInstance> {
    let target = Reduction::IdenticalGeneral;
    let SourceProblem::ThreePartition { q, k, values } = source else {
        return Err(incompatible(source, target));
    };
    source.validate()?;
    // every utility scaled by 5 so the six fillers are worth K instead of K/5
    let mut row: Vec<u64> = values.iter().map(|&x| 5 * x).collect();
    row.extend([*k; 6]);
    let mut sizes = vec![3; *q];
    sizes.push(6);
    Ok(ReducedInstance {
        target,
        instance: Instance::identical(q + 1, row)?,
        size_vector: SizeVector(sizes),
        initial_allocation: None,
        budget_k: None,
    })
}

pub(super) fn binary_general(source: &SourceProblem) -> Result<ReducedInstance> {
    let target = Reduction::BinaryGeneral;
    let SourceProblem::GraphColoring {
        vertices,
        edges,
        colors,
    } = source
    else {
        return Err(incompatible(source, target));
    };
    source.validate()?;
    let m = colors * vertices;
    let mut rows = Vec::with_capacity(edges.len() + colors);
    for &[a, b] in edges {
        let mut row = vec![0; m];
        row[a] = 1;
        row[b] = 1;
        rows.push(row);
    }
    rows.extend(std::iter::repeat_n(vec![0; m], *colors));
    let mut sizes = vec![0; edges.len()];
    sizes.resize(edges.len() + colors, *vertices);
    Ok(ReducedInstance {
        target,
        instance: Instance::new(rows)?,
        size_vector: SizeVector(sizes),
        initial_allocation: None,
        budget_k: None,
    })
}

pub(super) fn optimal_two_agent(source: &SourceProblem) -> Result<ReducedInstance> {
    let target = Reduction::OptimalTwoAgent;
    let (q, k, x) = two_part(source, target)?;
    let [mut u1, mut u2] = two_agent_rows(k, x);
    let half = u1.len();
    u1.resize(2 * half, 0);
    u2.resize(2 * half, 0);
    let start = Allocation::new(
        vec![(half..2 * half).collect(), (0..half).collect()],
        2 * half,
    )?;
    Ok(ReducedInstance {
        target,
        instance: Instance::new(vec![u1, u2])?,
        size_vector: start.size_vector(),
        initial_allocation: Some(start),
        budget_k: Some(q as u64 + 2),
    })
}

pub(super) fn optimal_identical(source: &SourceProblem) -> Result<ReducedInstance> {
    let target = Reduction::OptimalIdentical;
    let (p, q, k, x) = bmp(source, target)?;
    let n = p + 1;
    let s = p * q + q + 2;
    let mut row = x.to_vec();
    row.extend(std::iter::repeat_n(k, q + 2));
    row.resize(n * s, 0);
    // the last agent holds every valuable good, the rest split the zeros
    let mut bundles: Vec<Vec<usize>> = (0..p)
        .map(|i| ((i + 1) * s..(i + 2) * s).collect())
        .collect();
    bundles.push((0..s).collect());
    let start = Allocation::new(bundles, n * s)?;
    Ok(ReducedInstance {
        target,
        instance: Instance::identical(n, row)?,
        size_vector: start.size_vector(),
        initial_allocation: Some(start),
        budget_k: Some((p * q) as u64),
    })
}

pub(super) fn optimal_binary(source: &SourceProblem) -> Result<ReducedInstance> {
    let target = Reduction::OptimalBinary;
    let SourceProblem::X3c { elements, sets } = source else {
        return Err(incompatible(source, target));
    };
    source.validate()?;
    let p = sets.len();
    let mut hits = vec![0usize; *elements];
    sets.iter().flatten().for_each(|&x| hits[x] += 1);
    if let Some(x) = hits.iter().position(|&h| h < 2) {
        return Err(Error::MalformedSource(format!(
            "element {x} lies in fewer than two sets"
        )));
    }
    let n = elements + 1;
    let m = n * p;
    // good (i, j) is i * p + j; the special agent's goods h_j come last
    let h = |j: usize| elements * p + j;
    let mut rows = vec![vec![0u64; m]; n];
    for (i, row) in rows.iter_mut().take(*elements).enumerate() {
        for j in 0..hits[i] - 2 {
            row[i * p + j] = 1;
        }
        for (j, set) in sets.iter().enumerate() {
            if set.contains(&i) {
                row[h(j)] = 1;
            }
        }
    }
    let start = Allocation::new((0..n).map(|i| (i * p..(i + 1) * p).collect()).collect(), m)?;
    Ok(ReducedInstance {
        target,
        instance: Instance::new(rows)?,
        size_vector: start.size_vector(),
        initial_allocation: Some(start),
        budget_k: Some((elements / 3) as u64),
    })
}

pub(super) fn beneficial(source: &SourceProblem) -> Result<ReducedInstance> {
    let target = Reduction::Beneficial;
    let SourceProblem::MinKCoverage {
        elements: q,
        sets,
        k,
        l,
    } = source
    else {
        return Err(incompatible(source, target));
    };
    source.validate()?;
    let (q, k, p, r) = (*q, *k, sets.len(), sets.len() - l);
    // agent groups a1 (q), a2 (k), a3 (p), a4 (p - l), laid out in that order
    let a1 = |i: usize| i;
    let a2 = |i: usize| q + i;
    let a3 = |i: usize| q + k + i;
    let a4 = |i: usize| q + k + p + i;
    let n = q + k + p + r;
    let g0 = |agent: usize| 2 * agent;
    let g1 = |agent: usize| 2 * agent + 1;
    let mut rows = vec![vec![0u64; 2 * n]; n];
    for i in 0..q {
        for j in 0..k {
            rows[a1(i)][g1(a2(j))] = 1;
        }
        for (j, set) in sets.iter().enumerate() {
            if set.contains(&i) {
                rows[a1(i)][g0(a3(j))] = 1;
                rows[a1(i)][g1(a3(j))] = 1;
            }
        }
    }
    for i in 0..k {
        for j in 0..q {
            rows[a2(i)][g1(a1(j))] = 1;
        }
    }
    for i in 0..p {
        for j in 0..r {
            rows[a3(i)][g1(a4(j))] = 1;
        }
    }
    for i in 0..r {
        for j in 0..p {
            rows[a4(i)][g1(a3(j))] = 1;
        }
    }
    let start = Allocation::new((0..n).map(|t| vec![g0(t), g1(t)]).collect(), 2 * n)?;
    Ok(ReducedInstance {
        target,
        instance: Instance::new(rows)?,
        size_vector: start.size_vector(),
        initial_allocation: Some(start),
        budget_k: None,
    })
}
