//! Tiny source instances for every reduction, with both answers, small
//! enough for the brute-force oracles.

use super::source::{gen_balanced_multi_partition, SourceProblem};
use super::Reduction;

fn partition(w: &[u64], p: usize) -> SourceProblem {
    gen_balanced_multi_partition(&SourceProblem::PartitionEq { values: w.to_vec() }, p)
        .expect("fixture partitions are well formed")
}

fn three(k: u64, values: &[u64]) -> SourceProblem {
    SourceProblem::ThreePartition {
        q: values.len() / 3,
        k,
        values: values.to_vec(),
    }
}

fn graph(vertices: usize, edges: &[[usize; 2]], colors: usize) -> SourceProblem {
    SourceProblem::GraphColoring {
        vertices,
        edges: edges.to_vec(),
        colors,
    }
}

fn x3c(elements: usize, sets: &[[usize; 3]]) -> SourceProblem {
    SourceProblem::X3c {
        elements,
        sets: sets.to_vec(),
    }
}

fn cover(elements: usize, sets: &[&[usize]], k: usize, l: usize) -> SourceProblem {
    SourceProblem::MinKCoverage {
        elements,
        sets: sets.iter().map(|s| s.to_vec()).collect(),
        k,
        l,
    }
}

/// Equal-cardinality partition instances: two solvable, two not.
pub const PARTITIONS: [&[u64]; 4] = [&[1, 3, 2, 2], &[2, 2, 2, 2], &[1, 1, 2, 4], &[1, 1, 1, 3]];

/// Source fixtures for `target`.
pub fn fixture_sources(target: Reduction) -> Vec<SourceProblem> {
    let k3 = [[0, 1], [1, 2], [0, 2]];
    let k4 = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];
    let c5 = [[0, 1], [1, 2], [2, 3], [3, 4], [0, 4]];
    match target {
        Reduction::TwoAgentGeneral
        | Reduction::IdenticalConstant
        | Reduction::OptimalTwoAgent
        | Reduction::OptimalIdentical => PARTITIONS.iter().map(|w| partition(w, 2)).collect(),
        Reduction::IdenticalGeneral => vec![
            three(20, &[6, 7, 7]),
            three(20, &[6, 6, 8, 6, 7, 7]),
            three(24, &[7, 7, 7, 7, 9, 11]),
            three(24, &[7, 7, 7, 8, 8, 11]),
        ],
        Reduction::BinaryGeneral => vec![
            graph(3, &k3, 3),
            graph(3, &k3[..2], 2),
            graph(3, &k3, 2),
            graph(5, &c5, 2),
            graph(4, &k4, 3),
        ],
        Reduction::OptimalBinary => vec![
            x3c(3, &[[0, 1, 2], [0, 1, 2]]),
            x3c(6, &[[0, 1, 2], [3, 4, 5], [0, 1, 3], [2, 4, 5]]),
            x3c(6, &[[0, 1, 2], [0, 3, 4], [1, 3, 5], [2, 4, 5]]),
            x3c(6, &[[0, 1, 3], [0, 2, 4], [1, 2, 5], [3, 4, 5]]),
        ],
        Reduction::Beneficial => vec![
            cover(2, &[&[0], &[1]], 1, 1),
            cover(2, &[&[0, 1], &[0, 1]], 1, 1),
            cover(3, &[&[0, 1], &[1, 2], &[0, 2]], 2, 1),
            cover(3, &[&[0, 1], &[1, 2], &[0, 2]], 2, 2),
            cover(3, &[&[0], &[0, 1], &[1, 2]], 2, 2),
            cover(4, &[&[0, 1], &[2, 3], &[1, 2]], 2, 2),
        ],
    }
}
