//! Instance factories: the hardness reductions, checked by round-tripping
//! answers through the oracles, and seeded random instances.

mod fixtures;
mod random;
mod reductions;
mod source;

use std::fmt;
use std::str::FromStr;

pub use fixtures::{fixture_sources, PARTITIONS};
pub use random::{random_allocation, random_instance, random_instance_with, seeded_rng, GenRng};
pub use source::{gen_balanced_multi_partition, SourceProblem};

use crate::error::{Error, Result};
use crate::model::{Allocation, Instance, SizeVector};
use crate::oracle::{
    beneficial_reachable_ef1, ef1_within_exchanges, exists_ef1_bruteforce, OracleBudget,
};

/// Target of a reduction, named after the question the reduced instance asks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Reduction {
    /// Reformability, two agents, general utilities.
    TwoAgentGeneral,
    /// Reformability, `n >= 3` agents, identical utilities.
    IdenticalConstant,
    /// Reformability, any number of agents, identical utilities.
    IdenticalGeneral,
    /// Reformability, any number of agents, binary utilities.
    BinaryGeneral,
    /// At most `k` exchanges, two agents, balanced start.
    OptimalTwoAgent,
    /// At most `k` exchanges, `p + 1` agents, identical utilities.
    OptimalIdentical,
    /// At most `k` exchanges, binary utilities, balanced start.
    OptimalBinary,
    /// EF1 reachable by beneficial exchanges only, binary utilities.
    Beneficial,
}

impl Reduction {
    pub const ALL: [Reduction; 8] = [
        Reduction::TwoAgentGeneral,
        Reduction::IdenticalConstant,
        Reduction::IdenticalGeneral,
        Reduction::BinaryGeneral,
        Reduction::OptimalTwoAgent,
        Reduction::OptimalIdentical,
        Reduction::OptimalBinary,
        Reduction::Beneficial,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Reduction::TwoAgentGeneral => "two-agent-general",
            Reduction::IdenticalConstant => "identical-constant",
            Reduction::IdenticalGeneral => "identical-general",
            Reduction::BinaryGeneral => "binary-general",
            Reduction::OptimalTwoAgent => "optimal-two-agent",
            Reduction::OptimalIdentical => "optimal-identical",
            Reduction::OptimalBinary => "optimal-binary",
            Reduction::Beneficial => "beneficial",
        }
    }

    /// Tag of the source problem this reduction starts from.
    pub fn source_tag(self) -> &'static str {
        match self {
            Reduction::TwoAgentGeneral
            | Reduction::IdenticalConstant
            | Reduction::OptimalTwoAgent
            | Reduction::OptimalIdentical => "balanced-multi-partition",
            Reduction::IdenticalGeneral => "three-partition",
            Reduction::BinaryGeneral => "graph-coloring",
            Reduction::OptimalBinary => "x3c",
            Reduction::Beneficial => "min-k-coverage",
        }
    }
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Reduction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Reduction::ALL
            .into_iter()
            .find(|r| r.tag() == s)
            .ok_or_else(|| Error::MalformedSource(format!("unknown reduction `{s}`")))
    }
}

/// Output of [`reduce`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedInstance {
    pub target: Reduction,
    pub instance: Instance<u64>,
    pub size_vector: SizeVector,
    /// Start allocation, for the exchange-counting and beneficial targets.
    pub initial_allocation: Option<Allocation>,
    /// Exchange budget, for the exchange-counting targets.
    pub budget_k: Option<u64>,
}

impl ReducedInstance {
    /// The fair-division answer, computed by the brute-force oracles. It
    /// equals the source answer when the construction is correct.
    pub fn oracle_answer(&self, budget: OracleBudget) -> Result<bool> {
        let start = || {
            self.initial_allocation
                .as_ref()
                .ok_or_else(|| Error::InvalidAllocation("reduction carries no start".into()))
        };
        match self.target {
            Reduction::TwoAgentGeneral
            | Reduction::IdenticalConstant
            | Reduction::IdenticalGeneral
            | Reduction::BinaryGeneral => {
                exists_ef1_bruteforce(&self.instance, &self.size_vector, budget)
            }
            Reduction::OptimalTwoAgent | Reduction::OptimalIdentical | Reduction::OptimalBinary => {
                let k = self.budget_k.unwrap_or(0);
                Ok(ef1_within_exchanges(&self.instance, start()?, k, budget)?.is_some())
            }
            Reduction::Beneficial => {
                Ok(beneficial_reachable_ef1(&self.instance, start()?, budget)?.reachable)
            }
        }
    }
}

/// Builds the fair-division instance of `target` from `source`. The
/// identical-constant target uses three agents; see [`reduce_identical_constant`].
pub fn reduce(source: &SourceProblem, target: Reduction) -> Result<ReducedInstance> {
    match target {
        Reduction::TwoAgentGeneral => reductions::two_agent_general(source),
        Reduction::IdenticalConstant => reductions::identical_constant(source, 3),
        Reduction::IdenticalGeneral => reductions::identical_general(source),
        Reduction::BinaryGeneral => reductions::binary_general(source),
        Reduction::OptimalTwoAgent => reductions::optimal_two_agent(source),
        Reduction::OptimalIdentical => reductions::optimal_identical(source),
        Reduction::OptimalBinary => reductions::optimal_binary(source),
        Reduction::Beneficial => reductions::beneficial(source),
    }
}

/// The identical-constant construction with `n >= 3` agents.
pub fn reduce_identical_constant(source: &SourceProblem, n: usize) -> Result<ReducedInstance> {
    reductions::identical_constant(source, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimal::optimal_exchanges;
    use crate::reformability::{reformable, SolveOptions};

    fn bmp(w: &[u64]) -> SourceProblem {
        gen_balanced_multi_partition(&SourceProblem::PartitionEq { values: w.to_vec() }, 2).unwrap()
    }

    fn round_trip(src: &SourceProblem, target: Reduction) -> (bool, ReducedInstance) {
        let red = reduce(src, target).unwrap();
        let expected = src.solve_bruteforce().unwrap();
        assert_eq!(
            red.oracle_answer(OracleBudget::default()).unwrap(),
            expected,
            "{target} {src:?}"
        );
        assert_eq!(red.size_vector.total(), red.instance.num_goods());
        (expected, red)
    }

    #[test]
    fn two_agent_recipe() {
        let red = reduce(&bmp(&[1, 3, 2, 2]), Reduction::TwoAgentGeneral).unwrap();
        assert_eq!(red.instance.row(1), &[8, 10, 9, 9, 12, 0, 0, 0, 12, 12]);
        assert_eq!(
            red.instance.row(0),
            &[32, 34, 33, 33, 36, 24, 24, 24, 36, 36]
        );
        assert_eq!(red.size_vector, SizeVector(vec![4, 6]));
        for w in [
            &[1, 3, 2, 2][..],
            &[2, 2, 2, 2],
            &[1, 1, 2, 4],
            &[1, 1, 1, 3],
        ] {
            round_trip(&bmp(w), Reduction::TwoAgentGeneral);
            round_trip(&bmp(w), Reduction::IdenticalConstant);
        }
    }

    #[test]
    fn coloring_examples() {
        let k4 = vec![[0, 1], [0, 2], [1, 2], [0, 3], [1, 3], [2, 3]];
        let tri = SourceProblem::GraphColoring {
            vertices: 3,
            edges: k4[..3].to_vec(),
            colors: 3,
        };
        let (yes, red) = round_trip(&tri, Reduction::BinaryGeneral);
        assert!(yes);
        assert_eq!(red.instance.num_agents(), 6);
        assert_eq!(red.instance.num_goods(), 9);
        assert_eq!(red.size_vector, SizeVector(vec![0, 0, 0, 3, 3, 3]));
        let full = SourceProblem::GraphColoring {
            vertices: 4,
            edges: k4,
            colors: 3,
        };
        let red = reduce(&full, Reduction::BinaryGeneral).unwrap();
        let opts = SolveOptions::default();
        assert!(!reformable(&red.instance, &red.size_vector, &opts).unwrap());
        assert!(!full.solve_bruteforce().unwrap());
    }

    #[test]
    fn x3c_smallest() {
        let src = SourceProblem::X3c {
            elements: 3,
            sets: vec![[0, 1, 2], [0, 1, 2]],
        };
        let (yes, red) = round_trip(&src, Reduction::OptimalBinary);
        assert!(yes);
        let start = red.initial_allocation.unwrap();
        let res = optimal_exchanges(&red.instance, &start, &SolveOptions::default()).unwrap();
        assert_eq!(res.distance.finite(), Some(1));
        let once = SourceProblem::X3c {
            elements: 3,
            sets: vec![[0, 1, 2]],
        };
        assert!(matches!(
            reduce(&once, Reduction::OptimalBinary),
            Err(Error::MalformedSource(_))
        ));
    }

    #[test]
    fn incompatible_sources() {
        let tri = SourceProblem::ThreePartition {
            q: 1,
            k: 20,
            values: vec![6, 7, 7],
        };
        for target in Reduction::ALL {
            let r = reduce(&tri, target);
            if target.source_tag() == tri.tag() {
                assert!(r.is_ok());
            } else {
                assert!(
                    matches!(r, Err(Error::IncompatibleReduction { .. })),
                    "{target}"
                );
            }
        }
        assert!("nope".parse::<Reduction>().is_err());
        for target in Reduction::ALL {
            assert_eq!(target.tag().parse::<Reduction>().unwrap(), target);
        }
    }
}
