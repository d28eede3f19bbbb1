use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::model::{Allocation, Instance, SizeVector, UtilityClass};

/// Generator behind every seeded helper; fixed so seeds stay reproducible.
pub type GenRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform utilities in `[0, max_u]` (`[0, 1]` for binary classes); identical
/// classes copy the first row.
pub fn random_instance(
    seed: u64,
    n: usize,
    m: usize,
    class: UtilityClass,
    max_u: u64,
) -> Result<Instance<u64>> {
    random_instance_with(&mut seeded_rng(seed), n, m, class, max_u)
}

pub fn random_instance_with<R: Rng>(
    rng: &mut R,
    n: usize,
    m: usize,
    class: UtilityClass,
    max_u: u64,
) -> Result<Instance<u64>> {
    let cap = if class.is_binary() {
        max_u.min(1)
    } else {
        max_u
    };
    let mut row = || -> Vec<u64> { (0..m).map(|_| rng.gen_range(0..=cap)).collect() };
    if class.is_identical() {
        Instance::identical(n, row())
    } else {
        Instance::new((0..n).map(|_| row()).collect())
    }
}

/// Uniformly random allocation with the given size vector.
pub fn random_allocation<R: Rng>(rng: &mut R, sv: &SizeVector) -> Allocation {
    let mut owners: Vec<usize> = sv
        .as_slice()
        .iter()
        .enumerate()
        .flat_map(|(i, &s)| std::iter::repeat_n(i, s))
        .collect();
    owners.shuffle(rng);
    Allocation::from_owners(&owners, sv.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a = random_instance(7, 3, 6, UtilityClass::General, 5).unwrap();
        let b = random_instance(7, 3, 6, UtilityClass::General, 5).unwrap();
        assert_eq!(a, b);
        let mut r1 = seeded_rng(3);
        let mut r2 = seeded_rng(3);
        let sv = SizeVector(vec![2, 3, 1]);
        assert_eq!(
            random_allocation(&mut r1, &sv),
            random_allocation(&mut r2, &sv)
        );
    }

    #[test]
    fn class_constraints() {
        for seed in 0..100 {
            let inst = random_instance(seed, 3, 6, UtilityClass::IdenticalBinary, 9).unwrap();
            assert!(inst.is_identical() && inst.is_binary());
            let inst = random_instance(seed, 3, 6, UtilityClass::General, 4).unwrap();
            assert!((0..3).all(|i| inst.row(i).iter().all(|&u| u <= 4)));
            let mut rng = seeded_rng(seed);
            let sv = SizeVector(vec![1, 2, 3]);
            assert_eq!(random_allocation(&mut rng, &sv).size_vector(), sv);
        }
    }
}
