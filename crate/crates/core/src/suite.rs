//! Seeded random generators for fuzz suites and acceptance checks.
//!
//! Everything here is a pure function of the supplied RNG, so suites are
//! reproducible from a single seed.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::gf2::{DualCharacter, Gf2Subspace, SignVector};
use crate::perm::FinitaryPermutation;
use crate::thoma::{AlphaSpec, Rational, ThomaParameter};

/// Random positive rationals n_i/D, sorted non-increasing, with Σ ≤ 1
/// (slack keeps a positive dust frequency in most draws).
pub fn random_alpha<R: Rng + ?Sized>(rng: &mut R, max_m: usize) -> AlphaSpec {
    let m = rng.random_range(1..=max_m);
    let nums: Vec<u32> = (0..m).map(|_| rng.random_range(1..=9)).collect();
    let slack: u32 = rng.random_range(0..=4);
    let denom: u32 = nums.iter().sum::<u32>() + slack;
    let mut ws: Vec<Rational> = nums
        .into_iter()
        .map(|n| Rational::new(n.into(), denom.into()))
        .collect();
    ws.sort_by(|a, b| b.cmp(a));
    AlphaSpec::new(ws).expect("construction satisfies the invariants")
}

/// Random Thoma parameter with at most `max_entries` total entries.
pub fn random_theta<R: Rng + ?Sized>(rng: &mut R, max_entries: usize) -> ThomaParameter {
    let total = rng.random_range(1..=max_entries);
    let nums: Vec<u32> = (0..total).map(|_| rng.random_range(1..=9)).collect();
    let slack: u32 = rng.random_range(0..=4);
    let denom: u32 = nums.iter().sum::<u32>() + slack;
    let cut = rng.random_range(0..=total);
    let mk = |ns: &[u32]| {
        let mut ws: Vec<Rational> = ns
            .iter()
            .map(|&n| Rational::new(n.into(), denom.into()))
            .collect();
        ws.sort_by(|a, b| b.cmp(a));
        ws
    };
    ThomaParameter::new(mk(&nums[..cut]), mk(&nums[cut..]))
        .expect("construction satisfies the invariants")
}

/// Random subspace of the rank-m sign group from up to m random rows.
pub fn random_subspace<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Gf2Subspace {
    let rows = rng.random_range(0..=m);
    let vecs: Vec<SignVector> = (0..rows)
        .map(|_| {
            let mut v = SignVector::zero(m);
            for i in 1..=m {
                if rng.random::<bool>() {
                    v.flip_coord(i);
                }
            }
            v
        })
        .collect();
    Gf2Subspace::from_rows(m, &vecs).expect("widths match")
}

pub fn random_sigma<R: Rng + ?Sized>(rng: &mut R, m: usize) -> DualCharacter {
    let mut v = SignVector::zero(m);
    for i in 1..=m {
        if rng.random::<bool>() {
            v.flip_coord(i);
        }
    }
    DualCharacter::from_vector(v)
}

/// Random permutation with at most `max_cycles` disjoint cycles of length
/// 2..=max_len, supported inside [0, point_bound).
pub fn random_permutation<R: Rng + ?Sized>(
    rng: &mut R,
    max_cycles: usize,
    max_len: usize,
    point_bound: u64,
) -> FinitaryPermutation {
    let t = rng.random_range(0..=max_cycles);
    let mut lengths: Vec<usize> = Vec::with_capacity(t);
    let mut remaining = point_bound as usize;
    for _ in 0..t {
        if remaining < 2 {
            break;
        }
        let len = rng.random_range(2..=max_len.clamp(2, remaining));
        lengths.push(len);
        remaining -= len;
    }
    let needed: usize = lengths.iter().sum();
    let mut pool: Vec<u64> = (0..point_bound).collect();
    let (chosen, _) = pool.partial_shuffle(rng, needed);
    let mut cycles: Vec<Vec<u64>> = Vec::with_capacity(t);
    let mut offset = 0;
    for len in lengths {
        cycles.push(chosen[offset..offset + len].to_vec());
        offset += len;
    }
    FinitaryPermutation::from_cycles(cycles).expect("points are distinct")
}

/// A suite of distinct-looking random elements for identity checks.
pub fn random_suite<R: Rng + ?Sized>(
    rng: &mut R,
    size: usize,
    max_cycles: usize,
    max_len: usize,
    point_bound: u64,
) -> Vec<FinitaryPermutation> {
    (0..size)
        .map(|_| random_permutation(rng, max_cycles, max_len, point_bound))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_respect_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let a = random_alpha(&mut rng, 6);
            assert!(a.m() >= 1 && a.m() <= 6);
            assert!(a.sum() <= Rational::one());

            let sub = random_subspace(&mut rng, a.m());
            assert_eq!(sub.ambient_rank(), a.m());

            let th = random_theta(&mut rng, 4);
            assert!(th.beta().len() + th.gamma().len() <= 4);

            let g = random_permutation(&mut rng, 4, 6, 40);
            assert!(g.support_size() <= 24);
            assert!(g.cycle_decomposition().len() <= 4);
        }
    }

    #[test]
    fn generators_are_seed_deterministic() {
        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            assert_eq!(random_alpha(&mut r1, 5), random_alpha(&mut r2, 5));
            assert_eq!(
                random_permutation(&mut r1, 3, 5, 30),
                random_permutation(&mut r2, 3, 5, 30)
            );
        }
    }
}
