//! The group S_α = ⊕_i C_i of sign sequences, as GF(2) linear algebra.
//!
//! With finitely supported α the group is an elementary abelian 2-group of
//! rank m, so subgroups are GF(2) subspaces, the dual group is the dual
//! vector space, and the annihilator of a subgroup A is the dual code A⊥.
//! Coordinates are indexed 1..=m (coordinate i belongs to α_i); the text
//! form is a bitstring whose leftmost character is coordinate 1.

use std::fmt;

use rand::Rng;
use thiserror::Error;

/// Coordinates live in a single machine word.
pub const MAX_RANK: usize = 64;

/// Enumeration refuses subspaces of dimension above this; use Haar
/// sampling instead.
pub const DEFAULT_ENUM_CAP: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("width mismatch: expected {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("ambient rank {0} exceeds the supported maximum {MAX_RANK}")]
    RankTooLarge(usize),
    #[error("enumeration of 2^{dim} elements exceeds the cap 2^{cap}")]
    EnumerationCap { dim: usize, cap: usize },
    #[error("bad bitstring {0:?}: expected only '0' and '1'")]
    BadBitstring(String),
}

/// An element of S_α: bit i-1 set means coordinate i carries −1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignVector {
    width: usize,
    bits: u64,
}

impl SignVector {
    /// The identity element (all +1).
    pub fn zero(width: usize) -> Self {
        assert!(width <= MAX_RANK);
        Self { width, bits: 0 }
    }

    pub(crate) fn from_bits(width: usize, bits: u64) -> Self {
        debug_assert!(width <= MAX_RANK);
        debug_assert!(width == MAX_RANK || bits < (1u64 << width));
        Self { width, bits }
    }

    /// Parse a bitstring such as "110" (leftmost = coordinate 1).
    pub fn parse(text: &str) -> Result<Self, Gf2Error> {
        if text.len() > MAX_RANK {
            return Err(Gf2Error::RankTooLarge(text.len()));
        }
        let mut bits = 0u64;
        for (j, ch) in text.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << j,
                _ => return Err(Gf2Error::BadBitstring(text.to_string())),
            }
        }
        Ok(Self {
            width: text.len(),
            bits,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// True iff coordinate `i` (1-based) carries −1.
    pub fn coord(&self, i: usize) -> bool {
        debug_assert!(i >= 1 && i <= self.width);
        self.bits >> (i - 1) & 1 == 1
    }

    /// Flip coordinate `i` (1-based).
    pub fn flip_coord(&mut self, i: usize) {
        debug_assert!(i >= 1 && i <= self.width);
        self.bits ^= 1 << (i - 1);
    }

    /// Group operation (componentwise product of signs).
    pub fn xor(&self, other: &Self) -> Self {
        debug_assert_eq!(self.width, other.width);
        Self {
            width: self.width,
            bits: self.bits ^ other.bits,
        }
    }

    /// GF(2) inner product parity with `other`.
    pub fn dot(&self, other: &Self) -> bool {
        debug_assert_eq!(self.width, other.width);
        (self.bits & other.bits).count_ones() % 2 == 1
    }

}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.width {
            write!(f, "{}", (self.bits >> j) & 1)?;
        }
        Ok(())
    }
}

/// A subgroup A ≤ S_α as a GF(2) subspace in canonical reduced row-echelon
/// form, so subspace equality is structural equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Subspace {
    ambient_rank: usize,
    // Nonzero rows in RREF, sorted by pivot position.
    basis: Vec<u64>,
}

fn rref(width: usize, rows: &mut Vec<u64>) {
    let mut pivot_rows: Vec<u64> = Vec::new();
    for col in 0..width {
        let mask = 1u64 << col;
        let Some(pos) = rows.iter().position(|&r| r & mask != 0) else {
            continue;
        };
        let pivot = rows.swap_remove(pos);
        for r in rows.iter_mut() {
            if *r & mask != 0 {
                *r ^= pivot;
            }
        }
        for r in pivot_rows.iter_mut() {
            if *r & mask != 0 {
                *r ^= pivot;
            }
        }
        pivot_rows.push(pivot);
    }
    pivot_rows.sort_by_key(|r| r.trailing_zeros());
    *rows = pivot_rows;
}

impl Gf2Subspace {
    /// The span of the given rows, in canonical RREF.
    pub fn from_rows(ambient_rank: usize, rows: &[SignVector]) -> Result<Self, Gf2Error> {
        if ambient_rank > MAX_RANK {
            return Err(Gf2Error::RankTooLarge(ambient_rank));
        }
        let mut bits = Vec::with_capacity(rows.len());
        for row in rows {
            if row.width() != ambient_rank {
                return Err(Gf2Error::WidthMismatch {
                    expected: ambient_rank,
                    got: row.width(),
                });
            }
            bits.push(row.bits);
        }
        let mut basis = bits;
        rref(ambient_rank, &mut basis);
        Ok(Self { ambient_rank, basis })
    }

    /// Parse a subgroup from bitstrings, e.g. `["110", "011"]`.
    pub fn from_bitstrings(
        ambient_rank: usize,
        rows: &[impl AsRef<str>],
    ) -> Result<Self, Gf2Error> {
        let mut vecs = Vec::with_capacity(rows.len());
        for row in rows {
            let v = SignVector::parse(row.as_ref())?;
            if v.width() != ambient_rank {
                return Err(Gf2Error::WidthMismatch {
                    expected: ambient_rank,
                    got: v.width(),
                });
            }
            vecs.push(v);
        }
        Self::from_rows(ambient_rank, &vecs)
    }

    /// The trivial subgroup {1}.
    pub fn trivial(ambient_rank: usize) -> Self {
        assert!(ambient_rank <= MAX_RANK);
        Self {
            ambient_rank,
            basis: Vec::new(),
        }
    }

    /// The whole group S_α.
    pub fn full(ambient_rank: usize) -> Self {
        assert!(ambient_rank <= MAX_RANK);
        Self {
            ambient_rank,
            basis: (0..ambient_rank).map(|j| 1u64 << j).collect(),
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_rank
    }

    /// Basis rows in canonical order.
    pub fn basis(&self) -> Vec<SignVector> {
        self.basis
            .iter()
            .map(|&b| SignVector::from_bits(self.ambient_rank, b))
            .collect()
    }

    /// Membership test: is `s` a GF(2) combination of the basis rows?
    pub fn contains(&self, s: &SignVector) -> Result<bool, Gf2Error> {
        if s.width() != self.ambient_rank {
            return Err(Gf2Error::WidthMismatch {
                expected: self.ambient_rank,
                got: s.width(),
            });
        }
        let mut rem = s.bits;
        for &row in &self.basis {
            let pivot = 1u64 << row.trailing_zeros();
            if rem & pivot != 0 {
                rem ^= row;
            }
        }
        Ok(rem == 0)
    }

    /// The dual code A⊥ = { σ : ⟨σ, a⟩ = 0 for all a ∈ A }, i.e. the dual
    /// group of S_α/A. Satisfies dim(A) + dim(A⊥) = m.
    pub fn dual_code(&self) -> Gf2Subspace {
        let m = self.ambient_rank;
        // Pivot columns of the RREF basis; the kernel has one generator
        // per free column.
        let pivots: Vec<usize> = self
            .basis
            .iter()
            .map(|r| r.trailing_zeros() as usize)
            .collect();
        let mut kernel = Vec::with_capacity(m - pivots.len());
        for free in 0..m {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = 1u64 << free;
            for (row, &p) in self.basis.iter().zip(&pivots) {
                if row >> free & 1 == 1 {
                    v |= 1u64 << p;
                }
            }
            kernel.push(v);
        }
        rref(m, &mut kernel);
        Gf2Subspace {
            ambient_rank: m,
            basis: kernel,
        }
    }

    /// All 2^dim elements in deterministic counter order.
    pub fn enumerate(&self) -> Result<Vec<SignVector>, Gf2Error> {
        self.enumerate_capped(DEFAULT_ENUM_CAP)
    }

    pub fn enumerate_capped(&self, cap: usize) -> Result<Vec<SignVector>, Gf2Error> {
        let d = self.dim();
        if d > cap {
            return Err(Gf2Error::EnumerationCap { dim: d, cap });
        }
        let mut out = Vec::with_capacity(1 << d);
        for mask in 0u64..(1u64 << d) {
            let mut bits = 0u64;
            for (j, &row) in self.basis.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    bits ^= row;
                }
            }
            out.push(SignVector::from_bits(self.ambient_rank, bits));
        }
        Ok(out)
    }

    /// One draw from the uniform (Haar) distribution on A: a random GF(2)
    /// combination of the basis rows.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> SignVector {
        let mut bits = 0u64;
        for &row in &self.basis {
            if rng.random::<bool>() {
                bits ^= row;
            }
        }
        SignVector::from_bits(self.ambient_rank, bits)
    }

    /// Image of the subspace under a relabelling of coordinates:
    /// coordinate i of the result is coordinate `perm[i-1]` of the input.
    pub fn permute_coordinates(&self, perm: &[usize]) -> Gf2Subspace {
        debug_assert_eq!(perm.len(), self.ambient_rank);
        let mut rows = Vec::with_capacity(self.basis.len());
        for &row in &self.basis {
            let mut out = 0u64;
            for (to, &from) in perm.iter().enumerate() {
                if row >> (from - 1) & 1 == 1 {
                    out |= 1u64 << to;
                }
            }
            rows.push(out);
        }
        rref(self.ambient_rank, &mut rows);
        Gf2Subspace {
            ambient_rank: self.ambient_rank,
            basis: rows,
        }
    }
}

/// A homomorphism σ: S_α → {±1}, stored by the set of coordinates it
/// negates: σ(s) = (−1)^⟨bits, s⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DualCharacter(SignVector);

impl DualCharacter {
    /// The trivial homomorphism.
    pub fn trivial(width: usize) -> Self {
        Self(SignVector::zero(width))
    }

    /// Parse from a bitstring; '1' at position i-1 means σ(i) = −1.
    pub fn parse(text: &str) -> Result<Self, Gf2Error> {
        Ok(Self(SignVector::parse(text)?))
    }

    pub fn from_vector(v: SignVector) -> Self {
        Self(v)
    }

    pub fn as_vector(&self) -> &SignVector {
        &self.0
    }

    pub fn width(&self) -> usize {
        self.0.width()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_zero()
    }

    /// σ(c_i) for the generator of coordinate i (1-based): +1 or −1.
    pub fn sign_at(&self, i: usize) -> i32 {
        if self.0.coord(i) {
            -1
        } else {
            1
        }
    }

    /// Evaluate σ(s) ∈ {+1, −1}.
    pub fn eval(&self, s: &SignVector) -> Result<i32, Gf2Error> {
        if s.width() != self.width() {
            return Err(Gf2Error::WidthMismatch {
                expected: self.width(),
                got: s.width(),
            });
        }
        Ok(if self.0.dot(s) { -1 } else { 1 })
    }
}

impl fmt::Display for DualCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sv(text: &str) -> SignVector {
        SignVector::parse(text).unwrap()
    }

    fn space(rank: usize, rows: &[&str]) -> Gf2Subspace {
        Gf2Subspace::from_bitstrings(rank, rows).unwrap()
    }

    #[test]
    fn span_examples() {
        assert_eq!(space(2, &["11"]).dim(), 1);
        let full = space(2, &["10", "01", "11"]);
        assert_eq!(full.dim(), 2);
        assert_eq!(full, Gf2Subspace::full(2));
        // Third row dependent: rank 2 by hand Gaussian elimination.
        assert_eq!(space(3, &["110", "011", "101"]).dim(), 2);
    }

    #[test]
    fn width_mismatch_rejected() {
        let err = Gf2Subspace::from_bitstrings(2, &["110"]).unwrap_err();
        assert_eq!(
            err,
            Gf2Error::WidthMismatch {
                expected: 2,
                got: 3
            }
        );
    }

    #[test]
    fn contains_examples() {
        let a = space(2, &["11"]);
        assert!(a.contains(&sv("00")).unwrap());
        assert!(!a.contains(&sv("10")).unwrap());
        // 101 = 110 ⊕ 011.
        let b = space(3, &["110", "011"]);
        assert!(b.contains(&sv("101")).unwrap());
        assert!(!b.contains(&sv("100")).unwrap());
    }

    #[test]
    fn dual_code_examples() {
        assert_eq!(Gf2Subspace::full(2).dual_code(), Gf2Subspace::trivial(2));
        assert_eq!(Gf2Subspace::trivial(2).dual_code(), Gf2Subspace::full(2));
        // Self-dual: solve ⟨σ, (1,1)⟩ = 0 over GF(2).
        let a = space(2, &["11"]);
        assert_eq!(a.dual_code(), a);
    }

    #[test]
    fn enumerate_examples() {
        let zero = Gf2Subspace::trivial(3);
        assert_eq!(zero.enumerate().unwrap(), vec![SignVector::zero(3)]);

        let a = space(2, &["11"]);
        let elems = a.enumerate().unwrap();
        assert_eq!(elems, vec![sv("00"), sv("11")]);

        let full: std::collections::BTreeSet<String> = Gf2Subspace::full(2)
            .enumerate()
            .unwrap()
            .iter()
            .map(|v| v.to_string())
            .collect();
        assert_eq!(full.len(), 4);
        for want in ["00", "10", "01", "11"] {
            assert!(full.contains(want));
        }
    }

    #[test]
    fn enumerate_cap() {
        let full = Gf2Subspace::full(8);
        assert!(matches!(
            full.enumerate_capped(7),
            Err(Gf2Error::EnumerationCap { dim: 8, cap: 7 })
        ));
    }

    #[test]
    fn sample_uniform_frequencies() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = space(2, &["11"]);
        let n = 100_000;
        let hits = (0..n)
            .filter(|_| a.sample_uniform(&mut rng) == sv("11"))
            .count();
        let freq = hits as f64 / n as f64;
        assert!((freq - 0.5).abs() < 0.01, "freq {freq}");

        let full = Gf2Subspace::full(3);
        let mut counts = std::collections::HashMap::new();
        for _ in 0..n {
            *counts.entry(full.sample_uniform(&mut rng).bits).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 8);
        for (_, c) in counts {
            let freq = c as f64 / n as f64;
            assert!((freq - 0.125).abs() < 0.01, "freq {freq}");
        }

        // Point mass on the trivial subgroup.
        let trivial = Gf2Subspace::trivial(4);
        assert!(trivial.sample_uniform(&mut rng).is_zero());
    }

    #[test]
    fn dual_character_evaluation() {
        let sigma = DualCharacter::parse("10").unwrap();
        assert_eq!(sigma.sign_at(1), -1);
        assert_eq!(sigma.sign_at(2), 1);
        assert_eq!(sigma.eval(&sv("10")).unwrap(), -1);
        assert_eq!(sigma.eval(&sv("01")).unwrap(), 1);
        assert_eq!(sigma.eval(&sv("11")).unwrap(), -1);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_subspace(width: usize) -> impl Strategy<Value = Gf2Subspace> {
            let mask = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
            proptest::collection::vec(0u64..=mask, 0..=width).prop_map(move |raw| {
                let rows: Vec<SignVector> = raw
                    .into_iter()
                    .map(|b| SignVector::from_bits(width, b))
                    .collect();
                Gf2Subspace::from_rows(width, &rows).unwrap()
            })
        }

        proptest! {
            #[test]
            fn dual_is_an_involution(a in arb_subspace(12)) {
                prop_assert_eq!(a.dual_code().dual_code(), a);
            }

            #[test]
            fn dual_dimension_is_complementary(a in arb_subspace(9)) {
                prop_assert_eq!(a.dim() + a.dual_code().dim(), 9);
            }

            #[test]
            fn enumeration_lists_members_once(a in arb_subspace(8)) {
                let elems = a.enumerate().unwrap();
                prop_assert_eq!(elems.len(), 1usize << a.dim());
                let distinct: std::collections::HashSet<u64> =
                    elems.iter().map(|v| v.bits).collect();
                prop_assert_eq!(distinct.len(), elems.len());
                for s in &elems {
                    prop_assert!(a.contains(s).unwrap());
                }
            }

            #[test]
            fn dual_pairs_are_orthogonal(a in arb_subspace(6)) {
                let dual = a.dual_code();
                for s in a.enumerate().unwrap() {
                    for sigma in dual.enumerate().unwrap() {
                        prop_assert!(!sigma.dot(&s));
                    }
                }
            }
        }
    }
}
