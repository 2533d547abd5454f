//! Indecomposable characters and invariant random subgroups of the
//! finitary symmetric group.
//!
//! The crate models the finitary symmetric group Fin(ℕ) of permutations of
//! ℕ with finite support, its extreme characters in Thoma's parametrisation,
//! and the family of ergodic invariant random subgroups obtained by colouring
//! ℕ with finitely many colours of frequencies α and keeping the permutations
//! whose colour defect lies in a chosen sign subgroup A.
//!
//! The same character is computed along three independent routes so each
//! serves as an oracle for the others:
//!
//! * an exact combinatorial sum over colourings of the cycles of g,
//! * an exact (or Monte Carlo) average of twisted characters over the dual
//!   code A⊥,
//! * direct Monte Carlo membership sampling of the random subgroup.
//!
//! Finite symmetric groups S_n enter through induced-character ratios that
//! recover the same values as n → ∞.

pub mod asymptotics;
pub mod duality;
pub mod gf2;
pub mod irs;
pub mod linalg;
pub mod perm;
pub mod suite;
pub mod thoma;
