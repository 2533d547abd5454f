//! Thoma characters of Fin(ℕ) and their twisted (α, σ) form.
//!
//! An extreme character is determined by a pair (β; γ) of non-increasing
//! summable sequences via
//!
//!   χ_(β;γ)(g) = Π_k ( Σ_i β_i^k + (−1)^{k+1} Σ_i γ_i^k )^{c_k(g)},
//!
//! the product running over cycle lengths k ≥ 2 of g. The same characters
//! arise from a frequency vector α together with a sign homomorphism
//! σ: S_α → {±1} as
//!
//!   χ^σ_α(g) = Π_k ( Σ_{i∈I} σ(i)^{k+1} α_i^k )^{c_k(g)},
//!
//! where σ(i)^{k+1} is σ(i) for even k and 1 for odd k. Splitting α by the
//! sign of σ translates one form into the other. All evaluation is exact
//! rational arithmetic; f64 twins exist for Monte Carlo comparisons.

use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::gf2::{DualCharacter, SignVector, MAX_RANK};
use crate::perm::FinitaryPermutation;

pub type Rational = BigRational;

/// Gram matrices beyond this order are out of scope for the PSD checks.
pub const MAX_GRAM_ORDER: usize = 8;

#[derive(Debug, Error, PartialEq)]
pub enum ThomaError {
    #[error("bad rational {0:?}: expected \"p/q\" or an integer")]
    BadRational(String),
    #[error("entries must be strictly positive, got {0}")]
    NonPositiveEntry(Rational),
    #[error("entries must be non-increasing: {0} precedes {1}")]
    NotNonIncreasing(Rational, Rational),
    #[error("entries must sum to at most 1, got {0}")]
    SumExceedsOne(Rational),
    #[error("at most {MAX_RANK} entries are supported, got {0}")]
    TooManyEntries(usize),
    #[error("sigma width mismatch: alpha has {expected} coordinates, sigma has {got}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("gram matrix needs between 1 and {MAX_GRAM_ORDER} elements, got {0}")]
    BadGramOrder(usize),
}

pub fn parse_rational(text: &str) -> Result<Rational, ThomaError> {
    Rational::from_str(text.trim()).map_err(|_| ThomaError::BadRational(text.to_string()))
}

fn check_weights(label_sorted: bool, entries: &[Rational]) -> Result<(), ThomaError> {
    for a in entries {
        if !a.is_positive() {
            return Err(ThomaError::NonPositiveEntry(a.clone()));
        }
    }
    if label_sorted {
        for w in entries.windows(2) {
            if w[0] < w[1] {
                return Err(ThomaError::NotNonIncreasing(w[0].clone(), w[1].clone()));
            }
        }
    }
    Ok(())
}

/// A finitely supported frequency vector α_1 ≥ … ≥ α_m > 0 with Σα_i ≤ 1.
/// The leftover mass α_0 = 1 − Σα_i is the dust frequency. Coordinates are
/// indexed 1..=m to match `SignVector`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaSpec {
    alphas: Vec<Rational>,
}

impl AlphaSpec {
    pub fn new(alphas: Vec<Rational>) -> Result<Self, ThomaError> {
        if alphas.len() > MAX_RANK {
            return Err(ThomaError::TooManyEntries(alphas.len()));
        }
        check_weights(true, &alphas)?;
        let sum: Rational = alphas.iter().sum();
        if sum > Rational::one() {
            return Err(ThomaError::SumExceedsOne(sum));
        }
        Ok(Self { alphas })
    }

    pub fn parse(texts: &[impl AsRef<str>]) -> Result<Self, ThomaError> {
        let alphas = texts
            .iter()
            .map(|t| parse_rational(t.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(alphas)
    }

    /// Number of colours m = |I|.
    pub fn m(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[Rational] {
        &self.alphas
    }

    /// α_i for i ∈ 1..=m.
    pub fn alpha(&self, i: usize) -> &Rational {
        &self.alphas[i - 1]
    }

    pub fn sum(&self) -> Rational {
        self.alphas.iter().sum()
    }

    /// Dust frequency α_0 = 1 − Σα_i.
    pub fn alpha0(&self) -> Rational {
        Rational::one() - self.sum()
    }

    pub fn alphas_f64(&self) -> Vec<f64> {
        self.alphas
            .iter()
            .map(|a| a.to_f64().expect("alpha fits in f64"))
            .collect()
    }

    /// Groups of equal entries as 1-based index ranges, in order.
    /// Example: α = (1/2, 1/4, 1/4) → [[1], [2, 3]].
    pub fn equal_value_classes(&self) -> Vec<Vec<usize>> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in 1..=self.m() {
            match classes.last_mut() {
                Some(class) if self.alpha(class[0]) == self.alpha(i) => class.push(i),
                _ => classes.push(vec![i]),
            }
        }
        classes
    }
}

/// A Thoma parameter (β; γ): two finite non-increasing positive sequences
/// with Σβ + Σγ ≤ 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThomaParameter {
    beta: Vec<Rational>,
    gamma: Vec<Rational>,
}

impl ThomaParameter {
    pub fn new(beta: Vec<Rational>, gamma: Vec<Rational>) -> Result<Self, ThomaError> {
        if beta.len() + gamma.len() > MAX_RANK {
            return Err(ThomaError::TooManyEntries(beta.len() + gamma.len()));
        }
        check_weights(true, &beta)?;
        check_weights(true, &gamma)?;
        let sum: Rational = beta.iter().chain(gamma.iter()).sum();
        if sum > Rational::one() {
            return Err(ThomaError::SumExceedsOne(sum));
        }
        Ok(Self { beta, gamma })
    }

    pub fn parse(
        beta: &[impl AsRef<str>],
        gamma: &[impl AsRef<str>],
    ) -> Result<Self, ThomaError> {
        let b = beta
            .iter()
            .map(|t| parse_rational(t.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        let g = gamma
            .iter()
            .map(|t| parse_rational(t.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(b, g)
    }

    pub fn beta(&self) -> &[Rational] {
        &self.beta
    }

    pub fn gamma(&self) -> &[Rational] {
        &self.gamma
    }
}

/// Σβ_i^k + (−1)^{k+1} Σγ_i^k, the k-th factor base of χ_(β;γ).
pub fn thoma_power_sum(theta: &ThomaParameter, k: usize) -> Rational {
    let pb: Rational = theta.beta.iter().map(|b| b.pow(k as i32)).sum();
    let pg: Rational = theta.gamma.iter().map(|c| c.pow(k as i32)).sum();
    if k % 2 == 0 {
        pb - pg
    } else {
        pb + pg
    }
}

/// Σ_{i∈I} σ(i)^{k+1} α_i^k, the k-th factor base of χ^σ_α.
pub fn twisted_power_sum(alpha: &AlphaSpec, sigma: &DualCharacter, k: usize) -> Rational {
    let mut sum = Rational::zero();
    for i in 1..=alpha.m() {
        let term = alpha.alpha(i).pow(k as i32);
        if k % 2 == 0 && sigma.sign_at(i) == -1 {
            sum -= term;
        } else {
            sum += term;
        }
    }
    sum
}

/// χ_(β;γ)(g), exactly.
pub fn thoma_character(theta: &ThomaParameter, g: &FinitaryPermutation) -> Rational {
    let mut value = Rational::one();
    for (k, c) in g.cycle_type().iter() {
        value *= thoma_power_sum(theta, k).pow(c as i32);
    }
    value
}

/// χ^σ_α(g), exactly.
pub fn chi_sigma_alpha(
    alpha: &AlphaSpec,
    sigma: &DualCharacter,
    g: &FinitaryPermutation,
) -> Result<Rational, ThomaError> {
    if sigma.width() != alpha.m() {
        return Err(ThomaError::WidthMismatch {
            expected: alpha.m(),
            got: sigma.width(),
        });
    }
    let mut value = Rational::one();
    for (k, c) in g.cycle_type().iter() {
        value *= twisted_power_sum(alpha, sigma, k).pow(c as i32);
    }
    Ok(value)
}

/// Floating twin of `chi_sigma_alpha` for Monte Carlo comparisons.
pub fn chi_sigma_alpha_f64(alphas: &[f64], sigma: &DualCharacter, g: &FinitaryPermutation) -> f64 {
    debug_assert_eq!(sigma.width(), alphas.len());
    let mut value = 1.0;
    for (k, c) in g.cycle_type().iter() {
        let mut sum = 0.0;
        for (idx, a) in alphas.iter().enumerate() {
            let term = a.powi(k as i32);
            if k % 2 == 0 && sigma.sign_at(idx + 1) == -1 {
                sum -= term;
            } else {
                sum += term;
            }
        }
        value *= sum.powi(c as i32);
    }
    value
}

/// Split α by the sign of σ: β keeps the coordinates with σ(i) = +1, γ the
/// ones with σ(i) = −1. The resulting χ_(β;γ) equals χ^σ_α.
pub fn sigma_split(
    alpha: &AlphaSpec,
    sigma: &DualCharacter,
) -> Result<ThomaParameter, ThomaError> {
    if sigma.width() != alpha.m() {
        return Err(ThomaError::WidthMismatch {
            expected: alpha.m(),
            got: sigma.width(),
        });
    }
    let mut beta = Vec::new();
    let mut gamma = Vec::new();
    for i in 1..=alpha.m() {
        if sigma.sign_at(i) == 1 {
            beta.push(alpha.alpha(i).clone());
        } else {
            gamma.push(alpha.alpha(i).clone());
        }
    }
    ThomaParameter::new(beta, gamma)
}

/// Merge (β; γ) into a single non-increasing α and the σ marking the γ
/// coordinates. Among equal values, β entries come first.
pub fn merge_to_alpha_sigma(theta: &ThomaParameter) -> (AlphaSpec, DualCharacter) {
    let mut alphas = Vec::with_capacity(theta.beta.len() + theta.gamma.len());
    let mut sigma = SignVector::zero(theta.beta.len() + theta.gamma.len());
    let (mut b, mut g) = (0, 0);
    while b < theta.beta.len() || g < theta.gamma.len() {
        let take_beta = match (theta.beta.get(b), theta.gamma.get(g)) {
            (Some(bv), Some(gv)) => bv >= gv,
            (Some(_), None) => true,
            _ => false,
        };
        if take_beta {
            alphas.push(theta.beta[b].clone());
            b += 1;
        } else {
            sigma.flip_coord(alphas.len() + 1);
            alphas.push(theta.gamma[g].clone());
            g += 1;
        }
    }
    let alpha = AlphaSpec::new(alphas).expect("merged list inherits the invariants");
    (alpha, DualCharacter::from_vector(sigma))
}

/// Gram matrix [χ(g_j⁻¹ g_i)]_{i,j} of a positive-definite function.
pub fn gram_matrix<F>(
    chi: F,
    elements: &[FinitaryPermutation],
) -> Result<Vec<Vec<Rational>>, ThomaError>
where
    F: Fn(&FinitaryPermutation) -> Rational,
{
    if elements.is_empty() || elements.len() > MAX_GRAM_ORDER {
        return Err(ThomaError::BadGramOrder(elements.len()));
    }
    let mut rows = Vec::with_capacity(elements.len());
    for gi in elements {
        let mut row = Vec::with_capacity(elements.len());
        for gj in elements {
            row.push(chi(&gj.inverse().compose(gi)));
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn matrix_to_f64(matrix: &[Vec<Rational>]) -> Vec<Vec<f64>> {
    matrix
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| x.to_f64().expect("entry fits in f64"))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::symmetric_eigenvalues;

    fn rat(text: &str) -> Rational {
        parse_rational(text).unwrap()
    }

    fn perm(text: &str) -> FinitaryPermutation {
        text.parse().unwrap()
    }

    fn alpha(texts: &[&str]) -> AlphaSpec {
        AlphaSpec::parse(texts).unwrap()
    }

    fn theta(beta: &[&str], gamma: &[&str]) -> ThomaParameter {
        ThomaParameter::parse(beta, gamma).unwrap()
    }

    #[test]
    fn validation_rejects_bad_weights() {
        assert!(matches!(
            AlphaSpec::parse(&["1/3", "1/2"]),
            Err(ThomaError::NotNonIncreasing(..))
        ));
        assert!(matches!(
            AlphaSpec::parse(&["2/3", "2/3"]),
            Err(ThomaError::SumExceedsOne(..))
        ));
        assert!(matches!(
            AlphaSpec::parse(&["1/2", "0"]),
            Err(ThomaError::NonPositiveEntry(..))
        ));
        assert!(matches!(
            AlphaSpec::parse(&["1/2", "oops"]),
            Err(ThomaError::BadRational(..))
        ));
        assert!(matches!(
            ThomaParameter::parse(&["1/2", "-1/4"], &[] as &[&str]),
            Err(ThomaError::NonPositiveEntry(..))
        ));
    }

    #[test]
    fn alpha_derived_quantities() {
        let a = alpha(&["1/2", "1/3"]);
        assert_eq!(a.m(), 2);
        assert_eq!(a.alpha0(), rat("1/6"));
        assert_eq!(a.equal_value_classes(), vec![vec![1], vec![2]]);

        let b = alpha(&["1/2", "1/4", "1/4"]);
        assert_eq!(b.alpha0(), rat("0"));
        assert_eq!(b.equal_value_classes(), vec![vec![1], vec![2, 3]]);
    }

    #[test]
    fn thoma_character_examples() {
        let half_half = theta(&["1/2", "1/2"], &[]);
        assert_eq!(thoma_character(&half_half, &perm("(0 1)")), rat("1/2"));
        assert_eq!(
            thoma_character(&half_half, &FinitaryPermutation::identity()),
            rat("1")
        );

        let mixed = theta(&["1/2"], &["1/2"]);
        assert_eq!(thoma_character(&mixed, &perm("(0 1)")), rat("0"));
        assert_eq!(thoma_character(&mixed, &perm("(0 1 2)")), rat("1/4"));
    }

    #[test]
    fn chi_sigma_alpha_examples() {
        let a = alpha(&["1/2", "1/2"]);
        let trivial = DualCharacter::trivial(2);
        let both_minus = DualCharacter::parse("11").unwrap();
        assert_eq!(
            chi_sigma_alpha(&a, &trivial, &perm("(0 1)")).unwrap(),
            rat("1/2")
        );
        assert_eq!(
            chi_sigma_alpha(&a, &both_minus, &perm("(0 1)")).unwrap(),
            rat("-1/2")
        );
        // Odd cycle length: the signs cancel regardless of sigma.
        assert_eq!(
            chi_sigma_alpha(&a, &both_minus, &perm("(0 1 2)")).unwrap(),
            rat("1/4")
        );
        assert_eq!(
            chi_sigma_alpha(&a, &trivial, &perm("(0 1 2)")).unwrap(),
            rat("1/4")
        );
    }

    #[test]
    fn chi_sigma_alpha_width_mismatch() {
        let a = alpha(&["1/2"]);
        let sigma = DualCharacter::parse("10").unwrap();
        assert_eq!(
            chi_sigma_alpha(&a, &sigma, &perm("(0 1)")),
            Err(ThomaError::WidthMismatch {
                expected: 1,
                got: 2
            })
        );
    }

    #[test]
    fn trivial_sigma_matches_thoma_form() {
        let a = alpha(&["1/2", "1/3"]);
        let trivial = DualCharacter::trivial(2);
        let th = theta(&["1/2", "1/3"], &[]);
        for g in ["(0 1)", "(0 1 2)", "(0 1)(2 3)", "(0 1 2 3 4)"] {
            let g = perm(g);
            assert_eq!(
                chi_sigma_alpha(&a, &trivial, &g).unwrap(),
                thoma_character(&th, &g)
            );
        }
    }

    #[test]
    fn sigma_split_examples() {
        let a = alpha(&["1/2", "1/3"]);
        let sigma = DualCharacter::parse("01").unwrap();
        let th = sigma_split(&a, &sigma).unwrap();
        assert_eq!(th.beta(), &[rat("1/2")]);
        assert_eq!(th.gamma(), &[rat("1/3")]);

        let trivial = sigma_split(&a, &DualCharacter::trivial(2)).unwrap();
        assert_eq!(trivial.beta(), a.alphas());
        assert!(trivial.gamma().is_empty());

        let b = alpha(&["1/2", "1/2"]);
        let all_minus = sigma_split(&b, &DualCharacter::parse("11").unwrap()).unwrap();
        assert!(all_minus.beta().is_empty());
        assert_eq!(all_minus.gamma(), &[rat("1/2"), rat("1/2")]);
    }

    #[test]
    fn merge_examples() {
        let (a, sigma) = merge_to_alpha_sigma(&theta(&["1/2"], &["1/3"]));
        assert_eq!(a.alphas(), &[rat("1/2"), rat("1/3")]);
        assert_eq!(sigma.to_string(), "01");

        let (a, sigma) = merge_to_alpha_sigma(&theta(&["1/2", "1/2"], &[]));
        assert_eq!(a.alphas(), &[rat("1/2"), rat("1/2")]);
        assert!(sigma.is_trivial());

        // Tie rule: the beta entry precedes the equal gamma entry.
        let (a, sigma) = merge_to_alpha_sigma(&theta(&["1/3"], &["1/3"]));
        assert_eq!(a.alphas(), &[rat("1/3"), rat("1/3")]);
        assert_eq!(sigma.to_string(), "01");
    }

    #[test]
    fn merge_round_trips_character_values() {
        let th = theta(&["1/3"], &["1/3"]);
        let (a, sigma) = merge_to_alpha_sigma(&th);
        for g in ["(0 1)", "(0 1 2)", "(0 1)(2 3)", "(0 1 2 3)", "(0 1 2 3 4 5)"] {
            let g = perm(g);
            assert_eq!(
                chi_sigma_alpha(&a, &sigma, &g).unwrap(),
                thoma_character(&th, &g)
            );
        }
    }

    #[test]
    fn gram_matrix_examples() {
        let th = theta(&["1/2", "1/2"], &[]);
        let chi = |g: &FinitaryPermutation| thoma_character(&th, g);

        let one = gram_matrix(chi, &[FinitaryPermutation::identity()]).unwrap();
        assert_eq!(one, vec![vec![rat("1")]]);

        let m = gram_matrix(chi, &[FinitaryPermutation::identity(), perm("(0 1)")]).unwrap();
        assert_eq!(
            m,
            vec![
                vec![rat("1"), rat("1/2")],
                vec![rat("1/2"), rat("1")],
            ]
        );
        let eigs = symmetric_eigenvalues(&matrix_to_f64(&m));
        assert!((eigs[0] - 1.5).abs() < 1e-12);
        assert!((eigs[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn gram_matrix_order_bounds() {
        let th = theta(&["1/2"], &[]);
        let chi = |g: &FinitaryPermutation| thoma_character(&th, g);
        assert_eq!(gram_matrix(chi, &[]), Err(ThomaError::BadGramOrder(0)));
        let nine = vec![FinitaryPermutation::identity(); 9];
        let chi2 = |g: &FinitaryPermutation| thoma_character(&th, g);
        assert_eq!(gram_matrix(chi2, &nine), Err(ThomaError::BadGramOrder(9)));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_perm(max_point: u64) -> impl Strategy<Value = FinitaryPermutation> {
            proptest::collection::vec((0..max_point, 0..max_point), 0..8).prop_map(|pairs| {
                let mut g = FinitaryPermutation::identity();
                for (a, b) in pairs {
                    if a != b {
                        let t = FinitaryPermutation::from_cycles([[a, b]]).unwrap();
                        g = g.compose(&t);
                    }
                }
                g
            })
        }

        // Positive weights n_i/(Σn_j + slack), sorted descending.
        fn weights(nums: Vec<u32>, slack: u32) -> Vec<Rational> {
            let denom: u32 = nums.iter().sum::<u32>() + slack;
            let mut ws: Vec<Rational> = nums
                .into_iter()
                .map(|n| Rational::new(n.into(), denom.into()))
                .collect();
            ws.sort_by(|a, b| b.cmp(a));
            ws
        }

        fn arb_theta() -> impl Strategy<Value = ThomaParameter> {
            (
                proptest::collection::vec(1u32..=5, 0..4),
                proptest::collection::vec(1u32..=5, 0..4),
                0u32..3,
            )
                .prop_map(|(b, g, slack)| {
                    let all: Vec<u32> = b.iter().chain(g.iter()).copied().collect();
                    let denom: u32 = all.iter().sum::<u32>() + slack + 1;
                    let mk = |nums: Vec<u32>| {
                        let mut ws: Vec<Rational> = nums
                            .into_iter()
                            .map(|n| Rational::new(n.into(), denom.into()))
                            .collect();
                        ws.sort_by(|x, y| y.cmp(x));
                        ws
                    };
                    ThomaParameter::new(mk(b), mk(g)).unwrap()
                })
        }

        fn arb_alpha_sigma() -> impl Strategy<Value = (AlphaSpec, DualCharacter)> {
            (proptest::collection::vec(1u32..=5, 1..5), 0u32..3)
                .prop_flat_map(|(nums, slack)| {
                    let m = nums.len();
                    let alphas = weights(nums, slack);
                    let alpha = AlphaSpec::new(alphas).unwrap();
                    (Just(alpha), 0u64..(1u64 << m))
                })
                .prop_map(|(alpha, bits)| {
                    let m = alpha.m();
                    let mut v = SignVector::zero(m);
                    for i in 1..=m {
                        if bits >> (i - 1) & 1 == 1 {
                            v.flip_coord(i);
                        }
                    }
                    (alpha, DualCharacter::from_vector(v))
                })
        }

        proptest! {
            #[test]
            fn conjugation_invariance(
                th in arb_theta(),
                g in arb_perm(12),
                h in arb_perm(12),
            ) {
                prop_assert_eq!(
                    thoma_character(&th, &g.conjugated_by(&h)),
                    thoma_character(&th, &g)
                );
            }

            #[test]
            fn multiplicative_over_disjoint_supports(
                th in arb_theta(),
                g in arb_perm(6),
                h_raw in arb_perm(6),
            ) {
                // Shift h's support into {6..11} so it misses g's.
                let shift = FinitaryPermutation::from_cycles(
                    [[0u64, 6], [1, 7], [2, 8], [3, 9], [4, 10], [5, 11]]
                ).unwrap();
                let h = h_raw.conjugated_by(&shift);
                prop_assert_eq!(
                    thoma_character(&th, &g.compose(&h)),
                    thoma_character(&th, &g) * thoma_character(&th, &h)
                );
            }

            #[test]
            fn twisted_bounded_by_untwisted(
                (alpha, sigma) in arb_alpha_sigma(),
                g in arb_perm(10),
            ) {
                let twisted = chi_sigma_alpha(&alpha, &sigma, &g).unwrap();
                let trivial = DualCharacter::trivial(alpha.m());
                let untwisted = chi_sigma_alpha(&alpha, &trivial, &g).unwrap();
                prop_assert!(twisted.abs() <= untwisted);
            }

            #[test]
            fn split_matches_twisted_form(
                (alpha, sigma) in arb_alpha_sigma(),
                g in arb_perm(10),
            ) {
                let th = sigma_split(&alpha, &sigma).unwrap();
                prop_assert_eq!(
                    thoma_character(&th, &g),
                    chi_sigma_alpha(&alpha, &sigma, &g).unwrap()
                );
            }

            #[test]
            fn merge_then_split_round_trips(
                (alpha, sigma) in arb_alpha_sigma(),
                g in arb_perm(10),
            ) {
                let th = sigma_split(&alpha, &sigma).unwrap();
                let (alpha2, sigma2) = merge_to_alpha_sigma(&th);
                prop_assert_eq!(alpha2.alphas(), alpha.alphas());
                prop_assert_eq!(
                    chi_sigma_alpha(&alpha2, &sigma2, &g).unwrap(),
                    chi_sigma_alpha(&alpha, &sigma, &g).unwrap()
                );
            }

            #[test]
            fn gram_matrices_are_positive_semidefinite(
                th in arb_theta(),
                elements in proptest::collection::vec(arb_perm(8), 1..=5),
            ) {
                let chi = |g: &FinitaryPermutation| thoma_character(&th, g);
                let m = gram_matrix(chi, &elements).unwrap();
                for (i, row) in m.iter().enumerate() {
                    for (j, entry) in row.iter().enumerate() {
                        prop_assert_eq!(entry, &m[j][i]);
                    }
                }
                let eigs = symmetric_eigenvalues(&matrix_to_f64(&m));
                for e in eigs {
                    prop_assert!(e >= -1e-9, "negative eigenvalue {e}");
                }
            }

            #[test]
            fn floating_twin_tracks_exact_values(
                (alpha, sigma) in arb_alpha_sigma(),
                g in arb_perm(10),
            ) {
                let exact = chi_sigma_alpha(&alpha, &sigma, &g).unwrap()
                    .to_f64().unwrap();
                let float = chi_sigma_alpha_f64(&alpha.alphas_f64(), &sigma, &g);
                prop_assert!((exact - float).abs() < 1e-9);
            }
        }
    }
}
