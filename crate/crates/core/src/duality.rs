//! The duality route to χ_{ν^A_α} and its consequences.
//!
//! Averaging the twisted characters χ^σ_α over the dual code A⊥ (the dual
//! group of S_α/A under Pontryagin duality) reproduces χ_{ν^A_α} exactly;
//! with finite support the Haar integral is a finite arithmetic mean, so
//! the identity with the combinatorial evaluator in [`crate::irs`] is
//! checked as exact rational equality. The same average drives the
//! decomposability verdict (the character is extreme iff A = S_α) and the
//! half/half mixture identity obtained by cutting S_α along one sign
//! homomorphism.

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::gf2::{DualCharacter, Gf2Error, Gf2Subspace, SignVector};
use crate::irs::{chi_nu_exact, EstimateReport, IrsError};
use crate::perm::FinitaryPermutation;
use crate::thoma::{
    chi_sigma_alpha, chi_sigma_alpha_f64, merge_to_alpha_sigma, thoma_character, AlphaSpec,
    Rational, ThomaError, ThomaParameter,
};

#[derive(Debug, Error, PartialEq)]
pub enum DualityError {
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Irs(#[from] IrsError),
    #[error(transparent)]
    Thoma(#[from] ThomaError),
    #[error("cycle lengths and assignment have different lengths: {lengths} vs {indices}")]
    LengthMismatch { lengths: usize, indices: usize },
    #[error("assignment index {index} outside 1..={m}")]
    IndexOutOfRange { index: usize, m: usize },
    #[error("cycle length {0} is not a valid cycle length (need ≥ 2)")]
    BadCycleLength(usize),
}

/// χ_{ν^A_α}(g) as the exact mean of χ^σ_α(g) over σ ∈ A⊥.
pub fn chi_nu_via_integral(
    alpha: &AlphaSpec,
    subgroup: &Gf2Subspace,
    g: &FinitaryPermutation,
) -> Result<Rational, DualityError> {
    if subgroup.ambient_rank() != alpha.m() {
        return Err(ThomaError::WidthMismatch {
            expected: alpha.m(),
            got: subgroup.ambient_rank(),
        }
        .into());
    }
    let dual = subgroup.dual_code();
    let sigmas = dual.enumerate()?;
    let mut sum = Rational::zero();
    for v in &sigmas {
        let sigma = DualCharacter::from_vector(*v);
        sum += chi_sigma_alpha(alpha, &sigma, g)?;
    }
    let count = Rational::from_integer(sigmas.len().into());
    Ok(sum / count)
}

/// Monte Carlo version: σ drawn Haar-uniformly from A⊥, sample j from the
/// ChaCha stream (seed, j). The mean is accumulated over fixed-size chunks
/// so the result is bit-identical for any worker count.
pub fn chi_nu_via_integral_mc(
    alpha: &AlphaSpec,
    subgroup: &Gf2Subspace,
    g: &FinitaryPermutation,
    samples: u64,
    seed: u64,
) -> Result<EstimateReport, DualityError> {
    if subgroup.ambient_rank() != alpha.m() {
        return Err(ThomaError::WidthMismatch {
            expected: alpha.m(),
            got: subgroup.ambient_rank(),
        }
        .into());
    }
    let dual = subgroup.dual_code();
    let alphas = alpha.alphas_f64();

    const CHUNK: u64 = 4096;
    let chunks = samples.div_ceil(CHUNK);
    let partials: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for j in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(j);
                let sigma = DualCharacter::from_vector(dual.sample_uniform(&mut rng));
                let x = chi_sigma_alpha_f64(&alphas, &sigma, g);
                sum += x;
                sum_sq += x * x;
            }
            (sum, sum_sq)
        })
        .collect();
    let (sum, sum_sq) = partials
        .iter()
        .fold((0.0, 0.0), |(s, q), (ps, pq)| (s + ps, q + pq));

    let n = samples as f64;
    let mean = if samples == 0 { 0.0 } else { sum / n };
    let stderr = if samples <= 1 {
        0.0
    } else {
        ((sum_sq - n * mean * mean).max(0.0) / (n * (n - 1.0))).sqrt()
    };
    Ok(EstimateReport {
        estimate: mean,
        stderr,
        trials: samples,
        // The estimate depends on g only through its support.
        prefix_length: g.max_point().map_or(0, |p| p as usize + 1),
        seed,
        exact: None,
    })
}

/// Check one factor of the pointwise identity: the dual average of
/// Π_ℓ σ(i_ℓ)^{k_ℓ+1} must be exactly the 0/1 indicator of the combined
/// sign vector lying in A.
pub fn theta_pointwise_check(
    alpha: &AlphaSpec,
    subgroup: &Gf2Subspace,
    cycle_lengths: &[usize],
    assignment: &[usize],
) -> Result<bool, DualityError> {
    if cycle_lengths.len() != assignment.len() {
        return Err(DualityError::LengthMismatch {
            lengths: cycle_lengths.len(),
            indices: assignment.len(),
        });
    }
    let m = alpha.m();
    let mut combined = SignVector::zero(m);
    for (&k, &i) in cycle_lengths.iter().zip(assignment) {
        if k < 2 {
            return Err(DualityError::BadCycleLength(k));
        }
        if i < 1 || i > m {
            return Err(DualityError::IndexOutOfRange { index: i, m });
        }
        if k % 2 == 0 {
            combined.flip_coord(i);
        }
    }
    let theta = i64::from(subgroup.contains(&combined)?);

    let mut plus = 0i64;
    let mut minus = 0i64;
    for v in subgroup.dual_code().enumerate()? {
        let sigma = DualCharacter::from_vector(v);
        if sigma.eval(&combined)? == 1 {
            plus += 1;
        } else {
            minus += 1;
        }
    }
    // Average in units of 1/(plus+minus); must be exactly 0 or 1.
    let numer = plus - minus;
    let total = plus + minus;
    Ok(numer == theta * total && (numer == 0 || numer == total))
}

/// One place where two dual summands differ, proving decomposability.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionWitness {
    /// Cycle length of the witness k-cycle.
    pub cycle_length: usize,
    pub sigma1: String,
    pub sigma2: String,
    pub value1: String,
    pub value2: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecomposabilityReport {
    pub indecomposable: bool,
    pub dual_dimension: usize,
    /// Weight 2^{−d} of each summand in the convex decomposition.
    pub weight: String,
    pub summands: Vec<String>,
    pub witness: Option<DecompositionWitness>,
}

/// Extremality verdict: χ_{ν^A_α} is extreme iff A = S_α; otherwise
/// exhibit the convex decomposition over A⊥ and a witness k-cycle where
/// two summands take different values.
pub fn decomposability_report(
    alpha: &AlphaSpec,
    subgroup: &Gf2Subspace,
) -> Result<DecomposabilityReport, DualityError> {
    if subgroup.ambient_rank() != alpha.m() {
        return Err(ThomaError::WidthMismatch {
            expected: alpha.m(),
            got: subgroup.ambient_rank(),
        }
        .into());
    }
    let m = alpha.m();
    let dual = subgroup.dual_code();
    let d = dual.dim();
    let sigmas = dual.enumerate()?;
    let weight = Rational::new(1.into(), (1u64 << d).into());

    let mut witness = None;
    if d > 0 {
        'scan: for k in 2..=(m + 2).max(3) {
            let values: Vec<Rational> = sigmas
                .iter()
                .map(|v| {
                    let sigma = DualCharacter::from_vector(*v);
                    crate::thoma::twisted_power_sum(alpha, &sigma, k)
                })
                .collect();
            for a in 0..values.len() {
                for b in (a + 1)..values.len() {
                    if values[a] != values[b] {
                        witness = Some(DecompositionWitness {
                            cycle_length: k,
                            sigma1: sigmas[a].to_string(),
                            sigma2: sigmas[b].to_string(),
                            value1: values[a].to_string(),
                            value2: values[b].to_string(),
                        });
                        break 'scan;
                    }
                }
            }
        }
    }
    Ok(DecomposabilityReport {
        indecomposable: subgroup.is_full(),
        dual_dimension: d,
        weight: weight.to_string(),
        summands: sigmas.iter().map(|v| v.to_string()).collect(),
        witness,
    })
}

/// Both sides of the half/half mixture identity at one g:
/// χ_{ν^A_α}(g) vs ½·χ_{ν^{S_α}_α}(g) + ½·χ_(β;γ)(g), where
/// (α, σ) = merge(β; γ) and A = ker σ.
pub fn mixture_sides(
    theta: &ThomaParameter,
    g: &FinitaryPermutation,
) -> Result<(Rational, Rational), DualityError> {
    let (alpha, sigma) = merge_to_alpha_sigma(theta);
    let m = alpha.m();
    let kernel = if sigma.is_trivial() {
        Gf2Subspace::full(m)
    } else {
        Gf2Subspace::from_rows(m, &[*sigma.as_vector()])?.dual_code()
    };
    let lhs = chi_nu_exact(&alpha, &kernel, g)?;
    let full = chi_nu_exact(&alpha, &Gf2Subspace::full(m), g)?;
    let half = Rational::new(1.into(), 2.into());
    let rhs = &half * full + &half * thoma_character(theta, g);
    Ok((lhs, rhs))
}

/// Verify the mixture identity exactly on a suite of group elements.
pub fn mixture_identity_check(
    theta: &ThomaParameter,
    g_suite: &[FinitaryPermutation],
) -> Result<bool, DualityError> {
    for g in g_suite {
        let (lhs, rhs) = mixture_sides(theta, g)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}
