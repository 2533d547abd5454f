//! The finite picture inside S_n.
//!
//! A coloured prefix {0..n−1} yields the Young subgroup K_n = Π Sym(B_i)
//! and, below it, H_n = the block-preserving permutations whose sign
//! vector lies in A. The permutation character of S_n/H_n decomposes by
//! Clifford theory into linear characters σ of the elementary abelian
//! quotient K_n/H_n induced up to S_n, and for a k-cycle the induced
//! ratio has the closed binomial form
//!
//!   σ^{S_n}(g)/σ^{S_n}(1) = Σ_{i∈I_n} σ(i)^{k+1} C(|B_i^n|, k) / C(n, k),
//!
//! which converges to the twisted power sum Σ σ(i)^{k+1} α_i^k as block
//! densities approach α. Everything here is exact: brute-force oracles
//! enumerate S_n (n ≤ 8) and the closed form uses big-integer binomials.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gf2::{DualCharacter, Gf2Error, Gf2Subspace, SignVector};
use crate::irs::{balanced_coloring, chi_nu_exact, sample_coloring, Coloring, IrsError};
use crate::perm::{FinitaryPermutation, Point};
use crate::thoma::{AlphaSpec, Rational};

/// Brute-force oracles enumerate all of S_n; 8! = 40320 keeps them fast.
pub const BRUTE_CAP: usize = 8;

#[derive(Debug, Error, PartialEq)]
pub enum AsymError {
    #[error("n = {0} exceeds the brute-force cap {BRUTE_CAP}")]
    NTooLarge(usize),
    #[error("cycle length {k} out of range 2..={n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("support point {point} outside the degree-{n} prefix")]
    SupportOutsidePrefix { point: Point, n: usize },
    #[error("sigma width mismatch: block system has {expected} nonempty blocks, sigma has {got}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("subgroup rank mismatch: block system has {expected} colours, subgroup rank is {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("schedule must be strictly increasing and nonempty")]
    BadSchedule,
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Irs(#[from] IrsError),
}

/// The blocks B_i^n of a coloured prefix: K_n = Π_{i∈I_n} Sym(B_i^n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSystem {
    n: usize,
    blocks: Vec<Vec<Point>>,
    dust: Vec<Point>,
}

impl BlockSystem {
    pub fn from_coloring(coloring: &Coloring) -> Self {
        let m = coloring.palette_size();
        let mut blocks = vec![Vec::new(); m];
        let mut dust = Vec::new();
        for (p, &c) in coloring.colors().iter().enumerate() {
            if c == 0 {
                dust.push(p as Point);
            } else {
                blocks[(c - 1) as usize].push(p as Point);
            }
        }
        Self {
            n: coloring.len(),
            blocks,
            dust,
        }
    }

    /// Contiguous blocks of the given sizes (colour 1 first), the rest dust.
    pub fn from_sizes(n: usize, sizes: &[usize]) -> Self {
        assert!(sizes.iter().sum::<usize>() <= n);
        let mut blocks = Vec::with_capacity(sizes.len());
        let mut next: Point = 0;
        for &s in sizes {
            blocks.push((next..next + s as Point).collect());
            next += s as Point;
        }
        let dust = (next..n as Point).collect();
        Self { n, blocks, dust }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of colours m (empty blocks included).
    pub fn m(&self) -> usize {
        self.blocks.len()
    }

    pub fn block(&self, i: usize) -> &[Point] {
        &self.blocks[i - 1]
    }

    pub fn dust(&self) -> &[Point] {
        &self.dust
    }

    /// I_n: colours with nonempty blocks, ascending.
    pub fn nonempty_colors(&self) -> Vec<usize> {
        (1..=self.m()).filter(|&i| !self.blocks[i - 1].is_empty()).collect()
    }

    /// colour_of[p] = colour of point p, 0 for dust.
    fn color_table(&self) -> Vec<u32> {
        let mut table = vec![0u32; self.n];
        for (idx, block) in self.blocks.iter().enumerate() {
            for &p in block {
                table[p as usize] = idx as u32 + 1;
            }
        }
        table
    }
}

pub fn blocks_from_coloring(coloring: &Coloring) -> BlockSystem {
    BlockSystem::from_coloring(coloring)
}

/// Irr_{H_n}(K_n): the sign characters of K_n/H_n ≅ (⊕_{I_n} C_i)/A_n,
/// i.e. the dual code of A_n = A ∩ ⊕_{i∈I_n} C_i, written over the
/// coordinates I_n (1-based positions in `colors`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientDual {
    colors: Vec<usize>,
    restricted_dim: usize,
    sigmas: Vec<DualCharacter>,
}

impl QuotientDual {
    /// The nonempty colours the local coordinates refer to.
    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    /// dim(A_n), the rank of the restricted subgroup.
    pub fn restricted_dim(&self) -> usize {
        self.restricted_dim
    }

    pub fn sigmas(&self) -> &[DualCharacter] {
        &self.sigmas
    }

    pub fn len(&self) -> usize {
        self.sigmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigmas.is_empty()
    }
}

/// A_n = A ∩ span(e_i : i ∈ I_n), computed through the annihilator
/// identity (A ∩ W)⊥ = A⊥ + W⊥, then restricted to the I_n coordinates
/// and dualized there.
pub fn quotient_dual(subgroup: &Gf2Subspace, bs: &BlockSystem) -> Result<QuotientDual, AsymError> {
    let m = bs.m();
    if subgroup.ambient_rank() != m {
        return Err(AsymError::RankMismatch {
            expected: m,
            got: subgroup.ambient_rank(),
        });
    }
    let colors = bs.nonempty_colors();
    let in_prefix: Vec<bool> = {
        let mut flags = vec![false; m + 1];
        for &i in &colors {
            flags[i] = true;
        }
        flags
    };

    // A⊥ + span(e_j : j ∉ I_n).
    let mut rows = subgroup.dual_code().basis();
    for j in 1..=m {
        if !in_prefix[j] {
            let mut e = SignVector::zero(m);
            e.flip_coord(j);
            rows.push(e);
        }
    }
    let a_n = Gf2Subspace::from_rows(m, &rows)?.dual_code();

    // Restrict to the I_n coordinates (all others are zero on A_n).
    let local_rank = colors.len();
    let local_rows: Vec<SignVector> = a_n
        .basis()
        .iter()
        .map(|row| {
            let mut v = SignVector::zero(local_rank);
            for (pos, &color) in colors.iter().enumerate() {
                if row.coord(color) {
                    v.flip_coord(pos + 1);
                }
            }
            v
        })
        .collect();
    let restricted = Gf2Subspace::from_rows(local_rank, &local_rows)?;
    let restricted_dim = restricted.dim();
    let sigmas = restricted
        .dual_code()
        .enumerate()?
        .into_iter()
        .map(DualCharacter::from_vector)
        .collect();
    Ok(QuotientDual {
        colors,
        restricted_dim,
        sigmas,
    })
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Closed form for a k-cycle: Σ_{i∈I_n} σ(i)^{k+1} C(|B_i^n|, k) / C(n, k).
pub fn induced_ratio_single_cycle(
    bs: &BlockSystem,
    sigma: &DualCharacter,
    k: usize,
) -> Result<Rational, AsymError> {
    let n = bs.n();
    if k < 2 || k > n {
        return Err(AsymError::KOutOfRange { k, n });
    }
    let colors = bs.nonempty_colors();
    if sigma.width() != colors.len() {
        return Err(AsymError::WidthMismatch {
            expected: colors.len(),
            got: sigma.width(),
        });
    }
    let mut numer = BigInt::zero();
    for (pos, &color) in colors.iter().enumerate() {
        let c = binomial(bs.block(color).len() as u64, k as u64);
        if k % 2 == 0 && sigma.sign_at(pos + 1) == -1 {
            numer -= c;
        } else {
            numer += c;
        }
    }
    Ok(Rational::new(numer, binomial(n as u64, k as u64)))
}

fn check_degree(bs: &BlockSystem, g: &FinitaryPermutation) -> Result<(), AsymError> {
    let n = bs.n();
    if n > BRUTE_CAP {
        return Err(AsymError::NTooLarge(n));
    }
    for p in g.support() {
        if p as usize >= n {
            return Err(AsymError::SupportOutsidePrefix { point: p, n });
        }
    }
    Ok(())
}

/// Heap's algorithm; calls f with each arrangement of 0..n exactly once.
fn for_each_permutation<F: FnMut(&[usize])>(n: usize, mut f: F) {
    let mut arr: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&arr);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                arr.swap(0, i);
            } else {
                arr.swap(c[i], i);
            }
            f(&arr);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product::<u64>().max(1)
}

/// Walk the cycles of the conjugate h = s g s⁻¹ (as arrays) and fold the
/// per-block parity; None when h leaves K_n (touches dust or crosses
/// blocks). Returns the local sign vector over I_n positions.
fn conjugate_sign_vector(
    s: &[usize],
    g_arr: &[usize],
    color_of: &[u32],
    local_of_color: &[usize],
    local_rank: usize,
    h_buf: &mut [usize],
    seen: &mut [bool],
) -> Option<SignVector> {
    let n = g_arr.len();
    for p in 0..n {
        h_buf[s[p]] = s[g_arr[p]];
    }
    seen.fill(false);
    let mut vector = SignVector::zero(local_rank);
    for start in 0..n {
        if seen[start] || h_buf[start] == start {
            seen[start] = true;
            continue;
        }
        let color = color_of[start];
        if color == 0 {
            return None;
        }
        let mut len = 0usize;
        let mut p = start;
        while !seen[p] {
            if color_of[p] != color {
                return None;
            }
            seen[p] = true;
            len += 1;
            p = h_buf[p];
        }
        if len % 2 == 0 {
            vector.flip_coord(local_of_color[color as usize]);
        }
    }
    Some(vector)
}

/// Brute-force induced ratio σ^{S_n}(g)/σ^{S_n}(1), evaluated literally as
/// Σ_{s∈S_n} [s g s⁻¹ ∈ K_n]·σ(sign vector of s g s⁻¹) / |S_n|.
pub fn induced_ratio_brute(
    bs: &BlockSystem,
    sigma: &DualCharacter,
    g: &FinitaryPermutation,
) -> Result<Rational, AsymError> {
    check_degree(bs, g)?;
    let colors = bs.nonempty_colors();
    if sigma.width() != colors.len() {
        return Err(AsymError::WidthMismatch {
            expected: colors.len(),
            got: sigma.width(),
        });
    }
    let n = bs.n();
    let g_arr: Vec<usize> = (0..n).map(|p| g.apply(p as Point) as usize).collect();
    let color_of = bs.color_table();
    let mut local_of_color = vec![0usize; bs.m() + 1];
    for (pos, &c) in colors.iter().enumerate() {
        local_of_color[c] = pos + 1;
    }

    let mut sum = 0i64;
    let mut h_buf = vec![0usize; n];
    let mut seen = vec![false; n];
    for_each_permutation(n, |s| {
        if let Some(v) = conjugate_sign_vector(
            s,
            &g_arr,
            &color_of,
            &local_of_color,
            colors.len(),
            &mut h_buf,
            &mut seen,
        ) {
            sum += sigma.eval(&v).expect("local width") as i64;
        }
    });
    Ok(Rational::new(sum.into(), factorial(n).into()))
}

/// Permutation-character ratio |Fix_{S_n/H_n}(g)| / [S_n : H_n], evaluated
/// as |{s ∈ S_n : s⁻¹ g s ∈ H_n}| / |S_n| with
/// H_n = {h ∈ K_n : sign vector of h ∈ A}.
pub fn perm_char_ratio_brute(
    bs: &BlockSystem,
    subgroup: &Gf2Subspace,
    g: &FinitaryPermutation,
) -> Result<Rational, AsymError> {
    check_degree(bs, g)?;
    let m = bs.m();
    if subgroup.ambient_rank() != m {
        return Err(AsymError::RankMismatch {
            expected: m,
            got: subgroup.ambient_rank(),
        });
    }
    let n = bs.n();
    let g_arr: Vec<usize> = (0..n).map(|p| g.apply(p as Point) as usize).collect();
    let color_of = bs.color_table();
    // Identity layout: local position = colour index, rank m, so the sign
    // vector can be tested against A directly.
    let local_of_color: Vec<usize> = (0..=m).collect();

    let mut count = 0i64;
    let mut h_buf = vec![0usize; n];
    let mut seen = vec![false; n];
    for_each_permutation(n, |s| {
        if let Some(v) = conjugate_sign_vector(
            s,
            &g_arr,
            &color_of,
            &local_of_color,
            m,
            &mut h_buf,
            &mut seen,
        ) {
            if subgroup.contains(&v).expect("rank m vector") {
                count += 1;
            }
        }
    });
    Ok(Rational::new(count.into(), factorial(n).into()))
}

/// Exact Clifford average: mean over σ ∈ Irr_{H_n}(K_n) of the brute-force
/// induced ratio. Equals `perm_char_ratio_brute` on the nose.
pub fn clifford_average(
    bs: &BlockSystem,
    subgroup: &Gf2Subspace,
    g: &FinitaryPermutation,
) -> Result<Rational, AsymError> {
    let dual = quotient_dual(subgroup, bs)?;
    let mut sum = Rational::zero();
    for sigma in dual.sigmas() {
        sum += induced_ratio_brute(bs, sigma, g)?;
    }
    Ok(sum / Rational::from_integer(dual.len().into()))
}

/// Approximation-mode Clifford average: the single-cycle closed form per
/// cycle, multiplied across cycles, then averaged over the quotient dual.
/// Exact only in the n → ∞ limit for multi-cycle g; any n is allowed.
pub fn clifford_average_closed_form(
    bs: &BlockSystem,
    subgroup: &Gf2Subspace,
    g: &FinitaryPermutation,
) -> Result<Rational, AsymError> {
    for p in g.support() {
        if p as usize >= bs.n() {
            return Err(AsymError::SupportOutsidePrefix { point: p, n: bs.n() });
        }
    }
    let dual = quotient_dual(subgroup, bs)?;
    let mut sum = Rational::zero();
    for sigma in dual.sigmas() {
        let mut product = Rational::one();
        for (k, c) in g.cycle_type().iter() {
            let factor = induced_ratio_single_cycle(bs, sigma, k)?;
            for _ in 0..c {
                product *= &factor;
            }
        }
        sum += product;
    }
    Ok(sum / Rational::from_integer(dual.len().into()))
}

#[derive(Debug, Clone, PartialEq)]
pub enum ColoringMode {
    Balanced,
    Sampled { seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub ratio: Rational,
    pub limit: Rational,
    pub abs_error: Rational,
}

impl ConvergenceRow {
    pub fn ratio_f64(&self) -> f64 {
        self.ratio.to_f64().expect("ratio fits in f64")
    }

    pub fn abs_error_f64(&self) -> f64 {
        self.abs_error.to_f64().expect("error fits in f64")
    }
}

/// Track the closed-form ratio along a schedule of prefix lengths against
/// the limit value χ_{ν^A_α}(g).
pub fn convergence_study(
    alpha: &AlphaSpec,
    subgroup: &Gf2Subspace,
    g: &FinitaryPermutation,
    n_schedule: &[usize],
    mode: &ColoringMode,
) -> Result<Vec<ConvergenceRow>, AsymError> {
    if n_schedule.is_empty() || n_schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(AsymError::BadSchedule);
    }
    let n_min = n_schedule[0];
    for p in g.support() {
        if p as usize >= n_min {
            return Err(AsymError::SupportOutsidePrefix { point: p, n: n_min });
        }
    }
    let limit = chi_nu_exact(alpha, subgroup, g)?;
    let mut rows = Vec::with_capacity(n_schedule.len());
    for &n in n_schedule {
        let coloring = match mode {
            ColoringMode::Balanced => balanced_coloring(alpha, n),
            ColoringMode::Sampled { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_stream(n as u64);
                sample_coloring(alpha, n, &mut rng)
            }
        };
        let bs = BlockSystem::from_coloring(&coloring);
        let ratio = clifford_average_closed_form(&bs, subgroup, g)?;
        let abs_error = (&ratio - &limit).abs();
        rows.push(ConvergenceRow {
            n,
            ratio,
            limit: limit.clone(),
            abs_error,
        });
    }
    Ok(rows)
}
