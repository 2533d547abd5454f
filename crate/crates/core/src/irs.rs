//! The ergodic invariant random subgroups ν^A_α of Fin(ℕ).
//!
//! A coloring ξ of a prefix of ℕ with colours {0} ∪ I (0 is dust) induces
//! the subgroup H_ξ of permutations that fix the dust, preserve every
//! colour block B_i, and whose per-block sign vector lies in A ≤ S_α.
//! Sampling ξ from the product measure μ_α makes H_ξ an invariant random
//! subgroup; its character χ_ν(g) = ν({H : g ∈ H}) is computed here two
//! ways:
//!
//! * exactly, as the sum over assignments of colours to the cycles of g of
//!   the assignment probability times a 0/1 sign-membership indicator,
//! * by seeded Monte Carlo over colorings.
//!
//! The Kingman paintbox layer exposes the induced random partition of
//! {0..n−1} (dust split into singletons) for the class-size dichotomy
//! tests.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{Gf2Subspace, SignVector};
use crate::perm::{FinitaryPermutation, Point};
use crate::thoma::{AlphaSpec, Rational};

/// Exact evaluation refuses permutations with more nontrivial cycles.
pub const CYCLE_CAP: usize = 12;

/// Exact evaluation refuses assignment spaces larger than 2^WORK_CAP_BITS.
pub const WORK_CAP_BITS: u32 = 24;

/// Coordinate permutation searches refuse groups larger than this.
pub const COINCIDENCE_CAP: u64 = 1 << 20;

#[derive(Debug, Error, PartialEq)]
pub enum IrsError {
    #[error("width mismatch: alpha has {expected} colours, subgroup rank is {got}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("colour {value} out of range: palette has {m} colours")]
    ColorOutOfRange { value: u32, m: usize },
    #[error("support point {point} outside the coloured prefix of length {prefix}")]
    SupportExceedsPrefix { point: Point, prefix: usize },
    #[error("{cycles} nontrivial cycles exceed the exact-evaluation cap {CYCLE_CAP}")]
    CycleCapExceeded { cycles: usize },
    #[error("m^t = {m}^{t} assignments exceed the work cap 2^{WORK_CAP_BITS}")]
    WorkCapExceeded { m: usize, t: usize },
    #[error("equal-frequency coordinate group of size {0} is too large to search")]
    CoincidenceCapExceeded(usize),
}

/// A colouring of the prefix {0..n−1}: entry 0 is dust, entries 1..=m are
/// the colours of I.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    m: usize,
    colors: Vec<u32>,
}

impl Coloring {
    pub fn new(m: usize, colors: Vec<u32>) -> Result<Self, IrsError> {
        for &c in &colors {
            if c as usize > m {
                return Err(IrsError::ColorOutOfRange { value: c, m });
            }
        }
        Ok(Self { m, colors })
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn palette_size(&self) -> usize {
        self.m
    }

    pub fn color(&self, point: Point) -> Option<u32> {
        self.colors.get(point as usize).copied()
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// Per-colour block sizes, indexed 1..=m; dust is not included.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.m];
        for &c in &self.colors {
            if c > 0 {
                sizes[(c - 1) as usize] += 1;
            }
        }
        sizes
    }

    /// The shift action: (w·ξ)(p) = ξ(w⁻¹ p). Requires supp(w) inside the
    /// prefix so no colour is moved off the edge.
    pub fn permuted(&self, w: &FinitaryPermutation) -> Result<Coloring, IrsError> {
        let n = self.len();
        let winv = w.inverse();
        for p in w.support() {
            if p as usize >= n {
                return Err(IrsError::SupportExceedsPrefix { point: p, prefix: n });
            }
        }
        let colors = (0..n as Point)
            .map(|p| self.colors[winv.apply(p) as usize])
            .collect();
        Ok(Coloring { m: self.m, colors })
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, c) in self.colors.iter().enumerate() {
            if idx > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Exact sampler for p_α: colour i with probability α_i, dust otherwise.
/// All thresholds live over the common denominator, so a single uniform
/// integer draw decides the colour with no floating error.
struct ColorSampler {
    denom: BigUint,
    cumulative: Vec<BigUint>,
    // Fast path when the common denominator fits in a machine word.
    small: Option<(u64, Vec<u64>)>,
}

impl ColorSampler {
    fn new(alpha: &AlphaSpec) -> Self {
        let mut denom = BigUint::one();
        for a in alpha.alphas() {
            denom = denom.lcm(&a.denom().to_biguint().expect("positive denominator"));
        }
        let mut cumulative = Vec::with_capacity(alpha.m());
        let mut acc = BigUint::zero();
        for a in alpha.alphas() {
            let numer = a.numer().to_biguint().expect("positive numerator");
            let scale = &denom / a.denom().to_biguint().expect("positive denominator");
            acc += numer * scale;
            cumulative.push(acc.clone());
        }
        let small = denom.to_u64().map(|d| {
            let cums = cumulative
                .iter()
                .map(|c| c.to_u64().expect("cumulative below denominator"))
                .collect();
            (d, cums)
        });
        Self {
            denom,
            cumulative,
            small,
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        if let Some((d, cums)) = &self.small {
            let u = rng.random_range(0..*d);
            for (idx, &c) in cums.iter().enumerate() {
                if u < c {
                    return idx as u32 + 1;
                }
            }
            return 0;
        }
        let u = sample_below(rng, &self.denom);
        for (idx, c) in self.cumulative.iter().enumerate() {
            if u < *c {
                return idx as u32 + 1;
            }
        }
        0
    }
}

/// Uniform BigUint below `bound` by rejection on `bound.bits()`-bit draws.
fn sample_below<R: Rng + ?Sized>(rng: &mut R, bound: &BigUint) -> BigUint {
    let bits = bound.bits();
    debug_assert!(bits > 0);
    let words = bits.div_ceil(32) as usize;
    let top_mask: u32 = if bits % 32 == 0 {
        u32::MAX
    } else {
        (1u32 << (bits % 32)) - 1
    };
    loop {
        let mut digits: Vec<u32> = (0..words).map(|_| rng.next_u32()).collect();
        digits[words - 1] &= top_mask;
        let v = BigUint::new(digits);
        if &v < bound {
            return v;
        }
    }
}

/// ξ ~ μ_α restricted to the prefix {0..n−1}: i.i.d. draws from p_α.
pub fn sample_coloring<R: Rng + ?Sized>(alpha: &AlphaSpec, n: usize, rng: &mut R) -> Coloring {
    let sampler = ColorSampler::new(alpha);
    let colors = (0..n).map(|_| sampler.draw(rng)).collect();
    Coloring {
        m: alpha.m(),
        colors,
    }
}

/// Deterministic colouring with exact largest-remainder block sizes and
/// near-proportional prefixes: position p gets the colour (dust included)
/// with the largest remaining deficit against its final quota.
pub fn balanced_coloring(alpha: &AlphaSpec, n: usize) -> Coloring {
    let m = alpha.m();
    // Largest-remainder counts for colours 1..=m and dust (index 0).
    let n_big = Rational::from_integer(n.into());
    let mut quotas: Vec<Rational> = Vec::with_capacity(m + 1);
    quotas.push(alpha.alpha0() * &n_big);
    for a in alpha.alphas() {
        quotas.push(a * &n_big);
    }
    let mut counts: Vec<u64> = quotas.iter().map(|q| q.floor().to_integer().to_u64().unwrap()).collect();
    let assigned: u64 = counts.iter().sum();
    let mut order: Vec<usize> = (0..=m).collect();
    order.sort_by(|&a, &b| {
        let ra = &quotas[a] - Rational::from_integer(counts[a].into());
        let rb = &quotas[b] - Rational::from_integer(counts[b].into());
        rb.cmp(&ra).then(a.cmp(&b))
    });
    for idx in 0..(n as u64 - assigned) as usize {
        counts[order[idx]] += 1;
    }

    // Greedy max-deficit assignment; deficits compared with pure integer
    // arithmetic: deficit_c ∝ counts[c]·(p+1) − assigned[c]·n.
    let mut placed = vec![0u64; m + 1];
    let mut colors = Vec::with_capacity(n);
    for p in 0..n as u64 {
        let mut best = 0usize;
        let mut best_score = i128::MIN;
        for c in 0..=m {
            let score = counts[c] as i128 * (p as i128 + 1) - placed[c] as i128 * n as i128;
            if score > best_score && placed[c] < counts[c] {
                best = c;
                best_score = score;
            }
        }
        placed[best] += 1;
        colors.push(best as u32);
    }
    Coloring { m, colors }
}

/// H_ξ = s_ξ⁻¹(A) for a concrete colouring, queried through `membership`.
#[derive(Debug, Clone)]
pub struct SampledSubgroup {
    coloring: Coloring,
    subgroup: Gf2Subspace,
    alpha: AlphaSpec,
}

impl SampledSubgroup {
    pub fn new(
        coloring: Coloring,
        subgroup: Gf2Subspace,
        alpha: AlphaSpec,
    ) -> Result<Self, IrsError> {
        if subgroup.ambient_rank() != alpha.m() {
            return Err(IrsError::WidthMismatch {
                expected: alpha.m(),
                got: subgroup.ambient_rank(),
            });
        }
        if coloring.palette_size() != alpha.m() {
            return Err(IrsError::WidthMismatch {
                expected: alpha.m(),
                got: coloring.palette_size(),
            });
        }
        Ok(Self {
            coloring,
            subgroup,
            alpha,
        })
    }

    /// Sample ξ ~ μ_α on a prefix of length n and wrap H_ξ.
    pub fn sample<R: Rng + ?Sized>(
        alpha: &AlphaSpec,
        subgroup: &Gf2Subspace,
        n: usize,
        rng: &mut R,
    ) -> Result<Self, IrsError> {
        let coloring = sample_coloring(alpha, n, rng);
        Self::new(coloring, subgroup.clone(), alpha.clone())
    }

    pub fn coloring(&self) -> &Coloring {
        &self.coloring
    }

    pub fn subgroup(&self) -> &Gf2Subspace {
        &self.subgroup
    }

    pub fn alpha(&self) -> &AlphaSpec {
        &self.alpha
    }

    /// g ∈ H_ξ iff supp(g) avoids dust, every cycle stays inside one colour
    /// block, and the per-block sign vector lies in A.
    pub fn membership(&self, g: &FinitaryPermutation) -> Result<bool, IrsError> {
        let n = self.coloring.len();
        for p in g.support() {
            if p as usize >= n {
                return Err(IrsError::SupportExceedsPrefix { point: p, prefix: n });
            }
        }
        Ok(membership_by_color(
            |p| self.coloring.colors[p as usize],
            &self.subgroup,
            g,
        ))
    }
}

/// Core membership predicate over any colour assignment on supp(g).
fn membership_by_color<F>(color_of: F, subgroup: &Gf2Subspace, g: &FinitaryPermutation) -> bool
where
    F: Fn(Point) -> u32,
{
    let m = subgroup.ambient_rank();
    let mut vector = SignVector::zero(m);
    for cycle in g.cycle_decomposition() {
        let points = cycle.points();
        let c = color_of(points[0]);
        if c == 0 || points[1..].iter().any(|&p| color_of(p) != c) {
            return false;
        }
        // A k-cycle is odd exactly when k is even.
        if points.len() % 2 == 0 {
            vector.flip_coord(c as usize);
        }
    }
    subgroup.contains(&vector).expect("vector built at subgroup rank")
}

/// χ_{ν^A_α}(g), exactly: sum over colour assignments to the cycles of g
/// of the assignment weight Πα_{i_ℓ}^{k_ℓ}, counted when the combined sign
/// vector lands in A.
pub fn chi_nu_exact(
    alpha: &AlphaSpec,
    subgroup: &Gf2Subspace,
    g: &FinitaryPermutation,
) -> Result<Rational, IrsError> {
    let m = alpha.m();
    if subgroup.ambient_rank() != m {
        return Err(IrsError::WidthMismatch {
            expected: m,
            got: subgroup.ambient_rank(),
        });
    }
    let cycles = g.cycle_decomposition();
    let t = cycles.len();
    if t == 0 {
        return Ok(Rational::one());
    }
    if t > CYCLE_CAP {
        return Err(IrsError::CycleCapExceeded { cycles: t });
    }
    if m > 1 {
        let work = (m as u64).checked_pow(t as u32);
        if work.is_none_or(|w| w > 1 << WORK_CAP_BITS) {
            return Err(IrsError::WorkCapExceeded { m, t });
        }
    }
    if m == 0 {
        // Empty support: every nontrivial g leaves the (trivial) subgroup.
        return Ok(Rational::zero());
    }

    // powers[l][i-1] = α_i^{k_l}; parity[l] = true when cycle l is odd.
    let powers: Vec<Vec<Rational>> = cycles
        .iter()
        .map(|c| {
            (1..=m)
                .map(|i| num_traits::Pow::pow(alpha.alpha(i), c.len() as i32))
                .collect()
        })
        .collect();
    let parity: Vec<bool> = cycles.iter().map(|c| c.len() % 2 == 0).collect();

    let mut total = Rational::zero();
    let mut vector = SignVector::zero(m);
    let mut stack: Vec<Rational> = vec![Rational::one()];
    // Depth-first over assignments i ∈ I^t with running product and sign.
    fn descend(
        level: usize,
        t: usize,
        m: usize,
        powers: &[Vec<Rational>],
        parity: &[bool],
        subgroup: &Gf2Subspace,
        vector: &mut SignVector,
        stack: &mut Vec<Rational>,
        total: &mut Rational,
    ) {
        if level == t {
            if subgroup.contains(vector).expect("rank matches") {
                *total += stack.last().unwrap();
            }
            return;
        }
        for i in 1..=m {
            let next = stack.last().unwrap() * &powers[level][i - 1];
            stack.push(next);
            if parity[level] {
                vector.flip_coord(i);
            }
            descend(level + 1, t, m, powers, parity, subgroup, vector, stack, total);
            if parity[level] {
                vector.flip_coord(i);
            }
            stack.pop();
        }
    }
    descend(
        0, t, m, &powers, &parity, subgroup, &mut vector, &mut stack, &mut total,
    );
    Ok(total)
}

/// A seeded Monte Carlo estimate with its binomial standard error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub estimate: f64,
    pub stderr: f64,
    pub trials: u64,
    pub prefix_length: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

impl EstimateReport {
    /// |estimate − reference| ≤ 4·stderr, the consistency gate used by the
    /// test suites. A zero-variance estimate must match outright.
    pub fn consistent_with(&self, reference: f64) -> bool {
        (self.estimate - reference).abs() <= 4.0 * self.stderr.max(f64::EPSILON)
    }
}

/// Estimate χ_ν(g) = ν({H : g ∈ H}) as the frequency of g ∈ H_ξ over
/// seeded colourings. Trial j draws from the ChaCha stream (seed, j), so
/// the result is independent of how trials are scheduled across threads.
///
/// Only the colours on supp(g) are drawn: the membership event depends on
/// nothing else, so the estimate has exactly the distribution of full
/// prefix sampling at any prefix containing the support.
pub fn monte_carlo_chi_nu(
    alpha: &AlphaSpec,
    subgroup: &Gf2Subspace,
    g: &FinitaryPermutation,
    prefix_length: usize,
    trials: u64,
    seed: u64,
) -> Result<EstimateReport, IrsError> {
    if subgroup.ambient_rank() != alpha.m() {
        return Err(IrsError::WidthMismatch {
            expected: alpha.m(),
            got: subgroup.ambient_rank(),
        });
    }
    for p in g.support() {
        if p as usize >= prefix_length {
            return Err(IrsError::SupportExceedsPrefix {
                point: p,
                prefix: prefix_length,
            });
        }
    }
    let sampler = ColorSampler::new(alpha);
    let support: Vec<Point> = g.support().into_iter().collect();

    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|j| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(j);
            let colors: BTreeMap<Point, u32> = support
                .iter()
                .map(|&p| (p, sampler.draw(&mut rng)))
                .collect();
            u64::from(membership_by_color(|p| colors[&p], subgroup, g))
        })
        .sum();

    let p_hat = if trials == 0 { 0.0 } else { hits as f64 / trials as f64 };
    let stderr = (p_hat * (1.0 - p_hat) / trials as f64).sqrt();
    Ok(EstimateReport {
        estimate: p_hat,
        stderr,
        trials,
        prefix_length,
        seed,
        exact: None,
    })
}

/// The paintbox partition of {0..n−1}: one class per nonempty colour
/// block, dust split into singletons. Classes sorted by minimum.
pub fn paintbox_partition<R: Rng + ?Sized>(
    alpha: &AlphaSpec,
    n: usize,
    rng: &mut R,
) -> Vec<Vec<Point>> {
    let coloring = sample_coloring(alpha, n, rng);
    partition_of(&coloring)
}

pub fn partition_of(coloring: &Coloring) -> Vec<Vec<Point>> {
    let mut blocks: BTreeMap<u32, Vec<Point>> = BTreeMap::new();
    let mut classes: Vec<Vec<Point>> = Vec::new();
    for (p, &c) in coloring.colors().iter().enumerate() {
        if c == 0 {
            classes.push(vec![p as Point]);
        } else {
            blocks.entry(c).or_default().push(p as Point);
        }
    }
    classes.extend(blocks.into_values());
    classes.sort_by_key(|class| class[0]);
    classes
}

/// Aggregated class-size counts over repeated paintbox draws.
pub fn class_size_histogram<R: Rng + ?Sized>(
    alpha: &AlphaSpec,
    n: usize,
    rng: &mut R,
    repetitions: usize,
) -> BTreeMap<usize, u64> {
    let mut histogram = BTreeMap::new();
    for _ in 0..repetitions {
        for class in paintbox_partition(alpha, n, rng) {
            *histogram.entry(class.len()).or_insert(0) += 1;
        }
    }
    histogram
}

fn permutations_of(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (idx, &head) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(idx);
        for mut tail in permutations_of(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// All coordinate permutations preserving the level sets of α (the group
/// P = Π_j Sym(I_j)), as 1-based lookup vectors.
fn equal_alpha_permutations(alpha: &AlphaSpec) -> Result<Vec<Vec<usize>>, IrsError> {
    let classes = alpha.equal_value_classes();
    let mut size: u64 = 1;
    for class in &classes {
        if class.len() > 20 {
            return Err(IrsError::CoincidenceCapExceeded(class.len()));
        }
        for f in 1..=class.len() as u64 {
            size = size.saturating_mul(f);
        }
        if size > COINCIDENCE_CAP {
            return Err(IrsError::CoincidenceCapExceeded(class.len()));
        }
    }
    let mut perms: Vec<Vec<usize>> = vec![(1..=alpha.m()).collect()];
    for class in &classes {
        let arrangements = permutations_of(class);
        let mut next = Vec::with_capacity(perms.len() * arrangements.len());
        for base in &perms {
            for arr in &arrangements {
                let mut p = base.clone();
                for (pos, &val) in class.iter().zip(arr.iter()) {
                    p[pos - 1] = val;
                }
                next.push(p);
            }
        }
        perms = next;
    }
    Ok(perms)
}

/// Do A₁ and A₂ induce the same IRS? True iff χ_ν agrees on the whole
/// suite and A₂ is the image of A₁ under a permutation of coordinates
/// within equal-α groups.
pub fn irs_coincidence_check(
    alpha: &AlphaSpec,
    a1: &Gf2Subspace,
    a2: &Gf2Subspace,
    g_suite: &[FinitaryPermutation],
) -> Result<bool, IrsError> {
    if a1.ambient_rank() != a2.ambient_rank() {
        return Err(IrsError::WidthMismatch {
            expected: a1.ambient_rank(),
            got: a2.ambient_rank(),
        });
    }
    for g in g_suite {
        if chi_nu_exact(alpha, a1, g)? != chi_nu_exact(alpha, a2, g)? {
            return Ok(false);
        }
    }
    let related = equal_alpha_permutations(alpha)?
        .iter()
        .any(|p| &a1.permute_coordinates(p) == a2);
    Ok(related)
}
