//! Finitary permutations of the natural numbers.
//!
//! A [`FinitaryPermutation`] is a bijection of ℕ that moves only finitely
//! many points. It is stored sparsely as the map of its non-fixed points,
//! so the identity on an infinite domain costs nothing. Cycle notation is
//! the external form: `"(0 1 2)(3 4)"`, with `"()"` (or the empty string)
//! for the identity.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Points are naturals below 2^32; larger values are rejected at parse or
/// construction time.
pub type Point = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("malformed cycle notation: {0}")]
    Malformed(String),
    #[error("point {0} repeated within or across cycles")]
    RepeatedPoint(u64),
    #[error("cycle of length 1 at point {0}")]
    SingletonCycle(u64),
    #[error("point {0} exceeds the supported range (must be < 2^32)")]
    PointTooLarge(u64),
}

/// A permutation of ℕ with finite support, stored as its non-fixed points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FinitaryPermutation {
    // point -> image, containing no fixed points; keys and values coincide
    // as sets (support closure).
    moved: BTreeMap<Point, Point>,
}

/// A single cycle in canonical form: distinct points, length >= 2, first
/// entry minimal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    points: Vec<Point>,
}

impl Cycle {
    /// The points of the cycle in canonical order.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Cycle length (always >= 2).
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Cycle type of a permutation: a map `k -> c_k` counting the k-cycles,
/// with only k >= 2 and c_k >= 1 present.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CycleType {
    counts: BTreeMap<usize, usize>,
}

impl CycleType {
    /// Number of k-cycles.
    pub fn count(&self, k: usize) -> usize {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    /// Iterate `(k, c_k)` pairs in increasing k.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.counts.iter().map(|(&k, &c)| (k, c))
    }

    /// Cycle lengths with multiplicity, e.g. `(0 1)(2 3)(4 5 6)` gives
    /// `[2, 2, 3]`.
    pub fn lengths(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (&k, &c) in &self.counts {
            for _ in 0..c {
                out.push(k);
            }
        }
        out
    }

    /// Total number of nontrivial cycles.
    pub fn num_cycles(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

impl FinitaryPermutation {
    /// The identity permutation.
    pub fn identity() -> Self {
        Self::default()
    }

    /// Build the product of the given disjoint cycles.
    ///
    /// Each cycle must have length >= 2, all points must be distinct across
    /// all cycles, and every point must be < 2^32.
    pub fn from_cycles<I, C>(cycles: I) -> Result<Self, PermError>
    where
        I: IntoIterator<Item = C>,
        C: AsRef<[u64]>,
    {
        let mut moved: BTreeMap<Point, Point> = BTreeMap::new();
        for cycle in cycles {
            let cycle = cycle.as_ref();
            if cycle.len() == 1 {
                return Err(PermError::SingletonCycle(cycle[0]));
            }
            if cycle.is_empty() {
                continue;
            }
            let mut pts = Vec::with_capacity(cycle.len());
            for &p in cycle {
                let p32 =
                    Point::try_from(p).map_err(|_| PermError::PointTooLarge(p))?;
                pts.push(p32);
            }
            for w in 0..pts.len() {
                let from = pts[w];
                let to = pts[(w + 1) % pts.len()];
                if moved.insert(from, to).is_some() {
                    return Err(PermError::RepeatedPoint(from as u64));
                }
            }
        }
        // Disjointness plus length >= 2 already rules out fixed points.
        Ok(Self { moved })
    }

    /// Image of a point.
    pub fn apply(&self, p: Point) -> Point {
        self.moved.get(&p).copied().unwrap_or(p)
    }

    /// The support, in increasing order.
    pub fn support(&self) -> impl Iterator<Item = Point> + '_ {
        self.moved.keys().copied()
    }

    /// Number of moved points.
    pub fn support_size(&self) -> usize {
        self.moved.len()
    }

    /// Largest moved point, or `None` for the identity.
    pub fn max_point(&self) -> Option<Point> {
        self.moved.keys().next_back().copied()
    }

    pub fn is_identity(&self) -> bool {
        self.moved.is_empty()
    }

    /// Composition `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut moved = BTreeMap::new();
        for &p in self.moved.keys().chain(other.moved.keys()) {
            let image = self.apply(other.apply(p));
            if image != p {
                moved.insert(p, image);
            }
        }
        Self { moved }
    }

    /// The inverse permutation.
    pub fn inverse(&self) -> Self {
        let moved = self.moved.iter().map(|(&p, &q)| (q, p)).collect();
        Self { moved }
    }

    /// Conjugation `h self h⁻¹`, i.e. `self` with its points relabelled
    /// through `h`. Preserves the cycle type.
    pub fn conjugated_by(&self, h: &Self) -> Self {
        let moved = self
            .moved
            .iter()
            .map(|(&p, &q)| (h.apply(p), h.apply(q)))
            .collect();
        Self { moved }
    }

    /// Disjoint cycle decomposition, canonical: every cycle starts at its
    /// minimum and cycles are sorted by minimum. The identity gives `[]`.
    pub fn cycle_decomposition(&self) -> Vec<Cycle> {
        let mut cycles = Vec::new();
        let mut seen: BTreeMap<Point, ()> = BTreeMap::new();
        for &start in self.moved.keys() {
            if seen.contains_key(&start) {
                continue;
            }
            let mut pts = vec![start];
            seen.insert(start, ());
            let mut cur = self.apply(start);
            while cur != start {
                pts.push(cur);
                seen.insert(cur, ());
                cur = self.apply(cur);
            }
            cycles.push(Cycle { points: pts });
        }
        // BTreeMap iteration starts each cycle at its minimum and yields
        // cycles in order of minimum already.
        cycles
    }

    /// The cycle type `k -> c_k`.
    pub fn cycle_type(&self) -> CycleType {
        let mut counts = BTreeMap::new();
        for cycle in self.cycle_decomposition() {
            *counts.entry(cycle.len()).or_insert(0) += 1;
        }
        CycleType { counts }
    }

    /// Sign of the permutation: `(-1)^(Σ (length - 1))` over its cycles.
    pub fn sign(&self) -> i32 {
        if self.parity_odd() {
            -1
        } else {
            1
        }
    }

    /// True iff the permutation is odd. A k-cycle is odd exactly when k is
    /// even.
    pub fn parity_odd(&self) -> bool {
        let mut transpositions = 0usize;
        for cycle in self.cycle_decomposition() {
            transpositions += cycle.len() - 1;
        }
        transpositions % 2 == 1
    }
}

impl fmt::Display for FinitaryPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "()");
        }
        for cycle in self.cycle_decomposition() {
            write!(f, "(")?;
            for (i, p) in cycle.points().iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl FromStr for FinitaryPermutation {
    type Err = PermError;

    /// Parse cycle notation: `perm := cycle*`, `cycle := "(" nat (ws nat)+ ")"`.
    /// `"()"` and the empty string denote the identity. Cycles must be
    /// disjoint.
    fn from_str(text: &str) -> Result<Self, PermError> {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Ok(Self::identity());
        }
        let mut cycles: Vec<Vec<u64>> = Vec::new();
        let mut rest = trimmed;
        while !rest.is_empty() {
            let Some(stripped) = rest.strip_prefix('(') else {
                return Err(PermError::Malformed(format!(
                    "expected '(' at {rest:?}"
                )));
            };
            let Some(close) = stripped.find(')') else {
                return Err(PermError::Malformed("unclosed cycle".into()));
            };
            let body = &stripped[..close];
            if body.contains('(') {
                return Err(PermError::Malformed("nested '('".into()));
            }
            let mut cycle = Vec::new();
            for token in body.split(' ').filter(|t| !t.is_empty()) {
                let p: u64 = token.parse().map_err(|_| {
                    PermError::Malformed(format!("bad point {token:?}"))
                })?;
                cycle.push(p);
            }
            // "()" denotes the identity; an explicitly empty cycle is a
            // no-op factor.
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            rest = stripped[close + 1..].trim_start();
        }
        Self::from_cycles(cycles)
    }
}
