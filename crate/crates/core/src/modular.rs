//! Exponent sets and the solution tuples of their congruence systems.
//!
//! For a prime `p`, an exponent set `D = {d_1, ..., d_n}` of nonzero vectors
//! in `N^r` and a length `m >= 1`, a solution tuple is
//! `U = (u_1, ..., u_n)`, `0 <= u_i <= p^m - 1`, with
//!
//! ```text
//!   sum_i u_i * d_i  = 0  (mod p^m - 1)   componentwise, and
//!   sum_i u_i * d_ij > 0  for every coordinate j.
//! ```
//!
//! The weight of `U` is the total base-p digit sum of its entries and its
//! density is `weight / ((p-1) * m)`.  The quotient
//! `(sum_i u_i d_i) / (p^m - 1)` is a positive integer vector, the multiplier
//! vector of `U`; multiplier vectors of the digit-rotation orbit of a solution
//! are the node sequence the density engine walks, and each coordinate is at
//! most the column sum `D_j = sum_i d_ij`.

use crate::basep;
use crate::{Config, Error, Natural, Rat, Result};
use num::{One, Zero};
use std::collections::BTreeSet;

/// Largest admissible exponent entry; keeps all internal sums inside u128.
pub const MAX_EXPONENT: u64 = 1 << 40;

/// A validated exponent set: prime `p` plus nonzero vectors in `N^r`.
///
/// Vectors are stored sorted lexicographically and free of duplicates;
/// solution tuples index this sorted order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentSet {
    p: u64,
    dim: usize,
    vectors: Vec<Vec<u64>>,
    normalized: bool,
}

/// Outcome of [`ExponentSet::normalize`].
#[derive(Debug, Clone)]
pub struct Normalization {
    pub set: ExponentSet,
    /// `(original, reduced, k)` for vectors divided by `p^k`, `k >= 1`.
    pub reductions: Vec<(Vec<u64>, Vec<u64>, u32)>,
    /// Originals that collapsed onto an already-present reduced vector.
    pub merged: Vec<Vec<u64>>,
}

impl ExponentSet {
    /// Validates and canonically orders an exponent set.
    ///
    /// Requirements: `p` prime; at least one vector; all vectors of one
    /// positive dimension with entries at most [`MAX_EXPONENT`]; no zero
    /// vector; no duplicates; every coordinate positive in some vector.
    pub fn new(p: u64, vectors: Vec<Vec<u64>>) -> Result<Self> {
        basep::check_prime(p)?;
        if vectors.is_empty() {
            return Err(Error::validation("exponent set must be nonempty"));
        }
        let dim = vectors[0].len();
        if dim == 0 {
            return Err(Error::validation("exponent vectors must have dimension >= 1"));
        }
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::validation(format!(
                    "mixed dimensions: expected {dim}, found {}",
                    v.len()
                )));
            }
            if v.iter().all(|&c| c == 0) {
                return Err(Error::validation("zero exponent vector is not allowed"));
            }
            if v.iter().any(|&c| c > MAX_EXPONENT) {
                return Err(Error::validation(format!(
                    "exponent entry exceeds the supported maximum {MAX_EXPONENT}"
                )));
            }
        }
        for j in 0..dim {
            if vectors.iter().all(|v| v[j] == 0) {
                return Err(Error::validation(format!(
                    "coordinate {} is zero in every vector; drop it",
                    j + 1
                )));
            }
        }
        let mut sorted = vectors;
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::validation("duplicate exponent vectors are not allowed"));
        }
        let normalized = sorted.iter().all(|v| v.iter().any(|&c| c % p != 0));
        Ok(ExponentSet {
            p,
            dim,
            vectors: sorted,
            normalized,
        })
    }

    /// Convenience constructor for one-dimensional sets.
    pub fn from_integers(p: u64, ds: &[u64]) -> Result<Self> {
        Self::new(p, ds.iter().map(|&d| vec![d]).collect())
    }

    /// All integers in `[1, d]` prime to `p`, as a one-dimensional set.
    pub fn prime_to_p_interval(p: u64, d: u64) -> Result<Self> {
        let ds: Vec<u64> = (1..=d).filter(|k| k % p != 0).collect();
        if ds.is_empty() {
            return Err(Error::validation(format!(
                "no integer in [1, {d}] is prime to {p}"
            )));
        }
        Self::from_integers(p, &ds)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn len(&self) -> usize {
        self.vectors.len()
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn vectors(&self) -> &[Vec<u64>] {
        &self.vectors
    }
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Column sums `D_j = sum_i d_ij`; multiplier coordinates live in `[1, D_j]`.
    pub fn column_sums(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.dim];
        for v in &self.vectors {
            for (j, &c) in v.iter().enumerate() {
                out[j] += c;
            }
        }
        out
    }

    /// `prod_j D_j`, the node count of the full digit graph.
    pub fn node_count(&self) -> u128 {
        self.column_sums().iter().map(|&s| s as u128).product()
    }

    /// Divides each vector by the largest joint power of `p`, then merges
    /// duplicates and re-sorts.  Solution minima at every length are unchanged
    /// by this reduction.
    pub fn normalize(&self) -> Normalization {
        let mut reductions = Vec::new();
        let mut merged = Vec::new();
        let mut reduced: Vec<Vec<u64>> = Vec::new();
        for v in &self.vectors {
            let mut w = v.clone();
            let mut k = 0u32;
            while w.iter().all(|&c| c % self.p == 0) {
                for c in &mut w {
                    *c /= self.p;
                }
                k += 1;
            }
            if k > 0 {
                reductions.push((v.clone(), w.clone(), k));
            }
            if reduced.contains(&w) {
                merged.push(v.clone());
            } else {
                reduced.push(w);
            }
        }
        reduced.sort();
        let set = ExponentSet {
            p: self.p,
            dim: self.dim,
            vectors: reduced,
            normalized: true,
        };
        Normalization {
            set,
            reductions,
            merged,
        }
    }

    /// Requires the normalized flag; engines that assume it call this first.
    pub fn require_normalized(&self) -> Result<()> {
        if self.normalized {
            Ok(())
        } else {
            Err(Error::validation(
                "exponent set is not p-normalized; call normalize() first",
            ))
        }
    }

    /// Projection onto the coordinates in `keep` (1-based, strictly
    /// increasing).  Vectors that vanish on `keep` are dropped; duplicates
    /// merge.  Fails when nothing survives.
    pub fn project(&self, keep: &[usize]) -> Result<ExponentSet> {
        if keep.is_empty() {
            return Err(Error::validation("projection needs at least one coordinate"));
        }
        if keep.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::validation(
                "projection coordinates must be strictly increasing",
            ));
        }
        if *keep.last().unwrap() > self.dim || keep[0] == 0 {
            return Err(Error::validation(format!(
                "projection coordinate out of range 1..={}",
                self.dim
            )));
        }
        let mut vs = BTreeSet::new();
        for v in &self.vectors {
            let w: Vec<u64> = keep.iter().map(|&j| v[j - 1]).collect();
            if w.iter().any(|&c| c > 0) {
                vs.insert(w);
            }
        }
        if vs.is_empty() {
            return Err(Error::validation(
                "projection is empty: all vectors vanish on the kept coordinates",
            ));
        }
        ExponentSet::new(self.p, vs.into_iter().collect())
    }
}

/// A member of the solution family at length `m`, with weight and density.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub m: usize,
    pub u: Vec<Natural>,
    pub weight: u64,
    pub density: Rat,
}

impl Solution {
    /// Validates membership of `u` in the solution family at length `m`.
    pub fn new(set: &ExponentSet, m: usize, u: Vec<Natural>) -> Result<Self> {
        if m == 0 {
            return Err(Error::validation("solution length m must be >= 1"));
        }
        if u.len() != set.len() {
            return Err(Error::validation(format!(
                "solution tuple has {} entries, exponent set has {}",
                u.len(),
                set.len()
            )));
        }
        let top = basep::modulus(set.p, m);
        for ui in &u {
            if ui > &top {
                return Err(Error::validation(format!(
                    "solution entry {ui} exceeds p^m - 1 = {top}"
                )));
            }
        }
        multiplier_vector(set, m, &u)?;
        let mut weight = 0u64;
        for ui in &u {
            weight += basep::weight(ui, set.p)?;
        }
        let density = Rat::new(
            weight.into(),
            (crate::Int::from(set.p) - 1) * crate::Int::from(m as u64),
        );
        Ok(Solution {
            m,
            u,
            weight,
            density,
        })
    }
}

/// The multiplier vector `(sum_i u_i d_i) / (p^m - 1)` of a solution tuple.
///
/// Fails (validation) when `u` is not a solution at length `m`.
pub fn multiplier_vector(set: &ExponentSet, m: usize, u: &[Natural]) -> Result<Vec<u64>> {
    if u.len() != set.len() {
        return Err(Error::validation("tuple length does not match exponent set"));
    }
    let modulus = basep::modulus(set.p, m);
    let mut out = Vec::with_capacity(set.dim);
    for j in 0..set.dim {
        let mut sum = Natural::zero();
        for (ui, v) in u.iter().zip(set.vectors.iter()) {
            sum += ui * Natural::from(v[j]);
        }
        if sum.is_zero() {
            return Err(Error::validation(format!(
                "coordinate {} of the congruence sum is zero, not positive",
                j + 1
            )));
        }
        let (q, r) = num::Integer::div_rem(&sum, &modulus);
        if !r.is_zero() {
            return Err(Error::validation(format!(
                "congruence fails at coordinate {}: sum {} is not divisible by {}",
                j + 1,
                sum,
                modulus
            )));
        }
        let q: u64 = q.try_into().map_err(|_| {
            Error::internal("multiplier coordinate exceeded u64; exponents are capped")
        })?;
        out.push(q);
    }
    Ok(out)
}

/// Multiplier vectors of the full digit-rotation orbit of `u`, in rotation
/// order (identity first).
pub fn multiplier_orbit(set: &ExponentSet, m: usize, u: &[Natural]) -> Result<Vec<Vec<u64>>> {
    let mut out = Vec::with_capacity(m);
    let mut cur: Vec<Natural> = u.to_vec();
    for _ in 0..m {
        out.push(multiplier_vector(set, m, &cur)?);
        cur = cur
            .iter()
            .map(|ui| basep::rotate(ui, set.p, m, 1))
            .collect::<Result<_>>()?;
    }
    Ok(out)
}

/// True when `u` is a solution tuple at length `m`.
pub fn is_solution(set: &ExponentSet, m: usize, u: &[Natural]) -> bool {
    Solution::new(set, m, u.to_vec()).is_ok()
}

fn pow_u128(p: u64, e: u32) -> Option<u128> {
    (p as u128).checked_pow(e)
}

/// Streaming enumeration of all solution tuples at length `m` in
/// lexicographic order, optionally restricted to weight at most `weight_cap`.
///
/// Without a cap the raw search space `p^(m*n)` must fit under the
/// enumeration ceiling; with a cap the space may be larger because weight
/// pruning bounds the visited region.
pub fn enumerate_solutions<'a>(
    set: &'a ExponentSet,
    m: usize,
    weight_cap: Option<u64>,
    config: &Config,
) -> Result<SolutionIter<'a>> {
    if m == 0 {
        return Err(Error::validation("solution length m must be >= 1"));
    }
    let n = set.len() as u32;
    let space = pow_u128(set.p, (m as u32).saturating_mul(n));
    if weight_cap.is_none() {
        match space {
            Some(s) if s <= config.enumeration_ceiling => {}
            _ => {
                return Err(Error::resource(format!(
                    "search space p^(m*n) = {}^{} exceeds the enumeration ceiling {}; \
                     pass a weight cap or use the density engine",
                    set.p,
                    m * set.len(),
                    config.enumeration_ceiling
                )))
            }
        }
    }
    let top = match pow_u128(set.p, m as u32) {
        Some(t) if t - 1 <= u64::MAX as u128 => (t - 1) as u64,
        _ => {
            return Err(Error::resource(
                "p^m - 1 exceeds the machine-word range supported by enumeration",
            ))
        }
    };
    Ok(SolutionIter {
        set,
        m,
        top,
        cap: weight_cap,
        u: vec![0; set.len()],
        prefix_weight: vec![0; set.len()],
        done: false,
        fresh: true,
    })
}

/// Iterator state for [`enumerate_solutions`]; a pruned odometer over tuples.
pub struct SolutionIter<'a> {
    set: &'a ExponentSet,
    m: usize,
    top: u64,
    cap: Option<u64>,
    u: Vec<u64>,
    prefix_weight: Vec<u64>,
    done: bool,
    fresh: bool,
}

impl<'a> SolutionIter<'a> {
    /// Advances the odometer at position `pos`, zeroing the suffix.
    /// Returns false when the enumeration is exhausted.
    fn bump(&mut self, mut pos: usize) -> bool {
        loop {
            if self.u[pos] == self.top {
                if pos == 0 {
                    return false;
                }
                self.u[pos] = 0;
                pos -= 1;
            } else {
                self.u[pos] += 1;
                for k in pos + 1..self.u.len() {
                    self.u[k] = 0;
                }
                self.refresh_weights(pos);
                return true;
            }
        }
    }

    fn refresh_weights(&mut self, from: usize) {
        for i in from..self.u.len() {
            let base = if i == 0 { 0 } else { self.prefix_weight[i - 1] };
            self.prefix_weight[i] = base + basep::weight_u64(self.u[i], self.set.p);
        }
    }

    /// Skips forward past every tuple whose weight prefix exceeds the cap.
    /// Returns false when exhausted.
    fn skip_capped(&mut self) -> bool {
        if let Some(cap) = self.cap {
            loop {
                let over = (0..self.u.len()).find(|&i| self.prefix_weight[i] > cap);
                match over {
                    None => return true,
                    Some(i) => {
                        if !self.bump(i) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn is_member(&self) -> bool {
        let m128 = {
            let mut t: u128 = 1;
            for _ in 0..self.m {
                t *= self.set.p as u128;
            }
            t - 1
        };
        for j in 0..self.set.dim {
            let mut sum: u128 = 0;
            for (i, v) in self.set.vectors.iter().enumerate() {
                sum += self.u[i] as u128 * v[j] as u128;
            }
            if sum == 0 || !sum.is_multiple_of(m128) {
                return false;
            }
        }
        true
    }
}

impl<'a> Iterator for SolutionIter<'a> {
    type Item = Solution;

    fn next(&mut self) -> Option<Solution> {
        if self.done {
            return None;
        }
        loop {
            if self.fresh {
                self.fresh = false;
                self.refresh_weights(0);
            } else if !self.bump(self.u.len() - 1) {
                self.done = true;
                return None;
            }
            if !self.skip_capped() {
                self.done = true;
                return None;
            }
            if self.is_member() {
                let u: Vec<Natural> = self.u.iter().map(|&x| Natural::from(x)).collect();
                let sol = Solution::new(self.set, self.m, u)
                    .expect("enumerated tuple passes validation");
                return Some(sol);
            }
        }
    }
}

/// Exact minimum solution weight at length `m` with its lexicographically
/// least witness, by branch-and-bound over the tuple space.
///
/// The raw space `p^(m*n)` must fit under the enumeration ceiling.  The
/// all-top tuple `(p^m-1, ..., p^m-1)` is always a solution, so the family is
/// never empty.
pub fn min_weight_bruteforce(set: &ExponentSet, m: usize, config: &Config) -> Result<Solution> {
    if m == 0 {
        return Err(Error::validation("solution length m must be >= 1"));
    }
    let n = set.len();
    match pow_u128(set.p, (m as u32).saturating_mul(n as u32)) {
        Some(s) if s <= config.enumeration_ceiling => {}
        _ => {
            return Err(Error::resource(format!(
                "search space p^(m*n) = {}^{} exceeds the enumeration ceiling {}; \
                 use the density engine instead",
                set.p,
                m * n,
                config.enumeration_ceiling
            )))
        }
    }
    let top = (pow_u128(set.p, m as u32).unwrap() - 1) as u64;
    let m128 = top as u128;

    struct Search<'s> {
        set: &'s ExponentSet,
        top: u64,
        m128: u128,
        best_w: u64,
        best_u: Vec<u64>,
        sentinel: bool,
        u: Vec<u64>,
    }
    impl Search<'_> {
        fn dfs(&mut self, i: usize, w: u64, sums: &[u128]) {
            if w > self.best_w {
                return;
            }
            if i == self.set.len() {
                let ok = sums
                    .iter()
                    .all(|&s| s > 0 && (self.m128 == 0 || s % self.m128 == 0));
                if ok && (w < self.best_w || (w == self.best_w && self.sentinel)) {
                    self.best_w = w;
                    self.best_u = self.u.clone();
                    self.sentinel = false;
                }
                return;
            }
            let mut next = sums.to_vec();
            for v in 0..=self.top {
                let wv = basep::weight_u64(v, self.set.p);
                if w + wv <= self.best_w {
                    for (j, s) in next.iter_mut().enumerate() {
                        *s = sums[j] + v as u128 * self.set.vectors()[i][j] as u128;
                    }
                    self.u[i] = v;
                    self.dfs(i + 1, w + wv, &next);
                }
            }
            self.u[i] = 0;
        }
    }

    let all_top_weight = (n as u64) * (m as u64) * (set.p - 1);
    let mut search = Search {
        set,
        top,
        m128,
        best_w: all_top_weight,
        best_u: vec![top; n],
        sentinel: true,
        u: vec![0; n],
    };
    let sums0 = vec![0u128; set.dim];
    search.dfs(0, 0, &sums0);
    let u: Vec<Natural> = search.best_u.iter().map(|&x| Natural::from(x)).collect();
    Solution::new(set, m, u)
}

/// `p - 1` as a big rational denominator helper: `w / ((p-1) m)`.
pub fn density_of(weight: u64, p: u64, m: usize) -> Rat {
    Rat::new(
        crate::Int::from(weight),
        (crate::Int::from(p) - crate::Int::one()) * crate::Int::from(m as u64),
    )
}
