//! The p-density engine.
//!
//! Solutions of length `m` correspond to closed walks of length `m` in a
//! finite digit graph.  Nodes are the integer vectors `a` with
//! `1 <= a_j <= cap_j`; there is an edge `a -> b` whenever some digit column
//! `x` in `[0, p-1]^n` satisfies `sum_i x_i d_i = p*a - b` componentwise, and
//! its weight is the least `sum_i x_i` among such columns.  Reading the
//! columns of a closed walk most-significant-first reconstructs a solution
//! tuple whose multiplier orbit is the walk's node sequence and whose weight
//! is the walk's weight.  Consequently
//!
//! ```text
//!   p-density = (minimum cycle mean of the full graph) / (p - 1),
//! ```
//!
//! with the full graph taking `cap_j = D_j` (the column sums).  The minimum
//! cycle mean is computed exactly with Karp's recurrence over machine
//! integers and rational cross-comparison.
//!
//! Large sets avoid the full graph where possible: any cycle of a
//! box-restricted graph (`cap_j = min(B, D_j)`, same columns) is a cycle of
//! the full graph, so when its mean matches `(p-1)` times a proven lower
//! bound the density is certified without building the full graph.

use crate::basep;
use crate::bounds;
use crate::modular::{multiplier_orbit, min_weight_bruteforce, ExponentSet, Solution};
use crate::{Config, Error, Int, Natural, Rat, Result};
use num::ToPrimitive;
use rayon::prelude::*;

const NO_EDGE: u32 = u32::MAX;
const FAR: i64 = i64::MAX / 4;

/// Bounded-knapsack table of minimal digit columns.
///
/// `min_column(t)` is the least `sum_i x_i` over `x` in `[0, p-1]^n` with
/// `sum_i x_i d_i = t`, tabulated for every `t` in `prod_j [0, p*cap_j - 1]`.
struct ColumnTable {
    p: u64,
    dims: Vec<u64>,
    strides: Vec<usize>,
    items: Vec<Vec<u64>>,
    /// stages[i][flat(t)]: minimum over the first i items only.
    stages: Vec<Vec<u32>>,
}

impl ColumnTable {
    fn build(items: &[Vec<u64>], p: u64, caps: &[u64]) -> Result<Self> {
        let dims: Vec<u64> = caps.iter().map(|&c| p * c).collect();
        let mut grid: u128 = 1;
        for &d in &dims {
            grid *= d as u128;
        }
        let bytes = grid.saturating_mul((items.len() as u128 + 1) * 4);
        if bytes > 2_000_000_000 {
            return Err(Error::resource(
                "digit column table would exceed the memory budget",
            ));
        }
        let grid = grid as usize;
        let mut strides = vec![1usize; dims.len()];
        for j in (0..dims.len().saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * dims[j + 1] as usize;
        }
        let mut stages = Vec::with_capacity(items.len() + 1);
        let mut base = vec![NO_EDGE; grid];
        base[0] = 0;
        stages.push(base);
        for item in items {
            let prev = stages.last().unwrap();
            let mut cur = vec![NO_EDGE; grid];
            // iterate targets; for each, try every count c of this item
            for t in 0..grid {
                let mut best = prev[t];
                for c in 1..p {
                    // subtract c * item from t coordinatewise in flat form
                    let mut ok = true;
                    let mut flat = t;
                    for (j, &dj) in item.iter().enumerate() {
                        let tj = (t / strides[j]) % dims[j] as usize;
                        let need = (c * dj) as usize;
                        if tj < need {
                            ok = false;
                            break;
                        }
                        flat -= need * strides[j];
                    }
                    if ok {
                        let cand = prev[flat];
                        if cand != NO_EDGE {
                            let w = cand + c as u32;
                            if w < best {
                                best = w;
                            }
                        }
                    }
                }
                cur[t] = best;
            }
            stages.push(cur);
        }
        Ok(ColumnTable {
            p,
            dims,
            strides,
            items: items.to_vec(),
            stages,
        })
    }

    fn flat(&self, t: &[i64]) -> Option<usize> {
        let mut f = 0usize;
        for (j, &tj) in t.iter().enumerate() {
            if tj < 0 || tj >= self.dims[j] as i64 {
                return None;
            }
            f += tj as usize * self.strides[j];
        }
        Some(f)
    }

    fn min_column(&self, t: &[i64]) -> u32 {
        match self.flat(t) {
            Some(f) => self.stages[self.items.len()][f],
            None => NO_EDGE,
        }
    }

    /// The witness column for target `t`, choosing the smallest count at
    /// every item from the last to the first.  Requires `min_column(t)`
    /// finite.
    fn witness_column(&self, t: &[i64]) -> Option<Vec<u64>> {
        let mut flat = self.flat(t)?;
        if self.stages[self.items.len()][flat] == NO_EDGE {
            return None;
        }
        let mut x = vec![0u64; self.items.len()];
        for i in (1..=self.items.len()).rev() {
            let want = self.stages[i][flat];
            let mut chosen = None;
            'counts: for c in 0..self.p {
                let mut f = flat;
                for (j, &dj) in self.items[i - 1].iter().enumerate() {
                    let tj = (flat / self.strides[j]) % self.dims[j] as usize;
                    let need = (c * dj) as usize;
                    if tj < need {
                        continue 'counts;
                    }
                    f -= need * self.strides[j];
                }
                if self.stages[i - 1][f] != NO_EDGE && self.stages[i - 1][f] + c as u32 == want {
                    chosen = Some((c, f));
                    break;
                }
            }
            let (c, f) = chosen?;
            x[i - 1] = c;
            flat = f;
        }
        Some(x)
    }
}

/// The digit graph of an exponent set over a node box `prod_j [1, cap_j]`.
pub struct DigitGraph {
    p: u64,
    caps: Vec<u64>,
    n_nodes: usize,
    /// w_in[b][a]: least column weight on the edge a -> b, NO_EDGE if absent.
    w_in: Vec<Vec<u32>>,
    node_strides: Vec<usize>,
    table: ColumnTable,
    edges: u64,
}

impl DigitGraph {
    /// Full graph: caps are the column sums.
    pub fn build(set: &ExponentSet, config: &Config) -> Result<Self> {
        Self::build_within(set, set.column_sums(), config)
    }

    /// Box-restricted graph; columns still range over the whole item set.
    pub fn build_within(set: &ExponentSet, caps: Vec<u64>, config: &Config) -> Result<Self> {
        set.require_normalized()?;
        let full = set.column_sums();
        if caps.len() != set.dim() || caps.iter().zip(&full).any(|(&c, &d)| c == 0 || c > d) {
            return Err(Error::validation(
                "node caps must satisfy 1 <= cap_j <= D_j in every coordinate",
            ));
        }
        let n_nodes: u128 = caps.iter().map(|&c| c as u128).product();
        if n_nodes > config.node_ceiling as u128 {
            return Err(Error::resource(format!(
                "digit graph needs {n_nodes} nodes, above the node ceiling {}; \
                 raise the ceiling or bound coordinates via projections",
                config.node_ceiling
            )));
        }
        let n_nodes = n_nodes as usize;
        let table = ColumnTable::build(set.vectors(), set.p(), &caps)?;
        let mut node_strides = vec![1usize; caps.len()];
        for j in (0..caps.len().saturating_sub(1)).rev() {
            node_strides[j] = node_strides[j + 1] * caps[j + 1] as usize;
        }
        let p = set.p();
        let vec_of = |idx: usize| -> Vec<i64> {
            node_strides
                .iter()
                .zip(&caps)
                .map(|(&s, &c)| ((idx / s) % c as usize) as i64 + 1)
                .collect()
        };
        let w_in: Vec<Vec<u32>> = (0..n_nodes)
            .into_par_iter()
            .map(|b_idx| {
                let b = vec_of(b_idx);
                let mut row = vec![NO_EDGE; n_nodes];
                let mut t = vec![0i64; caps.len()];
                for (a_idx, slot) in row.iter_mut().enumerate() {
                    let a = vec_of(a_idx);
                    for j in 0..caps.len() {
                        t[j] = p as i64 * a[j] - b[j];
                    }
                    *slot = table.min_column(&t);
                }
                row
            })
            .collect();
        let edges = w_in
            .iter()
            .map(|r| r.iter().filter(|&&w| w != NO_EDGE).count() as u64)
            .sum();
        Ok(DigitGraph {
            p,
            caps,
            n_nodes,
            w_in,
            node_strides,
            table,
            edges,
        })
    }

    pub fn node_count(&self) -> usize {
        self.n_nodes
    }

    pub fn edge_count(&self) -> u64 {
        self.edges
    }

    /// Node vector (1-based coordinates) of a flat node index.
    pub fn node_vec(&self, idx: usize) -> Vec<u64> {
        self.node_strides
            .iter()
            .zip(&self.caps)
            .map(|(&s, &c)| ((idx / s) % c as usize) as u64 + 1)
            .collect()
    }

    pub fn edge_weight(&self, a: usize, b: usize) -> Option<u32> {
        match self.w_in[b][a] {
            NO_EDGE => None,
            w => Some(w),
        }
    }

    /// The minimal digit column realizing the edge a -> b.
    pub fn edge_column(&self, a: usize, b: usize) -> Option<Vec<u64>> {
        let av = self.node_vec(a);
        let bv = self.node_vec(b);
        let t: Vec<i64> = av
            .iter()
            .zip(&bv)
            .map(|(&x, &y)| self.p as i64 * x as i64 - y as i64)
            .collect();
        self.table.witness_column(&t)
    }
}

/// A minimum-mean cycle: exact mean, node indices (lexicographically
/// smallest index first), and total weight.
#[derive(Debug, Clone)]
pub struct CycleMean {
    pub mean: Rat,
    pub nodes: Vec<usize>,
    pub total_weight: u64,
}

/// Exact minimum cycle mean via Karp's recurrence; `None` when acyclic.
pub fn minimum_cycle_mean(g: &DigitGraph) -> Result<Option<CycleMean>> {
    karp(&g.w_in)
}

fn karp(w_in: &[Vec<u32>]) -> Result<Option<CycleMean>> {
    let n = w_in.len();
    // d[k][v] = least weight of any k-edge walk ending at v, from any start.
    let mut d: Vec<Vec<i64>> = Vec::with_capacity(n + 1);
    d.push(vec![0i64; n]);
    for _ in 1..=n {
        let prev = d.last().unwrap();
        let next: Vec<i64> = (0..n)
            .into_par_iter()
            .map(|v| {
                let row = &w_in[v];
                let mut best = FAR;
                for (u, &w) in row.iter().enumerate() {
                    if w != NO_EDGE && prev[u] < FAR {
                        let cand = prev[u] + w as i64;
                        if cand < best {
                            best = cand;
                        }
                    }
                }
                best
            })
            .collect();
        d.push(next);
    }

    // lambda* = min_v max_k (d[n][v] - d[k][v]) / (n - k), fractions compared
    // by cross-multiplication in i128.
    let mut lambda: Option<(i128, i128)> = None;
    for (v, &full) in d[n].iter().enumerate() {
        if full >= FAR {
            continue;
        }
        let mut worst: Option<(i128, i128)> = None;
        for (k, row) in d.iter().take(n).enumerate() {
            if row[v] >= FAR {
                continue;
            }
            let num = (full - row[v]) as i128;
            let den = (n - k) as i128;
            let bigger = match worst {
                None => true,
                Some((wn, wd)) => num * wd > wn * den,
            };
            if bigger {
                worst = Some((num, den));
            }
        }
        let w = worst.expect("k = 0 is always finite");
        let smaller = match lambda {
            None => true,
            Some((ln, ld)) => w.0 * ld < ln * w.1,
        };
        if smaller {
            lambda = Some(w);
        }
    }
    let Some((num, den)) = lambda else {
        return Ok(None);
    };
    let mean = Rat::new(Int::from(num), Int::from(den));
    let p_num = mean.numer().to_i128().ok_or_else(|| {
        Error::internal("cycle mean numerator out of range")
    })?;
    let q_den = mean.denom().to_i128().ok_or_else(|| {
        Error::internal("cycle mean denominator out of range")
    })?;

    // Potentials h(v) = min_k (Q d[k][v] - P k) make every edge's reduced
    // weight Q w - P + h(u) - h(v) nonnegative, and exactly the edges of
    // minimum-mean cycles close up tight (reduced weight zero) cycles.
    let h: Vec<i128> = (0..n)
        .map(|v| {
            (0..=n)
                .filter(|&k| d[k][v] < FAR)
                .map(|k| q_den * d[k][v] as i128 - p_num * k as i128)
                .min()
                .expect("k = 0 is always finite")
        })
        .collect();
    let mut tight_out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        for (u, &w) in w_in[v].iter().enumerate() {
            if w != NO_EDGE {
                let reduced = q_den * w as i128 - p_num + h[u] - h[v];
                debug_assert!(reduced >= 0, "potential inequality violated");
                if reduced == 0 {
                    tight_out[u].push(v);
                }
            }
        }
    }

    // Deterministic DFS for any cycle in the tight subgraph.
    let mut color = vec![0u8; n]; // 0 new, 1 on stack, 2 done
    let mut cycle: Option<Vec<usize>> = None;
    'outer: for start in 0..n {
        if color[start] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        color[start] = 1;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if *next < tight_out[node].len() {
                let to = tight_out[node][*next];
                *next += 1;
                match color[to] {
                    0 => {
                        color[to] = 1;
                        stack.push((to, 0));
                    }
                    1 => {
                        let pos = stack.iter().position(|&(v, _)| v == to).unwrap();
                        cycle = Some(stack[pos..].iter().map(|&(v, _)| v).collect());
                        break 'outer;
                    }
                    _ => {}
                }
            } else {
                color[node] = 2;
                stack.pop();
            }
        }
    }
    let mut nodes = cycle.ok_or_else(|| {
        Error::internal("tight subgraph of a cyclic graph must contain a cycle")
    })?;
    let min_pos = nodes
        .iter()
        .enumerate()
        .min_by_key(|&(_, &v)| v)
        .map(|(i, _)| i)
        .unwrap();
    nodes.rotate_left(min_pos);

    let mut total: u64 = 0;
    for i in 0..nodes.len() {
        let a = nodes[i];
        let b = nodes[(i + 1) % nodes.len()];
        let w = w_in[b][a];
        if w == NO_EDGE {
            return Err(Error::internal("extracted cycle uses a missing edge"));
        }
        total += w as u64;
    }
    let check = Rat::new(Int::from(total), Int::from(nodes.len() as u64));
    if check != mean {
        return Err(Error::internal(
            "extracted cycle mean disagrees with the computed minimum",
        ));
    }
    Ok(Some(CycleMean {
        mean,
        nodes,
        total_weight: total,
    }))
}

/// How the density was established.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Method {
    /// Full digit graph, small enough to search directly.
    Direct,
    /// A box-restricted cycle met a proven lower bound exactly.
    BoxCertified { box_cap: u64, bound: &'static str },
    /// Full digit graph after the box ladder failed to certify.
    FullGraph,
}

/// Result of [`p_density`]: the exact density with a validated witness.
#[derive(Debug, Clone)]
pub struct DensityResult {
    pub density: Rat,
    /// Witness solution for the input set as given.
    pub witness: Solution,
    /// Witness solution for the normalized set (the graph's set).
    pub normalized_witness: Solution,
    /// Multiplier orbit of the normalized witness: the cycle's node vectors.
    pub orbit: Vec<Vec<u64>>,
    pub method: Method,
    pub normalized: ExponentSet,
    pub reductions: Vec<(Vec<u64>, Vec<u64>, u32)>,
    pub merged: Vec<Vec<u64>>,
    pub graph_nodes: u64,
}

fn reconstruct_witness(set: &ExponentSet, g: &DigitGraph, cm: &CycleMean) -> Result<Solution> {
    let m = cm.nodes.len();
    let n = set.len();
    let mut columns: Vec<Vec<u64>> = Vec::with_capacity(m);
    for i in 0..m {
        let a = cm.nodes[i];
        let b = cm.nodes[(i + 1) % m];
        let col = g
            .edge_column(a, b)
            .ok_or_else(|| Error::internal("cycle edge lost its witness column"))?;
        columns.push(col);
    }
    // u_i digits along the walk, most significant first.
    let mut u = Vec::with_capacity(n);
    for i in 0..n {
        let digits_msd: Vec<u64> = columns.iter().map(|c| c[i]).collect();
        let digits_lsb: Vec<u64> = digits_msd.into_iter().rev().collect();
        u.push(basep::from_digits(&digits_lsb, set.p()));
    }
    let sol = Solution::new(set, m, u)
        .map_err(|e| Error::internal(format!("reconstructed witness failed validation: {e}")))?;
    if sol.weight != cm.total_weight {
        return Err(Error::internal(
            "reconstructed witness weight disagrees with the cycle weight",
        ));
    }
    Ok(sol)
}

/// Carries a normalized-set witness back to the original set: each original
/// vector is `p^k` times a normalized one, and dividing the matching entry
/// by `p^k` digit-rotates it without changing its weight.  Originals that
/// collapsed onto an already-used normalized vector get entry zero.
fn lift_witness(original: &ExponentSet, normalized: &ExponentSet, sol: &Solution) -> Result<Solution> {
    let p = original.p();
    let m = sol.m;
    let mut used = vec![false; normalized.len()];
    let mut u = Vec::with_capacity(original.len());
    for d in original.vectors() {
        let mut e = d.clone();
        let mut k = 0usize;
        while e.iter().all(|&c| c % p == 0) {
            for c in &mut e {
                *c /= p;
            }
            k += 1;
        }
        let j = normalized
            .vectors()
            .iter()
            .position(|v| v == &e)
            .ok_or_else(|| Error::internal("normalized set lost a reduced vector"))?;
        if used[j] {
            u.push(Natural::from(0u32));
        } else {
            used[j] = true;
            let back = (m - (k % m)) % m;
            u.push(basep::rotate(&sol.u[j], p, m, back)?);
        }
    }
    Solution::new(original, m, u)
        .map_err(|e| Error::internal(format!("witness lift failed validation: {e}")))
}

const BOX_LADDER: [u64; 3] = [16, 64, 256];

/// The exact p-density of `set` with a validated witness solution.
///
/// The set is normalized first (the density is invariant); the witness is
/// lifted back to the set as given.  Resource refusals are deterministic
/// functions of the configured ceilings.
pub fn p_density(set: &ExponentSet, config: &Config) -> Result<DensityResult> {
    let norm = set.normalize();
    let s = &norm.set;
    let full_caps = s.column_sums();
    let n_full: u128 = full_caps.iter().map(|&c| c as u128).product();
    if n_full > config.node_ceiling as u128 {
        return Err(Error::resource(format!(
            "digit graph needs {n_full} nodes, above the node ceiling {}; \
             raise the ceiling or use projection bounds",
            config.node_ceiling
        )));
    }

    let p_minus_1 = Rat::new(Int::from(s.p() - 1), Int::from(1));
    let build_full = |cfg: &Config| -> Result<(CycleMean, DigitGraph, Method)> {
        let g = DigitGraph::build(s, cfg)?;
        let cm = minimum_cycle_mean(&g)?
            .ok_or_else(|| Error::internal("full digit graph must contain the top self-loop"))?;
        Ok((cm, g, Method::FullGraph))
    };

    let (cm, graph, method) = if n_full <= config.direct_threshold as u128 {
        let (cm, g, _) = build_full(config)?;
        (cm, g, Method::Direct)
    } else {
        let (bound_name, lb) = bounds::best_lower_bound(s)?;
        let mut certified = None;
        let mut seen = 0u128;
        for cap in BOX_LADDER {
            let caps: Vec<u64> = full_caps.iter().map(|&d| d.min(cap)).collect();
            let nb: u128 = caps.iter().map(|&c| c as u128).product();
            if nb == seen || nb >= n_full {
                break;
            }
            seen = nb;
            if nb > config.node_ceiling as u128
                || nb.pow(3) > config.cycle_work_ceiling as u128
            {
                continue;
            }
            let g = DigitGraph::build_within(s, caps, config)?;
            if let Some(cm) = minimum_cycle_mean(&g)? {
                let candidate = &cm.mean / &p_minus_1;
                if candidate == lb {
                    certified = Some((cm, g, Method::BoxCertified { box_cap: cap, bound: bound_name }));
                    break;
                }
            }
        }
        match certified {
            Some(found) => found,
            None => {
                if n_full.pow(3) > config.cycle_work_ceiling as u128 {
                    return Err(Error::resource(format!(
                        "full digit graph search needs about {} elementary steps, above the \
                         work ceiling {}; use projection bounds or raise the ceiling",
                        n_full.pow(3),
                        config.cycle_work_ceiling
                    )));
                }
                build_full(config)?
            }
        }
    };

    let density = &cm.mean / &p_minus_1;
    let normalized_witness = reconstruct_witness(s, &graph, &cm)?;
    if normalized_witness.density != density {
        return Err(Error::internal("witness density disagrees with the cycle mean"));
    }
    let orbit = multiplier_orbit(s, normalized_witness.m, &normalized_witness.u)?;
    let witness = if s.vectors() == set.vectors() {
        normalized_witness.clone()
    } else {
        lift_witness(set, s, &normalized_witness)?
    };
    if witness.density != density {
        return Err(Error::internal("lifted witness changed the density"));
    }

    if config.validate {
        // the first orbit node is the cycle's anchor node
        let anchor = graph.node_vec(cm.nodes[0]);
        if orbit[0] != anchor {
            return Err(Error::internal(
                "witness multiplier disagrees with the cycle anchor node",
            ));
        }
        for node in &orbit {
            for (j, &c) in node.iter().enumerate() {
                if c < 1 || c > full_caps[j] {
                    return Err(Error::internal("orbit node outside the column box"));
                }
            }
        }
        if normalized_witness.m > n_full as usize {
            return Err(Error::internal("witness length exceeds the node count"));
        }
    }

    Ok(DensityResult {
        density,
        witness,
        normalized_witness,
        orbit,
        method,
        normalized: s.clone(),
        reductions: norm.reductions,
        merged: norm.merged,
        graph_nodes: graph.n_nodes as u64,
    })
}

/// Reference oracle: minimum density over all lengths `m <= prod_j D_j` by
/// direct branch-and-bound at every length.  Exponential; for tiny sets.
pub fn density_by_enumeration(set: &ExponentSet, config: &Config) -> Result<(Rat, Solution)> {
    let norm = set.normalize();
    let s = &norm.set;
    let n_full = s.node_count();
    if n_full > 64 {
        return Err(Error::resource(
            "enumeration oracle is limited to node counts at most 64",
        ));
    }
    let mut best: Option<(Rat, Solution)> = None;
    for m in 1..=n_full as usize {
        let sol = min_weight_bruteforce(s, m, config)?;
        let d = sol.density.clone();
        let better = match &best {
            None => true,
            Some((bd, _)) => d < *bd,
        };
        if better {
            best = Some((d, sol));
        }
    }
    Ok(best.expect("at least one length was searched"))
}
