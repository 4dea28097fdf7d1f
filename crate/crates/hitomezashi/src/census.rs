//! Counting loops and regions, exactly and by simulation.
//!
//! The stitches divide the grid into regions; the region count always equals
//! the loop count plus the number of regions touching the grid frame. For
//! the fair random model the expected loop count has an exact finite
//! formula: a loop shape of width w and height h appears at a given offset
//! with probability 2^-(w+h+2), there are (m+1-h)(n+1-w) offsets, and the
//! shapes of each size are counted by equal-height Dyck-path pairs. The
//! per-cell density of loops converges to (pi^2 - 9) / 12.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dyck::count_table;
use crate::error::{Error, Result};
use crate::geom::Stitch;
use crate::pattern::{Pattern, RNG_ALGORITHM};
use crate::walker::{count_loops_labels, WalkScratch};

/// Per-cell region labeling of a pattern, with a proper 2-coloring of the
/// region adjacency graph. Cells are indexed `(col, row)` with row 0 at the
/// south edge; regions are numbered in row-major discovery order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionMap {
    pub rows: usize,
    pub cols: usize,
    /// Region id per cell, row-major from the southwest cell.
    pub region_id: Vec<u32>,
    pub region_count: usize,
    /// Whether each region reaches the grid frame through a stitch-free
    /// frame edge.
    pub boundary_flags: Vec<bool>,
    /// A proper 2-coloring: regions sharing a stitch edge differ.
    pub colors: Vec<u8>,
}

impl RegionMap {
    pub fn region_of(&self, col: usize, row: usize) -> u32 {
        self.region_id[row * self.cols + col]
    }

    pub fn boundary_region_count(&self) -> usize {
        self.boundary_flags.iter().filter(|&&b| b).count()
    }
}

struct CellUnionFind {
    parent: Vec<u32>,
}

impl CellUnionFind {
    fn new(len: usize) -> Self {
        CellUnionFind {
            parent: (0..len as u32).collect(),
        }
    }

    fn find(&mut self, mut i: u32) -> u32 {
        while self.parent[i as usize] != i {
            let up = self.parent[self.parent[i as usize] as usize];
            self.parent[i as usize] = up;
            i = up;
        }
        i
    }

    fn union(&mut self, i: u32, j: u32) {
        let (a, b) = (self.find(i), self.find(j));
        if a != b {
            self.parent[a.max(b) as usize] = a.min(b);
        }
    }
}

/// Merged cell components and frame flags, the part of the census shared by
/// the full region map and the fast counting path.
fn region_components(p: &Pattern) -> (CellUnionFind, Vec<bool>) {
    let (m, n) = (p.rows(), p.cols());
    let mut uf = CellUnionFind::new(m * n);
    let cell = |col: usize, row: usize| (row * n + col) as u32;
    for row in 0..m {
        for col in 0..n {
            if col + 1 < n && !p.has_stitch(&Stitch::vertical(col as i64 + 1, row as i64)) {
                uf.union(cell(col, row), cell(col + 1, row));
            }
            if row + 1 < m && !p.has_stitch(&Stitch::horizontal(col as i64, row as i64 + 1)) {
                uf.union(cell(col, row), cell(col, row + 1));
            }
        }
    }
    // A region touches the frame iff some frame edge of one of its cells
    // carries no stitch.
    let mut root_boundary = vec![false; m * n];
    let mut mark = |uf: &mut CellUnionFind, col: usize, row: usize, free: bool| {
        if free {
            let r = uf.find(cell(col, row));
            root_boundary[r as usize] = true;
        }
    };
    for col in 0..n {
        let south_free = !p.has_stitch(&Stitch::horizontal(col as i64, 0));
        mark(&mut uf, col, 0, south_free);
        let north_free = !p.has_stitch(&Stitch::horizontal(col as i64, m as i64));
        mark(&mut uf, col, m - 1, north_free);
    }
    for row in 0..m {
        let west_free = !p.has_stitch(&Stitch::vertical(0, row as i64));
        mark(&mut uf, 0, row, west_free);
        let east_free = !p.has_stitch(&Stitch::vertical(n as i64, row as i64));
        mark(&mut uf, n - 1, row, east_free);
    }
    (uf, root_boundary)
}

/// Floods the unit cells into regions, flags the frame-touching ones, and
/// 2-colors the adjacency graph.
pub fn region_map(p: &Pattern) -> Result<RegionMap> {
    let (m, n) = (p.rows(), p.cols());
    let (mut uf, root_boundary) = region_components(p);

    // Compress to dense ids in row-major discovery order.
    let mut dense: Vec<Option<u32>> = vec![None; m * n];
    let mut region_id = vec![0u32; m * n];
    let mut boundary_flags = Vec::new();
    let mut count = 0u32;
    for idx in 0..m * n {
        let root = uf.find(idx as u32) as usize;
        let id = match dense[root] {
            Some(id) => id,
            None => {
                let id = count;
                dense[root] = Some(id);
                boundary_flags.push(root_boundary[root]);
                count += 1;
                id
            }
        };
        region_id[idx] = id;
    }

    // Region adjacency across stitch-carrying interior edges.
    let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); count as usize];
    let mut add_edge = |a: u32, b: u32| -> Result<()> {
        if a == b {
            return Err(Error::InvariantViolation(
                "a region borders itself across a stitch; 2-coloring impossible".into(),
            ));
        }
        adjacency[a as usize].push(b);
        adjacency[b as usize].push(a);
        Ok(())
    };
    for row in 0..m {
        for col in 0..n {
            let here = region_id[row * n + col];
            if col + 1 < n && p.has_stitch(&Stitch::vertical(col as i64 + 1, row as i64)) {
                add_edge(here, region_id[row * n + col + 1])?;
            }
            if row + 1 < m && p.has_stitch(&Stitch::horizontal(col as i64, row as i64 + 1)) {
                add_edge(here, region_id[(row + 1) * n + col])?;
            }
        }
    }

    // Proper 2-coloring by breadth-first search, component roots colored 0.
    let mut colors: Vec<Option<u8>> = vec![None; count as usize];
    for start in 0..count as usize {
        if colors[start].is_some() {
            continue;
        }
        colors[start] = Some(0);
        let mut queue = std::collections::VecDeque::from([start as u32]);
        while let Some(at) = queue.pop_front() {
            let c = colors[at as usize].unwrap();
            for &next in &adjacency[at as usize] {
                match colors[next as usize] {
                    None => {
                        colors[next as usize] = Some(1 - c);
                        queue.push_back(next);
                    }
                    Some(other) if other == c => {
                        return Err(Error::InvariantViolation(
                            "region adjacency graph is not bipartite".into(),
                        ))
                    }
                    Some(_) => {}
                }
            }
        }
    }

    Ok(RegionMap {
        rows: m,
        cols: n,
        region_id,
        region_count: count as usize,
        boundary_flags,
        colors: colors.into_iter().map(|c| c.unwrap()).collect(),
    })
}

/// `(regions, boundary regions)` without building the full map.
fn region_counts(p: &Pattern) -> (usize, usize) {
    let (m, n) = (p.rows(), p.cols());
    let (mut uf, root_boundary) = region_components(p);
    let mut regions = 0;
    let mut boundary = 0;
    for idx in 0..m * n {
        if uf.find(idx as u32) as usize == idx {
            regions += 1;
            if root_boundary[idx] {
                boundary += 1;
            }
        }
    }
    (regions, boundary)
}

/// Number of loops in the pattern.
pub fn loop_count(p: &Pattern) -> usize {
    let mut scratch = WalkScratch::new(p.rows(), p.cols());
    count_loops_labels(p.rows(), p.cols(), p.eps(), p.eta(), &mut scratch)
}

/// Loop, region, and boundary-region counts of one pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusResult {
    pub loops: usize,
    pub boundary_regions: usize,
    pub regions: usize,
}

/// Counts loops and regions and verifies `regions = loops + boundary_regions`
/// along the way.
pub fn census(p: &Pattern) -> Result<CensusResult> {
    let loops = loop_count(p);
    let (regions, boundary_regions) = region_counts(p);
    if regions != loops + boundary_regions {
        return Err(Error::InvariantViolation(format!(
            "census identity failed: {regions} regions, {loops} loops + {boundary_regions} boundary"
        )));
    }
    Ok(CensusResult {
        loops,
        boundary_regions,
        regions,
    })
}

/// Exact expected loop count of the fair random model on an m x n grid.
///
/// Sums `count(w, h) * 2^-(w+h+2) * (m+1-h)(n+1-w)` over odd loop sizes
/// fitting the grid, factored through the Dyck height decomposition so the
/// cost is linear in the table rather than quadratic in the sizes.
pub fn exact_expected_loops(m: usize, n: usize) -> Result<BigRational> {
    if m < 1 || n < 1 {
        return Err(Error::InvalidInput("grid must be at least 1x1".into()));
    }
    let a_max = (n - 1) / 2;
    let b_max = (m - 1) / 2;
    let table = count_table(a_max.max(b_max));

    let pow4: Vec<BigInt> = {
        let mut v = Vec::with_capacity(a_max.max(b_max) + 1);
        let mut cur = BigInt::one();
        for _ in 0..=a_max.max(b_max) {
            v.push(cur.clone());
            cur *= 4;
        }
        v
    };

    // sum_k [sum_a D(a,k) 4^(A-a) (n-2a)] [sum_b D(b,k) 4^(B-b) (m-2b)]
    //   / (16 * 4^(A+B))
    let mut total = BigInt::zero();
    for k in 0..=a_max.min(b_max) {
        let mut s_k = BigInt::zero();
        for a in k..=a_max {
            let d: BigInt = table.get(a, k).into();
            s_k += d * &pow4[a_max - a] * BigInt::from((n - 2 * a) as u64);
        }
        if s_k.is_zero() {
            continue;
        }
        let mut t_k = BigInt::zero();
        for b in k..=b_max {
            let d: BigInt = table.get(b, k).into();
            t_k += d * &pow4[b_max - b] * BigInt::from((m - 2 * b) as u64);
        }
        total += s_k * t_k;
    }
    let denom = BigInt::from(16) * &pow4[a_max] * &pow4[b_max];
    Ok(BigRational::new(total, denom))
}

/// Budget for the exhaustive expectation: `m + n + 2` label bits.
pub const BRUTE_BUDGET_BITS: usize = 22;

/// Exact expected loop count by enumerating every label assignment.
/// Independent of the Dyck-based formula; used to validate it.
pub fn brute_expected_loops(m: usize, n: usize) -> Result<BigRational> {
    if m < 1 || n < 1 {
        return Err(Error::InvalidInput("grid must be at least 1x1".into()));
    }
    let bits = m + n + 2;
    if bits > BRUTE_BUDGET_BITS {
        return Err(Error::Budget(format!(
            "{bits} label bits exceed the {BRUTE_BUDGET_BITS}-bit budget"
        )));
    }
    let eps_bits = n + 1;
    let eta_bits = m + 1;
    let total: u64 = (0u32..1 << eps_bits)
        .into_par_iter()
        .map(|eps_word| {
            let mut eps = vec![0u8; eps_bits];
            for (i, e) in eps.iter_mut().enumerate() {
                *e = ((eps_word >> i) & 1) as u8;
            }
            let mut eta = vec![0u8; eta_bits];
            let mut scratch = WalkScratch::new(m, n);
            let mut subtotal = 0u64;
            for eta_word in 0u32..1 << eta_bits {
                for (j, e) in eta.iter_mut().enumerate() {
                    *e = ((eta_word >> j) & 1) as u8;
                }
                subtotal += count_loops_labels(m, n, &eps, &eta, &mut scratch) as u64;
            }
            subtotal
        })
        .sum();
    Ok(BigRational::new(
        BigInt::from(total),
        BigInt::one() << bits,
    ))
}

/// How per-trial seeds derive from the master seed: splitmix64 of
/// `master + (trial + 1) * 0x9E3779B97F4A7C15`.
pub const MC_SEED_RULE: &str = "splitmix64(master + (trial+1) * 0x9E3779B97F4A7C15)";

pub fn derive_trial_seed(master: u64, trial: u64) -> u64 {
    let mut z = master.wrapping_add(trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Monte Carlo expectation report. `exact` carries the closed formula value
/// when it applies (the fair model, p = 1/2); `asymptotic` is the density
/// limit `(pi^2-9)/12 * m * n`. Standard errors are infinite (JSON null)
/// for a single trial.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpectationReport {
    pub m: usize,
    pub n: usize,
    pub p: f64,
    pub trials: u64,
    pub seed: u64,
    pub loops_mean: f64,
    pub loops_stderr: f64,
    pub regions_mean: f64,
    pub regions_stderr: f64,
    pub exact: Option<String>,
    pub asymptotic: f64,
    pub rng: String,
}

pub const EXPECTATION_CSV_HEADER: &str =
    "m,n,p,seed,trials,loops_mean,loops_stderr,regions_mean,regions_stderr,exact,asymptotic";

impl ExpectationReport {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.m,
            self.n,
            self.p,
            self.seed,
            self.trials,
            self.loops_mean,
            self.loops_stderr,
            self.regions_mean,
            self.regions_stderr,
            self.exact.as_deref().unwrap_or(""),
            self.asymptotic
        )
    }
}

fn mean_stderr(values: impl Iterator<Item = u64> + Clone, trials: u64) -> (f64, f64) {
    let sum: u64 = values.clone().sum();
    let mean = sum as f64 / trials as f64;
    if trials < 2 {
        return (mean, f64::INFINITY);
    }
    let var = values
        .map(|v| {
            let d = v as f64 - mean;
            d * d
        })
        .sum::<f64>()
        / (trials - 1) as f64;
    (mean, (var / trials as f64).sqrt())
}

/// Samples `trials` independent patterns and reports loop/region statistics.
/// Deterministic for fixed arguments regardless of thread scheduling: trial
/// seeds derive from the trial index and the aggregation order is fixed.
pub fn mc_estimate(
    m: usize,
    n: usize,
    p: f64,
    trials: u64,
    seed: u64,
) -> Result<ExpectationReport> {
    if trials < 1 {
        return Err(Error::InvalidInput("need at least one trial".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidInput(format!(
            "probability must lie in [0, 1], got {p}"
        )));
    }
    let counts: Vec<(u64, u64)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let pattern = Pattern::random(m, n, p, derive_trial_seed(seed, t))
                .expect("validated arguments");
            let loops = loop_count(&pattern);
            let (regions, boundary) = region_counts(&pattern);
            assert_eq!(
                regions,
                loops + boundary,
                "census identity failed on a sampled pattern"
            );
            (loops as u64, regions as u64)
        })
        .collect();

    let (loops_mean, loops_stderr) = mean_stderr(counts.iter().map(|c| c.0), trials);
    let (regions_mean, regions_stderr) = mean_stderr(counts.iter().map(|c| c.1), trials);
    let exact = if p == 0.5 {
        Some(exact_expected_loops(m, n)?.to_string())
    } else {
        None
    };
    Ok(ExpectationReport {
        m,
        n,
        p,
        trials,
        seed,
        loops_mean,
        loops_stderr,
        regions_mean,
        regions_stderr,
        exact,
        asymptotic: loop_density_constant() * (m * n) as f64,
        rng: format!("{RNG_ALGORITHM}; {MC_SEED_RULE}"),
    })
}

/// The loop density limit `(pi^2 - 9) / 12`.
pub fn loop_density_constant() -> f64 {
    (std::f64::consts::PI.powi(2) - 9.0) / 12.0
}

/// The series route to the constant: partial sums of
/// `(1/4) sum_{k>=1} 1 / (k^2 (k+1)^2)`, with the integral tail bound
/// `1/(12 K^3)`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ConstantReport {
    pub terms: u64,
    pub partial_sum: f64,
    pub tail_bound: f64,
    pub closed_form: f64,
}

pub fn constant_c(terms: u64) -> ConstantReport {
    let mut sum = 0.0;
    for k in (1..=terms).rev() {
        let kf = k as f64;
        sum += 1.0 / (4.0 * kf * kf * (kf + 1.0) * (kf + 1.0));
    }
    ConstantReport {
        terms,
        partial_sum: sum,
        tail_bound: 1.0 / (12.0 * (terms as f64).powi(3)),
        closed_form: loop_density_constant(),
    }
}
