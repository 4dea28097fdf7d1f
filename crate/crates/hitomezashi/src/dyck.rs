//! Dyck paths and the loop encoding.
//!
//! Orient a loop counterclockwise (the canonical orientation). All vertical
//! stitches at a common longitude then point the same way; reading the
//! longitudes west to east and writing `U` for a southbound line and `D` for
//! a northbound one gives a (width+1)-step sequence that starts with `U` and
//! ends with `D`. Trimming those two steps leaves a Dyck path. The same
//! construction on latitudes, read south to north with `U` for eastbound,
//! yields a second Dyck path of the same height, and the pair determines the
//! loop up to translation.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Orientation, Stitch};
use crate::strand::{stitch_directions, Loop};
use crate::walker::{for_each_loop_labels, WalkScratch};

/// One step of an up-down sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Step {
    U,
    D,
}

/// A Dyck path: equally many `U`s and `D`s, every prefix at least balanced.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyckPath {
    steps: Vec<Step>,
}

impl DyckPath {
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        let mut surplus = 0i64;
        for s in &steps {
            surplus += match s {
                Step::U => 1,
                Step::D => -1,
            };
            if surplus < 0 {
                return Err(Error::InvalidInput(
                    "a Dyck path prefix may never have more downs than ups".into(),
                ));
            }
        }
        if surplus != 0 {
            return Err(Error::InvalidInput(
                "a Dyck path has equally many up- and down-steps".into(),
            ));
        }
        Ok(DyckPath { steps })
    }

    pub fn empty() -> Self {
        DyckPath { steps: Vec::new() }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn semilength(&self) -> usize {
        self.steps.len() / 2
    }

    /// Maximum prefix surplus of ups over downs.
    pub fn height(&self) -> usize {
        let mut surplus = 0i64;
        let mut best = 0i64;
        for s in &self.steps {
            surplus += match s {
                Step::U => 1,
                Step::D => -1,
            };
            best = best.max(surplus);
        }
        best as usize
    }
}

impl fmt::Display for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            f.write_str(match s {
                Step::U => "U",
                Step::D => "D",
            })?;
        }
        Ok(())
    }
}

impl FromStr for DyckPath {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let steps = text
            .chars()
            .map(|c| match c {
                'U' | 'u' => Ok(Step::U),
                'D' | 'd' => Ok(Step::D),
                other => Err(Error::Parse(format!(
                    "Dyck paths use only 'U' and 'D', found {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        DyckPath::new(steps)
    }
}

impl Serialize for DyckPath {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for DyckPath {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// A pair of equal-height Dyck paths: `ver` encodes the longitudes, `hor`
/// the latitudes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyckPair {
    pub ver: DyckPath,
    pub hor: DyckPath,
}

impl DyckPair {
    pub fn new(ver: DyckPath, hor: DyckPath) -> Result<Self> {
        if ver.height() != hor.height() {
            return Err(Error::InvalidInput(format!(
                "pair heights differ: {} vs {}",
                ver.height(),
                hor.height()
            )));
        }
        Ok(DyckPair { ver, hor })
    }
}

/// Number of Dyck paths of semilength `n` with height exactly `k`, by
/// dynamic programming over (position, current height) with the maximum
/// height capped: paths of height exactly `k` are those fitting under `k`
/// but not under `k - 1`. `D(0, 0) = 1`.
pub fn count_dyck(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    if n == 0 {
        return BigUint::one();
    }
    if k == 0 {
        return BigUint::zero();
    }
    let capped = |cap: usize| -> BigUint { paths_with_cap(n, cap).pop().unwrap() };
    capped(k) - capped(k - 1)
}

/// `C(i, <= cap)` for i = 0..=n: Dyck path counts of semilength i that stay
/// at height at most `cap`.
fn paths_with_cap(n: usize, cap: usize) -> Vec<BigUint> {
    let mut counts = Vec::with_capacity(n + 1);
    counts.push(BigUint::one());
    let mut cur = vec![BigUint::zero(); cap + 1];
    let mut next = vec![BigUint::zero(); cap + 1];
    cur[0] = BigUint::one();
    for t in 1..=2 * n {
        for h in 0..=cap {
            let mut acc = BigUint::zero();
            if h > 0 {
                acc += &cur[h - 1];
            }
            if h < cap {
                acc += &cur[h + 1];
            }
            next[h] = acc;
        }
        std::mem::swap(&mut cur, &mut next);
        if t % 2 == 0 {
            counts.push(cur[0].clone());
        }
    }
    counts
}

/// Triangular table of `D(n, k)` for all `n <= max_n`, built once and shared.
#[derive(Debug)]
pub struct DyckCountTable {
    max_n: usize,
    /// `rows[n][k]` = D(n, k) for 0 <= k <= n.
    rows: Vec<Vec<BigUint>>,
}

impl DyckCountTable {
    pub fn build(max_n: usize) -> Self {
        // One capped DP per k, parallel over k; row n of the table is then
        // the difference of consecutive caps.
        let capped: Vec<Vec<BigUint>> = (0..=max_n)
            .into_par_iter()
            .map(|cap| paths_with_cap(max_n, cap))
            .collect();
        let rows: Vec<Vec<BigUint>> = (0..=max_n)
            .map(|n| {
                (0..=n)
                    .map(|k| {
                        if k == 0 {
                            if n == 0 {
                                BigUint::one()
                            } else {
                                BigUint::zero()
                            }
                        } else {
                            &capped[k][n] - &capped[k - 1][n]
                        }
                    })
                    .collect()
            })
            .collect();
        DyckCountTable { max_n, rows }
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn get(&self, n: usize, k: usize) -> BigUint {
        if n > self.max_n || k > n {
            BigUint::zero()
        } else {
            self.rows[n][k].clone()
        }
    }

    pub fn row(&self, n: usize) -> &[BigUint] {
        &self.rows[n]
    }
}

static TABLE_CACHE: Mutex<Option<std::sync::Arc<DyckCountTable>>> = Mutex::new(None);

/// Shared count table covering at least `max_n`, grown on demand.
pub fn count_table(max_n: usize) -> std::sync::Arc<DyckCountTable> {
    let mut guard = TABLE_CACHE.lock().unwrap();
    if let Some(existing) = guard.as_ref() {
        if existing.max_n() >= max_n {
            return existing.clone();
        }
    }
    let table = std::sync::Arc::new(DyckCountTable::build(max_n));
    *guard = Some(table.clone());
    table
}

/// Coefficients of the polynomial `f_m` from the recurrence
/// `f_m = f_{m-1} - x f_{m-2}`, `f_0 = f_1 = 1`.
pub fn kreweras_polynomial(m: usize) -> Vec<num_bigint::BigInt> {
    use num_bigint::BigInt;
    let mut prev: Vec<BigInt> = vec![BigInt::one()];
    if m == 0 {
        return prev;
    }
    let mut cur: Vec<BigInt> = vec![BigInt::one()];
    for _ in 2..=m {
        // next = cur - x * prev
        let mut next = cur.clone();
        if next.len() < prev.len() + 1 {
            next.resize(prev.len() + 1, BigInt::zero());
        }
        for (i, c) in prev.iter().enumerate() {
            next[i + 1] -= c;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Power-series coefficients of `F_k(x) = x^k / (f_k(x) f_{k+1}(x))` through
/// `x^(terms-1)`. The coefficient of `x^n` is `D(n, k)`.
pub fn kreweras_series(k: usize, terms: usize) -> Result<Vec<num_rational::BigRational>> {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    if terms < 1 {
        return Err(Error::InvalidInput("need at least one term".into()));
    }
    let fk = kreweras_polynomial(k);
    let fk1 = kreweras_polynomial(k + 1);
    // g = f_k * f_{k+1}; g[0] = 1.
    let mut g = vec![BigInt::zero(); fk.len() + fk1.len() - 1];
    for (i, a) in fk.iter().enumerate() {
        for (j, b) in fk1.iter().enumerate() {
            g[i + j] += a * b;
        }
    }
    debug_assert!(g[0].is_one());
    // h = 1/g mod x^terms by the standard recurrence.
    let mut h = vec![BigInt::zero(); terms];
    h[0] = BigInt::one();
    for idx in 1..terms {
        let mut acc = BigInt::zero();
        for j in 1..g.len().min(idx + 1) {
            acc += &g[j] * &h[idx - j];
        }
        h[idx] = -acc;
    }
    // F_k = x^k * h.
    let mut out = vec![BigRational::zero(); terms];
    for idx in k..terms {
        out[idx] = BigRational::from_integer(h[idx - k].clone());
    }
    Ok(out)
}

/// Encodes a loop as its pair of direction Dyck paths.
pub fn loop_to_dyck_pair(lp: &Loop) -> Result<DyckPair> {
    let cycle = lp.stitches();
    let dirs = stitch_directions(cycle);

    let read_axis = |orient: Orientation| -> Result<Vec<Step>> {
        // Per-line direction, indexed by doubled coordinate / 2.
        let coord = |s: &Stitch| match orient {
            Orientation::V => s.mid.x2,
            Orientation::H => s.mid.y2,
        };
        let max2 = cycle
            .iter()
            .filter(|s| s.orientation == orient)
            .map(&coord)
            .max()
            .unwrap();
        let lines = (max2 / 2) as usize + 1;
        let mut per_line: Vec<Option<i8>> = vec![None; lines];
        for (s, &d) in cycle.iter().zip(dirs.iter()) {
            if s.orientation != orient {
                continue;
            }
            let idx = (coord(s) / 2) as usize;
            match per_line[idx] {
                None => per_line[idx] = Some(d),
                Some(prev) if prev == d => {}
                Some(_) => {
                    return Err(Error::InvariantViolation(format!(
                        "mixed traversal directions on a single {orient:?} line"
                    )))
                }
            }
        }
        per_line
            .into_iter()
            .map(|d| match (orient, d) {
                // Southbound longitudes and eastbound latitudes read as U.
                (Orientation::V, Some(-1)) | (Orientation::H, Some(1)) => Ok(Step::U),
                (Orientation::V, Some(1)) | (Orientation::H, Some(-1)) => Ok(Step::D),
                _ => Err(Error::InvariantViolation(
                    "loop skips a line inside its bounding box".into(),
                )),
            })
            .collect()
    };

    let full_ver = read_axis(Orientation::V)?;
    let full_hor = read_axis(Orientation::H)?;
    let trim = |mut steps: Vec<Step>| -> Result<DyckPath> {
        if steps.len() < 2 || steps[0] != Step::U || steps[steps.len() - 1] != Step::D {
            return Err(Error::InvariantViolation(
                "direction sequence does not start U and end D".into(),
            ));
        }
        steps.remove(0);
        steps.pop();
        DyckPath::new(steps)
            .map_err(|e| Error::InvariantViolation(format!("trimmed sequence not Dyck: {e}")))
    };
    let ver = trim(full_ver)?;
    let hor = trim(full_hor)?;
    DyckPair::new(ver, hor)
        .map_err(|e| Error::InvariantViolation(format!("encoded pair heights differ: {e}")))
}

/// Decodes a pair of equal-height Dyck paths back into the unique canonical
/// loop that encodes to it.
///
/// The direction sequences force the walk completely: once a starting west
/// stitch is chosen, every subsequent stitch is determined. We try each
/// starting latitude, keep the walks that close into label-consistent loops
/// spanning the right bounding box, and insist exactly one loop results.
pub fn dyck_pair_to_loop(pair: &DyckPair) -> Result<Loop> {
    if pair.ver.height() != pair.hor.height() {
        return Err(Error::InvalidInput(format!(
            "pair heights differ: {} vs {}",
            pair.ver.height(),
            pair.hor.height()
        )));
    }
    let w = 2 * pair.ver.semilength() as i64 + 1;
    let h = 2 * pair.hor.semilength() as i64 + 1;

    let expand = |path: &DyckPath| -> Vec<Step> {
        let mut steps = Vec::with_capacity(path.steps().len() + 2);
        steps.push(Step::U);
        steps.extend_from_slice(path.steps());
        steps.push(Step::D);
        steps
    };
    let lon_steps = expand(&pair.ver);
    let lat_steps = expand(&pair.hor);
    // U on a longitude means its vertical stitches run south; U on a
    // latitude means its horizontal stitches run east.
    let v_dy = |x: i64| -> i64 {
        match lon_steps[x as usize] {
            Step::U => -1,
            Step::D => 1,
        }
    };
    let h_dx = |y: i64| -> i64 {
        match lat_steps[y as usize] {
            Step::U => 1,
            Step::D => -1,
        }
    };

    let mut found: BTreeSet<Loop> = BTreeSet::new();
    'starts: for y0 in 1..=h {
        let mut cycle: Vec<Stitch> = Vec::new();
        let (mut x, mut y) = (0i64, y0);
        let budget = 2 * (w + 1) * (h + 1) + 4;
        loop {
            if cycle.len() as i64 > budget {
                continue 'starts;
            }
            // Vertical stitch at longitude x.
            let dy = v_dy(x);
            let ny = y + dy;
            if ny < 0 || ny > h {
                continue 'starts;
            }
            cycle.push(Stitch::vertical(x, y.min(ny)));
            y = ny;
            // Horizontal stitch at latitude y.
            let dx = h_dx(y);
            let nx = x + dx;
            if nx < 0 || nx > w {
                continue 'starts;
            }
            cycle.push(Stitch::horizontal(x.min(nx), y));
            x = nx;
            if x == 0 && y == y0 {
                break;
            }
        }
        if !walk_is_hitomezashi_loop(&cycle, w, h) {
            continue;
        }
        let lp = Loop::from_cycle(cycle)?;
        // Validate by round trip before accepting.
        if loop_to_dyck_pair(&lp)? == *pair {
            found.insert(lp);
        }
    }

    match found.len() {
        1 => Ok(found.into_iter().next().unwrap()),
        0 => Err(Error::InvariantViolation(
            "no loop realizes this pair of Dyck paths".into(),
        )),
        more => Err(Error::InvariantViolation(format!(
            "{more} distinct loops realize one pair of Dyck paths"
        ))),
    }
}

/// Checks that a forced walk is a genuine hitomezashi loop: stitches on each
/// grid line share a parity (so labels exist), nothing repeats, and the
/// bounding box is exactly [0, w] x [0, h].
fn walk_is_hitomezashi_loop(cycle: &[Stitch], w: i64, h: i64) -> bool {
    let mut seen = BTreeSet::new();
    for s in cycle {
        if !seen.insert(*s) {
            return false;
        }
    }
    let mut lon_parity: Vec<Option<i64>> = vec![None; w as usize + 1];
    let mut lat_parity: Vec<Option<i64>> = vec![None; h as usize + 1];
    let (mut max_x2, mut max_y2) = (0, 0);
    let (mut min_x2, mut min_y2) = (i64::MAX, i64::MAX);
    for s in cycle {
        min_x2 = min_x2.min(s.mid.x2);
        max_x2 = max_x2.max(s.mid.x2);
        min_y2 = min_y2.min(s.mid.y2);
        max_y2 = max_y2.max(s.mid.y2);
        match s.orientation {
            Orientation::V => {
                let line = (s.mid.x2 / 2) as usize;
                let parity = ((s.mid.y2 - 1) / 2).rem_euclid(2);
                match lon_parity[line] {
                    None => lon_parity[line] = Some(parity),
                    Some(p) if p == parity => {}
                    Some(_) => return false,
                }
            }
            Orientation::H => {
                let line = (s.mid.y2 / 2) as usize;
                let parity = ((s.mid.x2 - 1) / 2).rem_euclid(2);
                match lat_parity[line] {
                    None => lat_parity[line] = Some(parity),
                    Some(p) if p == parity => {}
                    Some(_) => return false,
                }
            }
        }
    }
    min_x2 == 0 && min_y2 == 0 && max_x2 == 2 * w && max_y2 == 2 * h
}

/// Number of loops (modulo translation) with width `w` and height `h`:
/// the equal-height pair counts `sum_k D((w-1)/2, k) * D((h-1)/2, k)`.
pub fn count_loops_by_size(w: usize, h: usize) -> Result<BigUint> {
    if w % 2 == 0 || h % 2 == 0 || w < 1 || h < 1 {
        return Err(Error::InvalidInput(format!(
            "loop widths and heights are odd; got {w}x{h}"
        )));
    }
    let a = (w - 1) / 2;
    let b = (h - 1) / 2;
    let table = count_table(a.max(b));
    let mut total = BigUint::zero();
    for k in 0..=a.min(b) {
        total += table.get(a, k) * table.get(b, k);
    }
    Ok(total)
}

/// Default cap on `(w+2) + (h+2)` label bits for the exhaustive loop search.
pub const ENUM_BUDGET_BITS: usize = 24;

/// Exhaustively enumerates every loop of width exactly `w` and height
/// exactly `h`, by scanning all label assignments of an (h+1) x (w+1)
/// window (one cell of margin) and deduplicating canonical forms.
///
/// Independent of the Dyck counting route; used to validate it.
pub fn enumerate_loops_brute(w: usize, h: usize) -> Result<BTreeSet<Loop>> {
    enumerate_loops_brute_with_budget(w, h, ENUM_BUDGET_BITS)
}

pub fn enumerate_loops_brute_with_budget(
    w: usize,
    h: usize,
    budget_bits: usize,
) -> Result<BTreeSet<Loop>> {
    if w % 2 == 0 || h % 2 == 0 || w < 1 || h < 1 {
        return Err(Error::InvalidInput(format!(
            "loop widths and heights are odd; got {w}x{h}"
        )));
    }
    let bits = (w + 2) + (h + 2);
    if bits > budget_bits {
        return Err(Error::Budget(format!(
            "{bits} label bits exceed the {budget_bits}-bit enumeration budget"
        )));
    }
    let rows = h + 1;
    let cols = w + 1;
    let eps_bits = cols + 1; // w + 2
    let eta_bits = rows + 1; // h + 2

    let sets: Vec<BTreeSet<Loop>> = (0u32..1 << eps_bits)
        .into_par_iter()
        .map(|eps_word| {
            let mut found = BTreeSet::new();
            let mut eps = vec![0u8; eps_bits];
            for (i, e) in eps.iter_mut().enumerate() {
                *e = ((eps_word >> i) & 1) as u8;
            }
            let mut eta = vec![0u8; eta_bits];
            let mut scratch = WalkScratch::new(rows, cols);
            let mut buf = Vec::new();
            for eta_word in 0u32..1 << eta_bits {
                for (j, e) in eta.iter_mut().enumerate() {
                    *e = ((eta_word >> j) & 1) as u8;
                }
                for_each_loop_labels(rows, cols, &eps, &eta, &mut scratch, &mut buf, |cycle| {
                    let min_x2 = cycle.iter().map(|s| s.mid.x2).min().unwrap();
                    let max_x2 = cycle.iter().map(|s| s.mid.x2).max().unwrap();
                    if (max_x2 - min_x2) as usize != 2 * w {
                        return;
                    }
                    let min_y2 = cycle.iter().map(|s| s.mid.y2).min().unwrap();
                    let max_y2 = cycle.iter().map(|s| s.mid.y2).max().unwrap();
                    if (max_y2 - min_y2) as usize != 2 * h {
                        return;
                    }
                    found.insert(
                        Loop::from_cycle(cycle.to_vec()).expect("walked cycles are loops"),
                    );
                });
            }
            found
        })
        .collect();

    let mut all = BTreeSet::new();
    for s in sets {
        all.extend(s);
    }
    Ok(all)
}
