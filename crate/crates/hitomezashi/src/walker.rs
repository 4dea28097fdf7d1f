//! Allocation-light strand walking over raw label slices.
//!
//! The exhaustive oracles and the Monte Carlo estimator visit millions of
//! label assignments; this module walks strands straight off the labels with
//! a caller-provided scratch buffer instead of materializing patterns and
//! stitch sets.
//!
//! Walk state is a lattice point plus the orientation of the next stitch.
//! The continuation is forced: at (x, y) the vertical neighbor goes up when
//! `y = eps[x] (mod 2)` and down otherwise, and the horizontal neighbor goes
//! east when `x = eta[y] (mod 2)` and west otherwise.

use crate::geom::Stitch;

/// Scratch for visited-marking of vertical stitches, reusable across
/// assignments via a generation stamp so it never needs clearing.
pub(crate) struct WalkScratch {
    stamps: Vec<u32>,
    generation: u32,
}

impl WalkScratch {
    pub(crate) fn new(m: usize, n: usize) -> Self {
        WalkScratch {
            stamps: vec![0; (n + 1) * m],
            generation: 0,
        }
    }

    fn begin(&mut self) {
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamps.fill(0);
            self.generation = 1;
        }
    }

    #[inline]
    fn mark(&mut self, idx: usize) {
        self.stamps[idx] = self.generation;
    }

    #[inline]
    fn is_marked(&self, idx: usize) -> bool {
        self.stamps[idx] == self.generation
    }
}

#[inline]
fn v_index(m: usize, x: usize, j: usize) -> usize {
    x * m + j
}

/// Walks the strand through the vertical stitch at `(x0, j0)`, marking every
/// vertical stitch it owns. Returns the closed flag; when `collect` is given
/// and the strand closes, the full stitch cycle is appended in traversal
/// order.
#[allow(clippy::too_many_arguments)]
fn walk_strand(
    m: usize,
    n: usize,
    eps: &[u8],
    eta: &[u8],
    x0: usize,
    j0: usize,
    scratch: &mut WalkScratch,
    mut collect: Option<&mut Vec<Stitch>>,
) -> bool {
    scratch.mark(v_index(m, x0, j0));
    if let Some(buf) = &mut collect {
        buf.push(Stitch::vertical(x0 as i64, j0 as i64));
    }

    // One directed half-walk. Starting just after the anchor stitch, at
    // lattice point (x, y), alternating H then V steps. Returns true if the
    // walk came back around to the anchor.
    let half = |start_x: usize,
                    start_y: usize,
                    scratch: &mut WalkScratch,
                    mut collect: Option<&mut Vec<Stitch>>|
     -> bool {
        let (mut x, mut y) = (start_x, start_y);
        loop {
            // Horizontal continuation at (x, y).
            let east = (x & 1) as u8 == eta[y] & 1;
            if east {
                if x >= n {
                    return false;
                }
                if let Some(buf) = &mut collect {
                    buf.push(Stitch::horizontal(x as i64, y as i64));
                }
                x += 1;
            } else {
                if x == 0 {
                    return false;
                }
                x -= 1;
                if let Some(buf) = &mut collect {
                    buf.push(Stitch::horizontal(x as i64, y as i64));
                }
            }
            // Vertical continuation at (x, y).
            let up = (y & 1) as u8 == eps[x] & 1;
            let j = if up {
                if y >= m {
                    return false;
                }
                y
            } else {
                if y == 0 {
                    return false;
                }
                y - 1
            };
            if x == x0 && j == j0 {
                return true;
            }
            scratch.mark(v_index(m, x, j));
            if let Some(buf) = &mut collect {
                buf.push(Stitch::vertical(x as i64, j as i64));
            }
            y = if up { y + 1 } else { y - 1 };
        }
    };

    // Forward from the anchor's upper endpoint.
    let closed = half(x0, j0 + 1, scratch, collect.as_deref_mut());
    if closed {
        return true;
    }
    if let Some(buf) = &mut collect {
        buf.clear();
    }
    // The strand is open; walk the other way from the lower endpoint so the
    // rest of its vertical stitches get marked.
    let closed_back = half(x0, j0, scratch, None);
    debug_assert!(!closed_back);
    false
}

/// Number of loops in the pattern described by the labels.
pub(crate) fn count_loops_labels(
    m: usize,
    n: usize,
    eps: &[u8],
    eta: &[u8],
    scratch: &mut WalkScratch,
) -> usize {
    scratch.begin();
    let mut loops = 0;
    for x in 0..=n {
        // Vertical stitches on line x sit at j = eps[x], eps[x]+2, ...
        let mut j = (eps[x] & 1) as usize;
        while j < m {
            if !scratch.is_marked(v_index(m, x, j))
                && walk_strand(m, n, eps, eta, x, j, scratch, None)
            {
                loops += 1;
            }
            j += 2;
        }
    }
    loops
}

/// Invokes `on_loop` with the stitch cycle of every loop in the pattern
/// described by the labels. The buffer is reused between loops.
pub(crate) fn for_each_loop_labels(
    m: usize,
    n: usize,
    eps: &[u8],
    eta: &[u8],
    scratch: &mut WalkScratch,
    buf: &mut Vec<Stitch>,
    mut on_loop: impl FnMut(&[Stitch]),
) {
    scratch.begin();
    for x in 0..=n {
        let mut j = (eps[x] & 1) as usize;
        while j < m {
            if !scratch.is_marked(v_index(m, x, j)) {
                buf.clear();
                if walk_strand(m, n, eps, eta, x, j, scratch, Some(buf)) {
                    on_loop(buf);
                }
            }
            j += 2;
        }
    }
}
