//! Grid-line labels and the stitch-drawing rule.
//!
//! An `m x n` pattern is determined by 0/1 labels on its grid lines: `eps[i]`
//! for the vertical line with longitude `i` (0 <= i <= n) and `eta[j]` for
//! the horizontal line with latitude `j` (0 <= j <= m). A vertical stitch at
//! longitude `i`, latitude `j + 1/2` is drawn iff `j = eps[i] (mod 2)`; a
//! horizontal stitch at latitude `j`, longitude `i + 1/2` is drawn iff
//! `i = eta[j] (mod 2)`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Coord2, Orientation, Stitch};

/// Identifier of the generator behind [`Pattern::random`], recorded in
/// experiment outputs so runs can be reproduced.
pub const RNG_ALGORITHM: &str = "chacha8(seed_from_u64); labels eps[0..=n] then eta[0..=m]";

/// A finite hitomezashi pattern: grid dimensions plus grid-line labels.
///
/// Values are immutable after construction and cheap to share between
/// threads.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    m: usize,
    n: usize,
    eps: Vec<u8>,
    eta: Vec<u8>,
}

impl Pattern {
    /// Builds a pattern from explicit labels. `eps` must have length `n + 1`
    /// and `eta` length `m + 1`; every label must be 0 or 1.
    pub fn new(m: usize, n: usize, eps: Vec<u8>, eta: Vec<u8>) -> Result<Self> {
        if m < 1 || n < 1 {
            return Err(Error::InvalidInput(format!(
                "grid must be at least 1x1, got {m}x{n}"
            )));
        }
        if eps.len() != n + 1 {
            return Err(Error::Parse(format!(
                "eps has {} labels, expected n+1 = {}",
                eps.len(),
                n + 1
            )));
        }
        if eta.len() != m + 1 {
            return Err(Error::Parse(format!(
                "eta has {} labels, expected m+1 = {}",
                eta.len(),
                m + 1
            )));
        }
        if eps.iter().chain(eta.iter()).any(|&b| b > 1) {
            return Err(Error::Parse("labels must be 0 or 1".into()));
        }
        Ok(Pattern { m, n, eps, eta })
    }

    /// Rows (extent in latitude).
    pub fn rows(&self) -> usize {
        self.m
    }

    /// Columns (extent in longitude).
    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn eps(&self) -> &[u8] {
        &self.eps
    }

    pub fn eta(&self) -> &[u8] {
        &self.eta
    }

    /// The rug pattern: 1-labels on the four boundary grid lines, 0
    /// everywhere else. For odd m, n >= 3 it contains a single loop hugging
    /// the grid boundary.
    pub fn rug(m: usize, n: usize) -> Result<Self> {
        if m < 1 || n < 1 {
            return Err(Error::InvalidInput("rug needs m, n >= 1".into()));
        }
        let mut eps = vec![0u8; n + 1];
        let mut eta = vec![0u8; m + 1];
        eps[0] = 1;
        eps[n] = 1;
        eta[0] = 1;
        eta[m] = 1;
        Pattern::new(m, n, eps, eta)
    }

    /// Draws every label independently, 0 with probability `p`. The same
    /// `(m, n, p, seed)` always yields the same pattern; see
    /// [`RNG_ALGORITHM`].
    pub fn random(m: usize, n: usize, p: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidInput(format!(
                "probability must lie in [0, 1], got {p}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |len: usize| -> Vec<u8> {
            (0..len)
                .map(|_| if rng.random_bool(p) { 0u8 } else { 1u8 })
                .collect()
        };
        let eps = draw(n + 1);
        let eta = draw(m + 1);
        Pattern::new(m, n, eps, eta)
    }

    /// The pattern reflected across the diagonal: rows and columns swap, as
    /// do the two label families. `has_stitch` commutes with
    /// [`Stitch::transposed`].
    pub fn transposed(&self) -> Pattern {
        Pattern {
            m: self.n,
            n: self.m,
            eps: self.eta.clone(),
            eta: self.eps.clone(),
        }
    }

    /// The dual pattern: every grid-line label flipped, which interchanges
    /// stitches and non-stitches away from grid-boundary truncation.
    pub fn dual(&self) -> Pattern {
        Pattern {
            m: self.m,
            n: self.n,
            eps: self.eps.iter().map(|&b| 1 - b).collect(),
            eta: self.eta.iter().map(|&b| 1 - b).collect(),
        }
    }

    /// Does the drawing rule put stitch `s` in this pattern?
    pub fn has_stitch(&self, s: &Stitch) -> bool {
        let (x2, y2) = (s.mid.x2, s.mid.y2);
        match s.orientation {
            Orientation::V => {
                // longitude i = x2/2, latitude j + 1/2 with j = (y2-1)/2
                let i = x2 / 2;
                let j = (y2 - 1) / 2;
                if x2 < 0 || i > self.n as i64 || j < 0 || j >= self.m as i64 {
                    return false;
                }
                (j.rem_euclid(2)) as u8 == self.eps[i as usize] % 2
            }
            Orientation::H => {
                let j = y2 / 2;
                let i = (x2 - 1) / 2;
                if y2 < 0 || j > self.m as i64 || i < 0 || i >= self.n as i64 {
                    return false;
                }
                (i.rem_euclid(2)) as u8 == self.eta[j as usize] % 2
            }
        }
    }

    /// Is `pt` (a doubled lattice point) inside the closed grid?
    pub fn contains_lattice_point(&self, pt: Coord2) -> bool {
        pt.is_lattice_point()
            && pt.x2 >= 0
            && pt.x2 <= 2 * self.n as i64
            && pt.y2 >= 0
            && pt.y2 <= 2 * self.m as i64
    }

    /// All present stitches having `pt` as an endpoint. Interior lattice
    /// points always carry exactly two (one horizontal, one vertical);
    /// boundary points carry at most two.
    pub fn incident_stitches(&self, pt: Coord2) -> Result<Vec<Stitch>> {
        if !pt.is_lattice_point() {
            return Err(Error::InvalidInput(format!(
                "({}, {}) is not a doubled lattice point",
                pt.x2, pt.y2
            )));
        }
        if !self.contains_lattice_point(pt) {
            return Err(Error::OutOfBounds(format!(
                "lattice point ({}, {}) outside {}x{} grid",
                pt.x2 / 2,
                pt.y2 / 2,
                self.m,
                self.n
            )));
        }
        let candidates = [
            Stitch {
                orientation: Orientation::V,
                mid: Coord2::new(pt.x2, pt.y2 + 1),
            },
            Stitch {
                orientation: Orientation::V,
                mid: Coord2::new(pt.x2, pt.y2 - 1),
            },
            Stitch {
                orientation: Orientation::H,
                mid: Coord2::new(pt.x2 + 1, pt.y2),
            },
            Stitch {
                orientation: Orientation::H,
                mid: Coord2::new(pt.x2 - 1, pt.y2),
            },
        ];
        Ok(candidates
            .into_iter()
            .filter(|s| self.has_stitch(s))
            .collect())
    }

    /// Every stitch the pattern draws, in row-major scan order.
    pub fn all_stitches(&self) -> Vec<Stitch> {
        let mut out = Vec::new();
        for i in 0..=self.n as i64 {
            for j in 0..self.m as i64 {
                let s = Stitch::vertical(i, j);
                if self.has_stitch(&s) {
                    out.push(s);
                }
            }
        }
        for j in 0..=self.m as i64 {
            for i in 0..self.n as i64 {
                let s = Stitch::horizontal(i, j);
                if self.has_stitch(&s) {
                    out.push(s);
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PatternJson::from(self)).expect("pattern serializes")
    }

    pub fn from_json(text: &str) -> Result<Pattern> {
        let raw: PatternJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        raw.try_into()
    }
}

/// Wire form: `{"m":3,"n":3,"eps":"1001","eta":"1001"}` with bitstring
/// index 0 at longitude/latitude 0.
#[derive(Debug, Serialize, Deserialize)]
pub struct PatternJson {
    pub m: usize,
    pub n: usize,
    pub eps: String,
    pub eta: String,
}

impl From<&Pattern> for PatternJson {
    fn from(p: &Pattern) -> Self {
        let bits = |v: &[u8]| v.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect();
        PatternJson {
            m: p.m,
            n: p.n,
            eps: bits(&p.eps),
            eta: bits(&p.eta),
        }
    }
}

impl TryFrom<PatternJson> for Pattern {
    type Error = Error;

    fn try_from(raw: PatternJson) -> Result<Pattern> {
        let parse_bits = |s: &str, what: &str| -> Result<Vec<u8>> {
            s.chars()
                .map(|c| match c {
                    '0' => Ok(0u8),
                    '1' => Ok(1u8),
                    other => Err(Error::Parse(format!(
                        "{what} contains {other:?}; only '0' and '1' are allowed"
                    ))),
                })
                .collect()
        };
        Pattern::new(
            raw.m,
            raw.n,
            parse_bits(&raw.eps, "eps")?,
            parse_bits(&raw.eta, "eta")?,
        )
    }
}

impl Serialize for Pattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PatternJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Pattern {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PatternJson::deserialize(d)?;
        raw.try_into().map_err(serde::de::Error::custom)
    }
}
