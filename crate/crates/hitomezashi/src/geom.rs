//! Doubled-integer geometry for stitches and rectilinear loops.
//!
//! All coordinates are stored doubled, so the half-integer midpoints used to
//! address stitches become exact integers: a point at (x, y) in grid units is
//! stored as `Coord2 { x2: 2x, y2: 2y }`. Longitudes are x-coordinates and
//! latitudes are y-coordinates, with north = increasing y.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Stitch orientation: `H` for horizontal, `V` for vertical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Orientation {
    H,
    V,
}

impl Orientation {
    pub fn flipped(self) -> Orientation {
        match self {
            Orientation::H => Orientation::V,
            Orientation::V => Orientation::H,
        }
    }
}

/// A point in doubled coordinates.
///
/// Parity encodes what the point can be: a lattice point has both
/// coordinates even, a vertical-stitch midpoint has `x2` even and `y2` odd,
/// a horizontal-stitch midpoint has `x2` odd and `y2` even, and a unit-cell
/// center has both odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Coord2 {
    pub x2: i64,
    pub y2: i64,
}

impl Coord2 {
    pub const fn new(x2: i64, y2: i64) -> Self {
        Coord2 { x2, y2 }
    }

    pub fn is_lattice_point(&self) -> bool {
        self.x2 % 2 == 0 && self.y2 % 2 == 0
    }

    pub fn translated(&self, dx2: i64, dy2: i64) -> Self {
        Coord2::new(self.x2 + dx2, self.y2 + dy2)
    }
}

/// A unit-length stitch, addressed by orientation and doubled midpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Stitch {
    pub orientation: Orientation,
    pub mid: Coord2,
}

impl Stitch {
    /// Builds a stitch, rejecting midpoints whose parity does not match the
    /// orientation.
    pub fn new(orientation: Orientation, mid: Coord2) -> Result<Self> {
        let ok = match orientation {
            Orientation::V => mid.x2 % 2 == 0 && mid.y2.rem_euclid(2) == 1,
            Orientation::H => mid.x2.rem_euclid(2) == 1 && mid.y2 % 2 == 0,
        };
        if ok {
            Ok(Stitch { orientation, mid })
        } else {
            Err(Error::InvalidStitch(format!(
                "{orientation:?} stitch midpoint ({}, {}) has wrong parity",
                mid.x2, mid.y2
            )))
        }
    }

    /// Vertical stitch on the grid line with longitude `lon`, between lattice
    /// points (lon, j) and (lon, j+1).
    pub fn vertical(lon: i64, j: i64) -> Self {
        Stitch {
            orientation: Orientation::V,
            mid: Coord2::new(2 * lon, 2 * j + 1),
        }
    }

    /// Horizontal stitch on the grid line with latitude `lat`, between
    /// lattice points (i, lat) and (i+1, lat).
    pub fn horizontal(i: i64, lat: i64) -> Self {
        Stitch {
            orientation: Orientation::H,
            mid: Coord2::new(2 * i + 1, 2 * lat),
        }
    }

    /// The two endpoints, in increasing coordinate order.
    pub fn endpoints(&self) -> (Coord2, Coord2) {
        match self.orientation {
            Orientation::V => (
                Coord2::new(self.mid.x2, self.mid.y2 - 1),
                Coord2::new(self.mid.x2, self.mid.y2 + 1),
            ),
            Orientation::H => (
                Coord2::new(self.mid.x2 - 1, self.mid.y2),
                Coord2::new(self.mid.x2 + 1, self.mid.y2),
            ),
        }
    }

    pub fn has_endpoint(&self, pt: Coord2) -> bool {
        let (a, b) = self.endpoints();
        a == pt || b == pt
    }

    /// The endpoint other than `pt`; `pt` must be one of the two.
    pub fn other_endpoint(&self, pt: Coord2) -> Coord2 {
        let (a, b) = self.endpoints();
        if pt == a {
            b
        } else {
            debug_assert_eq!(pt, b);
            a
        }
    }

    pub fn translated(&self, dx2: i64, dy2: i64) -> Self {
        Stitch {
            orientation: self.orientation,
            mid: self.mid.translated(dx2, dy2),
        }
    }

    /// The stitch reflected across the diagonal (longitudes and latitudes
    /// exchanged).
    pub fn transposed(&self) -> Self {
        Stitch {
            orientation: self.orientation.flipped(),
            mid: Coord2::new(self.mid.y2, self.mid.x2),
        }
    }

    /// Ordering key used wherever a canonical "least stitch" is needed.
    pub fn key(&self) -> (i64, i64, Orientation) {
        (self.mid.x2, self.mid.y2, self.orientation)
    }
}

impl PartialOrd for Stitch {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Stitch {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl Serialize for Stitch {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Flat<'a> {
            o: &'a Orientation,
            x2: i64,
            y2: i64,
        }
        Flat {
            o: &self.orientation,
            x2: self.mid.x2,
            y2: self.mid.y2,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Stitch {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Flat {
            o: Orientation,
            x2: i64,
            y2: i64,
        }
        let f = Flat::deserialize(d)?;
        Stitch::new(f.o, Coord2::new(f.x2, f.y2)).map_err(serde::de::Error::custom)
    }
}

/// The polygon vertices of a closed stitch cycle, one per stitch.
///
/// Vertex `i` is the lattice point shared by stitches `i-1` and `i`
/// (cyclically), so edge `i` runs from vertex `i` to vertex `i+1` along
/// stitch `i`.
pub fn cycle_vertices(cycle: &[Stitch]) -> Vec<Coord2> {
    let len = cycle.len();
    assert!(len >= 4, "a closed cycle has at least 4 stitches");
    let mut verts = Vec::with_capacity(len);
    for i in 0..len {
        let prev = &cycle[(i + len - 1) % len];
        let cur = &cycle[i];
        let (a, b) = cur.endpoints();
        let v = if prev.has_endpoint(a) { a } else { b };
        debug_assert!(prev.has_endpoint(v));
        verts.push(v);
    }
    verts
}

/// Shoelace sum over doubled coordinates. Equals 8 times the enclosed area,
/// positive for counterclockwise traversal (north = +y).
pub fn signed_area8(verts: &[Coord2]) -> i64 {
    let mut sum = 0i64;
    for i in 0..verts.len() {
        let a = verts[i];
        let b = verts[(i + 1) % verts.len()];
        sum += a.x2 * b.y2 - b.x2 * a.y2;
    }
    sum
}

/// Exact ray-parity test: is `pt` strictly inside the region bounded by the
/// cycle? `pt` must not lie on the cycle. Casts a ray east at height
/// `y + epsilon`, which in doubled coordinates crosses exactly the vertical
/// stitches whose midpoint row is `pt.y2` rounded up to odd.
pub fn point_strictly_inside(cycle: &[Stitch], pt: Coord2) -> bool {
    let row = if pt.y2.rem_euclid(2) != 0 {
        pt.y2
    } else {
        pt.y2 + 1
    };
    let mut crossings = 0usize;
    for s in cycle {
        if s.orientation == Orientation::V && s.mid.y2 == row && s.mid.x2 > pt.x2 {
            crossings += 1;
        }
    }
    crossings % 2 == 1
}
