//! Strand tracing and loop analysis.
//!
//! A strand is a maximal stitch path. Tracing is unambiguous: every interior
//! lattice point of a pattern carries exactly two stitches (one horizontal,
//! one vertical), so we enter on one and leave on the other. A strand either
//! closes into a loop or terminates on grid-boundary points. Strands that
//! touch the window boundary are reported as open; only walks that return to
//! their starting stitch become loops.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{cycle_vertices, point_strictly_inside, signed_area8, Coord2, Orientation, Stitch};
use crate::pattern::Pattern;

/// A maximal traced path at its absolute position in some pattern.
///
/// For closed strands the stitch sequence is cyclic (the last stitch meets
/// the first); for open strands it runs end to end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strand {
    pub stitches: Vec<Stitch>,
    pub closed: bool,
}

impl Strand {
    pub fn len(&self) -> usize {
        self.stitches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stitches.is_empty()
    }

    /// The canonical loop value of a closed strand, or `None` if open.
    pub fn to_loop(&self) -> Option<Loop> {
        if self.closed {
            Some(Loop::from_cycle(self.stitches.clone()).expect("traced cycle is a valid loop"))
        } else {
            None
        }
    }
}

/// Follows the strand through `start` to completion.
///
/// Returns a closed strand if the walk comes back to `start`, otherwise the
/// full open path between its two dead ends (boundary lattice points with
/// fewer than two incident stitches).
pub fn trace_strand(p: &Pattern, start: &Stitch) -> Result<Strand> {
    if !p.has_stitch(start) {
        return Err(Error::InvalidInput(format!(
            "start stitch {start:?} is not present in the pattern"
        )));
    }
    let (a, b) = start.endpoints();

    // Walk away from `from`, returning the stitches visited and whether the
    // walk closed back onto `start`.
    let walk = |mut at: Coord2| -> (Vec<Stitch>, bool) {
        let mut prev = *start;
        let mut out = Vec::new();
        loop {
            let inc = p
                .incident_stitches(at)
                .expect("stitch endpoints lie inside the grid");
            let next = inc.into_iter().find(|s| *s != prev);
            match next {
                None => return (out, false),
                Some(s) if s == *start => return (out, true),
                Some(s) => {
                    at = s.other_endpoint(at);
                    prev = s;
                    out.push(s);
                }
            }
        }
    };

    let (forward, closed) = walk(b);
    if closed {
        let mut stitches = vec![*start];
        stitches.extend(forward);
        return Ok(Strand {
            stitches,
            closed: true,
        });
    }
    let (backward, closed_back) = walk(a);
    debug_assert!(!closed_back, "walk closes in both directions or neither");
    let mut stitches: Vec<Stitch> = backward.into_iter().rev().collect();
    stitches.push(*start);
    stitches.extend(forward);
    Ok(Strand {
        stitches,
        closed: false,
    })
}

/// Partitions every present stitch into maximal strands, in first-discovery
/// order of `Pattern::all_stitches`.
pub fn all_strands(p: &Pattern) -> Vec<Strand> {
    let mut seen: HashSet<Stitch> = HashSet::new();
    let mut out = Vec::new();
    for s in p.all_stitches() {
        if seen.contains(&s) {
            continue;
        }
        let strand = trace_strand(p, &s).expect("enumerated stitches are present");
        seen.extend(strand.stitches.iter().copied());
        out.push(strand);
    }
    out
}

/// A hitomezashi loop in canonical form, representing its translation class.
///
/// Canonical means: translated so the minimum stitch coordinates are zero,
/// oriented counterclockwise (positive signed area), and rotated so the
/// lexicographically least stitch comes first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Loop {
    stitches: Vec<Stitch>,
}

impl Loop {
    /// Canonicalizes a closed stitch cycle. The cycle must alternate
    /// orientations, have consecutive stitches sharing endpoints, and close
    /// up; these all hold for traced strands.
    pub fn from_cycle(cycle: Vec<Stitch>) -> Result<Loop> {
        if cycle.len() < 4 || cycle.len() % 2 != 0 {
            return Err(Error::InvalidInput(format!(
                "a loop has an even number of stitches, at least 4; got {}",
                cycle.len()
            )));
        }
        for i in 0..cycle.len() {
            let next = &cycle[(i + 1) % cycle.len()];
            if cycle[i].orientation == next.orientation {
                return Err(Error::InvalidInput(
                    "loop stitches must alternate orientation".into(),
                ));
            }
            let (a, b) = cycle[i].endpoints();
            if !(next.has_endpoint(a) || next.has_endpoint(b)) {
                return Err(Error::InvalidInput(
                    "consecutive loop stitches must share an endpoint".into(),
                ));
            }
        }
        Ok(Loop {
            stitches: canonicalize_cycle(cycle),
        })
    }

    pub fn stitches(&self) -> &[Stitch] {
        &self.stitches
    }

    pub fn len(&self) -> usize {
        self.stitches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stitches.is_empty()
    }

    /// Polygon vertices in traversal (counterclockwise) order.
    pub fn vertices(&self) -> Vec<Coord2> {
        cycle_vertices(&self.stitches)
    }

    pub fn width(&self) -> i64 {
        extent(&self.stitches, |s| s.mid.x2)
    }

    pub fn height(&self) -> i64 {
        extent(&self.stitches, |s| s.mid.y2)
    }

    pub fn stats(&self) -> LoopStats {
        loop_stats(&self.stitches)
    }

    pub fn cross_section(&self, axis: CrossAxis, pos2: i64) -> Result<Vec<i64>> {
        cross_section(&self.stitches, axis, pos2)
    }

    pub fn dent_class(&self, axis: CrossAxis, pos2: i64) -> Result<DentClass> {
        dent_class(&self.stitches, axis, pos2)
    }

    pub fn extremal_report(&self) -> Result<ExtremalReport> {
        extremal_report(&self.stitches)
    }

    pub fn verify_laws(&self) -> LoopLawReport {
        verify_loop_laws(&self.stitches)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.stitches).expect("loop serializes")
    }

    pub fn from_json(text: &str) -> Result<Loop> {
        let stitches: Vec<Stitch> =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Loop::from_cycle(stitches)
    }
}

impl Serialize for Loop {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.stitches.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Loop {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let stitches = Vec::<Stitch>::deserialize(d)?;
        Loop::from_cycle(stitches).map_err(serde::de::Error::custom)
    }
}

fn extent(cycle: &[Stitch], coord: impl Fn(&Stitch) -> i64) -> i64 {
    let min = cycle.iter().map(&coord).min().unwrap();
    let max = cycle.iter().map(&coord).max().unwrap();
    (max - min) / 2
}

/// Translate to the origin, orient counterclockwise, rotate to the least
/// stitch. Idempotent, and two cycles are translates of each other iff they
/// canonicalize identically.
pub(crate) fn canonicalize_cycle(mut cycle: Vec<Stitch>) -> Vec<Stitch> {
    let min_x2 = cycle.iter().map(|s| s.mid.x2).min().unwrap();
    let min_y2 = cycle.iter().map(|s| s.mid.y2).min().unwrap();
    debug_assert!(min_x2 % 2 == 0 && min_y2 % 2 == 0, "extremes sit on stitches");
    if min_x2 != 0 || min_y2 != 0 {
        for s in &mut cycle {
            *s = s.translated(-min_x2, -min_y2);
        }
    }
    if signed_area8(&cycle_vertices(&cycle)) < 0 {
        cycle.reverse();
    }
    let least = cycle
        .iter()
        .enumerate()
        .min_by_key(|(_, s)| s.key())
        .map(|(i, _)| i)
        .unwrap();
    cycle.rotate_left(least);
    cycle
}

/// Loop measurements. `area` is the enclosed area in unit cells via the
/// shoelace formula; `interior_points` and `boundary_points` are the lattice
/// point counts appearing in Pick's identity `area = X + Y/2 - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopStats {
    pub width: i64,
    pub height: i64,
    pub length: usize,
    pub area: i64,
    pub interior_points: i64,
    pub boundary_points: usize,
}

impl LoopStats {
    pub fn pick_identity_holds(&self) -> bool {
        debug_assert_eq!(self.boundary_points % 2, 0);
        self.area == self.interior_points + (self.boundary_points as i64) / 2 - 1
    }
}

pub(crate) fn loop_stats(cycle: &[Stitch]) -> LoopStats {
    let verts = cycle_vertices(cycle);
    let area8 = signed_area8(&verts);
    debug_assert_eq!(area8.abs() % 8, 0);
    let area = area8.abs() / 8;

    let min_x2 = cycle.iter().map(|s| s.mid.x2).min().unwrap();
    let max_x2 = cycle.iter().map(|s| s.mid.x2).max().unwrap();
    let min_y2 = cycle.iter().map(|s| s.mid.y2).min().unwrap();
    let max_y2 = cycle.iter().map(|s| s.mid.y2).max().unwrap();

    let on_loop: HashSet<Coord2> = verts.iter().copied().collect();
    let mut interior = 0i64;
    let mut y2 = min_y2 + 2;
    while y2 < max_y2 {
        let mut x2 = min_x2 + 2;
        while x2 < max_x2 {
            let pt = Coord2::new(x2, y2);
            if !on_loop.contains(&pt) && point_strictly_inside(cycle, pt) {
                interior += 1;
            }
            x2 += 2;
        }
        y2 += 2;
    }

    LoopStats {
        width: (max_x2 - min_x2) / 2,
        height: (max_y2 - min_y2) / 2,
        length: cycle.len(),
        area,
        interior_points: interior,
        boundary_points: verts.len(),
    }
}

/// Which family of stitches a positional query addresses: `Lon` selects the
/// horizontal stitches at a (half-integer) longitude, `Lat` the vertical
/// stitches at a (half-integer) latitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossAxis {
    Lon,
    Lat,
}

/// Sorted cross-section coordinates: latitudes of the horizontal stitches at
/// a given longitude, or longitudes of the vertical stitches at a given
/// latitude. Positions are doubled (`pos2`), results are in grid units.
pub(crate) fn cross_section(cycle: &[Stitch], axis: CrossAxis, pos2: i64) -> Result<Vec<i64>> {
    let mut coords: Vec<i64> = cycle
        .iter()
        .filter(|s| match axis {
            CrossAxis::Lon => s.orientation == Orientation::H && s.mid.x2 == pos2,
            CrossAxis::Lat => s.orientation == Orientation::V && s.mid.y2 == pos2,
        })
        .map(|s| match axis {
            CrossAxis::Lon => s.mid.y2 / 2,
            CrossAxis::Lat => s.mid.x2 / 2,
        })
        .collect();
    if coords.is_empty() {
        return Err(Error::EmptyCrossSection(format!(
            "no {} stitches at doubled position {pos2}",
            match axis {
                CrossAxis::Lon => "horizontal",
                CrossAxis::Lat => "vertical",
            }
        )));
    }
    coords.sort_unstable();
    Ok(coords)
}

/// Sorted distinct doubled positions where the cycle has stitches of the
/// family `axis` selects.
pub(crate) fn cross_section_positions(cycle: &[Stitch], axis: CrossAxis) -> Vec<i64> {
    let mut v: Vec<i64> = cycle
        .iter()
        .filter(|s| match axis {
            CrossAxis::Lon => s.orientation == Orientation::H,
            CrossAxis::Lat => s.orientation == Orientation::V,
        })
        .map(|s| match axis {
            CrossAxis::Lon => s.mid.x2,
            CrossAxis::Lat => s.mid.y2,
        })
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Stitch classification by its flanking neighbors: an indent or outdent has
/// flanking stitches sharing a coordinate (cell between them exterior or
/// interior respectively); a nondent's flanks do not align.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DentClass {
    Indent,
    Outdent,
    Nondent,
}

fn classify_dent(cycle: &[Stitch], k: usize) -> DentClass {
    let len = cycle.len();
    let s = &cycle[k];
    let before = &cycle[(k + len - 1) % len];
    let after = &cycle[(k + 1) % len];
    debug_assert_ne!(before.orientation, s.orientation);
    debug_assert_ne!(after.orientation, s.orientation);
    let (aligned, cell_center) = match s.orientation {
        Orientation::H => (
            before.mid.y2 == after.mid.y2,
            Coord2::new(s.mid.x2, before.mid.y2),
        ),
        Orientation::V => (
            before.mid.x2 == after.mid.x2,
            Coord2::new(before.mid.x2, s.mid.y2),
        ),
    };
    if !aligned {
        return DentClass::Nondent;
    }
    if point_strictly_inside(cycle, cell_center) {
        DentClass::Outdent
    } else {
        DentClass::Indent
    }
}

/// Classifies every stitch of the selected family at `pos2` and checks they
/// agree, returning the common class. Disagreement would contradict the
/// mirroring symmetry of loops and is reported as an invariant violation.
pub(crate) fn dent_class(cycle: &[Stitch], axis: CrossAxis, pos2: i64) -> Result<DentClass> {
    let want = match axis {
        CrossAxis::Lon => Orientation::H,
        CrossAxis::Lat => Orientation::V,
    };
    let mut found: Option<DentClass> = None;
    for (k, s) in cycle.iter().enumerate() {
        let here = match axis {
            CrossAxis::Lon => s.mid.x2,
            CrossAxis::Lat => s.mid.y2,
        };
        if s.orientation != want || here != pos2 {
            continue;
        }
        let class = classify_dent(cycle, k);
        match found {
            None => found = Some(class),
            Some(prev) if prev == class => {}
            Some(prev) => {
                return Err(Error::InvariantViolation(format!(
                    "mixed dent classes {prev:?} and {class:?} at doubled position {pos2}"
                )))
            }
        }
    }
    found.ok_or_else(|| {
        Error::EmptyCrossSection(format!("no stitches to classify at doubled position {pos2}"))
    })
}

/// Positions of the extremal stitches of a loop, with the matching laws
/// already checked: north- and south-extremal longitudes coincide (as do
/// east- and west-extremal latitudes), and each such line meets the loop in
/// exactly two stitches.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalReport {
    /// Doubled longitudes of north-extremal horizontal stitches, sorted.
    pub north_lons2: Vec<i64>,
    pub south_lons2: Vec<i64>,
    /// Doubled latitudes of east-extremal vertical stitches, sorted.
    pub east_lats2: Vec<i64>,
    pub west_lats2: Vec<i64>,
}

/// Positions at the four extremes: (north lons, south lons, east lats,
/// west lats), each sorted, in doubled coordinates.
fn extremal_sets(cycle: &[Stitch]) -> (Vec<i64>, Vec<i64>, Vec<i64>, Vec<i64>) {
    let horiz: Vec<Stitch> = cycle
        .iter()
        .filter(|s| s.orientation == Orientation::H)
        .copied()
        .collect();
    let vert: Vec<Stitch> = cycle
        .iter()
        .filter(|s| s.orientation == Orientation::V)
        .copied()
        .collect();
    debug_assert!(!horiz.is_empty() && !vert.is_empty());

    let max_lat = horiz.iter().map(|s| s.mid.y2).max().unwrap();
    let min_lat = horiz.iter().map(|s| s.mid.y2).min().unwrap();
    let max_lon = vert.iter().map(|s| s.mid.x2).max().unwrap();
    let min_lon = vert.iter().map(|s| s.mid.x2).min().unwrap();

    let pick = |from: &[Stitch], level: fn(&Stitch) -> i64, at: i64, coord: fn(&Stitch) -> i64| {
        let mut v: Vec<i64> = from
            .iter()
            .filter(|s| level(s) == at)
            .map(coord)
            .collect();
        v.sort_unstable();
        v
    };
    let lat_of: fn(&Stitch) -> i64 = |s| s.mid.y2;
    let lon_of: fn(&Stitch) -> i64 = |s| s.mid.x2;
    (
        pick(&horiz, lat_of, max_lat, lon_of),
        pick(&horiz, lat_of, min_lat, lon_of),
        pick(&vert, lon_of, max_lon, lat_of),
        pick(&vert, lon_of, min_lon, lat_of),
    )
}

pub(crate) fn extremal_report(cycle: &[Stitch]) -> Result<ExtremalReport> {
    let (north_lons2, south_lons2, east_lats2, west_lats2) = extremal_sets(cycle);
    let report = ExtremalReport {
        north_lons2,
        south_lons2,
        east_lats2,
        west_lats2,
    };

    if report.north_lons2 != report.south_lons2 || report.east_lats2 != report.west_lats2 {
        return Err(Error::InvariantViolation(
            "extremal stitch positions do not match across the loop".into(),
        ));
    }
    for &lon2 in &report.north_lons2 {
        let count = cycle.iter().filter(|s| s.mid.x2 == lon2).count();
        if count != 2 {
            return Err(Error::InvariantViolation(format!(
                "expected exactly 2 stitches at extremal doubled longitude {lon2}, found {count}"
            )));
        }
    }
    for &lat2 in &report.east_lats2 {
        let count = cycle.iter().filter(|s| s.mid.y2 == lat2).count();
        if count != 2 {
            return Err(Error::InvariantViolation(format!(
                "expected exactly 2 stitches at extremal doubled latitude {lat2}, found {count}"
            )));
        }
    }
    Ok(report)
}

/// Traversal direction of each stitch: +1 if it runs north/east, -1 if
/// south/west, indexed like `cycle`.
pub(crate) fn stitch_directions(cycle: &[Stitch]) -> Vec<i8> {
    let verts = cycle_vertices(cycle);
    let len = cycle.len();
    (0..len)
        .map(|i| {
            let a = verts[i];
            let b = verts[(i + 1) % len];
            match cycle[i].orientation {
                Orientation::V => {
                    if b.y2 > a.y2 {
                        1
                    } else {
                        -1
                    }
                }
                Orientation::H => {
                    if b.x2 > a.x2 {
                        1
                    } else {
                        -1
                    }
                }
            }
        })
        .collect()
}

/// One boolean per structural law of hitomezashi loops. Produced by
/// [`Loop::verify_laws`]; failures are reported, never thrown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopLawReport {
    pub odd_width: bool,
    pub odd_height: bool,
    /// length = 4 (mod 8)
    pub length_mod_8: bool,
    /// area = 1 (mod 4)
    pub area_mod_4: bool,
    /// shoelace area equals X + Y/2 - 1
    pub pick_identity: bool,
    /// every lattice point of the loop is a stitch endpoint exactly once
    pub boundary_equals_length: bool,
    /// consecutive cross-section gaps odd, extreme gap odd, even count
    pub cross_sections_odd: bool,
    /// one dent class per populated line, on both axes
    pub dents_uniform: bool,
    /// stitches on a common line all traverse the same way
    pub directions_uniform: bool,
    /// north/south (and east/west) extremal positions coincide
    pub extremal_match: bool,
    /// extremal lines carry exactly two stitches
    pub extremal_two_stitches: bool,
}

impl LoopLawReport {
    pub fn all_pass(&self) -> bool {
        self.odd_width
            && self.odd_height
            && self.length_mod_8
            && self.area_mod_4
            && self.pick_identity
            && self.boundary_equals_length
            && self.cross_sections_odd
            && self.dents_uniform
            && self.directions_uniform
            && self.extremal_match
            && self.extremal_two_stitches
    }
}

pub(crate) fn verify_loop_laws(cycle: &[Stitch]) -> LoopLawReport {
    let stats = loop_stats(cycle);

    let mut lons2: BTreeSet<i64> = BTreeSet::new();
    let mut lats2: BTreeSet<i64> = BTreeSet::new();
    for s in cycle {
        match s.orientation {
            Orientation::H => {
                lons2.insert(s.mid.x2);
            }
            Orientation::V => {
                lats2.insert(s.mid.y2);
            }
        }
    }

    let section_ok = |coords: &[i64]| -> bool {
        if coords.len() % 2 != 0 {
            return false;
        }
        let gaps_odd = coords.windows(2).all(|w| (w[1] - w[0]).rem_euclid(2) == 1);
        let extreme_odd = (coords[coords.len() - 1] - coords[0]).rem_euclid(2) == 1;
        gaps_odd && extreme_odd
    };
    let mut cross_sections_odd = true;
    let mut dents_uniform = true;
    for &lon2 in &lons2 {
        match cross_section(cycle, CrossAxis::Lon, lon2) {
            Ok(coords) => cross_sections_odd &= section_ok(&coords),
            Err(_) => cross_sections_odd = false,
        }
        dents_uniform &= dent_class(cycle, CrossAxis::Lon, lon2).is_ok();
    }
    for &lat2 in &lats2 {
        match cross_section(cycle, CrossAxis::Lat, lat2) {
            Ok(coords) => cross_sections_odd &= section_ok(&coords),
            Err(_) => cross_sections_odd = false,
        }
        dents_uniform &= dent_class(cycle, CrossAxis::Lat, lat2).is_ok();
    }

    let dirs = stitch_directions(cycle);
    let mut by_line: BTreeMap<(Orientation, i64), i8> = BTreeMap::new();
    let mut directions_uniform = true;
    for (s, &d) in cycle.iter().zip(dirs.iter()) {
        let line = match s.orientation {
            Orientation::V => (Orientation::V, s.mid.x2),
            Orientation::H => (Orientation::H, s.mid.y2),
        };
        match by_line.get(&line) {
            None => {
                by_line.insert(line, d);
            }
            Some(&prev) => directions_uniform &= prev == d,
        }
    }

    let (extremal_match, extremal_two_stitches) = match extremal_report(cycle) {
        Ok(_) => (true, true),
        Err(_) => {
            // Distinguish the two failure modes for the report.
            let (n, s, e, w) = extremal_sets(cycle);
            (n == s && e == w, false)
        }
    };

    LoopLawReport {
        odd_width: stats.width % 2 == 1,
        odd_height: stats.height % 2 == 1,
        length_mod_8: stats.length % 8 == 4,
        area_mod_4: stats.area.rem_euclid(4) == 1,
        pick_identity: stats.pick_identity_holds(),
        boundary_equals_length: stats.boundary_points == stats.length,
        cross_sections_odd,
        dents_uniform,
        directions_uniform,
        extremal_match,
        extremal_two_stitches,
    }
}
