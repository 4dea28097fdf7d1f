//! Slicing, local moves, and the bookkeeping around them.
//!
//! Slicing removes the width-2 strip between two adjacent equal-labeled grid
//! lines and closes the gap. Strands that stay clear of the strip just
//! shift; strands through the strip merge or break. The local-move picture
//! makes this tractable: replacing facing vertical stitch pairs by
//! horizontal pairs (and deleting 4-stitch squares centered on the slice
//! line) turns the pattern into a pseudo pattern whose strand structure
//! matches the sliced pattern's exactly.
//!
//! Stitch positions returned by [`slice_stitch_map`] use the symmetric
//! frame: the west/south side shifts one unit toward the slice, the
//! east/north side one unit the other way. The sliced [`Pattern`] is
//! re-indexed from zero, one unit below the symmetric frame.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Coord2, Orientation, Stitch};
use crate::pattern::Pattern;
use crate::strand::{all_strands, cross_section_positions, dent_class, CrossAxis, DentClass, Strand};

/// Slicing direction: `V` removes two vertical grid lines (a longitude
/// strip), `H` two horizontal ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SliceAxis {
    V,
    H,
}

/// A slice position: the doubled half-integer longitude (for `V`) or
/// latitude (for `H`) midway between the two grid lines to remove.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceSpec {
    pub axis: SliceAxis,
    pub pos2: i64,
}

impl SliceSpec {
    pub fn vertical(pos2: i64) -> Self {
        SliceSpec {
            axis: SliceAxis::V,
            pos2,
        }
    }

    pub fn horizontal(pos2: i64) -> Self {
        SliceSpec {
            axis: SliceAxis::H,
            pos2,
        }
    }

    /// The dent axis a slice interacts with: vertical slices sit at
    /// longitudes, horizontal slices at latitudes.
    pub fn cross_axis(&self) -> CrossAxis {
        match self.axis {
            SliceAxis::V => CrossAxis::Lon,
            SliceAxis::H => CrossAxis::Lat,
        }
    }

    /// Coordinate along the slice axis (the one the slice compresses).
    fn along(&self, c: Coord2) -> i64 {
        match self.axis {
            SliceAxis::V => c.x2,
            SliceAxis::H => c.y2,
        }
    }

    fn make_coord(&self, along: i64, cross: i64) -> Coord2 {
        match self.axis {
            SliceAxis::V => Coord2::new(along, cross),
            SliceAxis::H => Coord2::new(cross, along),
        }
    }

    /// Orientation of the stitches that flank the slice line (parallel to
    /// the removed grid lines).
    fn flank_orientation(&self) -> Orientation {
        match self.axis {
            SliceAxis::V => Orientation::V,
            SliceAxis::H => Orientation::H,
        }
    }

    fn flank_stitches(&self, cross: i64) -> (Stitch, Stitch) {
        let o = self.flank_orientation();
        (
            Stitch {
                orientation: o,
                mid: self.make_coord(self.pos2 - 1, cross),
            },
            Stitch {
                orientation: o,
                mid: self.make_coord(self.pos2 + 1, cross),
            },
        )
    }

    fn bridge_stitches(&self, cross: i64) -> (Stitch, Stitch) {
        let o = self.flank_orientation().flipped();
        (
            Stitch {
                orientation: o,
                mid: self.make_coord(self.pos2, cross - 1),
            },
            Stitch {
                orientation: o,
                mid: self.make_coord(self.pos2, cross + 1),
            },
        )
    }
}

/// Grid lines removed by the slice, as label indices.
fn removed_lines(spec: &SliceSpec) -> (usize, usize) {
    let low = ((spec.pos2 - 1) / 2) as usize;
    (low, low + 1)
}

/// Validates a slice: odd doubled position, strictly interior (neither
/// removed line is a boundary line), and equal flanking labels.
pub fn check_slice(p: &Pattern, spec: &SliceSpec) -> Result<()> {
    if spec.pos2 % 2 == 0 {
        return Err(Error::InvalidInput(format!(
            "slice position pos2 = {} must be odd (a half-integer line)",
            spec.pos2
        )));
    }
    let lines = match spec.axis {
        SliceAxis::V => p.cols(),
        SliceAxis::H => p.rows(),
    };
    let (low, high) = removed_lines(spec);
    if spec.pos2 < 3 || high + 1 > lines {
        return Err(Error::OutOfBounds(format!(
            "slice at pos2 = {} would remove a boundary grid line",
            spec.pos2
        )));
    }
    let labels = match spec.axis {
        SliceAxis::V => p.eps(),
        SliceAxis::H => p.eta(),
    };
    if labels[low] != labels[high] {
        return Err(Error::SlicePrecondition(format!(
            "flanking labels differ at lines {low} and {high}"
        )));
    }
    Ok(())
}

/// The sliced pattern: the two flanking grid lines removed and the remaining
/// labels re-indexed from zero.
pub fn slice(p: &Pattern, spec: &SliceSpec) -> Result<Pattern> {
    check_slice(p, spec)?;
    let (low, high) = removed_lines(spec);
    let drop_two = |labels: &[u8]| -> Vec<u8> {
        labels
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != low && *i != high)
            .map(|(_, &b)| b)
            .collect()
    };
    match spec.axis {
        SliceAxis::V => Pattern::new(p.rows(), p.cols() - 2, drop_two(p.eps()), p.eta().to_vec()),
        SliceAxis::H => Pattern::new(p.rows() - 2, p.cols(), p.eps().to_vec(), drop_two(p.eta())),
    }
}

/// Where a stitch lands after slicing, in the symmetric frame: stitches with
/// midpoints strictly inside the open strip are deleted; the rest shift one
/// unit toward the slice. The two half-cut stitches one unit outside the
/// strip land on the slice line itself, merging pairwise.
pub fn slice_stitch_map(spec: &SliceSpec, s: &Stitch) -> Option<Stitch> {
    let along = spec.along(s.mid);
    let delta = if along < spec.pos2 - 1 {
        2
    } else if along > spec.pos2 + 1 {
        -2
    } else {
        return None;
    };
    Some(match spec.axis {
        SliceAxis::V => s.translated(delta, 0),
        SliceAxis::H => s.translated(0, delta),
    })
}

/// Symmetric-frame position converted to the zero-based frame of
/// [`slice`]'s result.
fn to_sliced_frame(spec: &SliceSpec, s: &Stitch) -> Stitch {
    match spec.axis {
        SliceAxis::V => s.translated(-2, 0),
        SliceAxis::H => s.translated(0, -2),
    }
}

/// Move sites at a slice position. A local-move site is a cross position
/// where both flanking stitches are present and neither bridge stitch is; a
/// square-deletion site has both flanks and both bridges (a full unit
/// square). Sites with exactly one bridge stitch get no move: the strand
/// just bends through, which the homotopy correspondence absorbs.
pub fn find_moves(p: &Pattern, spec: &SliceSpec) -> Result<(Vec<Coord2>, Vec<Coord2>)> {
    check_slice(p, spec)?;
    let cross_extent = match spec.axis {
        SliceAxis::V => p.rows(),
        SliceAxis::H => p.cols(),
    } as i64;
    let mut locals = Vec::new();
    let mut squares = Vec::new();
    let mut cross = 1i64;
    while cross < 2 * cross_extent {
        let (f1, f2) = spec.flank_stitches(cross);
        if p.has_stitch(&f1) && p.has_stitch(&f2) {
            let (b1, b2) = spec.bridge_stitches(cross);
            match (p.has_stitch(&b1), p.has_stitch(&b2)) {
                (false, false) => locals.push(spec.make_coord(spec.pos2, cross)),
                (true, true) => squares.push(spec.make_coord(spec.pos2, cross)),
                _ => {}
            }
        }
        cross += 2;
    }
    Ok((locals, squares))
}

/// Kind of a discrete move applied at a slice site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    Splice,
    Split,
    SquareDeletion,
}

/// One applied move. Strands are identified by their least stitch at the
/// time the move applies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveEvent {
    pub kind: MoveKind,
    pub location: Coord2,
    pub strands_before: Vec<Stitch>,
    pub strands_after: Vec<Stitch>,
}

/// An explicit stitch set obtained from a pattern by local moves and square
/// deletions. No longer label-generated, but still degree <= 2 at every
/// lattice point, so strand tracing works the same way. It only ever
/// differs from its origin pattern within one unit of the slice line.
#[derive(Debug, Clone)]
pub struct PseudoPattern {
    stitches: BTreeSet<Stitch>,
    by_point: HashMap<Coord2, Vec<Stitch>>,
    origin: Pattern,
    spec: SliceSpec,
}

impl PseudoPattern {
    pub fn new(p: &Pattern, spec: SliceSpec) -> Result<Self> {
        check_slice(p, &spec)?;
        let mut pp = PseudoPattern {
            stitches: BTreeSet::new(),
            by_point: HashMap::new(),
            origin: p.clone(),
            spec,
        };
        for s in p.all_stitches() {
            pp.insert(s);
        }
        Ok(pp)
    }

    pub fn spec(&self) -> &SliceSpec {
        &self.spec
    }

    pub fn origin(&self) -> &Pattern {
        &self.origin
    }

    pub fn stitches(&self) -> &BTreeSet<Stitch> {
        &self.stitches
    }

    pub fn contains(&self, s: &Stitch) -> bool {
        self.stitches.contains(s)
    }

    fn insert(&mut self, s: Stitch) {
        if self.stitches.insert(s) {
            let (a, b) = s.endpoints();
            self.by_point.entry(a).or_default().push(s);
            self.by_point.entry(b).or_default().push(s);
        }
    }

    fn remove(&mut self, s: &Stitch) {
        if self.stitches.remove(s) {
            let (a, b) = s.endpoints();
            for pt in [a, b] {
                if let Some(v) = self.by_point.get_mut(&pt) {
                    v.retain(|t| t != s);
                }
            }
        }
    }

    fn continuation(&self, at: Coord2, prev: &Stitch) -> Option<Stitch> {
        self.by_point
            .get(&at)?
            .iter()
            .find(|s| *s != prev)
            .copied()
    }

    /// The full strand through `start`.
    pub fn strand_of(&self, start: &Stitch) -> Result<Strand> {
        if !self.contains(start) {
            return Err(Error::InvalidInput(format!(
                "stitch {start:?} is not in the pseudo pattern"
            )));
        }
        let (a, b) = start.endpoints();
        let walk = |mut at: Coord2| -> (Vec<Stitch>, bool) {
            let mut prev = *start;
            let mut out = Vec::new();
            loop {
                match self.continuation(at, &prev) {
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
        let (backward, _) = walk(a);
        let mut stitches: Vec<Stitch> = backward.into_iter().rev().collect();
        stitches.push(*start);
        stitches.extend(forward);
        Ok(Strand {
            stitches,
            closed: false,
        })
    }

    /// All strands, anchored in stitch order.
    pub fn strands(&self) -> Vec<Strand> {
        let mut seen: BTreeSet<Stitch> = BTreeSet::new();
        let mut out = Vec::new();
        for s in &self.stitches {
            if seen.contains(s) {
                continue;
            }
            let strand = self.strand_of(s).expect("iterating own stitches");
            seen.extend(strand.stitches.iter().copied());
            out.push(strand);
        }
        out
    }

    fn strand_rep(&self, s: &Stitch) -> (Stitch, Strand) {
        let strand = self.strand_of(s).expect("stitch present");
        let rep = *strand.stitches.iter().min().expect("nonempty strand");
        (rep, strand)
    }

    /// Replaces the two flanking stitches at `site` by the two bridge
    /// stitches. A splice joins two strands, a split divides one.
    pub fn apply_local_move(&mut self, site: Coord2) -> Result<MoveEvent> {
        let spec = self.spec;
        let cross = match spec.axis {
            SliceAxis::V => site.y2,
            SliceAxis::H => site.x2,
        };
        let (f1, f2) = spec.flank_stitches(cross);
        let (b1, b2) = spec.bridge_stitches(cross);
        if !self.contains(&f1) || !self.contains(&f2) {
            return Err(Error::InvalidInput(format!(
                "no local move at {site:?}: flanking stitches missing"
            )));
        }
        if self.contains(&b1) || self.contains(&b2) {
            return Err(Error::InvalidInput(format!(
                "no local move at {site:?}: bridge stitches already present"
            )));
        }
        let (rep1, strand1) = self.strand_rep(&f1);
        let same = strand1.stitches.contains(&f2);
        let strands_before = if same {
            vec![rep1]
        } else {
            let (rep2, _) = self.strand_rep(&f2);
            let mut v = vec![rep1, rep2];
            v.sort();
            v
        };
        self.remove(&f1);
        self.remove(&f2);
        self.insert(b1);
        self.insert(b2);
        let (rep_a, strand_a) = self.strand_rep(&b1);
        let strands_after = if strand_a.stitches.contains(&b2) {
            vec![rep_a]
        } else {
            let (rep_b, _) = self.strand_rep(&b2);
            let mut v = vec![rep_a, rep_b];
            v.sort();
            v
        };
        Ok(MoveEvent {
            kind: if same { MoveKind::Split } else { MoveKind::Splice },
            location: site,
            strands_before,
            strands_after,
        })
    }

    /// Deletes the 4-stitch square loop centered at `site`.
    pub fn apply_square_deletion(&mut self, site: Coord2) -> Result<MoveEvent> {
        let spec = self.spec;
        let cross = match spec.axis {
            SliceAxis::V => site.y2,
            SliceAxis::H => site.x2,
        };
        let (f1, f2) = spec.flank_stitches(cross);
        let (b1, b2) = spec.bridge_stitches(cross);
        let square = [f1, f2, b1, b2];
        if square.iter().any(|s| !self.contains(s)) {
            return Err(Error::InvalidInput(format!(
                "no square to delete at {site:?}"
            )));
        }
        let (rep, strand) = self.strand_rep(&f1);
        if !strand.closed || strand.len() != 4 {
            return Err(Error::InvariantViolation(
                "square-deletion site is not an isolated 4-stitch loop".into(),
            ));
        }
        for s in &square {
            self.remove(s);
        }
        Ok(MoveEvent {
            kind: MoveKind::SquareDeletion,
            location: site,
            strands_before: vec![rep],
            strands_after: Vec::new(),
        })
    }
}

/// Applies every move site in increasing cross-coordinate order and returns
/// the resulting pseudo pattern with its event log. The set of sites and the
/// final stitch set are order-independent; only the splice/split labels can
/// depend on the order, and their count parity does not.
pub fn apply_all_moves(p: &Pattern, spec: &SliceSpec) -> Result<(PseudoPattern, Vec<MoveEvent>)> {
    apply_moves_ordered(p, spec, false)
}

/// Same as [`apply_all_moves`] with the site order reversed; used to check
/// order-robustness of the accounting.
pub fn apply_all_moves_reversed(
    p: &Pattern,
    spec: &SliceSpec,
) -> Result<(PseudoPattern, Vec<MoveEvent>)> {
    apply_moves_ordered(p, spec, true)
}

fn apply_moves_ordered(
    p: &Pattern,
    spec: &SliceSpec,
    reversed: bool,
) -> Result<(PseudoPattern, Vec<MoveEvent>)> {
    let (locals, squares) = find_moves(p, spec)?;
    let mut sites: Vec<(Coord2, bool)> = locals
        .into_iter()
        .map(|c| (c, false))
        .chain(squares.into_iter().map(|c| (c, true)))
        .collect();
    let cross_of = |c: &Coord2| match spec.axis {
        SliceAxis::V => c.y2,
        SliceAxis::H => c.x2,
    };
    sites.sort_by_key(|(c, _)| cross_of(c));
    if reversed {
        sites.reverse();
    }
    let mut pp = PseudoPattern::new(p, *spec)?;
    let mut log = Vec::with_capacity(sites.len());
    for (site, is_square) in sites {
        let event = if is_square {
            pp.apply_square_deletion(site)?
        } else {
            pp.apply_local_move(site)?
        };
        log.push(event);
    }
    Ok((pp, log))
}

/// Serializes an event log as JSON lines, one move per line.
pub fn event_log_to_jsonl(events: &[MoveEvent]) -> String {
    let mut out = String::new();
    for e in events {
        out.push_str(&serde_json::to_string(e).expect("event serializes"));
        out.push('\n');
    }
    out
}

/// Checks the strand correspondence between the pseudo pattern and the
/// sliced pattern.
///
/// Slicing merges the two half-cut stitches one unit either side of the
/// strip into a single stitch on the slice line. Inside an infinite pattern
/// the two halves always lie on a common pseudo strand, but a finite window
/// can truncate the connection between them, so the correspondence is
/// checked after identifying pseudo strands that share a glued image:
/// those identified components must map onto the sliced strands one to one.
/// Pseudo strands with no surviving stitches at all (possible only for
/// window-truncated open scraps inside the strip) carry no information
/// about the sliced pattern and are skipped.
pub fn homotopy_check(p: &Pattern, spec: &SliceSpec) -> Result<bool> {
    let (pp, _) = apply_all_moves(p, spec)?;
    let sliced = slice(p, spec)?;
    let sliced_strands = all_strands(&sliced);
    let mut where_in_sliced: HashMap<Stitch, usize> = HashMap::new();
    for (idx, strand) in sliced_strands.iter().enumerate() {
        for s in &strand.stitches {
            where_in_sliced.insert(*s, idx);
        }
    }

    let pseudo_strands = pp.strands();
    let mut parent: Vec<usize> = (0..pseudo_strands.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    // Identify pseudo strands through shared images. Away from the slice
    // line the stitch map is injective, so only glued halves ever meet here.
    let mut image_owner: HashMap<Stitch, usize> = HashMap::new();
    let mut images_of: Vec<Vec<Stitch>> = vec![Vec::new(); pseudo_strands.len()];
    for (i, strand) in pseudo_strands.iter().enumerate() {
        for s in &strand.stitches {
            if let Some(image) = slice_stitch_map(spec, s) {
                let image = to_sliced_frame(spec, &image);
                images_of[i].push(image);
                match image_owner.get(&image) {
                    None => {
                        image_owner.insert(image, i);
                    }
                    Some(&j) => {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        if a != b {
                            parent[a] = b;
                        }
                    }
                }
            }
        }
    }

    let mut component_target: HashMap<usize, usize> = HashMap::new();
    let mut hit = vec![false; sliced_strands.len()];
    for i in 0..pseudo_strands.len() {
        if images_of[i].is_empty() {
            continue;
        }
        let root = find(&mut parent, i);
        for image in &images_of[i] {
            let Some(&idx) = where_in_sliced.get(image) else {
                return Ok(false);
            };
            match component_target.get(&root) {
                None => {
                    if hit[idx] {
                        return Ok(false);
                    }
                    hit[idx] = true;
                    component_target.insert(root, idx);
                }
                Some(&t) if t == idx => {}
                Some(_) => return Ok(false),
            }
        }
    }
    Ok(hit.iter().all(|&b| b))
}

/// Orientation behavior of a pseudo loop at the slice line under the
/// counterclockwise orientation: `Agreeable` when the low-side flanking
/// stitches head down-axis and the high side up-axis, `AntiAgreeable` for
/// the reverse, `Vacuous` when the loop has no flanking stitches at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Agreeability {
    Agreeable,
    AntiAgreeable,
    Vacuous,
}

/// Classifies a closed (pseudo) cycle. Every stitch at each flank must agree
/// in direction, and the two flanks must oppose; anything else is an
/// invariant violation.
pub fn agreeability(cycle: &[Stitch], spec: &SliceSpec) -> Result<Agreeability> {
    match spec.axis {
        SliceAxis::H => {
            // Transposing exchanges the axes; re-orienting counterclockwise
            // inside the V-axis computation absorbs the reflection.
            let t: Vec<Stitch> = cycle.iter().map(|s| s.transposed()).collect();
            agreeability_v(&t, spec.pos2)
        }
        SliceAxis::V => agreeability_v(cycle, spec.pos2),
    }
}

fn agreeability_v(cycle: &[Stitch], pos2: i64) -> Result<Agreeability> {
    use crate::geom::{cycle_vertices, signed_area8};
    let mut cycle = cycle.to_vec();
    if signed_area8(&cycle_vertices(&cycle)) < 0 {
        cycle.reverse();
    }
    let dirs = crate::strand::stitch_directions(&cycle);
    let mut west: Option<i8> = None;
    let mut east: Option<i8> = None;
    for (s, &d) in cycle.iter().zip(dirs.iter()) {
        if s.orientation != Orientation::V {
            continue;
        }
        let side = if s.mid.x2 == pos2 - 1 {
            &mut west
        } else if s.mid.x2 == pos2 + 1 {
            &mut east
        } else {
            continue;
        };
        match side {
            None => *side = Some(d),
            Some(prev) if *prev == d => {}
            Some(_) => {
                return Err(Error::InvariantViolation(
                    "mixed flank orientations on one side of the slice".into(),
                ))
            }
        }
    }
    match (west, east) {
        (None, None) => Ok(Agreeability::Vacuous),
        (Some(w), Some(e)) if w == e => Err(Error::InvariantViolation(
            "flank orientations match across the slice; they must oppose".into(),
        )),
        (w, e) => {
            // Agreeable: west side north-to-south (-1), east side up (+1).
            let down_west = w.map(|d| d == -1).or_else(|| e.map(|d| d == 1)).unwrap();
            Ok(if down_west {
                Agreeability::Agreeable
            } else {
                Agreeability::AntiAgreeable
            })
        }
    }
}

/// The distinct strands of the sliced pattern containing images of the given
/// strand's surviving stitches.
pub fn post_slice_components(p: &Pattern, spec: &SliceSpec, strand: &Strand) -> Result<Vec<Strand>> {
    for s in &strand.stitches {
        if !p.has_stitch(s) {
            return Err(Error::InvalidInput(
                "strand does not belong to the pattern".into(),
            ));
        }
    }
    let sliced = slice(p, spec)?;
    let sliced_strands = all_strands(&sliced);
    let mut where_in_sliced: HashMap<Stitch, usize> = HashMap::new();
    for (idx, st) in sliced_strands.iter().enumerate() {
        for s in &st.stitches {
            where_in_sliced.insert(*s, idx);
        }
    }
    let mut targets: BTreeSet<usize> = BTreeSet::new();
    for s in &strand.stitches {
        if let Some(image) = slice_stitch_map(spec, s) {
            let image = to_sliced_frame(spec, &image);
            match where_in_sliced.get(&image) {
                Some(&idx) => {
                    targets.insert(idx);
                }
                None => {
                    return Err(Error::InvariantViolation(
                        "surviving stitch image missing from sliced pattern".into(),
                    ))
                }
            }
        }
    }
    Ok(targets
        .into_iter()
        .map(|i| sliced_strands[i].clone())
        .collect())
}

/// Partition of the pattern's strands (indices into [`all_strands`]) under
/// the transitive closure of "some sliced strand contains surviving stitches
/// of both".
pub fn intertwining_classes(p: &Pattern, spec: &SliceSpec) -> Result<Vec<Vec<usize>>> {
    check_slice(p, spec)?;
    let strands = all_strands(p);
    let sliced = slice(p, spec)?;
    let sliced_strands = all_strands(&sliced);
    let mut where_in_sliced: HashMap<Stitch, usize> = HashMap::new();
    for (idx, st) in sliced_strands.iter().enumerate() {
        for s in &st.stitches {
            where_in_sliced.insert(*s, idx);
        }
    }

    // Union-find over strand indices.
    let mut parent: Vec<usize> = (0..strands.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut owner_of_sliced: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, strand) in strands.iter().enumerate() {
        for s in &strand.stitches {
            if let Some(image) = slice_stitch_map(spec, s) {
                let image = to_sliced_frame(spec, &image);
                if let Some(&sl) = where_in_sliced.get(&image) {
                    match owner_of_sliced.get(&sl) {
                        None => {
                            owner_of_sliced.insert(sl, i);
                        }
                        Some(&j) => {
                            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                            if a != b {
                                parent[a] = b;
                            }
                        }
                    }
                }
            }
        }
    }

    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..strands.len() {
        let root = find(&mut parent, i);
        classes.entry(root).or_default().push(i);
    }
    Ok(classes.into_values().collect())
}

/// The length bookkeeping of slicing one intertwining class of loops.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LengthAccounting {
    /// q: loops in the class.
    pub loops_before: usize,
    /// r: distinct post-slice loops of the class.
    pub loops_after: usize,
    /// a: local moves involving class stitches.
    pub local_moves: usize,
    /// b: class stitches crossing the slice line.
    pub crossing_stitches: usize,
    pub length_before: usize,
    pub length_after: usize,
}

impl LengthAccounting {
    /// `sum len(L_i) = sum len(M_j) + 4a + 4b`.
    pub fn identity_holds(&self) -> bool {
        self.length_before == self.length_after + 4 * self.local_moves + 4 * self.crossing_stitches
    }

    pub fn crossing_count_even(&self) -> bool {
        self.crossing_stitches % 2 == 0
    }

    /// `a = q - r (mod 2)`.
    pub fn move_parity_consistent(&self) -> bool {
        let diff = self.loops_before as i64 - self.loops_after as i64;
        (self.local_moves as i64 - diff).rem_euclid(2) == 0
    }
}

/// Accounts for one intertwining class, given as indices into
/// [`all_strands`] of `p`. Every member must be a loop.
pub fn length_accounting(
    p: &Pattern,
    spec: &SliceSpec,
    class: &[usize],
) -> Result<LengthAccounting> {
    let strands = all_strands(p);
    for &i in class {
        if i >= strands.len() {
            return Err(Error::InvalidInput(format!("no strand with index {i}")));
        }
        if !strands[i].closed {
            return Err(Error::InapplicableClass(
                "length accounting applies to classes of loops only".into(),
            ));
        }
    }
    let class_stitches: BTreeSet<Stitch> = class
        .iter()
        .flat_map(|&i| strands[i].stitches.iter().copied())
        .collect();

    let (_, events) = apply_all_moves(p, spec)?;
    let mut local_moves = 0usize;
    for e in &events {
        if e.kind == MoveKind::SquareDeletion {
            continue;
        }
        let cross = match spec.axis {
            SliceAxis::V => e.location.y2,
            SliceAxis::H => e.location.x2,
        };
        let (f1, f2) = spec.flank_stitches(cross);
        if class_stitches.contains(&f1) || class_stitches.contains(&f2) {
            local_moves += 1;
        }
    }

    let crossing_orientation = spec.flank_orientation().flipped();
    let crossing_stitches = class_stitches
        .iter()
        .filter(|s| s.orientation == crossing_orientation && spec.along(s.mid) == spec.pos2)
        .count();

    let sliced = slice(p, spec)?;
    let sliced_strands = all_strands(&sliced);
    let mut where_in_sliced: HashMap<Stitch, usize> = HashMap::new();
    for (idx, st) in sliced_strands.iter().enumerate() {
        for s in &st.stitches {
            where_in_sliced.insert(*s, idx);
        }
    }
    let mut targets: BTreeSet<usize> = BTreeSet::new();
    for s in &class_stitches {
        if let Some(image) = slice_stitch_map(spec, s) {
            let image = to_sliced_frame(spec, &image);
            match where_in_sliced.get(&image) {
                Some(&idx) => {
                    targets.insert(idx);
                }
                None => {
                    return Err(Error::InvariantViolation(
                        "surviving class stitch image missing from sliced pattern".into(),
                    ))
                }
            }
        }
    }
    for &t in &targets {
        if !sliced_strands[t].closed {
            return Err(Error::InvariantViolation(
                "post-slice component of a loop class is open".into(),
            ));
        }
    }

    Ok(LengthAccounting {
        loops_before: class.len(),
        loops_after: targets.len(),
        local_moves,
        crossing_stitches,
        length_before: class.iter().map(|&i| strands[i].len()).sum(),
        length_after: targets.iter().map(|&t| sliced_strands[t].len()).sum(),
    })
}

/// The largest dent position of a loop on the given axis. It is always an
/// outdent; finding an indent there is an invariant violation.
pub fn max_dent_position(cycle: &[Stitch], axis: CrossAxis) -> Result<i64> {
    let mut best: Option<(i64, DentClass)> = None;
    for pos2 in cross_section_positions(cycle, axis) {
        let class = dent_class(cycle, axis, pos2)?;
        if class == DentClass::Nondent {
            continue;
        }
        match best {
            Some((p, _)) if p >= pos2 => {}
            _ => best = Some((pos2, class)),
        }
    }
    match best {
        None => Err(Error::NotFound(
            "loop has no indent or outdent positions on this axis".into(),
        )),
        Some((pos2, DentClass::Outdent)) => Ok(pos2),
        Some((pos2, class)) => Err(Error::InvariantViolation(format!(
            "largest dent position {pos2} is {class:?}, expected an outdent"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strand::Loop;

    fn rug() -> Pattern {
        Pattern::rug(3, 3).unwrap()
    }

    #[test]
    fn slice_of_rug_matches_reindexing_rules() {
        let sliced = slice(&rug(), &SliceSpec::vertical(3)).unwrap();
        assert_eq!(sliced.rows(), 3);
        assert_eq!(sliced.cols(), 1);
        assert_eq!(sliced.eps(), &[1, 1]);
        assert_eq!(sliced.eta(), &[1, 0, 0, 1]);
    }

    #[test]
    fn slice_preconditions() {
        // boundary position
        assert!(matches!(
            slice(&rug(), &SliceSpec::vertical(1)),
            Err(Error::OutOfBounds(_))
        ));
        // mismatched labels: eps = 1,0,0,1 -> lines 0,1 differ
        let p = Pattern::new(3, 5, vec![1, 0, 1, 0, 0, 1], vec![1, 0, 0, 1]).unwrap();
        assert!(matches!(
            slice(&p, &SliceSpec::vertical(3)),
            Err(Error::SlicePrecondition(_))
        ));
        // even pos2 is not a half-integer line
        assert!(slice(&rug(), &SliceSpec::vertical(2)).is_err());
    }

    #[test]
    fn stitch_map_deletes_strip_and_shifts() {
        let spec = SliceSpec::vertical(3);
        // strip interior: vertical at lon 1 (x2 = 2), horizontal at lon 3/2 (x2 = 3)
        assert_eq!(slice_stitch_map(&spec, &Stitch::vertical(1, 0)), None);
        assert_eq!(slice_stitch_map(&spec, &Stitch::horizontal(1, 0)), None);
        // west shifts +1, east shifts -1 (in units)
        assert_eq!(
            slice_stitch_map(&spec, &Stitch::vertical(0, 1)),
            Some(Stitch::vertical(1, 1))
        );
        assert_eq!(
            slice_stitch_map(&spec, &Stitch::vertical(3, 1)),
            Some(Stitch::vertical(2, 1))
        );
        // the two half-cut columns merge onto the slice line
        assert_eq!(
            slice_stitch_map(&spec, &Stitch::horizontal(0, 1)),
            Some(Stitch::horizontal(1, 1))
        );
        assert_eq!(
            slice_stitch_map(&spec, &Stitch::horizontal(2, 1)),
            Some(Stitch::horizontal(1, 1))
        );
    }

    #[test]
    fn rug_slice_has_no_moves_and_homotopy_holds() {
        let spec = SliceSpec::vertical(3);
        let (locals, squares) = find_moves(&rug(), &spec).unwrap();
        assert!(locals.is_empty());
        assert!(squares.is_empty());
        let (pp, log) = apply_all_moves(&rug(), &spec).unwrap();
        assert!(log.is_empty());
        assert_eq!(pp.stitches().len(), rug().all_stitches().len());
        assert!(homotopy_check(&rug(), &spec).unwrap());
    }

    #[test]
    fn rug_length_accounting_worked_example() {
        let spec = SliceSpec::vertical(3);
        let p = rug();
        let strands = all_strands(&p);
        let loop_idx = strands.iter().position(|s| s.closed).unwrap();
        let classes = intertwining_classes(&p, &spec).unwrap();
        let class = classes
            .iter()
            .find(|c| c.contains(&loop_idx))
            .unwrap()
            .clone();
        // The loop's class must contain only the loop itself.
        let loops_only: Vec<usize> = class
            .iter()
            .copied()
            .filter(|&i| strands[i].closed)
            .collect();
        assert_eq!(loops_only, vec![loop_idx]);
        let acc = length_accounting(&p, &spec, &loops_only).unwrap();
        assert_eq!(acc.length_before, 12);
        assert_eq!(acc.length_after, 4);
        assert_eq!(acc.local_moves, 0);
        assert_eq!(acc.crossing_stitches, 2);
        assert!(acc.identity_holds());
        assert!(acc.crossing_count_even());
        assert!(acc.move_parity_consistent());
    }

    #[test]
    fn rug_post_slice_component_is_unit_square() {
        let spec = SliceSpec::vertical(3);
        let p = rug();
        let strand = all_strands(&p).into_iter().find(|s| s.closed).unwrap();
        let comps = post_slice_components(&p, &spec, &strand).unwrap();
        assert_eq!(comps.len(), 1);
        assert!(comps[0].closed);
        assert_eq!(comps[0].len(), 4);
    }

    #[test]
    fn unit_square_is_agreeable_on_center_slice() {
        // A unit square whose verticals flank the slice line at lon 3/2.
        let spec = SliceSpec::vertical(3);
        let square = vec![
            Stitch::vertical(1, 0),
            Stitch::horizontal(1, 0),
            Stitch::vertical(2, 0),
            Stitch::horizontal(1, 1),
        ];
        assert_eq!(
            agreeability(&square, &spec).unwrap(),
            Agreeability::Agreeable
        );
        // A loop away from the strip is vacuous.
        let far = vec![
            Stitch::vertical(11, 0),
            Stitch::horizontal(11, 0),
            Stitch::vertical(12, 0),
            Stitch::horizontal(11, 1),
        ];
        assert_eq!(agreeability(&far, &spec).unwrap(), Agreeability::Vacuous);
    }

    #[test]
    fn max_dent_positions_of_examples() {
        let p = Pattern::new(1, 1, vec![0, 0], vec![0, 0]).unwrap();
        let sq = all_strands(&p)[0].to_loop().unwrap();
        assert_eq!(max_dent_position(sq.stitches(), CrossAxis::Lon).unwrap(), 1);
        assert_eq!(max_dent_position(sq.stitches(), CrossAxis::Lat).unwrap(), 1);

        let rug_loop: Loop = all_strands(&rug())
            .into_iter()
            .find(|s| s.closed)
            .unwrap()
            .to_loop()
            .unwrap();
        assert_eq!(
            max_dent_position(rug_loop.stitches(), CrossAxis::Lon).unwrap(),
            3
        );
    }

    #[test]
    fn square_deletion_fires_on_full_square() {
        // eta = (1,1) puts horizontal stitches at odd columns, so the cell
        // between lons 1 and 2 is a full 4-stitch square.
        let p = Pattern::new(1, 5, vec![0; 6], vec![1, 1]).unwrap();
        let spec = SliceSpec::vertical(3);
        let (locals, squares) = find_moves(&p, &spec).unwrap();
        assert!(locals.is_empty());
        assert_eq!(squares.len(), 1);
        let (pp, log) = apply_all_moves(&p, &spec).unwrap();
        assert_eq!(log.len(), 1);
        assert_eq!(log[0].kind, MoveKind::SquareDeletion);
        assert!(log[0].strands_after.is_empty());
        assert_eq!(pp.stitches().len(), p.all_stitches().len() - 4);
        assert!(homotopy_check(&p, &spec).unwrap());
    }

    #[test]
    fn pseudo_pattern_differs_from_origin_only_near_the_slice() {
        for seed in 0..40u64 {
            let p = Pattern::random(8, 8, 0.5, seed).unwrap();
            let spec = match (3..=13).step_by(2).map(SliceSpec::vertical).find(|s| {
                check_slice(&p, s).is_ok()
            }) {
                Some(s) => s,
                None => continue,
            };
            let (pp, _) = apply_all_moves(&p, &spec).unwrap();
            let before: BTreeSet<Stitch> = pp.origin().all_stitches().into_iter().collect();
            let after = pp.stitches();
            for s in before.symmetric_difference(after) {
                assert!((s.mid.x2 - spec.pos2).abs() <= 2, "{s:?} too far from slice");
            }
        }
    }

    #[test]
    fn local_move_splices_two_squares() {
        // eta = (0,0): squares at cells [0,1], [2,3], [4,5]. Slicing at
        // lon 3/2 finds facing verticals from the first two squares with no
        // bridging stitches, so one splice merges them.
        let p = Pattern::new(1, 5, vec![0; 6], vec![0, 0]).unwrap();
        let spec = SliceSpec::vertical(3);
        let (locals, squares) = find_moves(&p, &spec).unwrap();
        assert_eq!(locals.len(), 1);
        assert!(squares.is_empty());
        let (pp, log) = apply_all_moves(&p, &spec).unwrap();
        assert_eq!(log.len(), 1);
        assert_eq!(log[0].kind, MoveKind::Splice);
        assert_eq!(log[0].strands_before.len(), 2);
        assert_eq!(log[0].strands_after.len(), 1);
        let merged = pp.strand_of(&log[0].strands_after[0]).unwrap();
        assert!(merged.closed);
        assert_eq!(merged.len(), 8);
        assert!(homotopy_check(&p, &spec).unwrap());
    }
}
