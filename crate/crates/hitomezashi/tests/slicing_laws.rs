//! Step-through checks of the splice and split laws: applying moves one at
//! a time and inspecting strands before and after each event.
//!
//! Whenever a splice absorbs a strand into an agreeable pseudo loop, the
//! absorbed strand must lie inside the loop's closed region and the merged
//! strand must again be an agreeable pseudo loop. Whenever a split divides
//! an agreeable pseudo loop, both halves must be agreeable pseudo loops,
//! neither inside the other.

use hitomezashi::geom::point_strictly_inside;
use hitomezashi::{
    agreeability, check_slice, derive_trial_seed, find_moves, Agreeability, Coord2, MoveKind,
    Orientation, Pattern, PseudoPattern, SliceAxis, SliceSpec, Stitch, Strand,
};

fn flank_stitches(spec: &SliceSpec, site: Coord2) -> (Stitch, Stitch) {
    match spec.axis {
        SliceAxis::V => (
            Stitch {
                orientation: Orientation::V,
                mid: Coord2::new(spec.pos2 - 1, site.y2),
            },
            Stitch {
                orientation: Orientation::V,
                mid: Coord2::new(spec.pos2 + 1, site.y2),
            },
        ),
        SliceAxis::H => (
            Stitch {
                orientation: Orientation::H,
                mid: Coord2::new(site.x2, spec.pos2 - 1),
            },
            Stitch {
                orientation: Orientation::H,
                mid: Coord2::new(site.x2, spec.pos2 + 1),
            },
        ),
    }
}

fn inside_closed_region(host: &Strand, other: &Strand) -> bool {
    other
        .stitches
        .iter()
        .all(|s| point_strictly_inside(&host.stitches, s.mid))
}

/// Agreeable in the strict sense: the loop actually touches the flanks.
fn is_agreeable_loop(strand: &Strand, spec: &SliceSpec) -> bool {
    strand.closed && matches!(agreeability(&strand.stitches, spec), Ok(Agreeability::Agreeable))
}

/// Agreeable in the inclusive sense: loops clear of the flanks are
/// vacuously agreeable.
fn is_agreeable_or_vacuous_loop(strand: &Strand, spec: &SliceSpec) -> bool {
    strand.closed
        && matches!(
            agreeability(&strand.stitches, spec),
            Ok(Agreeability::Agreeable | Agreeability::Vacuous)
        )
}

#[derive(Default)]
struct Tally {
    splices_into_agreeable: usize,
    splits_of_agreeable: usize,
}

fn step_through(p: &Pattern, spec: &SliceSpec, tally: &mut Tally) {
    let (locals, squares) = find_moves(p, spec).unwrap();
    let mut sites: Vec<(Coord2, bool)> = locals
        .into_iter()
        .map(|c| (c, false))
        .chain(squares.into_iter().map(|c| (c, true)))
        .collect();
    sites.sort_by_key(|(c, _)| match spec.axis {
        SliceAxis::V => c.y2,
        SliceAxis::H => c.x2,
    });

    let mut pp = PseudoPattern::new(p, *spec).unwrap();
    for (site, is_square) in sites {
        if is_square {
            pp.apply_square_deletion(site).unwrap();
            continue;
        }
        let (f1, f2) = flank_stitches(spec, site);
        let before1 = pp.strand_of(&f1).unwrap();
        let before2 = pp.strand_of(&f2).unwrap();
        let event = pp.apply_local_move(site).unwrap();
        match event.kind {
            MoveKind::Splice => {
                let merged = pp.strand_of(&event.strands_after[0]).unwrap();
                for (host, absorbed) in [(&before1, &before2), (&before2, &before1)] {
                    if !is_agreeable_loop(host, spec) {
                        continue;
                    }
                    tally.splices_into_agreeable += 1;
                    assert!(
                        inside_closed_region(host, absorbed),
                        "absorbed strand escapes the agreeable loop: {} {:?}",
                        p.to_json(),
                        site
                    );
                    assert!(
                        is_agreeable_or_vacuous_loop(&merged, spec),
                        "merged strand is not an agreeable loop: {} {:?}",
                        p.to_json(),
                        site
                    );
                }
            }
            MoveKind::Split => {
                if !is_agreeable_loop(&before1, spec) {
                    continue;
                }
                tally.splits_of_agreeable += 1;
                assert_eq!(event.strands_after.len(), 2);
                let part_a = pp.strand_of(&event.strands_after[0]).unwrap();
                let part_b = pp.strand_of(&event.strands_after[1]).unwrap();
                for (a, b) in [(&part_a, &part_b), (&part_b, &part_a)] {
                    assert!(
                        is_agreeable_or_vacuous_loop(a, spec),
                        "split part is not an agreeable loop: {} {:?}",
                        p.to_json(),
                        site
                    );
                    assert!(
                        !point_strictly_inside(&b.stitches, a.stitches[0].mid),
                        "split parts are nested: {} {:?}",
                        p.to_json(),
                        site
                    );
                }
            }
            MoveKind::SquareDeletion => unreachable!(),
        }
    }
}

#[test]
fn splice_and_split_laws_hold_on_random_slices() {
    let mut tally = Tally::default();
    for t in 0..800u64 {
        let seed = derive_trial_seed(43, t);
        let p = Pattern::random(14, 14, 0.5, seed).unwrap();
        for axis in [SliceAxis::V, SliceAxis::H] {
            let lines = match axis {
                SliceAxis::V => p.cols(),
                SliceAxis::H => p.rows(),
            } as i64;
            for pos2 in (3..=2 * lines - 3).step_by(2) {
                let spec = SliceSpec { axis, pos2 };
                if check_slice(&p, &spec).is_ok() {
                    step_through(&p, &spec, &mut tally);
                }
            }
        }
    }
    // The premises must actually fire for the run to mean anything.
    assert!(
        tally.splices_into_agreeable > 100,
        "only {} agreeable splices exercised",
        tally.splices_into_agreeable
    );
    assert!(
        tally.splits_of_agreeable > 100,
        "only {} agreeable splits exercised",
        tally.splits_of_agreeable
    );
}
