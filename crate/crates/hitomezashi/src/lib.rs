//! Hitomezashi stitch patterns and their loop structure.
//!
//! A pattern is generated from 0/1 labels on the grid lines of an m x n
//! grid; stitches alternate along each line, offset by the line's label.
//! The stitches join into strands, the closed strands are loops, and the
//! loops obey surprisingly rigid laws: odd width and height, length 4 mod 8,
//! area 1 mod 4, and a bijection with pairs of equal-height Dyck paths.
//! This crate builds the patterns, traces and measures the loops, implements
//! the Dyck correspondence and the slicing calculus behind the length law,
//! and counts loops and regions both exactly and by simulation.
//!
//! ```
//! use hitomezashi::{all_strands, Pattern};
//!
//! let pattern = Pattern::rug(5, 9).unwrap();
//! let rug_loop = all_strands(&pattern)
//!     .into_iter()
//!     .find(|s| s.closed)
//!     .unwrap()
//!     .to_loop()
//!     .unwrap();
//! let stats = rug_loop.stats();
//! assert_eq!((stats.width, stats.height), (9, 5));
//! assert_eq!((stats.length, stats.area), (44, 33));
//! assert!(rug_loop.verify_laws().all_pass());
//! ```

pub mod census;
pub mod dyck;
pub mod error;
pub mod geom;
pub mod pattern;
pub mod render;
pub mod slice;
pub mod strand;
mod walker;

#[cfg(doctest)]
mod book;

pub use census::{
    brute_expected_loops, census, constant_c, derive_trial_seed, exact_expected_loops,
    loop_count, loop_density_constant, mc_estimate, region_map, CensusResult, ConstantReport,
    ExpectationReport, RegionMap,
};
pub use dyck::{
    count_dyck, count_loops_by_size, count_table, dyck_pair_to_loop, enumerate_loops_brute,
    kreweras_series, loop_to_dyck_pair, DyckPair, DyckPath, Step,
};
pub use error::{Error, Result};
pub use geom::{Coord2, Orientation, Stitch};
pub use pattern::{Pattern, RNG_ALGORITHM};
pub use render::{render_svg, RenderOptions};
pub use slice::{
    agreeability, apply_all_moves, check_slice, find_moves, homotopy_check,
    intertwining_classes, length_accounting, max_dent_position, post_slice_components, slice,
    slice_stitch_map, Agreeability, LengthAccounting, MoveEvent, MoveKind, PseudoPattern,
    SliceAxis, SliceSpec,
};
pub use strand::{
    all_strands, trace_strand, CrossAxis, DentClass, ExtremalReport, Loop, LoopLawReport,
    LoopStats, Strand,
};
