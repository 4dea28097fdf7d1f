//! Deterministic SVG export of patterns, region colorings, and loops.
//!
//! The document uses a viewBox at twice the pixel scale so every doubled
//! coordinate maps to an integer: a point with doubled coordinates (x2, y2)
//! lands at viewBox position (x2 * cell_px, (2m - y2) * cell_px). The origin
//! is the grid's northwest corner with y growing downward, the usual screen
//! convention.

use serde::{Deserialize, Serialize};

use crate::census::region_map;
use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::strand::all_strands;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RenderOptions {
    pub cell_px: u32,
    pub stitch_width_px: u32,
    /// Index into the pattern's loops (closed strands in discovery order).
    pub highlight: Option<usize>,
    pub color_regions: bool,
    /// Fill colors for the two region classes.
    pub palette: [String; 2],
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            cell_px: 24,
            stitch_width_px: 3,
            highlight: None,
            color_regions: false,
            palette: ["#f7c9d4".into(), "#ffffff".into()],
        }
    }
}

/// Renders the pattern as an SVG 1.1 document. Byte-identical output for
/// identical inputs.
pub fn render_svg(p: &Pattern, opts: &RenderOptions) -> Result<String> {
    if opts.cell_px < 1 {
        return Err(Error::InvalidInput("cell_px must be at least 1".into()));
    }
    if opts.palette[0] == opts.palette[1] {
        return Err(Error::InvalidInput(
            "palette entries must be distinct".into(),
        ));
    }
    let (m, n) = (p.rows() as i64, p.cols() as i64);
    let scale = opts.cell_px as i64;
    let px = |x2: i64| x2 * scale;
    let py = |y2: i64| (2 * m - y2) * scale;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        n * scale,
        m * scale,
        2 * n * scale,
        2 * m * scale
    ));

    if opts.color_regions {
        let map = region_map(p)?;
        for row in 0..p.rows() {
            for col in 0..p.cols() {
                let region = map.region_of(col, row) as usize;
                let fill = &opts.palette[map.colors[region] as usize];
                svg.push_str(&format!(
                    "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n",
                    px(2 * col as i64),
                    py(2 * (row as i64 + 1)),
                    2 * scale,
                    2 * scale,
                    fill
                ));
            }
        }
    }

    let stroke_w = 2 * opts.stitch_width_px as i64;
    let draw_line = |svg: &mut String, a: (i64, i64), b: (i64, i64), stroke: &str, w: i64| {
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" \
             stroke-width=\"{}\" stroke-linecap=\"square\"/>\n",
            px(a.0),
            py(a.1),
            px(b.0),
            py(b.1),
            stroke,
            w
        ));
    };

    for s in p.all_stitches() {
        let (a, b) = s.endpoints();
        draw_line(&mut svg, (a.x2, a.y2), (b.x2, b.y2), "#222222", stroke_w);
    }

    if let Some(id) = opts.highlight {
        let loops: Vec<_> = all_strands(p).into_iter().filter(|s| s.closed).collect();
        let strand = loops.get(id).ok_or_else(|| {
            Error::NotFound(format!("no loop with id {id}; pattern has {}", loops.len()))
        })?;
        for s in &strand.stitches {
            let (a, b) = s.endpoints();
            draw_line(
                &mut svg,
                (a.x2, a.y2),
                (b.x2, b.y2),
                "#cc3344",
                stroke_w + 2,
            );
        }
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}
