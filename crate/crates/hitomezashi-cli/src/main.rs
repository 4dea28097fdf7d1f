//! `hito`: hitomezashi patterns from the command line.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hitomezashi::{
    agreeability, all_strands, apply_all_moves, brute_expected_loops, census, constant_c,
    derive_trial_seed, dyck_pair_to_loop, exact_expected_loops, homotopy_check,
    intertwining_classes, length_accounting, loop_to_dyck_pair, max_dent_position, mc_estimate,
    region_map, render_svg, slice, DyckPair, Error, Loop, Pattern, RenderOptions, SliceAxis,
    SliceSpec,
};

#[derive(Parser)]
#[command(
    name = "hito",
    about = "Generate, analyze, slice, and render hitomezashi stitch patterns",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Args)]
struct IoArgs {
    /// Input file (defaults to stdin).
    #[arg(long = "in", value_name = "FILE")]
    input: Option<String>,
    /// Output file (defaults to stdout).
    #[arg(long = "out", value_name = "FILE")]
    output: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a pattern as JSON: random labels or a named family.
    Gen {
        /// Rug pattern: 1-labels on the boundary lines, 0 inside.
        #[arg(long, num_args = 2, value_names = ["M", "N"])]
        rug: Option<Vec<usize>>,
        #[arg(short, default_value_t = 8)]
        m: usize,
        #[arg(short, default_value_t = 8)]
        n: usize,
        /// Probability that a label is 0.
        #[arg(short, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "out", value_name = "FILE")]
        output: Option<String>,
    },
    /// Trace all strands of a pattern; report loops with statistics.
    Trace {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Encode loops as Dyck-path pairs and decode them back.
    Dyck {
        #[command(subcommand)]
        direction: DyckCommand,
    },
    /// Apply a slice: emit the sliced pattern, a verification report, and
    /// optionally the move event log as JSON lines.
    Slice {
        /// Axis (V or H) and doubled half-integer position.
        #[arg(long = "slice", num_args = 2, value_names = ["V|H", "POS2"], required = true)]
        slice: Vec<String>,
        /// Write the move log as JSON lines to this file.
        #[arg(long, value_name = "FILE")]
        events: Option<String>,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Loop, region, and boundary-region counts of one pattern.
    Census {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Expected-loop-count reports: exact, Monte Carlo, or the constant.
    Expect {
        /// Print the exact expectation for the fair model as a rational.
        #[arg(long, conflicts_with_all = ["mc", "constant", "brute"])]
        exact: bool,
        /// Exhaustive average over every label assignment (small grids).
        #[arg(long, conflicts_with_all = ["mc", "constant"])]
        brute: bool,
        /// Monte Carlo estimate.
        #[arg(long, conflicts_with = "constant")]
        mc: bool,
        /// Series and closed form of the loop density constant.
        #[arg(long)]
        constant: bool,
        #[arg(short, default_value_t = 8)]
        m: usize,
        #[arg(short, default_value_t = 8)]
        n: usize,
        #[arg(short, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Series terms for --constant.
        #[arg(long, default_value_t = 10_000)]
        terms: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long = "out", value_name = "FILE")]
        output: Option<String>,
    },
    /// Render a pattern as SVG.
    Render {
        #[arg(long, default_value_t = 24)]
        cell_px: u32,
        #[arg(long, default_value_t = 3)]
        stitch_width_px: u32,
        /// Highlight the loop with this index (discovery order).
        #[arg(long)]
        highlight: Option<usize>,
        /// Fill regions with the two-coloring.
        #[arg(long)]
        color_regions: bool,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Flip every grid-line label.
    Dual {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Run the full property suite on a given pattern or random ones.
    Verify {
        #[arg(long, default_value_t = 200)]
        trials: u64,
        /// Grid side length for the random patterns.
        #[arg(long, default_value_t = 20)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Verify this pattern file instead of sampling random ones.
        #[arg(long = "in", value_name = "FILE")]
        input: Option<String>,
    },
}

#[derive(Subcommand)]
enum DyckCommand {
    /// Loop JSON (stitch array) -> pair JSON {"ver": "...", "hor": "..."}.
    Encode {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Pair JSON -> canonical loop JSON.
    Decode {
        #[command(flatten)]
        io: IoArgs,
    },
}

fn read_input(path: &Option<String>) -> Result<String, Error> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| Error::Parse(format!("reading {p}: {e}"))),
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::Parse(format!("reading stdin: {e}")))?;
            Ok(buf)
        }
    }
}

fn write_output(path: &Option<String>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::Parse(format!("writing {p}: {e}"))),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn read_pattern(path: &Option<String>) -> Result<Pattern, Error> {
    Pattern::from_json(&read_input(path)?)
}

fn parse_slice_spec(words: &[String]) -> Result<SliceSpec, Error> {
    let axis = match words[0].to_ascii_uppercase().as_str() {
        "V" => SliceAxis::V,
        "H" => SliceAxis::H,
        other => {
            return Err(Error::Parse(format!(
                "slice axis must be V or H, got {other:?}"
            )))
        }
    };
    let pos2: i64 = words[1]
        .parse()
        .map_err(|e| Error::Parse(format!("slice position: {e}")))?;
    Ok(SliceSpec { axis, pos2 })
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Gen {
            rug,
            m,
            n,
            p,
            seed,
            output,
        } => {
            let pattern = match rug {
                Some(dims) => Pattern::rug(dims[0], dims[1])?,
                None => Pattern::random(m, n, p, seed)?,
            };
            write_output(&output, &pattern.to_json())
        }
        Command::Trace { io } => {
            let pattern = read_pattern(&io.input)?;
            let strands = all_strands(&pattern);
            let mut loops = Vec::new();
            let mut open = 0usize;
            for strand in &strands {
                match strand.to_loop() {
                    Some(lp) => {
                        let laws = lp.verify_laws();
                        loops.push(serde_json::json!({
                            "stitches": lp.stitches(),
                            "stats": lp.stats(),
                            "laws_pass": laws.all_pass(),
                        }));
                    }
                    None => open += 1,
                }
            }
            let report = serde_json::json!({
                "loops": loops,
                "loop_count": loops.len(),
                "open_strands": open,
            });
            write_output(&io.output, &serde_json::to_string_pretty(&report).unwrap())
        }
        Command::Dyck { direction } => match direction {
            DyckCommand::Encode { io } => {
                let lp = Loop::from_json(&read_input(&io.input)?)?;
                let pair = loop_to_dyck_pair(&lp)?;
                write_output(&io.output, &serde_json::to_string(&pair).unwrap())
            }
            DyckCommand::Decode { io } => {
                let pair: DyckPair = serde_json::from_str(&read_input(&io.input)?)
                    .map_err(|e| Error::Parse(e.to_string()))?;
                let lp = dyck_pair_to_loop(&pair)?;
                write_output(&io.output, &lp.to_json())
            }
        },
        Command::Slice {
            slice: words,
            events,
            io,
        } => {
            let spec = parse_slice_spec(&words)?;
            let pattern = read_pattern(&io.input)?;
            let sliced = slice(&pattern, &spec)?;
            let (_, log) = apply_all_moves(&pattern, &spec)?;
            let homotopy = homotopy_check(&pattern, &spec)?;
            if let Some(path) = &events {
                let jsonl = hitomezashi::slice::event_log_to_jsonl(&log);
                fs::write(path, jsonl)
                    .map_err(|e| Error::Parse(format!("writing {path}: {e}")))?;
            }
            let report = serde_json::json!({
                "sliced": sliced,
                "homotopy": homotopy,
                "events": log.len(),
            });
            write_output(&io.output, &serde_json::to_string_pretty(&report).unwrap())
        }
        Command::Census { io } => {
            let pattern = read_pattern(&io.input)?;
            let result = census(&pattern)?;
            write_output(&io.output, &serde_json::to_string(&result).unwrap())
        }
        Command::Expect {
            exact,
            brute,
            mc,
            constant,
            m,
            n,
            p,
            trials,
            seed,
            terms,
            format,
            output,
        } => {
            if constant {
                let report = constant_c(terms);
                return write_output(&output, &serde_json::to_string_pretty(&report).unwrap());
            }
            if exact {
                let value = exact_expected_loops(m, n)?;
                return write_output(&output, &value.to_string());
            }
            if brute {
                let value = brute_expected_loops(m, n)?;
                return write_output(&output, &value.to_string());
            }
            if !mc {
                return Err(Error::InvalidInput(
                    "expect needs one of --exact, --brute, --mc, --constant".into(),
                ));
            }
            let report = mc_estimate(m, n, p, trials, seed)?;
            match format {
                Format::Csv => {
                    let text = format!(
                        "{}\n{}\n",
                        hitomezashi::census::EXPECTATION_CSV_HEADER,
                        report.to_csv_row()
                    );
                    write_output(&output, &text)
                }
                Format::Json => {
                    write_output(&output, &serde_json::to_string_pretty(&report).unwrap())
                }
                Format::Svg => Err(Error::InvalidInput(
                    "expect emits json or csv; svg is for render".into(),
                )),
            }
        }
        Command::Render {
            cell_px,
            stitch_width_px,
            highlight,
            color_regions,
            io,
        } => {
            let pattern = read_pattern(&io.input)?;
            let opts = RenderOptions {
                cell_px,
                stitch_width_px,
                highlight,
                color_regions,
                ..RenderOptions::default()
            };
            let svg = render_svg(&pattern, &opts)?;
            write_output(&io.output, &svg)
        }
        Command::Dual { io } => {
            let pattern = read_pattern(&io.input)?;
            write_output(&io.output, &pattern.dual().to_json())
        }
        Command::Verify {
            trials,
            size,
            seed,
            input,
        } => run_verify(trials, size, seed, input),
    }
}

/// The aggregated property suite: loop laws, Dyck round trips, slicing laws,
/// and census identities, over one given pattern or sampled random ones.
fn run_verify(trials: u64, size: usize, seed: u64, input: Option<String>) -> Result<(), Error> {
    let mut loops_checked = 0u64;
    let mut slices_checked = 0u64;
    let mut patterns_checked = 0u64;

    let mut check_pattern = |pattern: &Pattern, what: &str| -> Result<(), Error> {
        patterns_checked += 1;
        let c = census(pattern)?;
        if c.boundary_regions > 2 * (pattern.rows() + pattern.cols()) {
            return Err(Error::InvariantViolation(
                "boundary regions exceed 2(m+n)".into(),
            ));
        }
        region_map(pattern)?;

        let strands = all_strands(pattern);
        for strand in &strands {
            let Some(lp) = strand.to_loop() else { continue };
            loops_checked += 1;
            if !lp.verify_laws().all_pass() {
                return Err(Error::InvariantViolation(format!(
                    "loop law failed on {what}"
                )));
            }
            let pair = loop_to_dyck_pair(&lp)?;
            if dyck_pair_to_loop(&pair)? != lp {
                return Err(Error::InvariantViolation(format!(
                    "Dyck round trip failed on {what}"
                )));
            }
        }

        if let Some((idx, spec)) = pick_outdent_slice(pattern, &strands) {
            slices_checked += 1;
            if !homotopy_check(pattern, &spec)? {
                return Err(Error::InvariantViolation(format!(
                    "homotopy check failed on {what}"
                )));
            }
            let classes = intertwining_classes(pattern, &spec)?;
            let class = classes
                .into_iter()
                .find(|c| c.contains(&idx))
                .expect("loop belongs to some class");
            let loops_only: Vec<usize> = class
                .iter()
                .copied()
                .filter(|&i| strands[i].closed)
                .collect();
            let acc = length_accounting(pattern, &spec, &loops_only)?;
            if !acc.identity_holds() || !acc.crossing_count_even() || !acc.move_parity_consistent()
            {
                return Err(Error::InvariantViolation(format!(
                    "length accounting failed on {what}"
                )));
            }
            let (pp, _) = apply_all_moves(pattern, &spec)?;
            for strand in pp.strands() {
                if strand.closed {
                    agreeability(&strand.stitches, &spec)?;
                }
            }
        }
        Ok(())
    };

    match input {
        Some(path) => {
            let pattern = read_pattern(&Some(path))?;
            check_pattern(&pattern, "the given pattern")?;
        }
        None => {
            for t in 0..trials {
                let s = derive_trial_seed(seed, t);
                let p_zero = 0.1 + 0.8 * ((t % 5) as f64) / 4.0;
                let pattern = Pattern::random(size, size, p_zero, s)?;
                check_pattern(&pattern, &format!("seed {s}"))?;
            }
        }
    }
    println!("loop laws: {loops_checked} loops checked");
    println!("slicing laws: {slices_checked} outdent slices checked");
    println!("census identities: {patterns_checked} patterns checked");
    println!("verify: all properties hold");
    Ok(())
}

/// A loop of the pattern together with a strictly interior outdent slice
/// position for it, if any exists. The loop must extend beyond the slice
/// strip (extent at least 3 along the slice axis): a unit square centered on
/// the slice line is annihilated whole by a square deletion, which the
/// length bookkeeping deliberately does not cover.
fn pick_outdent_slice(
    pattern: &Pattern,
    strands: &[hitomezashi::Strand],
) -> Option<(usize, SliceSpec)> {
    for (idx, strand) in strands.iter().enumerate() {
        if !strand.closed {
            continue;
        }
        for (axis, cross, lines) in [
            (SliceAxis::V, hitomezashi::CrossAxis::Lon, pattern.cols()),
            (SliceAxis::H, hitomezashi::CrossAxis::Lat, pattern.rows()),
        ] {
            let along = |s: &hitomezashi::Stitch| match axis {
                SliceAxis::V => s.mid.x2,
                SliceAxis::H => s.mid.y2,
            };
            let min = strand.stitches.iter().map(&along).min()?;
            let max = strand.stitches.iter().map(&along).max()?;
            if max - min < 6 {
                continue;
            }
            let Ok(pos2) = max_dent_position(&strand.stitches, cross) else {
                continue;
            };
            if pos2 >= 3 && pos2 <= 2 * lines as i64 - 3 {
                return Some((idx, SliceSpec { axis, pos2 }));
            }
        }
    }
    None
}

fn main() -> ExitCode {
    // Usage problems exit 1, invariant violations exit 2, success 0.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::InvariantViolation(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
