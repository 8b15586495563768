use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polyunfold::batch::{fuzz, fuzz_sequential};
use polyunfold::gen::{instance, GenConfig};
use polyunfold::model::{extract_surface, load_voxels, validate, Polycube};
use polyunfold::netplan::{records_from_text, records_to_text, render_svg, NetRecord};
use polyunfold::unfolder::{unfold_with, UnfoldOptions};
use polyunfold::verify::verify_net;
use polyunfold::Error;

const FORMATS: &str = "\
FORMATS

Voxel file, coordinate form:
  One cube per line as three decimal integers \"x y z\" separated by
  whitespace. Text after '#' is a comment. Blank lines are ignored.
  `generate` writes this form sorted by (z, y, x), one line per cube.

Voxel file, layer form:
  Chosen when every non-blank line consists only of '#' and '.'.
  Blocks separated by one or more blank lines are layers; the first block
  is z = 0 (layer 1). Within a block, line k is y = k and column j is x = j.
  '#' marks a cube, '.' an empty column.

Net file:
  Line 1: \"net cells N\". Then N lines, one per surface cell:
    cell ID base X Y Z normal D col C row R rot K parent P edge E
  ID is the surface cell id. (X, Y, Z) is the minimum corner of the cell's
  cube, plus one along the normal axis when D is positive, so it is the
  cell's minimum corner in space. D is one of +x -x +y -y +z -z. (C, R) is
  the net square, rot K in 0..4 turns the cell's local frame by K quarter
  turns. P is the parent in the attachment tree and E the parent's edge
  shared with this cell; both are '-' for the root.
  Local edges: 0 = +u, 1 = +v, 2 = -u, 3 = -v with (u, v) =
    +z: (+x, +y)   -z: (+y, +x)   +x: (+y, +z)   -x: (-y, +z)
    +y: (-x, +z)   -y: (+x, +z)

SVG:
  20 px per net square plus a one-square margin; row numbers grow upward.
  Fill: band #9ecae1, top #fdd49e, bottom #c994c7. Cut edges and the
  boundary are black 2.5 px; attachment edges are #888888 0.5 px.

Selection report (unfold --explain, one line per layer):
  layer I L ID R ID dir ccw|cw visited N bridge B quasi true|false

Trace (unfold --explain):
  place|relocate|cutshift stage S layer I LABEL cells IDS hosts IDS
  segment layer I left|right caseN[/commonK] cells IDS
  label ID LABEL   (per cell, the operation that placed it)

EXIT CODES
  0 success, 1 rejection or internal invariant violation, 2 invalid input.";

#[derive(Parser)]
#[command(name = "polyunfold", version, about = "Edge-unfold polycubes with orthogonally convex layers", after_long_help = FORMATS)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a voxel model against the unfolder's preconditions.
    Validate { model: PathBuf },
    /// Unfold a model and write its net.
    Unfold {
        model: PathBuf,
        /// Net output file; stdout when absent.
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Print the selection report and stage trace to stderr.
        #[arg(long)]
        explain: bool,
        /// Also render the net as SVG.
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
    },
    /// Check a net file against a model.
    Verify { model: PathBuf, net: PathBuf },
    /// Render a net file as SVG.
    Render {
        model: PathBuf,
        net: PathBuf,
        /// SVG output file; stdout when absent.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Emit generated instances in coordinate form.
    Generate {
        #[command(flatten)]
        gen: GenArgs,
        /// Index of the first instance.
        #[arg(long, default_value_t = 0)]
        index: u64,
        /// Number of instances; with more than one, --out is a directory.
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Generate, unfold and verify many instances.
    Fuzz {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long, default_value_t = 1000)]
        count: u64,
        /// Directory receiving seed<S>-<k>.txt and .reason for each failure.
        #[arg(long, value_name = "DIR")]
        corpus: Option<PathBuf>,
        /// Run on one thread.
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 6)]
    max_layers: usize,
    #[arg(long, default_value_t = 10)]
    max_extent: usize,
}

impl GenArgs {
    fn config(&self) -> GenConfig {
        GenConfig { seed: self.seed, max_layers: self.max_layers, max_extent: self.max_extent, ..GenConfig::default() }
    }
}

enum Fail {
    Invalid(String),
    Rejected(String),
}

type Run = Result<(), Fail>;

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail::Invalid(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Run {
    fs::write(path, text).map_err(|e| Fail::Invalid(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Run {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn model(path: &Path) -> Result<Polycube, Fail> {
    load_voxels(&read(path)?).map_err(|e| Fail::Invalid(format!("{}: {e}", path.display())))
}

fn net(path: &Path) -> Result<Vec<NetRecord>, Fail> {
    records_from_text(&read(path)?).map_err(|e| Fail::Invalid(format!("{}: {e}", path.display())))
}

fn run(cmd: Cmd) -> Run {
    match cmd {
        Cmd::Validate { model: m } => {
            let report = validate(&model(&m)?);
            print!("{}", report.to_text());
            if report.ok() {
                Ok(())
            } else {
                Err(Fail::Invalid(report.failures.join("; ")))
            }
        }
        Cmd::Unfold { model: m, out, explain, svg } => {
            let p = model(&m)?;
            let opts = UnfoldOptions { check_properties: cfg!(debug_assertions), strict: true };
            let u = unfold_with(&p, opts).map_err(|e| match e {
                Error::Invalid(_) | Error::Model(_) => Fail::Invalid(e.to_string()),
                _ => Fail::Rejected(e.to_string()),
            })?;
            let recs = u.net.records(&u.surface);
            if explain {
                eprint!("{}", u.explain());
            }
            if let Some(path) = svg {
                write(&path, &render_svg(&u.surface, &recs))?;
            }
            emit(out.as_deref(), &records_to_text(&recs))
        }
        Cmd::Verify { model: m, net: n } => {
            let report = verify_net(&model(&m)?, &net(&n)?);
            print!("{}", report.to_text());
            if report.ok() {
                Ok(())
            } else {
                Err(Fail::Rejected("net rejected".into()))
            }
        }
        Cmd::Render { model: m, net: n, out } => {
            let p = model(&m)?;
            let s = extract_surface(&p).map_err(|e| Fail::Invalid(e.to_string()))?;
            let recs = net(&n)?;
            if let Some(r) = recs.iter().find(|r| r.cell >= s.len()) {
                return Err(Fail::Invalid(format!("cell {} is not on the model surface", r.cell)));
            }
            emit(out.as_deref(), &render_svg(&s, &recs))
        }
        Cmd::Generate { gen, index, count, out } => {
            let cfg = gen.config();
            for k in index..index + count {
                let p = instance(&cfg, k).map_err(|e| Fail::Rejected(format!("instance {k}: {e}")))?;
                match (&out, count) {
                    (Some(dir), c) if c > 1 => {
                        fs::create_dir_all(dir).map_err(|e| Fail::Invalid(format!("{}: {e}", dir.display())))?;
                        write(&dir.join(format!("seed{}-{k}.txt", cfg.seed)), &p.to_text())?;
                    }
                    (Some(file), _) => write(file, &p.to_text())?,
                    (None, c) => {
                        if c > 1 {
                            println!("# instance {k}");
                        }
                        print!("{}", p.to_text());
                    }
                }
            }
            Ok(())
        }
        Cmd::Fuzz { gen, count, corpus, sequential } => {
            let cfg = gen.config();
            let report = if sequential { fuzz_sequential(&cfg, count) } else { fuzz(&cfg, count) };
            print!("{}", report.to_text());
            if let Some(dir) = corpus {
                report.write_corpus(&dir).map_err(|e| Fail::Invalid(format!("{}: {e}", dir.display())))?;
            }
            if report.accepted() == report.count() {
                Ok(())
            } else {
                Err(Fail::Rejected(report.summary()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Rejected(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Fail::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
