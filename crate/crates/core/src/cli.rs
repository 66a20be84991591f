//! The `panto` command line.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::blocks::{build_blocks, drilled_volume, emit_dot, export_gluing, link_components};
use crate::bounds::{evaluate_bounds, HyperbolicConstants};
use crate::certify::{certify, filling_pair_probe, Classification};
use crate::error::Error;
use crate::examples;
use crate::farey::{bfs_distance_oracle, farey_distance};
use crate::moves::{path_weight, MovePath};
use crate::schema::{self, MapFile};
use crate::slope::Slope;
use crate::surface::validate_pants;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

pub const DEFAULT_PRECISION: u32 = 15;

#[derive(Debug, Parser)]
#[command(name = "panto", version, about = "Pants paths, block decompositions and volume bounds for end-periodic maps")]
pub struct Cli {
    /// Decimal digits for the hyperbolic constants, 8 to 30.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a pants decomposition against a window.
    Validate {
        pants: PathBuf,
        #[arg(long)]
        window: PathBuf,
    },
    /// Farey graph distances.
    Farey {
        #[command(subcommand)]
        op: FareyOp,
    },
    /// Weight n_T + 2 n_S of a move path.
    PathWeight { path: PathBuf },
    /// Block decompositions.
    Blocks {
        #[command(subcommand)]
        op: BlocksOp,
    },
    /// Volume and translation-length bounds.
    Bounds {
        map: PathBuf,
        /// Path file; the canonical path of `f^power` when absent.
        path: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        power: u32,
        #[arg(long)]
        json: bool,
    },
    /// Run the irreducibility certificate of a map file (`-` for stdin).
    Certify {
        map: PathBuf,
        /// Also probe the orbits of eta and alpha for this many steps.
        #[arg(long)]
        probe: Option<u32>,
    },
    /// Print a generated map file.
    Example {
        name: ExampleName,
        /// End behavior for `laddershift`, as `k,-k`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        ends: Option<Vec<i64>>,
        /// Number of strips for `laddershift`.
        #[arg(long)]
        strips: Option<u32>,
        /// Family index for `sharp` and `certificate`.
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Print the canonical path instead of the map.
        #[arg(long)]
        path: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum FareyOp {
    Dist { a: String, b: String },
    Bfs {
        a: String,
        b: String,
        #[arg(long, default_value_t = 50)]
        bound: i64,
    },
}

#[derive(Debug, Subcommand)]
pub enum BlocksOp {
    Build {
        map: PathBuf,
        path: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        power: u32,
        /// Write the DOT graph here (`-` for stdout, after the gluing).
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExampleName {
    Fenley,
    Laddershift,
    Sharp,
    Certificate,
    Reducible,
}

/// A failure with its exit code and stable tag.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub tag: &'static str,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, tag) = match &e {
            Error::Parse(_) | Error::InvalidSlope(_) => (EXIT_INPUT, "parse"),
            Error::NonTerminatingOrbit { .. } => (EXIT_INVARIANT, "reducible"),
            Error::OrbitEscapedWindow { .. } => (EXIT_INPUT, "window"),
            Error::ConventionViolation(_) => (EXIT_INPUT, "convention"),
            _ => (EXIT_INPUT, "input"),
        };
        let message = match &e {
            Error::NonTerminatingOrbit { .. } => format!("reducibility witness found: {e}"),
            _ => e.to_string(),
        };
        Failure { code, tag, message }
    }
}

fn io_failure(what: &Path, e: std::io::Error) -> Failure {
    Failure { code: EXIT_INPUT, tag: "io", message: format!("{}: {e}", what.display()) }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn read(&mut self, p: &Path) -> Result<String, Failure> {
        if p.as_os_str() == "-" {
            let mut s = String::new();
            self.stdin.read_to_string(&mut s).map_err(|e| io_failure(p, e))?;
            return Ok(s);
        }
        std::fs::read_to_string(p).map_err(|e| io_failure(p, e))
    }

    fn print(&mut self, s: &str) -> Result<(), Failure> {
        self.out.write_all(s.as_bytes()).map_err(|e| io_failure(Path::new("<stdout>"), e))
    }

    fn warn(&mut self, s: &str) {
        let _ = writeln!(self.err, "W: {s}");
    }
}

/// Precision from the flag, overridden by `PANTO_PRECISION`.
pub fn resolve_precision(flag: Option<u32>, env: Option<&str>) -> Result<u32, Failure> {
    let bad = |m: String| Failure { code: EXIT_INPUT, tag: "precision", message: m };
    let p = match env {
        Some(v) => v.trim().parse::<u32>().map_err(|_| bad(format!("PANTO_PRECISION={v:?} is not an integer")))?,
        None => flag.unwrap_or(DEFAULT_PRECISION),
    };
    if !(8..=30).contains(&p) {
        return Err(bad(format!("precision {p} outside 8..=30")));
    }
    Ok(p)
}

fn slope(s: &str) -> Result<Slope, Failure> {
    s.parse::<Slope>().map_err(Failure::from)
}

fn load_map(io: &mut Io, p: &Path) -> Result<MapFile, Failure> {
    let text = io.read(p)?;
    Ok(schema::parse_map(&text)?)
}

fn path_for(io: &mut Io, f: &crate::end_periodic::EndPeriodicMap, path: Option<&PathBuf>, power: u32) -> Result<MovePath, Failure> {
    match path {
        Some(p) => {
            let text = io.read(p)?;
            Ok(schema::parse_path(&text)?)
        }
        None => Ok(f.power(power)?.canonical_path()?),
    }
}

/// Runs one command; returns the exit code. Diagnostics go to `err` with
/// an `E:` or `W:` prefix.
pub fn run(args: &[String], env_precision: Option<&str>, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let _ = writeln!(err, "E:usage {}", e.to_string().lines().next().unwrap_or(""));
            return EXIT_INPUT;
        }
    };
    let mut io = Io { stdin, out, err };
    match dispatch(&cli, env_precision, &mut io) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(io.err, "E:{} {}", f.tag, f.message);
            f.code
        }
    }
}

fn dispatch(cli: &Cli, env_precision: Option<&str>, io: &mut Io) -> Result<i32, Failure> {
    let precision = resolve_precision(cli.precision, env_precision)?;
    match &cli.command {
        Command::Validate { pants, window } => {
            let pd = schema::parse_pants(&io.read(pants)?)?;
            let w = schema::parse_window(&io.read(window)?)?;
            let report = validate_pants(&pd, &w);
            if report.is_ok() {
                io.print("OK\n")?;
                return Ok(EXIT_OK);
            }
            for v in &report.violations {
                io.print(&format!("violation: {v}\n"))?;
            }
            Ok(EXIT_INVARIANT)
        }
        Command::Farey { op: FareyOp::Dist { a, b } } => {
            io.print(&format!("{}\n", farey_distance(slope(a)?, slope(b)?)))?;
            Ok(EXIT_OK)
        }
        Command::Farey { op: FareyOp::Bfs { a, b, bound } } => {
            match bfs_distance_oracle(slope(a)?, slope(b)?, *bound) {
                Some(d) => io.print(&format!("{d}\n"))?,
                None => io.print("unknown\n")?,
            }
            Ok(EXIT_OK)
        }
        Command::PathWeight { path } => {
            let p = schema::parse_path(&io.read(path)?)?;
            let w = path_weight(&p)?;
            io.print(&format!("{w}\nn_T = {}\nn_S = {}\n", p.n_t(), p.n_s()))?;
            Ok(EXIT_OK)
        }
        Command::Blocks { op: BlocksOp::Build { map, path, power, dot } } => {
            let f = load_map(io, map)?.to_map()?;
            let p = path_for(io, &f, path.as_ref(), *power)?;
            let g = f.power(*power)?;
            let bc = build_blocks(&g, &p)?;
            io.print(&export_gluing(&bc))?;
            let expected = p.len() as u64 + 3 * g.phi_star_norm()? / 2;
            if link_components(&bc) as u64 != expected {
                return Err(Failure {
                    code: EXIT_INVARIANT,
                    tag: "invariant",
                    message: format!("{} link components, expected {expected}", link_components(&bc)),
                });
            }
            let vol = drilled_volume(&bc, &HyperbolicConstants::compute(precision));
            let _ = writeln!(io.err, "W: drilled volume {} V_oct = {:.9}", vol.voct_coeff, vol.value);
            if let Some(d) = dot {
                let text = emit_dot(&bc);
                if d.as_os_str() == "-" {
                    io.print(&text)?;
                } else {
                    std::fs::write(d, text).map_err(|e| io_failure(d, e))?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Bounds { map, path, power, json } => {
            let f = load_map(io, map)?.to_map()?;
            let p = path_for(io, &f, path.as_ref(), *power)?;
            // the bounds presume irreducibility; tracing surfaces a reducing curve
            build_blocks(&f.power(*power)?, &p)?;
            let constants = HyperbolicConstants::compute(precision);
            if precision > constants.effective_digits() {
                io.warn(&format!("precision {precision} capped at {} digits", constants.effective_digits()));
            }
            let report = evaluate_bounds(&f, &[(p, *power)], &constants)?;
            if *json {
                let mut s = serde_json::to_string_pretty(&report.to_json()).expect("json");
                s.push('\n');
                io.print(&s)?;
            } else {
                io.print(&report.to_text())?;
            }
            if !report.consistent {
                return Err(Failure { code: EXIT_INVARIANT, tag: "invariant", message: "upper bound below lower bound".into() });
            }
            Ok(EXIT_OK)
        }
        Command::Certify { map, probe } => {
            let doc = load_map(io, map)?;
            let f = doc.to_map()?;
            let Some(section) = &doc.certificate else {
                io.print("classification: inconclusive: map file has no certificate section\n")?;
                return Ok(EXIT_INCONCLUSIVE);
            };
            let cert = certify(&f, &section.support, &section.eta, &section.alpha)?;
            io.print(&format!("classification: {}\n", cert.classification))?;
            for (check, outcome) in &cert.evidence {
                io.print(&format!("  {check}: {outcome}\n"))?;
            }
            if let Some(k) = probe {
                let r = filling_pair_probe(&f, &section.support, &section.eta, &section.alpha, *k)?;
                io.print(&format!("  probe k <= {k}: {}\n", if r.all_in_ball() { "all in ball" } else { "left the ball" }))?;
            }
            Ok(match cert.classification {
                Classification::Inconclusive(_) => EXIT_INCONCLUSIVE,
                _ => EXIT_OK,
            })
        }
        Command::Example { name, ends, strips, k, path } => {
            let (map, placed_path) = match name {
                ExampleName::Fenley => {
                    let placed = examples::fenley_placed()?;
                    (examples::document(&placed, placed.hosts.len() - 1)?, None)
                }
                ExampleName::Certificate => {
                    let placed = examples::certificate_demo(*k)?;
                    (examples::document(&placed, 0)?, None)
                }
                ExampleName::Reducible => (MapFile::from_map(&examples::reducible()?, None), None),
                ExampleName::Laddershift => {
                    let s = strips.unwrap_or(1);
                    if let Some(w) = ends {
                        if w.len() != 2 || w[0] != s as i64 || w[1] != -(s as i64) {
                            return Err(Failure {
                                code: EXIT_INPUT,
                                tag: "input",
                                message: format!("ends {w:?} do not match {s} strips from E2 to E1 (expected {s},-{s})"),
                            });
                        }
                    }
                    (MapFile::from_map(&examples::laddershift(s, 2)?, None), None)
                }
                ExampleName::Sharp => {
                    let (base, g0) = examples::sharp_base()?;
                    let (fk, p) = crate::bounds::sharpness_family(&base.map, &g0, *k)?;
                    let cert = examples::certificate_support(&base, 0, crate::certify::Separation::FullySeparating)?;
                    (MapFile::from_map(&fk, Some(cert)), Some(p))
                }
            };
            if *path {
                let p = match placed_path {
                    Some(p) => p,
                    None => map.to_map()?.canonical_path()?,
                };
                io.print(&schema::path_to_json(&p))?;
            } else {
                io.print(&schema::map_to_json(&map))?;
            }
            Ok(EXIT_OK)
        }
    }
}

/// Entry point used by the binary.
pub fn main_with_env() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    let env = std::env::var("PANTO_PRECISION").ok();
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(&args, env.as_deref(), &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock())
}
