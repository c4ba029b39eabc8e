mod bench;
mod verify;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use astower::basefield::{PrimeModulus, PrimePoly};
use astower::isomorphism::{
    apply_inverse, apply_isomorphism, artin_schreier_solve, compute_images, random_general_tower, GeneralElement,
    GeneralTower, GeneralTowerFile,
};
use astower::towerbuild::{smallest_base_polynomial, TowerDescriptor, TowerFile};
use astower::towerops::TowerElement;
use astower::Error;
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Arithmetic in Artin-Schreier towers over prime fields.
#[derive(Parser)]
#[command(name = "astower", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a primitive tower and write it as JSON.
    Build {
        #[arg(short)]
        p: u64,
        /// Degree of the base polynomial; implied by --q0 when given.
        #[arg(short)]
        d: Option<usize>,
        #[arg(short, default_value_t = 1)]
        k: usize,
        /// Base polynomial coefficients, constant term first, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        q0: Option<Vec<i64>>,
        /// Output file; standard output when omitted.
        #[arg(short)]
        o: Option<PathBuf>,
        /// Leave out the precomputed tables.
        #[arg(long)]
        no_tables: bool,
    },
    /// Check a tower file and run the invariant suites at oracle sizes.
    Verify {
        tower: PathBuf,
        /// Enumerate every element of the small levels.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random samples per check and level.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Time tower operations and print CSV.
    Bench {
        /// Tower file; when omitted a tower is built from -p and -d.
        tower: Option<PathBuf>,
        #[arg(short, default_value_t = 2)]
        p: u64,
        #[arg(short, default_value_t = 1)]
        d: usize,
        /// Inclusive level range, as `A..B`.
        #[arg(long, value_parser = parse_levels)]
        levels: (usize, usize),
        /// Comma separated operations; all of them by default.
        #[arg(long, value_delimiter = ',')]
        ops: Option<Vec<String>>,
        /// Repetitions per measurement; the median is reported.
        #[arg(long, default_value_t = 5)]
        reps: usize,
        /// CSV output file; standard output when omitted.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Solve `X^p - X = alpha` for an element `{level, coeffs}`.
    Solve {
        #[arg(long)]
        tower: PathBuf,
        /// Element file, or inline JSON.
        #[arg(long)]
        element: String,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Isomorphisms between general towers and the primitive tower.
    Iso {
        #[command(subcommand)]
        command: IsoCommand,
    },
}

#[derive(Subcommand)]
enum IsoCommand {
    /// Compute the images `s_i` for a general tower file, or for a random one.
    Images {
        #[arg(long)]
        tower: PathBuf,
        /// General tower file; a random tower is generated when omitted.
        #[arg(long)]
        general: Option<PathBuf>,
        /// Height of the random tower; defaults to the height of the primitive tower.
        #[arg(short)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Map an element `{level, coeffs}` of the general tower to the primitive tower.
    Apply {
        #[arg(long)]
        tower: PathBuf,
        #[arg(long)]
        general: PathBuf,
        #[arg(long)]
        element: String,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Map an element of the primitive tower back to the general tower.
    Inverse {
        #[arg(long)]
        tower: PathBuf,
        #[arg(long)]
        general: PathBuf,
        #[arg(long)]
        element: String,
        #[arg(short)]
        o: Option<PathBuf>,
    },
}

/// A failed invariant or an unsolvable equation, as opposed to bad input.
#[derive(Debug)]
pub struct InvariantFailure(pub String);

impl fmt::Display for InvariantFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InvariantFailure {}

fn parse_levels(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let a: usize = a.trim().parse().map_err(|e| format!("bad level {a:?}: {e}"))?;
    let b: usize = b.trim().parse().map_err(|e| format!("bad level {b:?}: {e}"))?;
    if a > b {
        return Err(format!("empty level range {s}"));
    }
    Ok((a, b))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    emit(out, &serde_json::to_string(value)?)
}

fn load_tower(path: &Path) -> Result<TowerDescriptor> {
    let file = TowerFile::from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    file.into_tower().with_context(|| format!("loading {}", path.display()))
}

/// Inline JSON when the argument starts with `{`, a file path otherwise.
fn element_json(arg: &str) -> Result<String> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        read(Path::new(arg))
    }
}

fn parse_element(t: &TowerDescriptor, arg: &str) -> Result<TowerElement> {
    let raw: GeneralElement = serde_json::from_str(&element_json(arg)?).context("parsing element")?;
    Ok(t.element(raw.level, raw.coeffs).context("element does not fit the tower")?)
}

fn load_general(t: &TowerDescriptor, path: &Path) -> Result<GeneralTower> {
    let file: GeneralTowerFile =
        serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    let mut g = GeneralTower::from_file(t, file).with_context(|| format!("loading {}", path.display()))?;
    // resumes after any stored images
    compute_images(t, &mut g).context("computing images")?;
    Ok(g)
}

fn build(p: u64, d: Option<usize>, k: usize, q0: Option<Vec<i64>>) -> Result<TowerDescriptor> {
    let f = PrimeModulus::new(p)?;
    let q0 = match (q0, d) {
        (Some(c), d) => {
            let q = PrimePoly::from_i64(f, &c);
            if let Some(d) = d {
                if q.degree() != Some(d) {
                    bail!("--q0 has degree {:?}, but -d is {d}", q.degree());
                }
            }
            q
        }
        (None, Some(d)) => smallest_base_polynomial(f, d)?,
        (None, None) => bail!("give -d or --q0"),
    };
    Ok(TowerDescriptor::build(f, q0, k)?)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Build { p, d, k, q0, o, no_tables } => {
            let t = build(p, d, k, q0)?;
            let file = if no_tables { TowerFile::without_tables(&t) } else { TowerFile::from_tower(&t)? };
            emit(o.as_deref(), &file.to_json())
        }
        Command::Verify { tower, exhaustive, seed, samples } => {
            let file = TowerFile::from_json(&read(&tower)?).with_context(|| format!("parsing {}", tower.display()))?;
            verify::run(&file, verify::Options { exhaustive, seed, samples })
        }
        Command::Bench { tower, p, d, levels, ops, reps, csv, seed } => {
            let t = match tower {
                Some(path) => load_tower(&path)?,
                None => build(p, Some(d), levels.1, None)?,
            };
            let ops = match ops {
                Some(names) => names.iter().map(|n| n.parse()).collect::<Result<Vec<bench::Op>>>()?,
                None => bench::Op::ALL.to_vec(),
            };
            if reps < 3 {
                bail!("--reps must be at least 3");
            }
            let rows = bench::run(&t, levels, &ops, reps, seed)?;
            emit(csv.as_deref(), bench::to_csv(&rows).trim_end())
        }
        Command::Solve { tower, element, o } => {
            let t = load_tower(&tower)?;
            let alpha = parse_element(&t, &element)?;
            match artin_schreier_solve(&t, &alpha) {
                Ok(delta) => emit_json(o.as_deref(), &delta),
                Err(e @ Error::NonzeroTrace) => Err(InvariantFailure(format!("no solution: {e}")).into()),
                Err(e) => Err(e.into()),
            }
        }
        Command::Iso { command } => iso(command),
    }
}

fn iso(command: IsoCommand) -> Result<()> {
    match command {
        IsoCommand::Images { tower, general, k, seed, o } => {
            let t = load_tower(&tower)?;
            let g = match general {
                Some(path) => load_general(&t, &path)?,
                None => {
                    let k = k.unwrap_or(t.height());
                    if k > t.height() {
                        bail!("height {k} exceeds the primitive tower height {}", t.height());
                    }
                    random_general_tower(&t, k, &mut ChaCha8Rng::seed_from_u64(seed))?
                }
            };
            emit_json(o.as_deref(), &g.to_file())
        }
        IsoCommand::Apply { tower, general, element, o } => {
            let t = load_tower(&tower)?;
            let g = load_general(&t, &general)?;
            let v: GeneralElement = serde_json::from_str(&element_json(&element)?).context("parsing element")?;
            let v = g.element(v.level, v.coeffs).context("element does not fit the general tower")?;
            emit_json(o.as_deref(), &apply_isomorphism(&t, &g, &v)?)
        }
        IsoCommand::Inverse { tower, general, element, o } => {
            let t = load_tower(&tower)?;
            let g = load_general(&t, &general)?;
            let a = parse_element(&t, &element)?;
            emit_json(o.as_deref(), &apply_inverse(&t, &g, &a)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.downcast_ref::<InvariantFailure>().is_some() { 1 } else { 2 })
        }
    }
}
