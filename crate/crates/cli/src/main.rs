//! `minorscale`: batch front-end over JSON files.
//!
//! Exit codes: 0 accepted or equal, 1 rejected with a counterexample written,
//! 2 usage or input error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use minorscale::generators::{default_exa_grid, Ladder, Sign};
use minorscale::io;
use minorscale::minors::subsets_up_to;
use minorscale::scalar::{parse_real, RealLiteral, DEFAULT_TAU};
use minorscale::{
    compare_minors, decide_pm1_via_minors, decide_rescaling, differing_minors, generate, principal_minor,
    recover_isometry, scaled_isometry_test, volume, FamilySpec, Generated, IsometryVerdict, RescalingKind,
    ScaledVerdict, Tolerance, Verdict,
};

#[derive(Parser, Debug)]
#[command(name = "minorscale", version, about = "Rescaling decisions, principal minors and isometry recovery")]
struct Cli {
    /// Relative zero tolerance.
    #[arg(long, global = true, env = "MINORSCALE_TOL", default_value_t = DEFAULT_TAU)]
    tol: f64,
    /// Output file; standard output when absent.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print every principal minor up to a cardinality.
    Minors {
        matrix: PathBuf,
        #[arg(long)]
        max_card: Option<usize>,
    },
    /// Compare principal minors of two matrices.
    CompareMinors {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        max_card: Option<usize>,
        /// Report every differing subset instead of the first.
        #[arg(long)]
        all: bool,
    },
    /// Decide whether the second matrix is a rescaling of the first.
    Decide {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, default_value = "general")]
        kind: RescalingKind,
        /// Compare principal minors first (pm1 only).
        #[arg(long)]
        via_minors: bool,
        /// Compare all cardinalities instead of stopping at the radius bound.
        #[arg(long, requires = "via_minors")]
        no_radius_bound: bool,
    },
    /// Write a generated matrix, or the first matrix of a generated pair.
    Gen(GenArgs),
    /// Print every face volume up to a cardinality.
    Volumes {
        vectors: PathBuf,
        #[arg(long)]
        max_card: Option<usize>,
    },
    /// Find an orthogonal map and signs carrying one family onto another.
    RecoverIsometry {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        max_card: Option<usize>,
    },
    /// Test for an orthogonal map up to a nonzero factor per vector.
    ScaledIsometry { left: PathBuf, right: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Family {
    #[value(name = "Ln")]
    Ln,
    #[value(name = "LA")]
    La,
    #[value(name = "hermitean4")]
    Hermitean4,
    #[value(name = "sobolev")]
    Sobolev,
    #[value(name = "szego0")]
    Szego0,
    #[value(name = "exaSampled")]
    ExaSampled,
    #[value(name = "randomPm1Pair")]
    RandomPm1Pair,
    #[value(name = "randomRescaledPair")]
    RandomRescaledPair,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum LadderArg {
    Polynomial,
    Szego,
}

#[derive(clap::Args, Debug)]
struct GenArgs {
    #[arg(long)]
    family: Family,
    /// Size for Ln and the random families.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum)]
    sign: Option<SignArg>,
    /// Matrix size for LA.
    #[arg(long)]
    size: Option<usize>,
    /// Chord indices carrying +1 for LA, comma separated.
    #[arg(long, value_delimiter = ',')]
    chords: Vec<usize>,
    /// Sample points, comma separated; exact rationals for exaSampled.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    points: Vec<String>,
    #[arg(long, value_enum, default_value = "polynomial")]
    ladder: LadderArg,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Rescaling kind for randomRescaledPair.
    #[arg(long, default_value = "general")]
    kind: RescalingKind,
    /// Lay down a spanning tree in randomPm1Pair.
    #[arg(long)]
    connected: bool,
    /// Use M(1, 3) = e^{i pi/12} in hermitean4, which breaks the minor equality.
    #[arg(long)]
    as_printed: bool,
    /// File for the second matrix of a pair.
    #[arg(long)]
    second: Option<PathBuf>,
}

enum Outcome {
    Accept,
    Reject,
}

struct Sink(Option<PathBuf>);

impl Sink {
    fn write(&self, text: &str) -> Result<()> {
        write_to(self.0.as_deref(), text)
    }
}

fn write_to(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush().map_err(Into::into)
        }
    }
}

fn card(max_card: Option<usize>, n: usize) -> usize {
    max_card.unwrap_or(n)
}

fn real_points(points: &[String]) -> Result<Vec<f64>> {
    points
        .iter()
        .map(|p| {
            Ok(match parse_real(p)? {
                RealLiteral::Exact(q) => minorscale::Scalar::from_rational(q).re_f64(),
                RealLiteral::Float(x) => x,
            })
        })
        .collect()
}

fn family_spec(a: &GenArgs) -> Result<FamilySpec> {
    let need_n = || a.n.context("--n is required for this family");
    let sign = match a.sign {
        Some(SignArg::Plus) | None => Sign::Plus,
        Some(SignArg::Minus) => Sign::Minus,
    };
    Ok(match a.family {
        Family::Ln => FamilySpec::Ln { n: need_n()?, sign },
        Family::La => FamilySpec::La { size: a.size.context("--size is required for LA")?, chords: a.chords.clone() },
        Family::Hermitean4 => FamilySpec::Hermitean4 { as_printed: a.as_printed },
        Family::Sobolev => FamilySpec::Sobolev { points: real_points(&a.points)? },
        Family::Szego0 => FamilySpec::Szego0 { points: real_points(&a.points)? },
        Family::ExaSampled => {
            let grid = if a.points.is_empty() {
                default_exa_grid()
            } else {
                a.points
                    .iter()
                    .map(|p| match parse_real(p)? {
                        RealLiteral::Exact(q) => Ok(q),
                        RealLiteral::Float(_) => bail!("exaSampled grid points must be exact rationals, got `{p}`"),
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            let ladder = match a.ladder {
                LadderArg::Polynomial => Ladder::Polynomial,
                LadderArg::Szego => Ladder::Szego,
            };
            FamilySpec::ExaSampled { grid, ladder }
        }
        Family::RandomPm1Pair => {
            FamilySpec::RandomPm1Pair { n: need_n()?, density: a.density, seed: a.seed, connected: a.connected }
        }
        Family::RandomRescaledPair => {
            FamilySpec::RandomRescaledPair { n: need_n()?, density: a.density, seed: a.seed, kind: a.kind }
        }
    })
}

fn verdict_output(v: &Verdict, labels: &[String]) -> (String, Outcome) {
    match v {
        Verdict::Accepted(c) => (io::to_line(&io::certificate_to_json(c, labels)), Outcome::Accept),
        Verdict::Rejected(cx) => (io::to_line(&io::counterexample_to_json(cx, labels)), Outcome::Reject),
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    if !(cli.tol.is_finite() && cli.tol >= 0.0) {
        bail!("--tol must be a finite nonnegative number, got {}", cli.tol);
    }
    let tol = Tolerance::new(cli.tol);
    let sink = Sink(cli.output);
    match cli.command {
        Command::Minors { matrix, max_card } => {
            let l = io::read_matrix(&matrix)?;
            let k = card(max_card, l.size());
            if k > l.size() {
                bail!("--max-card {k} exceeds {} points", l.size());
            }
            let mut out = String::new();
            for s in subsets_up_to(l.size(), k) {
                out.push_str(&io::to_line(&io::minor_value_line(&s, &principal_minor(&l, &s)?, l.labels())));
            }
            sink.write(&out)?;
            Ok(Outcome::Accept)
        }
        Command::CompareMinors { left, right, max_card, all } => {
            let (l, m) = (io::read_matrix(&left)?, io::read_matrix(&right)?);
            let k = card(max_card, l.size());
            let diffs = if all {
                differing_minors(&l, &m, k, tol)?
            } else {
                compare_minors(&l, &m, k, tol)?.first_diff.into_iter().collect()
            };
            if diffs.is_empty() {
                sink.write(&io::to_line(&io::equal_minors_report(k)))?;
                return Ok(Outcome::Accept);
            }
            let out: String = diffs
                .iter()
                .map(|d| io::to_line(&io::minor_pair_line(&d.subset, &d.in_l, &d.in_m, l.labels())))
                .collect();
            sink.write(&out)?;
            Ok(Outcome::Reject)
        }
        Command::Decide { left, right, kind, via_minors, no_radius_bound } => {
            let (l, m) = (io::read_matrix(&left)?, io::read_matrix(&right)?);
            let verdict = if via_minors {
                if kind != RescalingKind::Pm1 {
                    bail!("--via-minors applies to --kind pm1 only");
                }
                decide_pm1_via_minors(&l, &m, !no_radius_bound, tol)?
            } else {
                decide_rescaling(&l, &m, kind, tol)?
            };
            let (text, outcome) = verdict_output(&verdict, l.labels());
            sink.write(&text)?;
            Ok(outcome)
        }
        Command::Gen(args) => {
            let spec = family_spec(&args)?;
            match generate(&spec)? {
                Generated::Single(l) => {
                    if args.second.is_some() {
                        bail!("--second given for a family that yields one matrix");
                    }
                    sink.write(&io::to_line(&io::matrix_to_json(&l)))?;
                }
                Generated::Pair(l, m) => {
                    sink.write(&io::to_line(&io::matrix_to_json(&l)))?;
                    if let Some(p) = &args.second {
                        write_to(Some(p), &io::to_line(&io::matrix_to_json(&m)))?;
                    }
                }
            }
            Ok(Outcome::Accept)
        }
        Command::Volumes { vectors, max_card } => {
            let v = io::read_vectors(&vectors)?;
            let k = card(max_card, v.len());
            if k > v.len() {
                bail!("--max-card {k} exceeds {} vectors", v.len());
            }
            let mut out = String::new();
            for s in subsets_up_to(v.len(), k) {
                out.push_str(&io::to_line(&io::volume_line(&s, volume(&v, &s)?, v.labels())));
            }
            sink.write(&out)?;
            Ok(Outcome::Accept)
        }
        Command::RecoverIsometry { left, right, max_card } => {
            let (v, w) = (io::read_vectors(&left)?, io::read_vectors(&right)?);
            match recover_isometry(&v, &w, max_card, tol)? {
                IsometryVerdict::Accepted(wit) => {
                    sink.write(&io::to_line(&io::witness_to_json(&wit)))?;
                    Ok(Outcome::Accept)
                }
                IsometryVerdict::Rejected(cx) => {
                    sink.write(&io::to_line(&io::face_counterexample_to_json(&cx, v.labels())))?;
                    Ok(Outcome::Reject)
                }
            }
        }
        Command::ScaledIsometry { left, right } => {
            let (v, w) = (io::read_vectors(&left)?, io::read_vectors(&right)?);
            let verdict = scaled_isometry_test(&v, &w, tol)?;
            sink.write(&io::to_line(&io::scaled_to_json(&verdict, v.labels())))?;
            Ok(match verdict {
                ScaledVerdict::Accepted { .. } => Outcome::Accept,
                ScaledVerdict::Rejected(_) => Outcome::Reject,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Outcome::Accept) => ExitCode::SUCCESS,
        Ok(Outcome::Reject) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
