//! Command-line front end: enumeration runs with caches and checkpoints,
//! minimization reports, point certification, and discrete/circle
//! experiments, all with machine-readable output.
//!
//! Exit codes: 0 success, 1 usage error, 2 i/o failure, 3 internal
//! invariant violation, 4 degenerate input (exact tie).

use apcolor::diagram::{DiagramError, Endpoints};
use apcolor::discrete::{
    bead_fraction, circle_mono_fraction, circle_monte_carlo, count_ap3, count_mono_ap3,
    count_mono_offby1, fraction_mono, CircleColoring, DiscreteColoring,
};
use apcolor::enumerator::{
    cache_file_name, enumerate_configurations, write_atomic, write_cache, EnumError,
    EnumerateOptions,
};
use apcolor::optimizer::{certify_point, global_minimize, MinimizeOptions, OptimizerError};
use apcolor::rational::{parse_rational, Rational};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

const WORKERS_ENV: &str = "APCOLOR_WORKERS";

#[derive(Parser)]
#[command(
    name = "apcolor",
    about = "Exact-arithmetic toolkit for monochromatic 3-AP minimization over block colorings",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate all feasible configurations for an even block count.
    Enumerate {
        /// Block count (even).
        #[arg(long)]
        n: u32,
        /// Cache file to write; defaults to configs_n{N}.txt in the
        /// current directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Checkpoint file, written after every completed pair.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Resume from the checkpoint instead of starting fresh.
        #[arg(long, requires = "checkpoint")]
        resume: bool,
        /// Worker threads (overrides APCOLOR_WORKERS).
        #[arg(long)]
        workers: Option<usize>,
        /// Reconstruct mirror-forced placements instead of solving them.
        #[arg(long)]
        mirror: bool,
    },
    /// Search every chamber for the global minimum of f.
    Minimize {
        /// Largest block count to include (even).
        #[arg(long = "n-max")]
        n_max: u32,
        /// Directory of configs_n{N}.txt caches; missing entries are
        /// enumerated and written back.
        #[arg(long = "cache-dir")]
        cache_dir: Option<PathBuf>,
        /// Worker threads (overrides APCOLOR_WORKERS).
        #[arg(long)]
        workers: Option<usize>,
        /// Write the full minimization report (JSON) to this path.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Allow n-max beyond the certified range (> 12).
        #[arg(long)]
        uncertified: bool,
        /// Fail (exit 2) instead of enumerating when a cache is missing.
        #[arg(long, requires = "cache_dir")]
        offline: bool,
    },
    /// Evaluate f at a comma-separated endpoint list, exactly.
    Eval {
        #[arg(long)]
        endpoints: String,
    },
    /// Exact value/gradient certification of an antisymmetric point.
    Certify {
        #[arg(long)]
        endpoints: String,
    },
    /// Exact AP counts for discrete colorings.
    Discrete {
        /// Coloring text over {R, B}, e.g. RRBB.
        #[arg(long, conflicts_with = "file")]
        coloring: Option<String>,
        /// File with one coloring per line.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Print only the bead-formula measure (m3 + m3'/2) / N^2.
        #[arg(long)]
        bead: bool,
    },
    /// Circle-coloring formula plus a seeded Monte Carlo estimate.
    Circle {
        /// Red measure p for the two-arc layout [0,p) red, [p,1) blue.
        #[arg(long, conflicts_with = "arcs")]
        p: Option<String>,
        /// JSON file with an explicit arc layout.
        #[arg(long)]
        arcs: Option<PathBuf>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(String),
    Internal(String),
    Degenerate(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Internal(_) => 3,
            CliError::Degenerate(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Internal(m)
            | CliError::Degenerate(m) => m,
        }
    }
}

impl From<EnumError> for CliError {
    fn from(e: EnumError) -> Self {
        match e {
            EnumError::OddBlockCount(_) => CliError::Usage(e.to_string()),
            EnumError::Io(_) => CliError::Io(e.to_string()),
            EnumError::BadCheckpoint(_)
            | EnumError::VersionMismatch(_)
            | EnumError::RunMismatch(_)
            | EnumError::BadCache(_) => CliError::Io(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<DiagramError> for CliError {
    fn from(e: DiagramError) -> Self {
        match e {
            DiagramError::Tie { .. } => CliError::Degenerate(e.to_string()),
            DiagramError::NoMatchingCase => CliError::Internal(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<OptimizerError> for CliError {
    fn from(e: OptimizerError) -> Self {
        match e {
            OptimizerError::Diagram(d) => d.into(),
            OptimizerError::Enum(en) => en.into(),
            OptimizerError::OddBlockCount(_) | OptimizerError::UncertifiedRange(_) => {
                CliError::Usage(e.to_string())
            }
            OptimizerError::MissingCache(_) => CliError::Io(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn effective_workers(flag: Option<usize>) -> Option<usize> {
    flag.or_else(|| {
        std::env::var(WORKERS_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
    })
}

#[derive(Serialize)]
struct EnumerateSummary {
    n: u32,
    count: u64,
}

#[derive(Serialize)]
struct DiscreteSummary {
    coloring: String,
    n: u64,
    block_count: u64,
    m3: u64,
    m3_prime: u64,
    ap3_total: u64,
    fraction_mono: Rational,
    bead_fraction: Rational,
}

#[derive(Serialize)]
struct CircleSummary {
    p: Rational,
    exact: Rational,
    estimate: f64,
    std_error: f64,
    hits: u64,
    samples: u64,
    seed: u64,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Enumerate {
            n,
            out,
            checkpoint,
            resume,
            workers,
            mirror,
        } => {
            let opts = EnumerateOptions {
                workers: effective_workers(workers),
                checkpoint,
                resume,
                mirror_symmetry: mirror,
                ..EnumerateOptions::default()
            };
            let result = enumerate_configurations(n, &opts)?;
            let out = out.unwrap_or_else(|| PathBuf::from(cache_file_name(n)));
            write_cache(&out, &result)?;
            let summary = EnumerateSummary {
                n,
                count: result.count,
            };
            println!("{}", serde_json::to_string(&summary).expect("serializable"));
            Ok(())
        }
        Command::Minimize {
            n_max,
            cache_dir,
            workers,
            report,
            uncertified,
            offline,
        } => {
            let opts = MinimizeOptions {
                cache_dir,
                workers: effective_workers(workers),
                allow_uncertified: uncertified,
                offline,
            };
            let result = global_minimize(n_max, &opts)?;
            if let Some(path) = report {
                let json =
                    serde_json::to_string_pretty(&result).expect("report is serializable");
                write_atomic(&path, &json)?;
            }
            println!("\"{}\"", result.global.value);
            Ok(())
        }
        Command::Eval { endpoints } => {
            let e = Endpoints::parse(&endpoints)?;
            println!("\"{}\"", apcolor::diagram::evaluate_f(&e));
            Ok(())
        }
        Command::Certify { endpoints } => {
            let e = Endpoints::parse(&endpoints)?;
            let cert = certify_point(&e)?;
            println!("{}", serde_json::to_string(&cert).expect("serializable"));
            Ok(())
        }
        Command::Discrete {
            coloring,
            file,
            bead,
        } => {
            let mut inputs: Vec<String> = Vec::new();
            match (coloring, file) {
                (Some(c), None) => inputs.push(c),
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(&path)?;
                    inputs.extend(
                        text.lines()
                            .map(|l| l.trim().to_string())
                            .filter(|l| !l.is_empty()),
                    );
                }
                _ => {
                    return Err(CliError::Usage(
                        "exactly one of --coloring or --file is required".into(),
                    ))
                }
            }
            for input in inputs {
                let c = DiscreteColoring::parse(&input)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                if bead {
                    println!("\"{}\"", bead_fraction(&c));
                } else {
                    let summary = DiscreteSummary {
                        coloring: c.to_string(),
                        n: c.len(),
                        block_count: c.block_count(),
                        m3: count_mono_ap3(&c),
                        m3_prime: count_mono_offby1(&c),
                        ap3_total: count_ap3(c.len()),
                        fraction_mono: fraction_mono(&c),
                        bead_fraction: bead_fraction(&c),
                    };
                    println!("{}", serde_json::to_string(&summary).expect("serializable"));
                }
            }
            Ok(())
        }
        Command::Circle {
            p,
            arcs,
            samples,
            seed,
        } => {
            if samples == 0 {
                return Err(CliError::Usage("--samples must be at least 1".into()));
            }
            let coloring = match (p, arcs) {
                (Some(text), None) => {
                    let p = parse_rational(&text)
                        .map_err(|e| CliError::Usage(e.to_string()))?;
                    if p.is_negative() || p > Rational::one() {
                        return Err(CliError::Usage("p must lie in [0, 1]".into()));
                    }
                    CircleColoring::two_arc(&p).map_err(|e| CliError::Usage(e.to_string()))?
                }
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(&path)?;
                    CircleColoring::from_json(&text)
                        .map_err(|e| CliError::Usage(e.to_string()))?
                }
                _ => {
                    return Err(CliError::Usage(
                        "exactly one of --p or --arcs is required".into(),
                    ))
                }
            };
            if let Some(w) = effective_workers(None) {
                // best-effort: the global pool may already be initialized
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(w.max(1))
                    .build_global();
            }
            let p = coloring.red_measure();
            let est = circle_monte_carlo(&coloring, samples, seed);
            let summary = CircleSummary {
                exact: circle_mono_fraction(&p),
                p,
                estimate: est.estimate,
                std_error: est.std_error,
                hits: est.hits,
                samples: est.samples,
                seed: est.seed,
            };
            println!("{}", serde_json::to_string(&summary).expect("serializable"));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
