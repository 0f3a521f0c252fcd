//! `isoknot` command-line tool.

mod commands;
mod error;
mod io;
mod property;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use isoknot::curvature::{DEFAULT_PARTITION_BUDGET, DEFAULT_TOL};
use isoknot::inscribe::{DEFAULT_EPS, DEFAULT_MAX_ROUNDS};
use isoknot::pl_ops::DEFAULT_FRAMES;
use isoknot::tubular::DEFAULT_SAFETY;

use commands::{ConvergeArgs, ExportFormat, InscribeArgs, Outcome, SequenceKind};
use error::{CliError, EXIT_CRITERIA, EXIT_OK, EXIT_VALIDATION};
use property::PropertyName;
use spec::CurveSpec;

#[derive(Parser)]
#[command(name = "isoknot", version, about = "Certified PL approximation and isotopy checks for space curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Total curvature of a curve or a parameter window of it.
    Curvature {
        #[arg(long)]
        curve: CurveSpec,
        /// Parameter window as LO,HI.
        #[arg(long)]
        window: Option<String>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Tubular neighbourhood radius.
    Tube {
        #[arg(long)]
        curve: CurveSpec,
        #[arg(long, default_value_t = DEFAULT_SAFETY)]
        safety: f64,
        /// Grid size of the separation search.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Certified inscribed PL representation.
    Inscribe {
        #[arg(long)]
        curve: CurveSpec,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
        #[arg(long, default_value_t = DEFAULT_SAFETY)]
        safety: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ROUNDS)]
        max_rounds: u32,
        /// Directory for polyline.csv and certificate.json.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Skip the Hausdorff check.
        #[arg(long)]
        fast: bool,
    },
    /// Smallest index of a PL sequence certified isotopic to the curve.
    Converge {
        #[arg(long)]
        curve: CurveSpec,
        #[arg(long, value_enum, default_value_t = SequenceKind::Refinement)]
        sequence: SequenceKind,
        #[arg(long, default_value_t = 64)]
        i_max: u32,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
        #[arg(long, default_value_t = DEFAULT_SAFETY)]
        safety: f64,
        /// Curvature budget per partition window.
        #[arg(long, default_value_t = DEFAULT_PARTITION_BUDGET)]
        budget: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ROUNDS)]
        max_rounds: u32,
        #[arg(long)]
        fast: bool,
        /// Also write the report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Median push of one vertex of a PL curve, written as OBJ frames.
    PushDemo {
        #[arg(long)]
        curve: CurveSpec,
        #[arg(long)]
        vertex: usize,
        #[arg(long, default_value_t = DEFAULT_FRAMES)]
        frames: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a curve as a polyline.
    Export {
        #[arg(long)]
        curve: CurveSpec,
        /// Sample count for smooth curves. PL files are written unchanged.
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = ExportFormat::Csv)]
        format: ExportFormat,
        #[arg(long)]
        out: PathBuf,
    },
    /// Seeded randomized property check.
    Property {
        #[arg(long, value_enum)]
        name: PropertyName,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("ISOKNOT_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .map_err(|_| CliError::Validation(format!("ISOKNOT_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Validation(format!("cannot start {n} threads: {e}")))
}

fn run(cmd: Command) -> Result<Outcome, CliError> {
    init_threads()?;
    match cmd {
        Command::Curvature { curve, window, tol } => commands::curvature(&curve, window.as_deref(), tol),
        Command::Tube { curve, safety, grid } => commands::tube(&curve, safety, grid),
        Command::Inscribe {
            curve,
            eps,
            safety,
            max_rounds,
            out,
            fast,
        } => commands::inscribe(
            &curve,
            &InscribeArgs {
                eps,
                safety,
                max_rounds,
                out,
                fast,
            },
        ),
        Command::Converge {
            curve,
            sequence,
            i_max,
            eps,
            safety,
            budget,
            max_rounds,
            fast,
            out,
        } => commands::converge(
            &curve,
            &ConvergeArgs {
                sequence,
                i_max,
                eps,
                safety,
                budget,
                max_rounds,
                fast,
                out,
            },
        ),
        Command::PushDemo {
            curve,
            vertex,
            frames,
            out,
        } => commands::push_demo(&curve, vertex, frames, out),
        Command::Export {
            curve,
            samples,
            format,
            out,
        } => commands::export(&curve, samples, format, out),
        Command::Property { name, trials, seed } => commands::property(name, trials, seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            return ExitCode::from(code as u8);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            println!("{}", out.json);
            ExitCode::from(if out.ok { EXIT_OK } else { EXIT_CRITERIA } as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
