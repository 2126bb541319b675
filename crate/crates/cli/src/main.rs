//! `jordan-spectra`: decide spectrality, symmetry and regularity of state
//! spaces and query the symmetric-space tables.
//!
//! Exit codes: 0 success, 1 the queried property was refuted, 2 usage or
//! input error.

mod commands;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use jordan_spectra::classification::FR_SAMPLES;
use jordan_spectra::operational::DEFAULT_VERTEX_CAP;
use jordan_spectra::par::Execution;
use jordan_spectra::Result;

use commands::{Outcome, Run};
use input::{read_file, BodyArgs};

#[derive(Parser, Debug)]
#[command(name = "jordan-spectra", version, about = "Spectrality and symmetry of convex state spaces")]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 100)]
    trials: usize,
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Largest vertex count accepted by exhaustive polytope routines.
    #[arg(long, global = true, default_value_t = DEFAULT_VERTEX_CAP)]
    cap: usize,
    /// Run batches on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Property {
    Spectral,
    StrongSymmetry,
    Regular,
    Rank,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spectral decomposition of a state (random if no --point).
    Decompose {
        #[command(flatten)]
        body: BodyArgs,
        /// Comma-separated coordinates; exact (`1/2`) for polytopes.
        #[arg(long)]
        point: Option<String>,
    },
    /// Decide one property; exits 1 with a witness when it fails.
    Check {
        #[arg(long, value_enum)]
        property: Property,
        #[command(flatten)]
        body: BodyArgs,
    },
    /// Frames of size k with a distinguishing measurement.
    Frames {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        body: BodyArgs,
    },
    /// Section through the flag barycenters of a fixed frame.
    FrPolytope {
        #[command(flatten)]
        body: BodyArgs,
        #[arg(long, default_value_t = FR_SAMPLES)]
        samples: usize,
        /// Use a random Jordan frame (seeded by --seed) instead of the diagonal one.
        #[arg(long)]
        random_frame: bool,
    },
    /// Query the classification tables.
    Tables {
        /// Row label such as EIV, AIII or C_n.
        #[arg(long = "type", value_name = "LABEL")]
        label: Option<String>,
        /// Parameter binding NAME=VALUE, repeatable.
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
        /// Recompute every formula and compare against the tabulated algebras.
        #[arg(long)]
        consistency: bool,
    },
    /// Run the theorem checks for an algebra, a simplex, or the polytope catalog.
    VerifyTheorem {
        #[command(flatten)]
        body: BodyArgs,
        #[arg(long, conflicts_with = "converse")]
        simplex: Option<usize>,
        #[arg(long)]
        converse: bool,
    },
    /// Points and segments for a 2D or 3D picture of the body.
    PlotData {
        #[command(flatten)]
        body: BodyArgs,
        #[arg(long, default_value_t = 360)]
        points: usize,
    },
    /// Re-verify every witness found in a JSON file.
    Recheck {
        #[command(flatten)]
        body: BodyArgs,
        #[arg(long, value_name = "PATH")]
        witness: PathBuf,
    },
    /// Print a built-in polytope as body JSON (lists names without NAME).
    Fixture { name: Option<String> },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Decompose { .. } => "decompose",
            Command::Check { .. } => "check",
            Command::Frames { .. } => "frames",
            Command::FrPolytope { .. } => "fr-polytope",
            Command::Tables { .. } => "tables",
            Command::VerifyTheorem { .. } => "verify-theorem",
            Command::PlotData { .. } => "plot-data",
            Command::Recheck { .. } => "recheck",
            Command::Fixture { .. } => "fixture",
        }
    }
}

fn dispatch(cmd: &Command, run: &Run) -> Result<Outcome> {
    match cmd {
        Command::Decompose { body, point } => commands::decompose(&body.resolve()?, point.as_deref(), run),
        Command::Check { property, body } => {
            let b = body.resolve()?;
            match property {
                Property::Spectral => commands::check_spectral(&b, run),
                Property::StrongSymmetry => commands::check_strong_symmetry(&b, run),
                Property::Regular => commands::check_regular(&b, run),
                Property::Rank => commands::check_rank(&b, run),
            }
        }
        Command::Frames { k, body } => commands::frames(&body.resolve()?, *k, run),
        Command::FrPolytope { body, samples, random_frame } => commands::fr(&body.resolve()?, *samples, *random_frame, run),
        Command::Tables { label, params, consistency } => commands::tables(label.as_deref(), params, *consistency),
        Command::VerifyTheorem { body, simplex, converse } => {
            let b = if body.has_body() { Some(body.resolve()?) } else { None };
            commands::verify_theorem(b.as_ref(), *simplex, *converse, run)
        }
        Command::PlotData { body, points } => commands::plot_data(&body.resolve()?, (*points).max(3), run),
        Command::Recheck { body, witness } => commands::recheck_file(&body.resolve()?, &read_file(witness)?, run),
        Command::Fixture { name } => commands::fixture(name.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = Run {
        seed: cli.run.seed,
        trials: cli.run.trials,
        tol: cli.run.tol,
        cap: cli.run.cap,
        exec: if cli.run.sequential { Execution::Sequential } else { Execution::default() },
    };
    let outcome = match dispatch(&cli.command, &run) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = serde_json::to_string_pretty(&commands::envelope(cli.command.name(), outcome.body)).expect("JSON values serialise");
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        // a closed pipe (e.g. `| head`) is not an error worth reporting
        None => {
            let _ = writeln!(std::io::stdout().lock(), "{text}");
        }
    }
    if outcome.refuted {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
