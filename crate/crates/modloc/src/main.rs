use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use modloc::{describe::describe, execute, Invocation, Mode, RunError};

#[derive(Parser)]
#[command(name = "modloc", version, about = "Modular localization checks for the massive scalar representation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config's `out`; default `modloc-out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for randomized probe points.
    #[arg(long)]
    seed: Option<u64>,
    /// Primary tolerance of the mode.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Modular relations on a battery of analytic vectors.
    Tomita(RunArgs),
    /// Alternating projections onto the real subspace of a wedge family.
    Localize(RunArgs),
    /// Boundary-value, factorization and growth checks for wedge members.
    Boundary(RunArgs),
    /// Paley-Wiener-Schwartz bound for a compactly supported distribution.
    Pws(RunArgs),
    /// Temperedness region from exponential density tags.
    Hormander(RunArgs),
    /// Polynomial bound on a tube and boundary-convergence probe.
    Epstein(RunArgs),
    /// Support function recovered from transform growth.
    SupportEstimate(RunArgs),
    /// Cauchy-kernel reconstruction inside a tube strip.
    Cauchy(RunArgs),
    /// Print what a mode checks and the conventions it uses.
    Describe { mode: String },
}

fn run(mode: Mode, args: RunArgs) -> Result<i32, RunError> {
    let mut inv = Invocation::from_file(mode, &args.config)?;
    inv.seed = args.seed;
    inv.tol = args.tol;
    let out_dir = args.out.or_else(|| inv.config.out.clone()).unwrap_or_else(|| PathBuf::from("modloc-out"));
    let outcome = execute(&inv)?;
    outcome.write(&out_dir)?;
    for c in &outcome.checks {
        let tag = if c.pass { "PASS" } else { "FAIL" };
        if c.relation == "==" {
            println!("{tag} {}", c.name);
        } else {
            println!("{tag} {} = {:e} ({} {:e})", c.name, c.value, c.relation, c.bound);
        }
    }
    println!("{}: {} -> {}", mode.name(), if outcome.pass { "pass" } else { "fail" }, out_dir.join("report.json").display());
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match modloc::threads_from_env() {
        Ok(Some(n)) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                eprintln!("error: thread pool: {e}");
                return ExitCode::from(1);
            }
        }
        Ok(None) => {}
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match cli.command {
        Command::Describe { mode } => describe(&mode).map(|text| {
            print!("{text}");
            0
        }),
        Command::Tomita(a) => run(Mode::Tomita, a),
        Command::Localize(a) => run(Mode::Localize, a),
        Command::Boundary(a) => run(Mode::Boundary, a),
        Command::Pws(a) => run(Mode::Pws, a),
        Command::Hormander(a) => run(Mode::Hormander, a),
        Command::Epstein(a) => run(Mode::Epstein, a),
        Command::SupportEstimate(a) => run(Mode::SupportEstimate, a),
        Command::Cauchy(a) => run(Mode::Cauchy, a),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
