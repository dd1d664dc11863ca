use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use knotvol_cli::{
    mahler_file, run_figures, run_invariants, run_report, run_sw, twisted_summary, CliError,
    Invariant, RunConfig,
};

#[derive(Parser, Debug)]
#[command(version, about = "Knot invariants against hyperbolic volume")]
struct Args {
    #[arg(long, global = true, default_value = "data/census.csv")]
    census: PathBuf,
    /// Directory of representation files (enables the twisted invariants).
    #[arg(long, global = true)]
    reps: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 12)]
    max_crossings: u32,
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[arg(long, global = true, default_value_t = 100)]
    sw_nmax: u32,
    /// Comma-separated invariant names; defaults to all six with --reps and
    /// to the untwisted three without.
    #[arg(long, global = true, value_delimiter = ',')]
    invariants: Vec<Invariant>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Per-knot invariant table (invariants.csv).
    Invariants,
    /// Population tables from invariants.csv.
    Report,
    /// Scatter data from invariants.csv.
    Figures,
    /// Cyclic-cover torsion growth for one knot.
    Sw { knot: String },
    /// Mahler measures of the polynomials in a file.
    Mahler { polyfile: PathBuf },
    /// Twisted Alexander polynomial of one knot.
    Twisted { knot: String },
}

fn config(args: &Args) -> RunConfig {
    let invariants = if !args.invariants.is_empty() {
        args.invariants.clone()
    } else if args.reps.is_some() {
        Invariant::ALL.to_vec()
    } else {
        Invariant::ALL
            .into_iter()
            .filter(|i| !i.needs_rep())
            .collect()
    };
    RunConfig {
        census_path: args.census.clone(),
        rep_dir: args.reps.clone(),
        max_crossings: args.max_crossings,
        invariants,
        output_dir: args.out.clone(),
        thread_count: args.threads,
        sw_nmax: args.sw_nmax,
    }
}

fn run(args: &Args) -> Result<(), CliError> {
    let cfg = config(args);
    cfg.validate()?;
    match &args.command {
        Command::Invariants => {
            let rows = run_invariants(&cfg)?;
            log::info!("wrote {} rows", rows.len());
        }
        Command::Report => run_report(&cfg)?,
        Command::Figures => run_figures(&cfg)?,
        Command::Sw { knot } => {
            let path = run_sw(&cfg, knot)?;
            log::info!("wrote {}", path.display());
        }
        Command::Mahler { polyfile } => {
            let text = std::fs::read_to_string(polyfile).map_err(|source| CliError::Io {
                path: polyfile.clone(),
                source,
            })?;
            print!("{}", mahler_file(&text)?);
        }
        Command::Twisted { knot } => print!("{}", twisted_summary(&cfg, knot)?),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
