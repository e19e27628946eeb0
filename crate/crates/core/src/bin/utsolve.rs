use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use utsolve::cli::{self, OracleOptions, Output, EXIT_ERROR};
use utsolve::EmbeddingKind;

#[derive(Parser)]
#[command(
    name = "utsolve",
    version,
    about = "Solve regular equations over UT_n(F_p)"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the equation in UT_m(F_p) and verify the result
    Solve {
        file: PathBuf,
        /// Print the per-level correction log
        #[arg(long)]
        trace: bool,
    },
    /// Print the collected form x^eps * u(1) * v(x)
    Normalize { file: PathBuf },
    /// Print the image of every coefficient matrix
    Embed {
        file: PathBuf,
        #[arg(long, default_value = "phi")]
        kind: EmbeddingKind,
        #[arg(long, default_value_t = 1)]
        s: u32,
    },
    /// Check a candidate solution by substitution
    Verify {
        file: PathBuf,
        #[arg(long)]
        candidate: PathBuf,
        #[arg(long)]
        kind: Option<EmbeddingKind>,
    },
    /// Search for a solution by enumeration
    Oracle {
        file: PathBuf,
        /// Search in UT_{(n-1)p^s+1} under the embedding instead of UT_n
        #[arg(long)]
        s: Option<u32>,
        #[arg(long, default_value = "phi")]
        kind: EmbeddingKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = utsolve::oracle::DEFAULT_CAP)]
        cap: u64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
    },
}

fn read(path: &Path) -> Result<String, Output> {
    std::fs::read_to_string(path).map_err(|e| Output {
        code: EXIT_ERROR,
        stdout: String::new(),
        stderr: format!("{}: {e}\n", path.display()),
    })
}

fn run(command: Command) -> Result<Output, Output> {
    Ok(match command {
        Command::Solve { file, trace } => cli::solve(&read(&file)?, trace),
        Command::Normalize { file } => cli::normalize(&read(&file)?),
        Command::Embed { file, kind, s } => cli::embed(&read(&file)?, kind, s),
        Command::Verify {
            file,
            candidate,
            kind,
        } => cli::verify(&read(&file)?, &read(&candidate)?, kind),
        Command::Oracle {
            file,
            s,
            kind,
            seed,
            cap,
            trials,
        } => cli::oracle(
            &read(&file)?,
            OracleOptions {
                s,
                kind,
                seed,
                cap,
                trials,
            },
        ),
    })
}

fn main() -> ExitCode {
    let args = Args::parse();
    let out = run(args.command).unwrap_or_else(|e| e);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
