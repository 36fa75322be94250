use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use gausskit::cli::{execute, Overrides, EXIT_MALFORMED};

/// Gaussian-state toolkit: reads one JSON command envelope and prints one
/// JSON document.
#[derive(Parser)]
#[command(name = "gausskit", version)]
struct Args {
    /// Envelope file; standard input when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Replace every tolerance with this value.
    #[arg(long)]
    tol: Option<f64>,
    /// Seed for sampling commands.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match &args.input {
        Some(path) => std::fs::read_to_string(path),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map(|_| s)
        }
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => {
            eprintln!("gausskit: cannot read input: {e}");
            return ExitCode::from(EXIT_MALFORMED as u8);
        }
    };
    let out = execute(&text, Overrides { tol: args.tol, seed: args.seed });
    print!("{}", out.stdout);
    if let Some(msg) = out.stderr {
        eprintln!("gausskit: {msg}");
    }
    ExitCode::from(out.code as u8)
}
