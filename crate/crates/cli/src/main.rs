use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use parastab::exactnum::FieldSpec;
use parastab_cli::schema::JobKind;
use parastab_cli::{run, Failure, Mode, Options};

/// Exact parabolic stability, HN/JH, GIT and fine-moduli computations.
#[derive(Parser, Debug)]
#[command(name = "parastab", version)]
struct Args {
    kind: JobKind,
    /// Job file (JSON).
    #[arg(long = "in")]
    input: PathBuf,
    /// Report destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Enumeration budget; overrides PARASTAB_BUDGET.
    #[arg(long)]
    budget: Option<u64>,
    /// `q` or `p=<prime>`; overrides the field in the job file.
    #[arg(long)]
    field: Option<FieldSpec>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
}

fn budget(arg: Option<u64>) -> Result<u64, Failure> {
    if let Some(b) = arg {
        return Ok(b);
    }
    match std::env::var("PARASTAB_BUDGET") {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::schema(Some("PARASTAB_BUDGET".into()), format!("not a non-negative integer: {v:?}"))
        }),
        Err(_) => Ok(parastab::DEFAULT_BUDGET),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = std::fs::read_to_string(&args.input)
        .map_err(|e| Failure::schema(None, format!("cannot read {}: {e}", args.input.display())))
        .and_then(|text| {
            let opts = Options {
                budget: budget(args.budget)?,
                field: args.field,
                mode: args.mode,
            };
            run(args.kind, &text, &opts)
        });
    match result {
        Ok(report) => {
            if let Some(path) = &args.out {
                if let Err(e) = std::fs::write(path, &report) {
                    eprintln!("cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{report}");
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprint!("{}", f.to_json());
            ExitCode::from(f.code as u8)
        }
    }
}
