//! Command-line front end. Exit codes: 0 success, 1 a checked property failed
//! (the witness is in the report), 2 input error, 3 cap exceeded.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

pub use config::{load_config, parse_config, resolve, ConfigFile, Format, Overrides, RunConfig};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "f2lab", version, about = "Exact experiments on F2 polynomials and local sources")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    group: Group,
}

#[derive(Args, Debug, Clone)]
struct GlobalArgs {
    /// Run seed; echoed into every report
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest variable count for truth tables
    #[arg(long, global = true)]
    cap_table: Option<usize>,
    /// Largest number of enumerated seed bits
    #[arg(long, global = true)]
    cap_dist: Option<usize>,
    /// Largest family or scan size
    #[arg(long, global = true)]
    cap_family: Option<u64>,
    /// Largest number of weight-search candidates
    #[arg(long, global = true)]
    cap_weight: Option<u64>,
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// JSON config file; flags win over it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand, Debug)]
enum Group {
    /// Polynomial arithmetic
    #[command(subcommand)]
    Poly(commands::PolyCmd),
    /// Polynomial systems and low-weight solutions
    #[command(subcommand)]
    Cw(commands::CwCmd),
    /// Local monochromatic subspaces
    #[command(subcommand)]
    Subspace(commands::SubspaceCmd),
    /// Local sources to NOBF mixtures
    #[command(subcommand)]
    Reduce(commands::ReduceCmd),
    /// Censuses, surveys and codes
    #[command(subcommand)]
    Lab(commands::LabCmd),
    /// The clique set
    #[command(subcommand)]
    Barrier(commands::BarrierCmd),
}

/// What a command produced.
pub struct Outcome {
    pub name: &'static str,
    /// One-line human summary.
    pub text: String,
    pub result: Value,
    /// Row form, for commands that have one.
    pub csv: Option<String>,
    pub violated: bool,
}

impl Outcome {
    fn new(name: &'static str, text: impl Into<String>, result: Value) -> Self {
        Outcome {
            name,
            text: text.into(),
            result,
            csv: None,
            violated: false,
        }
    }

    fn violated_if(mut self, v: bool) -> Self {
        self.violated = v;
        self
    }
}

/// The JSON report: command, resolved configuration and result.
pub fn report_json(cfg: &RunConfig, outcome: &Outcome) -> Value {
    json!({
        "command": outcome.name,
        "config": cfg,
        "violated": outcome.violated,
        "result": outcome.result,
    })
}

fn exit_for(e: &Error) -> i32 {
    if e.is_cap() {
        EXIT_CAP
    } else {
        EXIT_INPUT
    }
}

/// Parse `argv` (program name first), run, write the report and return the exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let g = &cli.global;
    let flags = Overrides {
        seed: g.seed,
        cap_table: g.cap_table,
        cap_dist: g.cap_dist,
        cap_family: g.cap_family,
        cap_weight: g.cap_weight,
        workers: g.workers,
        out: g.out.clone(),
        format: g.format,
        verbosity: g.verbose,
    };
    let cfg = match load_config(g.config.as_deref(), &flags) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let run = || commands::run(&cli.group, &cfg);
    let result = match cfg.workers {
        Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w).build() {
            Ok(pool) => pool.install(run),
            Err(e) => {
                eprintln!("error: cannot start {w} workers: {e}");
                return EXIT_INPUT;
            }
        },
        None => run(),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_for(&e);
        }
    };
    let body = match cfg.format {
        Format::Text => format!("{}\n", outcome.text),
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&report_json(&cfg, &outcome)).expect("json")),
        Format::Csv => match &outcome.csv {
            Some(c) => c.clone(),
            None => {
                eprintln!("error: `{}` has no CSV form", outcome.name);
                return EXIT_INPUT;
            }
        },
    };
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, body.as_bytes()),
        None => std::io::stdout().write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return EXIT_INPUT;
    }
    if cfg.verbosity > 0 && cfg.out.is_some() {
        eprintln!("{}", outcome.text);
    }
    if outcome.violated {
        EXIT_VIOLATED
    } else {
        EXIT_OK
    }
}
