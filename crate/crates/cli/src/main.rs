//! `zerodiv` command-line front end.
//!
//! Every command prints either text or (with `--json`) one JSON document of
//! the form `{"schema": 1, "command", "status", "payload", "diagnostics"}`.
//! Exit status: 0 ok, 1 error, 2 undecided or usage error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

#[derive(Parser, Debug)]
#[command(name = "zerodiv", version, about = "Exact zero divisors and totally reflexive modules over short graded algebras")]
pub struct Cli {
    /// Print a single JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: available parallelism; 1 is fully sequential).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Facts about an algebra.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Exact zero divisors.
    #[command(subcommand)]
    Ezd(EzdCmd),
    /// Families built from bidiagonal presentations.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Finitely presented modules.
    #[command(subcommand)]
    Module(ModuleCmd),
    /// Random quadratic algebras.
    #[command(subcommand)]
    Generic(GenericCmd),
}

#[derive(Subcommand, Debug)]
pub enum AlgebraCmd {
    /// Hilbert series, embedding dimension, socle, Gorenstein and short flags.
    Info { file: PathBuf },
}

#[derive(Args, Debug)]
pub struct ElemArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub elem: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    All,
    Proj,
}

#[derive(Subcommand, Debug)]
pub enum EzdCmd {
    /// Decide whether an element is an exact zero divisor.
    Check(ElemArgs),
    /// Scan the maximal ideal (or linear forms up to scalars).
    Scan {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        mode: ModeArg,
        #[arg(long, default_value_t = zerodiv::ezd::DEFAULT_SCAN_BUDGET)]
        budget: u64,
    },
    /// Partner from the signed maximal minors of the multiplication matrix.
    Minors(ElemArgs),
    /// Whether the element generates its own annihilator.
    Conca(ElemArgs),
}

#[derive(Subcommand, Debug)]
pub enum FamilyCmd {
    /// Build M_n(w,x,y,z) for a range of n.
    Build {
        file: PathBuf,
        #[arg(long)]
        w: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        z: String,
        /// Range `A..B` (inclusive) or a single `N`.
        #[arg(long)]
        n: String,
    },
    /// The family M_n(w, x, λy + y', z) over a list of λ.
    Bt2 {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        w: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        yprime: String,
        #[arg(long)]
        z: String,
        /// `all` (every field element) or a comma-separated list.
        #[arg(long, default_value = "all")]
        lambdas: String,
    },
    /// An element z of ann(y) outside (x) + m^2.
    Findz {
        file: PathBuf,
        #[arg(long)]
        w: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Search data (y, y', z) for the parameter family.
    Finddata {
        file: PathBuf,
        #[arg(long)]
        w: String,
        #[arg(long)]
        x: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum ModuleCmd {
    /// Length, generators, and optional Betti/indecomposability/reflexivity checks.
    Info {
        file: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        betti: Option<usize>,
        #[arg(long)]
        indec: bool,
        /// Resolve this many steps to check total reflexivity.
        #[arg(long)]
        tr: Option<usize>,
    },
    /// Decide whether two modules are isomorphic.
    Iso {
        file: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        matrix2: PathBuf,
    },
    /// Pushout of the syzygy sequence along multiplication by x^j.
    Pushout {
        file: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        elem: String,
        #[arg(long)]
        power: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum GenericCmd {
    /// Sample random quadratic algebras and count exact zero divisors.
    Sample {
        #[arg(long)]
        e: usize,
        #[arg(long)]
        field: String,
        #[arg(long)]
        trials: u64,
        /// Include one record per trial.
        #[arg(long)]
        log: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Error,
    Undecided,
}

#[derive(Debug, Serialize)]
pub struct CommandResult {
    pub schema: u32,
    pub command: String,
    pub status: Status,
    pub payload: Value,
    pub diagnostics: Vec<String>,
}

/// Text rendering plus the structured payload of a successful command.
pub struct Output {
    pub payload: Value,
    pub text: String,
    pub diagnostics: Vec<String>,
}

impl Output {
    pub fn ok(payload: Value, text: String) -> Self {
        Output {
            payload,
            text,
            diagnostics: Vec::new(),
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Algebra(AlgebraCmd::Info { .. }) => "algebra info",
        Command::Ezd(EzdCmd::Check(_)) => "ezd check",
        Command::Ezd(EzdCmd::Scan { .. }) => "ezd scan",
        Command::Ezd(EzdCmd::Minors(_)) => "ezd minors",
        Command::Ezd(EzdCmd::Conca(_)) => "ezd conca",
        Command::Family(FamilyCmd::Build { .. }) => "family build",
        Command::Family(FamilyCmd::Bt2 { .. }) => "family bt2",
        Command::Family(FamilyCmd::Findz { .. }) => "family findz",
        Command::Family(FamilyCmd::Finddata { .. }) => "family finddata",
        Command::Module(ModuleCmd::Info { .. }) => "module info",
        Command::Module(ModuleCmd::Iso { .. }) => "module iso",
        Command::Module(ModuleCmd::Pushout { .. }) => "module pushout",
        Command::Generic(GenericCmd::Sample { .. }) => "generic sample",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.threads {
        if k == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .expect("thread pool is configured once");
    }
    let name = command_name(&cli.command);
    let (status, code, payload, text, diagnostics) = match commands::run(&cli.command, cli.seed) {
        Ok(out) => (Status::Ok, 0, out.payload, out.text, out.diagnostics),
        Err(err) => {
            let status = err.status();
            let payload = serde_json::json!({ "error": err.kind(), "message": err.to_string() });
            let label = if status == Status::Undecided { "undecided" } else { "error" };
            (status, err.exit_code(), payload, format!("{label}: {err}"), Vec::new())
        }
    };
    if cli.json {
        let result = CommandResult {
            schema: 1,
            command: name.into(),
            status,
            payload,
            diagnostics,
        };
        println!("{}", serde_json::to_string_pretty(&result).expect("serializable"));
    } else if status == Status::Ok {
        println!("{text}");
        for d in &diagnostics {
            eprintln!("note: {d}");
        }
    } else {
        eprintln!("{text}");
    }
    ExitCode::from(code)
}
