use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use goppa_census::Error;

mod commands;
mod report;

#[derive(Parser)]
#[command(name = "goppa-census", version, about = "Bounds on inequivalent irreducible Goppa codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form N(q,r) and N_e(q,r) with the per-divisor breakdown.
    Bound(BoundArgs),
    /// Brute-force orbit counts.
    Oracle(OracleArgs),
    /// Closed forms against the oracle, divisor by divisor.
    Verify(VerifyArgs),
    /// The reference comparison rows, plus any rows given with --row.
    Table(TableArgs),
    /// Build one Goppa code and optionally check the induced permutations.
    Goppa(GoppaArgs),
}

#[derive(Args, Clone)]
pub struct FieldArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub t: u32,
    #[arg(long)]
    pub r: u32,
}

#[derive(Args, Clone)]
pub struct Common {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for oracle runs; defaults to all cores.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Partition,
    Stream,
    Auto,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum ScopeArg {
    Transversal,
    Full,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum LadderArg {
    Exact,
    Published,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Trust {
    Formula,
    Oracle,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum SubfieldArg {
    Prime,
    Base,
}

#[derive(Args, Clone)]
pub struct OracleOpts {
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    pub mode: Mode,
    /// Largest field (q^r elements) handled in partition mode.
    #[arg(long, default_value_t = 1 << 22)]
    pub partition_cap: u64,
    /// Largest number of elements a streaming run may visit.
    #[arg(long)]
    pub element_budget: Option<u64>,
    /// Elements visited in stream mode.
    #[arg(long, value_enum, default_value_t = ScopeArg::Transversal)]
    pub scope: ScopeArg,
}

#[derive(Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = LadderArg::Exact)]
    pub ladder: LadderArg,
}

#[derive(Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub opts: OracleOpts,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub opts: OracleOpts,
    #[arg(long, value_enum, default_value_t = LadderArg::Exact)]
    pub ladder: LadderArg,
    /// Source of the summary N and Ne.
    #[arg(long, value_enum, default_value_t = Trust::Formula)]
    pub trust: Trust,
}

#[derive(Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub common: Common,
    /// Extra row as p,t,r; may be repeated.
    #[arg(long = "row", value_parser = parse_row)]
    pub rows: Vec<(u64, u32, u32)>,
}

#[derive(Args)]
pub struct GoppaArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub common: Common,
    /// Position of α among the elements of degree r, in enumeration order.
    #[arg(long, default_value_t = 0, conflicts_with = "alpha_field_index")]
    pub alpha_index: u64,
    /// Position of α in the enumeration of the whole field; must have degree r.
    #[arg(long)]
    pub alpha_field_index: Option<u64>,
    /// Number of sampled Type-1/Type-2 maps to check.
    #[arg(long, default_value_t = 0)]
    pub check_maps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = SubfieldArg::Prime)]
    pub subfield: SubfieldArg,
}

fn parse_row(s: &str) -> Result<(u64, u32, u32), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [p, t, r] = parts.as_slice() else {
        return Err(format!("expected p,t,r, got {s:?}"));
    };
    let bad = |e: std::num::ParseIntError| e.to_string();
    Ok((p.parse().map_err(bad)?, t.parse().map_err(bad)?, r.parse().map_err(bad)?))
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Invalid = 2,
    Mismatch = 3,
    Budget = 4,
}

pub fn status_of(err: &Error) -> Status {
    match err {
        Error::CapExceeded { .. } => Status::Budget,
        Error::IntegralityViolation { .. } | Error::InexactDivision { .. } => Status::Mismatch,
        _ => Status::Invalid,
    }
}

fn configure_threads(common: &Common) {
    if let Some(n) = common.threads {
        // a second build only fails if a pool already exists, which is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let common = match &cli.command {
        Command::Bound(a) => &a.common,
        Command::Oracle(a) => &a.common,
        Command::Verify(a) => &a.common,
        Command::Table(a) => &a.common,
        Command::Goppa(a) => &a.common,
    };
    configure_threads(common);
    let result = match &cli.command {
        Command::Bound(a) => commands::bound(a),
        Command::Oracle(a) => commands::oracle(a),
        Command::Verify(a) => commands::verify(a),
        Command::Table(a) => commands::table(a),
        Command::Goppa(a) => commands::goppa(a),
    };
    let status = match result {
        Ok((out, status)) => {
            print!("{out}");
            status
        }
        Err(e) => {
            eprintln!("error: {e}");
            status_of(&e)
        }
    };
    eprintln!("elapsed: {:.3}s", started.elapsed().as_secs_f64());
    ExitCode::from(status as u8)
}
