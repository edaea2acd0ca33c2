use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

mod export;
mod report;
mod verify;

use noetherian::xi::PointedPoset;
use noetherian::{build_order, BaseOrder, FiniteOrder, Injection, Mode, OrderSpec};

#[derive(Parser)]
#[command(
    name = "noetherian",
    version,
    about = "Checks and exports for computable orders and their power spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification; exit 0 when every check passes, 1 otherwise.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Write deterministic dumps of the staged order, true stages or chains.
    #[command(subcommand)]
    Export(ExportCmd),
    /// Search for bad sequences.
    #[command(subcommand)]
    Search(SearchCmd),
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Strict descent of the flat chain with its designated separators.
    FlatChain(ChainArgs),
    /// Claims and strict descent of the sharp chain.
    SharpChain(ChainArgs),
    /// Bad prefix -> ascending open chain -> bad prefix.
    RoundTrip(RoundTripArgs),
    /// Translated closed codes against generator domination.
    Translate(TranslateArgs),
    /// Position of each new copy relative to earlier copies.
    CopyPosition(StagedArgs),
    /// Range membership decoded from true stages against a direct scan.
    Decode(DecodeArgs),
}

#[derive(Subcommand)]
enum ExportCmd {
    /// The staged order as DOT or JSON.
    Xi(StagedArgs),
    /// The true-stage sets T_0 .. T_{S-1} as JSON.
    Truestages(InjectionArgs),
    /// Stage generators of a reversal chain as JSON.
    Chain(ExportChainArgs),
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Find a bad prefix of the given length.
    Bad(SearchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PowerMode {
    Flat,
    Sharp,
}

impl From<PowerMode> for Mode {
    fn from(m: PowerMode) -> Mode {
        match m {
            PowerMode::Flat => Mode::Flat,
            PowerMode::Sharp => Mode::Sharp,
        }
    }
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to this path instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InjectionArgs {
    /// JSON file `{"table": [...], "tail_offset": n}`.
    #[arg(long)]
    injection: PathBuf,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    stages: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ChainArgs {
    #[command(flatten)]
    inj: InjectionArgs,
}

#[derive(Args)]
struct StagedArgs {
    #[command(flatten)]
    inj: InjectionArgs,
    /// JSON file `{"elements": n, "le": [[a, b], ...], "point": p}`; defaults
    /// to a single point.
    #[arg(long)]
    poset: Option<PathBuf>,
}

#[derive(Args)]
struct ExportChainArgs {
    #[command(flatten)]
    inj: InjectionArgs,
    #[arg(long, value_enum)]
    mode: PowerMode,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long)]
    injection: PathBuf,
    /// Check every n below this bound.
    #[arg(long, default_value_t = 50)]
    limit: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct OrderArgs {
    /// JSON order spec, e.g. `{"kind": "rado"}`.
    #[arg(long)]
    order: PathBuf,
    /// Work in the Hoare (flat) or Smyth (sharp) order on finite subsets.
    #[arg(long, value_enum)]
    power: Option<PowerMode>,
}

#[derive(Args)]
struct RoundTripArgs {
    #[command(flatten)]
    order: OrderArgs,
    #[arg(long, default_value_t = 10)]
    len: usize,
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    order: OrderArgs,
    #[arg(long)]
    len: usize,
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct TranslateArgs {
    /// A finite order spec.
    #[arg(long)]
    order: PathBuf,
    /// Number of random generator families; 0 checks all families.
    #[arg(long, default_value_t = 0)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// Bad input or unusable output location.
    Config(String),
    /// A check failed; the report has already been written.
    Check,
}

impl Failure {
    fn config(msg: impl std::fmt::Display) -> Self {
        Failure::Config(msg.to_string())
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::config(format!("cannot read {what} {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::config(format!("invalid {what} {}: {e}", path.display())))
}

fn load_injection(path: &Path) -> Result<Injection, Failure> {
    read_json(path, "injection")
}

fn load_order(path: &Path) -> Result<BaseOrder, Failure> {
    let spec: OrderSpec = read_json(path, "order")?;
    build_order(&spec).map_err(Failure::config)
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct PosetSpec {
    elements: usize,
    #[serde(default)]
    le: Vec<[usize; 2]>,
    point: usize,
}

fn load_poset(path: Option<&Path>) -> Result<PointedPoset, Failure> {
    let Some(path) = path else {
        return Ok(PointedPoset::singleton());
    };
    let spec: PosetSpec = read_json(path, "poset")?;
    let edges: Vec<_> = spec.le.iter().map(|&[a, b]| (a, b)).collect();
    let order = FiniteOrder::from_edges(spec.elements, &edges).map_err(Failure::config)?;
    PointedPoset::new(order, spec.point).map_err(Failure::config)
}

/// Writes `text` to the requested destination.
fn emit(output: &Output, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn require_format(output: &Output, allowed: &[Format]) -> Result<(), Failure> {
    if allowed.contains(&output.format) {
        Ok(())
    } else {
        Err(Failure::config(format!(
            "format {:?} is not available here (use one of {allowed:?})",
            output.format
        )))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Verify(cmd) => match cmd {
            VerifyCmd::FlatChain(a) => verify::flat_chain(&a.inj),
            VerifyCmd::SharpChain(a) => verify::sharp_chain(&a.inj),
            VerifyCmd::RoundTrip(a) => verify::round_trip(&a),
            VerifyCmd::Translate(a) => verify::translate(&a),
            VerifyCmd::CopyPosition(a) => verify::copy_position(&a),
            VerifyCmd::Decode(a) => verify::decode(&a),
        },
        Command::Export(cmd) => match cmd {
            ExportCmd::Xi(a) => export::xi(&a),
            ExportCmd::Truestages(a) => export::true_stages(&a),
            ExportCmd::Chain(a) => export::chain(&a),
        },
        Command::Search(SearchCmd::Bad(a)) => export::search_bad(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
