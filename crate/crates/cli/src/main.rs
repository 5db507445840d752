//! `folforge`: generate, lexicalize, preprocess, translate, evaluate, stats.
//!
//! Exit status: 0 on success, 1 on usage errors, 2 on data errors.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::output::CliError;

/// Used when neither `--seed` nor `FOLFORGE_SEED` is given.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "folforge", version, about = "First-order logic corpus synthesis and evaluation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample unique abstract formulas as JSONL.
    Generate(GenerateArgs),
    /// Substitute vocabulary predicates and entities into abstract formulas.
    Lexicalize(LexicalizeArgs),
    /// Extract FOL/sentence pairs from FOLIO-style records and split them.
    Preprocess(PreprocessArgs),
    /// Rule-based English rendering of lexicalized formulas.
    Translate(TranslateArgs),
    /// Score candidate sentences against references.
    Evaluate(EvaluateArgs),
    /// Token frequencies and KL divergence between train and validation.
    Stats(StatsArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GrammarArg {
    Standard,
    Nested,
    Both,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SideArg {
    Fol,
    Ns,
    Both,
}

#[derive(Debug, Args, Serialize)]
pub struct GenerateArgs {
    #[arg(long, value_enum, default_value_t = GrammarArg::Both)]
    pub grammar: GrammarArg,
    #[arg(long, default_value_t = 4)]
    pub min_depth: usize,
    #[arg(long, default_value_t = 10)]
    pub max_depth: usize,
    #[arg(long, default_value_t = 3071)]
    pub count: usize,
    #[arg(long, env = "FOLFORGE_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Lower bound on quantifier depth.
    #[arg(long)]
    pub min_qd: Option<usize>,
    /// Upper bound on quantifier depth.
    #[arg(long)]
    pub max_qd: Option<usize>,
    /// JSONL destination; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct LexicalizeArgs {
    /// JSONL with a `fol` field per line, e.g. the output of `generate`.
    #[arg(long)]
    pub input: PathBuf,
    /// Vocabulary TOML; the built-in vocabulary when absent.
    #[arg(long)]
    pub vocab: Option<PathBuf>,
    #[arg(long, env = "FOLFORGE_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct PreprocessArgs {
    /// FOLIO-style JSONL or JSON array; repeat to merge several files.
    #[arg(long, required = true)]
    pub input: Vec<PathBuf>,
    /// Directory receiving train.jsonl, validation.jsonl and rejects.jsonl.
    #[arg(long)]
    pub output: PathBuf,
    /// Training share of the shuffled pairs.
    #[arg(long, default_value_t = 0.8, value_parser = parse_ratio)]
    pub ratio: f64,
    #[arg(long, env = "FOLFORGE_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// JSON object renaming the source columns
    /// (`premises`, `premises_fol`, `conclusion`, `conclusion_fol`).
    #[arg(long)]
    pub columns: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct TranslateArgs {
    /// JSONL with `fol_lexical` (or `fol`) per line.
    #[arg(long)]
    pub input: PathBuf,
    /// Copy this input field into each record's `reference`.
    #[arg(long)]
    pub reference_field: Option<String>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct EvaluateArgs {
    /// JSONL with `id`, `candidate` and `reference` per line.
    #[arg(long)]
    pub input: PathBuf,
    /// Report JSON destination; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_order: u32,
    #[arg(long, default_value_t = 1e-3, value_parser = parse_epsilon)]
    pub epsilon: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct StatsArgs {
    /// The training split, then the validation split (`{"fol", "ns"}` JSONL).
    #[arg(long, required = true, num_args = 1)]
    pub input: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = SideArg::Both)]
    pub side: SideArg,
    #[arg(long, default_value_t = 20)]
    pub top_k: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn parse_ratio(s: &str) -> Result<f64, String> {
    let r: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if r > 0.0 && r < 1.0 {
        Ok(r)
    } else {
        Err("must lie strictly between 0 and 1".into())
    }
}

fn parse_epsilon(s: &str) -> Result<f64, String> {
    let e: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if e > 0.0 && e.is_finite() {
        Ok(e)
    } else {
        Err("must be a positive number".into())
    }
}

fn run(cli: Cli, argv: Vec<String>) -> Result<(), CliError> {
    match cli.command {
        Command::Generate(a) => commands::generate(&a, argv),
        Command::Lexicalize(a) => commands::lexicalize(&a, argv),
        Command::Preprocess(a) => commands::preprocess(&a, argv),
        Command::Translate(a) => commands::translate(&a, argv),
        Command::Evaluate(a) => commands::evaluate(&a, argv),
        Command::Stats(a) => commands::stats(&a, argv),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli, argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
