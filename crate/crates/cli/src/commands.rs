use std::fs;
use std::path::{Path, PathBuf};

use folforge::corpus::{self, ColumnMap, ParallelPair, Side};
use folforge::fol::{parse, render, Style, Syntax};
use folforge::generator::{generate_corpus, GenerateError, GenerationConfig, Grammar, GrammarChoice};
use folforge::lexicalizer::{lexicalize as lexicalize_formula, rewrite_symbols, SymbolMap, Vocabulary};
use folforge::metrics::{evaluate as score_pairs, BleuConfig};
use folforge::translator::translate as translate_formula;
use folforge::StatsReport;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::output::{
    data, emit, jsonl, manifest_path, pretty_json, read_jsonl, write_atomic, CliError, RunManifest,
};
use crate::{
    EvaluateArgs, GenerateArgs, GrammarArg, LexicalizeArgs, PreprocessArgs, SideArg, StatsArgs,
    TranslateArgs,
};

struct Run {
    subcommand: &'static str,
    argv: Vec<String>,
    started_at: String,
}

impl Run {
    fn start(subcommand: &'static str, argv: Vec<String>) -> Self {
        Self {
            subcommand,
            argv,
            started_at: chrono::Utc::now().to_rfc3339(),
        }
    }

    /// Writes `<output>.manifest.json` next to a file output, or `manifest.json`
    /// inside a directory output.
    fn finish(
        self,
        config: &impl Serialize,
        seed: Option<u64>,
        inputs: &[PathBuf],
        outputs: Vec<PathBuf>,
        manifest_at: PathBuf,
    ) -> Result<(), CliError> {
        let manifest = RunManifest {
            subcommand: self.subcommand,
            argv: self.argv,
            config: serde_json::to_value(config).map_err(data)?,
            seed,
            inputs: inputs.to_vec(),
            outputs,
            tool_version: env!("CARGO_PKG_VERSION"),
            started_at: self.started_at,
        };
        write_atomic(&manifest_at, &pretty_json(&manifest))
    }
}

fn single_output(
    run: Run,
    config: &impl Serialize,
    seed: Option<u64>,
    inputs: &[PathBuf],
    output: Option<&Path>,
    bytes: &[u8],
) -> Result<(), CliError> {
    emit(output, bytes)?;
    match output {
        Some(p) => run.finish(config, seed, inputs, vec![p.to_path_buf()], manifest_path(p)),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct GeneratedRecord<'a> {
    id: usize,
    fol: &'a str,
    qd: usize,
    depth: usize,
    grammar: Grammar,
}

pub fn generate(args: &GenerateArgs, argv: Vec<String>) -> Result<(), CliError> {
    let run = Run::start("generate", argv);
    if args.min_depth > args.max_depth {
        return Err(CliError::Usage(format!(
            "--min-depth ({}) must not exceed --max-depth ({})",
            args.min_depth, args.max_depth
        )));
    }
    let cfg = GenerationConfig {
        grammar: match args.grammar {
            GrammarArg::Standard => GrammarChoice::Standard,
            GrammarArg::Nested => GrammarChoice::Nested,
            GrammarArg::Both => GrammarChoice::Both,
        },
        min_depth: args.min_depth,
        max_depth: args.max_depth,
        count: args.count,
        seed: args.seed,
        min_qd: args.min_qd,
        max_qd: args.max_qd,
    };
    let corpus = generate_corpus(&cfg).map_err(|e| match e {
        GenerateError::ExhaustedSampling(_) => data(e),
        _ => CliError::Usage(e.to_string()),
    })?;
    let records: Vec<GeneratedRecord> = corpus
        .iter()
        .map(|g| GeneratedRecord {
            id: g.id,
            fol: &g.text,
            qd: g.quantifier_depth,
            depth: g.structural_depth,
            grammar: g.grammar,
        })
        .collect();
    single_output(run, args, Some(args.seed), &[], args.output.as_deref(), &jsonl(&records))
}

#[derive(Serialize)]
struct LexicalRecord {
    id: Value,
    fol: String,
    fol_lexical: String,
    model_input: String,
}

fn record_id(record: &Map<String, Value>, index: usize) -> Value {
    record.get("id").cloned().unwrap_or_else(|| Value::from(index))
}

fn string_field<'a>(
    record: &'a Map<String, Value>,
    names: &[&str],
    path: &Path,
    index: usize,
) -> Result<&'a str, CliError> {
    names
        .iter()
        .find_map(|n| record.get(*n).and_then(Value::as_str))
        .ok_or_else(|| {
            CliError::Data(format!(
                "{}: record {}: missing string field `{}`",
                path.display(),
                index + 1,
                names.join("` or `")
            ))
        })
}

pub fn lexicalize(args: &LexicalizeArgs, argv: Vec<String>) -> Result<(), CliError> {
    let run = Run::start("lexicalize", argv);
    let vocab = match &args.vocab {
        Some(p) => Vocabulary::from_path(p).map_err(data)?,
        None => Vocabulary::builtin(),
    };
    let symbols = SymbolMap::default();
    let input: Vec<Map<String, Value>> = read_jsonl(&args.input)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut out = Vec::with_capacity(input.len());
    for (i, record) in input.iter().enumerate() {
        let at = |e: &dyn std::fmt::Display| {
            CliError::Data(format!("{}: record {}: {e}", args.input.display(), i + 1))
        };
        let fol = string_field(record, &["fol"], &args.input, i)?;
        let formula = parse(fol, Syntax::Either).map_err(|e| at(&e))?;
        let lexical = lexicalize_formula(&formula, &vocab, &mut rng).map_err(|e| at(&e))?;
        let fol_lexical = render(&lexical, Style::Symbolic);
        let model_input = rewrite_symbols(&fol_lexical, &symbols).map_err(|e| at(&e))?;
        out.push(LexicalRecord {
            id: record_id(record, i),
            fol: render(&formula, Style::Symbolic),
            fol_lexical,
            model_input,
        });
    }
    let inputs = [args.input.clone()];
    single_output(run, args, Some(args.seed), &inputs, args.output.as_deref(), &jsonl(&out))
}

#[derive(Serialize)]
struct RejectRecord<'a> {
    input: &'a Path,
    line: usize,
    reason: &'a str,
}

pub fn preprocess(args: &PreprocessArgs, argv: Vec<String>) -> Result<(), CliError> {
    let run = Run::start("preprocess", argv);
    let columns: ColumnMap = match &args.columns {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| data(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| data(format!("{}: {e}", p.display())))?
        }
        None => ColumnMap::default(),
    };
    let mut records = Vec::new();
    let mut rejects_out = Vec::new();
    let mut ingested = Vec::new();
    for path in &args.input {
        ingested.push(corpus::ingest(path, &columns).map_err(|e| data(format!("{}: {e}", path.display())))?);
    }
    for (path, ing) in args.input.iter().zip(&ingested) {
        for w in &ing.warnings {
            eprintln!("warning: {}: {w}", path.display());
        }
        for r in &ing.rejects {
            rejects_out.push(RejectRecord {
                input: path,
                line: r.line,
                reason: &r.reason,
            });
        }
        records.extend(ing.records.iter().cloned());
    }
    let pairs = corpus::extract_pairs(&records);
    let (train, validation) = corpus::split(&pairs, args.ratio, args.seed).map_err(data)?;

    fs::create_dir_all(&args.output).map_err(|e| data(format!("{}: {e}", args.output.display())))?;
    let files = [
        ("train.jsonl", jsonl(&train)),
        ("validation.jsonl", jsonl(&validation)),
        ("rejects.jsonl", jsonl(&rejects_out)),
    ];
    let mut outputs = Vec::new();
    for (name, bytes) in &files {
        let path = args.output.join(name);
        write_atomic(&path, bytes)?;
        outputs.push(path);
    }
    eprintln!(
        "{} records, {} rejects, {} pairs: {} train / {} validation",
        records.len(),
        rejects_out.len(),
        pairs.len(),
        train.len(),
        validation.len()
    );
    run.finish(args, Some(args.seed), &args.input, outputs, args.output.join("manifest.json"))
}

#[derive(Serialize)]
struct CandidateRecord<'a> {
    id: Value,
    candidate: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference: Option<&'a str>,
}

pub fn translate(args: &TranslateArgs, argv: Vec<String>) -> Result<(), CliError> {
    let run = Run::start("translate", argv);
    let input: Vec<Map<String, Value>> = read_jsonl(&args.input)?;
    let mut out = Vec::with_capacity(input.len());
    for (i, record) in input.iter().enumerate() {
        let at = |e: &dyn std::fmt::Display| {
            CliError::Data(format!("{}: record {}: {e}", args.input.display(), i + 1))
        };
        let fol = string_field(record, &["fol_lexical", "fol"], &args.input, i)?;
        let formula = parse(fol, Syntax::Either).map_err(|e| at(&e))?;
        let candidate = translate_formula(&formula).map_err(|e| at(&e))?;
        let reference = match &args.reference_field {
            Some(field) => Some(string_field(record, &[field.as_str()], &args.input, i)?),
            None => None,
        };
        out.push(CandidateRecord {
            id: record_id(record, i),
            candidate,
            reference,
        });
    }
    let inputs = [args.input.clone()];
    single_output(run, args, None, &inputs, args.output.as_deref(), &jsonl(&out))
}

#[derive(Deserialize)]
struct Prediction {
    id: Value,
    candidate: String,
    reference: String,
}

#[derive(Serialize)]
struct PairRow<'a> {
    id: &'a Value,
    edit_distance: usize,
    normalized_score: f64,
    bleu: f64,
}

#[derive(Serialize)]
struct Summary {
    avg_distance: String,
    avg_score: String,
    avg_bleu: String,
}

#[derive(Serialize)]
struct EvaluationReport<'a> {
    max_order: usize,
    epsilon: f64,
    n_pairs: usize,
    excluded_ids: Vec<&'a Value>,
    avg_distance: f64,
    avg_score: f64,
    avg_bleu: f64,
    /// The averages at two decimals, as usually tabulated.
    summary: Summary,
    per_pair: Vec<PairRow<'a>>,
}

pub fn evaluate(args: &EvaluateArgs, argv: Vec<String>) -> Result<(), CliError> {
    let run = Run::start("evaluate", argv);
    let config = BleuConfig::<f64>::new(args.max_order as usize, args.epsilon)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let predictions: Vec<Prediction> = read_jsonl(&args.input)?;
    let pairs: Vec<(&str, &str)> = predictions
        .iter()
        .map(|p| (p.candidate.as_str(), p.reference.as_str()))
        .collect();
    let report = score_pairs(&pairs, &config)
        .map_err(|e| data(format!("{}: {e}", args.input.display())))?;
    let summary = Summary {
        avg_distance: format!("{:.2}", report.avg_distance),
        avg_score: format!("{:.2}", report.avg_score),
        avg_bleu: format!("{:.2}", report.avg_bleu),
    };
    eprintln!(
        "pairs {}  edit distance {}  score {}  BLEU {}",
        report.n_pairs, summary.avg_distance, summary.avg_score, summary.avg_bleu
    );
    let out = EvaluationReport {
        max_order: config.max_order,
        epsilon: config.epsilon,
        n_pairs: report.n_pairs,
        excluded_ids: report.excluded.iter().map(|&i| &predictions[i].id).collect(),
        avg_distance: report.avg_distance,
        avg_score: report.avg_score,
        avg_bleu: report.avg_bleu,
        summary,
        per_pair: report
            .per_pair
            .iter()
            .map(|p| PairRow {
                id: &predictions[p.index].id,
                edit_distance: p.edit_distance,
                normalized_score: p.normalized_score,
                bleu: p.bleu,
            })
            .collect(),
    };
    let inputs = [args.input.clone()];
    single_output(run, args, None, &inputs, args.output.as_deref(), &pretty_json(&out))
}

pub fn stats(args: &StatsArgs, argv: Vec<String>) -> Result<(), CliError> {
    let run = Run::start("stats", argv);
    let [train_path, validation_path] = args.input.as_slice() else {
        return Err(CliError::Usage(format!(
            "--input must be given exactly twice (train, then validation), got {}",
            args.input.len()
        )));
    };
    let train: Vec<ParallelPair> = read_jsonl(train_path)?;
    let validation: Vec<ParallelPair> = read_jsonl(validation_path)?;
    if train.is_empty() || validation.is_empty() {
        return Err(CliError::Data("both splits must contain at least one pair".into()));
    }
    let sides: &[Side] = match args.side {
        SideArg::Fol => &[Side::Fol],
        SideArg::Ns => &[Side::Ns],
        SideArg::Both => &[Side::Fol, Side::Ns],
    };
    let reports: Vec<StatsReport> = sides
        .iter()
        .map(|&side| corpus::split_stats(&train, &validation, side, args.top_k))
        .collect();
    for r in &reports {
        eprintln!("{:?}: KL(P||Q) {:.4}  KL(Q||P) {:.4}", r.side, r.kl_pq, r.kl_qp);
    }
    single_output(run, args, None, &args.input, args.output.as_deref(), &pretty_json(&reports))
}
