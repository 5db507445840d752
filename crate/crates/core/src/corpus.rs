//! Parallel FOL/sentence corpora: ingestion of FOLIO-style record files,
//! per-clause pair extraction with exact de-duplication, seeded
//! train/validation splitting, token statistics and KL divergence.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::real::Real;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("no record has the column `{0}`")]
    Schema(String),
    #[error("the input is not a JSON array of records: {0}")]
    Json(#[from] serde_json::Error),
    #[error("nothing to split")]
    EmptyInput,
    #[error("split ratio must lie strictly between 0 and 1, got {0}")]
    InvalidRatio(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Validation,
    Test,
    #[default]
    Unassigned,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParallelPair {
    pub fol: String,
    pub ns: String,
    #[serde(skip)]
    pub split: Split,
}

impl ParallelPair {
    pub fn new(fol: impl AsRef<str>, ns: impl AsRef<str>) -> Self {
        Self {
            fol: fol.as_ref().trim().to_owned(),
            ns: ns.as_ref().trim().to_owned(),
            split: Split::Unassigned,
        }
    }
}

/// Names of the source columns. The conclusion columns may be disabled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ColumnMap {
    pub premises: String,
    pub premises_fol: String,
    pub conclusion: Option<String>,
    pub conclusion_fol: Option<String>,
}

impl Default for ColumnMap {
    fn default() -> Self {
        Self {
            premises: "premises".into(),
            premises_fol: "premises-FOL".into(),
            conclusion: Some("conclusion".into()),
            conclusion_fol: Some("conclusion-FOL".into()),
        }
    }
}

impl ColumnMap {
    fn required(&self) -> Vec<&str> {
        let mut cols = vec![self.premises.as_str(), self.premises_fol.as_str()];
        cols.extend(self.conclusion.as_deref());
        cols.extend(self.conclusion_fol.as_deref());
        cols
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawRecord {
    /// 1-based line (JSONL) or element (JSON array) number.
    pub line: usize,
    pub premises: Vec<String>,
    pub premises_fol: Vec<String>,
    pub conclusion: Option<String>,
    pub conclusion_fol: Option<String>,
    /// Every source column, untouched.
    pub fields: Map<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reject {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct Ingested {
    pub records: Vec<RawRecord>,
    pub rejects: Vec<Reject>,
    pub warnings: Vec<String>,
}

fn lines_of(value: &Value) -> Option<Vec<String>> {
    match value {
        Value::String(s) => Some(
            s.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(str::to_owned)
                .collect(),
        ),
        Value::Array(items) => items
            .iter()
            .map(|v| v.as_str().map(|s| s.trim().to_owned()))
            .collect(),
        _ => None,
    }
}

fn record_from(line: usize, value: Value, columns: &ColumnMap) -> Result<RawRecord, Reject> {
    let reject = |reason: String| Reject { line, reason };
    let Value::Object(fields) = value else {
        return Err(reject("record is not a JSON object".into()));
    };
    for col in columns.required() {
        if fields.get(col).is_none_or(Value::is_null) {
            return Err(reject(format!("missing column `{col}`")));
        }
    }
    let list = |col: &str| {
        lines_of(&fields[col]).ok_or_else(|| reject(format!("column `{col}` is not text")))
    };
    let text = |col: &Option<String>| -> Result<Option<String>, Reject> {
        match col {
            None => Ok(None),
            Some(c) => fields[c.as_str()]
                .as_str()
                .map(|s| Some(s.trim().to_owned()))
                .ok_or_else(|| reject(format!("column `{c}` is not text"))),
        }
    };
    Ok(RawRecord {
        line,
        premises: list(&columns.premises)?,
        premises_fol: list(&columns.premises_fol)?,
        conclusion: text(&columns.conclusion)?,
        conclusion_fol: text(&columns.conclusion_fol)?,
        fields,
    })
}

/// Reads records from JSON Lines text, or from a JSON array when the first
/// non-blank character is `[`.
pub fn ingest_str(text: &str, columns: &ColumnMap) -> Result<Ingested, CorpusError> {
    let mut rows: Vec<(usize, Result<Value, String>)> = Vec::new();
    if text.trim_start().starts_with('[') {
        let values: Vec<Value> = serde_json::from_str(text)?;
        rows.extend(values.into_iter().enumerate().map(|(i, v)| (i + 1, Ok(v))));
    } else {
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            rows.push((
                i + 1,
                serde_json::from_str(line).map_err(|e| format!("malformed JSON: {e}")),
            ));
        }
    }

    let mut out = Ingested::default();
    if rows.is_empty() {
        out.warnings.push("input contains no records".into());
        return Ok(out);
    }
    for col in columns.required() {
        let seen = rows
            .iter()
            .any(|(_, v)| matches!(v, Ok(Value::Object(m)) if m.contains_key(col)));
        if !seen {
            return Err(CorpusError::Schema(col.to_owned()));
        }
    }
    for (line, value) in rows {
        match value.map_err(|reason| Reject { line, reason }) {
            Ok(v) => match record_from(line, v, columns) {
                Ok(r) => out.records.push(r),
                Err(r) => out.rejects.push(r),
            },
            Err(r) => out.rejects.push(r),
        }
    }
    if !out.rejects.is_empty() {
        out.warnings
            .push(format!("{} malformed row(s) routed to rejects", out.rejects.len()));
    }
    Ok(out)
}

pub fn ingest(path: impl AsRef<Path>, columns: &ColumnMap) -> Result<Ingested, CorpusError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| CorpusError::File {
        path: path.display().to_string(),
        source,
    })?;
    ingest_str(&text, columns)
}

/// One pair per premise clause and one per conclusion, exact duplicates
/// removed (first occurrence wins). Records whose premise lists do not line
/// up are kept as a single pair of the joined texts.
pub fn extract_pairs(records: &[RawRecord]) -> Vec<ParallelPair> {
    let mut candidates = Vec::new();
    for r in records {
        if r.premises.len() == r.premises_fol.len() {
            candidates.extend(
                r.premises_fol
                    .iter()
                    .zip(&r.premises)
                    .map(|(fol, ns)| ParallelPair::new(fol, ns)),
            );
        } else {
            candidates.push(ParallelPair::new(
                r.premises_fol.join(" "),
                r.premises.join(" "),
            ));
        }
        if let (Some(fol), Some(ns)) = (&r.conclusion_fol, &r.conclusion) {
            candidates.push(ParallelPair::new(fol, ns));
        }
    }
    dedup_pairs(candidates)
}

pub fn dedup_pairs(pairs: impl IntoIterator<Item = ParallelPair>) -> Vec<ParallelPair> {
    let mut seen = HashSet::new();
    pairs
        .into_iter()
        .filter(|p| !p.fol.is_empty() && !p.ns.is_empty())
        .filter(|p| seen.insert((p.fol.clone(), p.ns.clone())))
        .collect()
}

/// Seeded shuffled partition with `round(ratio * n)` training pairs. Both
/// halves keep the input's relative order.
pub fn split(
    pairs: &[ParallelPair],
    ratio: f64,
    seed: u64,
) -> Result<(Vec<ParallelPair>, Vec<ParallelPair>), CorpusError> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(CorpusError::InvalidRatio(ratio));
    }
    if pairs.is_empty() {
        return Err(CorpusError::EmptyInput);
    }
    let n_train = (ratio * pairs.len() as f64).round() as usize;
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut in_train = vec![false; pairs.len()];
    for &i in &order[..n_train] {
        in_train[i] = true;
    }
    let (mut train, mut validation) = (Vec::new(), Vec::new());
    for (pair, is_train) in pairs.iter().zip(in_train) {
        let mut p = pair.clone();
        if is_train {
            p.split = Split::Train;
            train.push(p);
        } else {
            p.split = Split::Validation;
            validation.push(p);
        }
    }
    Ok((train, validation))
}

/// Whitespace tokenization after isolating every character that is not a
/// letter, digit, `_` or whitespace (punctuation and logical symbols).
/// Case is preserved.
pub fn tokenize(text: &str) -> Vec<&str> {
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in text.char_indices() {
        if c.is_alphanumeric() || c == '_' {
            start.get_or_insert(i);
            continue;
        }
        if let Some(s) = start.take() {
            tokens.push(&text[s..i]);
        }
        if !c.is_whitespace() {
            tokens.push(&text[i..i + c.len_utf8()]);
        }
    }
    if let Some(s) = start {
        tokens.push(&text[s..]);
    }
    tokens
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Fol,
    Ns,
}

impl Side {
    pub fn of(self, pair: &ParallelPair) -> &str {
        match self {
            Side::Fol => &pair.fol,
            Side::Ns => &pair.ns,
        }
    }
}

pub const DEFAULT_SMOOTHING: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TokenDistribution<F> {
    pub counts: BTreeMap<String, u64>,
    pub total: u64,
    pub smoothing_epsilon: F,
}

impl<F: Real> TokenDistribution<F> {
    pub fn from_texts<'a>(texts: impl IntoIterator<Item = &'a str>, smoothing_epsilon: F) -> Self {
        let mut counts = BTreeMap::new();
        let mut total = 0;
        for text in texts {
            for tok in tokenize(text) {
                *counts.entry(tok.to_owned()).or_insert(0) += 1;
                total += 1;
            }
        }
        Self {
            counts,
            total,
            smoothing_epsilon,
        }
    }

    pub fn count(&self, token: &str) -> u64 {
        self.counts.get(token).copied().unwrap_or(0)
    }

    /// Smoothed probabilities over `vocab`: epsilon is added to every
    /// relative frequency and the result renormalised.
    pub fn smoothed(&self, vocab: &BTreeSet<&str>) -> Vec<F> {
        let eps = self.smoothing_epsilon;
        let rel = |t: &str| {
            if self.total == 0 {
                F::zero()
            } else {
                F::of(self.count(t) as usize) / F::of(self.total as usize)
            }
        };
        let raw: Vec<F> = vocab.iter().map(|t| rel(t) + eps).collect();
        let norm: F = raw.iter().copied().sum();
        raw.into_iter().map(|p| p / norm).collect()
    }

    /// Most frequent tokens, ties broken alphabetically.
    pub fn top_k(&self, k: usize) -> Vec<(&str, u64)> {
        let mut items: Vec<(&str, u64)> = self.counts.iter().map(|(t, c)| (t.as_str(), *c)).collect();
        items.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        items.truncate(k);
        items
    }
}

pub fn token_frequency<F: Real>(pairs: &[ParallelPair], side: Side) -> TokenDistribution<F> {
    TokenDistribution::from_texts(pairs.iter().map(|p| side.of(p)), F::lit(DEFAULT_SMOOTHING))
}

/// D(P‖Q) in nats over the union vocabulary of the smoothed distributions.
pub fn kl_divergence<F: Real>(p: &TokenDistribution<F>, q: &TokenDistribution<F>) -> F {
    let vocab: BTreeSet<&str> = p
        .counts
        .keys()
        .chain(q.counts.keys())
        .map(String::as_str)
        .collect();
    if vocab.is_empty() {
        return F::zero();
    }
    let ps = p.smoothed(&vocab);
    let qs = q.smoothed(&vocab);
    let d: F = ps
        .iter()
        .zip(&qs)
        .map(|(&pi, &qi)| pi * (pi / qi).ln())
        .sum();
    // rounding can leave a value a hair below zero for identical inputs
    d.max(F::zero())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TokenCountRow {
    pub token: String,
    pub train: u64,
    pub validation: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsReport<F> {
    pub side: Side,
    pub split: String,
    pub top_k: Vec<TokenCountRow>,
    pub kl_pq: F,
    pub kl_qp: F,
    pub train_tokens: u64,
    pub validation_tokens: u64,
}

/// Train (P) versus validation (Q) statistics for one side of the corpus.
pub fn split_stats<F: Real>(
    train: &[ParallelPair],
    validation: &[ParallelPair],
    side: Side,
    k: usize,
) -> StatsReport<F> {
    let p = token_frequency::<F>(train, side);
    let q = token_frequency::<F>(validation, side);
    StatsReport {
        side,
        split: "train_vs_validation".into(),
        top_k: p
            .top_k(k)
            .into_iter()
            .map(|(t, c)| TokenCountRow {
                token: t.to_owned(),
                train: c,
                validation: q.count(t),
            })
            .collect(),
        kl_pq: kl_divergence(&p, &q),
        kl_qp: kl_divergence(&q, &p),
        train_tokens: p.total,
        validation_tokens: q.total,
    }
}
