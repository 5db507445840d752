//! Logic-to-text evaluation: character-level edit distance, the distance
//! score normalised by token length, and single-reference BLEU with an
//! epsilon guard on every denominator.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::real::{mean, Real};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("both strings are empty; the distance score is undefined")]
    DegenerateInput,
    #[error("no non-empty candidate/reference pairs to evaluate")]
    EmptyInput,
    #[error("invalid BLEU configuration: max_order must be >= 1 and epsilon > 0")]
    InvalidConfig,
}

/// Minimum number of single-character insertions, deletions and
/// substitutions turning `candidate` into `reference`.
pub fn levenshtein(candidate: &str, reference: &str) -> usize {
    let a: Vec<char> = candidate.chars().collect();
    let b: Vec<char> = reference.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let above = row[j + 1];
            row[j + 1] = if ca == cb {
                diag
            } else {
                1 + diag.min(above).min(row[j])
            };
            diag = above;
        }
    }
    row[b.len()]
}

/// Whitespace-separated token count.
pub fn token_count(text: &str) -> usize {
    text.split_whitespace().count()
}

/// Character edits divided by the longer token length of the pair. Values
/// above 1 are normal: the numerator counts characters, the denominator
/// tokens.
pub fn normalized_score<F: Real>(candidate: &str, reference: &str) -> Result<F, MetricsError> {
    let denom = token_count(candidate).max(token_count(reference));
    if denom == 0 {
        return Err(MetricsError::DegenerateInput);
    }
    Ok(F::of(levenshtein(candidate, reference)) / F::of(denom))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BleuConfig<F> {
    pub max_order: usize,
    pub epsilon: F,
}

impl<F: Real> Default for BleuConfig<F> {
    fn default() -> Self {
        Self {
            max_order: 4,
            epsilon: F::lit(1e-3),
        }
    }
}

impl<F: Real> BleuConfig<F> {
    pub fn new(max_order: usize, epsilon: F) -> Result<Self, MetricsError> {
        if max_order == 0 || epsilon <= F::zero() || !epsilon.is_finite() {
            return Err(MetricsError::InvalidConfig);
        }
        Ok(Self { max_order, epsilon })
    }
}

/// Intermediate quantities of one sentence-level BLEU evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BleuBreakdown<F> {
    /// Per-order precision after the epsilon floor, orders 1..=max_order.
    pub precisions: Vec<F>,
    pub brevity_penalty: F,
    pub candidate_len: usize,
    pub reference_len: usize,
    pub score: F,
}

fn ngram_counts<'a>(tokens: &'a [&'a str], n: usize) -> HashMap<&'a [&'a str], usize> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for gram in tokens.windows(n) {
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    counts
}

pub fn bleu_breakdown<F: Real>(
    candidate: &str,
    reference: &str,
    config: &BleuConfig<F>,
) -> BleuBreakdown<F> {
    let eps = config.epsilon;
    let cand: Vec<&str> = candidate.split_whitespace().collect();
    let refs: Vec<&str> = reference.split_whitespace().collect();

    let precisions: Vec<F> = (1..=config.max_order)
        .map(|n| {
            let cand_counts = ngram_counts(&cand, n);
            let ref_counts = ngram_counts(&refs, n);
            let total: usize = cand_counts.values().sum();
            let clipped: usize = cand_counts
                .iter()
                .map(|(gram, &c)| c.min(ref_counts.get(gram).copied().unwrap_or(0)))
                .sum();
            let p = F::of(clipped) / (F::of(total) + eps);
            // ln 0 is undefined; zero-overlap orders are floored at epsilon
            p.max(eps)
        })
        .collect();

    let (c, r) = (F::of(cand.len()), F::of(refs.len()));
    let brevity_penalty = if cand.len() > refs.len() {
        F::one()
    } else {
        (F::one() - r / (c + eps)).exp()
    };
    let log_mean = precisions.iter().map(|p| p.ln()).sum::<F>() / F::of(config.max_order);
    BleuBreakdown {
        score: brevity_penalty * log_mean.exp(),
        precisions,
        brevity_penalty,
        candidate_len: cand.len(),
        reference_len: refs.len(),
    }
}

pub fn bleu<F: Real>(candidate: &str, reference: &str, config: &BleuConfig<F>) -> F {
    bleu_breakdown(candidate, reference, config).score
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairScore<F> {
    /// Position of the pair in the evaluated input.
    pub index: usize,
    pub edit_distance: usize,
    pub normalized_score: F,
    pub bleu: F,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport<F> {
    pub per_pair: Vec<PairScore<F>>,
    pub avg_distance: F,
    pub avg_score: F,
    pub avg_bleu: F,
    pub n_pairs: usize,
    /// Input positions skipped because both sides were empty.
    pub excluded: Vec<usize>,
}

pub fn score_pair<F: Real>(
    index: usize,
    candidate: &str,
    reference: &str,
    config: &BleuConfig<F>,
) -> Result<PairScore<F>, MetricsError> {
    Ok(PairScore {
        index,
        edit_distance: levenshtein(candidate, reference),
        normalized_score: normalized_score(candidate, reference)?,
        bleu: bleu(candidate, reference, config),
    })
}

/// Scores every pair whose candidate or reference is non-blank, then
/// averages distance, score and BLEU over those pairs.
pub fn evaluate<F: Real, S: AsRef<str>>(
    pairs: &[(S, S)],
    config: &BleuConfig<F>,
) -> Result<MetricsReport<F>, MetricsError> {
    let mut per_pair = Vec::with_capacity(pairs.len());
    let mut excluded = Vec::new();
    for (i, (cand, reference)) in pairs.iter().enumerate() {
        let (cand, reference) = (cand.as_ref(), reference.as_ref());
        if cand.trim().is_empty() && reference.trim().is_empty() {
            excluded.push(i);
            continue;
        }
        per_pair.push(score_pair(i, cand, reference, config)?);
    }
    if per_pair.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    Ok(MetricsReport {
        avg_distance: mean(per_pair.iter().map(|p| F::of(p.edit_distance))).expect("nonempty"),
        avg_score: mean(per_pair.iter().map(|p| p.normalized_score)).expect("nonempty"),
        avg_bleu: mean(per_pair.iter().map(|p| p.bleu)).expect("nonempty"),
        n_pairs: per_pair.len(),
        per_pair,
        excluded,
    })
}
