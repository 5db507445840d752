//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Set `FOLFORGE_FOLIO` to a comma-separated list of FOLIO-style files to
//! also print the train/validation KL values for comparison with the
//! published ones. They are reported, never gated on.

#![allow(clippy::excessive_precision)] // oracle digits kept verbatim

use std::collections::HashSet;
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use folforge::corpus::{self, kl_divergence, token_frequency, ColumnMap, Side};
use folforge::fol::{
    parse, parse_with_vocabulary, quantifier_depth, render, Argument, Formula, Style, Syntax,
};
use folforge::generator::{generate_corpus, GenerationConfig, GrammarChoice};
use folforge::lexicalizer::{lexicalize, restore_symbols, rewrite_symbols, SymbolMap, Vocabulary};
use folforge::metrics::{bleu, evaluate, levenshtein};
use folforge::{BleuConfig, TokenDistribution};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn generated(count: usize, seed: u64) -> Vec<Formula> {
    let cfg = GenerationConfig {
        grammar: GrammarChoice::Both,
        count,
        seed,
        ..Default::default()
    };
    generate_corpus(&cfg).unwrap().into_iter().map(|g| g.formula).collect()
}

const WORKED_EXAMPLE: &str = "∀a(A(a) → ∀b(¬B(b,c) ∨ ¬C(b)))";
const WORKED_EXAMPLE_LEXICAL: &str =
    "∀a(HasOfficeIn(a) → ∀chef(¬LivesIn(chef, zone) ∨ ¬IsThoughtful(chef)))";
const WORKED_EXAMPLE_SEED: u64 = 38_976;

/// Quantifier depth as the most quantifier-owned parentheses open at once.
fn qd_from_text(text: &str) -> usize {
    let (mut stack, mut pending, mut best) = (Vec::new(), false, 0);
    for c in text.chars() {
        match c {
            '∀' | '∃' => pending = true,
            '(' => {
                stack.push(std::mem::take(&mut pending));
                best = best.max(stack.iter().filter(|q| **q).count());
            }
            ')' => {
                stack.pop();
            }
            _ => {}
        }
    }
    best
}

fn qd_oracle() -> Outcome {
    let fs = generated(10_000, 101);
    let texts: Vec<String> = fs.iter().map(|f| render(f, Style::Symbolic)).collect();
    let start = Instant::now();
    let depths: Vec<usize> = fs.iter().map(quantifier_depth).collect();
    let elapsed = start.elapsed();
    let agree = depths.iter().zip(&texts).filter(|(d, t)| **d == qd_from_text(t)).count();
    check(agree == 10_000, format!("{agree}/10000 agree with the oracle"))?;
    let t1 = quantifier_depth(&parse(WORKED_EXAMPLE, Syntax::Unicode).unwrap());
    check(t1 == 2, format!("worked example QD {t1}, expected 2"))?;
    check(elapsed < Duration::from_secs(5), format!("took {elapsed:?}"))?;
    Ok(format!("10000/10000 agree, worked example QD = 2, {elapsed:.2?}"))
}

fn round_trip() -> Outcome {
    let fs = generated(10_000, 102);
    let start = Instant::now();
    let mut ok = 0;
    for f in &fs {
        let u = parse(&render(f, Style::Symbolic), Syntax::Unicode);
        let a = parse(&render(f, Style::Ascii), Syntax::Ascii);
        ok += usize::from(u.as_ref() == Ok(f) && a.as_ref() == Ok(f));
    }
    let elapsed = start.elapsed();
    check(ok == 10_000, format!("{ok}/10000 round-trip in both syntaxes"))?;
    check(elapsed < Duration::from_secs(10), format!("took {elapsed:?}"))?;
    Ok(format!("10000/10000 in both syntaxes, {elapsed:.2?}"))
}

fn folforge(args: &[&str], dir: &Path) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_folforge"))
        .args(args)
        .current_dir(dir)
        .env_remove("FOLFORGE_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    check(
        out.status.success(),
        format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr)),
    )
}

fn jsonl(path: &Path) -> Vec<Value> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn full_size_generation() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let start = Instant::now();
    folforge(
        &[
            "generate", "--grammar", "both", "--min-depth", "4", "--max-depth", "10", "--count",
            "3071", "--seed", "7", "--output", "corpus.jsonl",
        ],
        dir.path(),
    )?;
    let elapsed = start.elapsed();
    let records = jsonl(&dir.path().join("corpus.jsonl"));
    check(records.len() == 3071, format!("{} lines", records.len()))?;
    check(dir.path().join("corpus.jsonl.manifest.json").exists(), "no manifest")?;
    let unique: HashSet<&str> = records.iter().map(|r| r["fol"].as_str().unwrap()).collect();
    check(unique.len() == 3071, format!("{} unique", unique.len()))?;
    for r in &records {
        let d = r["depth"].as_u64().unwrap();
        check((4..=10).contains(&d), format!("depth {d}"))?;
        let f = parse(r["fol"].as_str().unwrap(), Syntax::Unicode).map_err(|e| e.to_string())?;
        check(
            r["grammar"] != "standard" || !f.has_nested_arguments(),
            format!("standard item with nested argument: {}", r["fol"]),
        )?;
    }
    check(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!("3071 unique, depths in [4,10], standard items flat, {elapsed:.2?}"))
}

fn outermost_variable(f: &Formula) -> Option<&str> {
    match f {
        Formula::Quantified { var, .. } => Some(var),
        Formula::Not(g) => outermost_variable(g),
        Formula::Binary { left, right, .. } => {
            outermost_variable(left).or_else(|| outermost_variable(right))
        }
        Formula::Atom { args, .. } => args.iter().find_map(|a| match a {
            Argument::Formula(g) => outermost_variable(g),
            Argument::Term(_) => None,
        }),
    }
}

fn lexicalization_fidelity() -> Outcome {
    let vocab = Vocabulary::builtin();
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let (mut iso, mut qd, mut outer) = (0, 0, 0);
    for f in generated(10_000, 103) {
        let g = lexicalize(&f, &vocab, &mut rng).map_err(|e| e.to_string())?;
        iso += usize::from(f.same_shape(&g));
        qd += usize::from(quantifier_depth(&f) == quantifier_depth(&g));
        outer += usize::from(outermost_variable(&f) == outermost_variable(&g));
    }
    check(iso == 10_000 && qd == 10_000 && outer == 10_000, format!("isomorphic {iso}, QD {qd}, outer variable {outer}"))?;
    let f = parse(WORKED_EXAMPLE, Syntax::Unicode).unwrap();
    let expected = parse_with_vocabulary(WORKED_EXAMPLE_LEXICAL, Syntax::Unicode, &vocab).unwrap();
    let got = lexicalize(&f, &vocab, &mut ChaCha8Rng::seed_from_u64(WORKED_EXAMPLE_SEED)).unwrap();
    check(got == expected, format!("worked example not reproduced: {got}"))?;
    Ok(format!("10000/10000 isomorphic, QD kept, outer variable kept; worked example reproduced at seed {WORKED_EXAMPLE_SEED}"))
}

fn symbol_map() -> Outcome {
    let map = SymbolMap::default();
    let table = [
        ("¬P(a)", "No P(a)"),
        ("∀x(P(x))", "For All x(P(x))"),
        ("∃x(P(x))", "There Exists x(P(x))"),
        ("P(a) ⊕ Q(a)", "P(a) XOR Q(a)"),
        ("P(a) → Q(a)", "P(a) implies Q(a)"),
        ("P(a) ∧ Q(a)", "P(a) and Q(a)"),
        ("P(a) ∨ Q(a)", "P(a) or Q(a)"),
    ];
    for (symbolic, lexical) in table {
        let got = rewrite_symbols(symbolic, &map).map_err(|e| e.to_string())?;
        check(got == lexical, format!("{symbolic} -> {got}"))?;
    }
    let vocab = Vocabulary::builtin();
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut ok = 0;
    for f in generated(10_000, 104) {
        let text = render(&lexicalize(&f, &vocab, &mut rng).unwrap(), Style::Symbolic);
        let lexical = rewrite_symbols(&text, &map).map_err(|e| e.to_string())?;
        ok += usize::from(restore_symbols(&lexical, &map) == text);
    }
    check(ok == 10_000, format!("{ok}/10000 inverse round-trips"))?;
    Ok("7/7 symbols match, 10000/10000 inverse round-trips".into())
}

fn dp_oracle(a: &str, b: &str) -> usize {
    let (a, b): (Vec<char>, Vec<char>) = (a.chars().collect(), b.chars().collect());
    let mut m = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for i in 0..=a.len() {
        for j in 0..=b.len() {
            m[i][j] = if i == 0 || j == 0 {
                i + j
            } else {
                (m[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]))
                    .min(m[i - 1][j] + 1)
                    .min(m[i][j - 1] + 1)
            };
        }
    }
    m[a.len()][b.len()]
}

fn random_text(rng: &mut ChaCha8Rng, max: usize) -> String {
    let alphabet = ['a', 'b', 'c', ' ', '∀', '¬', 'x'];
    (0..rng.random_range(0..=max)).map(|_| *alphabet.choose(rng).unwrap()).collect()
}

fn levenshtein_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut ok = 0;
    for _ in 0..10_000 {
        let (a, b) = (random_text(&mut rng, 20), random_text(&mut rng, 20));
        ok += usize::from(levenshtein(&a, &b) == dp_oracle(&a, &b));
    }
    check(ok == 10_000, format!("{ok}/10000 agree with the DP oracle"))?;
    for _ in 0..1_000 {
        let (x, y, z) = (random_text(&mut rng, 12), random_text(&mut rng, 12), random_text(&mut rng, 12));
        check(levenshtein(&x, &x) == 0, "identity")?;
        check(levenshtein(&x, &y) == levenshtein(&y, &x), "symmetry")?;
        check(levenshtein(&x, &z) <= levenshtein(&x, &y) + levenshtein(&y, &z), "triangle")?;
    }
    Ok("10000/10000 agree; identity, symmetry, triangle on 1000 triples".into())
}

/// Expected BLEU-4 values (epsilon 1e-3) from a separate high-precision
/// evaluation of the formulas.
const BLEU_FIXTURE: [(&str, &str, f64); 10] = [
    ("the cat sat on the mat", "the cat sat on the mat", 0.99992917157014073),
    ("the cat is on the mat", "the cat sat on the mat", 0.10573844685137913),
    ("the the the the the the the", "the cat is on the mat", 0.0041111893486793135),
    (
        "every chef lives in the zone",
        "if the chef has an office in a building then the chef neither lives in the zone nor is thoughtful",
        0.052118151028457772,
    ),
    (
        "if the chef has an office in a building then the chef neither lives in the zone nor is thoughtful and more",
        "if the chef has an office in a building then the chef neither lives in the zone nor is thoughtful",
        0.9020873958969048,
    ),
    ("all dogs bark", "some cats meow loudly", 0.00071684973354847396),
    ("rex barks", "rex barks", 0.031626726731804928),
    ("there exists some x such that x is happy", "some x is happy", 0.069846803244440999),
    (
        "either a sings or b barks but not both",
        "either a sings or b barks , but not both .",
        0.59869048346813359,
    ),
    (
        "quick brown fox jumps over the lazy dog today",
        "the quick brown fox jumps over the lazy dog",
        0.86331817876031199,
    ),
];
const BLEU_FIXTURE_MEAN: f64 = 0.36281833966338017;

fn bleu_fixture() -> Outcome {
    let cfg = BleuConfig::default();
    let pairs: Vec<(&str, &str)> = BLEU_FIXTURE.iter().map(|(c, r, _)| (*c, *r)).collect();
    let report = evaluate(&pairs, &cfg).map_err(|e| e.to_string())?;
    let worst = report
        .per_pair
        .iter()
        .zip(BLEU_FIXTURE)
        .map(|(p, (_, _, e))| (p.bleu - e).abs())
        .fold(0.0, f64::max);
    check(worst < 1e-9, format!("max per-pair error {worst:e}"))?;
    let mean_err = (report.avg_bleu - BLEU_FIXTURE_MEAN).abs();
    check(mean_err < 1e-9, format!("average error {mean_err:e}"))?;
    let words = ["all", "chef", "zone", "lives", "in", "is", "happy", "the", "not", "dog"];
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for _ in 0..1_000 {
        let n = rng.random_range(4..25);
        let s: Vec<&str> = (0..n).map(|_| *words.choose(&mut rng).unwrap()).collect();
        let s = s.join(" ");
        let b = bleu(&s, &s, &cfg);
        check((0.99..=1.01).contains(&b), format!("bleu(x,x) = {b} for {s:?}"))?;
    }
    Ok(format!("10/10 within 1e-9 (max {worst:.1e}), average within 1e-9, bleu(x,x) in [0.99,1.01] x1000"))
}

fn random_distribution(rng: &mut ChaCha8Rng) -> TokenDistribution {
    let words = ["∀", "x", "(", ")", "Dog", "¬", "→", "rex", "bark", "the", "∧"];
    let n = rng.random_range(1..30);
    let text: Vec<&str> = (0..n).map(|_| *words.choose(rng).unwrap()).collect();
    TokenDistribution::from_texts([text.join(" ").as_str()], corpus::DEFAULT_SMOOTHING)
}

fn kl_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let mut worst_self: f64 = 0.0;
    for _ in 0..1_000 {
        let p = random_distribution(&mut rng);
        let q = random_distribution(&mut rng);
        worst_self = worst_self.max(kl_divergence(&p, &p).abs());
        let d = kl_divergence(&p, &q);
        check(d >= 0.0 && d.is_finite(), format!("D(P||Q) = {d}"))?;
    }
    check(worst_self <= 1e-12, format!("D(P||P) up to {worst_self:e}"))?;
    let p = TokenDistribution::from_texts(["a a a a b"], corpus::DEFAULT_SMOOTHING);
    let q = TokenDistribution::from_texts(["a b b b c"], corpus::DEFAULT_SMOOTHING);
    let (pq, qp) = (kl_divergence(&p, &q), kl_divergence(&q, &p));
    check((pq - qp).abs() > 1e-6, "fixture is symmetric")?;
    Ok(format!("D(P||P) <= {worst_self:.1e}, 1000 pairs nonnegative, fixture PQ {pq:.4} vs QP {qp:.4}"))
}

fn published_kl_report() -> String {
    let published = "published PQ/QP: input 0.5094/0.2186, output 1.1563/0.4896";
    let Ok(paths) = std::env::var("FOLFORGE_FOLIO") else {
        return format!("{published}; FOLIO not bundled, set FOLFORGE_FOLIO to compare");
    };
    let mut records = Vec::new();
    for p in paths.split(',') {
        match corpus::ingest(p, &ColumnMap::default()) {
            Ok(ing) => records.extend(ing.records),
            Err(e) => return format!("{published}; could not read {p}: {e}"),
        }
    }
    let pairs = corpus::extract_pairs(&records);
    let Ok((train, validation)) = corpus::split(&pairs, 0.8, 42) else {
        return format!("{published}; no pairs extracted");
    };
    let kl = |side| {
        let p: TokenDistribution = token_frequency(&train, side);
        let q: TokenDistribution = token_frequency(&validation, side);
        (kl_divergence(&p, &q), kl_divergence(&q, &p))
    };
    let ((ipq, iqp), (opq, oqp)) = (kl(Side::Fol), kl(Side::Ns));
    format!(
        "{} pairs; measured input {ipq:.4}/{iqp:.4}, output {opq:.4}/{oqp:.4}; {published}",
        pairs.len()
    )
}

fn end_to_end() -> Outcome {
    let mut reports = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let d = dir.path();
        folforge(&["generate", "--count", "1000", "--output", "g.jsonl"], d)?;
        folforge(&["lexicalize", "--input", "g.jsonl", "--output", "l.jsonl"], d)?;
        folforge(
            &["translate", "--input", "l.jsonl", "--reference-field", "model_input", "--output", "t.jsonl"],
            d,
        )?;
        folforge(&["evaluate", "--input", "t.jsonl", "--output", "report.json"], d)?;
        let bytes = fs::read(d.join("report.json")).map_err(|e| e.to_string())?;
        let report: Value = serde_json::from_slice(&bytes).map_err(|e| e.to_string())?;
        check(report["n_pairs"] == 1000, format!("n_pairs {}", report["n_pairs"]))?;
        reports.push((bytes, report));
    }
    check(reports[0].0 == reports[1].0, "reports differ across runs")?;
    let s = &reports[0].1["summary"];
    Ok(format!(
        "1000 formulas, zero errors, byte-identical reports (distance {}, score {}, BLEU {})",
        s["avg_distance"].as_str().unwrap_or("?"),
        s["avg_score"].as_str().unwrap_or("?"),
        s["avg_bleu"].as_str().unwrap_or("?")
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("QD oracle equivalence", qd_oracle),
        ("parse/render round-trip", round_trip),
        ("full-size corpus generation", full_size_generation),
        ("lexicalization fidelity", lexicalization_fidelity),
        ("symbol map", symbol_map),
        ("Levenshtein", levenshtein_oracle),
        ("BLEU", bleu_fixture),
        ("KL divergence", kl_properties),
        ("end-to-end without a model", end_to_end),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("INFO  published KL values (soft target, not gated): {}", published_kl_report());
    println!(
        "N/A   published fine-tuned model metrics (edit distance 20.17, score 1.46, BLEU 0.67): \
         need GPU fine-tuning of a large model; replaced by the checks above"
    );
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
