//! The word-set F1 metric, corpus-level evaluation, paired significance
//! tests, and the cosine-based semantic evaluation.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

use crate::corpus::{Corpus, Document};
use crate::embeddings::EmbeddingModel;
use crate::error::{Error, Result};
use crate::par;
use crate::preprocess::{stem, tokenize, tokenize_words, TextSource};
use crate::rva::{cosine, ReferenceVector, ScoredCandidate};

/// Precision, recall, and their harmonic mean, all in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PRF {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl PRF {
    fn from_pr(precision: f64, recall: f64) -> Self {
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        PRF {
            precision,
            recall,
            f1,
        }
    }
}

/// The union of stemmed words over a list of phrases. Phrases are
/// tokenized (lowercasing, hyphen merging, edge punctuation) before
/// stemming so that surface forms like "high-dimensional" normalize the
/// same way document text does.
pub fn word_set<S: AsRef<str>>(phrases: &[S]) -> BTreeSet<String> {
    phrases
        .iter()
        .flat_map(|p| tokenize_words(p.as_ref()))
        .map(|w| stem(&w))
        .collect()
}

/// Word-set F1: precision over the extracted set, recall over the gold
/// set. An empty extracted set scores zero precision; an empty gold set is
/// an error because recall is undefined.
pub fn f1_wordset(gold: &BTreeSet<String>, extracted: &BTreeSet<String>) -> Result<PRF> {
    if gold.is_empty() {
        return Err(Error::EmptyGold);
    }
    let inter = gold.intersection(extracted).count() as f64;
    let precision = if extracted.is_empty() {
        0.0
    } else {
        inter / extracted.len() as f64
    };
    let recall = inter / gold.len() as f64;
    Ok(PRF::from_pr(precision, recall))
}

/// Corpus-level evaluation options.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct EvalConfig {
    /// Also compute micro-averaged scores (pooled word counts) next to the
    /// default macro average.
    pub micro: bool,
}

/// One method's scores over a corpus. `mean_f1` is the macro average over
/// evaluated documents; failed documents are excluded and listed.
#[derive(Debug, Clone, Serialize)]
pub struct MethodRun {
    pub method_name: String,
    pub per_doc: Vec<(String, PRF)>,
    pub mean_f1: f64,
    pub micro: Option<PRF>,
    pub excluded: Vec<(String, String)>,
}

impl MethodRun {
    pub fn excluded_count(&self) -> usize {
        self.excluded.len()
    }

    /// Per-document F1 values in corpus order, keyed by id.
    pub fn f1_by_doc(&self) -> BTreeMap<&str, f64> {
        self.per_doc
            .iter()
            .map(|(id, prf)| (id.as_str(), prf.f1))
            .collect()
    }
}

/// Runs an extractor over every document and scores it with word-set F1.
/// Documents are processed in parallel (per build features) and reduced in
/// corpus order. A document with no gold keyphrases or a failing
/// extraction is recorded in `excluded` and skipped.
pub fn evaluate<F>(
    corpus: &Corpus,
    method_name: &str,
    config: EvalConfig,
    extractor: F,
) -> Result<MethodRun>
where
    F: Fn(&Document) -> Result<Vec<String>> + Sync,
{
    struct DocOutcome {
        id: String,
        result: Result<(PRF, usize, usize, usize)>,
    }

    let outcomes: Vec<DocOutcome> = par::map_docs(&corpus.documents, |doc| {
        let result = (|| {
            let gold = word_set(&doc.gold);
            if gold.is_empty() {
                return Err(Error::EmptyGold);
            }
            let extracted = word_set(&extractor(doc)?);
            let prf = f1_wordset(&gold, &extracted)?;
            let inter = gold.intersection(&extracted).count();
            Ok((prf, inter, extracted.len(), gold.len()))
        })();
        DocOutcome {
            id: doc.id.clone(),
            result,
        }
    });

    let mut run = MethodRun {
        method_name: method_name.to_string(),
        per_doc: Vec::new(),
        mean_f1: 0.0,
        micro: None,
        excluded: Vec::new(),
    };
    let (mut inter_sum, mut extracted_sum, mut gold_sum) = (0usize, 0usize, 0usize);
    let mut f1_sum = 0.0f64;
    for outcome in outcomes {
        match outcome.result {
            Ok((prf, inter, extracted, gold)) => {
                f1_sum += prf.f1;
                inter_sum += inter;
                extracted_sum += extracted;
                gold_sum += gold;
                run.per_doc.push((outcome.id, prf));
            }
            Err(e) => run.excluded.push((outcome.id, e.to_string())),
        }
    }
    if run.per_doc.is_empty() {
        return Err(Error::Eval(format!(
            "no document could be evaluated ({} excluded)",
            run.excluded.len()
        )));
    }
    run.mean_f1 = f1_sum / run.per_doc.len() as f64;
    if config.micro {
        let precision = if extracted_sum > 0 {
            inter_sum as f64 / extracted_sum as f64
        } else {
            0.0
        };
        let recall = inter_sum as f64 / gold_sum as f64;
        run.micro = Some(PRF::from_pr(precision, recall));
    }
    Ok(run)
}

/// A test statistic with its two-sided p-value and effective sample size.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
    pub n: usize,
}

/// Paired t-test on a vector of per-document differences:
/// t = mean / (sd / sqrt(n)) with a two-sided p from Student's t with
/// n - 1 degrees of freedom.
pub fn paired_t(diffs: &[f64]) -> Result<TestResult> {
    let n = diffs.len();
    if n < 2 {
        return Err(Error::DegenerateSample(
            "paired t-test needs at least 2 differences".into(),
        ));
    }
    let mean = diffs.iter().sum::<f64>() / n as f64;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let sd = var.sqrt();
    if !(sd > 0.0) {
        return Err(Error::DegenerateSample(
            "standard deviation of differences is zero".into(),
        ));
    }
    let t = mean / (sd / (n as f64).sqrt());
    let dist = StudentsT::new(0.0, 1.0, (n - 1) as f64).expect("valid dof");
    let p = (2.0 * (1.0 - dist.cdf(t.abs()))).clamp(0.0, 1.0);
    Ok(TestResult {
        statistic: t,
        p_value: p,
        n,
    })
}

/// Signed ranks of the non-zero differences, doubled so tied averages stay
/// integers: entry (doubled_rank, is_positive).
fn doubled_signed_ranks(diffs: &[f64]) -> Vec<(u64, bool)> {
    let mut nonzero: Vec<f64> = diffs.iter().copied().filter(|d| *d != 0.0).collect();
    nonzero.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    let n = nonzero.len();
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j < n && nonzero[j].abs() == nonzero[i].abs() {
            j += 1;
        }
        // Positions i..j (0-based) share ranks i+1..=j; the doubled average
        // rank of the group is (i+1) + j.
        let doubled = (i + 1 + j) as u64;
        for d in &nonzero[i..j] {
            out.push((doubled, *d > 0.0));
        }
        i = j;
    }
    out
}

/// Wilcoxon signed-rank test on per-document differences. Zeros are
/// dropped; ties receive average ranks; W is the smaller of the positive
/// and negative rank sums. For n <= 25 the two-sided p-value is exact
/// (full enumeration of sign assignments via a counting recurrence);
/// beyond that a normal approximation with tie correction is used.
pub fn wilcoxon_signed_rank(diffs: &[f64]) -> Result<TestResult> {
    let ranks = doubled_signed_ranks(diffs);
    let n = ranks.len();
    if n == 0 {
        return Err(Error::DegenerateSample(
            "all differences are zero".into(),
        ));
    }

    let w_plus_d2: u64 = ranks.iter().filter(|(_, pos)| *pos).map(|(r, _)| r).sum();
    let total_d2: u64 = ranks.iter().map(|(r, _)| r).sum();
    let w_minus_d2 = total_d2 - w_plus_d2;
    let w = w_plus_d2.min(w_minus_d2) as f64 / 2.0;

    let p = if n <= 25 {
        exact_two_sided_p(&ranks, w_plus_d2)
    } else {
        approx_two_sided_p(&ranks, w_plus_d2.min(w_minus_d2))
    };

    Ok(TestResult {
        statistic: w,
        p_value: p,
        n,
    })
}

/// Exact two-sided p: P(T+ <= w) and P(T+ >= w) under the null where each
/// rank is positive with probability 1/2, via the subset-sum counting
/// polynomial over doubled ranks. All quantities are exact: counts are
/// integers below 2^25 and the final division is by a power of two.
fn exact_two_sided_p(ranks: &[(u64, bool)], w_plus_d2: u64) -> f64 {
    let total: u64 = ranks.iter().map(|(r, _)| r).sum();
    let mut counts = vec![0u64; total as usize + 1];
    counts[0] = 1;
    for &(r, _) in ranks {
        let r = r as usize;
        for s in (r..counts.len()).rev() {
            counts[s] += counts[s - r];
        }
    }
    let le: u64 = counts[..=w_plus_d2 as usize].iter().sum();
    let ge: u64 = counts[w_plus_d2 as usize..].iter().sum();
    let denom = (1u64 << ranks.len()) as f64;
    let tail = le.min(ge) as f64 / denom;
    (2.0 * tail).min(1.0)
}

/// Normal approximation with tie correction: the variance of T+ loses
/// sum(t^3 - t)/48 per tie group of size t. No continuity correction.
fn approx_two_sided_p(ranks: &[(u64, bool)], w_min_d2: u64) -> f64 {
    let n = ranks.len() as f64;
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < ranks.len() {
        let mut j = i;
        while j < ranks.len() && ranks[j].0 == ranks[i].0 {
            j += 1;
        }
        let t = (j - i) as f64;
        tie_term += t * t * t - t;
        i = j;
    }
    let mean = n * (n + 1.0) / 4.0;
    let var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    let w = w_min_d2 as f64 / 2.0;
    let z = (w - mean) / var.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    (2.0 * normal.cdf(z)).clamp(0.0, 1.0)
}

/// Cosine similarities of method outputs against the gold mean vector.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SemanticScores {
    /// cos(gold mean, reference vector).
    pub reference: f64,
    /// cos(gold mean, mean vector of the selected phrases' words).
    pub selected: f64,
    /// cos(gold mean, mean vector of the rejected candidates' words);
    /// absent when nothing was rejected.
    pub rejected: Option<f64>,
    /// cos(gold mean, mean vector of a competitor's keyphrase words);
    /// absent when no competitor set was supplied or none of its words
    /// matched the vocabulary.
    pub competitor: Option<f64>,
}

/// Maps each gold word to one vocabulary entry with the same stem (the
/// most frequent one in the document text, earliest on ties) and compares
/// the mean gold vector against the reference vector, the selected
/// phrases, the rejected candidates, and optionally a competitor's
/// keyphrases.
pub fn semantic_eval(
    model: &EmbeddingModel,
    doc: &Document,
    reference: &ReferenceVector,
    selected: &[ScoredCandidate],
    rejected: &[ScoredCandidate],
    competitor: Option<&[String]>,
) -> Result<SemanticScores> {
    let tokens = tokenize(&doc.full_view_text(), TextSource::Fulltext);
    let mut freq: HashMap<&str, usize> = HashMap::new();
    for w in &tokens.words {
        *freq.entry(w.as_str()).or_insert(0) += 1;
    }

    // Best vocabulary entry per stem: highest frequency, earliest index.
    let gold_stems = word_set(&doc.gold);
    let mut best_for_stem: BTreeMap<String, usize> = BTreeMap::new();
    for (i, w) in model.vocab.words().iter().enumerate() {
        let s = stem(w);
        if !gold_stems.contains(&s) {
            continue;
        }
        match best_for_stem.get(&s) {
            Some(&prev) => {
                let prev_freq = freq.get(model.vocab.word(prev)).copied().unwrap_or(0);
                let this_freq = freq.get(w.as_str()).copied().unwrap_or(0);
                if this_freq > prev_freq {
                    best_for_stem.insert(s, i);
                }
            }
            None => {
                best_for_stem.insert(s, i);
            }
        }
    }
    if best_for_stem.is_empty() {
        return Err(Error::Eval(
            "no gold keyphrase word matches the vocabulary".into(),
        ));
    }
    let gold_indices: BTreeSet<usize> = best_for_stem.values().copied().collect();
    let gold_mean = mean_of_indices(model, gold_indices.iter().copied());

    let selected_mean = mean_of_words(model, phrase_words(selected)).ok_or_else(|| {
        Error::Eval("no selected keyphrase word in the vocabulary".into())
    })?;
    let rejected_mean = mean_of_words(model, phrase_words(rejected));

    let competitor_mean = competitor.and_then(|phrases| {
        let words: BTreeSet<String> = phrases
            .iter()
            .flat_map(|p| tokenize_words(p))
            .collect();
        mean_of_words(model, words)
    });

    Ok(SemanticScores {
        reference: cosine(&gold_mean, &reference.values),
        selected: cosine(&gold_mean, &selected_mean),
        rejected: rejected_mean.map(|m| cosine(&gold_mean, &m)),
        competitor: competitor_mean.map(|m| cosine(&gold_mean, &m)),
    })
}

fn phrase_words(cands: &[ScoredCandidate]) -> BTreeSet<String> {
    cands
        .iter()
        .flat_map(|c| c.phrase.words().iter().cloned())
        .collect()
}

fn mean_of_indices(model: &EmbeddingModel, indices: impl Iterator<Item = usize>) -> Vec<f64> {
    let mut sum = vec![0.0; model.dim];
    let mut count = 0usize;
    for i in indices {
        for (s, v) in sum.iter_mut().zip(model.vector_by_index(i)) {
            *s += v;
        }
        count += 1;
    }
    for s in &mut sum {
        *s /= count as f64;
    }
    sum
}

/// Mean vector over the distinct words present in the vocabulary; None
/// when no word matches.
fn mean_of_words(model: &EmbeddingModel, words: BTreeSet<String>) -> Option<Vec<f64>> {
    let indices: Vec<usize> = words.iter().filter_map(|w| model.vocab.get(w)).collect();
    if indices.is_empty() {
        return None;
    }
    Some(mean_of_indices(model, indices.into_iter()))
}

/// Box-plot data: minimum, quartiles, maximum.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FiveNumber {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Five-number summary with linearly interpolated quantiles
/// (h = (n - 1) * p, the convention most statistics packages default to).
pub fn five_number_summary(values: &[f64]) -> Result<FiveNumber> {
    if values.is_empty() {
        return Err(Error::DegenerateSample("empty sample".into()));
    }
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let q = |p: f64| -> f64 {
        let h = (sorted.len() - 1) as f64 * p;
        let lo = h.floor() as usize;
        let hi = (lo + 1).min(sorted.len() - 1);
        sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
    };
    Ok(FiveNumber {
        min: sorted[0],
        q1: q(0.25),
        median: q(0.5),
        q3: q(0.75),
        max: sorted[sorted.len() - 1],
    })
}
