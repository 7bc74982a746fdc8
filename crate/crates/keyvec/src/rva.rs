//! Reference-vector keyphrase extraction.
//!
//! The pipeline: train (or obtain) word vectors for the document, average
//! the vectors of candidate-unigram occurrences in the reference text into
//! a reference vector, score every candidate unigram by cosine similarity
//! to it, score phrases as the sum of their words' scores, and keep the
//! top N where N = max(1, floor(fraction * distinct summary words)).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::candidates::{candidate_unigrams, extract_candidates, CandidateSet, Phrase};
use crate::corpus::Document;
use crate::embeddings::{
    build_cooccurrence, load_vectors, train_glove, EmbeddingModel, TrainingParams,
};
use crate::error::{Error, Result};
use crate::preprocess::{default_stopwords, tokenize, StopwordList, TextSource, TokenSequence};

/// Which texts feed the two halves of the pipeline. The first letter picks
/// the reference-vector text, the second the candidate text: A is the
/// summary (title plus abstract), F the whole article.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
pub enum Variant {
    #[value(name = "a-a")]
    #[serde(rename = "a-a")]
    AA,
    #[value(name = "f-f")]
    #[serde(rename = "f-f")]
    FF,
    #[value(name = "a-f")]
    #[serde(rename = "a-f")]
    AF,
}

impl Variant {
    pub fn reference_is_summary(&self) -> bool {
        matches!(self, Variant::AA | Variant::AF)
    }

    pub fn candidates_are_summary(&self) -> bool {
        matches!(self, Variant::AA)
    }

    pub fn needs_fulltext(&self) -> bool {
        !matches!(self, Variant::AA)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::AA => "a-a",
            Variant::FF => "f-f",
            Variant::AF => "a-f",
        })
    }
}

/// Where the word vectors come from: trained on the document alone (loc),
/// trained on the whole collection (cv), or loaded from a file (pv).
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VectorSource {
    Loc,
    Cv,
    Pv,
}

impl fmt::Display for VectorSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VectorSource::Loc => "loc",
            VectorSource::Cv => "cv",
            VectorSource::Pv => "pv",
        })
    }
}

/// How reference-text occurrences are averaged: every occurrence counts
/// (repeated words weigh more), or each distinct word counts once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RefAveraging {
    Occurrence,
    Distinct,
}

/// What the top-N rule counts in the summary: all distinct tokens, or only
/// distinct candidate unigrams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DistinctBasis {
    All,
    Candidates,
}

/// An exact non-negative rational, used for the top-N fraction so that
/// floor(fraction * count) has no floating-point edge cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Fraction {
    pub num: u32,
    pub den: u32,
}

impl Fraction {
    pub const ONE_THIRD: Fraction = Fraction { num: 1, den: 3 };

    pub fn new(num: u32, den: u32) -> Result<Self> {
        if den == 0 || num == 0 {
            return Err(Error::InvalidConfig(
                "fraction must be positive with a non-zero denominator".into(),
            ));
        }
        Ok(Fraction { num, den })
    }

    /// floor(self * count), exactly.
    pub fn apply(&self, count: usize) -> usize {
        ((count as u128 * self.num as u128) / self.den as u128) as usize
    }
}

impl FromStr for Fraction {
    type Err = Error;

    /// Accepts "1/3" or a bare integer "2" (meaning 2/1).
    fn from_str(s: &str) -> Result<Self> {
        let bad = |s: &str| Error::InvalidConfig(format!("invalid fraction \"{s}\" (use N or N/D)"));
        match s.split_once('/') {
            Some((n, d)) => Fraction::new(
                n.trim().parse().map_err(|_| bad(s))?,
                d.trim().parse().map_err(|_| bad(s))?,
            ),
            None => Fraction::new(s.trim().parse().map_err(|_| bad(s))?, 1),
        }
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Everything an extraction run needs besides the document and the model.
#[derive(Debug, Clone)]
pub struct ExtractionConfig {
    pub variant: Variant,
    pub source: VectorSource,
    pub training: TrainingParams,
    pub top_fraction: Fraction,
    pub ref_averaging: RefAveraging,
    pub distinct_basis: DistinctBasis,
    pub stopwords: StopwordList,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        ExtractionConfig {
            variant: Variant::AA,
            source: VectorSource::Loc,
            training: TrainingParams::default(),
            top_fraction: Fraction::ONE_THIRD,
            ref_averaging: RefAveraging::Occurrence,
            distinct_basis: DistinctBasis::All,
            stopwords: default_stopwords().clone(),
        }
    }
}

/// The mean vector of candidate-unigram occurrences in the reference text.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceVector {
    pub values: Vec<f64>,
    pub contributing_occurrences: usize,
}

/// A candidate phrase with its similarity score and earliest position in
/// the candidate text.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoredCandidate {
    pub phrase: Phrase,
    pub score: f64,
    pub first_occurrence: usize,
}

impl ScoredCandidate {
    pub fn surface(&self) -> String {
        self.phrase.surface()
    }
}

/// The top-N cut of a scored candidate list.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub phrases: Vec<ScoredCandidate>,
    pub n_requested: usize,
    pub short_output: bool,
}

/// A full extraction result for one document.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub doc_id: String,
    pub selected: Vec<ScoredCandidate>,
    pub rejected: Vec<ScoredCandidate>,
    pub n_requested: usize,
    pub short_output: bool,
    pub distinct_word_count: usize,
    pub reference: ReferenceVector,
}

impl Extraction {
    /// The ranked keyphrases as surface strings.
    pub fn keyphrases(&self) -> Vec<String> {
        self.selected.iter().map(|c| c.surface()).collect()
    }
}

/// Cosine similarity. Callers guard against zero norms.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Averages the vectors of reference-text occurrences whose word is a
/// candidate unigram known to the model. In occurrence mode a word
/// appearing k times contributes k times; in distinct mode once.
pub fn reference_vector(
    model: &EmbeddingModel,
    tokens: &TokenSequence,
    unigrams: &BTreeSet<String>,
    averaging: RefAveraging,
) -> Result<ReferenceVector> {
    let mut cache: HashMap<&str, Option<Vec<f64>>> = HashMap::new();
    let mut sum: Vec<f64> = vec![0.0; model.dim];
    let mut count = 0usize;
    let mut seen: BTreeSet<&str> = BTreeSet::new();

    for word in &tokens.words {
        if !unigrams.contains(word) {
            continue;
        }
        if averaging == RefAveraging::Distinct && !seen.insert(word) {
            continue;
        }
        let Some(vector) = cache
            .entry(word.as_str())
            .or_insert_with(|| model.vector(word))
        else {
            continue;
        };
        for (s, v) in sum.iter_mut().zip(vector.iter()) {
            *s += v;
        }
        count += 1;
    }

    if count == 0 {
        return Err(Error::NoCandidateUnigrams);
    }
    for s in &mut sum {
        *s /= count as f64;
    }
    Ok(ReferenceVector {
        values: sum,
        contributing_occurrences: count,
    })
}

/// Scores every candidate phrase. Unigrams score the cosine of their
/// vector against the reference; a unigram missing from the vocabulary
/// scores -1 and a zero-norm vector scores 0 (with a warning); bigrams and
/// trigrams score the sum of their words' scores.
pub fn score_candidates(
    model: &EmbeddingModel,
    reference: &ReferenceVector,
    cands: &CandidateSet,
) -> Result<Vec<ScoredCandidate>> {
    if !(norm(&reference.values) > 0.0) {
        return Err(Error::ZeroReference);
    }

    let mut word_scores: BTreeMap<&str, f64> = BTreeMap::new();
    for word in &cands.unigrams {
        let score = match model.vector(word) {
            None => -1.0,
            Some(v) => {
                if norm(&v) > 0.0 {
                    cosine(&v, &reference.values)
                } else {
                    log::warn!("word \"{word}\" has a zero vector, scored 0");
                    0.0
                }
            }
        };
        word_scores.insert(word.as_str(), score);
    }

    Ok(cands
        .iter_phrases()
        .map(|phrase| {
            // Summed in sorted order so phrases over the same word multiset
            // get bitwise-identical scores and their relative order cannot
            // depend on rounding (ties fall through to the position rule).
            let mut parts: Vec<f64> = phrase
                .words()
                .iter()
                .map(|w| word_scores.get(w.as_str()).copied().unwrap_or(-1.0))
                .collect();
            parts.sort_unstable_by(f64::total_cmp);
            let score = parts.iter().sum();
            let first_occurrence = cands.first_occurrence.get(&phrase).copied().unwrap_or(0);
            ScoredCandidate {
                phrase,
                score,
                first_occurrence,
            }
        })
        .collect())
}

/// Keeps the N = max(1, floor(fraction * distinct_word_count)) best
/// candidates, ordered by score descending with ties broken by earlier
/// first occurrence, then lexicographically. When fewer candidates exist
/// than N, all are returned and the output is flagged short.
pub fn select_top(
    mut scored: Vec<ScoredCandidate>,
    distinct_word_count: usize,
    fraction: Fraction,
) -> Selection {
    debug_assert!(distinct_word_count >= 1, "empty summary reached selection");
    let n = fraction.apply(distinct_word_count).max(1);
    scored.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.first_occurrence.cmp(&b.first_occurrence))
            .then_with(|| a.phrase.cmp(&b.phrase))
    });
    let short_output = scored.len() < n;
    scored.truncate(n);
    Selection {
        phrases: scored,
        n_requested: n,
        short_output,
    }
}

/// Provides the embedding model a document's extraction should use.
pub trait ModelProvider: Sync {
    fn model_for(&self, doc: &Document) -> Result<Arc<EmbeddingModel>>;
}

/// Trains local vectors on the document's own text (title, abstract, and
/// body when present). With a cache directory set, trained vectors are
/// stored as text files keyed by document id, text hash, hyperparameters,
/// and seed, and reloaded on later runs.
pub struct LocalVectors {
    pub params: TrainingParams,
    pub cache_dir: Option<PathBuf>,
}

impl LocalVectors {
    pub fn new(params: TrainingParams) -> Self {
        LocalVectors {
            params,
            cache_dir: None,
        }
    }

    pub fn with_cache(params: TrainingParams, cache_dir: Option<PathBuf>) -> Self {
        LocalVectors { params, cache_dir }
    }

    fn cache_key(&self, doc: &Document, text: &str) -> String {
        let mut hasher = Sha256::new();
        hasher.update(text.as_bytes());
        let text_digest = hex(hasher.finalize().as_slice());
        let p = &self.params;
        let key = format!(
            "{}|{}|dim={}|iterations={}|x_max={}|alpha={}|window={}|lr={}|seed={}",
            doc.id, text_digest, p.dim, p.iterations, p.x_max, p.alpha, p.window,
            p.learning_rate, p.seed
        );
        let mut hasher = Sha256::new();
        hasher.update(key.as_bytes());
        hex(hasher.finalize().as_slice())
    }

    fn train(&self, text: &str) -> Result<EmbeddingModel> {
        let tokens = tokenize(text, TextSource::Fulltext);
        let matrix = build_cooccurrence(&tokens, self.params.window)?;
        train_glove(&matrix, &self.params)
    }
}

impl ModelProvider for LocalVectors {
    fn model_for(&self, doc: &Document) -> Result<Arc<EmbeddingModel>> {
        let text = doc.full_view_text();
        let Some(dir) = &self.cache_dir else {
            return Ok(Arc::new(self.train(&text)?));
        };

        let path = dir.join(format!("{}.vectors", self.cache_key(doc, &text)));
        if path.exists() {
            return Ok(Arc::new(load_vectors(&path)?));
        }
        let model = self.train(&text)?;
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let tmp = dir.join(format!(
            "{}.vectors.tmp{}",
            self.cache_key(doc, &text),
            std::process::id()
        ));
        model.save_vectors(&tmp)?;
        std::fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))?;
        // Reload so cached and uncached runs serve byte-identical vectors:
        // the saved file carries combined vectors with zero context rows.
        Ok(Arc::new(load_vectors(&path)?))
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Serves one fixed model to every document; used for collection-trained
/// and pretrained vectors.
pub struct SharedVectors(pub Arc<EmbeddingModel>);

impl ModelProvider for SharedVectors {
    fn model_for(&self, _doc: &Document) -> Result<Arc<EmbeddingModel>> {
        Ok(Arc::clone(&self.0))
    }
}

/// Runs the whole pipeline for one document with an already obtained model.
pub fn extract_with_model(
    doc: &Document,
    config: &ExtractionConfig,
    model: &EmbeddingModel,
) -> Result<Extraction> {
    if config.variant.needs_fulltext() && !doc.has_fulltext() {
        return Err(Error::MissingFulltext {
            id: doc.id.clone(),
            variant: config.variant.to_string(),
        });
    }

    let summary_tokens = tokenize(&doc.summary_text(), TextSource::Summary);
    let full_tokens = || tokenize(&doc.full_view_text(), TextSource::Fulltext);

    let candidate_tokens = if config.variant.candidates_are_summary() {
        summary_tokens.clone()
    } else {
        full_tokens()
    };
    let cands = extract_candidates(&candidate_tokens, &config.stopwords);

    let reference_tokens = if config.variant.reference_is_summary() {
        &summary_tokens
    } else {
        &candidate_tokens
    };
    let ref_unigrams = candidate_unigrams(reference_tokens, &config.stopwords);
    let reference = reference_vector(model, reference_tokens, &ref_unigrams, config.ref_averaging)?;

    let scored = score_candidates(model, &reference, &cands)?;

    let distinct_word_count = match config.distinct_basis {
        DistinctBasis::All => summary_tokens.distinct_count(),
        DistinctBasis::Candidates => candidate_unigrams(&summary_tokens, &config.stopwords).len(),
    };
    let selection = select_top(scored.clone(), distinct_word_count.max(1), config.top_fraction);
    let selected = selection.phrases;
    let rejected = {
        let mut all = scored;
        all.sort_by(|a, b| {
            b.score
                .total_cmp(&a.score)
                .then_with(|| a.first_occurrence.cmp(&b.first_occurrence))
                .then_with(|| a.phrase.cmp(&b.phrase))
        });
        all.split_off(selected.len())
    };

    Ok(Extraction {
        doc_id: doc.id.clone(),
        selected,
        rejected,
        n_requested: selection.n_requested,
        short_output: selection.short_output,
        distinct_word_count,
        reference,
    })
}

/// Runs the whole pipeline for one document, obtaining the model from the
/// provider.
pub fn extract(
    doc: &Document,
    config: &ExtractionConfig,
    provider: &dyn ModelProvider,
) -> Result<Extraction> {
    let model = provider.model_for(doc)?;
    extract_with_model(doc, config, &model)
}
