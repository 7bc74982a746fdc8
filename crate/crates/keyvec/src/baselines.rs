//! TfIdf keyphrase extraction, the comparison baseline.
//!
//! Units are stemmed contiguous 1-3-grams over the chosen text, stopwords
//! included. Document frequency is computed per collection and per text
//! mode; score(g) = tf(g) * ln(n_docs / df(g)). Output phrases use the
//! earliest surface form of each stemmed unit, and the top-N rule and tie
//! ordering match the reference-vector extractor.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::candidates::Phrase;
use crate::corpus::{Corpus, Document};
use crate::error::{Error, Result};
use crate::preprocess::{stem, tokenize, TextSource};
use crate::rva::{select_top, Fraction, ScoredCandidate, Selection};

/// Which text the baseline reads: the summary (ab) or the whole article
/// (ft). A document without a body falls back to its summary in ft mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TextMode {
    Ab,
    Ft,
}

impl TextMode {
    pub fn text(&self, doc: &Document) -> String {
        match self {
            TextMode::Ab => doc.summary_text(),
            TextMode::Ft => doc.full_view_text(),
        }
    }
}

impl fmt::Display for TextMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TextMode::Ab => "ab",
            TextMode::Ft => "ft",
        })
    }
}

/// Document counts per stemmed n-gram over one collection and text mode.
#[derive(Debug, Clone, PartialEq)]
pub struct DocumentFrequencyTable {
    df: HashMap<String, usize>,
    pub n_docs: usize,
}

impl DocumentFrequencyTable {
    /// The stored document count, if the n-gram was seen at all.
    pub fn get(&self, gram: &str) -> Option<usize> {
        self.df.get(gram).copied()
    }

    /// The count used for scoring: unseen n-grams default to 1.
    pub fn df_or_default(&self, gram: &str) -> usize {
        self.get(gram).unwrap_or(1)
    }

    /// ln(n_docs / df), the inverse-document-frequency factor.
    pub fn idf(&self, gram: &str) -> f64 {
        (self.n_docs as f64 / self.df_or_default(gram) as f64).ln()
    }

    pub fn len(&self) -> usize {
        self.df.len()
    }

    pub fn is_empty(&self) -> bool {
        self.df.is_empty()
    }
}

fn stemmed_tokens(text: &str) -> Vec<String> {
    tokenize(text, TextSource::Fulltext)
        .words
        .iter()
        .map(|w| stem(w))
        .collect()
}

fn gram_key(stems: &[String]) -> String {
    stems.join(" ")
}

/// Counts, for every stemmed contiguous 1-3-gram, the number of documents
/// whose chosen text contains it at least once.
pub fn compute_df(corpus: &Corpus, mode: TextMode) -> Result<DocumentFrequencyTable> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut df: HashMap<String, usize> = HashMap::new();
    for doc in &corpus.documents {
        let stems = stemmed_tokens(&mode.text(doc));
        let mut seen: HashSet<String> = HashSet::new();
        for n in 1..=3usize {
            for window in stems.windows(n) {
                seen.insert(gram_key(window));
            }
        }
        for gram in seen {
            *df.entry(gram).or_insert(0) += 1;
        }
    }
    Ok(DocumentFrequencyTable {
        df,
        n_docs: corpus.len(),
    })
}

/// Scores every stemmed 1-3-gram of the document's chosen text by
/// tf * ln(n_docs / df) and keeps the top N, where N follows the same rule
/// as the reference-vector extractor: max(1, floor(fraction * distinct
/// summary tokens)). Each unit is printed as the surface form of its
/// earliest occurrence.
pub fn tfidf_extract(
    doc: &Document,
    table: &DocumentFrequencyTable,
    mode: TextMode,
    fraction: Fraction,
) -> Result<Selection> {
    let tokens = tokenize(&mode.text(doc), TextSource::Fulltext);
    let stems: Vec<String> = tokens.words.iter().map(|w| stem(w)).collect();

    struct Unit {
        tf: usize,
        first: usize,
        surface: Vec<String>,
    }
    let mut units: HashMap<String, Unit> = HashMap::new();
    for n in 1..=3usize {
        for (pos, window) in stems.windows(n).enumerate() {
            let key = gram_key(window);
            units
                .entry(key)
                .and_modify(|u| u.tf += 1)
                .or_insert_with(|| Unit {
                    tf: 1,
                    first: pos,
                    surface: tokens.words[pos..pos + n].to_vec(),
                });
        }
    }

    let scored: Vec<ScoredCandidate> = units
        .into_iter()
        .map(|(key, unit)| ScoredCandidate {
            phrase: Phrase(unit.surface),
            score: unit.tf as f64 * table.idf(&key),
            first_occurrence: unit.first,
        })
        .collect();

    let summary_distinct = tokenize(&doc.summary_text(), TextSource::Summary)
        .distinct_count()
        .max(1);
    Ok(select_top(scored, summary_distinct, fraction))
}
