//! Document collections: JSONL loading and saving, raw-dataset conversion,
//! and the per-collection statistics (gold-phrase coverage and lengths).

pub mod convert;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preprocess::{stem, tokenize_words, StopwordList};

/// One scientific article. The summary (title plus abstract) always exists;
/// the full text may be absent for abstract-only collections. Gold
/// keyphrases may be empty for extraction-only use.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub title: String,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
    #[serde(default)]
    pub fulltext: String,
    #[serde(default)]
    pub gold: Vec<String>,
}

impl Document {
    /// The upper part of the article: title and abstract.
    pub fn summary_text(&self) -> String {
        join_parts(&[&self.title, &self.abstract_text])
    }

    /// The whole article: title, abstract, and body when present. This is
    /// the text local embeddings train on and the "full text" of the F
    /// variants, so every summary word is always in the training vocabulary.
    pub fn full_view_text(&self) -> String {
        join_parts(&[&self.title, &self.abstract_text, &self.fulltext])
    }

    pub fn has_fulltext(&self) -> bool {
        !self.fulltext.trim().is_empty()
    }

    fn validate(&self) -> Result<()> {
        if self.id.trim().is_empty() {
            return Err(Error::Document {
                id: self.id.clone(),
                msg: "empty document id".into(),
            });
        }
        if self.title.trim().is_empty() && self.abstract_text.trim().is_empty() {
            return Err(Error::Document {
                id: self.id.clone(),
                msg: "title and abstract are both empty".into(),
            });
        }
        Ok(())
    }
}

fn join_parts(parts: &[&str]) -> String {
    let non_empty: Vec<&str> = parts
        .iter()
        .map(|p| p.trim())
        .filter(|p| !p.is_empty())
        .collect();
    non_empty.join("\n")
}

/// An ordered, validated collection of documents with distinct ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub name: String,
    pub documents: Vec<Document>,
}

impl Corpus {
    pub fn from_documents(name: impl Into<String>, documents: Vec<Document>) -> Result<Self> {
        let corpus = Corpus {
            name: name.into(),
            documents,
        };
        corpus.validate()?;
        Ok(corpus)
    }

    fn validate(&self) -> Result<()> {
        if self.documents.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut seen = std::collections::HashSet::new();
        for doc in &self.documents {
            doc.validate()?;
            if !seen.insert(doc.id.as_str()) {
                return Err(Error::DuplicateId(doc.id.clone()));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Document> {
        self.documents.iter().find(|d| d.id == id)
    }
}

/// Loads a corpus from a JSON Lines file: one document object per line with
/// keys `id`, `title`, `abstract`, `fulltext`, `gold`. Ordering is
/// preserved; blank lines are ignored.
pub fn load_corpus(path: &Path) -> Result<Corpus> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut documents = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let doc: Document = serde_json::from_str(line)
            .map_err(|e| Error::parse(path, lineno + 1, e.to_string()))?;
        documents.push(doc);
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "corpus".to_string());
    Corpus::from_documents(name, documents)
}

/// Writes a corpus as JSON Lines; the inverse of `load_corpus`.
pub fn save_corpus(corpus: &Corpus, path: &Path) -> Result<()> {
    let mut out = String::new();
    for doc in &corpus.documents {
        out.push_str(&serde_json::to_string(doc).expect("document serializes"));
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Per-document coverage percentages and the gold-phrase length histogram.
/// List entries align with the order of the contributing documents; a
/// document with no gold phrases is skipped entirely and recorded in
/// `skipped_no_gold`, and one without full text contributes to every list
/// except `pct_gold_in_fulltext`.
#[derive(Debug, Clone, Default, Serialize)]
pub struct StatsReport {
    pub pct_gold_in_abstract: Vec<f64>,
    pub pct_gold_in_fulltext: Vec<f64>,
    pub gold_count: Vec<usize>,
    pub pct_gold_with_stopword: Vec<f64>,
    pub length_histogram: BTreeMap<usize, usize>,
    pub skipped_no_gold: Vec<String>,
    pub skipped_no_fulltext: Vec<String>,
}

/// Tokenizes a text and stems every token, the normal form used for
/// matching gold phrases against document text.
pub fn stemmed_words(text: &str) -> Vec<String> {
    tokenize_words(text).into_iter().map(|w| stem(&w)).collect()
}

/// True when `needle` occurs as a contiguous subsequence of `haystack`.
/// An empty needle never matches.
pub fn contains_contiguous(haystack: &[String], needle: &[String]) -> bool {
    !needle.is_empty() && haystack.windows(needle.len()).any(|w| w == needle)
}

/// Computes the collection statistics. A gold phrase "appears" in a text
/// iff its stemmed word sequence occurs contiguously in the stemmed token
/// sequence of that text; phrase lengths are whitespace-separated words of
/// the raw phrase; stopword presence is judged per tokenized word.
pub fn dataset_statistics(corpus: &Corpus, stopwords: &StopwordList) -> StatsReport {
    let mut report = StatsReport::default();
    for doc in &corpus.documents {
        if doc.gold.is_empty() {
            log::warn!("document {}: no gold keyphrases, skipped in statistics", doc.id);
            report.skipped_no_gold.push(doc.id.clone());
            continue;
        }
        let total = doc.gold.len();
        let needles: Vec<Vec<String>> = doc.gold.iter().map(|g| stemmed_words(g)).collect();

        let summary = stemmed_words(&doc.summary_text());
        let in_abstract = needles
            .iter()
            .filter(|n| contains_contiguous(&summary, n))
            .count();
        report
            .pct_gold_in_abstract
            .push(100.0 * in_abstract as f64 / total as f64);

        if doc.has_fulltext() {
            let body = stemmed_words(&doc.fulltext);
            let in_fulltext = needles
                .iter()
                .filter(|n| contains_contiguous(&body, n))
                .count();
            report
                .pct_gold_in_fulltext
                .push(100.0 * in_fulltext as f64 / total as f64);
        } else {
            log::warn!("document {}: no full text, skipped in full-text statistics", doc.id);
            report.skipped_no_fulltext.push(doc.id.clone());
        }

        let with_stopword = doc
            .gold
            .iter()
            .filter(|g| tokenize_words(g).iter().any(|w| stopwords.contains(w)))
            .count();
        report
            .pct_gold_with_stopword
            .push(100.0 * with_stopword as f64 / total as f64);

        report.gold_count.push(total);
        for g in &doc.gold {
            *report
                .length_histogram
                .entry(g.split_whitespace().count())
                .or_insert(0) += 1;
        }
    }
    report
}
