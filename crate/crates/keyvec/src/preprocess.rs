//! Deterministic tokenization, stopword lookup, and stemming shared by all
//! downstream stages.

pub mod porter;

use std::collections::HashSet;
use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Shipped default stopword list (SMART-style English IR list).
const DEFAULT_STOPWORDS: &str = include_str!("preprocess/stopwords.txt");

/// Where a token sequence came from. The summary is the title plus abstract;
/// fulltext covers the whole document.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TextSource {
    Summary,
    Fulltext,
}

/// An ordered token sequence. A token's position is its index in `words`,
/// so positions are 0-based, strictly increasing, and gapless.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenSequence {
    pub words: Vec<String>,
    pub source: TextSource,
}

impl TokenSequence {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Number of distinct words in the sequence.
    pub fn distinct_count(&self) -> usize {
        self.words.iter().collect::<HashSet<_>>().len()
    }
}

/// Sentence punctuation stripped from token edges. Deliberately narrow:
/// parentheses, operators, and similar stay attached so that tokens like
/// "f(x)" survive intact and are filtered later by the candidate rules.
const EDGE_PUNCT: &[char] = &[
    '.', ',', ';', ':', '!', '?', '"', '\'', '`', '-', '\u{2018}', '\u{2019}', '\u{201c}',
    '\u{201d}', '\u{2026}',
];

/// Tokenizes text: lowercase, delete hyphens joining two alphanumeric
/// characters (merging the parts), split on whitespace, strip sentence
/// punctuation from token edges, drop empty results.
pub fn tokenize(text: &str, source: TextSource) -> TokenSequence {
    TokenSequence {
        words: tokenize_words(text),
        source,
    }
}

/// Core tokenizer; see [`tokenize`].
pub fn tokenize_words(text: &str) -> Vec<String> {
    let lower = normalize(text);
    let merged = merge_hyphens(&lower);
    merged
        .split_whitespace()
        .map(|w| w.trim_matches(EDGE_PUNCT))
        .filter(|w| !w.is_empty())
        .map(str::to_string)
        .collect()
}

/// Lowercases and maps curly quotes to their ASCII forms so stopword
/// lookups on contractions keep working.
fn normalize(text: &str) -> String {
    text.to_lowercase()
        .chars()
        .map(|c| match c {
            '\u{2018}' | '\u{2019}' => '\'',
            '\u{201c}' | '\u{201d}' => '"',
            _ => c,
        })
        .collect()
}

/// Deletes every '-' whose immediate neighbours are both alphanumeric, so
/// "high-dimensional" becomes "highdimensional". Neighbours are judged in
/// the original string, which keeps chains like "state-of-the-art" merging.
fn merge_hyphens(s: &str) -> String {
    let chars: Vec<char> = s.chars().collect();
    let mut out = String::with_capacity(s.len());
    for (i, &c) in chars.iter().enumerate() {
        if c == '-'
            && i > 0
            && chars[i - 1].is_alphanumeric()
            && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric())
        {
            continue;
        }
        out.push(c);
    }
    out
}

/// Porter-stemmer output for a lowercase word.
pub fn stem(word: &str) -> String {
    porter::stem(word)
}

/// A stopword list. Lookup is on exact lowercase words.
#[derive(Debug, Clone)]
pub struct StopwordList {
    words: HashSet<String>,
}

impl StopwordList {
    /// Builds a list from words, lowercasing each entry.
    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        StopwordList {
            words: words
                .into_iter()
                .map(|w| w.as_ref().trim().to_lowercase())
                .filter(|w| !w.is_empty())
                .collect(),
        }
    }

    /// Loads a newline-delimited word list. Blank lines and lines starting
    /// with '#' are skipped.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::from_words(
            text.lines().filter(|l| !l.trim_start().starts_with('#')),
        ))
    }

    /// An empty list; useful when stopword filtering must be disabled.
    pub fn empty() -> Self {
        StopwordList {
            words: HashSet::new(),
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// The shipped default stopword list.
pub fn default_stopwords() -> &'static StopwordList {
    static LIST: OnceLock<StopwordList> = OnceLock::new();
    LIST.get_or_init(|| StopwordList::from_words(DEFAULT_STOPWORDS.lines()))
}

/// Membership in the default stopword list.
pub fn is_stopword(word: &str) -> bool {
    default_stopwords().contains(word)
}
