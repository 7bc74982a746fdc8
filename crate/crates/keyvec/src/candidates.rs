//! Candidate unigram, bigram, and trigram production.
//!
//! A distinct word is a candidate unigram iff its length is strictly
//! between 2 and 36 characters, it is not a stopword, it does not parse as
//! a number, and it contains none of a fixed set of special characters.
//! Bigrams and trigrams are adjacent runs of candidate unigrams, except
//! that a bigram of two words both shorter than 4 characters is dropped,
//! and likewise a trigram of three such words.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::preprocess::{StopwordList, TokenSequence};

/// Characters that disqualify a word from candidacy.
pub const FORBIDDEN_CHARS: &[char] = &[
    '!', '@', '#', '$', '*', '=', '+', '.', ',', '?', '>', '<', '&', '(', ')', '{', '}', '[', ']',
    '|',
];

/// A 1-3 word phrase in surface (unstemmed) form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Phrase(pub Vec<String>);

impl Phrase {
    pub fn from_words<S: AsRef<str>>(words: &[S]) -> Self {
        Phrase(words.iter().map(|w| w.as_ref().to_string()).collect())
    }

    /// Number of words.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.0
    }

    /// Space-joined surface form.
    pub fn surface(&self) -> String {
        self.0.join(" ")
    }
}

impl fmt::Display for Phrase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.surface())
    }
}

/// Candidate phrases of one token sequence.
///
/// Invariants: every word of every bigram and trigram is in `unigrams`;
/// every stored phrase occurs contiguously in the source sequence;
/// `first_occurrence` maps each phrase to the earliest start position of a
/// contiguous match.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CandidateSet {
    pub unigrams: BTreeSet<String>,
    pub bigrams: BTreeSet<Phrase>,
    pub trigrams: BTreeSet<Phrase>,
    pub first_occurrence: BTreeMap<Phrase, usize>,
}

impl CandidateSet {
    /// Total number of distinct candidate phrases.
    pub fn phrase_count(&self) -> usize {
        self.unigrams.len() + self.bigrams.len() + self.trigrams.len()
    }

    /// All candidate phrases: unigrams first, then bigrams, then trigrams,
    /// each in lexicographic order.
    pub fn iter_phrases(&self) -> impl Iterator<Item = Phrase> + '_ {
        self.unigrams
            .iter()
            .map(|w| Phrase(vec![w.clone()]))
            .chain(self.bigrams.iter().cloned())
            .chain(self.trigrams.iter().cloned())
    }

    pub fn contains(&self, phrase: &Phrase) -> bool {
        match phrase.len() {
            1 => self.unigrams.contains(&phrase.0[0]),
            2 => self.bigrams.contains(phrase),
            3 => self.trigrams.contains(phrase),
            _ => false,
        }
    }
}

/// True when the token parses as an optionally signed integer or decimal
/// (at most one decimal point, at least one digit). "3d" is not a number.
pub fn is_number(word: &str) -> bool {
    let rest = word.strip_prefix(['+', '-']).unwrap_or(word);
    if rest.is_empty() {
        return false;
    }
    let mut saw_digit = false;
    let mut saw_dot = false;
    for c in rest.chars() {
        if c.is_ascii_digit() {
            saw_digit = true;
        } else if c == '.' && !saw_dot {
            saw_dot = true;
        } else {
            return false;
        }
    }
    saw_digit
}

/// Applies the unigram candidacy rules to one word.
pub fn is_candidate_unigram(word: &str, stops: &StopwordList) -> bool {
    let len = word.chars().count();
    len > 2
        && len < 36
        && !stops.contains(word)
        && !is_number(word)
        && !word.contains(FORBIDDEN_CHARS)
}

/// Distinct words of the sequence that pass the unigram candidacy rules.
pub fn candidate_unigrams(tokens: &TokenSequence, stops: &StopwordList) -> BTreeSet<String> {
    tokens
        .words
        .iter()
        .filter(|w| is_candidate_unigram(w, stops))
        .cloned()
        .collect()
}

/// Word length in characters, as used by the short-phrase rules.
fn charlen(word: &str) -> usize {
    word.chars().count()
}

/// Builds the full candidate set from a sequence and its candidate
/// unigrams (as produced by [`candidate_unigrams`] on the same sequence).
pub fn candidate_phrases(tokens: &TokenSequence, unigrams: &BTreeSet<String>) -> CandidateSet {
    let words = &tokens.words;
    let mut set = CandidateSet {
        unigrams: unigrams.clone(),
        ..CandidateSet::default()
    };

    for (pos, w) in words.iter().enumerate() {
        if unigrams.contains(w) {
            set.first_occurrence
                .entry(Phrase(vec![w.clone()]))
                .or_insert(pos);
        }
    }

    for i in 0..words.len().saturating_sub(1) {
        let (w1, w2) = (&words[i], &words[i + 1]);
        if unigrams.contains(w1)
            && unigrams.contains(w2)
            && !(charlen(w1) < 4 && charlen(w2) < 4)
        {
            let p = Phrase(vec![w1.clone(), w2.clone()]);
            set.first_occurrence.entry(p.clone()).or_insert(i);
            set.bigrams.insert(p);
        }
    }

    for i in 0..words.len().saturating_sub(2) {
        let (w1, w2, w3) = (&words[i], &words[i + 1], &words[i + 2]);
        if unigrams.contains(w1)
            && unigrams.contains(w2)
            && unigrams.contains(w3)
            && !(charlen(w1) < 4 && charlen(w2) < 4 && charlen(w3) < 4)
        {
            let p = Phrase(vec![w1.clone(), w2.clone(), w3.clone()]);
            set.first_occurrence.entry(p.clone()).or_insert(i);
            set.trigrams.insert(p);
        }
    }

    set
}

/// Convenience wrapper: candidate unigrams and phrases in one call.
pub fn extract_candidates(tokens: &TokenSequence, stops: &StopwordList) -> CandidateSet {
    let unigrams = candidate_unigrams(tokens, stops);
    candidate_phrases(tokens, &unigrams)
}
