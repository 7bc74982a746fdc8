//! Word co-occurrence statistics and GloVe vector training.
//!
//! The objective is J = sum over non-zero X_ij of
//! f(X_ij) * (w_i . w~_j + b_i + b~_j - ln X_ij)^2 with the clipped power
//! weighting f(x) = (x / x_max)^alpha below x_max and 1 above. Training
//! follows the reference AdaGrad scheme: per-coordinate learning rates,
//! accumulators seeded at 1, parameters initialized uniformly in
//! (-0.5/d, 0.5/d). The final vector of a word is the sum of its main and
//! context rows.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preprocess::TokenSequence;

/// An ordered vocabulary with O(1) word-to-index lookup. Indices follow
/// first occurrence in the source text.
#[derive(Debug, Clone, Default)]
pub struct Vocab {
    words: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocab {
    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut v = Vocab::default();
        for w in words {
            v.insert(w.as_ref());
        }
        v
    }

    fn insert(&mut self, word: &str) -> usize {
        if let Some(&i) = self.index.get(word) {
            return i;
        }
        let i = self.words.len();
        self.words.push(word.to_string());
        self.index.insert(word.to_string(), i);
        i
    }

    pub fn get(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn word(&self, i: usize) -> &str {
        &self.words[i]
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

impl PartialEq for Vocab {
    fn eq(&self, other: &Self) -> bool {
        self.words == other.words
    }
}

/// Sparse symmetric word-word co-occurrence weights.
#[derive(Debug, Clone, PartialEq)]
pub struct CooccurrenceMatrix {
    pub vocab: Vocab,
    entries: HashMap<(usize, usize), f64>,
    pub token_count: usize,
}

impl CooccurrenceMatrix {
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0.0)
    }

    pub fn entry_count(&self) -> usize {
        self.entries.len()
    }

    /// Entries in (i, j) order; the deterministic basis for training.
    pub fn entries_sorted(&self) -> Vec<(usize, usize, f64)> {
        let mut v: Vec<(usize, usize, f64)> =
            self.entries.iter().map(|(&(i, j), &x)| (i, j, x)).collect();
        v.sort_unstable_by_key(|&(i, j, _)| (i, j));
        v
    }

    fn add(&mut self, i: usize, j: usize, w: f64) {
        *self.entries.entry((i, j)).or_insert(0.0) += w;
    }
}

/// Builds the co-occurrence matrix of one token sequence. The vocabulary is
/// every distinct token (no frequency cutoff, stopwords included). Each
/// ordered (center, context) pair within `window` adds 1/distance to
/// X[center][context]; the two-sided window makes the matrix symmetric.
pub fn build_cooccurrence(tokens: &TokenSequence, window: usize) -> Result<CooccurrenceMatrix> {
    build_cooccurrence_multi(std::slice::from_ref(tokens), window)
}

/// Multi-sequence variant sharing one vocabulary; windows never span
/// sequence boundaries, which is how collection-level training keeps
/// documents separated.
pub fn build_cooccurrence_multi(
    sequences: &[TokenSequence],
    window: usize,
) -> Result<CooccurrenceMatrix> {
    if window == 0 {
        return Err(Error::InvalidConfig("window must be >= 1".into()));
    }
    let token_count: usize = sequences.iter().map(|s| s.len()).sum();
    if token_count == 0 {
        return Err(Error::EmptyCorpus);
    }

    let vocab = Vocab::from_words(sequences.iter().flat_map(|s| s.words.iter()));
    let mut matrix = CooccurrenceMatrix {
        vocab,
        entries: HashMap::new(),
        token_count,
    };

    for seq in sequences {
        let ids: Vec<usize> = seq
            .words
            .iter()
            .map(|w| matrix.vocab.get(w).expect("vocab covers all tokens"))
            .collect();
        for i in 0..ids.len() {
            for d in 1..=window {
                let Some(j) = i.checked_add(d).filter(|&j| j < ids.len()) else {
                    break;
                };
                let w = 1.0 / d as f64;
                matrix.add(ids[i], ids[j], w);
                matrix.add(ids[j], ids[i], w);
            }
        }
    }
    Ok(matrix)
}

/// GloVe training hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingParams {
    pub dim: usize,
    pub iterations: usize,
    pub x_max: f64,
    pub alpha: f64,
    pub window: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

impl Default for TrainingParams {
    fn default() -> Self {
        TrainingParams {
            dim: 50,
            iterations: 50,
            x_max: 100.0,
            alpha: 0.75,
            window: 10,
            learning_rate: 0.05,
            seed: 0,
        }
    }
}

impl TrainingParams {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidConfig("dim must be > 0".into()));
        }
        if self.iterations == 0 {
            return Err(Error::InvalidConfig("iterations must be > 0".into()));
        }
        if !(self.x_max > 0.0) {
            return Err(Error::InvalidConfig("x_max must be > 0".into()));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidConfig("alpha must be in (0, 1]".into()));
        }
        if self.window == 0 {
            return Err(Error::InvalidConfig("window must be >= 1".into()));
        }
        if !(self.learning_rate > 0.0) {
            return Err(Error::InvalidConfig("learning rate must be > 0".into()));
        }
        Ok(())
    }
}

/// The clipped power weighting applied to each entry's squared error.
pub fn weighting(x: f64, x_max: f64, alpha: f64) -> f64 {
    if x < x_max {
        (x / x_max).powf(alpha)
    } else {
        1.0
    }
}

/// Trained vectors and biases. `vector(word)` is main + context row.
#[derive(Debug, Clone)]
pub struct EmbeddingModel {
    pub vocab: Vocab,
    pub dim: usize,
    main: Vec<f64>,
    context: Vec<f64>,
    bias_main: Vec<f64>,
    bias_context: Vec<f64>,
}

impl EmbeddingModel {
    /// Uniform initialization in (-0.5/dim, 0.5/dim), in a fixed order:
    /// main rows, context rows, main biases, context biases.
    pub fn init_random(vocab: Vocab, dim: usize, rng: &mut impl Rng) -> Self {
        let n = vocab.len();
        let mut draw = |count: usize| -> Vec<f64> {
            (0..count)
                .map(|_| (rng.random::<f64>() - 0.5) / dim as f64)
                .collect()
        };
        EmbeddingModel {
            main: draw(n * dim),
            context: draw(n * dim),
            bias_main: draw(n),
            bias_context: draw(n),
            vocab,
            dim,
        }
    }

    /// Model with the given main rows and zero context rows and biases, so
    /// that `vector(word)` equals the supplied row. Used for loaded files.
    pub fn from_rows(vocab: Vocab, dim: usize, main: Vec<f64>) -> Self {
        let n = vocab.len();
        debug_assert_eq!(main.len(), n * dim);
        EmbeddingModel {
            context: vec![0.0; n * dim],
            bias_main: vec![0.0; n],
            bias_context: vec![0.0; n],
            vocab,
            dim,
            main,
        }
    }

    /// Assembles a model from explicit arrays, e.g. to restore a full
    /// checkpoint or perturb single coordinates.
    pub fn from_parts(
        vocab: Vocab,
        dim: usize,
        main: Vec<f64>,
        context: Vec<f64>,
        bias_main: Vec<f64>,
        bias_context: Vec<f64>,
    ) -> Result<Self> {
        let n = vocab.len();
        if main.len() != n * dim
            || context.len() != n * dim
            || bias_main.len() != n
            || bias_context.len() != n
        {
            return Err(Error::InvalidConfig(
                "model arrays do not match the vocabulary and dimension".into(),
            ));
        }
        Ok(EmbeddingModel {
            vocab,
            dim,
            main,
            context,
            bias_main,
            bias_context,
        })
    }

    pub fn main_row(&self, i: usize) -> &[f64] {
        &self.main[i * self.dim..(i + 1) * self.dim]
    }

    pub fn context_row(&self, i: usize) -> &[f64] {
        &self.context[i * self.dim..(i + 1) * self.dim]
    }

    pub fn bias_main(&self, i: usize) -> f64 {
        self.bias_main[i]
    }

    pub fn bias_context(&self, i: usize) -> f64 {
        self.bias_context[i]
    }

    /// Final vector of the word at index `i`: main row + context row.
    pub fn vector_by_index(&self, i: usize) -> Vec<f64> {
        self.main_row(i)
            .iter()
            .zip(self.context_row(i))
            .map(|(a, b)| a + b)
            .collect()
    }

    /// Final vector of a word, if present.
    pub fn vector(&self, word: &str) -> Option<Vec<f64>> {
        self.vocab.get(word).map(|i| self.vector_by_index(i))
    }

    /// True when every parameter is finite.
    pub fn is_finite(&self) -> bool {
        self.main
            .iter()
            .chain(&self.context)
            .chain(&self.bias_main)
            .chain(&self.bias_context)
            .all(|v| v.is_finite())
    }

    /// Writes one "word v1 .. vd" line per vocabulary entry with the
    /// combined (main + context) vector. The text round-trips exactly:
    /// floats print in shortest form that parses back to the same value.
    pub fn save_vectors(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        for i in 0..self.vocab.len() {
            out.push_str(self.vocab.word(i));
            for v in self.vector_by_index(i) {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        fs::write(path, out).map_err(|e| Error::io(path, e))
    }
}

/// Loads vectors in text format: one line per word, "word v1 v2 ... vd".
/// The dimension is inferred from the first line and enforced afterwards.
pub fn load_vectors(path: &Path) -> Result<EmbeddingModel> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut vocab = Vocab::default();
    let mut main: Vec<f64> = Vec::new();
    let mut dim: Option<usize> = None;

    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let word = parts.next().expect("non-empty line has a first field");
        let values: Vec<f64> = parts
            .map(|p| {
                p.parse::<f64>()
                    .map_err(|e| Error::parse(path, lineno, format!("bad number \"{p}\": {e}")))
            })
            .collect::<Result<_>>()?;
        if values.is_empty() {
            return Err(Error::parse(path, lineno, "no vector values"));
        }
        match dim {
            None => dim = Some(values.len()),
            Some(d) if d != values.len() => {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("expected {d} dimensions, found {}", values.len()),
                ));
            }
            _ => {}
        }
        if vocab.get(word).is_some() {
            return Err(Error::parse(path, lineno, format!("duplicate word \"{word}\"")));
        }
        vocab.insert(word);
        main.extend(values);
    }

    let dim = dim.ok_or_else(|| Error::parse(path, 1, "empty vector file"))?;
    Ok(EmbeddingModel::from_rows(vocab, dim, main))
}

/// Trains GloVe vectors on a co-occurrence matrix.
///
/// Entries are visited in an order shuffled once from the seed; each of
/// `iterations` passes uses that order. With a fixed seed the result is
/// bit-reproducible: training is single-threaded by design.
pub fn train_glove(matrix: &CooccurrenceMatrix, params: &TrainingParams) -> Result<EmbeddingModel> {
    params.validate()?;
    let entries = matrix.entries_sorted();
    if entries.is_empty() {
        return Err(Error::InvalidConfig(
            "co-occurrence matrix has no entries".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut model = EmbeddingModel::init_random(matrix.vocab.clone(), params.dim, &mut rng);

    let mut order: Vec<(usize, usize, f64, f64, f64)> = entries
        .into_iter()
        .map(|(i, j, x)| (i, j, x, x.ln(), weighting(x, params.x_max, params.alpha)))
        .collect();
    order.shuffle(&mut rng);

    let d = params.dim;
    let n = matrix.vocab.len();
    let mut gradsq_main = vec![1.0f64; n * d];
    let mut gradsq_context = vec![1.0f64; n * d];
    let mut gradsq_bias_main = vec![1.0f64; n];
    let mut gradsq_bias_context = vec![1.0f64; n];
    let eta = params.learning_rate;

    for pass in 0..params.iterations {
        let mut cost = 0.0f64;
        for &(i, j, _x, ln_x, f) in &order {
            let (wi, wj) = (i * d, j * d);
            let mut diff = model.bias_main[i] + model.bias_context[j] - ln_x;
            for k in 0..d {
                diff += model.main[wi + k] * model.context[wj + k];
            }
            let mut fdiff = f * diff;
            cost += 0.5 * fdiff * diff;
            fdiff *= eta;
            for k in 0..d {
                let temp1 = fdiff * model.context[wj + k];
                let temp2 = fdiff * model.main[wi + k];
                model.main[wi + k] -= temp1 / gradsq_main[wi + k].sqrt();
                model.context[wj + k] -= temp2 / gradsq_context[wj + k].sqrt();
                gradsq_main[wi + k] += temp1 * temp1;
                gradsq_context[wj + k] += temp2 * temp2;
            }
            model.bias_main[i] -= fdiff / gradsq_bias_main[i].sqrt();
            model.bias_context[j] -= fdiff / gradsq_bias_context[j].sqrt();
            fdiff *= fdiff;
            gradsq_bias_main[i] += fdiff;
            gradsq_bias_context[j] += fdiff;
        }
        if !cost.is_finite() {
            return Err(Error::TrainingDiverged { pass });
        }
    }

    debug_assert!(model.is_finite());
    Ok(model)
}

/// The objective J for a model against a matrix; exposed for testing and
/// for verifying training progress.
pub fn glove_loss(
    model: &EmbeddingModel,
    matrix: &CooccurrenceMatrix,
    params: &TrainingParams,
) -> Result<f64> {
    if model.vocab != matrix.vocab || model.dim == 0 {
        return Err(Error::VocabMismatch);
    }
    let mut total = 0.0;
    for (i, j, x) in matrix.entries_sorted() {
        let diff = dot(model.main_row(i), model.context_row(j)) + model.bias_main[i]
            + model.bias_context[j]
            - x.ln();
        total += weighting(x, params.x_max, params.alpha) * diff * diff;
    }
    Ok(total)
}

/// Analytic gradients of J with respect to every parameter, in the same
/// layout as the model arrays. Used by the finite-difference check.
pub struct Gradients {
    pub main: Vec<f64>,
    pub context: Vec<f64>,
    pub bias_main: Vec<f64>,
    pub bias_context: Vec<f64>,
}

pub fn glove_gradients(
    model: &EmbeddingModel,
    matrix: &CooccurrenceMatrix,
    params: &TrainingParams,
) -> Result<Gradients> {
    if model.vocab != matrix.vocab {
        return Err(Error::VocabMismatch);
    }
    let d = model.dim;
    let n = model.vocab.len();
    let mut g = Gradients {
        main: vec![0.0; n * d],
        context: vec![0.0; n * d],
        bias_main: vec![0.0; n],
        bias_context: vec![0.0; n],
    };
    for (i, j, x) in matrix.entries_sorted() {
        let diff = dot(model.main_row(i), model.context_row(j)) + model.bias_main[i]
            + model.bias_context[j]
            - x.ln();
        let scale = 2.0 * weighting(x, params.x_max, params.alpha) * diff;
        for k in 0..d {
            g.main[i * d + k] += scale * model.context[j * d + k];
            g.context[j * d + k] += scale * model.main[i * d + k];
        }
        g.bias_main[i] += scale;
        g.bias_context[j] += scale;
    }
    Ok(g)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
