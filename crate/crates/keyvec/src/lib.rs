//! Keyphrase extraction with per-document word embeddings.
//!
//! The core pipeline trains GloVe vectors on a single document's text,
//! averages the vectors of candidate words occurring in the title and
//! abstract into a reference vector, ranks candidate phrases by cosine
//! similarity to that vector, and returns the top-scored phrases. The
//! number returned defaults to one third of the distinct words in the
//! title and abstract.
//!
//! Around the core sit a TfIdf baseline, corpus ingestion and statistics,
//! a word-set F1 evaluation harness with paired significance tests, and a
//! command-line interface that makes every run reproducible from a seed.
//!
//! Per-document work is data-parallel through [`par`] when the `parallel`
//! feature (on by default) is enabled; the same API runs sequentially
//! without it. Embedding training itself is always single-threaded so that
//! equal seeds give bit-identical models.

pub mod baselines;
pub mod candidates;
pub mod cli;
pub mod corpus;
pub mod embeddings;
mod error;
pub mod evaluation;
pub mod par;
pub mod preprocess;
pub mod rva;

pub use error::{Error, Result};
