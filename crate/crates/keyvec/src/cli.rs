//! Command-line entry point wiring corpus ingestion, training, extraction,
//! evaluation, and statistics into reproducible runs.
//!
//! Every output is accompanied by a run manifest (`manifest.json` inside an
//! output directory, `<name>.manifest.json` next to an output file)
//! recording the command, its full argument set, the tool version, and a
//! timestamp. Primary outputs themselves contain no timestamps, so two runs
//! with the same arguments and seed are byte-identical.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::baselines::{compute_df, tfidf_extract, TextMode};
use crate::corpus::{convert, dataset_statistics, load_corpus, save_corpus, Corpus, Document};
use crate::embeddings::{
    build_cooccurrence_multi, load_vectors, train_glove, EmbeddingModel, TrainingParams,
};
use crate::error::{Error, Result};
use crate::evaluation::{
    five_number_summary, paired_t, semantic_eval, wilcoxon_signed_rank, EvalConfig, FiveNumber,
    MethodRun, SemanticScores, TestResult,
};
use crate::par;
use crate::preprocess::{default_stopwords, tokenize, StopwordList, TextSource, TokenSequence};
use crate::rva::{
    self, DistinctBasis, ExtractionConfig, Fraction, LocalVectors, ModelProvider, RefAveraging,
    ScoredCandidate, SharedVectors, Variant, VectorSource,
};

#[derive(Debug, Parser)]
#[command(
    name = "keyvec",
    version,
    about = "Keyphrase extraction with per-document word embeddings"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert a raw dataset directory into the JSON Lines corpus format.
    Convert(ConvertArgs),
    /// Report gold-keyphrase coverage and length statistics for a corpus.
    Stats(StatsArgs),
    /// Train word vectors and write them as text vector files.
    Train(TrainArgs),
    /// Extract keyphrases for every document in a corpus.
    Extract(ExtractArgs),
    /// Score an extraction method against gold keyphrases.
    Eval(EvalArgs),
    /// Compare two per-document score files with paired significance tests.
    Compare(CompareArgs),
    /// Emit semantic cosine scores against the gold keyphrases for plotting.
    SemevalPlotdata(PlotdataArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetFormat {
    Krapivin,
    Semeval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Rva,
    Tfidf,
}

/// What `train` produces: one collection model or one model per document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TrainSource {
    Loc,
    Cv,
}

/// Embedding hyperparameters shared by every training subcommand.
#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct ModelArgs {
    /// Embedding dimension.
    #[arg(long, default_value_t = 50)]
    pub dim: usize,
    /// Training passes over the co-occurrence entries.
    #[arg(long, default_value_t = 50)]
    pub iterations: usize,
    /// Co-occurrence window size in tokens.
    #[arg(long, default_value_t = 10)]
    pub window: usize,
    /// Weighting cutoff x_max.
    #[arg(long, default_value_t = 100.0)]
    pub xmax: f64,
    /// Weighting exponent.
    #[arg(long, default_value_t = 0.75)]
    pub alpha: f64,
    /// Initial learning rate.
    #[arg(long, default_value_t = 0.05)]
    pub lr: f64,
    /// Seed governing initialization and entry shuffling.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl ModelArgs {
    fn params(&self) -> TrainingParams {
        TrainingParams {
            dim: self.dim,
            iterations: self.iterations,
            x_max: self.xmax,
            alpha: self.alpha,
            window: self.window,
            learning_rate: self.lr,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct ConvertArgs {
    /// Layout of the raw dataset directory.
    #[arg(long, value_enum)]
    pub format: DatasetFormat,
    /// Directory containing the raw dataset files.
    #[arg(long)]
    pub input: PathBuf,
    /// Gold-answer file (required by the semeval format).
    #[arg(long, required_if_eq("format", "semeval"))]
    pub answers: Option<PathBuf>,
    /// Output corpus file (JSON Lines).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct StatsArgs {
    /// Corpus file (JSON Lines).
    #[arg(long)]
    pub corpus: PathBuf,
    /// Stopword file, one word per line (defaults to the built-in list).
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    /// Output JSON file; statistics go to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct TrainArgs {
    /// Corpus file (JSON Lines).
    #[arg(long)]
    pub corpus: PathBuf,
    /// cv trains one model on the whole collection; loc trains one model
    /// per document.
    #[arg(long, value_enum, default_value = "cv")]
    pub source: TrainSource,
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// Output vector file (cv) or directory of per-document files (loc).
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads for per-document work.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct ExtractArgs {
    /// Corpus file (JSON Lines).
    #[arg(long)]
    pub corpus: PathBuf,
    /// Extraction method.
    #[arg(long, value_enum, default_value = "rva")]
    pub method: Method,
    /// Which text feeds the reference vector and the candidate set.
    #[arg(long, value_enum, default_value = "a-a")]
    pub variant: Variant,
    /// Where the word vectors come from.
    #[arg(long, value_enum, default_value = "loc")]
    pub source: VectorSource,
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// Stopword file, one word per line (defaults to the built-in list).
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    /// Vector file for the pretrained source.
    #[arg(long, required_if_eq("source", "pv"))]
    pub vectors: Option<PathBuf>,
    /// Keyphrase count as a fraction of distinct summary words (N/D).
    #[arg(long, default_value = "1/3")]
    pub fraction: Fraction,
    /// Reference averaging: per occurrence or per distinct word.
    #[arg(long, value_enum, default_value = "occurrence")]
    pub ref_averaging: RefAveraging,
    /// What the top-N rule counts: all summary tokens or candidates only.
    #[arg(long, value_enum, default_value = "all")]
    pub distinct_basis: DistinctBasis,
    /// Text the tfidf method scores.
    #[arg(long, value_enum, default_value = "ab")]
    pub text: TextMode,
    /// Output file (JSON Lines, one object per document).
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads for per-document work.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct EvalArgs {
    /// Corpus file (JSON Lines) with gold keyphrases.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Extraction method.
    #[arg(long, value_enum, default_value = "rva")]
    pub method: Method,
    /// Which text feeds the reference vector and the candidate set.
    #[arg(long, value_enum, default_value = "a-a")]
    pub variant: Variant,
    /// Where the word vectors come from.
    #[arg(long, value_enum, default_value = "loc")]
    pub source: VectorSource,
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// Stopword file, one word per line (defaults to the built-in list).
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    /// Vector file for the pretrained source.
    #[arg(long, required_if_eq("source", "pv"))]
    pub vectors: Option<PathBuf>,
    /// Keyphrase count as a fraction of distinct summary words (N/D).
    #[arg(long, default_value = "1/3")]
    pub fraction: Fraction,
    /// Reference averaging: per occurrence or per distinct word.
    #[arg(long, value_enum, default_value = "occurrence")]
    pub ref_averaging: RefAveraging,
    /// What the top-N rule counts: all summary tokens or candidates only.
    #[arg(long, value_enum, default_value = "all")]
    pub distinct_basis: DistinctBasis,
    /// Text the tfidf method scores.
    #[arg(long, value_enum, default_value = "ab")]
    pub text: TextMode,
    /// Also report micro-averaged (pooled) scores.
    #[arg(long)]
    pub micro: bool,
    /// Output directory for per_doc.csv and summary.json.
    #[arg(long, default_value = "eval-out")]
    pub out: PathBuf,
    /// Worker threads for per-document work.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct CompareArgs {
    /// First per-document CSV, as written by eval.
    #[arg(long)]
    pub a: PathBuf,
    /// Second per-document CSV, as written by eval.
    #[arg(long)]
    pub b: PathBuf,
    /// Output directory for tests.json and diffs.csv.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct PlotdataArgs {
    /// Corpus file (JSON Lines) with gold keyphrases.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Which text feeds the reference vector and the candidate set.
    #[arg(long, value_enum, default_value = "a-a")]
    pub variant: Variant,
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// Stopword file, one word per line (defaults to the built-in list).
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    /// Keyphrase count as a fraction of distinct summary words (N/D).
    #[arg(long, default_value = "1/3")]
    pub fraction: Fraction,
    /// Reference averaging: per occurrence or per distinct word.
    #[arg(long, value_enum, default_value = "occurrence")]
    pub ref_averaging: RefAveraging,
    /// What the top-N rule counts: all summary tokens or candidates only.
    #[arg(long, value_enum, default_value = "all")]
    pub distinct_basis: DistinctBasis,
    /// Competitor keyphrase file (JSON Lines, as written by extract).
    #[arg(long)]
    pub competitor: Option<PathBuf>,
    /// Output directory for scores.csv and five_number.json.
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads for per-document work.
    #[arg(long)]
    pub workers: Option<usize>,
}

/// Parses the argument list and runs one subcommand. Returns the process
/// exit code: 0 on success, 1 on runtime errors, 2 on argument errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Convert(a) => run_convert(a),
        Command::Stats(a) => run_stats(a),
        Command::Train(a) => run_train(a),
        Command::Extract(a) => run_extract(a),
        Command::Eval(a) => run_eval(a),
        Command::Compare(a) => run_compare(a),
        Command::SemevalPlotdata(a) => run_plotdata(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn run_convert(args: &ConvertArgs) -> Result<()> {
    let corpus = match args.format {
        DatasetFormat::Krapivin => {
            if args.answers.is_some() {
                log::warn!("--answers is ignored for the krapivin format");
            }
            convert::convert_krapivin(&args.input)?
        }
        DatasetFormat::Semeval => {
            let answers = args.answers.as_ref().ok_or_else(|| {
                Error::InvalidConfig("--answers is required with --format semeval".into())
            })?;
            convert::convert_semeval(&args.input, answers)?
        }
    };
    create_parent(&args.out)?;
    save_corpus(&corpus, &args.out)?;
    write_manifest("convert", args, &args.out)
}

fn run_stats(args: &StatsArgs) -> Result<()> {
    let corpus = load_corpus(&args.corpus)?;
    let stopwords = load_stopwords(&args.stopwords)?;
    let report = dataset_statistics(&corpus, &stopwords);
    let json = to_pretty_json(&report);
    match &args.out {
        Some(path) => {
            write_text(path, &json)?;
            write_manifest("stats", args, path)
        }
        None => {
            println!("{}", json.trim_end());
            Ok(())
        }
    }
}

fn run_train(args: &TrainArgs) -> Result<()> {
    let corpus = load_corpus(&args.corpus)?;
    let params = args.model.params();
    match args.source {
        TrainSource::Cv => {
            let model = train_collection(&corpus, &params)?;
            create_parent(&args.out)?;
            model.save_vectors(&args.out)?;
        }
        TrainSource::Loc => {
            fs::create_dir_all(&args.out).map_err(|e| Error::io(&args.out, e))?;
            let provider = LocalVectors::new(params);
            let results = with_workers(args.workers, || {
                par::map_docs(&corpus.documents, |doc| -> Result<()> {
                    let model = provider.model_for(doc)?;
                    let name = format!("{}.vectors", safe_file_stem(&doc.id));
                    model.save_vectors(&args.out.join(name))
                })
            });
            results.into_iter().collect::<Result<Vec<()>>>()?;
        }
    }
    write_manifest("train", args, &args.out)
}

fn run_extract(args: &ExtractArgs) -> Result<()> {
    let corpus = load_corpus(&args.corpus)?;
    let stopwords = load_stopwords(&args.stopwords)?;
    let lines = match args.method {
        Method::Rva => {
            let config = ExtractionConfig {
                variant: args.variant,
                source: args.source,
                training: args.model.params(),
                top_fraction: args.fraction,
                ref_averaging: args.ref_averaging,
                distinct_basis: args.distinct_basis,
                stopwords,
            };
            let provider = build_provider(args.source, args.model.params(), &args.vectors, &corpus)?;
            let results = with_workers(args.workers, || {
                par::map_docs(&corpus.documents, |doc| {
                    rva::extract(doc, &config, &provider)
                        .map(|ex| keyphrase_line(&doc.id, &ex.selected, ex.n_requested, ex.short_output))
                })
            });
            results.into_iter().collect::<Result<Vec<String>>>()?
        }
        Method::Tfidf => {
            let table = compute_df(&corpus, args.text)?;
            let results = with_workers(args.workers, || {
                par::map_docs(&corpus.documents, |doc| {
                    tfidf_extract(doc, &table, args.text, args.fraction)
                        .map(|sel| keyphrase_line(&doc.id, &sel.phrases, sel.n_requested, sel.short_output))
                })
            });
            results.into_iter().collect::<Result<Vec<String>>>()?
        }
    };
    write_text(&args.out, &(lines.join("\n") + "\n"))?;
    write_manifest("extract", args, &args.out)
}

fn run_eval(args: &EvalArgs) -> Result<()> {
    let corpus = load_corpus(&args.corpus)?;
    let stopwords = load_stopwords(&args.stopwords)?;
    let config = EvalConfig { micro: args.micro };
    let label = method_label(args);
    let run = match args.method {
        Method::Rva => {
            let ex_config = ExtractionConfig {
                variant: args.variant,
                source: args.source,
                training: args.model.params(),
                top_fraction: args.fraction,
                ref_averaging: args.ref_averaging,
                distinct_basis: args.distinct_basis,
                stopwords,
            };
            let provider = build_provider(args.source, args.model.params(), &args.vectors, &corpus)?;
            with_workers(args.workers, || {
                crate::evaluation::evaluate(&corpus, &label, config, |doc| {
                    rva::extract(doc, &ex_config, &provider).map(|ex| ex.keyphrases())
                })
            })?
        }
        Method::Tfidf => {
            let table = compute_df(&corpus, args.text)?;
            with_workers(args.workers, || {
                crate::evaluation::evaluate(&corpus, &label, config, |doc| {
                    tfidf_extract(doc, &table, args.text, args.fraction)
                        .map(|sel| sel.phrases.iter().map(|c| c.surface()).collect())
                })
            })?
        }
    };
    fs::create_dir_all(&args.out).map_err(|e| Error::io(&args.out, e))?;
    write_per_doc_csv(&args.out.join("per_doc.csv"), &run)?;
    write_text(&args.out.join("summary.json"), &to_pretty_json(&eval_summary(&run)))?;
    write_manifest("eval", args, &args.out)
}

fn run_compare(args: &CompareArgs) -> Result<()> {
    let (method_a, f1_a) = read_per_doc_csv(&args.a)?;
    let (method_b, f1_b) = read_per_doc_csv(&args.b)?;

    let mut rows: Vec<(String, f64, f64)> = Vec::new();
    for (id, a) in &f1_a {
        if let Some(b) = f1_b.get(id) {
            rows.push((id.clone(), *a, *b));
        }
    }
    if rows.is_empty() {
        return Err(Error::Eval("the two runs share no document ids".into()));
    }
    let diffs: Vec<f64> = rows.iter().map(|(_, a, b)| a - b).collect();

    #[derive(Serialize)]
    struct CompareReport {
        method_a: String,
        method_b: String,
        n: usize,
        mean_diff: f64,
        paired_t: Option<TestResult>,
        paired_t_error: Option<String>,
        wilcoxon: Option<TestResult>,
        wilcoxon_error: Option<String>,
    }
    let (paired, paired_err) = split_result(paired_t(&diffs));
    let (wilcoxon, wilcoxon_err) = split_result(wilcoxon_signed_rank(&diffs));
    let report = CompareReport {
        method_a,
        method_b,
        n: rows.len(),
        mean_diff: diffs.iter().sum::<f64>() / diffs.len() as f64,
        paired_t: paired,
        paired_t_error: paired_err,
        wilcoxon,
        wilcoxon_error: wilcoxon_err,
    };

    fs::create_dir_all(&args.out).map_err(|e| Error::io(&args.out, e))?;
    write_text(&args.out.join("tests.json"), &to_pretty_json(&report))?;

    let diffs_path = args.out.join("diffs.csv");
    let mut w = csv::Writer::from_path(&diffs_path).map_err(|e| csv_err(&diffs_path, e))?;
    w.write_record(["doc_id", "f1_a", "f1_b", "diff"])
        .map_err(|e| csv_err(&diffs_path, e))?;
    for (id, a, b) in &rows {
        w.write_record([id.as_str(), &a.to_string(), &b.to_string(), &(a - b).to_string()])
            .map_err(|e| csv_err(&diffs_path, e))?;
    }
    w.flush().map_err(|e| Error::io(&diffs_path, e))?;
    write_manifest("compare", args, &args.out)
}

fn run_plotdata(args: &PlotdataArgs) -> Result<()> {
    let corpus = load_corpus(&args.corpus)?;
    let stopwords = load_stopwords(&args.stopwords)?;
    let competitor = match &args.competitor {
        Some(path) => read_keyphrase_file(path)?,
        None => BTreeMap::new(),
    };
    // Semantic scoring needs the document's own vector space, so the
    // vector source is always local here.
    let config = ExtractionConfig {
        variant: args.variant,
        source: VectorSource::Loc,
        training: args.model.params(),
        top_fraction: args.fraction,
        ref_averaging: args.ref_averaging,
        distinct_basis: args.distinct_basis,
        stopwords,
    };
    let provider = LocalVectors::with_cache(args.model.params(), cache_env());

    struct DocScores {
        id: String,
        result: Result<SemanticScores>,
    }
    let outcomes = with_workers(args.workers, || {
        par::map_docs(&corpus.documents, |doc| DocScores {
            id: doc.id.clone(),
            result: (|| {
                let model = provider.model_for(doc)?;
                let ex = rva::extract_with_model(doc, &config, &model)?;
                let comp = competitor.get(&doc.id).map(|v| v.as_slice());
                semantic_eval(&model, doc, &ex.reference, &ex.selected, &ex.rejected, comp)
            })(),
        })
    });

    let mut scored: Vec<(String, SemanticScores)> = Vec::new();
    let mut excluded: Vec<(String, String)> = Vec::new();
    for outcome in outcomes {
        match outcome.result {
            Ok(s) => scored.push((outcome.id, s)),
            Err(e) => excluded.push((outcome.id, e.to_string())),
        }
    }
    if scored.is_empty() {
        return Err(Error::Eval(format!(
            "no document could be scored ({} excluded)",
            excluded.len()
        )));
    }

    fs::create_dir_all(&args.out).map_err(|e| Error::io(&args.out, e))?;
    let csv_path = args.out.join("scores.csv");
    let mut w = csv::Writer::from_path(&csv_path).map_err(|e| csv_err(&csv_path, e))?;
    w.write_record(["doc_id", "reference", "selected", "rejected", "competitor"])
        .map_err(|e| csv_err(&csv_path, e))?;
    for (id, s) in &scored {
        w.write_record([
            id.as_str(),
            &s.reference.to_string(),
            &s.selected.to_string(),
            &opt_to_string(s.rejected),
            &opt_to_string(s.competitor),
        ])
        .map_err(|e| csv_err(&csv_path, e))?;
    }
    w.flush().map_err(|e| Error::io(&csv_path, e))?;

    #[derive(Serialize)]
    struct PlotSummary {
        n_documents: usize,
        reference: FiveNumber,
        selected: FiveNumber,
        rejected: Option<FiveNumber>,
        competitor: Option<FiveNumber>,
        excluded: Vec<ExcludedDoc>,
    }
    let column = |pick: fn(&SemanticScores) -> Option<f64>| -> Option<FiveNumber> {
        let values: Vec<f64> = scored.iter().filter_map(|(_, s)| pick(s)).collect();
        five_number_summary(&values).ok()
    };
    let summary = PlotSummary {
        n_documents: scored.len(),
        reference: five_number_summary(
            &scored.iter().map(|(_, s)| s.reference).collect::<Vec<_>>(),
        )?,
        selected: five_number_summary(
            &scored.iter().map(|(_, s)| s.selected).collect::<Vec<_>>(),
        )?,
        rejected: column(|s| s.rejected),
        competitor: column(|s| s.competitor),
        excluded: excluded
            .iter()
            .map(|(id, error)| ExcludedDoc {
                id: id.clone(),
                error: error.clone(),
            })
            .collect(),
    };
    write_text(&args.out.join("five_number.json"), &to_pretty_json(&summary))?;
    write_manifest("semeval-plotdata", args, &args.out)
}

/// One fixed model for the whole collection, trained on every document's
/// full view with windows that never span document boundaries.
fn train_collection(corpus: &Corpus, params: &TrainingParams) -> Result<EmbeddingModel> {
    let sequences: Vec<TokenSequence> = corpus
        .documents
        .iter()
        .map(|d| tokenize(&d.full_view_text(), TextSource::Fulltext))
        .collect();
    let matrix = build_cooccurrence_multi(&sequences, params.window)?;
    train_glove(&matrix, params)
}

/// The vector source an extraction run asked for, resolved against the
/// corpus: loc trains per document (with `KEYVEC_CACHE` honored), cv trains
/// one collection model up front, pv loads a vector file.
enum Provider {
    Local(LocalVectors),
    Shared(SharedVectors),
}

impl ModelProvider for Provider {
    fn model_for(&self, doc: &Document) -> Result<Arc<EmbeddingModel>> {
        match self {
            Provider::Local(p) => p.model_for(doc),
            Provider::Shared(p) => p.model_for(doc),
        }
    }
}

fn build_provider(
    source: VectorSource,
    params: TrainingParams,
    vectors: &Option<PathBuf>,
    corpus: &Corpus,
) -> Result<Provider> {
    match source {
        VectorSource::Loc => Ok(Provider::Local(LocalVectors::with_cache(params, cache_env()))),
        VectorSource::Cv => Ok(Provider::Shared(SharedVectors(Arc::new(train_collection(
            corpus, &params,
        )?)))),
        VectorSource::Pv => {
            let path = vectors.as_ref().ok_or_else(|| {
                Error::InvalidConfig("--vectors is required with --source pv".into())
            })?;
            Ok(Provider::Shared(SharedVectors(Arc::new(load_vectors(path)?))))
        }
    }
}

fn cache_env() -> Option<PathBuf> {
    std::env::var_os("KEYVEC_CACHE")
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

/// Runs `f` inside a rayon pool of the requested size. Without the
/// parallel feature the request is ignored with a warning.
fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    #[cfg(feature = "parallel")]
    if let Some(k) = workers {
        match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => return pool.install(f),
            Err(e) => log::warn!("could not build a {k}-thread pool: {e}; using the default"),
        }
    }
    #[cfg(not(feature = "parallel"))]
    if workers.is_some() {
        log::warn!("--workers has no effect without the \"parallel\" feature");
    }
    f()
}

fn load_stopwords(path: &Option<PathBuf>) -> Result<StopwordList> {
    match path {
        Some(p) => StopwordList::from_file(p),
        None => Ok(default_stopwords().clone()),
    }
}

#[derive(Serialize)]
struct PhraseScore {
    phrase: String,
    score: f64,
}

fn keyphrase_line(
    id: &str,
    phrases: &[ScoredCandidate],
    n_requested: usize,
    short_output: bool,
) -> String {
    #[derive(Serialize)]
    struct Line<'a> {
        id: &'a str,
        keyphrases: Vec<PhraseScore>,
        n_requested: usize,
        short_output: bool,
    }
    let line = Line {
        id,
        keyphrases: phrases
            .iter()
            .map(|c| PhraseScore {
                phrase: c.surface(),
                score: c.score,
            })
            .collect(),
        n_requested,
        short_output,
    };
    serde_json::to_string(&line).expect("keyphrase line serializes")
}

/// Reads a keyphrase file written by extract back into id -> phrases.
fn read_keyphrase_file(path: &Path) -> Result<BTreeMap<String, Vec<String>>> {
    #[derive(Deserialize)]
    struct PhraseIn {
        phrase: String,
    }
    #[derive(Deserialize)]
    struct LineIn {
        id: String,
        keyphrases: Vec<PhraseIn>,
    }
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed: LineIn =
            serde_json::from_str(line).map_err(|e| Error::parse(path, i + 1, e.to_string()))?;
        let phrases = parsed.keyphrases.into_iter().map(|k| k.phrase).collect();
        if map.insert(parsed.id.clone(), phrases).is_some() {
            return Err(Error::DuplicateId(parsed.id));
        }
    }
    Ok(map)
}

fn method_label(args: &EvalArgs) -> String {
    match args.method {
        Method::Rva => format!("rva-{}-{}-{}", args.variant, args.source, args.model.dim),
        Method::Tfidf => format!("tfidf-{}", args.text),
    }
}

#[derive(Serialize)]
struct ExcludedDoc {
    id: String,
    error: String,
}

#[derive(Serialize)]
struct EvalSummary<'a> {
    method: &'a str,
    n_documents: usize,
    n_excluded: usize,
    mean_f1: f64,
    micro: Option<&'a crate::evaluation::PRF>,
    excluded: Vec<ExcludedDoc>,
}

fn eval_summary(run: &MethodRun) -> EvalSummary<'_> {
    EvalSummary {
        method: &run.method_name,
        n_documents: run.per_doc.len(),
        n_excluded: run.excluded.len(),
        mean_f1: run.mean_f1,
        micro: run.micro.as_ref(),
        excluded: run
            .excluded
            .iter()
            .map(|(id, error)| ExcludedDoc {
                id: id.clone(),
                error: error.clone(),
            })
            .collect(),
    }
}

fn write_per_doc_csv(path: &Path, run: &MethodRun) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(["doc_id", "method", "precision", "recall", "f1"])
        .map_err(|e| csv_err(path, e))?;
    for (id, prf) in &run.per_doc {
        w.write_record([
            id.as_str(),
            &run.method_name,
            &prf.precision.to_string(),
            &prf.recall.to_string(),
            &prf.f1.to_string(),
        ])
        .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads a per-document CSV back into (method label, doc_id -> f1).
fn read_per_doc_csv(path: &Path) -> Result<(String, BTreeMap<String, f64>)> {
    #[derive(Deserialize)]
    struct Row {
        doc_id: String,
        method: String,
        f1: f64,
    }
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let mut method = String::new();
    let mut map = BTreeMap::new();
    for row in reader.deserialize::<Row>() {
        let row = row.map_err(|e| csv_err(path, e))?;
        if method.is_empty() {
            method = row.method;
        }
        if map.insert(row.doc_id.clone(), row.f1).is_some() {
            return Err(Error::DuplicateId(row.doc_id));
        }
    }
    if map.is_empty() {
        return Err(Error::Eval(format!("{}: no data rows", path.display())));
    }
    Ok((method, map))
}

fn split_result(r: Result<TestResult>) -> (Option<TestResult>, Option<String>) {
    match r {
        Ok(t) => (Some(t), None),
        Err(e) => (None, Some(e.to_string())),
    }
}

fn opt_to_string(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

#[derive(Serialize)]
struct RunManifest<'a, T: Serialize> {
    command: &'a str,
    /// The complete argument set of the run; everything the output depends
    /// on, including the model parameters and seed.
    config: &'a T,
    version: &'a str,
    timestamp: String,
}

/// Writes the manifest for an output: inside `out` when it is a directory,
/// as a `<name>.manifest.json` sibling when it is a file.
fn write_manifest<T: Serialize>(command: &str, args: &T, out: &Path) -> Result<()> {
    let path = manifest_path(out);
    let manifest = RunManifest {
        command,
        config: args,
        version: env!("CARGO_PKG_VERSION"),
        timestamp: chrono::Utc::now().to_rfc3339(),
    };
    write_text(&path, &to_pretty_json(&manifest))
}

fn manifest_path(out: &Path) -> PathBuf {
    if out.is_dir() {
        out.join("manifest.json")
    } else {
        let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
        name.push(".manifest.json");
        out.with_file_name(name)
    }
}

fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut json = serde_json::to_string_pretty(value).expect("report serializes");
    json.push('\n');
    json
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    create_parent(path)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn create_parent(path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    Ok(())
}

/// Document ids become file names in loc training output; anything outside
/// [A-Za-z0-9._-] is replaced.
fn safe_file_stem(id: &str) -> String {
    id.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-') {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    Error::Eval(format!("{}: {}", path.display(), e))
}
