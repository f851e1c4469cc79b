// Copyright 2026 The cooccur Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Command-line front end: `analyze`, `convert` and `stats`.
//!
//! Exit codes:
//!
//! | code | meaning                                  |
//! |------|------------------------------------------|
//! | 0    | success                                  |
//! | 1    | an output file could not be written      |
//! | 2    | an input could not be read or parsed     |
//! | 3    | the dataset has no labeled images        |
//! | 4    | invalid configuration or usage           |
//! | 5    | `--expect-classes` did not match         |
//!
//! Diagnostics go to stderr; data and the run summary go to stdout.

use std::ffi::OsString;
use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Deserialize;
use thiserror::Error;

use crate::cooccurrence::{
    build_matrix, build_matrix_parallel, count_frequencies, count_frequencies_parallel, select_base_classes,
    BaseClassPolicy, CooccurrenceThreshold, ThresholdMode,
};
use crate::fpm::{
    base_class_rules, build_fp_tree, fp_growth_parallel, fp_growth_with, rules_from_itemsets, AssociationRule,
    Itemset, MinSupport, MiningConfig,
};
use crate::ingest::{
    parse_coco, parse_detections_jsonl, parse_transactions_tsv, parse_voc, write_transactions_tsv, IngestError,
    LabelVocabulary, TransactionSet, DEFAULT_SCORE_THRESHOLD,
};
use crate::report::{build_report, chart_counts, render, render_chart_csv, CooccurrenceReport, OutputFormat};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: IngestError },
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("dataset is empty: {0}")]
    EmptyDataset(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("expected {expected} classes, found {found}")]
    ExpectClasses { expected: usize, found: usize },
    #[error("cannot write {path}: {source}")]
    Output { path: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Output { .. } => 1,
            CliError::Input { .. } | CliError::Read { .. } => 2,
            CliError::EmptyDataset(_) => 3,
            CliError::Config(_) => 4,
            CliError::ExpectClasses { .. } => 5,
        }
    }
}

fn config_err(e: impl ToString) -> CliError {
    CliError::Config(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Coco,
    Voc,
    Detections,
    Tsv,
}

impl InputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            InputFormat::Coco => "coco",
            InputFormat::Voc => "voc",
            InputFormat::Detections => "detections",
            InputFormat::Tsv => "tsv",
        }
    }

    fn infer(path: &Path) -> Option<Self> {
        if path.is_dir() {
            return Some(InputFormat::Voc);
        }
        match path.extension()?.to_str()? {
            "json" => Some(InputFormat::Coco),
            "jsonl" | "ndjson" => Some(InputFormat::Detections),
            "xml" => Some(InputFormat::Voc),
            "tsv" | "txt" => Some(InputFormat::Tsv),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ModeArg {
    Conditional,
    Support,
}

impl From<ModeArg> for ThresholdMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Conditional => ThresholdMode::Conditional,
            ModeArg::Support => ThresholdMode::Support,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "cooccur", version, about = "Base-class / co-occurring-class statistics for multilabel object data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the full pipeline and write the co-occurrence report.
    Analyze(AnalyzeArgs),
    /// Convert any supported input to native TSV.
    Convert(ConvertArgs),
    /// Print per-label document frequencies.
    Stats(InputArgs),
}

#[derive(Args, Debug, Default)]
struct InputArgs {
    /// Flat JSON config; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Input file(s); VOC also accepts directories of XML files.
    #[arg(long, num_args = 1..)]
    input: Vec<PathBuf>,
    /// Input format (inferred from the extension when omitted).
    #[arg(long, value_enum)]
    format: Option<InputFormat>,
    /// Minimum detector score for detections input.
    #[arg(long)]
    score_threshold: Option<f64>,
    /// Closed vocabulary for detections input: coco, voc, or a file with one name per line.
    #[arg(long)]
    vocabulary: Option<String>,
    /// Fail (exit 5) unless the vocabulary has exactly this many classes.
    #[arg(long)]
    expect_classes: Option<usize>,
    /// Worker threads for ingestion, counting and mining.
    #[arg(long)]
    threads: Option<usize>,
    /// Dataset name echoed in the report (defaults to the input file stem).
    #[arg(long)]
    dataset_name: Option<String>,
}

#[derive(Args, Debug, Default)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Base classes: the k most frequent labels.
    #[arg(long)]
    base_top_k: Option<usize>,
    /// Base classes: labels present in at least this fraction of images.
    #[arg(long)]
    base_min_fraction: Option<f64>,
    /// Minimum co-occurrence ratio t (inclusive).
    #[arg(long)]
    cooccur_threshold: Option<f64>,
    /// Measure t against the base count (conditional) or all images (support).
    #[arg(long, value_enum)]
    threshold_mode: Option<ModeArg>,
    /// Minimum itemset support as a fraction of images.
    #[arg(long)]
    min_support: Option<f64>,
    /// Minimum association-rule confidence.
    #[arg(long)]
    min_confidence: Option<f64>,
    /// Largest itemset to mine.
    #[arg(long)]
    max_itemset_size: Option<usize>,
    /// Report path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Report format: tsv, json or markdown.
    #[arg(long)]
    output_format: Option<OutputFormat>,
    /// Per-base co-occurring class counts as CSV.
    #[arg(long)]
    chart_out: Option<PathBuf>,
    /// Association rules with a single base-class antecedent, as TSV.
    #[arg(long)]
    rules_out: Option<PathBuf>,
    /// Frequent itemsets as TSV.
    #[arg(long)]
    itemsets_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConvertArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Output TSV path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum PathList {
    One(PathBuf),
    Many(Vec<PathBuf>),
}

/// Keys of the JSON config file; each mirrors a flag of the same name.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    input: Option<PathList>,
    format: Option<InputFormat>,
    score_threshold: Option<f64>,
    vocabulary: Option<String>,
    expect_classes: Option<usize>,
    threads: Option<usize>,
    dataset_name: Option<String>,
    base_top_k: Option<usize>,
    base_min_fraction: Option<f64>,
    cooccur_threshold: Option<f64>,
    threshold_mode: Option<ModeArg>,
    min_support: Option<f64>,
    min_confidence: Option<f64>,
    max_itemset_size: Option<usize>,
    output: Option<PathBuf>,
    output_format: Option<String>,
    chart_out: Option<PathBuf>,
    rules_out: Option<PathBuf>,
    itemsets_out: Option<PathBuf>,
}

impl ConfigFile {
    fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(ConfigFile::default());
        };
        let text = fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| config_err(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VocabularySource {
    Coco,
    Voc,
    File(PathBuf),
}

impl VocabularySource {
    fn parse(s: &str) -> Self {
        match s {
            "coco" => VocabularySource::Coco,
            "voc" => VocabularySource::Voc,
            path => VocabularySource::File(PathBuf::from(path)),
        }
    }

    fn describe(&self) -> String {
        match self {
            VocabularySource::Coco => "coco".into(),
            VocabularySource::Voc => "voc".into(),
            VocabularySource::File(p) => p.display().to_string(),
        }
    }

    fn load(&self) -> Result<LabelVocabulary, CliError> {
        match self {
            VocabularySource::Coco => Ok(LabelVocabulary::coco80()),
            VocabularySource::Voc => Ok(LabelVocabulary::voc20()),
            VocabularySource::File(path) => {
                let text = fs::read_to_string(path).map_err(|source| CliError::Read {
                    path: path.clone(),
                    source,
                })?;
                LabelVocabulary::new(text.lines().map(str::trim).filter(|l| !l.is_empty())).map_err(|source| {
                    CliError::Input {
                        path: path.clone(),
                        source,
                    }
                })
            }
        }
    }
}

/// Where the transactions come from.
#[derive(Debug, Clone, PartialEq)]
pub struct InputConfig {
    pub paths: Vec<PathBuf>,
    pub format: InputFormat,
    pub score_threshold: f64,
    pub vocabulary: VocabularySource,
    pub expect_classes: Option<usize>,
    pub threads: usize,
    pub dataset_name: String,
}

/// Fully resolved settings for `analyze`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: InputConfig,
    pub base_policy: BaseClassPolicy,
    pub threshold: CooccurrenceThreshold,
    pub mining: MiningConfig,
    pub output: Option<PathBuf>,
    pub output_format: OutputFormat,
    pub chart_out: Option<PathBuf>,
    pub rules_out: Option<PathBuf>,
    pub itemsets_out: Option<PathBuf>,
}

fn unit_interval(name: &str, v: f64) -> Result<f64, CliError> {
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(config_err(format!("{name} {v} outside [0,1]")))
    }
}

fn resolve_input(args: InputArgs, file: &mut ConfigFile) -> Result<InputConfig, CliError> {
    let paths = if !args.input.is_empty() {
        args.input
    } else {
        match file.input.take() {
            Some(PathList::One(p)) => vec![p],
            Some(PathList::Many(ps)) => ps,
            None => Vec::new(),
        }
    };
    if paths.is_empty() {
        return Err(config_err("no --input given"));
    }
    if paths.iter().any(|p| p.as_os_str().is_empty()) {
        return Err(config_err("empty input path"));
    }
    let format = match args.format.or(file.format) {
        Some(f) => f,
        None => InputFormat::infer(&paths[0]).ok_or_else(|| {
            config_err(format!("cannot infer the format of {}; pass --format", paths[0].display()))
        })?,
    };
    if format != InputFormat::Voc && paths.len() > 1 {
        return Err(config_err(format!("{} input takes exactly one path", format.as_str())));
    }
    let score_threshold = unit_interval(
        "score_threshold",
        args.score_threshold.or(file.score_threshold).unwrap_or(DEFAULT_SCORE_THRESHOLD),
    )?;
    let vocabulary = VocabularySource::parse(
        args.vocabulary
            .as_deref()
            .or(file.vocabulary.as_deref())
            .unwrap_or("coco"),
    );
    let threads = args.threads.or(file.threads).unwrap_or(1);
    if threads == 0 {
        return Err(config_err("threads must be at least 1"));
    }
    let dataset_name = args
        .dataset_name
        .or(file.dataset_name.take())
        .unwrap_or_else(|| {
            paths[0]
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default()
        });
    Ok(InputConfig {
        paths,
        format,
        score_threshold,
        vocabulary,
        expect_classes: args.expect_classes.or(file.expect_classes),
        threads,
        dataset_name,
    })
}

fn resolve_run(args: AnalyzeArgs) -> Result<RunConfig, CliError> {
    let mut file = ConfigFile::load(args.input.config.as_deref())?;
    let input = resolve_input(args.input, &mut file)?;

    let base_policy = match (args.base_top_k, args.base_min_fraction) {
        (Some(_), Some(_)) => return Err(config_err("--base-top-k and --base-min-fraction are exclusive")),
        (Some(k), None) => BaseClassPolicy::top_k(k).map_err(config_err)?,
        (None, Some(f)) => BaseClassPolicy::min_fraction(f).map_err(config_err)?,
        (None, None) => match (file.base_top_k, file.base_min_fraction) {
            (Some(_), Some(_)) => return Err(config_err("base_top_k and base_min_fraction are exclusive")),
            (Some(k), None) => BaseClassPolicy::top_k(k).map_err(config_err)?,
            (None, Some(f)) => BaseClassPolicy::min_fraction(f).map_err(config_err)?,
            (None, None) => BaseClassPolicy::default(),
        },
    };
    let mode: ThresholdMode = args
        .threshold_mode
        .or(file.threshold_mode)
        .map(Into::into)
        .unwrap_or_default();
    let t = args.cooccur_threshold.or(file.cooccur_threshold).unwrap_or(0.5);
    let threshold = CooccurrenceThreshold::with_mode(t, mode).map_err(config_err)?;

    let mining = MiningConfig {
        min_support: MinSupport::Fraction(args.min_support.or(file.min_support).unwrap_or(0.01)),
        min_confidence: args.min_confidence.or(file.min_confidence).unwrap_or(0.5),
        max_itemset_size: args.max_itemset_size.or(file.max_itemset_size),
    };
    mining.validate().map_err(config_err)?;

    let output_format = match args.output_format {
        Some(f) => f,
        None => match file.output_format.as_deref() {
            Some(s) => s.parse().map_err(config_err)?,
            None => OutputFormat::default(),
        },
    };
    let non_empty = |p: Option<PathBuf>, name: &str| -> Result<Option<PathBuf>, CliError> {
        match p {
            Some(p) if p.as_os_str().is_empty() => Err(config_err(format!("{name} path is empty"))),
            other => Ok(other),
        }
    };
    Ok(RunConfig {
        input,
        base_policy,
        threshold,
        mining,
        output: non_empty(args.output.or(file.output), "output")?,
        output_format,
        chart_out: non_empty(args.chart_out.or(file.chart_out), "chart_out")?,
        rules_out: non_empty(args.rules_out.or(file.rules_out), "rules_out")?,
        itemsets_out: non_empty(args.itemsets_out.or(file.itemsets_out), "itemsets_out")?,
    })
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn open(path: &Path) -> Result<BufReader<fs::File>, CliError> {
    fs::File::open(path)
        .map(BufReader::new)
        .map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })
}

fn voc_documents(paths: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    let mut files = Vec::new();
    for path in paths {
        if path.is_dir() {
            let entries = fs::read_dir(path).map_err(|source| CliError::Read {
                path: path.clone(),
                source,
            })?;
            let mut found: Vec<PathBuf> = entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "xml"))
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(path.clone());
        }
    }
    Ok(files)
}

/// Reads the configured input into a transaction set.
pub fn load_input(cfg: &InputConfig) -> Result<TransactionSet, CliError> {
    let first = &cfg.paths[0];
    let wrap = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Input { path, source }
    };
    let set = match cfg.format {
        InputFormat::Coco => parse_coco(&read_text(first)?).map_err(wrap(first))?,
        InputFormat::Tsv => parse_transactions_tsv(open(first)?).map_err(wrap(first))?,
        InputFormat::Detections => {
            let vocab = cfg.vocabulary.load()?;
            parse_detections_jsonl(open(first)?, &vocab, cfg.score_threshold).map_err(wrap(first))?
        }
        InputFormat::Voc => {
            let files = voc_documents(&cfg.paths)?;
            let docs = files
                .par_iter()
                .map(|p| {
                    let id = p
                        .file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_default();
                    read_text(p).map(|text| (id, text))
                })
                .collect::<Result<Vec<_>, _>>()?;
            parse_voc(docs).map_err(wrap(first))?
        }
    };
    if let Some(expected) = cfg.expect_classes {
        let found = set.vocabulary().len();
        if found != expected {
            return Err(CliError::ExpectClasses { expected, found });
        }
    }
    Ok(set)
}

fn with_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(config_err)?;
    Ok(pool.install(f))
}

/// Everything `analyze` computes, before anything is written.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub set: TransactionSet,
    pub report: CooccurrenceReport,
    pub min_support_count: u64,
    pub itemsets: Vec<Itemset>,
    pub rules: Vec<AssociationRule>,
    pub base_rules: Vec<AssociationRule>,
}

impl Analysis {
    /// One-line run summary.
    pub fn summary(&self) -> String {
        format!(
            "n_images={} K={} bases={} rows={} min_support_count={} itemsets={} rules={} base_rules={}",
            self.set.image_count(),
            self.set.vocabulary().len(),
            self.report.meta.bases.len(),
            self.report.rows.len(),
            self.min_support_count,
            self.itemsets.len(),
            self.rules.len(),
            self.base_rules.len(),
        )
    }
}

fn policy_string(p: BaseClassPolicy) -> String {
    match p {
        BaseClassPolicy::MostFrequent => "most_frequent".into(),
        BaseClassPolicy::TopK(k) => format!("top_k={k}"),
        BaseClassPolicy::MinFraction(f) => format!("min_fraction={f}"),
    }
}

/// Runs ingestion, counting, base selection, mining and report assembly.
pub fn analyze(cfg: &RunConfig) -> Result<Analysis, CliError> {
    with_pool(cfg.input.threads, || analyze_in_pool(cfg))?
}

fn analyze_in_pool(cfg: &RunConfig) -> Result<Analysis, CliError> {
    let set = load_input(&cfg.input)?;
    if set.has_no_labels() {
        return Err(CliError::EmptyDataset(format!("{} images, none labeled", set.image_count())));
    }
    let parallel = cfg.input.threads > 1;
    let (table, matrix) = if parallel {
        (count_frequencies_parallel(&set), build_matrix_parallel(&set))
    } else {
        (count_frequencies(&set), build_matrix(&set))
    };
    let bases = select_base_classes(&table, cfg.base_policy).map_err(config_err)?;
    let mut report =
        build_report(&matrix, &table, &bases, cfg.threshold, set.vocabulary()).map_err(config_err)?;

    let min_support_count = cfg.mining.min_support.to_count(set.image_count() as u64);
    let tree = build_fp_tree(&set, min_support_count);
    let itemsets = if parallel {
        fp_growth_parallel(&tree, min_support_count, cfg.mining.max_itemset_size)
    } else {
        fp_growth_with(&tree, min_support_count, cfg.mining.max_itemset_size)
    };
    let rules = rules_from_itemsets(&itemsets, cfg.mining.min_confidence)
        .map_err(|e| config_err(format!("{e}; consider --max-itemset-size")))?;
    let base_rules = base_class_rules(&rules, &bases);

    let meta = &mut report.meta;
    meta.dataset = cfg.input.dataset_name.clone();
    let echo = [
        ("format", cfg.input.format.as_str().to_string()),
        ("score_threshold", cfg.input.score_threshold.to_string()),
        ("vocabulary", cfg.input.vocabulary.describe()),
        ("base_policy", policy_string(cfg.base_policy)),
        (
            "min_support",
            match cfg.mining.min_support {
                MinSupport::Count(c) => c.to_string(),
                MinSupport::Fraction(f) => f.to_string(),
            },
        ),
        ("min_support_count", min_support_count.to_string()),
        ("min_confidence", cfg.mining.min_confidence.to_string()),
        (
            "max_itemset_size",
            cfg.mining
                .max_itemset_size
                .map_or_else(|| "unlimited".to_string(), |m| m.to_string()),
        ),
    ];
    meta.config
        .extend(echo.into_iter().map(|(k, v)| (k.to_string(), v)));

    Ok(Analysis {
        set,
        report,
        min_support_count,
        itemsets,
        rules,
        base_rules,
    })
}

fn names(vocab: &LabelVocabulary, ids: &[crate::ingest::LabelId]) -> String {
    ids.iter()
        .map(|&l| vocab.name(l).unwrap_or("?"))
        .collect::<Vec<_>>()
        .join(",")
}

/// `antecedent  consequent  support_count  antecedent_support  confidence`.
pub fn render_rules_tsv(vocab: &LabelVocabulary, rules: &[AssociationRule]) -> String {
    let mut out = String::from("antecedent\tconsequent\tsupport_count\tantecedent_support\tconfidence\n");
    for r in rules {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            names(vocab, &r.antecedent),
            names(vocab, &r.consequent),
            r.support_count,
            r.antecedent_support,
            crate::exact::format_ratio4(r.support_count, r.antecedent_support),
        ));
    }
    out
}

pub fn render_itemsets_tsv(vocab: &LabelVocabulary, itemsets: &[Itemset]) -> String {
    let mut out = String::from("items\tsupport_count\n");
    for i in itemsets {
        out.push_str(&format!("{}\t{}\n", names(vocab, &i.items), i.support_count));
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Output {
        path: path.display().to_string(),
        source,
    })
}

fn stdout_err(source: io::Error) -> CliError {
    CliError::Output {
        path: "<stdout>".into(),
        source,
    }
}

/// `analyze`: computes everything first, then writes the outputs.
pub fn cmd_analyze(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<Analysis, CliError> {
    let analysis = analyze(cfg)?;
    let rendered = render(&analysis.report, cfg.output_format);
    let vocab = analysis.set.vocabulary();
    if let Some(path) = &cfg.chart_out {
        write_file(path, &render_chart_csv(&chart_counts(&analysis.report)))?;
    }
    if let Some(path) = &cfg.rules_out {
        write_file(path, &render_rules_tsv(vocab, &analysis.base_rules))?;
    }
    if let Some(path) = &cfg.itemsets_out {
        write_file(path, &render_itemsets_tsv(vocab, &analysis.itemsets))?;
    }
    match &cfg.output {
        Some(path) => write_file(path, &rendered)?,
        None => stdout.write_all(rendered.as_bytes()).map_err(stdout_err)?,
    }
    writeln!(stdout, "{}", analysis.summary()).map_err(stdout_err)?;
    Ok(analysis)
}

/// `convert`: any supported input to native TSV.
pub fn cmd_convert(input: &InputConfig, output: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let set = with_pool(input.threads, || load_input(input))??;
    let text = write_transactions_tsv(&set);
    match output {
        Some(path) => write_file(path, &text),
        None => stdout.write_all(text.as_bytes()).map_err(stdout_err),
    }
}

/// `stats`: document frequency per label, most frequent first, then the
/// image count.
pub fn cmd_stats(input: &InputConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let set = with_pool(input.threads, || load_input(input))??;
    let table = count_frequencies(&set);
    let mut out = String::new();
    for id in table.ranked() {
        out.push_str(&format!("{}\t{}\n", set.vocabulary().name(id).unwrap_or("?"), table.count(id)));
    }
    out.push_str(&format!("{} images\n", table.n_images()));
    stdout.write_all(out.as_bytes()).map_err(stdout_err)?;
    if set.has_no_labels() {
        return Err(CliError::EmptyDataset(format!("{} images, none labeled", set.image_count())));
    }
    Ok(())
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Analyze(args) => cmd_analyze(&resolve_run(args)?, stdout).map(drop),
        Command::Convert(args) => {
            let mut file = ConfigFile::load(args.input.config.as_deref())?;
            let output = args.output.clone().or(file.output.take());
            let input = resolve_input(args.input, &mut file)?;
            cmd_convert(&input, output.as_deref(), stdout)
        }
        Command::Stats(args) => {
            let mut file = ConfigFile::load(args.config.as_deref())?;
            let input = resolve_input(args, &mut file)?;
            cmd_stats(&input, stdout)
        }
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(rendered.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(rendered.as_bytes());
                    4
                }
            };
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(argv: &[&str]) -> Result<RunConfig, CliError> {
        let mut full = vec!["cooccur", "analyze"];
        full.extend_from_slice(argv);
        match Cli::try_parse_from(full).unwrap().command {
            Command::Analyze(a) => resolve_run(a),
            _ => unreachable!(),
        }
    }

    #[test]
    fn defaults() {
        let cfg = resolve(&["--input", "data.tsv"]).unwrap();
        assert_eq!(cfg.input.format, InputFormat::Tsv);
        assert_eq!(cfg.input.score_threshold, 0.5);
        assert_eq!(cfg.input.threads, 1);
        assert_eq!(cfg.input.dataset_name, "data");
        assert_eq!(cfg.base_policy, BaseClassPolicy::MostFrequent);
        assert_eq!(cfg.threshold, CooccurrenceThreshold::default());
        assert_eq!(cfg.mining, MiningConfig::default());
        assert_eq!(cfg.output_format, OutputFormat::Tsv);
    }

    #[test]
    fn format_inference() {
        assert_eq!(resolve(&["--input", "a.json"]).unwrap().input.format, InputFormat::Coco);
        assert_eq!(resolve(&["--input", "a.jsonl"]).unwrap().input.format, InputFormat::Detections);
        assert_eq!(resolve(&["--input", "a.xml", "b.xml"]).unwrap().input.format, InputFormat::Voc);
        assert!(matches!(resolve(&["--input", "a.bin"]), Err(CliError::Config(_))));
        assert_eq!(
            resolve(&["--input", "a.bin", "--format", "tsv"]).unwrap().input.format,
            InputFormat::Tsv
        );
    }

    #[test]
    fn invalid_settings() {
        for argv in [
            &["--input", "a.tsv", "--base-top-k", "2", "--base-min-fraction", "0.5"][..],
            &["--input", "a.tsv", "--base-top-k", "0"],
            &["--input", "a.tsv", "--cooccur-threshold", "1.5"],
            &["--input", "a.tsv", "--min-support", "0"],
            &["--input", "a.tsv", "--min-confidence", "2"],
            &["--input", "a.tsv", "--score-threshold=-0.1"],
            &["--input", "a.tsv", "--threads", "0"],
            &["--input", "a.tsv", "b.tsv"],
            &[],
        ] {
            let err = resolve(argv).unwrap_err();
            assert_eq!(err.exit_code(), 4, "{argv:?}: {err}");
        }
    }

    #[test]
    fn config_file_and_flag_precedence() {
        let dir = tempfile::tempdir().unwrap();
        let cfg_path = dir.path().join("run.json");
        fs::write(
            &cfg_path,
            r#"{"input": "x.tsv", "cooccur_threshold": 0.3, "base_top_k": 4, "output_format": "json", "threshold_mode": "support"}"#,
        )
        .unwrap();
        let p = cfg_path.to_str().unwrap();
        let cfg = resolve(&["--config", p]).unwrap();
        assert_eq!(cfg.input.paths, vec![PathBuf::from("x.tsv")]);
        assert_eq!(cfg.threshold.value(), 0.3);
        assert_eq!(cfg.threshold.mode(), ThresholdMode::Support);
        assert_eq!(cfg.base_policy, BaseClassPolicy::TopK(4));
        assert_eq!(cfg.output_format, OutputFormat::Json);

        let cfg = resolve(&["--config", p, "--cooccur-threshold", "0.8", "--base-min-fraction", "0.2", "--input", "y.tsv"])
            .unwrap();
        assert_eq!(cfg.threshold.value(), 0.8);
        assert_eq!(cfg.base_policy, BaseClassPolicy::MinFraction(0.2));
        assert_eq!(cfg.input.paths, vec![PathBuf::from("y.tsv")]);

        fs::write(&cfg_path, r#"{"input": "x.tsv", "bogus": 1}"#).unwrap();
        assert!(matches!(resolve(&["--config", p]), Err(CliError::Config(_))));
    }

    #[test]
    fn usage_errors_exit_4_and_help_exits_0() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["cooccur", "frobnicate"], &mut out, &mut err), 4);
        assert!(!err.is_empty());
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["cooccur", "--help"], &mut out, &mut err), 0);
        assert!(String::from_utf8(out).unwrap().contains("analyze"));
    }
}
