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

//! The base-class to co-occurring-class table and its renderings.
//!
//! All counts are kept as integers; probabilities are rounded only when
//! rendered (four decimals, ties to even).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::cooccurrence::{
    cooccurring_for_base, CooccurrenceError, CooccurrenceMatrix, CooccurrenceThreshold, FrequencyTable,
};
use crate::exact::{format_scaled4, round_half_even_scaled};
use crate::ingest::{LabelId, LabelVocabulary};

#[derive(Debug, Error, PartialEq)]
pub enum ReportError {
    #[error("no base classes to report on")]
    NoBases,
    #[error("base label {0} is not in the vocabulary")]
    UnknownBase(LabelId),
    #[error(transparent)]
    Cooccurrence(#[from] CooccurrenceError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub base_label: String,
    pub co_label: String,
    pub pair_count: u64,
    pub base_count: u64,
    /// `pair_count / base_count`.
    pub conditional_probability: f64,
    /// `pair_count / n_images`.
    pub support_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaseClass {
    pub label: String,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReportMeta {
    pub dataset: String,
    pub n_images: u64,
    pub n_labels: usize,
    /// Base classes in report order, including those without rows.
    pub bases: Vec<BaseClass>,
    /// Effective configuration, echoed verbatim.
    pub config: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CooccurrenceReport {
    pub meta: ReportMeta,
    /// Sorted by base count desc, base name, probability desc, co name.
    pub rows: Vec<ReportRow>,
}

/// Collects the co-occurring classes of every base into one sorted table.
pub fn build_report(
    matrix: &CooccurrenceMatrix,
    table: &FrequencyTable,
    bases: &[LabelId],
    threshold: CooccurrenceThreshold,
    vocab: &LabelVocabulary,
) -> Result<CooccurrenceReport, ReportError> {
    if bases.is_empty() {
        return Err(ReportError::NoBases);
    }
    let n_images = table.n_images();
    let mut base_entries = Vec::with_capacity(bases.len());
    let mut rows = Vec::new();
    for &base in bases {
        let base_name = vocab.name(base).ok_or(ReportError::UnknownBase(base))?;
        if base_entries.iter().any(|b: &BaseClass| b.label == base_name) {
            continue;
        }
        let hits = cooccurring_for_base(matrix, base, threshold)?;
        base_entries.push(BaseClass {
            label: base_name.to_string(),
            count: matrix.frequency(base),
        });
        rows.extend(hits.into_iter().map(|c| ReportRow {
            base_label: base_name.to_string(),
            co_label: vocab.name_of(c.label).to_string(),
            pair_count: c.pair_count,
            base_count: c.base_count,
            conditional_probability: c.conditional_probability,
            support_fraction: c.pair_count as f64 / n_images as f64,
        }));
    }
    base_entries.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.label.cmp(&b.label)));
    // Within one base the denominator is shared, so pair count orders probability.
    rows.sort_by(|a, b| {
        b.base_count
            .cmp(&a.base_count)
            .then_with(|| a.base_label.cmp(&b.base_label))
            .then_with(|| b.pair_count.cmp(&a.pair_count))
            .then_with(|| a.co_label.cmp(&b.co_label))
    });

    let mut config = BTreeMap::new();
    config.insert("cooccur_threshold".to_string(), threshold.value().to_string());
    config.insert("threshold_mode".to_string(), threshold.mode().as_str().to_string());
    Ok(CooccurrenceReport {
        meta: ReportMeta {
            dataset: String::new(),
            n_images,
            n_labels: vocab.len(),
            bases: base_entries,
            config,
        },
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Tsv,
    Json,
    Markdown,
}

impl OutputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            OutputFormat::Tsv => "tsv",
            OutputFormat::Json => "json",
            OutputFormat::Markdown => "markdown",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tsv" => Ok(OutputFormat::Tsv),
            "json" => Ok(OutputFormat::Json),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            other => Err(format!("unknown output format '{other}' (expected tsv, json or markdown)")),
        }
    }
}

pub const TSV_HEADER: &str = "base\tco_label\tpair_count\tbase_count\tcond_prob\tsupport";

impl ReportRow {
    /// Conditional probability scaled by 10^4, rounded half to even.
    pub fn cond_prob_scaled(&self) -> u64 {
        round_half_even_scaled(self.pair_count, self.base_count, 10_000)
    }

    fn support_scaled(&self, n_images: u64) -> u64 {
        round_half_even_scaled(self.pair_count, n_images, 10_000)
    }
}

/// Renders the report; output depends only on the report value.
pub fn render(report: &CooccurrenceReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Tsv => render_tsv(report),
        OutputFormat::Json => render_json(report),
        OutputFormat::Markdown => render_markdown(report),
    }
}

fn render_tsv(report: &CooccurrenceReport) -> String {
    let mut out = String::from(TSV_HEADER);
    out.push('\n');
    for row in &report.rows {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            row.base_label,
            row.co_label,
            row.pair_count,
            row.base_count,
            format_scaled4(row.cond_prob_scaled()),
            format_scaled4(row.support_scaled(report.meta.n_images)),
        );
    }
    out
}

#[derive(Serialize)]
struct JsonReport<'a> {
    meta: JsonMeta<'a>,
    rows: Vec<JsonRow<'a>>,
}

#[derive(Serialize)]
struct JsonMeta<'a> {
    dataset: &'a str,
    n_images: u64,
    n_labels: usize,
    bases: &'a [BaseClass],
    config: &'a BTreeMap<String, String>,
}

#[derive(Serialize)]
struct JsonRow<'a> {
    base: &'a str,
    co_label: &'a str,
    pair_count: u64,
    base_count: u64,
    cond_prob: serde_json::Number,
    support: serde_json::Number,
}

fn rounded_number(scaled: u64) -> serde_json::Number {
    let value: f64 = format_scaled4(scaled).parse().expect("decimal");
    serde_json::Number::from_f64(value).expect("finite")
}

fn render_json(report: &CooccurrenceReport) -> String {
    let doc = JsonReport {
        meta: JsonMeta {
            dataset: &report.meta.dataset,
            n_images: report.meta.n_images,
            n_labels: report.meta.n_labels,
            bases: &report.meta.bases,
            config: &report.meta.config,
        },
        rows: report
            .rows
            .iter()
            .map(|r| JsonRow {
                base: &r.base_label,
                co_label: &r.co_label,
                pair_count: r.pair_count,
                base_count: r.base_count,
                cond_prob: rounded_number(r.cond_prob_scaled()),
                support: rounded_number(r.support_scaled(report.meta.n_images)),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("report serializes");
    out.push('\n');
    out
}

fn render_markdown(report: &CooccurrenceReport) -> String {
    let meta = &report.meta;
    let mut out = String::new();
    let title = if meta.dataset.is_empty() { "dataset" } else { &meta.dataset };
    let _ = writeln!(out, "# Co-occurrence report: {title}\n");
    let _ = writeln!(out, "- images: {}", meta.n_images);
    let _ = writeln!(out, "- labels: {}", meta.n_labels);
    for (k, v) in &meta.config {
        let _ = writeln!(out, "- {k}: {v}");
    }
    for base in &meta.bases {
        let _ = writeln!(out, "\n## {} ({} images)\n", base.label, base.count);
        let rows: Vec<&ReportRow> = report.rows.iter().filter(|r| r.base_label == base.label).collect();
        if rows.is_empty() {
            out.push_str("_No co-occurring classes at this threshold._\n");
            continue;
        }
        out.push_str("| co_label | pair_count | cond_prob | support |\n");
        out.push_str("|---|---:|---:|---:|\n");
        for r in rows {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} |",
                r.co_label,
                r.pair_count,
                format_scaled4(r.cond_prob_scaled()),
                format_scaled4(r.support_scaled(meta.n_images)),
            );
        }
    }
    out
}

/// Number of distinct co-occurring classes per base class, in report
/// order. Bases with no surviving rows appear with zero.
pub fn chart_counts(report: &CooccurrenceReport) -> Vec<(String, usize)> {
    report
        .meta
        .bases
        .iter()
        .map(|b| {
            let mut co: Vec<&str> = report
                .rows
                .iter()
                .filter(|r| r.base_label == b.label)
                .map(|r| r.co_label.as_str())
                .collect();
            co.sort_unstable();
            co.dedup();
            (b.label.clone(), co.len())
        })
        .collect()
}

pub fn render_chart_csv(counts: &[(String, usize)]) -> String {
    let mut out = String::from("base,co_class_count\n");
    for (base, n) in counts {
        let _ = writeln!(out, "{base},{n}");
    }
    out
}
