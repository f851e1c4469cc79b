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

//! Ingestion of multilabel annotations into canonical per-image label sets.
//!
//! Every parser produces a [`TransactionSet`]: one presence set of labels per
//! image, over a dense [`LabelVocabulary`]. Instance multiplicity is dropped
//! on the way in, and images without labels are kept as empty transactions
//! because `image_count` is the support denominator downstream.

mod builtin;
mod coco;
mod detections;
mod tsv;
mod voc;

use std::collections::HashMap;
use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use coco::parse_coco;
pub use detections::{parse_detections_jsonl, RawDetection, DEFAULT_SCORE_THRESHOLD};
pub use tsv::{parse_transactions_tsv, write_transactions_tsv};
pub use voc::parse_voc;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("JSON parse error at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: malformed record: {message}")]
    Record { line: usize, message: String },
    #[error("XML parse error in image '{image_id}': {message}")]
    Xml { image_id: String, message: String },
    #[error("format error in image '{image_id}': {message}")]
    Format { image_id: String, message: String },
    #[error("annotation references unknown image id {0}")]
    UnknownImage(String),
    #[error("annotation references unknown category id {0}")]
    UnknownCategory(String),
    #[error("duplicate category id {0}")]
    DuplicateCategoryId(String),
    #[error("duplicate label name '{0}' in vocabulary")]
    DuplicateLabel(String),
    #[error("invalid label name {name:?}: {reason}")]
    InvalidLabel { name: String, reason: &'static str },
    #[error("line {line}: label '{label}' is not in the vocabulary")]
    UnknownLabel { line: usize, label: String },
    #[error("label id {id} out of range for vocabulary of size {size}")]
    LabelOutOfRange { id: u32, size: usize },
    #[error("duplicate image id '{0}'")]
    DuplicateImageId(String),
    #[error("invalid image id {0:?}: must be non-empty without tabs or line breaks")]
    InvalidImageId(String),
    #[error("line {line}: {what} {value} outside its valid range")]
    OutOfRange {
        line: usize,
        what: &'static str,
        value: f64,
    },
    #[error("score threshold {0} outside [0,1]")]
    InvalidThreshold(f64),
    #[error("image_count {image_count} is less than the {labeled} labeled transactions")]
    ImageCount { image_count: usize, labeled: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl IngestError {
    pub(crate) fn from_json(err: &serde_json::Error) -> Self {
        IngestError::Json {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}

/// Dense 0-based label identifier within a [`LabelVocabulary`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LabelId(pub u32);

impl LabelId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for LabelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Bijection between dense label ids `0..K` and label names.
///
/// Names must be non-empty and may not contain tabs, commas or line breaks,
/// since those delimit the native TSV format.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabelVocabulary {
    names: Vec<String>,
    ids: HashMap<String, LabelId>,
}

pub(crate) fn validate_label_name(name: &str) -> Result<(), IngestError> {
    let reason = if name.is_empty() {
        "empty name"
    } else if name.contains(['\t', '\n', '\r']) {
        "contains a tab or line break"
    } else if name.contains(',') {
        "contains a comma"
    } else {
        return Ok(());
    };
    Err(IngestError::InvalidLabel {
        name: name.to_string(),
        reason,
    })
}

impl LabelVocabulary {
    /// Builds a vocabulary assigning ids in iteration order.
    pub fn new<I, S>(names: I) -> Result<Self, IngestError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut vocab = LabelVocabulary::default();
        for name in names {
            let name = name.into();
            validate_label_name(&name)?;
            let id = LabelId(vocab.names.len() as u32);
            if vocab.ids.insert(name.clone(), id).is_some() {
                return Err(IngestError::DuplicateLabel(name));
            }
            vocab.names.push(name);
        }
        Ok(vocab)
    }

    /// Builds a vocabulary from the sorted distinct names.
    pub fn from_unsorted<I, S>(names: I) -> Result<Self, IngestError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = names.into_iter().map(Into::into).collect();
        names.sort();
        names.dedup();
        Self::new(names)
    }

    /// The 80 MS-COCO detection categories in category-id order.
    pub fn coco80() -> Self {
        Self::new(builtin::COCO_80.iter().copied()).expect("builtin vocabulary is valid")
    }

    /// The 20 Pascal VOC object classes in alphabetical order.
    pub fn voc20() -> Self {
        Self::new(builtin::VOC_20.iter().copied()).expect("builtin vocabulary is valid")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, id: LabelId) -> Option<&str> {
        self.names.get(id.index()).map(String::as_str)
    }

    pub fn id(&self, name: &str) -> Option<LabelId> {
        self.ids.get(name).copied()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn ids(&self) -> impl Iterator<Item = LabelId> + '_ {
        (0..self.names.len() as u32).map(LabelId)
    }

    /// Name lookup for ids already validated against this vocabulary.
    pub(crate) fn name_of(&self, id: LabelId) -> &str {
        &self.names[id.index()]
    }
}

/// The distinct labels present in one image.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transaction {
    image_id: String,
    labels: Vec<LabelId>,
}

impl Transaction {
    /// Sorts and deduplicates `labels`.
    pub fn new(image_id: impl Into<String>, mut labels: Vec<LabelId>) -> Self {
        labels.sort_unstable();
        labels.dedup();
        Transaction {
            image_id: image_id.into(),
            labels,
        }
    }

    pub fn image_id(&self) -> &str {
        &self.image_id
    }

    /// Strictly ascending label ids.
    pub fn labels(&self) -> &[LabelId] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn contains(&self, label: LabelId) -> bool {
        self.labels.binary_search(&label).is_ok()
    }
}

fn validate_image_id(id: &str) -> Result<(), IngestError> {
    if id.is_empty() || id.contains(['\t', '\n', '\r']) {
        Err(IngestError::InvalidImageId(id.to_string()))
    } else {
        Ok(())
    }
}

/// One transaction per image over a shared vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TransactionSet {
    vocabulary: LabelVocabulary,
    transactions: Vec<Transaction>,
    image_count: usize,
}

impl TransactionSet {
    /// Validates label ids, image-id uniqueness and the image count.
    pub fn new(
        vocabulary: LabelVocabulary,
        transactions: Vec<Transaction>,
        image_count: usize,
    ) -> Result<Self, IngestError> {
        let mut seen = HashSet::with_capacity(transactions.len());
        let mut labeled = 0;
        for t in &transactions {
            validate_image_id(&t.image_id)?;
            if !seen.insert(t.image_id.as_str()) {
                return Err(IngestError::DuplicateImageId(t.image_id.clone()));
            }
            if let Some(&bad) = t.labels.iter().find(|l| l.index() >= vocabulary.len()) {
                return Err(IngestError::LabelOutOfRange {
                    id: bad.0,
                    size: vocabulary.len(),
                });
            }
            debug_assert!(t.labels.windows(2).all(|w| w[0] < w[1]));
            labeled += usize::from(!t.is_empty());
        }
        if image_count < labeled {
            return Err(IngestError::ImageCount {
                image_count,
                labeled,
            });
        }
        Ok(TransactionSet {
            vocabulary,
            transactions,
            image_count,
        })
    }

    /// Builds a set with one transaction per record, `image_count` equal to
    /// the number of records. Every name must resolve in `vocabulary`.
    pub fn from_named<I, S>(vocabulary: LabelVocabulary, records: I) -> Result<Self, IngestError>
    where
        I: IntoIterator<Item = (String, Vec<S>)>,
        S: AsRef<str>,
    {
        let transactions = records
            .into_iter()
            .enumerate()
            .map(|(i, (image_id, names))| {
                let labels = names
                    .iter()
                    .map(|n| {
                        vocabulary.id(n.as_ref()).ok_or_else(|| IngestError::UnknownLabel {
                            line: i + 1,
                            label: n.as_ref().to_string(),
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Transaction::new(image_id, labels))
            })
            .collect::<Result<Vec<_>, IngestError>>()?;
        let n = transactions.len();
        Self::new(vocabulary, transactions, n)
    }

    pub fn vocabulary(&self) -> &LabelVocabulary {
        &self.vocabulary
    }

    pub fn transactions(&self) -> &[Transaction] {
        &self.transactions
    }

    /// All ingested images, including label-less ones.
    pub fn image_count(&self) -> usize {
        self.image_count
    }

    /// True when no image carries any label.
    pub fn has_no_labels(&self) -> bool {
        self.transactions.iter().all(Transaction::is_empty)
    }

    /// Label names of one transaction, in ascending id order.
    pub fn label_names<'a>(&'a self, t: &'a Transaction) -> impl Iterator<Item = &'a str> + 'a {
        t.labels.iter().map(|&l| self.vocabulary.name_of(l))
    }
}
