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

//! Label frequencies, the pairwise co-occurrence matrix, base-class
//! selection and per-base co-occurring classes.

use rayon::prelude::*;
use thiserror::Error;

use crate::exact::ratio_at_least;
use crate::ingest::{LabelId, Transaction, TransactionSet};

#[derive(Debug, Error, PartialEq)]
pub enum CooccurrenceError {
    #[error("invalid base-class policy: {0}")]
    InvalidPolicy(String),
    #[error("co-occurrence threshold {0} outside [0,1]")]
    InvalidThreshold(f64),
    #[error("fractional base-class selection needs at least one image")]
    NoImages,
    #[error("base label {0} never occurs in the data")]
    BaseNeverOccurs(LabelId),
    #[error("label {id} out of range for {dim} labels")]
    LabelOutOfRange { id: LabelId, dim: usize },
}

/// Per-label document frequency plus the support denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: Vec<u64>,
    n_images: u64,
}

impl FrequencyTable {
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, label: LabelId) -> u64 {
        self.counts[label.index()]
    }

    pub fn n_images(&self) -> u64 {
        self.n_images
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Labels by descending count, ties by ascending id.
    pub fn ranked(&self) -> Vec<LabelId> {
        let mut ids: Vec<LabelId> = (0..self.counts.len() as u32).map(LabelId).collect();
        ids.sort_by(|a, b| self.count(*b).cmp(&self.count(*a)).then(a.cmp(b)));
        ids
    }
}

fn tally_frequencies(dim: usize, transactions: &[Transaction]) -> Vec<u64> {
    let mut counts = vec![0u64; dim];
    for t in transactions {
        for l in t.labels() {
            counts[l.index()] += 1;
        }
    }
    counts
}

pub fn count_frequencies(set: &TransactionSet) -> FrequencyTable {
    FrequencyTable {
        counts: tally_frequencies(set.vocabulary().len(), set.transactions()),
        n_images: set.image_count() as u64,
    }
}

/// Same result as [`count_frequencies`], counted over transaction chunks on
/// the current rayon pool and merged by addition.
pub fn count_frequencies_parallel(set: &TransactionSet) -> FrequencyTable {
    let dim = set.vocabulary().len();
    let counts = set
        .transactions()
        .par_chunks(PAR_CHUNK)
        .map(|chunk| tally_frequencies(dim, chunk))
        .reduce(|| vec![0; dim], add_elementwise);
    FrequencyTable {
        counts,
        n_images: set.image_count() as u64,
    }
}

const PAR_CHUNK: usize = 4096;

fn add_elementwise(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Symmetric K×K image-level pair counts. The diagonal holds document
/// frequencies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CooccurrenceMatrix {
    dim: usize,
    cells: Vec<u64>,
    n_images: u64,
}

impl CooccurrenceMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: LabelId, j: LabelId) -> u64 {
        self.cells[i.index() * self.dim + j.index()]
    }

    pub fn frequency(&self, label: LabelId) -> u64 {
        self.get(label, label)
    }

    pub fn n_images(&self) -> u64 {
        self.n_images
    }

    /// Row-major cells.
    pub fn cells(&self) -> &[u64] {
        &self.cells
    }

    fn from_upper(dim: usize, mut cells: Vec<u64>, n_images: u64) -> Self {
        for i in 0..dim {
            for j in 0..i {
                cells[i * dim + j] = cells[j * dim + i];
            }
        }
        CooccurrenceMatrix {
            dim,
            cells,
            n_images,
        }
    }
}

// Fills only the upper triangle (including the diagonal).
fn tally_pairs(dim: usize, transactions: &[Transaction]) -> Vec<u64> {
    let mut cells = vec![0u64; dim * dim];
    for t in transactions {
        let labels = t.labels();
        for (a, la) in labels.iter().enumerate() {
            let row = la.index() * dim;
            for lb in &labels[a..] {
                cells[row + lb.index()] += 1;
            }
        }
    }
    cells
}

pub fn build_matrix(set: &TransactionSet) -> CooccurrenceMatrix {
    let dim = set.vocabulary().len();
    CooccurrenceMatrix::from_upper(dim, tally_pairs(dim, set.transactions()), set.image_count() as u64)
}

/// Same result as [`build_matrix`], counted over transaction chunks on the
/// current rayon pool.
pub fn build_matrix_parallel(set: &TransactionSet) -> CooccurrenceMatrix {
    let dim = set.vocabulary().len();
    let cells = set
        .transactions()
        .par_chunks(PAR_CHUNK)
        .map(|chunk| tally_pairs(dim, chunk))
        .reduce(|| vec![0; dim * dim], add_elementwise);
    CooccurrenceMatrix::from_upper(dim, cells, set.image_count() as u64)
}

/// How base classes are picked from the frequency table.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum BaseClassPolicy {
    /// Every label tied at the maximum document frequency.
    #[default]
    MostFrequent,
    /// The `k` most frequent labels.
    TopK(usize),
    /// Every label present in at least this fraction of images.
    MinFraction(f64),
}

impl BaseClassPolicy {
    pub fn top_k(k: usize) -> Result<Self, CooccurrenceError> {
        if k == 0 {
            return Err(CooccurrenceError::InvalidPolicy("top_k must be at least 1".into()));
        }
        Ok(BaseClassPolicy::TopK(k))
    }

    pub fn min_fraction(f: f64) -> Result<Self, CooccurrenceError> {
        if !(f > 0.0 && f <= 1.0) {
            return Err(CooccurrenceError::InvalidPolicy(format!(
                "min_fraction {f} outside (0,1]"
            )));
        }
        Ok(BaseClassPolicy::MinFraction(f))
    }

    fn validate(self) -> Result<(), CooccurrenceError> {
        match self {
            BaseClassPolicy::MostFrequent => Ok(()),
            BaseClassPolicy::TopK(k) => Self::top_k(k).map(drop),
            BaseClassPolicy::MinFraction(f) => Self::min_fraction(f).map(drop),
        }
    }
}

/// Picks base classes ordered by descending frequency (ties by ascending
/// id). Labels that never occur are never base classes.
pub fn select_base_classes(
    table: &FrequencyTable,
    policy: BaseClassPolicy,
) -> Result<Vec<LabelId>, CooccurrenceError> {
    policy.validate()?;
    let ranked = table.ranked().into_iter().filter(|&l| table.count(l) > 0);
    Ok(match policy {
        BaseClassPolicy::MostFrequent => {
            let max = table.counts.iter().copied().max().unwrap_or(0);
            ranked.filter(|&l| table.count(l) == max).collect()
        }
        BaseClassPolicy::TopK(k) => ranked.take(k).collect(),
        BaseClassPolicy::MinFraction(f) => {
            if table.n_images == 0 {
                return Err(CooccurrenceError::NoImages);
            }
            ranked
                .filter(|&l| ratio_at_least(table.count(l), table.n_images, f))
                .collect()
        }
    })
}

/// What the co-occurrence threshold is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThresholdMode {
    /// `pair_count / base_count`, i.e. P(co | base).
    #[default]
    Conditional,
    /// `pair_count / n_images`, the absolute support of the pair.
    Support,
}

impl ThresholdMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ThresholdMode::Conditional => "conditional",
            ThresholdMode::Support => "support",
        }
    }
}

/// Inclusive lower bound `t` on the co-occurrence ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CooccurrenceThreshold {
    value: f64,
    mode: ThresholdMode,
}

impl Default for CooccurrenceThreshold {
    fn default() -> Self {
        CooccurrenceThreshold {
            value: 0.5,
            mode: ThresholdMode::Conditional,
        }
    }
}

impl CooccurrenceThreshold {
    /// Threshold on P(co | base).
    pub fn new(t: f64) -> Result<Self, CooccurrenceError> {
        Self::with_mode(t, ThresholdMode::Conditional)
    }

    pub fn with_mode(t: f64, mode: ThresholdMode) -> Result<Self, CooccurrenceError> {
        if !(0.0..=1.0).contains(&t) {
            return Err(CooccurrenceError::InvalidThreshold(t));
        }
        Ok(CooccurrenceThreshold { value: t, mode })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn mode(&self) -> ThresholdMode {
        self.mode
    }
}

/// A label co-occurring with a base class.
#[derive(Debug, Clone, PartialEq)]
pub struct CoOccurrence {
    pub label: LabelId,
    pub pair_count: u64,
    pub base_count: u64,
    /// `pair_count / base_count`.
    pub conditional_probability: f64,
}

/// Every label `j != base` whose ratio meets the threshold, by descending
/// conditional probability then ascending id.
pub fn cooccurring_for_base(
    matrix: &CooccurrenceMatrix,
    base: LabelId,
    threshold: CooccurrenceThreshold,
) -> Result<Vec<CoOccurrence>, CooccurrenceError> {
    if base.index() >= matrix.dim {
        return Err(CooccurrenceError::LabelOutOfRange {
            id: base,
            dim: matrix.dim,
        });
    }
    let base_count = matrix.frequency(base);
    if base_count == 0 {
        return Err(CooccurrenceError::BaseNeverOccurs(base));
    }
    let mut out: Vec<CoOccurrence> = (0..matrix.dim as u32)
        .map(LabelId)
        .filter(|&j| j != base)
        .filter_map(|j| {
            let pair_count = matrix.get(base, j);
            let keep = match threshold.mode {
                ThresholdMode::Conditional => ratio_at_least(pair_count, base_count, threshold.value),
                // base_count > 0 implies n_images > 0
                ThresholdMode::Support => ratio_at_least(pair_count, matrix.n_images, threshold.value),
            };
            keep.then(|| CoOccurrence {
                label: j,
                pair_count,
                base_count,
                conditional_probability: pair_count as f64 / base_count as f64,
            })
        })
        .collect();
    // Shared denominator: ordering by pair count is ordering by probability.
    out.sort_by(|a, b| b.pair_count.cmp(&a.pair_count).then(a.label.cmp(&b.label)));
    Ok(out)
}
