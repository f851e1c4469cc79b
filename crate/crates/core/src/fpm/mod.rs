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

//! Frequent label patterns and association rules.
//!
//! [`build_fp_tree`] and [`fp_growth`] mine frequent itemsets without
//! candidate generation; [`brute_force_itemsets`] enumerates the power set
//! and exists to check them. [`rules_from_itemsets`] turns a subset-closed
//! itemset collection into rules.

mod growth;
mod rules;
mod tree;

use serde::Serialize;
use thiserror::Error;

use crate::exact::ceil_fraction;
use crate::ingest::LabelId;

pub use growth::{brute_force_itemsets, fp_growth, fp_growth_parallel, fp_growth_with, BRUTE_FORCE_MAX_LABELS};
pub use rules::{base_class_rules, rules_from_itemsets, AssociationRule};
pub use tree::{build_fp_tree, FpTree};

#[derive(Debug, Error, PartialEq)]
pub enum FpmError {
    #[error("invalid mining configuration: {0}")]
    InvalidConfig(String),
    #[error("brute force over {labels} labels exceeds the cap of {cap}")]
    UniverseTooLarge { labels: usize, cap: usize },
    #[error("support of {0:?} missing from the itemsets (input is not subset-closed)")]
    MissingSupport(Vec<LabelId>),
    #[error("itemset of size {0} is too large for rule enumeration")]
    ItemsetTooLarge(usize),
}

/// A frequent itemset with its exact support count.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Itemset {
    /// Strictly ascending, non-empty.
    pub items: Vec<LabelId>,
    pub support_count: u64,
}

/// Canonical output order: size ascending, then items lexicographically.
pub(crate) fn sort_itemsets(itemsets: &mut [Itemset]) {
    itemsets.sort_by(|a, b| a.items.len().cmp(&b.items.len()).then_with(|| a.items.cmp(&b.items)));
}

/// Minimum itemset support, absolute or as a fraction of images.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MinSupport {
    Count(u64),
    Fraction(f64),
}

impl MinSupport {
    /// Absolute count; fractions round up and never go below 1.
    pub fn to_count(self, n_images: u64) -> u64 {
        match self {
            MinSupport::Count(c) => c.max(1),
            MinSupport::Fraction(f) => ceil_fraction(f, n_images),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MiningConfig {
    pub min_support: MinSupport,
    pub min_confidence: f64,
    pub max_itemset_size: Option<usize>,
}

impl Default for MiningConfig {
    fn default() -> Self {
        MiningConfig {
            min_support: MinSupport::Fraction(0.01),
            min_confidence: 0.5,
            max_itemset_size: None,
        }
    }
}

impl MiningConfig {
    pub fn validate(&self) -> Result<(), FpmError> {
        match self.min_support {
            MinSupport::Count(0) => {
                return Err(FpmError::InvalidConfig("min_support count must be at least 1".into()))
            }
            MinSupport::Fraction(f) if !(f > 0.0 && f <= 1.0) => {
                return Err(FpmError::InvalidConfig(format!("min_support fraction {f} outside (0,1]")))
            }
            _ => {}
        }
        if !(0.0..=1.0).contains(&self.min_confidence) {
            return Err(FpmError::InvalidConfig(format!(
                "min_confidence {} outside [0,1]",
                self.min_confidence
            )));
        }
        if self.max_itemset_size == Some(0) {
            return Err(FpmError::InvalidConfig("max_itemset_size must be at least 1".into()));
        }
        Ok(())
    }
}
