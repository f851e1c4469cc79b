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

use rayon::prelude::*;

use super::tree::FpTree;
use super::{sort_itemsets, FpmError, Itemset};
use crate::ingest::{LabelId, TransactionSet};

/// Largest label universe [`brute_force_itemsets`] will enumerate.
pub const BRUTE_FORCE_MAX_LABELS: usize = 20;

/// Mines every itemset with support at least `min_support_count`.
///
/// Output is sorted by size, then lexicographically by items.
pub fn fp_growth(tree: &FpTree, min_support_count: u64) -> Vec<Itemset> {
    fp_growth_with(tree, min_support_count, None)
}

/// [`fp_growth`] with an optional cap on itemset size.
pub fn fp_growth_with(tree: &FpTree, min_support_count: u64, max_size: Option<usize>) -> Vec<Itemset> {
    let mut out = Vec::new();
    for rank in (0..tree.item_order().len()).rev() {
        mine_item(tree, rank, &[], min_support_count, max_size, &mut out);
    }
    sort_itemsets(&mut out);
    out
}

/// [`fp_growth_with`] with the top-level items mined concurrently on the
/// current rayon pool. Output is identical to the sequential version.
pub fn fp_growth_parallel(tree: &FpTree, min_support_count: u64, max_size: Option<usize>) -> Vec<Itemset> {
    let mut out: Vec<Itemset> = (0..tree.item_order().len())
        .into_par_iter()
        .flat_map_iter(|rank| {
            let mut local = Vec::new();
            mine_item(tree, rank, &[], min_support_count, max_size, &mut local);
            local
        })
        .collect();
    sort_itemsets(&mut out);
    out
}

fn mine_item(
    tree: &FpTree,
    rank: usize,
    suffix: &[LabelId],
    min_support: u64,
    max_size: Option<usize>,
    out: &mut Vec<Itemset>,
) {
    let support = tree.support_at(rank);
    if support < min_support {
        return;
    }
    let mut pattern = Vec::with_capacity(suffix.len() + 1);
    pattern.push(tree.item_order()[rank]);
    pattern.extend_from_slice(suffix);
    let mut items = pattern.clone();
    items.sort_unstable();
    out.push(Itemset {
        items,
        support_count: support,
    });
    if max_size.is_some_and(|m| pattern.len() >= m) {
        return;
    }
    let base = tree.conditional_pattern_base(rank);
    let conditional = FpTree::from_weighted(
        base.iter().map(|(path, w)| (path.as_slice(), *w)),
        tree.label_dim(),
        min_support,
    );
    for r in (0..conditional.item_order().len()).rev() {
        mine_item(&conditional, r, &pattern, min_support, max_size, out);
    }
}

/// Enumerates every non-empty subset of the labels present in `set` and
/// keeps those with support at least `min_support_count`.
///
/// Exponential in the number of distinct labels, which is capped at
/// [`BRUTE_FORCE_MAX_LABELS`].
pub fn brute_force_itemsets(set: &TransactionSet, min_support_count: u64) -> Result<Vec<Itemset>, FpmError> {
    let mut universe: Vec<LabelId> = set
        .transactions()
        .iter()
        .flat_map(|t| t.labels().iter().copied())
        .collect();
    universe.sort_unstable();
    universe.dedup();
    if universe.len() > BRUTE_FORCE_MAX_LABELS {
        return Err(FpmError::UniverseTooLarge {
            labels: universe.len(),
            cap: BRUTE_FORCE_MAX_LABELS,
        });
    }
    let masks: Vec<u32> = set
        .transactions()
        .iter()
        .map(|t| {
            t.labels()
                .iter()
                .map(|l| 1u32 << universe.binary_search(l).expect("label in universe"))
                .fold(0, |a, b| a | b)
        })
        .collect();
    let mut out = Vec::new();
    for subset in 1u32..(1u32 << universe.len()) {
        let support = masks.iter().filter(|&&m| m & subset == subset).count() as u64;
        if support >= min_support_count.max(1) {
            let items = (0..universe.len())
                .filter(|&b| subset & (1 << b) != 0)
                .map(|b| universe[b])
                .collect();
            out.push(Itemset {
                items,
                support_count: support,
            });
        }
    }
    sort_itemsets(&mut out);
    Ok(out)
}
