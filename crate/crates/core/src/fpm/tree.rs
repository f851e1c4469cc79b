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

use std::fmt::Write as _;

use crate::ingest::{LabelId, LabelVocabulary, TransactionSet};

#[derive(Debug, Clone)]
struct Node {
    item: Option<LabelId>,
    count: u64,
    parent: Option<usize>,
    children: Vec<usize>,
}

const ROOT: usize = 0;
const NOT_FREQUENT: usize = usize::MAX;

/// Prefix tree of frequency-ordered transactions with per-item header lists.
///
/// Nodes live in an arena; index 0 is the item-less root. `item_order` holds
/// the frequent items by descending support, ties by ascending id, and every
/// root-to-leaf path follows that order.
#[derive(Debug, Clone)]
pub struct FpTree {
    nodes: Vec<Node>,
    item_order: Vec<LabelId>,
    supports: Vec<u64>,
    // label index -> position in item_order
    rank: Vec<usize>,
    // per rank, the nodes holding that item in insertion order
    header: Vec<Vec<usize>>,
}

impl FpTree {
    /// Builds a tree from weighted label paths, keeping only items whose
    /// weighted support reaches `min_support`. `dim` bounds the label ids.
    pub(crate) fn from_weighted<'a, I>(paths: I, dim: usize, min_support: u64) -> Self
    where
        I: Iterator<Item = (&'a [LabelId], u64)> + Clone,
    {
        let mut totals = vec![0u64; dim];
        for (items, weight) in paths.clone() {
            for item in items {
                totals[item.index()] += weight;
            }
        }
        let mut item_order: Vec<LabelId> = (0..dim as u32)
            .map(LabelId)
            .filter(|l| totals[l.index()] >= min_support && totals[l.index()] > 0)
            .collect();
        item_order.sort_by(|a, b| totals[b.index()].cmp(&totals[a.index()]).then(a.cmp(b)));
        let mut rank = vec![NOT_FREQUENT; dim];
        for (r, item) in item_order.iter().enumerate() {
            rank[item.index()] = r;
        }

        let mut tree = FpTree {
            nodes: vec![Node {
                item: None,
                count: 0,
                parent: None,
                children: Vec::new(),
            }],
            supports: item_order.iter().map(|l| totals[l.index()]).collect(),
            header: vec![Vec::new(); item_order.len()],
            item_order,
            rank,
        };
        let mut ranks: Vec<usize> = Vec::new();
        for (items, weight) in paths {
            ranks.clear();
            ranks.extend(
                items
                    .iter()
                    .map(|l| tree.rank[l.index()])
                    .filter(|&r| r != NOT_FREQUENT),
            );
            if ranks.is_empty() {
                continue;
            }
            ranks.sort_unstable();
            tree.insert(&ranks, weight);
        }
        tree
    }

    fn insert(&mut self, ranks: &[usize], weight: u64) {
        let mut cur = ROOT;
        self.nodes[ROOT].count += weight;
        for &r in ranks {
            let item = self.item_order[r];
            let existing = self.nodes[cur]
                .children
                .iter()
                .copied()
                .find(|&c| self.nodes[c].item == Some(item));
            cur = match existing {
                Some(c) => {
                    self.nodes[c].count += weight;
                    c
                }
                None => {
                    let idx = self.nodes.len();
                    self.nodes.push(Node {
                        item: Some(item),
                        count: weight,
                        parent: Some(cur),
                        children: Vec::new(),
                    });
                    self.nodes[cur].children.push(idx);
                    self.header[r].push(idx);
                    idx
                }
            };
        }
    }

    /// Frequent items by descending support, ties by ascending id.
    pub fn item_order(&self) -> &[LabelId] {
        &self.item_order
    }

    /// Total support of the `rank`-th item of [`item_order`](Self::item_order).
    pub fn support_at(&self, rank: usize) -> u64 {
        self.supports[rank]
    }

    pub fn support(&self, item: LabelId) -> Option<u64> {
        self.rank_of(item).map(|r| self.supports[r])
    }

    fn rank_of(&self, item: LabelId) -> Option<usize> {
        self.rank
            .get(item.index())
            .copied()
            .filter(|&r| r != NOT_FREQUENT)
    }

    /// True when no item is frequent.
    pub fn is_empty(&self) -> bool {
        self.item_order.is_empty()
    }

    /// Number of item nodes (the root excluded).
    pub fn node_count(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Counts of the header-linked nodes for `item`, in insertion order.
    pub fn header_counts(&self, item: LabelId) -> Vec<u64> {
        self.rank_of(item)
            .map(|r| self.header[r].iter().map(|&n| self.nodes[n].count).collect())
            .unwrap_or_default()
    }

    /// `(item, count)` for each child of the root.
    pub fn root_children(&self) -> Vec<(LabelId, u64)> {
        self.nodes[ROOT]
            .children
            .iter()
            .map(|&c| (self.nodes[c].item.expect("non-root node"), self.nodes[c].count))
            .collect()
    }

    pub(crate) fn label_dim(&self) -> usize {
        self.rank.len()
    }

    /// Prefix paths (root side first) leading to each node of the
    /// `rank`-th item, weighted by that node's count.
    pub(crate) fn conditional_pattern_base(&self, rank: usize) -> Vec<(Vec<LabelId>, u64)> {
        self.header[rank]
            .iter()
            .map(|&n| {
                let mut path = Vec::new();
                let mut cur = self.nodes[n].parent;
                while let Some(p) = cur {
                    if let Some(item) = self.nodes[p].item {
                        path.push(item);
                    }
                    cur = self.nodes[p].parent;
                }
                path.reverse();
                (path, self.nodes[n].count)
            })
            .collect()
    }

    /// Indented text dump, one node per line as `item:<name> count:<n>`,
    /// children in item order.
    pub fn dump(&self, vocabulary: &LabelVocabulary) -> String {
        let mut out = String::new();
        self.dump_children(ROOT, 0, vocabulary, &mut out);
        out
    }

    fn dump_children(&self, node: usize, depth: usize, vocab: &LabelVocabulary, out: &mut String) {
        let mut children = self.nodes[node].children.clone();
        children.sort_by_key(|&c| self.rank_of(self.nodes[c].item.expect("non-root")));
        for c in children {
            let item = self.nodes[c].item.expect("non-root");
            let name = vocab.name(item).map(str::to_string).unwrap_or_else(|| format!("#{item}"));
            let _ = writeln!(out, "{:indent$}item:{} count:{}", "", name, self.nodes[c].count, indent = 2 * depth);
            self.dump_children(c, depth + 1, vocab, out);
        }
    }

    /// Checks the structural invariants, describing the first violation.
    pub fn check_invariants(&self) -> Result<(), String> {
        for (idx, node) in self.nodes.iter().enumerate().skip(1) {
            let item = node.item.ok_or_else(|| format!("node {idx} has no item"))?;
            let r = self.rank_of(item).ok_or_else(|| format!("node {idx} holds infrequent item {item}"))?;
            if node.count == 0 {
                return Err(format!("node {idx} has zero count"));
            }
            let parent = node.parent.ok_or_else(|| format!("node {idx} has no parent"))?;
            if let Some(pitem) = self.nodes[parent].item {
                if self.rank_of(pitem).is_none_or(|pr| pr >= r) {
                    return Err(format!("node {idx} breaks item order under its parent"));
                }
            }
            if !self.header[r].contains(&idx) {
                return Err(format!("node {idx} missing from header of item {item}"));
            }
        }
        for node in &self.nodes {
            let child_sum: u64 = node.children.iter().map(|&c| self.nodes[c].count).sum();
            if node.item.is_some() && child_sum > node.count {
                return Err("a node's children outweigh it".into());
            }
        }
        for (r, links) in self.header.iter().enumerate() {
            if links.iter().any(|&n| self.nodes[n].item != Some(self.item_order[r])) {
                return Err(format!("header of rank {r} links a foreign node"));
            }
            let mass: u64 = links.iter().map(|&n| self.nodes[n].count).sum();
            if mass != self.supports[r] {
                return Err(format!("header mass {mass} != support {} at rank {r}", self.supports[r]));
            }
        }
        Ok(())
    }
}

/// Builds the FP-tree of `set`, dropping items with fewer than
/// `min_support_count` occurrences.
pub fn build_fp_tree(set: &TransactionSet, min_support_count: u64) -> FpTree {
    assert!(min_support_count >= 1, "min_support_count must be at least 1");
    let paths = set.transactions().iter().map(|t| (t.labels(), 1u64));
    FpTree::from_weighted(paths, set.vocabulary().len(), min_support_count)
}
