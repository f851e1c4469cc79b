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

use std::collections::HashMap;

use serde::Serialize;

use super::{FpmError, Itemset};
use crate::exact::ratio_at_least;
use crate::ingest::LabelId;

/// `antecedent -> consequent` with exact support counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssociationRule {
    pub antecedent: Vec<LabelId>,
    pub consequent: Vec<LabelId>,
    /// Transactions containing antecedent ∪ consequent.
    pub support_count: u64,
    /// Transactions containing the antecedent.
    pub antecedent_support: u64,
    /// `support_count / antecedent_support`.
    pub confidence: f64,
}

// Itemsets wider than this would need more than 2^20 antecedents each.
const MAX_RULE_ITEMSET: usize = 20;

/// Emits every rule `A -> I \ A` over each itemset `I` of size >= 2 and each
/// non-empty proper subset `A`, keeping rules with confidence at least
/// `min_confidence`. The comparison is done on integer supports.
///
/// Rules come out sorted by `(antecedent, consequent)`.
pub fn rules_from_itemsets(itemsets: &[Itemset], min_confidence: f64) -> Result<Vec<AssociationRule>, FpmError> {
    if !(0.0..=1.0).contains(&min_confidence) {
        return Err(FpmError::InvalidConfig(format!("min_confidence {min_confidence} outside [0,1]")));
    }
    let supports: HashMap<&[LabelId], u64> = itemsets
        .iter()
        .map(|i| (i.items.as_slice(), i.support_count))
        .collect();
    let mut rules = Vec::new();
    for itemset in itemsets.iter().filter(|i| i.items.len() >= 2) {
        let n = itemset.items.len();
        if n > MAX_RULE_ITEMSET {
            return Err(FpmError::ItemsetTooLarge(n));
        }
        for mask in 1u32..(1u32 << n) - 1 {
            let (antecedent, consequent): (Vec<_>, Vec<_>) = itemset
                .items
                .iter()
                .copied()
                .enumerate()
                .partition(|(b, _)| mask & (1 << b) != 0);
            let antecedent: Vec<LabelId> = antecedent.into_iter().map(|(_, l)| l).collect();
            let consequent: Vec<LabelId> = consequent.into_iter().map(|(_, l)| l).collect();
            let antecedent_support = *supports
                .get(antecedent.as_slice())
                .ok_or_else(|| FpmError::MissingSupport(antecedent.clone()))?;
            if antecedent_support == 0 || antecedent_support < itemset.support_count {
                return Err(FpmError::MissingSupport(antecedent));
            }
            if ratio_at_least(itemset.support_count, antecedent_support, min_confidence) {
                rules.push(AssociationRule {
                    confidence: itemset.support_count as f64 / antecedent_support as f64,
                    antecedent,
                    consequent,
                    support_count: itemset.support_count,
                    antecedent_support,
                });
            }
        }
    }
    rules.sort_by(|a, b| {
        a.antecedent
            .cmp(&b.antecedent)
            .then_with(|| a.consequent.cmp(&b.consequent))
    });
    Ok(rules)
}

/// Rules whose antecedent is a single base class, in input order.
pub fn base_class_rules(rules: &[AssociationRule], bases: &[LabelId]) -> Vec<AssociationRule> {
    rules
        .iter()
        .filter(|r| r.antecedent.len() == 1 && bases.contains(&r.antecedent[0]))
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(ids: &[u32]) -> Vec<LabelId> {
        ids.iter().copied().map(LabelId).collect()
    }

    fn set(ids: &[u32], n: u64) -> Itemset {
        Itemset {
            items: l(ids),
            support_count: n,
        }
    }

    // person=0, dog=1, car=2 over the 4-image fixture, min_support 2.
    fn fixture() -> Vec<Itemset> {
        vec![set(&[0], 3), set(&[1], 3), set(&[2], 2), set(&[0, 1], 2), set(&[0, 2], 2)]
    }

    #[test]
    fn person_implies_dog() {
        let rules = rules_from_itemsets(&fixture(), 0.5).unwrap();
        let r = rules
            .iter()
            .find(|r| r.antecedent == l(&[0]) && r.consequent == l(&[1]))
            .unwrap();
        assert_eq!((r.support_count, r.antecedent_support), (2, 3));
        assert!((r.confidence - 2.0 / 3.0).abs() < 1e-15);
        // {car} -> {person} has confidence 1, {dog} -> {person} 2/3
        assert_eq!(rules.len(), 4);
    }

    #[test]
    fn confidence_boundaries() {
        let all = rules_from_itemsets(&fixture(), 0.0).unwrap();
        assert_eq!(all.len(), 4);
        let certain = rules_from_itemsets(&fixture(), 1.0).unwrap();
        assert_eq!(certain.len(), 1);
        assert_eq!((certain[0].antecedent.clone(), certain[0].consequent.clone()), (l(&[2]), l(&[0])));
    }

    #[test]
    fn sorted_output() {
        let rules = rules_from_itemsets(&fixture(), 0.0).unwrap();
        let keys: Vec<_> = rules.iter().map(|r| (r.antecedent.clone(), r.consequent.clone())).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn three_item_rules() {
        let itemsets = vec![
            set(&[0], 2),
            set(&[1], 2),
            set(&[2], 2),
            set(&[0, 1], 2),
            set(&[0, 2], 2),
            set(&[1, 2], 2),
            set(&[0, 1, 2], 2),
        ];
        let rules = rules_from_itemsets(&itemsets, 0.0).unwrap();
        // 3 pairs x 2 + one triple x 6
        assert_eq!(rules.len(), 12);
    }

    #[test]
    fn missing_antecedent_support() {
        let itemsets = vec![set(&[0], 3), set(&[0, 1], 2)];
        assert_eq!(
            rules_from_itemsets(&itemsets, 0.5),
            Err(FpmError::MissingSupport(l(&[1])))
        );
    }

    #[test]
    fn base_filter() {
        let rules = vec![
            AssociationRule { antecedent: l(&[0]), consequent: l(&[1]), support_count: 2, antecedent_support: 3, confidence: 2.0 / 3.0 },
            AssociationRule { antecedent: l(&[1]), consequent: l(&[0]), support_count: 2, antecedent_support: 3, confidence: 2.0 / 3.0 },
            AssociationRule { antecedent: l(&[0, 2]), consequent: l(&[1]), support_count: 1, antecedent_support: 2, confidence: 0.5 },
        ];
        let kept = base_class_rules(&rules, &l(&[0]));
        assert_eq!(kept, vec![rules[0].clone()]);
        assert!(base_class_rules(&rules, &[]).is_empty());
        assert_eq!(base_class_rules(&rules, &l(&[0, 1, 2])).len(), 2);
    }
}
