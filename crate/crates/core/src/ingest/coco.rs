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

use serde::Deserialize;

use super::{IngestError, LabelId, LabelVocabulary, Transaction, TransactionSet};

// Only the fields needed for label sets; everything else in an
// `instances_*.json` file is skipped by serde.
#[derive(Deserialize)]
struct CocoDocument {
    images: Vec<CocoImage>,
    categories: Vec<CocoCategory>,
    #[serde(default)]
    annotations: Vec<CocoAnnotation>,
}

#[derive(Deserialize)]
struct CocoImage {
    id: u64,
}

#[derive(Deserialize)]
struct CocoCategory {
    id: u64,
    name: String,
}

#[derive(Deserialize)]
struct CocoAnnotation {
    image_id: u64,
    category_id: u64,
}

/// Parses a COCO instances document.
///
/// Categories are remapped to dense ids in ascending category-id order, and
/// each entry of `images` becomes one transaction (in document order).
pub fn parse_coco(document: &str) -> Result<TransactionSet, IngestError> {
    let doc: CocoDocument =
        serde_json::from_str(document).map_err(|e| IngestError::from_json(&e))?;

    let mut categories: Vec<&CocoCategory> = doc.categories.iter().collect();
    categories.sort_by_key(|c| c.id);
    if let Some(w) = categories.windows(2).find(|w| w[0].id == w[1].id) {
        return Err(IngestError::DuplicateCategoryId(w[0].id.to_string()));
    }
    let vocabulary = LabelVocabulary::new(categories.iter().map(|c| c.name.as_str()))?;
    let category_index: HashMap<u64, LabelId> = categories
        .iter()
        .enumerate()
        .map(|(i, c)| (c.id, LabelId(i as u32)))
        .collect();

    let mut image_index: HashMap<u64, usize> = HashMap::with_capacity(doc.images.len());
    for (i, image) in doc.images.iter().enumerate() {
        if image_index.insert(image.id, i).is_some() {
            return Err(IngestError::DuplicateImageId(image.id.to_string()));
        }
    }

    let mut labels: Vec<Vec<LabelId>> = vec![Vec::new(); doc.images.len()];
    for ann in &doc.annotations {
        let &slot = image_index
            .get(&ann.image_id)
            .ok_or_else(|| IngestError::UnknownImage(ann.image_id.to_string()))?;
        let &label = category_index
            .get(&ann.category_id)
            .ok_or_else(|| IngestError::UnknownCategory(ann.category_id.to_string()))?;
        labels[slot].push(label);
    }

    let transactions = doc
        .images
        .iter()
        .zip(labels)
        .map(|(image, l)| Transaction::new(image.id.to_string(), l))
        .collect();
    TransactionSet::new(vocabulary, transactions, doc.images.len())
}
