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

use std::collections::BTreeSet;

use super::{IngestError, LabelVocabulary, TransactionSet};

fn object_names(image_id: &str, xml: &str) -> Result<Vec<String>, IngestError> {
    let doc = roxmltree::Document::parse(xml).map_err(|e| IngestError::Xml {
        image_id: image_id.to_string(),
        message: e.to_string(),
    })?;
    let root = doc.root_element();
    if root.tag_name().name() != "annotation" {
        return Err(IngestError::Format {
            image_id: image_id.to_string(),
            message: format!("root element is <{}>, expected <annotation>", root.tag_name().name()),
        });
    }
    let mut names = Vec::new();
    for object in root.children().filter(|n| n.has_tag_name("object")) {
        let name = object
            .children()
            .find(|n| n.has_tag_name("name"))
            .map(|n| n.text().unwrap_or("").trim())
            .unwrap_or("");
        if name.is_empty() {
            return Err(IngestError::Format {
                image_id: image_id.to_string(),
                message: "object has an empty or missing <name>".to_string(),
            });
        }
        names.push(name.to_string());
    }
    Ok(names)
}

/// Parses Pascal VOC annotation documents, one per image.
///
/// The vocabulary is the lexicographically sorted set of every
/// `annotation/object/name` seen across all documents.
pub fn parse_voc<I, S, X>(documents: I) -> Result<TransactionSet, IngestError>
where
    I: IntoIterator<Item = (S, X)>,
    S: Into<String>,
    X: AsRef<str>,
{
    let mut records = Vec::new();
    let mut all_names = BTreeSet::new();
    for (image_id, xml) in documents {
        let image_id = image_id.into();
        let names = object_names(&image_id, xml.as_ref())?;
        all_names.extend(names.iter().cloned());
        records.push((image_id, names));
    }
    let vocabulary = LabelVocabulary::new(all_names)?;
    TransactionSet::from_named(vocabulary, records)
}
