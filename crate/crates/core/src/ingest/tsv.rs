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

//! Native interchange format: `image_id<TAB>label,label,...` per line.

use std::collections::{BTreeSet, HashSet};
use std::io::BufRead;

use super::{IngestError, LabelVocabulary, TransactionSet};

pub fn parse_transactions_tsv<R: BufRead>(reader: R) -> Result<TransactionSet, IngestError> {
    let mut records: Vec<(String, Vec<String>)> = Vec::new();
    let mut seen_ids = HashSet::new();
    let mut all_names = BTreeSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let (image_id, labels) = line.split_once('\t').ok_or_else(|| IngestError::Record {
            line: line_no,
            message: "expected image_id<TAB>labels".to_string(),
        })?;
        if image_id.is_empty() {
            return Err(IngestError::Record {
                line: line_no,
                message: "empty image id".to_string(),
            });
        }
        if labels.contains('\t') {
            return Err(IngestError::Record {
                line: line_no,
                message: "more than one tab".to_string(),
            });
        }
        if !seen_ids.insert(image_id.to_string()) {
            return Err(IngestError::Record {
                line: line_no,
                message: format!("duplicate image id '{image_id}'"),
            });
        }
        let names: Vec<String> = if labels.is_empty() {
            Vec::new()
        } else {
            labels.split(',').map(str::to_string).collect()
        };
        if names.iter().any(String::is_empty) {
            return Err(IngestError::Record {
                line: line_no,
                message: "empty label name".to_string(),
            });
        }
        all_names.extend(names.iter().cloned());
        records.push((image_id.to_string(), names));
    }
    let vocabulary = LabelVocabulary::new(all_names)?;
    TransactionSet::from_named(vocabulary, records)
}

/// Renders one line per transaction, labels in ascending-id order.
pub fn write_transactions_tsv(set: &TransactionSet) -> String {
    let mut out = String::new();
    for t in set.transactions() {
        out.push_str(t.image_id());
        out.push('\t');
        for (i, name) in set.label_names(t).enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(name);
        }
        out.push('\n');
    }
    out
}
