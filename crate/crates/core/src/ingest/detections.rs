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
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::{IngestError, LabelId, LabelVocabulary, Transaction, TransactionSet};

/// Default minimum detector score for a detection to count as present.
pub const DEFAULT_SCORE_THRESHOLD: f64 = 0.5;

/// One detector output record. The box is carried through but never used
/// for mining.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawDetection {
    pub image_id: String,
    pub label: String,
    pub score: f64,
    /// `[x, y, width, height]` in pixels.
    pub bbox: [f64; 4],
}

impl RawDetection {
    fn validate(&self, line: usize) -> Result<(), IngestError> {
        if !(0.0..=1.0).contains(&self.score) {
            return Err(IngestError::OutOfRange {
                line,
                what: "score",
                value: self.score,
            });
        }
        for (what, value) in [("bbox width", self.bbox[2]), ("bbox height", self.bbox[3])] {
            if value.is_nan() || value < 0.0 {
                return Err(IngestError::OutOfRange { line, what, value });
            }
        }
        Ok(())
    }
}

/// Parses detector output, one JSON detection per line, against a closed
/// vocabulary.
///
/// Detections scoring below `score_threshold` are dropped. Every image seen
/// in the stream keeps a transaction (possibly empty) in order of first
/// appearance, so `image_count` counts images before filtering.
pub fn parse_detections_jsonl<R: BufRead>(
    reader: R,
    vocabulary: &LabelVocabulary,
    score_threshold: f64,
) -> Result<TransactionSet, IngestError> {
    if !(0.0..=1.0).contains(&score_threshold) {
        return Err(IngestError::InvalidThreshold(score_threshold));
    }
    let mut slots: HashMap<String, usize> = HashMap::new();
    let mut images: Vec<(String, Vec<LabelId>)> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let det: RawDetection =
            serde_json::from_str(&line).map_err(|e| IngestError::Record {
                line: line_no,
                message: e.to_string(),
            })?;
        det.validate(line_no)?;
        let label = vocabulary
            .id(&det.label)
            .ok_or_else(|| IngestError::UnknownLabel {
                line: line_no,
                label: det.label.clone(),
            })?;
        let slot = match slots.get(&det.image_id) {
            Some(&s) => s,
            None => {
                slots.insert(det.image_id.clone(), images.len());
                images.push((det.image_id, Vec::new()));
                images.len() - 1
            }
        };
        if det.score >= score_threshold {
            images[slot].1.push(label);
        }
    }
    let image_count = images.len();
    let transactions = images
        .into_iter()
        .map(|(id, labels)| Transaction::new(id, labels))
        .collect();
    TransactionSet::new(vocabulary.clone(), transactions, image_count)
}
