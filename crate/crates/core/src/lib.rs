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

//! Base-class and co-occurring-class statistics for multilabel object data.
//!
//! The pipeline reads per-image labels ([`ingest`]), counts label and pair
//! frequencies ([`cooccurrence`]), mines frequent label patterns and
//! association rules with FP-growth ([`fpm`]), and renders the base-class
//! table ([`report`]). [`cli`] wires it together.

pub mod cli;
pub mod cooccurrence;
pub mod exact;
pub mod fpm;
pub mod ingest;
pub mod report;
