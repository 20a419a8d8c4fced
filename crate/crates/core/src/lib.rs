//! Author name disambiguation for bibliographic corpora and measurement of
//! how disambiguation errors distort coauthorship-network statistics.
//!
//! The crate provides:
//!
//! * [`corpus`]: JSONL corpora, label files and a seeded synthetic generator,
//! * [`names`]: name normalization and token comparisons,
//! * [`ibd`]: first-initial, all-initials and hybrid baselines,
//! * [`heuristic`]: the similarity-based disambiguator used as a proxy for
//!   ground truth,
//! * [`evalmetrics`]: K-metric, cluster F1 and misidentification rate,
//! * [`netstats`]: coauthorship graph statistics and top-k comparisons,
//! * [`report`]: the multi-method comparison report.

pub mod corpus;
pub mod error;
pub mod evalmetrics;
pub mod heuristic;
pub mod ibd;
pub mod names;
pub mod netstats;
pub mod report;
pub mod unionfind;

pub use error::{Error, Result};
