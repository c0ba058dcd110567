//! Forecast televised-sports viewership from social-media engagement.
//!
//! The crate is organised as a pipeline of small, independently testable
//! stages:
//!
//! * [`ingest`] collects archived posts for an event's pre-game window and
//!   loads the viewership ground truth.
//! * [`sentiment`] scores post text with a polarity lexicon and a
//!   social-media rule-based analyzer.
//! * [`features`] aggregates posts into per-event engagement rows.
//! * [`preprocess`] screens outliers, transforms the target, scales and
//!   encodes features and splits the data.
//! * [`model`] fits gradient-boosted regression trees and runs a
//!   cross-validated grid search.
//! * [`explain`] computes exact Shapley attributions for a fitted model.
//! * [`report`] computes evaluation metrics and renders SVG figures.
//!
//! [`pipeline`] wires the stages together the way the `buzzcast` binary runs
//! them.

pub mod config;
pub mod error;
pub mod explain;
pub mod features;
pub mod ingest;
pub mod matrix;
pub mod model;
pub mod pipeline;
pub mod preprocess;
pub mod report;
pub mod sentiment;

pub use error::{Error, Result};
pub use matrix::Matrix;
