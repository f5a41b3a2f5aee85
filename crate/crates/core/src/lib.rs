//! From-scratch text classification workbench for Pashto (Arabic-script)
//! documents.
//!
//! The pipeline: [`textnorm`] normalizes and tokenizes raw text, [`corpus`]
//! holds labelled documents and produces deterministic splits, [`features`]
//! builds n-gram/TF-IDF vocabularies and sparse vectors, [`classifiers`]
//! implements eight classifiers over those vectors, [`multilabel`] layers
//! binary-relevance multi-label classification on top, [`metrics`] scores
//! predictions, and [`harness`] runs (classifier x feature) experiment grids
//! and renders result tables, charts, and manifests.
//!
//! Data-parallel inner loops (batch vectorization, grid cells, per-label
//! training, forest growth) run on rayon when the default `parallel` feature
//! is enabled and fall back to sequential iteration — with identical results
//! — when it is not.

pub mod classifiers;
pub mod corpus;
pub mod error;
pub mod exec;
pub mod features;
pub mod harness;
pub mod metrics;
pub mod multilabel;
pub mod textnorm;

pub use error::{Error, Result};
