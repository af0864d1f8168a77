//! Terminology-aware data preparation and evaluation for machine translation.
//!
//! The crate covers the full offline pipeline: reading pre-tokenized
//! parallel corpora and their morphology, aligning target lemmas to source
//! words, annotating source sentences with target lemmas (or exact target
//! forms) through a factored input stream, annotating inference inputs from
//! a bilingual glossary, and scoring system output.

pub mod aligner;
pub mod annotator;
pub mod corpus;
pub mod error;
pub mod evaluator;
pub mod lemma;
pub mod text;
mod workers;

pub use error::{Error, Result};
pub use workers::with_workers;
