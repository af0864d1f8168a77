//! Factored source annotation.
//!
//! Training data: source words aligned one-to-one with a target noun or verb
//! are sampled and followed by the target lemma (or, for the exact-form
//! variant, the target surface form). The source words get factor `s`, the
//! inserted tokens `t`, all other words `w`. The annotated corpus is mixed
//! 1:1 with the original.
//!
//! Inference data: glossary terms found in the source sentence are annotated
//! with the dictionary form of their translation.

mod events;
mod factored;
mod inference;
mod sampling;
mod training;

pub use events::{apply_annotations, AnnotationEvent, Provenance};
pub use factored::{
    parse_factored, propagate_factors_to_subwords, serialize_factored, Factor, FactoredFormat,
    FactoredSentence, FactoredToken,
};
pub use inference::{
    annotate_inference_input, load_expectations, match_glossary, write_expectations,
    TermExpectation,
};
pub use sampling::{
    sample_annotations, select_candidates, select_tla_candidates, AnnotationKind, SamplingPolicy,
};
pub use training::{
    build_eta_from_glossary, build_eta_training_set, build_tla_training_set, build_training_set,
    MixConfig, TrainingSet,
};
