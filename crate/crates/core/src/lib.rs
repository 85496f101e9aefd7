//! Named-entity aware English to Punjabi transliteration and translation.
//!
//! * [`syllabifier`] splits Latin-script names into syllables with a small,
//!   configurable rule set.
//! * [`translit`] learns syllable-pair probabilities from an aligned corpus
//!   and decodes the most probable target spelling.
//! * [`kb`] looks up LOCATION and ORGANIZATION names in a bilingual
//!   knowledge base.
//! * [`entity_io`] reads slash-tagged NER output and routes each entity.
//! * [`pipeline`] ties these together; [`evaluator`] scores the output.

pub mod entity_io;
pub mod evaluator;
pub mod kb;
pub mod pipeline;
pub mod syllabifier;
pub mod text;
pub mod translit;

pub use entity_io::{parse_tagged, preprocess, route, EntityTag, Route, TaggedEntity};
pub use evaluator::{accuracy, evaluate, f_measure, precision, recall, EvalReport};
pub use kb::{load_kb, translate, KnowledgeBase};
pub use pipeline::{run_pipeline, Pipeline, PipelineConfig, PipelineError, Provenance};
pub use syllabifier::{syllabify, SyllabificationRules, SyllabifiedWord, Syllable};
pub use translit::{
    decode, load_model, save_model, train, ParallelPair, TransliterationCandidate,
    TransliterationModel,
};
