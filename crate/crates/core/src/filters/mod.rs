//! The curation cascade: metadata, human existence and human action stages.

mod action;
mod cascade;
mod config;
mod existence;
mod lexicon;
mod metadata;

use thiserror::Error;

pub use action::{human_action_filter, motion_score};
pub use cascade::{run_cascade, Cascade, CascadeOutcome};
pub use config::{ConfigError, FilterConfig, PairRule};
pub use existence::{frame_coverage, human_existence_filter};
pub use lexicon::{inflections, VerbLexicon};
pub use metadata::{caption_has_verb, metadata_filter, tokenize_caption};

/// A stage received input it cannot judge.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FilterError {
    #[error("existence stage needs exactly {expected} frames, got {found}")]
    ExistenceFrameCount { expected: usize, found: usize },
    #[error("action stage needs at least 2 frames, got {found}")]
    TooFewActionFrames { found: usize },
}
