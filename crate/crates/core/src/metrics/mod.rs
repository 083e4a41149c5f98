//! Benchmark-side data model and metrics: structured caption documents,
//! multiple-choice QA items, accuracy with refusals, GSB scores and the
//! caption-based answering round.

mod caption;
mod eval;
mod qa;
mod scoring;

use thiserror::Error;

pub use caption::{
    caption_stats, parse_caption_doc, validate_caption_doc, CaptionDoc, CaptionStats, Event,
    Subject, SubjectAttributes, Violation,
};
pub use eval::{
    caption_eval_round, parse_reply, AnswerClient, AnswerRequest, ClientError, EvalRound,
    ScriptedClient, MAX_ATTEMPTS, REFUSAL_TOKEN,
};
pub use qa::{
    category_counts, invert_permutation, option_permutation, parse_qa_item, shuffle_options,
    unshuffle_options, QACategory, QAItem,
};
pub use scoring::{
    accuracy, accuracy_by_category, gsb_score, AccuracyReport, AnswerOutcome, CategoryAccuracy,
    GsbJudgment, GsbScore,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("{outcomes} outcomes but {gold} gold answers")]
    LengthMismatch { outcomes: usize, gold: usize },
    #[error("nothing to score")]
    Empty,
    #[error("GSB judgment has no counts")]
    EmptyJudgment,
    #[error("invalid QA item: {0}")]
    InvalidItem(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
