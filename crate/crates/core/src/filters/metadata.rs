use super::{FilterConfig, VerbLexicon};
use crate::model::{ClipMeta, FailureKind, Stage, StageVerdict};

/// Split a caption into word tokens on whitespace and punctuation.
/// Apostrophes inside words are kept.
pub fn tokenize_caption(caption: &str) -> impl Iterator<Item = &str> {
    caption
        .split(|c: char| !(c.is_alphanumeric() || c == '\''))
        .map(|t| t.trim_matches('\''))
        .filter(|t| !t.is_empty())
}

/// Verb presence: POS tags decide when present, otherwise the lexicon does.
pub fn caption_has_verb(meta: &ClipMeta, lexicon: &VerbLexicon) -> bool {
    match &meta.caption_pos_tags {
        Some(tags) => tags.iter().any(|t| t.is_verb()),
        None => tokenize_caption(&meta.caption).any(|t| lexicon.contains(t)),
    }
}

pub fn metadata_filter(meta: &ClipMeta, lexicon: &VerbLexicon, cfg: &FilterConfig) -> StageVerdict {
    let short_side = meta.width.min(meta.height);
    if short_side < cfg.min_short_side {
        return StageVerdict::fail(
            Stage::Metadata,
            FailureKind::LowResolution,
            None,
            format!(
                "resolution {}x{} below short side {}",
                meta.width, meta.height, cfg.min_short_side
            ),
        );
    }
    if !(cfg.min_clip_s..=cfg.max_clip_s).contains(&meta.duration_s) {
        return StageVerdict::fail(
            Stage::Metadata,
            FailureKind::Duration,
            None,
            format!("duration outside [{},{}]", cfg.min_clip_s, cfg.max_clip_s),
        );
    }
    if !caption_has_verb(meta, lexicon) {
        return StageVerdict::fail(Stage::Metadata, FailureKind::NoVerb, None, "no verb");
    }
    StageVerdict::pass(Stage::Metadata, None, "metadata ok")
}
