use super::{human_action_filter, human_existence_filter, metadata_filter, FilterConfig, FilterError, VerbLexicon};
use crate::model::{ClipRecord, FailureKind, Stage, StageVerdict};

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeOutcome {
    /// One verdict per stage attempted, in cascade order.
    pub verdicts: Vec<StageVerdict>,
    pub passed: bool,
}

impl CascadeOutcome {
    pub fn failed_verdict(&self) -> Option<&StageVerdict> {
        self.verdicts.iter().find(|v| !v.passed)
    }
}

fn invalid(stage: Stage, err: FilterError) -> StageVerdict {
    StageVerdict::fail(stage, FailureKind::InvalidInput, None, format!("invalid input: {err}"))
}

/// Run metadata, existence and action stages in order, stopping at the
/// first failure. Input errors become failed verdicts.
pub fn run_cascade(clip: &ClipRecord, cfg: &FilterConfig, lexicon: &VerbLexicon) -> CascadeOutcome {
    let mut verdicts = Vec::with_capacity(3);

    let v = metadata_filter(&clip.meta, lexicon, cfg);
    let ok = v.passed;
    verdicts.push(v);
    if !ok {
        return CascadeOutcome { verdicts, passed: false };
    }

    let v = human_existence_filter(&clip.existence_frames, cfg)
        .unwrap_or_else(|e| invalid(Stage::Existence, e));
    let ok = v.passed;
    verdicts.push(v);
    if !ok {
        return CascadeOutcome { verdicts, passed: false };
    }

    let v = human_action_filter(&clip.action_frames, cfg)
        .unwrap_or_else(|e| invalid(Stage::ActionMotion, e));
    let passed = v.passed;
    verdicts.push(v);
    CascadeOutcome { verdicts, passed }
}

/// A validated configuration bundled with its lexicon.
#[derive(Debug, Clone)]
pub struct Cascade {
    cfg: FilterConfig,
    lexicon: VerbLexicon,
}

impl Cascade {
    pub fn new(cfg: FilterConfig, lexicon: VerbLexicon) -> Result<Self, super::ConfigError> {
        cfg.validate()?;
        Ok(Self { cfg, lexicon })
    }

    pub fn with_defaults() -> Self {
        Self {
            cfg: FilterConfig::default(),
            lexicon: VerbLexicon::bundled(),
        }
    }

    pub fn config(&self) -> &FilterConfig {
        &self.cfg
    }

    pub fn lexicon(&self) -> &VerbLexicon {
        &self.lexicon
    }

    pub fn evaluate(&self, clip: &ClipRecord) -> CascadeOutcome {
        run_cascade(clip, &self.cfg, &self.lexicon)
    }
}
