use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::filters::CascadeOutcome;
use crate::model::{FailureKind, Stage, StageVerdict};

/// Outcome for one input line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionRecord {
    /// 1-based line number in the input stream.
    pub line: u64,
    pub video_id: String,
    pub clip_id: String,
    pub verdicts: Vec<StageVerdict>,
    #[serde(rename = "final")]
    pub final_pass: bool,
    pub scores: BTreeMap<Stage, f64>,
    /// Decoder message for lines that failed to parse.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl DecisionRecord {
    pub fn from_outcome(line: u64, video_id: &str, clip_id: &str, outcome: CascadeOutcome) -> Self {
        let mut scores = BTreeMap::new();
        for v in &outcome.verdicts {
            scores.extend(v.scores.iter().map(|(k, s)| (*k, *s)));
        }
        Self {
            line,
            video_id: video_id.to_string(),
            clip_id: clip_id.to_string(),
            final_pass: outcome.passed,
            verdicts: outcome.verdicts,
            scores,
            error: None,
        }
    }

    /// Record for a line that could not be decoded. Identifiers are recovered
    /// when the line is a JSON object that carries them.
    pub fn parse_error(line: u64, raw: &[u8], message: String) -> Self {
        let (video_id, clip_id) = recover_ids(raw);
        Self {
            line,
            video_id,
            clip_id,
            verdicts: vec![StageVerdict::fail(
                Stage::Parse,
                FailureKind::ParseError,
                None,
                "parse error",
            )],
            final_pass: false,
            scores: BTreeMap::new(),
            error: Some(message),
        }
    }

    pub fn is_parse_error(&self) -> bool {
        self.verdicts.first().map(|v| v.stage) == Some(Stage::Parse)
    }

    /// The verdict that rejected the clip, if any.
    pub fn rejection(&self) -> Option<&StageVerdict> {
        self.verdicts.iter().find(|v| !v.passed)
    }
}

fn recover_ids(raw: &[u8]) -> (String, String) {
    let Ok(serde_json::Value::Object(obj)) = serde_json::from_slice::<serde_json::Value>(raw) else {
        return (String::new(), String::new());
    };
    let get = |k: &str| {
        obj.get(k)
            .and_then(|v| v.as_str())
            .unwrap_or_default()
            .to_string()
    };
    (get("video_id"), get("clip_id"))
}
