//! Shared value types for the curation pipeline.
//!
//! All coordinates are normalized fractions of the frame size. Keypoints
//! follow the homogeneous `(height, width, 1)` convention, so `h` always
//! comes before `w`. Bounding boxes keep the conventional `[x1, y1, x2, y2]`
//! layout, where `x` runs along the width and `y` along the height.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Number of body keypoints per person (COCO-17 layout).
pub const KEYPOINT_COUNT: usize = 17;

/// Number of uniformly sampled frames the existence filter inspects.
pub const EXISTENCE_FRAME_COUNT: usize = 16;

/// COCO-17 keypoint names in wire order.
pub const COCO17_KEYPOINTS: [&str; KEYPOINT_COUNT] = [
    "nose",
    "left_eye",
    "right_eye",
    "left_ear",
    "right_ear",
    "left_shoulder",
    "right_shoulder",
    "left_elbow",
    "right_elbow",
    "left_wrist",
    "right_wrist",
    "left_hip",
    "right_hip",
    "left_knee",
    "right_knee",
    "left_ankle",
    "right_ankle",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Keypoint {
    pub h: f64,
    pub w: f64,
    pub confidence: f64,
}

impl Keypoint {
    pub fn new(h: f64, w: f64, confidence: f64) -> Self {
        Self { h, w, confidence }
    }

    #[inline]
    pub fn is_visible(&self, conf_min: f64) -> bool {
        self.confidence >= conf_min
    }

    #[inline]
    pub fn position(&self) -> [f64; 2] {
        [self.h, self.w]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
}

impl BoundingBox {
    pub fn new(x1: f64, y1: f64, x2: f64, y2: f64) -> Self {
        Self { x1, y1, x2, y2 }
    }

    pub fn width(&self) -> f64 {
        (self.x2 - self.x1).max(0.0)
    }

    pub fn height(&self) -> f64 {
        (self.y2 - self.y1).max(0.0)
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    /// Tight box around the keypoints, grown by `margin` and clipped to the frame.
    pub fn around_keypoints(keypoints: &[Keypoint], margin: f64) -> Self {
        let (mut x1, mut y1) = (f64::INFINITY, f64::INFINITY);
        let (mut x2, mut y2) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for kp in keypoints {
            x1 = x1.min(kp.w);
            x2 = x2.max(kp.w);
            y1 = y1.min(kp.h);
            y2 = y2.max(kp.h);
        }
        if keypoints.is_empty() {
            return Self::new(0.0, 0.0, 0.0, 0.0);
        }
        Self::new(
            (x1 - margin).clamp(0.0, 1.0),
            (y1 - margin).clamp(0.0, 1.0),
            (x2 + margin).clamp(0.0, 1.0),
            (y2 + margin).clamp(0.0, 1.0),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PersonDetection {
    pub bbox: BoundingBox,
    pub keypoints: [Keypoint; KEYPOINT_COUNT],
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoseFrame {
    pub frame_index: u64,
    pub timestamp_s: f64,
    pub persons: Vec<PersonDetection>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosTag {
    pub token: String,
    pub tag: String,
}

impl PosTag {
    /// Universal `VERB` or any Penn Treebank `VB*` tag. Auxiliaries do not count.
    pub fn is_verb(&self) -> bool {
        self.tag == "VERB" || self.tag.starts_with("VB")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClipMeta {
    pub video_id: String,
    pub clip_id: String,
    pub width: u32,
    pub height: u32,
    pub duration_s: f64,
    pub caption: String,
    pub caption_pos_tags: Option<Vec<PosTag>>,
}

/// One clip: metadata plus the two pose samplings the filters consume.
#[derive(Debug, Clone, PartialEq)]
pub struct ClipRecord {
    pub meta: ClipMeta,
    /// Uniformly sampled frames for the existence filter (16 in a complete record).
    pub existence_frames: Vec<PoseFrame>,
    /// Frames sampled at 1 fps for the action filter.
    pub action_frames: Vec<PoseFrame>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackletEntry {
    pub frame_index: u64,
    /// Position of the detection inside its frame's `persons` list.
    pub detection_index: usize,
    pub person: PersonDetection,
}

/// A person followed across consecutive sampled frames. A missed frame ends it.
#[derive(Debug, Clone, PartialEq)]
pub struct Tracklet {
    pub tracklet_id: u32,
    pub entries: Vec<TrackletEntry>,
}

impl Tracklet {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry_at(&self, frame_index: u64) -> Option<&TrackletEntry> {
        self.entries
            .binary_search_by_key(&frame_index, |e| e.frame_index)
            .ok()
            .map(|i| &self.entries[i])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    /// Input line could not be decoded; only appears in decision records.
    Parse,
    Metadata,
    Existence,
    ActionMotion,
    ActionAffine,
}

impl Stage {
    pub fn as_str(&self) -> &'static str {
        match self {
            Stage::Parse => "parse",
            Stage::Metadata => "metadata",
            Stage::Existence => "existence",
            Stage::ActionMotion => "action_motion",
            Stage::ActionAffine => "action_affine",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Machine-readable cause of a rejection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    ParseError,
    InvalidInput,
    LowResolution,
    Duration,
    NoVerb,
    PersonCount,
    Coverage,
    StaticMotion,
    AffineResidual,
    Undecidable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageVerdict {
    pub stage: Stage,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub score: Option<f64>,
    pub reason: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<FailureKind>,
    /// Every score the stage computed, including `score`. The action stage
    /// records both its motion and affine scores here.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub scores: BTreeMap<Stage, f64>,
}

impl StageVerdict {
    pub fn pass(stage: Stage, score: Option<f64>, reason: impl Into<String>) -> Self {
        let mut scores = BTreeMap::new();
        if let Some(s) = score {
            scores.insert(stage, s);
        }
        Self {
            stage,
            passed: true,
            score,
            reason: reason.into(),
            failure: None,
            scores,
        }
    }

    pub fn fail(
        stage: Stage,
        failure: FailureKind,
        score: Option<f64>,
        reason: impl Into<String>,
    ) -> Self {
        Self {
            passed: false,
            failure: Some(failure),
            ..Self::pass(stage, score, reason)
        }
    }

    pub fn with_score(mut self, stage: Stage, value: f64) -> Self {
        self.scores.insert(stage, value);
        self
    }
}
