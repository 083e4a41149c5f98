//! Pose-based curation of human-action video clips.
//!
//! The crate turns per-clip pose detections into keep/drop decisions through
//! a three-stage cascade (metadata, human existence, human action), where the
//! action stage separates real human motion from camera motion by fitting an
//! affine map between the keypoints of adjacent frames. It also carries the
//! benchmark-side data model and metrics: structured captions, multiple-choice
//! QA items, accuracy with refusals, and the GSB score.

pub mod filters;
pub mod metrics;
pub mod model;
pub mod motion;
pub mod pipeline;
pub mod synth;
pub mod wire;

pub use filters::{Cascade, CascadeOutcome, FilterConfig, VerbLexicon};
pub use model::{
    BoundingBox, ClipMeta, ClipRecord, FailureKind, Keypoint, PersonDetection, PoseFrame, PosTag,
    Stage, StageVerdict, Tracklet, TrackletEntry,
};
pub use wire::{canonical_serialize, parse_clip_record, parse_clip_record_at, RecordError};
