//! Batch orchestration: streaming clip records through the cascade, decision
//! records, stage-yield statistics and the scene-boundary checker.

mod record;
mod runner;
mod scenes;
mod stats;

pub use record::DecisionRecord;
pub use runner::{run_pipeline, run_pipeline_to_vec, RunError};
pub use scenes::{
    detect_scene_boundaries, histogram_distance, parse_histogram_line, read_histograms,
    ColorHistogram, SceneBoundaryReport, SceneError, SceneMethod, DEFAULT_DIFF_THRESHOLD,
};
pub use stats::{emit_stats_report, FailureCounts, PipelineStats, ReportFormat, StageCount};
