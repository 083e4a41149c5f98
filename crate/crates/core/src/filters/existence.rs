use super::{FilterConfig, FilterError};
use crate::model::{FailureKind, PoseFrame, Stage, StageVerdict, EXISTENCE_FRAME_COUNT};

/// Summed person box area in one frame, capped at 1. Overlaps are not unioned.
pub fn frame_coverage(frame: &PoseFrame) -> f64 {
    frame
        .persons
        .iter()
        .map(|p| p.bbox.area())
        .sum::<f64>()
        .min(1.0)
}

/// Every sampled frame must hold between `min_humans` and `max_humans`
/// people, and the mean per-frame coverage must reach `min_coverage`.
pub fn human_existence_filter(
    frames: &[PoseFrame],
    cfg: &FilterConfig,
) -> Result<StageVerdict, FilterError> {
    if frames.len() != EXISTENCE_FRAME_COUNT {
        return Err(FilterError::ExistenceFrameCount {
            expected: EXISTENCE_FRAME_COUNT,
            found: frames.len(),
        });
    }
    let coverage = frames.iter().map(frame_coverage).sum::<f64>() / frames.len() as f64;
    if let Some((i, f)) = frames
        .iter()
        .enumerate()
        .find(|(_, f)| !(cfg.min_humans..=cfg.max_humans).contains(&f.persons.len()))
    {
        return Ok(StageVerdict::fail(
            Stage::Existence,
            FailureKind::PersonCount,
            Some(coverage),
            format!(
                "person count out of range: frame {i} has {} (allowed {}-{})",
                f.persons.len(),
                cfg.min_humans,
                cfg.max_humans
            ),
        ));
    }
    if coverage < cfg.min_coverage {
        return Ok(StageVerdict::fail(
            Stage::Existence,
            FailureKind::Coverage,
            Some(coverage),
            format!("coverage {coverage:.2} < {:.2}", cfg.min_coverage),
        ));
    }
    Ok(StageVerdict::pass(
        Stage::Existence,
        Some(coverage),
        format!("coverage {coverage:.2}"),
    ))
}
