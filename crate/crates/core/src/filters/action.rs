use super::{FilterConfig, FilterError, PairRule};
use crate::model::{FailureKind, PoseFrame, Stage, StageVerdict, Tracklet};
use crate::motion::{build_tracklets, clip_affine_residual_scoped, keypoint_motion_l1, ClipResidual};

fn tracklet_motion(t: &Tracklet, cfg: &FilterConfig) -> Option<f64> {
    let pairs = keypoint_motion_l1(t, cfg.conf_min);
    match cfg.l1_pair_rule {
        PairRule::Every => pairs
            .iter()
            .map(|p| p.ok_or(()))
            .collect::<Result<Vec<f64>, ()>>()
            .ok()
            .and_then(|v| v.into_iter().reduce(f64::min)),
        PairRule::Mean => {
            let usable: Vec<f64> = pairs.into_iter().flatten().collect();
            (!usable.is_empty()).then(|| usable.iter().sum::<f64>() / usable.len() as f64)
        }
    }
}

/// Clip motion score: the best tracklet's motion, or with
/// `require_all_tracklets` the worst one's. `None` when no tracklet spans two
/// frames with enough visible keypoints.
pub fn motion_score(tracklets: &[Tracklet], cfg: &FilterConfig) -> Option<f64> {
    let scores: Vec<Option<f64>> = tracklets
        .iter()
        .filter(|t| t.len() >= 2)
        .map(|t| tracklet_motion(t, cfg))
        .collect();
    if cfg.require_all_tracklets {
        if scores.iter().all(Option::is_none) {
            return None;
        }
        scores.iter().map(|s| s.unwrap_or(0.0)).reduce(f64::min)
    } else {
        scores.into_iter().flatten().reduce(f64::max)
    }
}

/// Human action stage: someone must move (L1 motion above threshold) and the
/// motion must not be explained by one affine map per frame pair (residual
/// above threshold). Both sub-checks always run so both scores are recorded.
pub fn human_action_filter(
    frames: &[PoseFrame],
    cfg: &FilterConfig,
) -> Result<StageVerdict, FilterError> {
    if frames.len() < 2 {
        return Err(FilterError::TooFewActionFrames { found: frames.len() });
    }
    let tracklets = build_tracklets(frames, cfg.iou_min);
    let motion = motion_score(&tracklets, cfg);
    let residual = clip_affine_residual_scoped(frames, &tracklets, cfg.conf_min, cfg.affine_scope);

    let motion_value = motion.unwrap_or(0.0);
    let attach = |v: StageVerdict| {
        let v = v.with_score(Stage::ActionMotion, motion_value);
        match residual.residual() {
            Some(r) => v.with_score(Stage::ActionAffine, r),
            None => v,
        }
    };

    if motion.is_none_or(|m| m <= cfg.l1_threshold) {
        let reason = match motion {
            None => "static humans: no tracklet spans two frames".to_string(),
            Some(m) => format!("static humans: motion {m:.4} <= {}", cfg.l1_threshold),
        };
        return Ok(attach(StageVerdict::fail(
            Stage::ActionMotion,
            FailureKind::StaticMotion,
            Some(motion_value),
            reason,
        )));
    }
    let verdict = match residual {
        ClipResidual::Undecidable => StageVerdict::fail(
            Stage::ActionAffine,
            FailureKind::Undecidable,
            None,
            "insufficient tracked keypoints",
        ),
        ClipResidual::Decided { residual: r, .. } if r <= cfg.affine_residual_threshold => {
            StageVerdict::fail(
                Stage::ActionAffine,
                FailureKind::AffineResidual,
                Some(r),
                format!(
                    "affine residual {r:.3e} <= {}: camera motion",
                    cfg.affine_residual_threshold
                ),
            )
        }
        ClipResidual::Decided { residual: r, .. } => StageVerdict::pass(
            Stage::ActionAffine,
            Some(r),
            format!("motion {motion_value:.4}, affine residual {r:.3e}"),
        ),
    };
    Ok(attach(verdict))
}
