//! Geometric kernel: box overlap, tracklet linking, keypoint motion and the
//! adjacent-frame affine fit used to tell camera motion from human motion.

mod affine;
mod iou;
mod kinematics;
pub mod linalg;
mod tracklets;

pub use affine::{
    clip_affine_residual, clip_affine_residual_scoped, fit_affine, AffineError, AffineFit,
    AffineScope, ClipResidual, PointCorrespondence,
};
pub use iou::compute_iou;
pub use kinematics::{keypoint_motion_l1, MIN_SHARED_KEYPOINTS};
pub use tracklets::build_tracklets;
