use std::collections::HashMap;

use thiserror::Error;

use super::kinematics::MIN_SHARED_KEYPOINTS;
use super::linalg::{mat_vec, symmetric_pinv, Mat3, Vec3};
use crate::model::{PersonDetection, PoseFrame, Tracklet};

/// Paired `(h, w)` points from two frames. `mask`, when present, selects
/// which pairs take part in a fit.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointCorrespondence {
    pub src: Vec<[f64; 2]>,
    pub dst: Vec<[f64; 2]>,
    pub mask: Option<Vec<bool>>,
}

impl PointCorrespondence {
    pub fn new(src: Vec<[f64; 2]>, dst: Vec<[f64; 2]>) -> Self {
        Self { src, dst, mask: None }
    }

    pub fn push(&mut self, src: [f64; 2], dst: [f64; 2]) {
        self.src.push(src);
        self.dst.push(dst);
        if let Some(mask) = &mut self.mask {
            mask.push(true);
        }
    }

    pub fn len(&self) -> usize {
        self.src.len()
    }

    pub fn is_empty(&self) -> bool {
        self.src.is_empty()
    }

    fn included(&self) -> impl Iterator<Item = (&[f64; 2], &[f64; 2])> + '_ {
        self.src
            .iter()
            .zip(&self.dst)
            .enumerate()
            .filter(|(i, _)| self.mask.as_ref().is_none_or(|m| m[*i]))
            .map(|(_, p)| p)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AffineError {
    #[error("correspondence has {src} source points but {dst} destination points")]
    LengthMismatch { src: usize, dst: usize },
    #[error("mask has {mask} entries for {points} points")]
    MaskLength { mask: usize, points: usize },
    #[error("insufficient points: {found} included, at least 3 required")]
    InsufficientPoints { found: usize },
}

/// Least-squares affine map `dst ≈ linear · src + translation` between two
/// point sets, in `(h, w)` coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineFit {
    pub linear: [[f64; 2]; 2],
    pub translation: [f64; 2],
    /// Mean squared point error `(1/n) Σ ‖dst − (linear·src + translation)‖²`.
    pub residual: f64,
    pub n_points: usize,
    /// The normal matrix was rank deficient (e.g. collinear points) and the
    /// minimum-norm solution was taken.
    pub degenerate: bool,
}

impl AffineFit {
    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        let a = &self.linear;
        [
            a[0][0] * p[0] + a[0][1] * p[1] + self.translation[0],
            a[1][0] * p[0] + a[1][1] * p[1] + self.translation[1],
        ]
    }

    /// The homogeneous 3x3 transform with bottom row `[0, 0, 1]`.
    pub fn homogeneous(&self) -> [[f64; 3]; 3] {
        let a = &self.linear;
        let t = &self.translation;
        [[a[0][0], a[0][1], t[0]], [a[1][0], a[1][1], t[1]], [0.0, 0.0, 1.0]]
    }

    /// Mean squared error of this map over the included points of `corr`.
    pub fn mean_squared_error(&self, corr: &PointCorrespondence) -> f64 {
        let mut sum = 0.0;
        let mut n = 0usize;
        for (s, d) in corr.included() {
            let p = self.apply(*s);
            sum += (d[0] - p[0]).powi(2) + (d[1] - p[1]).powi(2);
            n += 1;
        }
        if n == 0 {
            0.0
        } else {
            sum / n as f64
        }
    }
}

/// Fit `(A, t)` minimizing `Σ ‖dstᵢ − (A·srcᵢ + t)‖²`.
///
/// Each output coordinate is solved independently from the normal equations
/// of the design matrix with rows `[h, w, 1]`. A rank-deficient normal matrix
/// falls back to the minimum-norm pseudo-inverse solution and marks the fit
/// as degenerate.
pub fn fit_affine(corr: &PointCorrespondence) -> Result<AffineFit, AffineError> {
    if corr.src.len() != corr.dst.len() {
        return Err(AffineError::LengthMismatch {
            src: corr.src.len(),
            dst: corr.dst.len(),
        });
    }
    if let Some(mask) = &corr.mask {
        if mask.len() != corr.src.len() {
            return Err(AffineError::MaskLength {
                mask: mask.len(),
                points: corr.src.len(),
            });
        }
    }

    let mut normal: Mat3 = [[0.0; 3]; 3];
    let mut rhs_h: Vec3 = [0.0; 3];
    let mut rhs_w: Vec3 = [0.0; 3];
    let mut n = 0usize;
    for (s, d) in corr.included() {
        let x = [s[0], s[1], 1.0];
        for i in 0..3 {
            for j in 0..3 {
                normal[i][j] += x[i] * x[j];
            }
            rhs_h[i] += x[i] * d[0];
            rhs_w[i] += x[i] * d[1];
        }
        n += 1;
    }
    if n < 3 {
        return Err(AffineError::InsufficientPoints { found: n });
    }

    let (pinv, rank) = symmetric_pinv(&normal);
    let row_h = mat_vec(&pinv, &rhs_h);
    let row_w = mat_vec(&pinv, &rhs_w);
    let mut fit = AffineFit {
        linear: [[row_h[0], row_h[1]], [row_w[0], row_w[1]]],
        translation: [row_h[2], row_w[2]],
        residual: 0.0,
        n_points: n,
        degenerate: rank < 3,
    };
    fit.residual = fit.mean_squared_error(corr);
    Ok(fit)
}

/// How keypoints are grouped into affine fits for each adjacent frame pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AffineScope {
    /// One fit over every tracked person's keypoints (camera motion is global).
    #[default]
    Pooled,
    /// One fit per tracklet; the pair residual is the mean over tracklets.
    PerTracklet,
}

/// Outcome of the clip-level affine test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClipResidual {
    Decided {
        /// Mean of the per-pair fit residuals.
        residual: f64,
        pairs_used: usize,
        pairs_skipped: usize,
        degenerate_pairs: usize,
    },
    /// No adjacent frame pair had enough tracked, visible keypoints.
    Undecidable,
}

impl ClipResidual {
    pub fn residual(&self) -> Option<f64> {
        match self {
            ClipResidual::Decided { residual, .. } => Some(*residual),
            ClipResidual::Undecidable => None,
        }
    }
}

/// Residual `r` of the clip: pooled affine fits over every adjacent pair of
/// action frames, averaged.
pub fn clip_affine_residual(
    frames: &[PoseFrame],
    tracklets: &[Tracklet],
    conf_min: f64,
) -> ClipResidual {
    clip_affine_residual_scoped(frames, tracklets, conf_min, AffineScope::Pooled)
}

pub fn clip_affine_residual_scoped(
    frames: &[PoseFrame],
    tracklets: &[Tracklet],
    conf_min: f64,
    scope: AffineScope,
) -> ClipResidual {
    if frames.len() < 2 {
        return ClipResidual::Undecidable;
    }
    // frame_index -> (tracklet id, detection), ordered by tracklet id.
    let mut by_frame: HashMap<u64, Vec<(u32, &PersonDetection)>> = HashMap::new();
    for t in tracklets {
        for e in &t.entries {
            by_frame
                .entry(e.frame_index)
                .or_default()
                .push((t.tracklet_id, &e.person));
        }
    }
    for v in by_frame.values_mut() {
        v.sort_by_key(|(id, _)| *id);
    }

    let mut total = 0.0;
    let mut used = 0usize;
    let mut skipped = 0usize;
    let mut degenerate = 0usize;
    let empty = Vec::new();
    for pair in frames.windows(2) {
        let here = by_frame.get(&pair[0].frame_index).unwrap_or(&empty);
        let next = by_frame.get(&pair[1].frame_index).unwrap_or(&empty);
        let mut groups: Vec<PointCorrespondence> = Vec::new();
        for (id, a) in here {
            let Some((_, b)) = next.iter().find(|(other, _)| other == id) else {
                continue;
            };
            if scope == AffineScope::PerTracklet || groups.is_empty() {
                groups.push(PointCorrespondence::default());
            }
            let corr = groups.last_mut().expect("group pushed above");
            for (p, q) in a.keypoints.iter().zip(&b.keypoints) {
                if p.is_visible(conf_min) && q.is_visible(conf_min) {
                    corr.push(p.position(), q.position());
                }
            }
        }
        let fits: Vec<AffineFit> = groups
            .iter()
            .filter(|c| c.len() >= MIN_SHARED_KEYPOINTS)
            .filter_map(|c| fit_affine(c).ok())
            .collect();
        if fits.is_empty() {
            skipped += 1;
            continue;
        }
        total += fits.iter().map(|f| f.residual).sum::<f64>() / fits.len() as f64;
        degenerate += usize::from(fits.iter().any(|f| f.degenerate));
        used += 1;
    }
    if used == 0 {
        return ClipResidual::Undecidable;
    }
    ClipResidual::Decided {
        residual: total / used as f64,
        pairs_used: used,
        pairs_skipped: skipped,
        degenerate_pairs: degenerate,
    }
}
