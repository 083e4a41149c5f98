//! Seeded generators of synthetic pose data.
//!
//! Scenes are sampled once per second. Each generator models one kind of
//! footage: a motionless person, a motionless person under camera motion
//! (every frame an exact affine image of the previous one), articulated
//! motion, and a walking gait. [`planted_clip`] wraps scenes into full
//! [`ClipRecord`]s whose expected cascade outcome is known.

use rand::seq::IndexedRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::model::{
    BoundingBox, ClipMeta, ClipRecord, FailureKind, Keypoint, PersonDetection, PoseFrame, Stage,
    EXISTENCE_FRAME_COUNT, KEYPOINT_COUNT,
};
use crate::motion::PointCorrespondence;

pub type Pose = [[f64; 2]; KEYPOINT_COUNT];

/// Confidence assigned to every generated keypoint.
pub const SYNTH_CONFIDENCE: f64 = 0.9;
/// Margin added around the keypoint hull to form a person box.
pub const BOX_MARGIN: f64 = 0.02;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Per-second poses: `poses[second][person]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticScene {
    pub poses: Vec<Vec<Pose>>,
}

fn detection(pose: &Pose) -> PersonDetection {
    let mut keypoints = [Keypoint::new(0.0, 0.0, SYNTH_CONFIDENCE); KEYPOINT_COUNT];
    for (kp, p) in keypoints.iter_mut().zip(pose) {
        kp.h = p[0].clamp(0.0, 1.0);
        kp.w = p[1].clamp(0.0, 1.0);
    }
    PersonDetection {
        bbox: BoundingBox::around_keypoints(&keypoints, BOX_MARGIN),
        keypoints,
    }
}

impl SyntheticScene {
    pub fn seconds(&self) -> usize {
        self.poses.len()
    }

    /// One frame per second, `frame_index == second`.
    pub fn action_frames(&self) -> Vec<PoseFrame> {
        self.poses
            .iter()
            .enumerate()
            .map(|(s, persons)| PoseFrame {
                frame_index: s as u64,
                timestamp_s: s as f64,
                persons: persons.iter().map(detection).collect(),
            })
            .collect()
    }

    /// Sixteen frames at `duration · k / 16`, each showing the pose of the
    /// enclosing second.
    pub fn existence_frames(&self, duration_s: f64) -> Vec<PoseFrame> {
        (0..EXISTENCE_FRAME_COUNT)
            .map(|k| {
                let t = duration_s * k as f64 / EXISTENCE_FRAME_COUNT as f64;
                let s = (t.floor() as usize).min(self.poses.len() - 1);
                PoseFrame {
                    frame_index: k as u64,
                    timestamp_s: t,
                    persons: self.poses[s].iter().map(detection).collect(),
                }
            })
            .collect()
    }
}

/// Where each person stands: lane centre and pose half-extent.
struct Layout {
    centers: Vec<[f64; 2]>,
    half: [f64; 2],
    /// Per-person allowed range of the centre, per axis.
    bounds: Vec<[[f64; 2]; 2]>,
}

fn layout<R: Rng>(rng: &mut R, persons: usize, scale: f64, slack: f64) -> Layout {
    let persons = persons.max(1);
    let lane = 1.0 / persons as f64;
    let half = [0.15 * scale, (0.15 * scale).min(lane / 2.0 - slack - 0.01)];
    let mut centers = Vec::with_capacity(persons);
    let mut bounds = Vec::with_capacity(persons);
    for p in 0..persons {
        let lo_w = p as f64 * lane + half[1] + slack;
        let hi_w = (p + 1) as f64 * lane - half[1] - slack;
        let lo_h = half[0] + slack;
        let hi_h = 1.0 - half[0] - slack;
        let mid_w = (lo_w + hi_w) / 2.0;
        let b = [[lo_h, hi_h], [lo_w.min(mid_w), hi_w.max(mid_w)]];
        centers.push([
            rng.random_range(b[0][0]..=b[0][1]),
            rng.random_range(b[1][0]..=b[1][1]),
        ]);
        bounds.push(b);
    }
    Layout { centers, half, bounds }
}

/// Layout for people who move only with the camera: the frame margin is
/// reserved once at the edges instead of around every person.
fn rigid_layout<R: Rng>(rng: &mut R, persons: usize, margin: f64) -> Layout {
    let persons = persons.max(1);
    let lane = (1.0 - 2.0 * margin) / persons as f64;
    let half = [0.15, (lane / 2.0 - 0.01).min(0.15)];
    let (lo_h, hi_h) = (margin + half[0], 1.0 - margin - half[0]);
    let mut centers = Vec::with_capacity(persons);
    let mut bounds = Vec::with_capacity(persons);
    for p in 0..persons {
        let w = margin + (p as f64 + 0.5) * lane;
        centers.push([rng.random_range(lo_h..=hi_h), w]);
        bounds.push([[lo_h, hi_h], [w, w]]);
    }
    Layout { centers, half, bounds }
}

fn body_offsets<R: Rng>(rng: &mut R, half: [f64; 2]) -> Pose {
    let mut pose = [[0.0; 2]; KEYPOINT_COUNT];
    for kp in pose.iter_mut() {
        kp[0] = rng.random_range(-half[0]..=half[0]);
        kp[1] = rng.random_range(-half[1]..=half[1]);
    }
    // Pin the extremes so the hull spans the full extent.
    pose[0] = [-half[0], 0.0];
    pose[16] = [half[0], 0.0];
    pose[5] = [0.0, -half[1]];
    pose[6] = [0.0, half[1]];
    pose
}

fn place(center: [f64; 2], offsets: &Pose) -> Pose {
    let mut out = *offsets;
    for p in out.iter_mut() {
        p[0] += center[0];
        p[1] += center[1];
    }
    out
}

/// Motionless people, identical in every second.
pub fn static_scene<R: Rng>(rng: &mut R, persons: usize, seconds: usize) -> SyntheticScene {
    let l = layout(rng, persons, 1.0, 0.02);
    let bodies: Vec<Pose> = l
        .centers
        .iter()
        .map(|c| place(*c, &body_offsets(rng, l.half)))
        .collect();
    SyntheticScene {
        poses: vec![bodies; seconds.max(1)],
    }
}

/// A random affine map close to identity, acting about `pivot`:
/// `p ↦ pivot + M (p − pivot) + d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraMap {
    pub linear: [[f64; 2]; 2],
    pub shift: [f64; 2],
    pub pivot: [f64; 2],
}

impl CameraMap {
    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        let q = [p[0] - self.pivot[0], p[1] - self.pivot[1]];
        let m = &self.linear;
        [
            self.pivot[0] + m[0][0] * q[0] + m[0][1] * q[1] + self.shift[0],
            self.pivot[1] + m[1][0] * q[0] + m[1][1] * q[1] + self.shift[1],
        ]
    }
}

fn random_camera<R: Rng>(rng: &mut R, second: usize) -> CameraMap {
    let angle: f64 = rng.random_range(-0.05..=0.05);
    let sh: f64 = rng.random_range(-0.03..=0.03);
    let sx: f64 = rng.random_range(0.95..=1.05);
    let sy: f64 = rng.random_range(0.95..=1.05);
    let (s, c) = angle.sin_cos();
    // rotation · shear · scale
    let linear = [
        [c * sx, (c * sh - s) * sy],
        [s * sx, (s * sh + c) * sy],
    ];
    // Alternate the pan direction so the view stays inside the frame while
    // every second still moves noticeably.
    let sign = if second % 2 == 0 { 1.0 } else { -1.0 };
    let shift = [
        sign * rng.random_range(0.03..=0.05),
        sign * rng.random_range(0.03..=0.05),
    ];
    CameraMap {
        linear,
        shift,
        pivot: [0.5, 0.5],
    }
}

/// Motionless people filmed by a moving camera: the pose at second `s` is
/// `G_s(P_0)` for a fresh random affine `G_s`, so consecutive seconds differ by
/// the exact affine map `G_{s+1} ∘ G_s⁻¹`.
pub fn camera_motion_scene<R: Rng>(rng: &mut R, persons: usize, seconds: usize) -> SyntheticScene {
    let l = rigid_layout(rng, persons, 0.12);
    let bodies: Vec<Pose> = l
        .centers
        .iter()
        .map(|c| place(*c, &body_offsets(rng, l.half)))
        .collect();
    let poses = (0..seconds.max(1))
        .map(|s| {
            let cam = random_camera(rng, s);
            bodies
                .iter()
                .map(|body| body.map(|p| cam.apply(p)))
                .collect()
        })
        .collect();
    SyntheticScene { poses }
}

/// Walk each axis of `center` by `step`, bouncing off `bounds`.
fn bounce(center: &mut [f64; 2], velocity: &mut [f64; 2], bounds: &[[f64; 2]; 2]) {
    for axis in 0..2 {
        let next = center[axis] + velocity[axis];
        if next < bounds[axis][0] || next > bounds[axis][1] {
            velocity[axis] = -velocity[axis];
        }
        center[axis] = (center[axis] + velocity[axis]).clamp(bounds[axis][0], bounds[axis][1]);
    }
}

/// Articulated motion: each keypoint sits at its rest offset plus an
/// independent displacement drawn uniformly from `[-jitter, jitter]` per axis,
/// redrawn every second, on a body whose centre moves `translation` per
/// second along each axis (reversing at the frame edges).
pub fn articulated_scene<R: Rng>(
    rng: &mut R,
    persons: usize,
    seconds: usize,
    jitter: f64,
    translation: f64,
) -> SyntheticScene {
    let mut l = layout(rng, persons, 1.0, jitter + 0.01);
    let bodies: Vec<Pose> = (0..l.centers.len()).map(|_| body_offsets(rng, l.half)).collect();
    let mut velocity: Vec<[f64; 2]> = (0..l.centers.len())
        .map(|_| {
            let sh = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let sw = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            [sh * translation, sw * translation]
        })
        .collect();
    let mut poses = Vec::with_capacity(seconds);
    for s in 0..seconds.max(1) {
        if s > 0 {
            for (p, c) in l.centers.iter_mut().enumerate() {
                bounce(c, &mut velocity[p], &l.bounds[p]);
            }
        }
        let frame = l
            .centers
            .iter()
            .zip(&bodies)
            .map(|(c, body)| {
                let mut pose = place(*c, body);
                for kp in pose.iter_mut() {
                    kp[0] += rng.random_range(-jitter..=jitter);
                    kp[1] += rng.random_range(-jitter..=jitter);
                }
                pose
            })
            .collect();
        poses.push(frame);
    }
    SyntheticScene { poses }
}

/// Angular frequency of the synthetic gait, radians per second.
pub const GAIT_OMEGA: f64 = 2.0 * std::f64::consts::PI * 0.4;

/// Walking: every keypoint swings sinusoidally with `amplitude` on each axis
/// (random phase per keypoint and axis) while the body translates
/// `translation` per second along each axis.
pub fn walking_scene<R: Rng>(
    rng: &mut R,
    persons: usize,
    seconds: usize,
    amplitude: f64,
    translation: f64,
) -> SyntheticScene {
    let mut l = layout(rng, persons, 1.0, amplitude + 0.01);
    let bodies: Vec<Pose> = (0..l.centers.len()).map(|_| body_offsets(rng, l.half)).collect();
    let phases: Vec<Vec<[f64; 2]>> = (0..l.centers.len())
        .map(|_| {
            (0..KEYPOINT_COUNT)
                .map(|_| {
                    [
                        rng.random_range(0.0..std::f64::consts::TAU),
                        rng.random_range(0.0..std::f64::consts::TAU),
                    ]
                })
                .collect()
        })
        .collect();
    let mut velocity: Vec<[f64; 2]> = vec![[translation, translation]; l.centers.len()];
    let mut poses = Vec::with_capacity(seconds);
    for s in 0..seconds.max(1) {
        if s > 0 {
            for (p, c) in l.centers.iter_mut().enumerate() {
                bounce(c, &mut velocity[p], &l.bounds[p]);
            }
        }
        let t = s as f64;
        let frame = (0..l.centers.len())
            .map(|p| {
                let mut pose = place(l.centers[p], &bodies[p]);
                for (k, kp) in pose.iter_mut().enumerate() {
                    kp[0] += amplitude * (GAIT_OMEGA * t + phases[p][k][0]).sin();
                    kp[1] += amplitude * (GAIT_OMEGA * t + phases[p][k][1]).sin();
                }
                pose
            })
            .collect();
        poses.push(frame);
    }
    SyntheticScene { poses }
}

/// Camera-motion scene with independent Gaussian noise of standard deviation
/// `sigma` added to every keypoint coordinate.
pub fn noisy_camera_scene<R: Rng>(rng: &mut R, seconds: usize, sigma: f64) -> SyntheticScene {
    let mut scene = camera_motion_scene(rng, 1, seconds);
    if sigma > 0.0 {
        let noise = Normal::new(0.0, sigma).expect("finite sigma");
        for frame in scene.poses.iter_mut() {
            for pose in frame.iter_mut() {
                for kp in pose.iter_mut() {
                    kp[0] += noise.sample(rng);
                    kp[1] += noise.sample(rng);
                }
            }
        }
    }
    scene
}

/// Ground truth for a synthetic correspondence.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineTruth {
    pub linear: [[f64; 2]; 2],
    pub translation: [f64; 2],
}

/// A random invertible affine map with `|det| ∈ [0.5, 2]`, applied to `n`
/// random points in `[0.2, 0.8]²`, plus Gaussian noise of `sigma` on the
/// destination coordinates.
pub fn random_affine_correspondence<R: Rng>(
    rng: &mut R,
    n: usize,
    sigma: f64,
) -> (PointCorrespondence, AffineTruth) {
    let linear = loop {
        let m = [
            [rng.random_range(-1.5..=1.5), rng.random_range(-1.5..=1.5)],
            [rng.random_range(-1.5..=1.5), rng.random_range(-1.5..=1.5)],
        ];
        let det: f64 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if (0.5..=2.0).contains(&det.abs()) {
            break m;
        }
    };
    let translation = [rng.random_range(-0.3..=0.3), rng.random_range(-0.3..=0.3)];
    let noise = (sigma > 0.0).then(|| Normal::new(0.0, sigma).expect("finite sigma"));
    let mut corr = PointCorrespondence::default();
    for _ in 0..n {
        let s = [rng.random_range(0.2..=0.8), rng.random_range(0.2..=0.8)];
        let mut d = [
            linear[0][0] * s[0] + linear[0][1] * s[1] + translation[0],
            linear[1][0] * s[0] + linear[1][1] * s[1] + translation[1],
        ];
        if let Some(noise) = &noise {
            d[0] += noise.sample(rng);
            d[1] += noise.sample(rng);
        }
        corr.push(s, d);
    }
    (corr, AffineTruth { linear, translation })
}

/// What a planted clip is built to exercise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlantedLabel {
    Pass,
    LowResolution,
    NoVerb,
    BadDuration,
    PersonCount,
    Coverage,
    StaticMotion,
    CameraMotion,
}

impl PlantedLabel {
    pub const ALL: [PlantedLabel; 8] = [
        PlantedLabel::Pass,
        PlantedLabel::LowResolution,
        PlantedLabel::NoVerb,
        PlantedLabel::BadDuration,
        PlantedLabel::PersonCount,
        PlantedLabel::Coverage,
        PlantedLabel::StaticMotion,
        PlantedLabel::CameraMotion,
    ];

    pub fn should_pass(&self) -> bool {
        *self == PlantedLabel::Pass
    }

    /// Stage expected to reject the clip.
    pub fn expected_stage(&self) -> Option<Stage> {
        match self {
            PlantedLabel::Pass => None,
            PlantedLabel::LowResolution | PlantedLabel::NoVerb | PlantedLabel::BadDuration => {
                Some(Stage::Metadata)
            }
            PlantedLabel::PersonCount | PlantedLabel::Coverage => Some(Stage::Existence),
            PlantedLabel::StaticMotion => Some(Stage::ActionMotion),
            PlantedLabel::CameraMotion => Some(Stage::ActionAffine),
        }
    }

    pub fn expected_failure(&self) -> Option<FailureKind> {
        match self {
            PlantedLabel::Pass => None,
            PlantedLabel::LowResolution => Some(FailureKind::LowResolution),
            PlantedLabel::NoVerb => Some(FailureKind::NoVerb),
            PlantedLabel::BadDuration => Some(FailureKind::Duration),
            PlantedLabel::PersonCount => Some(FailureKind::PersonCount),
            PlantedLabel::Coverage => Some(FailureKind::Coverage),
            PlantedLabel::StaticMotion => Some(FailureKind::StaticMotion),
            PlantedLabel::CameraMotion => Some(FailureKind::AffineResidual),
        }
    }
}

pub const ACTION_CAPTIONS: [&str; 10] = [
    "a man running on the beach",
    "two women dancing in a studio",
    "a child jumps on a trampoline",
    "a woman lifting weights in a gym",
    "a boy kicks a ball across the field",
    "an old man walking his dog in the park",
    "a girl climbing a rock wall",
    "two men sparring in a ring",
    "a chef chopping vegetables in a kitchen",
    "a couple hugging at the airport",
];

pub const STILL_CAPTIONS: [&str; 6] = [
    "blue sky and mountains",
    "aerial view of a city at night",
    "sunset over the ocean",
    "a red flower in a garden",
    "quiet street with old houses",
    "snowy forest landscape",
];

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedClip {
    pub record: ClipRecord,
    pub label: PlantedLabel,
}

/// Build one clip designed to end exactly as `label` says.
pub fn planted_clip<R: Rng>(rng: &mut R, label: PlantedLabel, id: usize) -> PlantedClip {
    let (width, height) = if label == PlantedLabel::LowResolution {
        *[(426u32, 240u32), (320, 180), (480, 270)].choose(rng).expect("non-empty")
    } else {
        *[(1280u32, 720u32), (1920, 1080), (640, 360), (854, 480)]
            .choose(rng)
            .expect("non-empty")
    };
    let duration_s: f64 = if label == PlantedLabel::BadDuration {
        if rng.random_bool(0.5) {
            rng.random_range(1.0..4.9)
        } else {
            rng.random_range(20.5..40.0)
        }
    } else {
        rng.random_range(5.0..=20.0)
    };
    let caption = if label == PlantedLabel::NoVerb {
        STILL_CAPTIONS.choose(rng)
    } else {
        ACTION_CAPTIONS.choose(rng)
    }
    .expect("non-empty")
    .to_string();

    let persons = if rng.random_bool(0.7) { 1 } else { 2 };
    let seconds = (duration_s.ceil() as usize).max(2);
    let scene = match label {
        PlantedLabel::StaticMotion => static_scene(rng, persons, seconds),
        PlantedLabel::CameraMotion => camera_motion_scene(rng, persons, seconds),
        PlantedLabel::Coverage => {
            let mut s = static_scene(rng, 1, seconds);
            shrink_scene(&mut s, 0.2);
            s
        }
        _ => articulated_scene(rng, persons, seconds, 0.05, 0.05),
    };
    let mut existence_frames = scene.existence_frames(duration_s);
    if label == PlantedLabel::PersonCount {
        let k = rng.random_range(0..existence_frames.len());
        if rng.random_bool(0.5) {
            existence_frames[k].persons.clear();
        } else {
            let extra = existence_frames[k].persons[0].clone();
            existence_frames[k].persons = vec![extra; 6];
        }
    }
    let record = ClipRecord {
        meta: ClipMeta {
            video_id: format!("synth-{id:05}"),
            clip_id: format!("synth-{id:05}-0"),
            width,
            height,
            duration_s,
            caption,
            caption_pos_tags: None,
        },
        existence_frames,
        action_frames: scene.action_frames(),
    };
    PlantedClip { record, label }
}

/// Scale every pose about its own centroid.
fn shrink_scene(scene: &mut SyntheticScene, factor: f64) {
    for frame in scene.poses.iter_mut() {
        for pose in frame.iter_mut() {
            let n = pose.len() as f64;
            let c = [
                pose.iter().map(|p| p[0]).sum::<f64>() / n,
                pose.iter().map(|p| p[1]).sum::<f64>() / n,
            ];
            for p in pose.iter_mut() {
                p[0] = c[0] + factor * (p[0] - c[0]);
                p[1] = c[1] + factor * (p[1] - c[1]);
            }
        }
    }
}

/// `n` planted clips, labels cycling through [`PlantedLabel::ALL`] with a
/// doubled share of passing clips.
pub fn planted_corpus(seed: u64, n: usize) -> Vec<PlantedClip> {
    let mut rng = rng_from_seed(seed);
    let schedule: Vec<PlantedLabel> = PlantedLabel::ALL
        .iter()
        .copied()
        .chain(std::iter::once(PlantedLabel::Pass))
        .collect();
    (0..n)
        .map(|i| planted_clip(&mut rng, schedule[i % schedule.len()], i))
        .collect()
}
