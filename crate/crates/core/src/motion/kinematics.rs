use crate::model::Tracklet;

/// Fewer mutually visible keypoints than this and a frame pair carries no
/// usable motion or affine evidence.
pub const MIN_SHARED_KEYPOINTS: usize = 3;

/// Mean per-keypoint L1 displacement `|dh| + |dw|` for each adjacent pair of
/// tracklet entries.
///
/// Only keypoints with confidence `>= conf_min` in both frames count. A pair
/// with fewer than [`MIN_SHARED_KEYPOINTS`] such keypoints yields `None`.
/// Tracklets shorter than two entries yield an empty list.
pub fn keypoint_motion_l1(tracklet: &Tracklet, conf_min: f64) -> Vec<Option<f64>> {
    tracklet
        .entries
        .windows(2)
        .map(|pair| {
            let (a, b) = (&pair[0].person.keypoints, &pair[1].person.keypoints);
            let mut sum = 0.0;
            let mut n = 0usize;
            for (p, q) in a.iter().zip(b) {
                if p.is_visible(conf_min) && q.is_visible(conf_min) {
                    sum += (q.h - p.h).abs() + (q.w - p.w).abs();
                    n += 1;
                }
            }
            (n >= MIN_SHARED_KEYPOINTS).then(|| sum / n as f64)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BoundingBox, Keypoint, PersonDetection, TrackletEntry, KEYPOINT_COUNT};

    fn entry(frame_index: u64, shift: (f64, f64), conf: f64) -> TrackletEntry {
        let mut keypoints = [Keypoint::new(0.0, 0.0, conf); KEYPOINT_COUNT];
        for (k, kp) in keypoints.iter_mut().enumerate() {
            kp.h = 0.3 + 0.01 * k as f64 + shift.0;
            kp.w = 0.4 + 0.005 * k as f64 + shift.1;
        }
        TrackletEntry {
            frame_index,
            detection_index: 0,
            person: PersonDetection {
                bbox: BoundingBox::new(0.2, 0.2, 0.8, 0.8),
                keypoints,
            },
        }
    }

    fn tracklet(entries: Vec<TrackletEntry>) -> Tracklet {
        Tracklet { tracklet_id: 0, entries }
    }

    #[test]
    fn zero_motion() {
        let t = tracklet((0..4).map(|i| entry(i, (0.0, 0.0), 0.9)).collect());
        assert_eq!(keypoint_motion_l1(&t, 0.3), vec![Some(0.0); 3]);
    }

    #[test]
    fn uniform_shift() {
        let t = tracklet(
            (0..3)
                .map(|i| entry(i, (0.01 * i as f64, 0.02 * i as f64), 0.9))
                .collect(),
        );
        for d in keypoint_motion_l1(&t, 0.3) {
            assert!((d.unwrap() - 0.03).abs() < 1e-12);
        }
    }

    #[test]
    fn short_tracklet_is_empty() {
        assert!(keypoint_motion_l1(&tracklet(vec![entry(0, (0.0, 0.0), 0.9)]), 0.3).is_empty());
        assert!(keypoint_motion_l1(&tracklet(vec![]), 0.3).is_empty());
    }

    #[test]
    fn occluded_pair_is_insufficient() {
        let mut b = entry(1, (0.1, 0.0), 0.9);
        for kp in b.person.keypoints.iter_mut().skip(2) {
            kp.confidence = 0.1;
        }
        let t = tracklet(vec![entry(0, (0.0, 0.0), 0.9), b]);
        assert_eq!(keypoint_motion_l1(&t, 0.3), vec![None]);
    }

    #[test]
    fn invisible_keypoints_do_not_count() {
        let mut b = entry(1, (0.1, 0.0), 0.9);
        // Hide one keypoint and move it far; the mean must ignore it.
        b.person.keypoints[0].confidence = 0.0;
        b.person.keypoints[0].h = 1.0;
        let t = tracklet(vec![entry(0, (0.0, 0.0), 0.9), b]);
        assert!((keypoint_motion_l1(&t, 0.3)[0].unwrap() - 0.1).abs() < 1e-12);
    }
}
