use super::compute_iou;
use crate::model::{PoseFrame, Tracklet, TrackletEntry};

struct Candidate {
    iou: f64,
    tracklet_id: u32,
    slot: usize,
    detection: usize,
}

/// Link detections across consecutive frames into tracklets.
///
/// Between each pair of consecutive frames, every (open tracklet, detection)
/// pair with IoU `>= iou_min` is a candidate. Candidates are accepted greedily
/// in order of descending IoU, then ascending tracklet id, then ascending
/// detection index, skipping any whose tracklet or detection is already taken.
/// A tracklet that finds no match is closed for good. Detections left over
/// start new tracklets, numbered in encounter order.
pub fn build_tracklets(frames: &[PoseFrame], iou_min: f64) -> Vec<Tracklet> {
    let mut tracklets: Vec<Tracklet> = Vec::new();
    // Indices into `tracklets` whose last entry is in the previous frame.
    let mut open: Vec<usize> = Vec::new();

    for frame in frames {
        let mut candidates = Vec::new();
        for (slot, &t) in open.iter().enumerate() {
            let last = &tracklets[t].entries.last().expect("open tracklets are non-empty").person;
            for (d, det) in frame.persons.iter().enumerate() {
                let iou = compute_iou(&last.bbox, &det.bbox);
                if iou >= iou_min {
                    candidates.push(Candidate {
                        iou,
                        tracklet_id: tracklets[t].tracklet_id,
                        slot,
                        detection: d,
                    });
                }
            }
        }
        candidates.sort_by(|a, b| {
            b.iou
                .total_cmp(&a.iou)
                .then(a.tracklet_id.cmp(&b.tracklet_id))
                .then(a.detection.cmp(&b.detection))
        });

        let mut slot_taken = vec![false; open.len()];
        let mut det_owner: Vec<Option<usize>> = vec![None; frame.persons.len()];
        for c in &candidates {
            if slot_taken[c.slot] || det_owner[c.detection].is_some() {
                continue;
            }
            slot_taken[c.slot] = true;
            det_owner[c.detection] = Some(open[c.slot]);
        }

        let mut next_open = Vec::with_capacity(frame.persons.len());
        for (d, det) in frame.persons.iter().enumerate() {
            let entry = TrackletEntry {
                frame_index: frame.frame_index,
                detection_index: d,
                person: det.clone(),
            };
            let t = match det_owner[d] {
                Some(t) => {
                    tracklets[t].entries.push(entry);
                    t
                }
                None => {
                    tracklets.push(Tracklet {
                        tracklet_id: tracklets.len() as u32,
                        entries: vec![entry],
                    });
                    tracklets.len() - 1
                }
            };
            next_open.push(t);
        }
        // Tracklet ids equal their position in `tracklets`.
        next_open.sort_unstable();
        open = next_open;
    }
    tracklets
}
