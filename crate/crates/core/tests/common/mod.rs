//! Independent reference implementations used to check the library.
#![allow(dead_code)]

use std::cmp::Ordering;

use actionsieve::motion::PointCorrespondence;
use actionsieve::{BoundingBox, PoseFrame, Tracklet};

/// IoU of two integer boxes `[x1, y1, x2, y2]` by counting covered unit cells.
pub fn pixel_iou(a: [u32; 4], b: [u32; 4]) -> f64 {
    let w = a[2].max(b[2]) as usize;
    let h = a[3].max(b[3]) as usize;
    let inside = |bx: [u32; 4], x: usize, y: usize| {
        x >= bx[0] as usize && x < bx[2] as usize && y >= bx[1] as usize && y < bx[3] as usize
    };
    let (mut inter, mut union) = (0u64, 0u64);
    for y in 0..h {
        for x in 0..w {
            let (ia, ib) = (inside(a, x, y), inside(b, x, y));
            inter += u64::from(ia && ib);
            union += u64::from(ia || ib);
        }
    }
    if union == 0 {
        return if a == b { 1.0 } else { 0.0 };
    }
    inter as f64 / union as f64
}

pub fn to_box(b: [u32; 4], scale: f64) -> BoundingBox {
    BoundingBox::new(
        b[0] as f64 / scale,
        b[1] as f64 / scale,
        b[2] as f64 / scale,
        b[3] as f64 / scale,
    )
}

/// Best assignment of open tracks to detections by exhaustive search.
///
/// Every admissible edge gets a rank from the order (IoU descending, track id
/// ascending, detection ascending). Among all matchings, the winner has the
/// lexicographically smallest sorted rank list, where a list that extends
/// another one is preferred.
pub fn brute_force_match(iou: &[Vec<f64>], ids: &[u32], iou_min: f64) -> Vec<Option<usize>> {
    let mut edges: Vec<(f64, u32, usize, usize)> = Vec::new();
    for (slot, row) in iou.iter().enumerate() {
        for (d, &v) in row.iter().enumerate() {
            if v >= iou_min {
                edges.push((v, ids[slot], d, slot));
            }
        }
    }
    edges.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let rank = |slot: usize, d: usize| edges.iter().position(|e| e.3 == slot && e.2 == d);

    let n_det = iou.first().map_or(0, Vec::len);
    let mut best: Option<(Vec<usize>, Vec<Option<usize>>)> = None;
    let mut current = vec![None; iou.len()];
    let mut used = vec![false; n_det];

    fn better(a: &[usize], b: &[usize]) -> bool {
        for (x, y) in a.iter().zip(b) {
            match x.cmp(y) {
                Ordering::Less => return true,
                Ordering::Greater => return false,
                Ordering::Equal => {}
            }
        }
        a.len() > b.len()
    }

    #[allow(clippy::too_many_arguments)]
    fn search(
        slot: usize,
        iou: &[Vec<f64>],
        iou_min: f64,
        rank: &dyn Fn(usize, usize) -> Option<usize>,
        current: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        best: &mut Option<(Vec<usize>, Vec<Option<usize>>)>,
    ) {
        if slot == iou.len() {
            let mut ranks: Vec<usize> = current
                .iter()
                .enumerate()
                .filter_map(|(s, d)| d.and_then(|d| rank(s, d)))
                .collect();
            ranks.sort_unstable();
            if best.as_ref().is_none_or(|(b, _)| better(&ranks, b)) {
                *best = Some((ranks, current.clone()));
            }
            return;
        }
        search(slot + 1, iou, iou_min, rank, current, used, best);
        for d in 0..used.len() {
            if !used[d] && iou[slot][d] >= iou_min {
                used[d] = true;
                current[slot] = Some(d);
                search(slot + 1, iou, iou_min, rank, current, used, best);
                current[slot] = None;
                used[d] = false;
            }
        }
    }

    search(0, iou, iou_min, &rank, &mut current, &mut used, &mut best);
    best.map(|(_, m)| m).unwrap_or_default()
}

/// Tracklets as lists of `(frame_index, detection_index)`, built frame by
/// frame with [`brute_force_match`].
pub fn oracle_tracklets(frames: &[PoseFrame], iou_min: f64) -> Vec<Vec<(u64, usize)>> {
    let mut tracks: Vec<Vec<(u64, usize, BoundingBox)>> = Vec::new();
    let mut open: Vec<usize> = Vec::new();
    for f in frames {
        let iou: Vec<Vec<f64>> = open
            .iter()
            .map(|&t| {
                let last = tracks[t].last().unwrap().2;
                f.persons
                    .iter()
                    .map(|p| reference_iou(&last, &p.bbox))
                    .collect()
            })
            .collect();
        let ids: Vec<u32> = open.iter().map(|&t| t as u32).collect();
        let matching = brute_force_match(&iou, &ids, iou_min);
        let mut owner = vec![None; f.persons.len()];
        for (slot, d) in matching.iter().enumerate() {
            if let Some(d) = d {
                owner[*d] = Some(open[slot]);
            }
        }
        let mut next = Vec::new();
        for (d, p) in f.persons.iter().enumerate() {
            let t = owner[d].unwrap_or_else(|| {
                tracks.push(Vec::new());
                tracks.len() - 1
            });
            tracks[t].push((f.frame_index, d, p.bbox));
            next.push(t);
        }
        next.sort_unstable();
        open = next;
    }
    tracks
        .into_iter()
        .map(|t| t.into_iter().map(|(f, d, _)| (f, d)).collect())
        .collect()
}

/// Textbook box IoU, written independently of the library.
pub fn reference_iou(a: &BoundingBox, b: &BoundingBox) -> f64 {
    let x_overlap = f64::max(0.0, f64::min(a.x2, b.x2) - f64::max(a.x1, b.x1));
    let y_overlap = f64::max(0.0, f64::min(a.y2, b.y2) - f64::max(a.y1, b.y1));
    let inter = x_overlap * y_overlap;
    let area_a = (a.x2 - a.x1) * (a.y2 - a.y1);
    let area_b = (b.x2 - b.x1) * (b.y2 - b.y1);
    let union = area_a + area_b - inter;
    if union > 0.0 {
        inter / union
    } else if a == b {
        1.0
    } else {
        0.0
    }
}

/// Mean L1 keypoint displacement per adjacent tracklet pair, by plain loops.
pub fn l1_oracle(t: &Tracklet, conf_min: f64) -> Vec<Option<f64>> {
    let mut out = Vec::new();
    for i in 1..t.entries.len() {
        let a = &t.entries[i - 1].person.keypoints;
        let b = &t.entries[i].person.keypoints;
        let mut total = 0.0;
        let mut count = 0;
        for k in 0..a.len() {
            if a[k].confidence >= conf_min && b[k].confidence >= conf_min {
                total += (b[k].h - a[k].h).abs();
                total += (b[k].w - a[k].w).abs();
                count += 1;
            }
        }
        out.push(if count >= 3 { Some(total / count as f64) } else { None });
    }
    out
}

/// Affine parameters `[a00, a01, a10, a11, t0, t1]`.
pub type AffineParams = [f64; 6];

fn predict(p: &AffineParams, s: [f64; 2]) -> [f64; 2] {
    [
        p[0] * s[0] + p[1] * s[1] + p[4],
        p[2] * s[0] + p[3] * s[1] + p[5],
    ]
}

pub fn mse(p: &AffineParams, corr: &PointCorrespondence) -> f64 {
    let n = corr.src.len() as f64;
    corr.src
        .iter()
        .zip(&corr.dst)
        .map(|(s, d)| {
            let q = predict(p, *s);
            (d[0] - q[0]).powi(2) + (d[1] - q[1]).powi(2)
        })
        .sum::<f64>()
        / n
}

fn gradient(p: &AffineParams, corr: &PointCorrespondence) -> AffineParams {
    let n = corr.src.len() as f64;
    let mut g = [0.0; 6];
    for (s, d) in corr.src.iter().zip(&corr.dst) {
        let q = predict(p, *s);
        let r = [q[0] - d[0], q[1] - d[1]];
        g[0] += 2.0 * r[0] * s[0] / n;
        g[1] += 2.0 * r[0] * s[1] / n;
        g[2] += 2.0 * r[1] * s[0] / n;
        g[3] += 2.0 * r[1] * s[1] / n;
        g[4] += 2.0 * r[0] / n;
        g[5] += 2.0 * r[1] / n;
    }
    g
}

/// Minimize the mean squared error by gradient descent with
/// Barzilai-Borwein step sizes, starting from the identity map.
pub fn gd_affine(corr: &PointCorrespondence) -> (AffineParams, f64) {
    let mut p: AffineParams = [1.0, 0.0, 0.0, 1.0, 0.0, 0.0];
    let mut g = gradient(&p, corr);
    let mut step = 0.1;
    for _ in 0..200_000 {
        let norm: f64 = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-15 {
            break;
        }
        let mut next = p;
        for i in 0..6 {
            next[i] -= step * g[i];
        }
        let g_next = gradient(&next, corr);
        let mut sy = 0.0;
        let mut ss = 0.0;
        for i in 0..6 {
            let si = next[i] - p[i];
            sy += si * (g_next[i] - g[i]);
            ss += si * si;
        }
        p = next;
        g = g_next;
        if sy > 0.0 && ss > 0.0 {
            step = ss / sy;
        }
    }
    (p, mse(&p, corr))
}

use actionsieve::{Keypoint, PersonDetection};
use rand::Rng;

/// A person whose keypoints are scattered inside `bbox`.
pub fn person_in<R: Rng>(rng: &mut R, bbox: BoundingBox) -> PersonDetection {
    let keypoints = std::array::from_fn(|_| {
        Keypoint::new(
            rng.random_range(bbox.y1..=bbox.y2),
            rng.random_range(bbox.x1..=bbox.x2),
            rng.random_range(0.0..=1.0),
        )
    });
    PersonDetection { bbox, keypoints }
}

/// Frames of up to `max_persons` boxes on a coarse grid, so equal IoUs and
/// ambiguous matches are common.
pub fn grid_frames<R: Rng>(rng: &mut R, frames: usize, max_persons: usize) -> Vec<PoseFrame> {
    (0..frames)
        .map(|i| {
            let n = rng.random_range(0..=max_persons);
            let persons = (0..n)
                .map(|_| {
                    let x1 = rng.random_range(0..8u32);
                    let y1 = rng.random_range(0..8u32);
                    let x2 = rng.random_range(x1 + 1..=10);
                    let y2 = rng.random_range(y1 + 1..=10);
                    person_in(rng, to_box([x1, y1, x2, y2], 10.0))
                })
                .collect();
            PoseFrame {
                frame_index: i as u64,
                timestamp_s: i as f64,
                persons,
            }
        })
        .collect()
}
