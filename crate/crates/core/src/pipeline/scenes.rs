use std::io::BufRead;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_DIFF_THRESHOLD: f64 = 0.3;

/// Tolerance on the unit sum of each histogram channel.
const NORMALIZATION_TOLERANCE: f64 = 1e-6;

/// Per-frame colour histogram, one L1-normalized vector per channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColorHistogram {
    pub frame_index: u64,
    pub channels: [Vec<f64>; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SceneMethod {
    /// Boundaries supplied by an upstream shot detector.
    Ingested,
    Histogram,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneBoundaryReport {
    /// Frame indices at which a new scene starts.
    pub boundaries: Vec<u64>,
    pub method: SceneMethod,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SceneError {
    #[error("no histograms given")]
    Empty,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("histogram {index}: {message}")]
    Invalid { index: usize, message: String },
    #[error("boundaries must be strictly increasing (at position {0})")]
    Unordered(usize),
}

impl SceneBoundaryReport {
    /// Wrap boundaries produced upstream after checking their order.
    pub fn ingested(boundaries: Vec<u64>) -> Result<Self, SceneError> {
        if let Some(i) = boundaries.windows(2).position(|w| w[0] >= w[1]) {
            return Err(SceneError::Unordered(i + 1));
        }
        Ok(Self {
            boundaries,
            method: SceneMethod::Ingested,
        })
    }

    pub fn is_single_scene(&self) -> bool {
        self.boundaries.is_empty()
    }
}

fn validate(index: usize, h: &ColorHistogram, bins: usize) -> Result<(), SceneError> {
    let invalid = |message: String| SceneError::Invalid { index, message };
    for (c, ch) in h.channels.iter().enumerate() {
        if ch.is_empty() {
            return Err(invalid(format!("channel {c} has no bins")));
        }
        if ch.len() != bins {
            return Err(invalid(format!("channel {c} has {} bins, expected {bins}", ch.len())));
        }
        if let Some(v) = ch.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(invalid(format!("channel {c} has bin value {v}")));
        }
        let sum: f64 = ch.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(invalid(format!("channel {c} sums to {sum}, not 1")));
        }
    }
    Ok(())
}

/// Content change between two frames: the total-variation distance
/// (half the L1 bin difference) averaged over the three channels. It lies in
/// `[0, 1]` and is 1 only for disjoint colour supports.
pub fn histogram_distance(a: &ColorHistogram, b: &ColorHistogram) -> f64 {
    let mut total = 0.0;
    for (ca, cb) in a.channels.iter().zip(&b.channels) {
        total += 0.5 * ca.iter().zip(cb).map(|(x, y)| (x - y).abs()).sum::<f64>();
    }
    total / 3.0
}

/// Report a boundary at every frame whose histogram differs from the
/// previous one by more than `diff_threshold`.
pub fn detect_scene_boundaries(
    hists: &[ColorHistogram],
    diff_threshold: f64,
) -> Result<SceneBoundaryReport, SceneError> {
    let first = hists.first().ok_or(SceneError::Empty)?;
    let bins = first.channels[0].len();
    for (i, h) in hists.iter().enumerate() {
        validate(i, h, bins)?;
    }
    if let Some(i) = hists.windows(2).position(|w| w[0].frame_index >= w[1].frame_index) {
        return Err(SceneError::Invalid {
            index: i + 1,
            message: "frame_index not increasing".into(),
        });
    }
    let boundaries = hists
        .windows(2)
        .filter(|w| histogram_distance(&w[0], &w[1]) > diff_threshold)
        .map(|w| w[1].frame_index)
        .collect();
    Ok(SceneBoundaryReport {
        boundaries,
        method: SceneMethod::Histogram,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHistogram {
    frame_index: Option<u64>,
    channels: Vec<Vec<f64>>,
}

/// Parse one JSONL histogram line: `{"frame_index": 4, "channels": [[..], [..], [..]]}`.
/// A missing `frame_index` defaults to `position`.
pub fn parse_histogram_line(line: &[u8], position: usize) -> Result<ColorHistogram, SceneError> {
    let perr = |message: String| SceneError::Parse {
        line: position + 1,
        message,
    };
    let raw: RawHistogram = serde_json::from_slice(line).map_err(|e| perr(e.to_string()))?;
    let Ok(channels) = <[Vec<f64>; 3]>::try_from(raw.channels) else {
        return Err(perr("expected exactly 3 channels".into()));
    };
    Ok(ColorHistogram {
        frame_index: raw.frame_index.unwrap_or(position as u64),
        channels,
    })
}

/// Read a histogram JSONL stream, skipping blank lines.
pub fn read_histograms<R: BufRead>(reader: R) -> Result<Vec<ColorHistogram>, SceneError> {
    let mut out = Vec::new();
    for (i, line) in reader.split(b'\n').enumerate() {
        let line = line.map_err(|e| SceneError::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        if line.iter().all(u8::is_ascii_whitespace) {
            continue;
        }
        let position = out.len();
        let h = parse_histogram_line(&line, position).map_err(|e| match e {
            SceneError::Parse { message, .. } => SceneError::Parse { line: i + 1, message },
            other => other,
        })?;
        out.push(h);
    }
    Ok(out)
}
