//! Detection JSONL: decoding with validation, and the canonical encoder.
//!
//! Wire layout, one clip per line:
//!
//! ```text
//! {"video_id":str,"clip_id":str,
//!  "meta":{"width":int,"height":int,"duration_s":float,"caption":str,
//!          "caption_pos_tags":[[token,tag],...]?},
//!  "existence_frames":[frame,...],"action_frames":[frame,...]}
//! frame = {"frame_index":int,"timestamp_s":float,
//!          "persons":[{"bbox":[x1,y1,x2,y2],"keypoints":[[h,w,conf] x17]}]}
//! ```
//!
//! The canonical encoder writes fields in exactly that order and prints every
//! real with at most 9 significant digits, so equal records encode to equal
//! bytes.

use std::fmt::Write as _;

use serde::Deserialize;
use thiserror::Error;

use crate::model::{
    BoundingBox, ClipMeta, ClipRecord, Keypoint, PersonDetection, PoseFrame, PosTag,
    KEYPOINT_COUNT,
};

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("line {line}: malformed JSON: {source}")]
    Json {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("line {line}: invalid field {field}: {message}")]
    Validation {
        line: usize,
        field: String,
        message: String,
    },
}

impl RecordError {
    pub fn line(&self) -> usize {
        match self {
            RecordError::Json { line, .. } | RecordError::Validation { line, .. } => *line,
        }
    }
}

#[derive(Deserialize)]
struct RawClip {
    video_id: String,
    clip_id: String,
    meta: RawMeta,
    existence_frames: Vec<RawFrame>,
    #[serde(default)]
    action_frames: Vec<RawFrame>,
}

#[derive(Deserialize)]
struct RawMeta {
    width: u32,
    height: u32,
    duration_s: f64,
    caption: String,
    #[serde(default)]
    caption_pos_tags: Option<Vec<(String, String)>>,
}

#[derive(Deserialize)]
struct RawFrame {
    frame_index: u64,
    timestamp_s: f64,
    persons: Vec<RawPerson>,
}

#[derive(Deserialize)]
struct RawPerson {
    bbox: Vec<f64>,
    keypoints: Vec<Vec<f64>>,
}

/// Decode one detection line, treating it as line 1.
pub fn parse_clip_record(line: &[u8]) -> Result<ClipRecord, RecordError> {
    parse_clip_record_at(1, line)
}

/// Decode one detection line; `line_no` (1-based) is carried into errors.
pub fn parse_clip_record_at(line_no: usize, line: &[u8]) -> Result<ClipRecord, RecordError> {
    let raw: RawClip = serde_json::from_slice(line).map_err(|source| RecordError::Json {
        line: line_no,
        source,
    })?;
    Validator { line: line_no }.clip(raw)
}

struct Validator {
    line: usize,
}

impl Validator {
    fn err(&self, field: impl Into<String>, message: impl Into<String>) -> RecordError {
        RecordError::Validation {
            line: self.line,
            field: field.into(),
            message: message.into(),
        }
    }

    fn clip(&self, raw: RawClip) -> Result<ClipRecord, RecordError> {
        let m = raw.meta;
        if m.width == 0 || m.height == 0 {
            return Err(self.err(
                "meta",
                format!("resolution {}x{} must be positive", m.width, m.height),
            ));
        }
        if !(m.duration_s.is_finite() && m.duration_s > 0.0) {
            return Err(self.err("meta.duration_s", "duration must be positive"));
        }
        let meta = ClipMeta {
            video_id: raw.video_id,
            clip_id: raw.clip_id,
            width: m.width,
            height: m.height,
            duration_s: m.duration_s,
            caption: m.caption,
            caption_pos_tags: m.caption_pos_tags.map(|tags| {
                tags.into_iter()
                    .map(|(token, tag)| PosTag { token, tag })
                    .collect()
            }),
        };
        Ok(ClipRecord {
            meta,
            existence_frames: self.frames("existence_frames", raw.existence_frames)?,
            action_frames: self.frames("action_frames", raw.action_frames)?,
        })
    }

    fn frames(&self, path: &str, raw: Vec<RawFrame>) -> Result<Vec<PoseFrame>, RecordError> {
        let mut out: Vec<PoseFrame> = Vec::with_capacity(raw.len());
        for (i, f) in raw.into_iter().enumerate() {
            let fpath = format!("{path}[{i}]");
            if !(f.timestamp_s.is_finite() && f.timestamp_s >= 0.0) {
                return Err(self.err(format!("{fpath}.timestamp_s"), "timestamp must be >= 0"));
            }
            if let Some(prev) = out.last() {
                if f.timestamp_s <= prev.timestamp_s {
                    return Err(self.err(
                        format!("{fpath}.timestamp_s"),
                        "timestamps must be strictly increasing",
                    ));
                }
                if f.frame_index <= prev.frame_index {
                    return Err(self.err(
                        format!("{fpath}.frame_index"),
                        "frame indices must be strictly increasing",
                    ));
                }
            }
            let persons = f
                .persons
                .into_iter()
                .enumerate()
                .map(|(j, p)| self.person(&format!("{fpath}.persons[{j}]"), p))
                .collect::<Result<Vec<_>, _>>()?;
            out.push(PoseFrame {
                frame_index: f.frame_index,
                timestamp_s: f.timestamp_s,
                persons,
            });
        }
        Ok(out)
    }

    fn person(&self, path: &str, raw: RawPerson) -> Result<PersonDetection, RecordError> {
        if raw.bbox.len() != 4 {
            return Err(self.err(
                format!("{path}.bbox"),
                format!("bbox length {} ≠ 4", raw.bbox.len()),
            ));
        }
        let c = |v: f64| v.clamp(0.0, 1.0);
        let bbox = BoundingBox::new(c(raw.bbox[0]), c(raw.bbox[1]), c(raw.bbox[2]), c(raw.bbox[3]));
        if bbox.x1 > bbox.x2 || bbox.y1 > bbox.y2 {
            return Err(self.err(format!("{path}.bbox"), "bbox corners out of order"));
        }
        if raw.keypoints.len() != KEYPOINT_COUNT {
            return Err(self.err(
                format!("{path}.keypoints"),
                format!("keypoints length {} ≠ {KEYPOINT_COUNT}", raw.keypoints.len()),
            ));
        }
        let mut keypoints = [Keypoint::new(0.0, 0.0, 0.0); KEYPOINT_COUNT];
        for (k, kp) in raw.keypoints.iter().enumerate() {
            let kpath = format!("{path}.keypoints[{k}]");
            let &[h, w, conf] = kp.as_slice() else {
                return Err(self.err(kpath, format!("keypoint arity {} ≠ 3", kp.len())));
            };
            if !(0.0..=1.0).contains(&conf) {
                return Err(self.err(kpath, format!("confidence {conf} outside [0,1]")));
            }
            keypoints[k] = Keypoint::new(c(h), c(w), conf);
        }
        Ok(PersonDetection { bbox, keypoints })
    }
}

/// Format a real with at most 9 significant digits in plain decimal notation.
///
/// Trailing zeros are dropped; zero (of either sign) prints as `0`.
pub fn format_real(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0".to_string();
    }
    let sci = format!("{:.8e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i64 = exp.parse().expect("exponent");
    let negative = mantissa.starts_with('-');
    let digits: Vec<u8> = mantissa.bytes().filter(u8::is_ascii_digit).collect();
    // Decimal point sits after `point` digits.
    let point = exp + 1;
    let mut out = String::with_capacity(24);
    if negative {
        out.push('-');
    }
    let digits = std::str::from_utf8(&digits).expect("ascii");
    if point <= 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-point) as usize));
        out.push_str(digits);
    } else if point as usize >= digits.len() {
        out.push_str(digits);
        out.extend(std::iter::repeat_n('0', point as usize - digits.len()));
    } else {
        out.push_str(&digits[..point as usize]);
        out.push('.');
        out.push_str(&digits[point as usize..]);
    }
    if out.contains('.') {
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
    }
    if out == "-0" {
        out = "0".to_string();
    }
    out
}

fn push_str_json(out: &mut String, s: &str) {
    out.push_str(&serde_json::to_string(s).expect("string serialization"));
}

fn push_frames(out: &mut String, frames: &[PoseFrame]) {
    out.push('[');
    for (i, f) in frames.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(
            out,
            "{{\"frame_index\":{},\"timestamp_s\":{},\"persons\":[",
            f.frame_index,
            format_real(f.timestamp_s)
        );
        for (j, p) in f.persons.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let b = &p.bbox;
            let _ = write!(
                out,
                "{{\"bbox\":[{},{},{},{}],\"keypoints\":[",
                format_real(b.x1),
                format_real(b.y1),
                format_real(b.x2),
                format_real(b.y2)
            );
            for (k, kp) in p.keypoints.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                let _ = write!(
                    out,
                    "[{},{},{}]",
                    format_real(kp.h),
                    format_real(kp.w),
                    format_real(kp.confidence)
                );
            }
            out.push_str("]}");
        }
        out.push_str("]}");
    }
    out.push(']');
}

/// Deterministic single-line encoding of a record (no trailing newline).
pub fn canonical_serialize(record: &ClipRecord) -> Vec<u8> {
    let m = &record.meta;
    let mut out = String::with_capacity(4096);
    out.push_str("{\"video_id\":");
    push_str_json(&mut out, &m.video_id);
    out.push_str(",\"clip_id\":");
    push_str_json(&mut out, &m.clip_id);
    let _ = write!(
        out,
        ",\"meta\":{{\"width\":{},\"height\":{},\"duration_s\":{},\"caption\":",
        m.width,
        m.height,
        format_real(m.duration_s)
    );
    push_str_json(&mut out, &m.caption);
    if let Some(tags) = &m.caption_pos_tags {
        out.push_str(",\"caption_pos_tags\":[");
        for (i, t) in tags.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push('[');
            push_str_json(&mut out, &t.token);
            out.push(',');
            push_str_json(&mut out, &t.tag);
            out.push(']');
        }
        out.push(']');
    }
    out.push_str("},\"existence_frames\":");
    push_frames(&mut out, &record.existence_frames);
    out.push_str(",\"action_frames\":");
    push_frames(&mut out, &record.action_frames);
    out.push('}');
    out.into_bytes()
}
