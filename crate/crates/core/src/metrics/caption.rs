use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::MetricsError;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubjectAttributes {
    pub gender: String,
    pub age_group: String,
    #[serde(default)]
    pub clothing: Vec<String>,
    #[serde(default)]
    pub accessories: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subject {
    pub subject_id: String,
    pub attributes: SubjectAttributes,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub order_index: i64,
    pub subject_id: String,
    pub description: String,
    #[serde(default)]
    pub interaction_targets: Vec<String>,
}

/// A standardized caption: who appears, and what each of them does in order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaptionDoc {
    pub subjects: Vec<Subject>,
    pub events: Vec<Event>,
}

/// One broken invariant, located by a field path such as `events[2].subject_id`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Check every structural invariant and return all violations found.
pub fn validate_caption_doc(doc: &CaptionDoc) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    let mut push = |path: String, message: String| out.push(Violation { path, message });

    if doc.subjects.is_empty() {
        push("subjects".into(), "no subjects".into());
    }
    let mut declared = HashSet::new();
    for (i, s) in doc.subjects.iter().enumerate() {
        if s.subject_id.is_empty() {
            push(format!("subjects[{i}].subject_id"), "empty subject_id".into());
        } else if !declared.insert(s.subject_id.as_str()) {
            push(
                format!("subjects[{i}].subject_id"),
                format!("duplicate subject_id {}", s.subject_id),
            );
        }
    }
    for (i, e) in doc.events.iter().enumerate() {
        if !declared.contains(e.subject_id.as_str()) {
            push(
                format!("events[{i}].subject_id"),
                format!("unknown subject_id {}", e.subject_id),
            );
        }
        if i > 0 && e.order_index <= doc.events[i - 1].order_index {
            push(format!("events[{i}].order_index"), "non-increasing order_index".into());
        }
        for (j, t) in e.interaction_targets.iter().enumerate() {
            if !declared.contains(t.as_str()) {
                push(
                    format!("events[{i}].interaction_targets[{j}]"),
                    format!("unknown subject_id {t}"),
                );
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Decode one caption-document JSONL line. Structure only; call
/// [`validate_caption_doc`] for the invariants.
pub fn parse_caption_doc(line: &[u8], line_no: usize) -> Result<CaptionDoc, MetricsError> {
    serde_json::from_slice(line).map_err(|e| MetricsError::Parse {
        line: line_no,
        message: e.to_string(),
    })
}

/// Size of a caption document.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaptionStats {
    pub subjects: usize,
    pub events: usize,
    /// Whitespace-separated words across attributes and event descriptions.
    pub words: usize,
}

pub fn caption_stats(doc: &CaptionDoc) -> CaptionStats {
    let words = |s: &str| s.split_whitespace().count();
    let attr_words: usize = doc
        .subjects
        .iter()
        .map(|s| {
            let a = &s.attributes;
            words(&a.gender)
                + words(&a.age_group)
                + a.clothing.iter().map(|c| words(c)).sum::<usize>()
                + a.accessories.iter().map(|c| words(c)).sum::<usize>()
        })
        .sum();
    let event_words: usize = doc.events.iter().map(|e| words(&e.description)).sum();
    CaptionStats {
        subjects: doc.subjects.len(),
        events: doc.events.len(),
        words: attr_words + event_words,
    }
}
