use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::MetricsError;

pub const OPTION_COUNT: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QACategory {
    Interaction,
    ActionDetails,
    ActionSequence,
    Count,
    Attribute,
}

impl QACategory {
    pub const ALL: [QACategory; 5] = [
        QACategory::Interaction,
        QACategory::ActionDetails,
        QACategory::ActionSequence,
        QACategory::Count,
        QACategory::Attribute,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            QACategory::Interaction => "interaction",
            QACategory::ActionDetails => "action_details",
            QACategory::ActionSequence => "action_sequence",
            QACategory::Count => "count",
            QACategory::Attribute => "attribute",
        }
    }
}

/// A four-way multiple-choice question.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QAItem {
    pub category: QACategory,
    pub question: String,
    pub options: [String; OPTION_COUNT],
    pub answer_index: usize,
}

#[derive(Deserialize)]
struct RawQAItem {
    category: QACategory,
    question: String,
    options: Vec<String>,
    answer_index: usize,
}

impl QAItem {
    pub fn new(
        category: QACategory,
        question: impl Into<String>,
        options: [&str; OPTION_COUNT],
        answer_index: usize,
    ) -> Result<Self, MetricsError> {
        let item = Self {
            category,
            question: question.into(),
            options: options.map(str::to_string),
            answer_index,
        };
        item.validate()?;
        Ok(item)
    }

    pub fn validate(&self) -> Result<(), MetricsError> {
        if self.answer_index >= OPTION_COUNT {
            return Err(MetricsError::InvalidItem(format!(
                "answer_index {} out of range",
                self.answer_index
            )));
        }
        for i in 0..OPTION_COUNT {
            for j in i + 1..OPTION_COUNT {
                if self.options[i] == self.options[j] {
                    return Err(MetricsError::InvalidItem(format!(
                        "options {i} and {j} are identical"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn correct_option(&self) -> &str {
        &self.options[self.answer_index]
    }
}

impl<'de> Deserialize<'de> for QAItem {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = RawQAItem::deserialize(de)?;
        let n = raw.options.len();
        let options: [String; OPTION_COUNT] = raw
            .options
            .try_into()
            .map_err(|_| D::Error::custom(format!("expected {OPTION_COUNT} options, got {n}")))?;
        let item = QAItem {
            category: raw.category,
            question: raw.question,
            options,
            answer_index: raw.answer_index,
        };
        item.validate().map_err(D::Error::custom)?;
        Ok(item)
    }
}

/// Decode and validate one QA JSONL line.
pub fn parse_qa_item(line: &[u8], line_no: usize) -> Result<QAItem, MetricsError> {
    serde_json::from_slice(line).map_err(|e| MetricsError::Parse {
        line: line_no,
        message: e.to_string(),
    })
}

/// The seeded permutation used by [`shuffle_options`]: position `i` of the
/// shuffled item holds original option `perm[i]`.
pub fn option_permutation(seed: u64) -> [usize; OPTION_COUNT] {
    let mut perm = [0, 1, 2, 3];
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    perm
}

pub fn invert_permutation(perm: &[usize; OPTION_COUNT]) -> [usize; OPTION_COUNT] {
    let mut inv = [0; OPTION_COUNT];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

fn permute(item: &QAItem, perm: &[usize; OPTION_COUNT]) -> QAItem {
    let inv = invert_permutation(perm);
    QAItem {
        category: item.category,
        question: item.question.clone(),
        options: perm.map(|p| item.options[p].clone()),
        answer_index: inv[item.answer_index],
    }
}

/// Reorder the options with a permutation derived from `seed`, keeping the
/// answer pointing at the same option text.
pub fn shuffle_options(item: &QAItem, seed: u64) -> QAItem {
    permute(item, &option_permutation(seed))
}

/// Undo [`shuffle_options`] for the same seed.
pub fn unshuffle_options(item: &QAItem, seed: u64) -> QAItem {
    permute(item, &invert_permutation(&option_permutation(seed)))
}

pub fn category_counts(items: &[QAItem]) -> BTreeMap<QACategory, usize> {
    let mut out = BTreeMap::new();
    for it in items {
        *out.entry(it.category).or_insert(0) += 1;
    }
    out
}
