use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{MetricsError, QACategory, QAItem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnswerOutcome {
    Choice(usize),
    Refusal,
}

impl AnswerOutcome {
    pub fn is_correct(&self, gold: usize) -> bool {
        matches!(self, AnswerOutcome::Choice(i) if *i == gold)
    }
}

/// Fraction of outcomes matching the gold index. Refusals count in the
/// denominator and are never correct.
pub fn accuracy(outcomes: &[AnswerOutcome], gold: &[usize]) -> Result<f64, MetricsError> {
    if outcomes.len() != gold.len() {
        return Err(MetricsError::LengthMismatch {
            outcomes: outcomes.len(),
            gold: gold.len(),
        });
    }
    if outcomes.is_empty() {
        return Err(MetricsError::Empty);
    }
    let correct = outcomes.iter().zip(gold).filter(|(o, g)| o.is_correct(**g)).count();
    Ok(correct as f64 / outcomes.len() as f64)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CategoryAccuracy {
    pub correct: usize,
    pub refused: usize,
    pub total: usize,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyReport {
    pub overall: CategoryAccuracy,
    pub by_category: BTreeMap<QACategory, CategoryAccuracy>,
}

/// Overall and per-category accuracy of `outcomes` against the answers of `items`.
pub fn accuracy_by_category(
    outcomes: &[AnswerOutcome],
    items: &[QAItem],
) -> Result<AccuracyReport, MetricsError> {
    let gold: Vec<usize> = items.iter().map(|i| i.answer_index).collect();
    accuracy(outcomes, &gold)?;
    let mut overall = CategoryAccuracy::default();
    let mut by_category: BTreeMap<QACategory, CategoryAccuracy> = BTreeMap::new();
    for (o, it) in outcomes.iter().zip(items) {
        for slot in [&mut overall, by_category.entry(it.category).or_default()] {
            slot.total += 1;
            if o.is_correct(it.answer_index) {
                slot.correct += 1;
            }
            if *o == AnswerOutcome::Refusal {
                slot.refused += 1;
            }
        }
    }
    for slot in std::iter::once(&mut overall).chain(by_category.values_mut()) {
        slot.accuracy = slot.correct as f64 / slot.total as f64;
    }
    Ok(AccuracyReport { overall, by_category })
}

/// Pairwise human judgment counts between two systems.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GsbJudgment {
    pub good: u64,
    pub same: u64,
    pub bad: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GsbScore {
    Finite(f64),
    /// Only good judgments: the ratio is unbounded.
    Infinite,
}

impl GsbScore {
    pub fn value(&self) -> f64 {
        match self {
            GsbScore::Finite(v) => *v,
            GsbScore::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for GsbScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GsbScore::Finite(v) => write!(f, "{v:.2}"),
            GsbScore::Infinite => f.write_str("inf"),
        }
    }
}

/// `(good + same) / (bad + same)`.
pub fn gsb_score(j: GsbJudgment) -> Result<GsbScore, MetricsError> {
    if j.good + j.same + j.bad == 0 {
        return Err(MetricsError::EmptyJudgment);
    }
    let den = j.bad + j.same;
    if den == 0 {
        return Ok(GsbScore::Infinite);
    }
    Ok(GsbScore::Finite((j.good + j.same) as f64 / den as f64))
}
