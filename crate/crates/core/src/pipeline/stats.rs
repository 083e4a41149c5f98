use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::DecisionRecord;
use crate::model::{FailureKind, Stage};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCount {
    pub attempted: u64,
    pub passed: u64,
}

impl StageCount {
    pub fn failed(&self) -> u64 {
        self.attempted - self.passed
    }
}

/// Rejections broken down by cause. Parse errors are counted separately in
/// [`PipelineStats::parse_errors`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureCounts {
    pub low_resolution: u64,
    pub duration: u64,
    pub no_verb: u64,
    pub person_count: u64,
    pub coverage: u64,
    pub static_motion: u64,
    pub affine_residual: u64,
    pub undecidable: u64,
    pub invalid_input: u64,
}

impl FailureCounts {
    fn slot(&mut self, kind: FailureKind) -> Option<&mut u64> {
        Some(match kind {
            FailureKind::ParseError => return None,
            FailureKind::InvalidInput => &mut self.invalid_input,
            FailureKind::LowResolution => &mut self.low_resolution,
            FailureKind::Duration => &mut self.duration,
            FailureKind::NoVerb => &mut self.no_verb,
            FailureKind::PersonCount => &mut self.person_count,
            FailureKind::Coverage => &mut self.coverage,
            FailureKind::StaticMotion => &mut self.static_motion,
            FailureKind::AffineResidual => &mut self.affine_residual,
            FailureKind::Undecidable => &mut self.undecidable,
        })
    }

    pub fn entries(&self) -> [(&'static str, u64); 9] {
        [
            ("low_resolution", self.low_resolution),
            ("duration", self.duration),
            ("no_verb", self.no_verb),
            ("person_count", self.person_count),
            ("coverage", self.coverage),
            ("static_motion", self.static_motion),
            ("affine_residual", self.affine_residual),
            ("undecidable", self.undecidable),
            ("invalid_input", self.invalid_input),
        ]
    }

    pub fn total(&self) -> u64 {
        self.entries().iter().map(|(_, n)| n).sum()
    }
}

/// Stage-yield statistics over one pipeline run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PipelineStats {
    pub input_count: u64,
    pub parse_errors: u64,
    pub metadata: StageCount,
    pub existence: StageCount,
    pub action: StageCount,
    pub failures: FailureCounts,
    pub final_passed: u64,
    /// `final_passed / input_count`, or 0 for an empty run.
    pub final_yield: f64,
}

impl PipelineStats {
    pub fn record(&mut self, rec: &DecisionRecord) {
        self.input_count += 1;
        if rec.is_parse_error() {
            self.parse_errors += 1;
        } else {
            for v in &rec.verdicts {
                let slot = match v.stage {
                    Stage::Metadata => &mut self.metadata,
                    Stage::Existence => &mut self.existence,
                    Stage::ActionMotion | Stage::ActionAffine => &mut self.action,
                    Stage::Parse => continue,
                };
                slot.attempted += 1;
                if v.passed {
                    slot.passed += 1;
                } else if let Some(n) = v.failure.and_then(|k| self.failures.slot(k)) {
                    *n += 1;
                }
            }
        }
        if rec.final_pass {
            self.final_passed += 1;
        }
        self.final_yield = self.final_passed as f64 / self.input_count as f64;
    }

    pub fn stages(&self) -> [(&'static str, StageCount); 3] {
        [
            ("metadata", self.metadata),
            ("existence", self.existence),
            ("action", self.action),
        ]
    }

    /// Every input is accounted for exactly once: passed, rejected at one
    /// stage, or unparseable.
    pub fn is_conserved(&self) -> bool {
        let stage_fails: u64 = self.stages().iter().map(|(_, c)| c.failed()).sum();
        self.input_count == self.final_passed + stage_fails + self.parse_errors
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
}

fn percent(num: u64, den: u64) -> String {
    let f = if den == 0 { 0.0 } else { num as f64 / den as f64 };
    format!("{:.4}%", f * 100.0)
}

/// Render the stats as an attrition table or as JSON. Output is a pure
/// function of the stats.
pub fn emit_stats_report(stats: &PipelineStats, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Json => {
            let mut out = serde_json::to_vec_pretty(stats).expect("stats serialize");
            out.push(b'\n');
            out
        }
        ReportFormat::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "{:<12} {:>10} {:>10} {:>10} {:>12}", "stage", "attempted", "passed", "failed", "pass rate");
            for (name, c) in stats.stages() {
                let _ = writeln!(
                    s,
                    "{:<12} {:>10} {:>10} {:>10} {:>12}",
                    name,
                    c.attempted,
                    c.passed,
                    c.failed(),
                    percent(c.passed, c.attempted)
                );
            }
            let _ = writeln!(s);
            let _ = writeln!(s, "{:<16} {:>10}", "rejection", "count");
            for (name, n) in stats.failures.entries() {
                let _ = writeln!(s, "{:<16} {:>10}", name, n);
            }
            let _ = writeln!(s, "{:<16} {:>10}", "parse_error", stats.parse_errors);
            let _ = writeln!(s);
            let _ = writeln!(s, "input        {}", stats.input_count);
            let _ = writeln!(s, "final        {}", stats.final_passed);
            let _ = writeln!(s, "final_yield  {:.4}%", stats.final_yield * 100.0);
            s.into_bytes()
        }
    }
}
