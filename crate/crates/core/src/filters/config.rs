use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::motion::AffineScope;

/// How per-pair L1 motion along one tracklet is reduced to a tracklet score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairRule {
    /// Mean over adjacent pairs with enough visible keypoints.
    #[default]
    Mean,
    /// Minimum over adjacent pairs; any pair without enough visible
    /// keypoints disqualifies the tracklet.
    Every,
}

impl FromStr for PairRule {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "mean" => Ok(PairRule::Mean),
            "every" => Ok(PairRule::Every),
            _ => Err(()),
        }
    }
}

impl fmt::Display for PairRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairRule::Mean => "mean",
            PairRule::Every => "every",
        })
    }
}

/// Thresholds for every stage of the cascade. Immutable once validated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterConfig {
    /// Shorter frame side, in pixels, below which a video counts as low resolution.
    pub min_short_side: u32,
    pub min_clip_s: f64,
    pub max_clip_s: f64,
    pub min_humans: usize,
    pub max_humans: usize,
    /// Minimum mean per-frame box coverage over the existence frames.
    pub min_coverage: f64,
    /// Tracklet motion must exceed this mean normalized L1 displacement.
    pub l1_threshold: f64,
    /// Clips must exceed this mean affine residual.
    pub affine_residual_threshold: f64,
    pub iou_min: f64,
    pub conf_min: f64,
    /// Require every multi-frame tracklet to move, not just one.
    pub require_all_tracklets: bool,
    pub l1_pair_rule: PairRule,
    #[serde(with = "scope_serde")]
    pub affine_scope: AffineScope,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            min_short_side: 360,
            min_clip_s: 5.0,
            max_clip_s: 20.0,
            min_humans: 1,
            max_humans: 5,
            min_coverage: 0.10,
            l1_threshold: 0.085,
            affine_residual_threshold: 0.0016,
            iou_min: 0.3,
            conf_min: 0.3,
            require_all_tracklets: false,
            l1_pair_rule: PairRule::Mean,
            affine_scope: AffineScope::Pooled,
        }
    }
}

mod scope_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: &AffineScope, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(scope_name(*s))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<AffineScope, D::Error> {
        let s = String::deserialize(de)?;
        parse_scope(&s).ok_or_else(|| serde::de::Error::custom(format!("unknown scope {s}")))
    }
}

fn scope_name(s: AffineScope) -> &'static str {
    match s {
        AffineScope::Pooled => "pooled",
        AffineScope::PerTracklet => "per_tracklet",
    }
}

fn parse_scope(s: &str) -> Option<AffineScope> {
    match s {
        "pooled" => Some(AffineScope::Pooled),
        "per_tracklet" => Some(AffineScope::PerTracklet),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("config line {line}: expected `key = value`, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("unknown config key {0:?}")]
    UnknownKey(String),
    #[error("config key {key}: cannot parse {value:?} as {expected}")]
    InvalidValue {
        key: String,
        value: String,
        expected: &'static str,
    },
    #[error("invalid config: {0}")]
    Invariant(String),
}

fn parse_value<T: FromStr>(key: &str, value: &str, expected: &'static str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::InvalidValue {
        key: key.to_string(),
        value: value.to_string(),
        expected,
    })
}

impl FilterConfig {
    pub const KEYS: [&'static str; 13] = [
        "min_short_side",
        "min_clip_s",
        "max_clip_s",
        "min_humans",
        "max_humans",
        "min_coverage",
        "l1_threshold",
        "affine_residual_threshold",
        "iou_min",
        "conf_min",
        "require_all_tracklets",
        "l1_pair_rule",
        "affine_scope",
    ];

    /// Parse a flat `key = value` file on top of the defaults.
    ///
    /// Blank lines and lines starting with `#` are ignored. Values may be
    /// wrapped in double quotes.
    pub fn from_kv_str(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Syntax {
                    line: i + 1,
                    text: raw.to_string(),
                });
            };
            cfg.set(key.trim(), value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Apply one `key=value` override; call [`FilterConfig::validate`] afterwards.
    pub fn apply_override(&mut self, pair: &str) -> Result<(), ConfigError> {
        let (key, value) = pair.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: 0,
            text: pair.to_string(),
        })?;
        self.set(key.trim(), value.trim())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let value = value
            .strip_prefix('"')
            .and_then(|v| v.strip_suffix('"'))
            .unwrap_or(value);
        const REAL: &str = "a real number";
        const COUNT: &str = "a non-negative integer";
        match key {
            "min_short_side" => self.min_short_side = parse_value(key, value, COUNT)?,
            "min_clip_s" => self.min_clip_s = parse_value(key, value, REAL)?,
            "max_clip_s" => self.max_clip_s = parse_value(key, value, REAL)?,
            "min_humans" => self.min_humans = parse_value(key, value, COUNT)?,
            "max_humans" => self.max_humans = parse_value(key, value, COUNT)?,
            "min_coverage" => self.min_coverage = parse_value(key, value, REAL)?,
            "l1_threshold" => self.l1_threshold = parse_value(key, value, REAL)?,
            "affine_residual_threshold" => {
                self.affine_residual_threshold = parse_value(key, value, REAL)?
            }
            "iou_min" => self.iou_min = parse_value(key, value, REAL)?,
            "conf_min" => self.conf_min = parse_value(key, value, REAL)?,
            "require_all_tracklets" => {
                self.require_all_tracklets = parse_value(key, value, "true or false")?
            }
            "l1_pair_rule" => self.l1_pair_rule = parse_value(key, value, "mean or every")?,
            "affine_scope" => {
                self.affine_scope = parse_scope(value).ok_or_else(|| ConfigError::InvalidValue {
                    key: key.to_string(),
                    value: value.to_string(),
                    expected: "pooled or per_tracklet",
                })?
            }
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let reals = [
            ("min_clip_s", self.min_clip_s),
            ("max_clip_s", self.max_clip_s),
            ("min_coverage", self.min_coverage),
            ("l1_threshold", self.l1_threshold),
            ("affine_residual_threshold", self.affine_residual_threshold),
            ("iou_min", self.iou_min),
            ("conf_min", self.conf_min),
        ];
        for (name, v) in reals {
            if !v.is_finite() || v < 0.0 {
                return Err(ConfigError::Invariant(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        if self.min_clip_s >= self.max_clip_s {
            return Err(ConfigError::Invariant(format!(
                "min_clip_s {} must be below max_clip_s {}",
                self.min_clip_s, self.max_clip_s
            )));
        }
        if self.min_humans > self.max_humans {
            return Err(ConfigError::Invariant(format!(
                "min_humans {} exceeds max_humans {}",
                self.min_humans, self.max_humans
            )));
        }
        for (name, v) in [("iou_min", self.iou_min), ("conf_min", self.conf_min)] {
            if v > 1.0 {
                return Err(ConfigError::Invariant(format!("{name} must be <= 1, got {v}")));
            }
        }
        Ok(())
    }

    /// The configuration as a `key = value` file that [`FilterConfig::from_kv_str`] reads back.
    pub fn to_kv_string(&self) -> String {
        format!(
            "min_short_side = {}\nmin_clip_s = {}\nmax_clip_s = {}\nmin_humans = {}\nmax_humans = {}\n\
             min_coverage = {}\nl1_threshold = {}\naffine_residual_threshold = {}\niou_min = {}\n\
             conf_min = {}\nrequire_all_tracklets = {}\nl1_pair_rule = {}\naffine_scope = {}\n",
            self.min_short_side,
            self.min_clip_s,
            self.max_clip_s,
            self.min_humans,
            self.max_humans,
            self.min_coverage,
            self.l1_threshold,
            self.affine_residual_threshold,
            self.iou_min,
            self.conf_min,
            self.require_all_tracklets,
            self.l1_pair_rule,
            scope_name(self.affine_scope),
        )
    }
}
