//! The rating engine: performance-scale mapping, the agreed-upon predicate,
//! per-level pass thresholds (overall and per gating activity), and the
//! resulting maturity level.
//!
//! A statement counts as agreed when its rating is 3 ("Largely Agree"),
//! 4 ("Completely Agree") or 0 ("Doesn't Apply", which scores as full
//! agreement). A level passes when the agreed count reaches the rounded
//! pass-ratio share of its statements and every gating activity independently
//! reaches its own rounded share. The maturity level is the highest passing
//! level; levels below it are not required to pass.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::consolidate::ConsolidatedResponse;
use crate::model::{MaturityModel, PassRatio};

/// Display name used when no level passes.
pub const NOT_RATED: &str = "Not Rated";

/// A performance rating on the five-point scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rating(u8);

impl Rating {
    pub const DOESNT_APPLY: Rating = Rating(0);
    pub const NOT_AGREE: Rating = Rating(1);
    pub const PARTIALLY_AGREE: Rating = Rating(2);
    pub const LARGELY_AGREE: Rating = Rating(3);
    pub const COMPLETELY_AGREE: Rating = Rating(4);

    pub fn new(value: u8) -> Result<Self, InvalidRating> {
        if value <= 4 {
            Ok(Rating(value))
        } else {
            Err(InvalidRating(value))
        }
    }

    pub const fn value(self) -> u8 {
        self.0
    }

    /// Whether this rating counts the statement as agreed upon.
    pub fn is_agreed(self) -> bool {
        matches!(self.0, 0 | 3 | 4)
    }

    pub fn linguistic(self) -> &'static str {
        match self.0 {
            0 => "Doesn't Apply",
            1 => "Not Agree",
            2 => "Partially Agree",
            3 => "Largely Agree",
            _ => "Completely Agree",
        }
    }

    pub fn all() -> impl Iterator<Item = Rating> {
        (0..=4).map(Rating)
    }
}

impl fmt::Display for Rating {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl TryFrom<u8> for Rating {
    type Error = InvalidRating;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        Rating::new(value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("rating {0} is outside the 0..=4 scale")]
pub struct InvalidRating(pub u8);

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("percentage {0} is outside 0..=100")]
pub struct PercentageOutOfRange(pub f64);

/// Map an extent-of-agreement percentage onto the performance scale.
///
/// The bands are half-open so the mapping is total and monotone on [0, 100]:
/// [0, 33.3) is 1, [33.3, 66.7) is 2, [66.7, 80) is 3 and [80, 100] is 4.
/// A rating of 0 is an explicit assessor choice and never produced here.
pub fn scale_from_percentage(pct: f64) -> Result<Rating, PercentageOutOfRange> {
    if !(0.0..=100.0).contains(&pct) {
        return Err(PercentageOutOfRange(pct));
    }
    Ok(if pct >= 80.0 {
        Rating::COMPLETELY_AGREE
    } else if pct >= 66.7 {
        Rating::LARGELY_AGREE
    } else if pct >= 33.3 {
        Rating::PARTIALLY_AGREE
    } else {
        Rating::NOT_AGREE
    })
}

/// Pass threshold for `total` statements: `total * ratio` rounded to the
/// nearest integer, ties rounded up. Computed in exact integer arithmetic.
pub fn pass_threshold(total: usize, ratio: PassRatio) -> usize {
    let num = ratio.numerator() as u128;
    let den = ratio.denominator() as u128;
    let scaled = total as u128 * num;
    ((2 * scaled + den) / (2 * den)) as usize
}

/// Outcome of evaluating one level against a consolidated response.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelVerdict {
    pub level_index: u32,
    pub total_statements: usize,
    /// Statements whose rating satisfies the agreed predicate. Blanks never
    /// count, and the total is never reduced to compensate for them.
    pub agreed: usize,
    pub pass_threshold: usize,
    /// Agreed count per gating activity id.
    pub gating_agreed: BTreeMap<String, usize>,
    /// Threshold per gating activity id.
    pub gating_threshold: BTreeMap<String, usize>,
    pub blanks: usize,
    pub passed: bool,
}

/// Verdicts for every level plus the resulting maturity level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssessmentOutcome {
    /// One verdict per level, ascending by index.
    pub verdicts: Vec<LevelVerdict>,
    /// Highest passing level index; 0 when no level passes.
    pub aml: u32,
    /// Name of the achieved level, or "Not Rated".
    pub aml_name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("unknown level index {0}")]
    UnknownLevel(u32),
    #[error("unknown activity id `{0}`")]
    UnknownActivity(String),
}

fn rating_of(resp: &ConsolidatedResponse, statement_id: &str) -> Option<Rating> {
    resp.ratings.get(statement_id).copied().flatten()
}

/// Count the statements of one level (optionally restricted to one activity)
/// whose consolidated rating is agreed upon.
pub fn count_agreed(
    resp: &ConsolidatedResponse,
    level_index: u32,
    model: &MaturityModel,
    activity: Option<&str>,
) -> Result<usize, EngineError> {
    model
        .level(level_index)
        .ok_or(EngineError::UnknownLevel(level_index))?;
    if let Some(aid) = activity {
        model
            .activity(aid)
            .ok_or_else(|| EngineError::UnknownActivity(aid.to_string()))?;
    }
    Ok(model
        .statements_at(level_index)
        .filter(|s| activity.is_none_or(|aid| s.activity_id == aid))
        .filter(|s| rating_of(resp, &s.id).is_some_and(Rating::is_agreed))
        .count())
}

/// Evaluate one level: agreed counts, thresholds, gating conjuncts, verdict.
pub fn evaluate_level(
    resp: &ConsolidatedResponse,
    level_index: u32,
    model: &MaturityModel,
) -> Result<LevelVerdict, EngineError> {
    let level = model
        .level(level_index)
        .ok_or(EngineError::UnknownLevel(level_index))?;
    let agreed = count_agreed(resp, level_index, model, None)?;
    let threshold = pass_threshold(level.statement_count, model.pass_ratio);

    let mut gating_agreed = BTreeMap::new();
    let mut gating_threshold = BTreeMap::new();
    for gate in model.gating_activity_ids() {
        let gate_total = model
            .statements_at(level_index)
            .filter(|s| s.activity_id == gate)
            .count();
        gating_agreed.insert(
            gate.to_string(),
            count_agreed(resp, level_index, model, Some(gate))?,
        );
        gating_threshold.insert(
            gate.to_string(),
            pass_threshold(gate_total, model.pass_ratio),
        );
    }

    let blanks = model
        .statements_at(level_index)
        .filter(|s| rating_of(resp, &s.id).is_none())
        .count();

    let passed = agreed >= threshold
        && gating_agreed
            .iter()
            .all(|(gate, &na)| na >= gating_threshold[gate]);

    Ok(LevelVerdict {
        level_index,
        total_statements: level.statement_count,
        agreed,
        pass_threshold: threshold,
        gating_agreed,
        gating_threshold,
        blanks,
        passed,
    })
}

/// Evaluate every level and derive the maturity level: the highest passing
/// index, with no contiguity requirement across levels. Returns 0 ("Not
/// Rated") when nothing passes.
pub fn maturity_level(
    resp: &ConsolidatedResponse,
    model: &MaturityModel,
) -> Result<AssessmentOutcome, EngineError> {
    let mut indices: Vec<u32> = model.levels.iter().map(|l| l.index).collect();
    indices.sort_unstable();
    let verdicts: Vec<LevelVerdict> = indices
        .into_iter()
        .map(|i| evaluate_level(resp, i, model))
        .collect::<Result<_, _>>()?;
    let aml = verdicts
        .iter()
        .filter(|v| v.passed)
        .map(|v| v.level_index)
        .max()
        .unwrap_or(0);
    let aml_name = if aml == 0 {
        NOT_RATED.to_string()
    } else {
        model.level(aml).map(|l| l.name.clone()).unwrap_or_default()
    };
    Ok(AssessmentOutcome {
        verdicts,
        aml,
        aml_name,
    })
}
