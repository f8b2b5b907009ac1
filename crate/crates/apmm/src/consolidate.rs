//! Multi-rater consolidation: merge several raters' responses for one
//! organization into a single response for scoring, and report per-rater
//! coverage.
//!
//! The merge rule per statement: ignore blanks; if any concrete non-zero
//! rating exists, suppress "Doesn't Apply" zeros and take the median of the
//! rest (even counts take the lower of the two middles, so a split never
//! rounds an organization up); if every non-blank rating is zero the result
//! is zero; if everything is blank the result stays blank.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::MaturityModel;
use crate::rating::Rating;

/// One rater's questionnaire answers. Absent statement ids are implicit
/// blanks; `None` values are explicit blanks. Both score identically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResponseSet {
    pub model_id: String,
    pub organization: String,
    pub rater: String,
    pub ratings: BTreeMap<String, Option<Rating>>,
}

/// How a statement's consolidated rating was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Every non-blank rating was identical (includes the single-rater case).
    Unanimous,
    /// Lower median of diverging ratings.
    Median,
    /// "Doesn't Apply" zeros were discarded in favor of concrete ratings.
    ZeroSuppressed,
    /// No rater answered.
    AllBlank,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Unanimous => "unanimous",
            Provenance::Median => "median",
            Provenance::ZeroSuppressed => "zero-suppressed",
            Provenance::AllBlank => "all-blank",
        })
    }
}

/// Merged view of all raters, covering the model's full statement id set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsolidatedResponse {
    pub model_id: String,
    pub organization: String,
    pub rater_count: usize,
    pub ratings: BTreeMap<String, Option<Rating>>,
    pub provenance: BTreeMap<String, Provenance>,
}

/// Merge strategy selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConsolidationRule {
    /// Median-of-nonzero rule described at module level.
    #[default]
    Median,
    /// Take the first rater's response verbatim.
    First,
}

impl fmt::Display for ConsolidationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConsolidationRule::Median => "median",
            ConsolidationRule::First => "first",
        })
    }
}

impl FromStr for ConsolidationRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "median" => Ok(ConsolidationRule::Median),
            "first" => Ok(ConsolidationRule::First),
            other => Err(format!(
                "unknown consolidation rule `{other}` (median or first)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConsolidateError {
    #[error("no responses to consolidate")]
    EmptyResponses,
    #[error("responses reference different models: `{0}` vs `{1}`")]
    MixedModels(String, String),
    #[error("responses belong to different organizations: `{0}` vs `{1}`")]
    MixedOrganizations(String, String),
    #[error("rater `{rater}` rated unknown statement `{id}`")]
    UnknownStatement { rater: String, id: String },
}

fn check_same_origin(
    responses: &[ResponseSet],
    model: &MaturityModel,
) -> Result<(), ConsolidateError> {
    let first = responses.first().ok_or(ConsolidateError::EmptyResponses)?;
    for r in responses {
        if r.model_id != first.model_id {
            return Err(ConsolidateError::MixedModels(
                first.model_id.clone(),
                r.model_id.clone(),
            ));
        }
        if r.organization != first.organization {
            return Err(ConsolidateError::MixedOrganizations(
                first.organization.clone(),
                r.organization.clone(),
            ));
        }
        for id in r.ratings.keys() {
            if model.statement(id).is_none() {
                return Err(ConsolidateError::UnknownStatement {
                    rater: r.rater.clone(),
                    id: id.clone(),
                });
            }
        }
    }
    Ok(())
}

/// Lower median: for an even count, the smaller of the two middle values.
fn lower_median(sorted: &[Rating]) -> Rating {
    sorted[(sorted.len() - 1) / 2]
}

fn merge_cell(mut values: Vec<Rating>) -> (Option<Rating>, Provenance) {
    if values.is_empty() {
        return (None, Provenance::AllBlank);
    }
    values.sort_unstable();
    if values.iter().all(|v| *v == values[0]) {
        return (Some(values[0]), Provenance::Unanimous);
    }
    let nonzero: Vec<Rating> = values.iter().copied().filter(|v| v.value() != 0).collect();
    if nonzero.len() < values.len() {
        // mixed zeros and concrete ratings: the concrete ratings win
        (Some(lower_median(&nonzero)), Provenance::ZeroSuppressed)
    } else {
        (Some(lower_median(&values)), Provenance::Median)
    }
}

/// Consolidate with the median rule.
pub fn consolidate(
    responses: &[ResponseSet],
    model: &MaturityModel,
) -> Result<ConsolidatedResponse, ConsolidateError> {
    consolidate_with(ConsolidationRule::Median, responses, model)
}

/// Consolidate with an explicit rule. The result covers every statement id in
/// the model; statements nobody rated come out blank.
pub fn consolidate_with(
    rule: ConsolidationRule,
    responses: &[ResponseSet],
    model: &MaturityModel,
) -> Result<ConsolidatedResponse, ConsolidateError> {
    check_same_origin(responses, model)?;
    let first = &responses[0];

    let mut ratings = BTreeMap::new();
    let mut provenance = BTreeMap::new();
    for stmt in &model.statements {
        let (merged, how) = match rule {
            ConsolidationRule::Median => {
                let values: Vec<Rating> = responses
                    .iter()
                    .filter_map(|r| r.ratings.get(&stmt.id).copied().flatten())
                    .collect();
                merge_cell(values)
            }
            ConsolidationRule::First => match first.ratings.get(&stmt.id).copied().flatten() {
                Some(v) => (Some(v), Provenance::Unanimous),
                None => (None, Provenance::AllBlank),
            },
        };
        ratings.insert(stmt.id.clone(), merged);
        provenance.insert(stmt.id.clone(), how);
    }

    Ok(ConsolidatedResponse {
        model_id: first.model_id.clone(),
        organization: first.organization.clone(),
        rater_count: responses.len(),
        ratings,
        provenance,
    })
}

/// Per-level answer counts for one rater.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelCoverage {
    pub level_index: u32,
    pub answered: usize,
    pub blank: usize,
    /// Statements rated 0; a subset of `answered`.
    pub doesnt_apply: usize,
}

/// Coverage summary for one rater across the whole model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RaterCoverage {
    pub rater: String,
    pub levels: Vec<LevelCoverage>,
    pub answered: usize,
    pub blank: usize,
    pub doesnt_apply: usize,
}

/// Per-rater coverage: how many statements each rater answered, left blank,
/// or marked "Doesn't Apply", per level and in total.
pub fn coverage_report(
    responses: &[ResponseSet],
    model: &MaturityModel,
) -> Result<Vec<RaterCoverage>, ConsolidateError> {
    check_same_origin(responses, model)?;
    let mut report = Vec::with_capacity(responses.len());
    for resp in responses {
        let mut levels = Vec::with_capacity(model.levels.len());
        let mut indices: Vec<u32> = model.levels.iter().map(|l| l.index).collect();
        indices.sort_unstable();
        for index in indices {
            let mut cov = LevelCoverage {
                level_index: index,
                answered: 0,
                blank: 0,
                doesnt_apply: 0,
            };
            for stmt in model.statements_at(index) {
                match resp.ratings.get(&stmt.id).copied().flatten() {
                    Some(r) => {
                        cov.answered += 1;
                        if r.value() == 0 {
                            cov.doesnt_apply += 1;
                        }
                    }
                    None => cov.blank += 1,
                }
            }
            levels.push(cov);
        }
        report.push(RaterCoverage {
            rater: resp.rater.clone(),
            answered: levels.iter().map(|l| l.answered).sum(),
            blank: levels.iter().map(|l| l.blank).sum(),
            doesnt_apply: levels.iter().map(|l| l.doesnt_apply).sum(),
            levels,
        });
    }
    Ok(report)
}
