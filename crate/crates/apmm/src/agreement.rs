//! Inter-rater agreement per maturity level: tie-corrected Kendall
//! coefficient of concordance with its chi-square statistic, Fleiss' kappa
//! with its large-sample Z statistic, and the four-category benchmark scale
//! for interpreting kappa.
//!
//! Kendall's W treats the ratings as ordinal: each rater's column is
//! converted to mid-ranks and
//!
//! `W = 12·S / (m²(n³−n) − m·ΣT_j)`
//!
//! where `S` is the squared deviation of the item rank-sums from their mean
//! and `T_j = Σ(t³−t)` corrects for each rater's tie groups. The five-point
//! scale over many items guarantees heavy ties, so the uncorrected form would
//! systematically understate agreement. `χ² = m(n−1)W` with `n−1` degrees of
//! freedom.
//!
//! Fleiss' kappa treats the ratings as nominal categories:
//! `κ = (P̄ − P̄_e) / (1 − P̄_e)` with per-item observed agreement
//! `P_i = (Σ_j n_ij² − m) / (m(m−1))` and chance agreement `P̄_e = Σ_j p_j²`.
//! `Z = κ / SE₀` uses the large-sample null standard error.

use std::fmt;

use thiserror::Error;

use crate::consolidate::ResponseSet;
use crate::model::MaturityModel;
use crate::rating::Rating;

/// Number of rating categories (0 through 4).
const CATEGORIES: usize = 5;

/// A complete n-items × m-raters block of ratings for one level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatingMatrix {
    pub level_index: u32,
    /// Statement ids, one per row (n ≥ 2).
    pub items: Vec<String>,
    /// Rater names, one per column (m ≥ 2).
    pub raters: Vec<String>,
    /// Row-major cells: `cells[item][rater]`.
    pub cells: Vec<Vec<Rating>>,
    /// Statement ids dropped because at least one rater left them blank.
    pub dropped_items: Vec<String>,
}

impl RatingMatrix {
    pub fn n_items(&self) -> usize {
        self.items.len()
    }

    pub fn m_raters(&self) -> usize {
        self.raters.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AgreementError {
    #[error("fewer than 2 raters ({0} given)")]
    TooFewRaters(usize),
    #[error(
        "fewer than 2 complete items at level {level} ({kept} kept, {dropped} dropped as blank)"
    )]
    TooFewItems {
        level: u32,
        kept: usize,
        dropped: usize,
    },
    #[error("unknown level index {0}")]
    UnknownLevel(u32),
    #[error("responses mix models or organizations: {0}")]
    MixedResponses(String),
}

/// Assemble the per-level matrix for agreement analysis. Statements left
/// blank by any rater are dropped entirely (complete-case analysis) and
/// reported in `dropped_items`.
pub fn build_matrix(
    responses: &[ResponseSet],
    level_index: u32,
    model: &MaturityModel,
) -> Result<RatingMatrix, AgreementError> {
    if responses.len() < 2 {
        return Err(AgreementError::TooFewRaters(responses.len()));
    }
    let first = &responses[0];
    for r in responses {
        if r.model_id != first.model_id || r.organization != first.organization {
            return Err(AgreementError::MixedResponses(format!(
                "`{}`/`{}` vs `{}`/`{}`",
                first.model_id, first.organization, r.model_id, r.organization
            )));
        }
    }
    model
        .level(level_index)
        .ok_or(AgreementError::UnknownLevel(level_index))?;

    let mut items = Vec::new();
    let mut cells = Vec::new();
    let mut dropped = Vec::new();
    for stmt in model.statements_at(level_index) {
        let row: Vec<Option<Rating>> = responses
            .iter()
            .map(|r| r.ratings.get(&stmt.id).copied().flatten())
            .collect();
        if row.iter().all(Option::is_some) {
            items.push(stmt.id.clone());
            cells.push(row.into_iter().map(Option::unwrap).collect());
        } else {
            dropped.push(stmt.id.clone());
        }
    }

    if items.len() < 2 {
        return Err(AgreementError::TooFewItems {
            level: level_index,
            kept: items.len(),
            dropped: dropped.len(),
        });
    }

    Ok(RatingMatrix {
        level_index,
        items,
        raters: responses.iter().map(|r| r.rater.clone()).collect(),
        cells,
        dropped_items: dropped,
    })
}

/// Kendall concordance outcome.
#[derive(Debug, Clone, PartialEq)]
pub enum Concordance {
    Value {
        w: f64,
        chi_square: f64,
        df: usize,
    },
    /// The tie-corrected denominator vanished: every rater assigned one
    /// single rating to all items, so ranking carries no information.
    Degenerate {
        reason: String,
    },
}

/// Mid-ranks for one rater's column plus the tie correction term Σ(t³−t).
fn midranks(column: &[Rating]) -> (Vec<f64>, u64) {
    let n = column.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| column[i]);
    let mut ranks = vec![0.0; n];
    let mut tie_term = 0u64;
    let mut start = 0;
    while start < n {
        let mut end = start;
        while end + 1 < n && column[order[end + 1]] == column[order[start]] {
            end += 1;
        }
        let t = (end - start + 1) as u64;
        // positions are 1-based; tied values share the average position
        let mid = (start + end) as f64 / 2.0 + 1.0;
        for &idx in &order[start..=end] {
            ranks[idx] = mid;
        }
        tie_term += t * t * t - t;
        start = end + 1;
    }
    (ranks, tie_term)
}

/// Tie-corrected Kendall coefficient of concordance over the matrix.
pub fn kendall_w(matrix: &RatingMatrix) -> Concordance {
    let n = matrix.n_items() as u64;
    let m = matrix.m_raters() as u64;

    let mut rank_sums = vec![0.0; matrix.n_items()];
    let mut tie_total = 0u64;
    for rater in 0..matrix.m_raters() {
        let column: Vec<Rating> = matrix.cells.iter().map(|row| row[rater]).collect();
        let (ranks, ties) = midranks(&column);
        tie_total += ties;
        for (i, r) in ranks.iter().enumerate() {
            rank_sums[i] += r;
        }
    }

    // denominator in exact integer arithmetic so degeneracy is an equality test
    let denominator = m * m * (n * n * n - n) - m * tie_total;
    if denominator == 0 {
        return Concordance::Degenerate {
            reason: "every rater assigned a single rating to all items".into(),
        };
    }

    let mean = m as f64 * (n as f64 + 1.0) / 2.0;
    let s: f64 = rank_sums.iter().map(|r| (r - mean) * (r - mean)).sum();
    let w = 12.0 * s / denominator as f64;
    let chi_square = m as f64 * (n as f64 - 1.0) * w;
    Concordance::Value {
        w,
        chi_square,
        df: matrix.n_items() - 1,
    }
}

/// Fleiss kappa outcome.
#[derive(Debug, Clone, PartialEq)]
pub enum Kappa {
    Value {
        kappa: f64,
        z: f64,
    },
    /// Chance agreement is exactly 1: all raters used one single category
    /// for every item, so chance-corrected agreement is undefined.
    Degenerate {
        reason: String,
    },
}

/// Fleiss' kappa over the five rating categories, with the large-sample null
/// Z statistic.
pub fn fleiss_kappa(matrix: &RatingMatrix) -> Kappa {
    let n = matrix.n_items();
    let m = matrix.m_raters();

    // n_ij: raters assigning category j to item i; column sums give p_j
    let mut category_totals = [0u64; CATEGORIES];
    let mut observed_sum = 0.0;
    for row in &matrix.cells {
        let mut counts = [0u64; CATEGORIES];
        for r in row {
            counts[r.value() as usize] += 1;
        }
        for (j, c) in counts.iter().enumerate() {
            category_totals[j] += c;
        }
        let same_pairs: u64 = counts.iter().map(|&c| c * c).sum::<u64>() - m as u64;
        observed_sum += same_pairs as f64 / (m * (m - 1)) as f64;
    }
    let p_bar = observed_sum / n as f64;

    let total = (n * m) as f64;
    let p: Vec<f64> = category_totals.iter().map(|&c| c as f64 / total).collect();
    let p_e: f64 = p.iter().map(|x| x * x).sum();

    if category_totals.iter().any(|&c| c == (n * m) as u64) {
        return Kappa::Degenerate {
            reason: "all raters used a single rating category for every item".into(),
        };
    }

    let kappa = (p_bar - p_e) / (1.0 - p_e);

    let p_cubed: f64 = p.iter().map(|x| x * x * x).sum();
    let variance_core = p_e - (2.0 * m as f64 - 3.0) * p_e * p_e + 2.0 * (m as f64 - 2.0) * p_cubed;
    if variance_core <= 0.0 {
        return Kappa::Degenerate {
            reason: "null variance of kappa is zero".into(),
        };
    }
    let se0 = (2.0 / (n as f64 * m as f64 * (m as f64 - 1.0))).sqrt() * variance_core.sqrt()
        / (1.0 - p_e);
    Kappa::Value {
        kappa,
        z: kappa / se0,
    }
}

/// Four-category benchmark scale for interpreting kappa.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub enum EmamCategory {
    Poor,
    Moderate,
    Substantial,
    Excellent,
}

impl fmt::Display for EmamCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EmamCategory::Poor => "Poor",
            EmamCategory::Moderate => "Moderate",
            EmamCategory::Substantial => "Substantial",
            EmamCategory::Excellent => "Excellent",
        })
    }
}

/// Classify a kappa value: poor below 0.44, moderate from 0.44, substantial
/// from 0.62 through 0.78, excellent above 0.78.
pub fn emam_category(kappa: f64) -> EmamCategory {
    if kappa < 0.44 {
        EmamCategory::Poor
    } else if kappa < 0.62 {
        EmamCategory::Moderate
    } else if kappa <= 0.78 {
        EmamCategory::Substantial
    } else {
        EmamCategory::Excellent
    }
}

/// Significance threshold met by a test statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Significance {
    /// P < 0.01
    P01,
    /// P < 0.05
    P05,
}

impl fmt::Display for Significance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Significance::P01 => "P < 0.01",
            Significance::P05 => "P < 0.05",
        })
    }
}

/// Upper-tail chi-square critical values at 0.05 for df 1..=100.
const CHI2_P05: [f64; 100] = [
    3.8415, 5.9915, 7.8147, 9.4877, 11.0705, 12.5916, 14.0671, 15.5073, 16.9190, 18.3070, 19.6751,
    21.0261, 22.3620, 23.6848, 24.9958, 26.2962, 27.5871, 28.8693, 30.1435, 31.4104, 32.6706,
    33.9244, 35.1725, 36.4150, 37.6525, 38.8851, 40.1133, 41.3371, 42.5570, 43.7730, 44.9853,
    46.1943, 47.3999, 48.6024, 49.8018, 50.9985, 52.1923, 53.3835, 54.5722, 55.7585, 56.9424,
    58.1240, 59.3035, 60.4809, 61.6562, 62.8296, 64.0011, 65.1708, 66.3386, 67.5048, 68.6693,
    69.8322, 70.9935, 72.1532, 73.3115, 74.4683, 75.6237, 76.7778, 77.9305, 79.0819, 80.2321,
    81.3810, 82.5287, 83.6753, 84.8206, 85.9649, 87.1081, 88.2502, 89.3912, 90.5312, 91.6702,
    92.8083, 93.9453, 95.0815, 96.2167, 97.3510, 98.4844, 99.6169, 100.7486, 101.8795, 103.0095,
    104.1387, 105.2672, 106.3948, 107.5217, 108.6479, 109.7733, 110.8980, 112.0220, 113.1453,
    114.2679, 115.3898, 116.5110, 117.6317, 118.7516, 119.8709, 120.9896, 122.1077, 123.2252,
    124.3421,
];

/// Upper-tail chi-square critical values at 0.01 for df 1..=100.
const CHI2_P01: [f64; 100] = [
    6.6349, 9.2103, 11.3449, 13.2767, 15.0863, 16.8119, 18.4753, 20.0902, 21.6660, 23.2093,
    24.7250, 26.2170, 27.6882, 29.1412, 30.5779, 31.9999, 33.4087, 34.8053, 36.1909, 37.5662,
    38.9322, 40.2894, 41.6384, 42.9798, 44.3141, 45.6417, 46.9629, 48.2782, 49.5879, 50.8922,
    52.1914, 53.4858, 54.7755, 56.0609, 57.3421, 58.6192, 59.8925, 61.1621, 62.4281, 63.6907,
    64.9501, 66.2062, 67.4593, 68.7095, 69.9568, 71.2014, 72.4433, 73.6826, 74.9195, 76.1539,
    77.3860, 78.6158, 79.8433, 81.0688, 82.2921, 83.5134, 84.7328, 85.9502, 87.1657, 88.3794,
    89.5913, 90.8015, 92.0100, 93.2169, 94.4221, 95.6257, 96.8278, 98.0284, 99.2275, 100.4252,
    101.6214, 102.8163, 104.0098, 105.2020, 106.3929, 107.5825, 108.7709, 109.9581, 111.1440,
    112.3288, 113.5124, 114.6949, 115.8763, 117.0565, 118.2357, 119.4139, 120.5910, 121.7671,
    122.9422, 124.1163, 125.2895, 126.4617, 127.6329, 128.8032, 129.9727, 131.1412, 132.3089,
    133.4757, 134.6416, 135.8067,
];

/// One-sided standard normal critical values.
const Z_P05: f64 = 1.6449;
const Z_P01: f64 = 2.3263;

/// Chi-square critical value at the given significance, for df 1..=100.
pub fn chi_square_critical(df: usize, sig: Significance) -> Option<f64> {
    let table = match sig {
        Significance::P05 => &CHI2_P05,
        Significance::P01 => &CHI2_P01,
    };
    (1..=table.len()).contains(&df).then(|| table[df - 1])
}

/// Strongest significance threshold the chi-square statistic clears, if any.
/// The table covers df 1..=100; larger df yield no claim.
pub fn chi_square_significance(chi_square: f64, df: usize) -> Option<Significance> {
    if chi_square >= chi_square_critical(df, Significance::P01)? {
        Some(Significance::P01)
    } else if chi_square >= chi_square_critical(df, Significance::P05)? {
        Some(Significance::P05)
    } else {
        None
    }
}

/// Strongest one-sided significance threshold a Z statistic clears, if any.
pub fn z_significance(z: f64) -> Option<Significance> {
    if z >= Z_P01 {
        Some(Significance::P01)
    } else if z >= Z_P05 {
        Some(Significance::P05)
    } else {
        None
    }
}

/// Z critical value at the given one-sided significance.
pub fn z_critical(sig: Significance) -> f64 {
    match sig {
        Significance::P05 => Z_P05,
        Significance::P01 => Z_P01,
    }
}

/// All agreement statistics for one level, ready for reporting. Fields are
/// `None` where the corresponding statistic is degenerate; `degenerate_reason`
/// collects the explanations.
///
/// Field order matches the sorted-key wire layout of the JSON report.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AgreementResult {
    pub category: Option<EmamCategory>,
    #[serde(serialize_with = "crate::report::integral_as_int_opt")]
    pub chi_square: Option<f64>,
    pub degenerate_reason: Option<String>,
    pub df: usize,
    pub dropped_items: Vec<String>,
    #[serde(serialize_with = "crate::report::integral_as_int_opt")]
    pub fleiss_kappa: Option<f64>,
    #[serde(serialize_with = "crate::report::integral_as_int_opt")]
    pub kendall_w: Option<f64>,
    #[serde(rename = "level")]
    pub level_index: u32,
    pub m_raters: usize,
    pub n_items: usize,
    #[serde(serialize_with = "crate::report::integral_as_int_opt")]
    pub z: Option<f64>,
}

/// Build the matrix for one level and compute every statistic on it.
pub fn analyze_level(
    responses: &[ResponseSet],
    level_index: u32,
    model: &MaturityModel,
) -> Result<AgreementResult, AgreementError> {
    let matrix = build_matrix(responses, level_index, model)?;
    let mut reasons = Vec::new();

    let (w, chi_square) = match kendall_w(&matrix) {
        Concordance::Value { w, chi_square, .. } => (Some(w), Some(chi_square)),
        Concordance::Degenerate { reason } => {
            reasons.push(format!("kendall_w: {reason}"));
            (None, None)
        }
    };
    let (kappa, z) = match fleiss_kappa(&matrix) {
        Kappa::Value { kappa, z } => (Some(kappa), Some(z)),
        Kappa::Degenerate { reason } => {
            reasons.push(format!("fleiss_kappa: {reason}"));
            (None, None)
        }
    };

    Ok(AgreementResult {
        category: kappa.map(emam_category),
        chi_square,
        degenerate_reason: if reasons.is_empty() {
            None
        } else {
            Some(reasons.join("; "))
        },
        df: matrix.n_items() - 1,
        dropped_items: matrix.dropped_items.clone(),
        fleiss_kappa: kappa,
        kendall_w: w,
        level_index,
        m_raters: matrix.m_raters(),
        n_items: matrix.n_items(),
        z,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    pub(crate) fn matrix(level: u32, rows: &[&[u8]]) -> RatingMatrix {
        let m = rows[0].len();
        RatingMatrix {
            level_index: level,
            items: (0..rows.len()).map(|i| format!("item-{i}")).collect(),
            raters: (0..m).map(|j| format!("rater-{j}")).collect(),
            cells: rows
                .iter()
                .map(|row| row.iter().map(|&v| Rating::new(v).unwrap()).collect())
                .collect(),
            dropped_items: Vec::new(),
        }
    }

    #[test]
    fn perfect_concordance_without_ties() {
        // frozen: 3 raters x 4 items, two raters identical, third swaps items 1 and 2
        let m = matrix(1, &[&[1, 1, 2], &[2, 2, 1], &[3, 3, 3], &[4, 4, 4]]);
        match kendall_w(&m) {
            Concordance::Value { w, chi_square, df } => {
                assert_abs_diff_eq!(w, 41.0 / 45.0, epsilon = 1e-12);
                assert_abs_diff_eq!(chi_square, 8.2, epsilon = 1e-12);
                assert_eq!(df, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn identical_raters_with_ties_give_w_one() {
        let m = matrix(1, &[&[1, 1, 1], &[1, 1, 1], &[2, 2, 2]]);
        match kendall_w(&m) {
            Concordance::Value { w, chi_square, df } => {
                assert_abs_diff_eq!(w, 1.0, epsilon = 1e-12);
                assert_abs_diff_eq!(chi_square, 6.0, epsilon = 1e-12);
                assert_eq!(df, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn constant_raters_are_degenerate() {
        // each rater rates every item the same; columns differ between raters
        let m = matrix(1, &[&[2, 3], &[2, 3], &[2, 3]]);
        assert!(matches!(kendall_w(&m), Concordance::Degenerate { .. }));
    }

    #[test]
    fn mixed_tie_case_matches_frozen_value() {
        let m = matrix(1, &[&[0, 1, 0], &[2, 2, 3], &[2, 4, 3], &[4, 4, 1]]);
        match kendall_w(&m) {
            Concordance::Value { w, chi_square, df } => {
                assert_abs_diff_eq!(w, 19.0 / 27.0, epsilon = 1e-12);
                assert_abs_diff_eq!(chi_square, 19.0 / 3.0, epsilon = 1e-12);
                assert_eq!(df, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
        match fleiss_kappa(&m) {
            Kappa::Value { kappa, z } => {
                assert_abs_diff_eq!(kappa, 1.0 / 19.0, epsilon = 1e-12);
                assert_abs_diff_eq!(z, 0.351_726_229_056_329_44, epsilon = 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn kappa_reaches_one_on_perfect_agreement() {
        let m = matrix(1, &[&[3, 3], &[4, 4], &[3, 3]]);
        match fleiss_kappa(&m) {
            Kappa::Value { kappa, .. } => assert_abs_diff_eq!(kappa, 1.0, epsilon = 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn kappa_frozen_two_by_two() {
        // items (3,3) and (3,4): kappa is -1/3
        let m = matrix(1, &[&[3, 3], &[3, 4]]);
        match fleiss_kappa(&m) {
            Kappa::Value { kappa, z } => {
                assert_abs_diff_eq!(kappa, -1.0 / 3.0, epsilon = 1e-12);
                assert_abs_diff_eq!(z, -0.365_148_371_670_110_66, epsilon = 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn single_category_is_degenerate_for_kappa() {
        let m = matrix(1, &[&[3, 3], &[3, 3]]);
        assert!(matches!(fleiss_kappa(&m), Kappa::Degenerate { .. }));
        // constant-but-different raters degenerate W yet yield kappa = -1
        let m2 = matrix(1, &[&[2, 3], &[2, 3]]);
        match fleiss_kappa(&m2) {
            Kappa::Value { kappa, .. } => assert_abs_diff_eq!(kappa, -1.0, epsilon = 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn benchmark_scale_boundaries() {
        assert_eq!(emam_category(-0.2), EmamCategory::Poor);
        assert_eq!(emam_category(0.4399), EmamCategory::Poor);
        assert_eq!(emam_category(0.44), EmamCategory::Moderate);
        assert_eq!(emam_category(0.6199), EmamCategory::Moderate);
        assert_eq!(emam_category(0.62), EmamCategory::Substantial);
        assert_eq!(emam_category(0.69), EmamCategory::Substantial);
        assert_eq!(emam_category(0.78), EmamCategory::Substantial);
        assert_eq!(emam_category(0.7801), EmamCategory::Excellent);
        assert_eq!(emam_category(1.0), EmamCategory::Excellent);
    }

    #[test]
    fn significance_thresholds() {
        assert_eq!(chi_square_significance(58.20, 14), Some(Significance::P01));
        assert_eq!(chi_square_significance(24.0, 14), Some(Significance::P05));
        assert_eq!(chi_square_significance(10.0, 14), None);
        assert_eq!(chi_square_significance(200.0, 101), None);
        assert_eq!(z_significance(8.2), Some(Significance::P01));
        assert_eq!(z_significance(2.0), Some(Significance::P05));
        assert_eq!(z_significance(1.0), None);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn cells_strategy() -> impl Strategy<Value = Vec<Vec<u8>>> {
            (2usize..=6, 2usize..=4).prop_flat_map(|(n, m)| {
                proptest::collection::vec(proptest::collection::vec(0u8..=4, m), n)
            })
        }

        fn from_cells(cells: &[Vec<u8>]) -> RatingMatrix {
            matrix(1, &cells.iter().map(Vec::as_slice).collect::<Vec<_>>())
        }

        fn w_of(m: &RatingMatrix) -> Option<f64> {
            match kendall_w(m) {
                Concordance::Value { w, .. } => Some(w),
                Concordance::Degenerate { .. } => None,
            }
        }

        fn kappa_of(m: &RatingMatrix) -> Option<f64> {
            match fleiss_kappa(m) {
                Kappa::Value { kappa, .. } => Some(kappa),
                Kappa::Degenerate { .. } => None,
            }
        }

        fn close(a: Option<f64>, b: Option<f64>) -> bool {
            match (a, b) {
                (Some(x), Some(y)) => (x - y).abs() < 1e-9,
                (None, None) => true,
                _ => false,
            }
        }

        proptest! {
            #[test]
            fn invariant_under_row_and_column_permutation(
                cells in cells_strategy(),
                row_seed: u64,
                col_seed: u64,
            ) {
                let base = from_cells(&cells);
                let mut permuted = cells.clone();
                // simple deterministic shuffles driven by the seeds
                let n = permuted.len();
                for i in (1..n).rev() {
                    permuted.swap(i, (row_seed as usize).wrapping_mul(i + 7) % (i + 1));
                }
                let m = permuted[0].len();
                let mut col_order: Vec<usize> = (0..m).collect();
                for i in (1..m).rev() {
                    col_order.swap(i, (col_seed as usize).wrapping_mul(i + 3) % (i + 1));
                }
                let permuted: Vec<Vec<u8>> = permuted
                    .into_iter()
                    .map(|row| col_order.iter().map(|&j| row[j]).collect())
                    .collect();
                let shuffled = from_cells(&permuted);
                prop_assert!(close(w_of(&base), w_of(&shuffled)));
                prop_assert!(close(kappa_of(&base), kappa_of(&shuffled)));
            }

            #[test]
            fn kappa_is_nominal_w_is_ordinal(
                cells in cells_strategy(),
                perm_seed: u64,
                used in proptest::sample::subsequence(vec![0u8, 1, 2, 3, 4], 2..=3),
            ) {
                // kappa is unchanged by any relabeling of the five categories
                let mut relabel: Vec<u8> = (0..5).collect();
                for i in (1..5usize).rev() {
                    relabel.swap(i, (perm_seed as usize).wrapping_mul(i + 11) % (i + 1));
                }
                let relabeled: Vec<Vec<u8>> = cells
                    .iter()
                    .map(|row| row.iter().map(|&v| relabel[v as usize]).collect())
                    .collect();
                prop_assert!(close(
                    kappa_of(&from_cells(&cells)),
                    kappa_of(&from_cells(&relabeled)),
                ));

                // W is unchanged by strictly increasing relabelings: squash the
                // cells into `used.len()` categories first, then stretch them
                // monotonically onto the `used` values
                let k = used.len() as u8;
                let squashed: Vec<Vec<u8>> = cells
                    .iter()
                    .map(|row| row.iter().map(|&v| v % k).collect())
                    .collect();
                let stretched: Vec<Vec<u8>> = squashed
                    .iter()
                    .map(|row| row.iter().map(|&v| used[v as usize]).collect())
                    .collect();
                prop_assert!(close(
                    w_of(&from_cells(&squashed)),
                    w_of(&from_cells(&stretched)),
                ));
            }

            #[test]
            fn w_stays_in_unit_interval_and_ties_to_chi_square(cells in cells_strategy()) {
                let m = from_cells(&cells);
                if let Concordance::Value { w, chi_square, df } = kendall_w(&m) {
                    prop_assert!((-1e-12..=1.0 + 1e-12).contains(&w), "W = {w}");
                    prop_assert_eq!(df, m.n_items() - 1);
                    let back = chi_square / (m.m_raters() as f64 * (m.n_items() - 1) as f64);
                    prop_assert!((back - w).abs() <= 1e-12 * w.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn build_matrix_drops_blank_statements() {
        use crate::model::builtin_model;
        use std::collections::BTreeMap;

        let model = builtin_model();
        let full = |name: &str| ResponseSet {
            model_id: "apmm".into(),
            organization: "org".into(),
            rater: name.into(),
            ratings: model
                .statements
                .iter()
                .map(|s| (s.id.clone(), Some(Rating::LARGELY_AGREE)))
                .collect(),
        };
        let a = full("a");
        let mut b = full("b");
        b.ratings.insert("S.1.2.1".into(), None);

        let m = build_matrix(&[a.clone(), b.clone()], 1, model).unwrap();
        assert_eq!(m.n_items(), 14);
        assert_eq!(m.m_raters(), 2);
        assert_eq!(m.dropped_items, vec!["S.1.2.1".to_string()]);

        let no_blanks = build_matrix(&[a.clone(), full("c"), full("d")], 1, model).unwrap();
        assert_eq!(no_blanks.n_items(), 15);
        assert_eq!(no_blanks.m_raters(), 3);
        assert!(no_blanks.dropped_items.is_empty());

        assert_eq!(
            build_matrix(std::slice::from_ref(&a), 1, model),
            Err(AgreementError::TooFewRaters(1))
        );
        assert_eq!(
            build_matrix(&[a.clone(), b.clone()], 9, model),
            Err(AgreementError::UnknownLevel(9))
        );

        let empty = ResponseSet {
            ratings: BTreeMap::new(),
            ..full("e")
        };
        assert!(matches!(
            build_matrix(&[empty.clone(), full("f")], 1, model),
            Err(AgreementError::TooFewItems {
                level: 1,
                kept: 0,
                dropped: 15
            })
        ));
    }
}
