//! Assessment and agreement reports: a fixed-width text table mirroring the
//! rating summary, and a deterministic key-sorted JSON form that parses back
//! to an equal report.

use serde::{Deserialize, Serialize, Serializer};

use crate::agreement::{
    chi_square_critical, chi_square_significance, z_critical, z_significance, AgreementResult,
    Significance,
};
use crate::consolidate::ConsolidationRule;
use crate::model::MaturityModel;
use crate::rating::AssessmentOutcome;

/// Serialize `Some(x)` as a JSON integer when `x` is integral, so reports
/// print `1` rather than `1.0`.
pub(crate) fn integral_as_int_opt<S: Serializer>(
    value: &Option<f64>,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    match value {
        Some(x) if x.is_finite() && x.fract() == 0.0 && x.abs() < 9.0e15 => {
            serializer.serialize_i64(*x as i64)
        }
        Some(x) => serializer.serialize_f64(*x),
        None => serializer.serialize_none(),
    }
}

/// Identity of the model a report was scored against.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelRef {
    pub id: String,
    pub name: String,
}

/// One gating activity's agreed count and threshold at one level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateRow {
    pub activity: String,
    pub agreed: usize,
    pub threshold: usize,
}

/// One level's verdict row. Fields are declared in sorted key order so the
/// JSON form is key-sorted without post-processing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRow {
    pub agreed: usize,
    pub blanks: usize,
    pub gates: Vec<GateRow>,
    pub index: u32,
    pub name: String,
    pub passed: bool,
    pub threshold: usize,
    pub total: usize,
}

/// A complete assessment report for one organization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssessmentReport {
    pub aml: u32,
    pub aml_name: String,
    pub consolidation: String,
    pub levels: Vec<LevelRow>,
    pub model: ModelRef,
    pub notes: Vec<String>,
    pub organization: String,
    pub raters: Vec<String>,
}

/// Assemble the report for an assessment outcome.
pub fn build_report(
    outcome: &AssessmentOutcome,
    model: &MaturityModel,
    organization: &str,
    raters: &[String],
    rule: ConsolidationRule,
) -> AssessmentReport {
    let levels: Vec<LevelRow> = outcome
        .verdicts
        .iter()
        .map(|v| LevelRow {
            agreed: v.agreed,
            blanks: v.blanks,
            gates: v
                .gating_agreed
                .iter()
                .map(|(gate, &agreed)| GateRow {
                    activity: gate.clone(),
                    agreed,
                    threshold: v.gating_threshold[gate],
                })
                .collect(),
            index: v.level_index,
            name: model
                .level(v.level_index)
                .map(|l| l.name.clone())
                .unwrap_or_default(),
            passed: v.passed,
            threshold: v.pass_threshold,
            total: v.total_statements,
        })
        .collect();

    let mut notes = Vec::new();
    let skipped: Vec<String> = outcome
        .verdicts
        .iter()
        .filter(|v| !v.passed && v.level_index < outcome.aml)
        .map(|v| v.level_index.to_string())
        .collect();
    if !skipped.is_empty() {
        notes.push(format!(
            "levels below the achieved maturity level did not pass: {}",
            skipped.join(", ")
        ));
    }
    let blanks: usize = outcome.verdicts.iter().map(|v| v.blanks).sum();
    if blanks > 0 {
        notes.push(format!(
            "{blanks} statement(s) left blank; blanks never count as agreed"
        ));
    }

    AssessmentReport {
        aml: outcome.aml,
        aml_name: outcome.aml_name.clone(),
        consolidation: rule.to_string(),
        levels,
        model: ModelRef {
            id: model.id.clone(),
            name: model.name.clone(),
        },
        notes,
        organization: organization.to_string(),
        raters: raters.to_vec(),
    }
}

fn pad(text: &str, width: usize) -> String {
    format!("{text:<width$}")
}

fn pad_num(value: impl ToString, width: usize) -> String {
    let s = value.to_string();
    format!("{s:>width$}")
}

/// Render the fixed-width text table: one row per level with columns
/// `Level | N | NA | PT | <gates…> | Pass`, then the `AML:` line and notes.
pub fn emit_report_text(report: &AssessmentReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("Assessment: {}\n", report.organization));
    out.push_str(&format!(
        "Model: {} ({})\n",
        report.model.name, report.model.id
    ));
    out.push_str(&format!(
        "Raters: {} (consolidation: {})\n\n",
        if report.raters.is_empty() {
            "(none)".to_string()
        } else {
            report.raters.join(", ")
        },
        report.consolidation
    ));

    // column set: Level, N, NA, PT, then NA_<g>/PT_<g> per gate, then Pass
    let gate_ids: Vec<&str> = report
        .levels
        .first()
        .map(|l| l.gates.iter().map(|g| g.activity.as_str()).collect())
        .unwrap_or_default();

    let name_width = report
        .levels
        .iter()
        .map(|l| l.name.len())
        .chain(std::iter::once("Level".len()))
        .max()
        .unwrap_or(5);
    let num_width = |header: &str, values: &mut dyn Iterator<Item = usize>| {
        values
            .map(|v| v.to_string().len())
            .chain(std::iter::once(header.len()))
            .max()
            .unwrap()
    };
    let w_n = num_width("N", &mut report.levels.iter().map(|l| l.total));
    let w_na = num_width("NA", &mut report.levels.iter().map(|l| l.agreed));
    let w_pt = num_width("PT", &mut report.levels.iter().map(|l| l.threshold));
    let gate_widths: Vec<(String, String, usize, usize)> = gate_ids
        .iter()
        .enumerate()
        .map(|(gi, gid)| {
            let na_h = format!("NA_{gid}");
            let pt_h = format!("PT_{gid}");
            let w1 = num_width(&na_h, &mut report.levels.iter().map(|l| l.gates[gi].agreed));
            let w2 = num_width(
                &pt_h,
                &mut report.levels.iter().map(|l| l.gates[gi].threshold),
            );
            (na_h, pt_h, w1, w2)
        })
        .collect();

    let mut header = vec![
        pad("Level", name_width),
        pad_num("N", w_n),
        pad_num("NA", w_na),
        pad_num("PT", w_pt),
    ];
    for (na_h, pt_h, w1, w2) in &gate_widths {
        header.push(pad_num(na_h, *w1));
        header.push(pad_num(pt_h, *w2));
    }
    header.push("Pass".to_string());
    let header = header.join(" | ");
    out.push_str(&header);
    out.push('\n');
    out.push_str(&"-".repeat(header.len()));
    out.push('\n');

    for level in &report.levels {
        let mut row = vec![
            pad(&level.name, name_width),
            pad_num(level.total, w_n),
            pad_num(level.agreed, w_na),
            pad_num(level.threshold, w_pt),
        ];
        for (gi, (_, _, w1, w2)) in gate_widths.iter().enumerate() {
            row.push(pad_num(level.gates[gi].agreed, *w1));
            row.push(pad_num(level.gates[gi].threshold, *w2));
        }
        row.push(if level.passed { "PASS" } else { "FAIL" }.to_string());
        out.push_str(&row.join(" | "));
        out.push('\n');
    }

    out.push_str(&format!("AML: {} ({})\n", report.aml, report.aml_name));
    if !report.notes.is_empty() {
        out.push_str("\nNotes:\n");
        for note in &report.notes {
            out.push_str(&format!("  - {note}\n"));
        }
    }
    out
}

/// Deterministic key-sorted JSON, newline-terminated.
pub fn emit_report_json(report: &AssessmentReport) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    text
}

pub fn parse_report_json(text: &str) -> Result<AssessmentReport, serde_json::Error> {
    serde_json::from_str(text)
}

/// One agreement result as deterministic key-sorted JSON, newline-terminated.
pub fn emit_agreement_json(result: &AgreementResult) -> String {
    let mut text = serde_json::to_string_pretty(result).expect("result serializes");
    text.push('\n');
    text
}

/// Several agreement results (one per level) as a JSON array.
pub fn emit_agreement_json_all(results: &[AgreementResult]) -> String {
    let mut text = serde_json::to_string_pretty(results).expect("results serialize");
    text.push('\n');
    text
}

pub fn parse_agreement_json(text: &str) -> Result<AgreementResult, serde_json::Error> {
    serde_json::from_str(text)
}

fn chi_square_line(chi_square: f64, df: usize) -> String {
    match chi_square_significance(chi_square, df) {
        Some(sig) => format!(
            "chi^2({df}) = {chi_square:.2} >= {:.2}  [{sig}]",
            chi_square_critical(df, sig).unwrap()
        ),
        None => match chi_square_critical(df, Significance::P05) {
            Some(crit) => format!("chi^2({df}) = {chi_square:.2} < {crit:.2}  [n.s.]"),
            None => format!("chi^2({df}) = {chi_square:.2}  [df > 100, no tabled critical value]"),
        },
    }
}

fn z_line(z: f64) -> String {
    match z_significance(z) {
        Some(sig) => format!("Z = {z:.2} >= {:.2}  [{sig}]", z_critical(sig)),
        None => format!("Z = {z:.2} < {:.2}  [n.s.]", z_critical(Significance::P05)),
    }
}

/// Human-readable agreement summary, one block per analyzed level.
pub fn emit_agreement_text(results: &[AgreementResult], model: &MaturityModel) -> String {
    let mut out = String::new();
    for result in results {
        let name = model
            .level(result.level_index)
            .map(|l| l.name.as_str())
            .unwrap_or("?");
        out.push_str(&format!(
            "Level {} ({}): {} items x {} raters\n",
            result.level_index, name, result.n_items, result.m_raters
        ));
        if !result.dropped_items.is_empty() {
            out.push_str(&format!(
                "  dropped blank items: {}\n",
                result.dropped_items.join(", ")
            ));
        }
        match (result.kendall_w, result.chi_square) {
            (Some(w), Some(chi)) => {
                out.push_str(&format!(
                    "  Kendall W    = {w:.4}   {}\n",
                    chi_square_line(chi, result.df)
                ));
            }
            _ => out.push_str("  Kendall W    = (degenerate)\n"),
        }
        match (result.fleiss_kappa, result.z) {
            (Some(kappa), Some(z)) => {
                let category = result
                    .category
                    .map(|c| c.to_string())
                    .unwrap_or_else(|| "?".into());
                out.push_str(&format!(
                    "  Fleiss kappa = {kappa:.4} ({category})   {}\n",
                    z_line(z)
                ));
            }
            _ => out.push_str("  Fleiss kappa = (degenerate)\n"),
        }
        if let Some(reason) = &result.degenerate_reason {
            out.push_str(&format!("  note: {reason}\n"));
        }
        out.push('\n');
    }
    out
}
