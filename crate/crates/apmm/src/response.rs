//! Response-file parsing and emission.
//!
//! The format is hand-writable and diff-friendly: `#` starts a comment,
//! blank lines are skipped, `@model` / `@org` / `@rater` metadata lines come
//! first, and every data line is `<statement-id> <rating>` with rating 0-4 or
//! `-` for an explicit blank. Statements never mentioned are implicit blanks;
//! both kinds of blank score identically.
//!
//! Content problems never abort parsing. They surface as line-numbered
//! diagnostics and the caller decides whether the result is usable.

use std::fmt;

use crate::consolidate::ResponseSet;
use crate::model::MaturityModel;
use crate::rating::Rating;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

/// A line-anchored problem found while parsing a response file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub line: usize,
    pub severity: Severity,
    pub message: String,
}

impl ParseDiagnostic {
    fn error(line: usize, message: impl Into<String>) -> Self {
        ParseDiagnostic {
            line,
            severity: Severity::Error,
            message: message.into(),
        }
    }

    fn warning(line: usize, message: impl Into<String>) -> Self {
        ParseDiagnostic {
            line,
            severity: Severity::Warning,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "line {}: {}: {}", self.line, sev, self.message)
    }
}

/// True when any diagnostic is an error (the response is not usable).
pub fn has_errors(diagnostics: &[ParseDiagnostic]) -> bool {
    diagnostics.iter().any(|d| d.severity == Severity::Error)
}

/// Parse one rater's response file against a model. Always returns a
/// `ResponseSet`; it is only meaningful when no error diagnostics came back.
pub fn parse_response_file(
    text: &str,
    model: &MaturityModel,
) -> (ResponseSet, Vec<ParseDiagnostic>) {
    let mut resp = ResponseSet {
        model_id: String::new(),
        organization: String::new(),
        rater: String::new(),
        ratings: Default::default(),
    };
    let mut diagnostics = Vec::new();
    let mut saw_model = false;
    let mut saw_org = false;
    let mut saw_rater = false;
    let mut data_started = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }

        if let Some(rest) = line.strip_prefix('@') {
            if data_started {
                diagnostics.push(ParseDiagnostic::error(
                    line_no,
                    "metadata lines must precede all data lines",
                ));
                continue;
            }
            let (key, value) = match rest.split_once(char::is_whitespace) {
                Some((k, v)) => (k, v.trim()),
                None => (rest, ""),
            };
            match key {
                "model" => {
                    if saw_model {
                        diagnostics.push(ParseDiagnostic::error(line_no, "duplicate @model line"));
                    } else if value.is_empty() || value.split_whitespace().count() != 1 {
                        diagnostics.push(ParseDiagnostic::error(
                            line_no,
                            "@model takes exactly one id",
                        ));
                    } else {
                        saw_model = true;
                        resp.model_id = value.to_string();
                        if value != model.id {
                            diagnostics.push(ParseDiagnostic::error(
                                line_no,
                                format!(
                                    "response declares model `{value}` but model `{}` is loaded",
                                    model.id
                                ),
                            ));
                        }
                    }
                }
                "org" => {
                    if saw_org {
                        diagnostics.push(ParseDiagnostic::error(line_no, "duplicate @org line"));
                    } else {
                        saw_org = true;
                        resp.organization = value.to_string();
                    }
                }
                "rater" => {
                    if saw_rater {
                        diagnostics.push(ParseDiagnostic::error(line_no, "duplicate @rater line"));
                    } else {
                        saw_rater = true;
                        resp.rater = value.to_string();
                    }
                }
                other => {
                    diagnostics.push(ParseDiagnostic::error(
                        line_no,
                        format!("unknown metadata directive `@{other}`"),
                    ));
                }
            }
            continue;
        }

        data_started = true;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            diagnostics.push(ParseDiagnostic::error(
                line_no,
                "data lines are `<statement-id> <rating>`",
            ));
            continue;
        }
        let (id, value) = (tokens[0], tokens[1]);
        if model.statement(id).is_none() {
            diagnostics.push(ParseDiagnostic::error(
                line_no,
                format!("unknown statement id `{id}`"),
            ));
            continue;
        }
        let rating = match value {
            "-" => None,
            v => match v.parse::<u8>().ok().and_then(|n| Rating::new(n).ok()) {
                Some(r) => Some(r),
                None => {
                    diagnostics.push(ParseDiagnostic::error(
                        line_no,
                        format!("bad rating `{v}` (expected 0-4 or `-`)"),
                    ));
                    continue;
                }
            },
        };
        if resp.ratings.contains_key(id) {
            diagnostics.push(ParseDiagnostic::error(
                line_no,
                format!("duplicate rating for statement `{id}`"),
            ));
            continue;
        }
        resp.ratings.insert(id.to_string(), rating);
    }

    if !saw_model {
        diagnostics.push(ParseDiagnostic::warning(1, "no @model line"));
    }
    if !saw_org {
        diagnostics.push(ParseDiagnostic::warning(1, "no @org line"));
    }
    if !saw_rater {
        diagnostics.push(ParseDiagnostic::warning(1, "no @rater line"));
    }

    (resp, diagnostics)
}

/// Render a response back to its file form. Parsing the output recovers an
/// equal `ResponseSet`; emission is deterministic (ratings in id order).
pub fn emit_response_file(resp: &ResponseSet) -> String {
    let mut out = String::new();
    if !resp.model_id.is_empty() {
        out.push_str(&format!("@model {}\n", resp.model_id));
    }
    if !resp.organization.is_empty() {
        out.push_str(&format!("@org {}\n", resp.organization));
    }
    if !resp.rater.is_empty() {
        out.push_str(&format!("@rater {}\n", resp.rater));
    }
    if !out.is_empty() {
        out.push('\n');
    }
    for (id, rating) in &resp.ratings {
        match rating {
            Some(r) => out.push_str(&format!("{id} {r}\n")),
            None => out.push_str(&format!("{id} -\n")),
        }
    }
    out
}
