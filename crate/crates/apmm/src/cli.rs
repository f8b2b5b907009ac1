//! Command-line front end: argument parsing, subcommand dispatch and exit
//! codes. All scoring goes through the library; this module only wires I/O.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 model-validation failure,
//! 3 assessment-input failure (for example fewer than two raters for the
//! agreement analysis).

use std::borrow::Cow;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use crate::agreement::{analyze_level, AgreementError, AgreementResult};
use crate::consolidate::{consolidate_with, ConsolidationRule, ResponseSet};
use crate::fixtures;
use crate::model::{builtin_model, load_model, MaturityModel, ModelError};
use crate::rating::{maturity_level, scale_from_percentage};
use crate::report::{
    build_report, emit_agreement_json, emit_agreement_json_all, emit_agreement_text,
    emit_report_json, emit_report_text,
};
use crate::response::{has_errors, parse_response_file};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MODEL_INVALID: i32 = 2;
pub const EXIT_BAD_INPUT: i32 = 3;

#[derive(Parser)]
#[command(
    name = "apmm",
    version,
    about = "Maturity assessment of the software product line architecture process"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    Median,
    First,
}

impl From<RuleArg> for ConsolidationRule {
    fn from(value: RuleArg) -> Self {
        match value {
            RuleArg::Median => ConsolidationRule::Median,
            RuleArg::First => ConsolidationRule::First,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DemoTarget {
    OrgA,
    OrgB,
}

#[derive(Subcommand)]
enum Command {
    /// Consolidate response files and print the assessment report
    Assess {
        /// Response files, one per rater
        #[arg(required = true)]
        responses: Vec<PathBuf>,
        /// Model definition file (defaults to the built-in model)
        #[arg(long)]
        model: Option<PathBuf>,
        /// How to merge multiple raters
        #[arg(long, value_enum, default_value_t = RuleArg::Median)]
        consolidation: RuleArg,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inter-rater agreement statistics per maturity level
    Agreement {
        /// Response files, one per rater (at least two raters)
        #[arg(required = true)]
        responses: Vec<PathBuf>,
        /// Model definition file (defaults to the built-in model)
        #[arg(long)]
        model: Option<PathBuf>,
        /// Level index, or `all`
        #[arg(long, default_value = "all")]
        level: String,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Map an agreement percentage (0-100) onto the performance scale
    Scale { pct: f64 },
    /// Inspect or validate a maturity model
    Model {
        #[command(subcommand)]
        action: ModelAction,
    },
    /// Score a bundled sample assessment
    Demo {
        #[arg(value_enum)]
        target: DemoTarget,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
}

#[derive(Subcommand)]
enum ModelAction {
    /// Print the model definition (built-in model when no file is given)
    Show { file: Option<PathBuf> },
    /// Check a model definition file against every structural invariant
    Validate { file: Option<PathBuf> },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

/// Run the CLI on the given argument list and return the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            eprintln!("apmm: {}", failure.message);
            failure.code
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Assess {
            responses,
            model,
            consolidation,
            format,
            out,
        } => cmd_assess(
            &responses,
            model.as_deref(),
            consolidation.into(),
            format,
            out.as_deref(),
        ),
        Command::Agreement {
            responses,
            model,
            level,
            format,
        } => cmd_agreement(&responses, model.as_deref(), &level, format),
        Command::Scale { pct } => cmd_scale(pct),
        Command::Model { action } => match action {
            ModelAction::Show { file } => cmd_model_show(file.as_deref()),
            ModelAction::Validate { file } => cmd_model_validate(file.as_deref()),
        },
        Command::Demo { target, format } => cmd_demo(target, format),
    }
}

fn load_model_arg(path: Option<&Path>) -> Result<Cow<'static, MaturityModel>, Failure> {
    let Some(path) = path else {
        return Ok(Cow::Borrowed(builtin_model()));
    };
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_USAGE, format!("cannot read {}: {e}", path.display())))?;
    match load_model(&text) {
        Ok(model) => Ok(Cow::Owned(model)),
        Err(ModelError::Parse { line, message }) => Err(Failure::new(
            EXIT_USAGE,
            format!("{}:{line}: {message}", path.display()),
        )),
        Err(ModelError::Invalid { violations }) => Err(Failure::new(
            EXIT_MODEL_INVALID,
            format!(
                "{} is not a valid model:\n  {}",
                path.display(),
                violations.join("\n  ")
            ),
        )),
    }
}

fn read_responses(paths: &[PathBuf], model: &MaturityModel) -> Result<Vec<ResponseSet>, Failure> {
    let mut responses = Vec::with_capacity(paths.len());
    let mut error_count = 0usize;
    for path in paths {
        let text = fs::read_to_string(path).map_err(|e| {
            Failure::new(EXIT_USAGE, format!("cannot read {}: {e}", path.display()))
        })?;
        let (resp, diagnostics) = parse_response_file(&text, model);
        for diag in &diagnostics {
            eprintln!("{}:{diag}", path.display());
        }
        if has_errors(&diagnostics) {
            error_count += 1;
        }
        responses.push(resp);
    }
    if error_count > 0 {
        return Err(Failure::new(
            EXIT_USAGE,
            format!("{error_count} response file(s) had errors"),
        ));
    }
    Ok(responses)
}

fn write_out(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::new(EXIT_USAGE, format!("cannot write {}: {e}", path.display()))),
    }
}

fn cmd_assess(
    paths: &[PathBuf],
    model_path: Option<&Path>,
    rule: ConsolidationRule,
    format: FormatArg,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let model = load_model_arg(model_path)?;
    let responses = read_responses(paths, &model)?;
    let merged = consolidate_with(rule, &responses, &model)
        .map_err(|e| Failure::new(EXIT_BAD_INPUT, e.to_string()))?;
    let outcome =
        maturity_level(&merged, &model).map_err(|e| Failure::new(EXIT_BAD_INPUT, e.to_string()))?;
    let raters: Vec<String> = responses.iter().map(|r| r.rater.clone()).collect();
    let report = build_report(&outcome, &model, &merged.organization, &raters, rule);
    let rendered = match format {
        FormatArg::Text => emit_report_text(&report),
        FormatArg::Json => emit_report_json(&report),
    };
    write_out(&rendered, out)
}

fn cmd_agreement(
    paths: &[PathBuf],
    model_path: Option<&Path>,
    level: &str,
    format: FormatArg,
) -> Result<(), Failure> {
    let model = load_model_arg(model_path)?;
    let responses = read_responses(paths, &model)?;

    let single: Option<u32> = if level == "all" {
        None
    } else {
        Some(level.parse().map_err(|_| {
            Failure::new(
                EXIT_USAGE,
                format!("--level takes a level index or `all`, not `{level}`"),
            )
        })?)
    };

    let into_failure = |e: AgreementError| {
        let code = match e {
            AgreementError::MixedResponses(_)
            | AgreementError::TooFewRaters(_)
            | AgreementError::TooFewItems { .. }
            | AgreementError::UnknownLevel(_) => EXIT_BAD_INPUT,
        };
        Failure::new(code, e.to_string())
    };

    let results: Vec<AgreementResult> = match single {
        Some(index) => vec![analyze_level(&responses, index, &model).map_err(into_failure)?],
        None => {
            let mut all = Vec::new();
            let mut indices: Vec<u32> = model.levels.iter().map(|l| l.index).collect();
            indices.sort_unstable();
            for index in indices {
                match analyze_level(&responses, index, &model) {
                    Ok(result) => all.push(result),
                    // a level can drop to fewer than 2 complete items; skip it
                    Err(e @ AgreementError::TooFewItems { .. }) => {
                        eprintln!("apmm: skipping level {index}: {e}");
                    }
                    Err(e) => return Err(into_failure(e)),
                }
            }
            if all.is_empty() {
                return Err(Failure::new(
                    EXIT_BAD_INPUT,
                    "no level had enough complete items for agreement analysis",
                ));
            }
            all
        }
    };

    let rendered = match (format, single) {
        (FormatArg::Text, _) => emit_agreement_text(&results, &model),
        (FormatArg::Json, Some(_)) => emit_agreement_json(&results[0]),
        (FormatArg::Json, None) => emit_agreement_json_all(&results),
    };
    write_out(&rendered, None)
}

fn cmd_scale(pct: f64) -> Result<(), Failure> {
    let rating = scale_from_percentage(pct).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
    println!("{} ({})", rating.value(), rating.linguistic());
    Ok(())
}

fn cmd_model_show(file: Option<&Path>) -> Result<(), Failure> {
    let model = load_model_arg(file)?;
    print!("{}", crate::model::serialize_model(&model));
    Ok(())
}

fn cmd_model_validate(file: Option<&Path>) -> Result<(), Failure> {
    // load_model_arg already maps parse errors to exit 1 and violations to
    // exit 2 with the full list
    let model = load_model_arg(file)?;
    println!(
        "model `{}` is valid: {} levels, {} activities, {} statements",
        model.id,
        model.levels.len(),
        model.activities.len(),
        model.total_statements()
    );
    Ok(())
}

fn cmd_demo(target: DemoTarget, format: FormatArg) -> Result<(), Failure> {
    let model = builtin_model();
    let response = match target {
        DemoTarget::OrgA => fixtures::org_a_response(),
        DemoTarget::OrgB => fixtures::org_b_response(),
    };
    let rule = ConsolidationRule::Median;
    let merged = consolidate_with(rule, std::slice::from_ref(&response), model)
        .map_err(|e| Failure::new(EXIT_BAD_INPUT, e.to_string()))?;
    let outcome =
        maturity_level(&merged, model).map_err(|e| Failure::new(EXIT_BAD_INPUT, e.to_string()))?;
    let report = build_report(
        &outcome,
        model,
        &merged.organization,
        std::slice::from_ref(&response.rater),
        rule,
    );
    let rendered = match format {
        FormatArg::Text => emit_report_text(&report),
        FormatArg::Json => emit_report_json(&report),
    };
    write_out(&rendered, None)
}
