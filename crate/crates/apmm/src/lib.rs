//! Questionnaire-driven maturity assessment of the software product line
//! architecture process.
//!
//! The crate evaluates how mature an organization's product line architecture
//! practice is: raters score agreement statements on a five-point performance
//! scale, the engine consolidates multiple raters, checks each maturity
//! level's pass thresholds (overall and for gating activities such as
//! variability management), and derives the architecture maturity level. It
//! also measures how much the raters agreed with each other, via the
//! tie-corrected Kendall coefficient of concordance and Fleiss' kappa.
//!
//! The built-in model ships five ranked levels, six key process activities
//! and 95 statements; custom models load from a small line-oriented text
//! format.
//!
//! # Quick start
//!
//! ```
//! use apmm::{builtin_model, consolidate, maturity_level, parse_response_file};
//!
//! let model = builtin_model();
//! let (response, diagnostics) = parse_response_file(apmm::ORG_A_RESPONSES, model);
//! assert!(!apmm::has_errors(&diagnostics));
//! let merged = consolidate(&[response], model)?;
//! let outcome = maturity_level(&merged, model)?;
//! assert_eq!(outcome.aml, 4);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```
//!
//! # Runnable examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --example assess_bundled      # score a bundled assessment end to end
//! cargo run --example multi_rater         # consolidate diverging raters, coverage report
//! cargo run --example agreement_analysis  # Kendall W / Fleiss kappa per level
//! cargo run --example custom_model        # define, validate and score a custom model
//! cargo run --example report_formats      # text and JSON report emission
//! ```
//!
//! The `apmm` binary wraps the same pipeline as a small CLI; see `apmm --help`.

pub mod agreement;
pub mod cli;
pub mod consolidate;
pub mod fixtures;
pub mod model;
pub mod rating;
pub mod report;
pub mod response;

pub use agreement::{
    analyze_level, build_matrix, emam_category, fleiss_kappa, kendall_w, AgreementError,
    AgreementResult, Concordance, EmamCategory, Kappa, RatingMatrix,
};
pub use consolidate::{
    consolidate, consolidate_with, coverage_report, ConsolidateError, ConsolidatedResponse,
    ConsolidationRule, Provenance, RaterCoverage, ResponseSet,
};
pub use fixtures::{org_a_response, org_b_response, ORG_A_RESPONSES, ORG_B_RESPONSES};
pub use model::{
    builtin_model, load_model, serialize_model, validate_model, Activity, Dimension, Level,
    MaturityModel, ModelError, PassRatio, Statement,
};
pub use rating::{
    count_agreed, evaluate_level, maturity_level, pass_threshold, scale_from_percentage,
    AssessmentOutcome, EngineError, LevelVerdict, Rating,
};
pub use report::{
    build_report, emit_agreement_json, emit_agreement_json_all, emit_agreement_text,
    emit_report_json, emit_report_text, parse_agreement_json, parse_report_json, AssessmentReport,
    GateRow, LevelRow, ModelRef,
};
pub use response::{
    emit_response_file, has_errors, parse_response_file, ParseDiagnostic, Severity,
};
