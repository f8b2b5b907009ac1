//! Score a bundled assessment end to end: parse the response file,
//! consolidate, evaluate every level and print the text report.
//!
//! ```bash
//! cargo run --example assess_bundled
//! ```

use apmm::{builtin_model, consolidate, maturity_level, ConsolidationRule};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = builtin_model();

    let (response, diagnostics) = apmm::parse_response_file(apmm::ORG_A_RESPONSES, model);
    for diag in &diagnostics {
        eprintln!("{diag}");
    }
    if apmm::has_errors(&diagnostics) {
        return Err("bundled response did not parse".into());
    }

    let raters = vec![response.rater.clone()];
    let merged = consolidate(&[response], model)?;
    let outcome = maturity_level(&merged, model)?;

    println!(
        "{} is rated at level {} ({})\n",
        merged.organization, outcome.aml, outcome.aml_name
    );
    let report = apmm::build_report(
        &outcome,
        model,
        &merged.organization,
        &raters,
        ConsolidationRule::Median,
    );
    print!("{}", apmm::emit_report_text(&report));
    Ok(())
}
