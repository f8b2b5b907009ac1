//! Emit the same assessment as a fixed-width text table and as key-sorted
//! JSON, then parse the JSON back and check it is lossless.
//!
//! ```bash
//! cargo run --example report_formats
//! ```

use apmm::{builtin_model, consolidate, maturity_level, ConsolidationRule};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = builtin_model();
    let (response, _) = apmm::parse_response_file(apmm::ORG_B_RESPONSES, model);
    let raters = vec![response.rater.clone()];
    let merged = consolidate(&[response], model)?;
    let outcome = maturity_level(&merged, model)?;
    let report = apmm::build_report(
        &outcome,
        model,
        &merged.organization,
        &raters,
        ConsolidationRule::Median,
    );

    println!("--- text ---");
    print!("{}", apmm::emit_report_text(&report));

    println!("--- json ---");
    let json = apmm::emit_report_json(&report);
    print!("{json}");

    let parsed = apmm::parse_report_json(&json)?;
    assert_eq!(parsed, report);
    println!("--- json parses back to an equal report ---");
    Ok(())
}
