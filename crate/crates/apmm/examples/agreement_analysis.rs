//! Inter-rater agreement across every maturity level: build the per-level
//! rating matrices for three raters and print Kendall's W, Fleiss' kappa and
//! the benchmark category.
//!
//! ```bash
//! cargo run --example agreement_analysis
//! ```

use apmm::{analyze_level, builtin_model, emit_agreement_text, Rating};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = builtin_model();

    // start from the bundled response and derive two more raters with small,
    // deterministic disagreements: one slightly stricter, one slightly looser
    let (base, diagnostics) = apmm::parse_response_file(apmm::ORG_A_RESPONSES, model);
    assert!(!apmm::has_errors(&diagnostics));

    let mut strict = base.clone();
    strict.rater = "strict".into();
    let mut loose = base.clone();
    loose.rater = "loose".into();
    for (i, statement) in model.statements.iter().enumerate() {
        let value = base.ratings[&statement.id].unwrap().value();
        if i % 4 == 0 && value > 1 {
            strict
                .ratings
                .insert(statement.id.clone(), Some(Rating::new(value - 1)?));
        }
        if i % 5 == 0 && value < 4 {
            loose
                .ratings
                .insert(statement.id.clone(), Some(Rating::new(value + 1)?));
        }
    }
    // the loose rater skipped one statement entirely
    loose.ratings.insert("S.2.6.3".into(), None);

    let raters = [base, strict, loose];
    let mut results = Vec::new();
    for level in &model.levels {
        results.push(analyze_level(&raters, level.index, model)?);
    }

    print!("{}", emit_agreement_text(&results, model));

    for result in &results {
        if let (Some(kappa), Some(category)) = (result.fleiss_kappa, result.category) {
            println!(
                "level {}: kappa {kappa:.3} is {category:?} agreement",
                result.level_index
            );
        }
    }
    Ok(())
}
