//! Consolidate three raters who disagree, inspect how each statement was
//! merged, and print the per-rater coverage summary.
//!
//! ```bash
//! cargo run --example multi_rater
//! ```

use apmm::{builtin_model, consolidate, coverage_report, Provenance, Rating, ResponseSet};

/// Build one rater's response from `(statement id, rating)` pairs, where
/// `None` is an explicit blank.
fn rater(name: &str, ratings: &[(&str, Option<u8>)]) -> ResponseSet {
    ResponseSet {
        model_id: "apmm".into(),
        organization: "Example Org".into(),
        rater: name.into(),
        ratings: ratings
            .iter()
            .map(|(id, v)| (id.to_string(), v.map(|n| Rating::new(n).unwrap())))
            .collect(),
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = builtin_model();

    // three raters covering the first few statements of level 1, with one
    // split vote, one "Doesn't Apply" conflict and one blank
    let raters = [
        rater(
            "architect",
            &[
                ("S.1.1.1", Some(3)),
                ("S.1.1.2", Some(0)),
                ("S.1.2.1", Some(2)),
                ("S.1.2.2", None),
            ],
        ),
        rater(
            "lead-dev",
            &[
                ("S.1.1.1", Some(4)),
                ("S.1.1.2", Some(2)),
                ("S.1.2.1", Some(2)),
                ("S.1.2.2", Some(1)),
            ],
        ),
        rater(
            "manager",
            &[
                ("S.1.1.1", Some(1)),
                ("S.1.1.2", Some(0)),
                ("S.1.2.1", Some(3)),
            ],
        ),
    ];

    let merged = consolidate(&raters, model)?;
    println!(
        "consolidated {} raters for {}\n",
        merged.rater_count, merged.organization
    );

    for id in ["S.1.1.1", "S.1.1.2", "S.1.2.1", "S.1.2.2"] {
        let votes: Vec<String> = raters
            .iter()
            .map(|r| match r.ratings.get(id).copied().flatten() {
                Some(v) => v.to_string(),
                None => "-".into(),
            })
            .collect();
        let merged_text = match merged.ratings[id] {
            Some(v) => format!("{v} ({})", v.linguistic()),
            None => "blank".into(),
        };
        println!(
            "{id}: votes [{}] -> {merged_text}  [{}]",
            votes.join(", "),
            merged.provenance[id]
        );
    }

    let zero_suppressed = merged
        .provenance
        .values()
        .filter(|p| **p == Provenance::ZeroSuppressed)
        .count();
    println!("\nstatements where a concrete rating overrode \"Doesn't Apply\": {zero_suppressed}");

    println!("\ncoverage per rater:");
    for row in coverage_report(&raters, model)? {
        println!(
            "  {:<10} answered {:>2}, blank {:>2}, doesn't-apply {:>2}",
            row.rater, row.answered, row.blank, row.doesnt_apply
        );
        for level in &row.levels {
            if level.answered > 0 {
                println!(
                    "    level {}: answered {}, blank {}",
                    level.level_index, level.answered, level.blank
                );
            }
        }
    }
    Ok(())
}
