//! Define a small custom maturity model in the text format, validate it,
//! and score a response against it. The pass ratio and the gating activity
//! are model data, so smaller rubrics work without touching the engine.
//!
//! ```bash
//! cargo run --example custom_model
//! ```

use apmm::{consolidate, load_model, maturity_level, validate_model};

const MODEL_DOC: &str = "\
# A three-level rubric for build-pipeline maturity.
model pipeline
name Build Pipeline Maturity
pass-ratio 0.75

activity CI design gating Continuous Integration
activity TST design non-gating Testing Practice
activity DOC documentation non-gating Documentation

level 1 Scripted
level 2 Reproducible
level 3 Continuous

statement ci-1 1 CI Builds run from a single entry point script.
statement tst-1 1 TST Some automated tests exist.
statement doc-1 1 DOC Build steps are written down somewhere.

statement ci-2 2 CI Every build runs in a clean environment.
statement ci-3 2 CI Build results are archived per commit.
statement tst-2 2 TST Tests gate every merge.
statement doc-2 2 DOC The pipeline configuration is reviewed like code.

statement ci-4 3 CI Every commit deploys to a staging environment.
statement tst-3 3 TST Flaky tests are tracked and quarantined automatically.
statement doc-3 3 DOC Runbooks are generated from the pipeline itself.
";

const RESPONSE: &str = "\
@model pipeline
@org Widget Co
@rater build-lead
ci-1 4
tst-1 3
doc-1 3
ci-2 4
ci-3 3
tst-2 4
doc-2 2
ci-4 2
tst-3 1
doc-3 -
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = load_model(MODEL_DOC)?;
    assert!(validate_model(&model).is_empty());
    println!(
        "loaded `{}` ({}): {} levels, {} statements, pass ratio {}",
        model.id,
        model.name,
        model.levels.len(),
        model.total_statements(),
        model.pass_ratio
    );

    let (response, diagnostics) = apmm::parse_response_file(RESPONSE, &model);
    for diag in &diagnostics {
        eprintln!("{diag}");
    }
    if apmm::has_errors(&diagnostics) {
        return Err("response did not parse".into());
    }

    let merged = consolidate(&[response], &model)?;
    let outcome = maturity_level(&merged, &model)?;
    for verdict in &outcome.verdicts {
        println!(
            "level {}: agreed {}/{} (threshold {}), gate CI {}/{} -> {}",
            verdict.level_index,
            verdict.agreed,
            verdict.total_statements,
            verdict.pass_threshold,
            verdict.gating_agreed["CI"],
            verdict.gating_threshold["CI"],
            if verdict.passed { "pass" } else { "fail" }
        );
    }
    println!("maturity level: {} ({})", outcome.aml, outcome.aml_name);
    Ok(())
}
