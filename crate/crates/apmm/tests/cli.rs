//! End-to-end tests of the `apmm` binary: subcommand behavior, exit codes,
//! stream separation (reports on stdout, diagnostics on stderr).

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn apmm<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_apmm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn data(file: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(file)
}

fn write_temp(dir: &tempfile::TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

/// A second rater for organization A, diverging mildly from the first.
fn second_rater() -> String {
    let mut text = std::fs::read_to_string(data("org_a.resp")).unwrap();
    text = text.replace("@rater consolidated", "@rater second");
    text = text.replace("S.3.1.1 4", "S.3.1.1 3");
    text = text.replace("S.1.2.3 1", "S.1.2.3 2");
    text
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&apmm(["--help"])), 0);
    assert_eq!(code(&apmm(["--version"])), 0);
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let out = apmm(["frobnicate"]);
    assert_eq!(code(&out), 1);
    assert!(!stderr(&out).is_empty());
}

#[test]
fn assess_requires_at_least_one_file() {
    let out = apmm(["assess"]);
    assert_eq!(code(&out), 1);
    assert!(
        stderr(&out).to_lowercase().contains("usage"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn scale_prints_rating_with_linguistic_expression() {
    let out = apmm(["scale", "79.9"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "3 (Largely Agree)\n");

    let out = apmm(["scale", "80"]);
    assert_eq!(stdout(&out), "4 (Completely Agree)\n");

    let out = apmm(["scale", "101"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).is_empty());
}

#[test]
fn demo_org_a_reports_level_four() {
    let out = apmm(["demo", "org-a"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("AML: 4 (Software Product Family)"), "{text}");
    assert!(stderr(&out).is_empty());
}

#[test]
fn demo_org_b_reports_level_two() {
    let out = apmm(["demo", "org-b"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("AML: 2 (Standardized Infrastructure)"));
}

#[test]
fn demo_json_is_byte_stable_across_runs() {
    let first = apmm(["demo", "org-a", "--format", "json"]);
    let second = apmm(["demo", "org-a", "--format", "json"]);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    assert!(stdout(&first).contains("\"aml\": 4"));
}

#[test]
fn assess_scores_bundled_file_and_writes_out() {
    let out = apmm(["assess".as_ref(), data("org_a.resp").as_os_str()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("AML: 4 (Software Product Family)"));

    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let out = apmm([
        "assess".as_ref(),
        data("org_a.resp").as_os_str(),
        "--format".as_ref(),
        "json".as_ref(),
        "--out".as_ref(),
        target.as_os_str(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).is_empty());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(report["aml"], 4);
    assert_eq!(report["organization"], "Organization A");
}

#[test]
fn assess_consolidates_multiple_raters() {
    let dir = tempfile::tempdir().unwrap();
    let second = write_temp(&dir, "second.resp", &second_rater());
    let out = apmm([
        "assess".as_ref(),
        data("org_a.resp").as_os_str(),
        second.as_os_str(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(
        text.contains("consolidated, second (consolidation: median)"),
        "{text}"
    );
    assert!(text.contains("AML: 4"), "{text}");

    let out = apmm([
        "assess".as_ref(),
        data("org_a.resp").as_os_str(),
        second.as_os_str(),
        "--consolidation".as_ref(),
        "first".as_ref(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("(consolidation: first)"));
}

#[test]
fn assess_rejects_mixed_organizations() {
    let dir = tempfile::tempdir().unwrap();
    let other = write_temp(
        &dir,
        "other.resp",
        "@model apmm\n@org Somewhere Else\n@rater r\nS.1.1.1 3\n",
    );
    let out = apmm([
        "assess".as_ref(),
        data("org_a.resp").as_os_str(),
        other.as_os_str(),
    ]);
    assert_eq!(code(&out), 3);
    assert!(
        stderr(&out).contains("different organizations"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn assess_surfaces_parse_diagnostics_with_lines() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_temp(
        &dir,
        "bad.resp",
        "@model apmm\n@org X\n@rater r\nS.9.9.9 3\nS.1.1.1 9\n",
    );
    let out = apmm(["assess".as_ref(), bad.as_os_str()]);
    assert_eq!(code(&out), 1);
    let err = stderr(&out);
    assert!(
        err.contains("line 4: error: unknown statement id `S.9.9.9`"),
        "{err}"
    );
    assert!(err.contains("line 5: error: bad rating `9`"), "{err}");
    assert!(stdout(&out).is_empty());
}

#[test]
fn assess_handles_blank_markers() {
    let dir = tempfile::tempdir().unwrap();
    let sparse = write_temp(
        &dir,
        "sparse.resp",
        "@model apmm\n@org X\n@rater r\nS.1.1.1 -\nS.1.1.2 4\n",
    );
    let out = apmm(["assess".as_ref(), sparse.as_os_str()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("AML: 0 (Not Rated)"));
}

#[test]
fn agreement_needs_two_raters() {
    let out = apmm(["agreement".as_ref(), data("org_a.resp").as_os_str()]);
    assert_eq!(code(&out), 3);
    assert!(
        stderr(&out).contains("fewer than 2 raters"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn agreement_reports_all_levels() {
    let dir = tempfile::tempdir().unwrap();
    let second = write_temp(&dir, "second.resp", &second_rater());
    let out = apmm([
        "agreement".as_ref(),
        data("org_a.resp").as_os_str(),
        second.as_os_str(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(
        text.contains("Level 1 (Independent Product Development): 15 items x 2 raters"),
        "{text}"
    );
    assert!(
        text.contains("Level 5 (Configurable Product Base)"),
        "{text}"
    );
    assert!(text.contains("Kendall W"), "{text}");
    assert!(text.contains("Fleiss kappa"), "{text}");
}

#[test]
fn agreement_single_level_json_has_schema_fields() {
    let dir = tempfile::tempdir().unwrap();
    let second = write_temp(&dir, "second.resp", &second_rater());
    let out = apmm([
        "agreement".as_ref(),
        data("org_a.resp").as_os_str(),
        second.as_os_str(),
        "--level".as_ref(),
        "3".as_ref(),
        "--format".as_ref(),
        "json".as_ref(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["level"], 3);
    assert_eq!(value["m_raters"], 2);
    assert_eq!(value["n_items"], 22);
    for key in [
        "category",
        "chi_square",
        "degenerate_reason",
        "df",
        "dropped_items",
        "fleiss_kappa",
        "kendall_w",
        "z",
    ] {
        assert!(value.get(key).is_some(), "missing {key}");
    }

    let all = apmm([
        "agreement".as_ref(),
        data("org_a.resp").as_os_str(),
        second.as_os_str(),
        "--format".as_ref(),
        "json".as_ref(),
    ]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&all)).unwrap();
    assert_eq!(value.as_array().map(Vec::len), Some(5));
}

#[test]
fn agreement_level_argument_validation() {
    let dir = tempfile::tempdir().unwrap();
    let second = write_temp(&dir, "second.resp", &second_rater());
    let out = apmm([
        "agreement".as_ref(),
        data("org_a.resp").as_os_str(),
        second.as_os_str(),
        "--level".as_ref(),
        "nine".as_ref(),
    ]);
    assert_eq!(code(&out), 1);

    let out = apmm([
        "agreement".as_ref(),
        data("org_a.resp").as_os_str(),
        second.as_os_str(),
        "--level".as_ref(),
        "9".as_ref(),
    ]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("unknown level"), "{}", stderr(&out));
}

#[test]
fn model_show_round_trips_through_validate() {
    let out = apmm(["model", "show"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("model apmm\n"), "{text}");
    assert_eq!(text.matches("\nstatement ").count(), 95);

    let dir = tempfile::tempdir().unwrap();
    let copy = write_temp(&dir, "copy.model", &text);
    let out = apmm(["model".as_ref(), "validate".as_ref(), copy.as_os_str()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("model `apmm` is valid: 5 levels, 6 activities, 95 statements"));
}

#[test]
fn model_validate_reports_violations_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let invalid = write_temp(
        &dir,
        "broken.model",
        "model broken\nname Broken\nactivity A design gating Alpha\nlevel 1 One\nlevel 3 Three\nstatement X 1 A text\nstatement Y 3 A text\n",
    );
    let out = apmm(["model".as_ref(), "validate".as_ref(), invalid.as_os_str()]);
    assert_eq!(code(&out), 2);
    assert!(
        stderr(&out).contains("non-contiguous level indices"),
        "{}",
        stderr(&out)
    );

    let garbled = write_temp(&dir, "garbled.model", "model m\nwhatever\n");
    let out = apmm(["model".as_ref(), "validate".as_ref(), garbled.as_os_str()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains(":2:"), "{}", stderr(&out));
}

#[test]
fn assess_with_custom_model() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_temp(
        &dir,
        "tiny.model",
        "model tiny\nname Tiny Model\npass-ratio 0.5\n\
         activity G design gating Gate\nactivity A design non-gating Alpha\n\
         level 1 First\nlevel 2 Second\n\
         statement g1 1 G gate one\nstatement a1 1 A alpha one\n\
         statement g2 2 G gate two\nstatement a2 2 A alpha two\n",
    );
    let resp = write_temp(
        &dir,
        "tiny.resp",
        "@model tiny\n@org T\n@rater r\ng1 4\na1 1\ng2 3\na2 3\n",
    );
    let out = apmm([
        "assess".as_ref(),
        resp.as_os_str(),
        "--model".as_ref(),
        model.as_os_str(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    // level 1: agreed 1 of 2 meets the 0.5 ratio and the gate passes
    assert!(text.contains("AML: 2 (Second)"), "{text}");

    // the same response against the built-in model is a model mismatch
    let out = apmm(["assess".as_ref(), resp.as_os_str()]);
    assert_eq!(code(&out), 1);
    assert!(
        stderr(&out).contains("declares model `tiny`"),
        "{}",
        stderr(&out)
    );
}
