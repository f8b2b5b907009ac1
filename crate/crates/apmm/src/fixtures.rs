//! Bundled sample assessments for the `demo` subcommand and for tests: two
//! organizations scored against the built-in model, each as a single
//! consolidated response.
//!
//! Organization A (an automotive embedded-systems manufacturer) rates at
//! level 4 while failing levels 1 and 2 outright, which exercises the
//! non-contiguity of the maturity formula. Organization B (a distributed
//! software firm) rates at level 2 and includes one "Doesn't Apply" answer.

use crate::consolidate::ResponseSet;
use crate::model::builtin_model;
use crate::response::{has_errors, parse_response_file};

/// Response file for organization A.
pub const ORG_A_RESPONSES: &str = include_str!("../data/org_a.resp");

/// Response file for organization B.
pub const ORG_B_RESPONSES: &str = include_str!("../data/org_b.resp");

fn parse_fixture(text: &str) -> ResponseSet {
    let (resp, diags) = parse_response_file(text, builtin_model());
    debug_assert!(!has_errors(&diags), "bundled fixture is clean: {diags:?}");
    resp
}

/// Organization A's response, parsed against the built-in model.
pub fn org_a_response() -> ResponseSet {
    parse_fixture(ORG_A_RESPONSES)
}

/// Organization B's response, parsed against the built-in model.
pub fn org_b_response() -> ResponseSet {
    parse_fixture(ORG_B_RESPONSES)
}
