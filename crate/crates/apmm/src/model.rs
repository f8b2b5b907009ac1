//! Maturity-model catalog: the model schema, the built-in architecture process
//! maturity model, and a line-oriented text format for custom models.
//!
//! A maturity model is plain data: ranked levels, key process activities, and
//! one agreement statement per questionnaire item. The scoring rules
//! (`pass_ratio`, gating activities) travel with the model rather than living
//! in the engine, so custom models can tune both.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

/// The built-in model document, embedded verbatim.
const BUILTIN_MODEL_DOC: &str = include_str!("../data/apmm.model");

/// Largest supported `pass-ratio` denominator (nine decimal digits).
const MAX_RATIO_SCALE: u32 = 9;

/// Dimension an activity belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dimension {
    ArchitectureDesign,
    ProductLineManagement,
    Documentation,
}

impl Dimension {
    /// Keyword used by the model text format.
    pub fn keyword(self) -> &'static str {
        match self {
            Dimension::ArchitectureDesign => "design",
            Dimension::ProductLineManagement => "management",
            Dimension::Documentation => "documentation",
        }
    }

    fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "design" => Some(Dimension::ArchitectureDesign),
            "management" => Some(Dimension::ProductLineManagement),
            "documentation" => Some(Dimension::Documentation),
            _ => None,
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// A key process activity. Gating activities must independently clear their
/// own pass threshold at every level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Activity {
    pub id: String,
    pub name: String,
    pub dimension: Dimension,
    pub gating: bool,
}

/// One ranked maturity level.
///
/// `statement_count` is derived from the statement list when a model is
/// assembled; it is cached here because every threshold computation needs it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Level {
    pub index: u32,
    pub name: String,
    pub statement_count: usize,
}

/// A single questionnaire statement. Ids are opaque strings to the engine;
/// the built-in model uses a `S.<level>.<activity#>.<k>` scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub id: String,
    pub level_index: u32,
    pub activity_id: String,
    pub text: String,
}

/// Exact pass ratio, kept as a decimal fraction so thresholds never suffer
/// binary rounding. Two ratios compare equal when the reduced fractions do.
#[derive(Debug, Clone, Copy)]
pub struct PassRatio {
    num: u64,
    den: u64,
}

impl PassRatio {
    /// The conventional 80% threshold.
    pub const DEFAULT: PassRatio = PassRatio { num: 8, den: 10 };

    /// Parse a decimal such as `0.8`, `.75` or `1`. Must lie in (0, 1].
    pub fn from_decimal(text: &str) -> Result<Self, String> {
        let (int_part, frac_part) = match text.split_once('.') {
            Some((i, f)) => (i, f),
            None => (text, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(format!("`{text}` is not a decimal number"));
        }
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return Err(format!("`{text}` is not a decimal number"));
        }
        if frac_part.len() > MAX_RATIO_SCALE as usize {
            return Err(format!(
                "`{text}` has more than {MAX_RATIO_SCALE} decimal places"
            ));
        }
        let scale = 10u64.pow(frac_part.len() as u32);
        let int: u64 = if int_part.is_empty() {
            0
        } else {
            int_part
                .parse()
                .map_err(|_| format!("`{text}` is out of range"))?
        };
        let frac: u64 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().unwrap()
        };
        let num = int
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(|| format!("`{text}` is out of range"))?;
        if num == 0 || num > scale {
            return Err(format!("pass ratio `{text}` must lie in (0, 1]"));
        }
        Ok(PassRatio { num, den: scale })
    }

    pub fn numerator(self) -> u64 {
        self.num
    }

    pub fn denominator(self) -> u64 {
        self.den
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialEq for PassRatio {
    fn eq(&self, other: &Self) -> bool {
        u128::from(self.num) * u128::from(other.den) == u128::from(other.num) * u128::from(self.den)
    }
}

impl Eq for PassRatio {}

impl fmt::Display for PassRatio {
    /// Renders the exact decimal without trailing zeros, e.g. `0.8` or `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = gcd(self.num, self.den);
        let (num, den) = (self.num / g, self.den / g);
        if den == 1 {
            return write!(f, "{num}");
        }
        write!(f, "{}.", num / den)?;
        let mut rem = num % den;
        while rem != 0 {
            rem *= 10;
            write!(f, "{}", rem / den)?;
            rem %= den;
        }
        Ok(())
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A complete maturity model: everything the scoring engine needs, as data.
#[derive(Debug, Clone, PartialEq)]
pub struct MaturityModel {
    pub id: String,
    pub name: String,
    pub pass_ratio: PassRatio,
    /// Declaration order; `maturity_level` evaluates levels by ascending index.
    pub levels: Vec<Level>,
    pub activities: Vec<Activity>,
    pub statements: Vec<Statement>,
}

impl MaturityModel {
    pub fn level(&self, index: u32) -> Option<&Level> {
        self.levels.iter().find(|l| l.index == index)
    }

    pub fn activity(&self, id: &str) -> Option<&Activity> {
        self.activities.iter().find(|a| a.id == id)
    }

    pub fn statement(&self, id: &str) -> Option<&Statement> {
        self.statements.iter().find(|s| s.id == id)
    }

    /// Ids of all gating activities, in declaration order.
    pub fn gating_activity_ids(&self) -> impl Iterator<Item = &str> {
        self.activities
            .iter()
            .filter(|a| a.gating)
            .map(|a| a.id.as_str())
    }

    pub fn statements_at(&self, level_index: u32) -> impl Iterator<Item = &Statement> {
        self.statements
            .iter()
            .filter(move |s| s.level_index == level_index)
    }

    pub fn total_statements(&self) -> usize {
        self.statements.len()
    }

    /// Recompute each level's cached statement count from the statement list.
    pub fn refresh_statement_counts(&mut self) {
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for s in &self.statements {
            *counts.entry(s.level_index).or_insert(0) += 1;
        }
        for level in &mut self.levels {
            level.statement_count = counts.get(&level.index).copied().unwrap_or(0);
        }
    }
}

/// Failure to load a model from its text form.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid model: {}", violations.join("; "))]
    Invalid { violations: Vec<String> },
}

/// The built-in architecture process maturity model: 5 levels, 6 activities,
/// 95 statements, pass ratio 0.8, variability management gating.
pub fn builtin_model() -> &'static MaturityModel {
    static MODEL: OnceLock<MaturityModel> = OnceLock::new();
    MODEL.get_or_init(|| load_model(BUILTIN_MODEL_DOC).expect("embedded model document is valid"))
}

/// Source text of the built-in model, for `model show` and round-trip tests.
pub fn builtin_model_doc() -> &'static str {
    BUILTIN_MODEL_DOC
}

/// Parse and validate a model-definition document.
///
/// The format is line oriented: `#` lines are comments, blank lines are
/// skipped, and each remaining line is one of `model`, `name`, `pass-ratio`,
/// `activity`, `level` or `statement`. Activities and levels must be declared
/// before any statement that references them.
pub fn load_model(text: &str) -> Result<MaturityModel, ModelError> {
    let model = parse_model(text)?;
    let violations = validate_model(&model);
    if violations.is_empty() {
        Ok(model)
    } else {
        Err(ModelError::Invalid { violations })
    }
}

fn parse_model(text: &str) -> Result<MaturityModel, ModelError> {
    let mut id: Option<String> = None;
    let mut name: Option<String> = None;
    let mut pass_ratio: Option<PassRatio> = None;
    let mut activities: Vec<Activity> = Vec::new();
    let mut levels: Vec<Level> = Vec::new();
    let mut statements: Vec<Statement> = Vec::new();
    // declaration line of each activity id / level index, for order checks
    let mut activity_lines: BTreeMap<String, usize> = BTreeMap::new();
    let mut level_lines: BTreeMap<u32, usize> = BTreeMap::new();
    let mut statement_lines: Vec<(usize, usize)> = Vec::new(); // (stmt idx, line no)

    let err = |line: usize, message: String| ModelError::Parse { line, message };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (keyword, rest) = match line.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (line, ""),
        };
        match keyword {
            "model" => {
                if id.is_some() {
                    return Err(err(line_no, "duplicate `model` header".into()));
                }
                if rest.is_empty() || rest.split_whitespace().count() != 1 {
                    return Err(err(line_no, "`model` takes exactly one id".into()));
                }
                id = Some(rest.to_string());
            }
            "name" => {
                if name.is_some() {
                    return Err(err(line_no, "duplicate `name` header".into()));
                }
                name = Some(rest.to_string());
            }
            "pass-ratio" => {
                if pass_ratio.is_some() {
                    return Err(err(line_no, "duplicate `pass-ratio` header".into()));
                }
                let ratio = PassRatio::from_decimal(rest)
                    .map_err(|e| err(line_no, format!("bad pass-ratio: {e}")))?;
                pass_ratio = Some(ratio);
            }
            "activity" => {
                let mut parts = rest.splitn(4, char::is_whitespace);
                let (aid, dim, gate, display) =
                    match (parts.next(), parts.next(), parts.next(), parts.next()) {
                        (Some(a), Some(d), Some(g), Some(n)) => (a, d, g, n.trim()),
                        _ => {
                            return Err(err(
                                line_no,
                                "`activity` needs id, dimension, gating flag and name".into(),
                            ))
                        }
                    };
                let dimension = Dimension::from_keyword(dim).ok_or_else(|| {
                    err(
                        line_no,
                        format!("unknown dimension `{dim}` (design, management or documentation)"),
                    )
                })?;
                let gating = match gate {
                    "gating" => true,
                    "non-gating" => false,
                    other => {
                        return Err(err(
                            line_no,
                            format!("expected `gating` or `non-gating`, found `{other}`"),
                        ))
                    }
                };
                activity_lines.entry(aid.to_string()).or_insert(line_no);
                activities.push(Activity {
                    id: aid.to_string(),
                    name: display.to_string(),
                    dimension,
                    gating,
                });
            }
            "level" => {
                let (index_tok, display) = rest
                    .split_once(char::is_whitespace)
                    .map(|(i, n)| (i, n.trim()))
                    .unwrap_or((rest, ""));
                let index: u32 = index_tok
                    .parse()
                    .map_err(|_| err(line_no, format!("bad level index `{index_tok}`")))?;
                if display.is_empty() {
                    return Err(err(line_no, "`level` needs an index and a name".into()));
                }
                level_lines.entry(index).or_insert(line_no);
                levels.push(Level {
                    index,
                    name: display.to_string(),
                    statement_count: 0,
                });
            }
            "statement" => {
                let mut parts = rest.splitn(4, char::is_whitespace);
                let (sid, level_tok, aid, stmt_text) =
                    match (parts.next(), parts.next(), parts.next(), parts.next()) {
                        (Some(s), Some(l), Some(a), Some(t)) => (s, l, a, t.trim()),
                        _ => {
                            return Err(err(
                                line_no,
                                "`statement` needs id, level index, activity id and text".into(),
                            ))
                        }
                    };
                let level_index: u32 = level_tok
                    .parse()
                    .map_err(|_| err(line_no, format!("bad level index `{level_tok}`")))?;
                statement_lines.push((statements.len(), line_no));
                statements.push(Statement {
                    id: sid.to_string(),
                    level_index,
                    activity_id: aid.to_string(),
                    text: stmt_text.to_string(),
                });
            }
            other => {
                return Err(err(line_no, format!("unknown directive `{other}`")));
            }
        }
    }

    let id = id.ok_or_else(|| ModelError::Parse {
        line: 1,
        message: "missing `model` header".into(),
    })?;

    // a statement may not precede the declaration of its level or activity
    for (stmt_idx, line_no) in statement_lines {
        let stmt = &statements[stmt_idx];
        if let Some(&decl) = activity_lines.get(&stmt.activity_id) {
            if decl > line_no {
                return Err(ModelError::Parse {
                    line: line_no,
                    message: format!(
                        "statement {} references activity `{}` before its declaration (line {decl})",
                        stmt.id, stmt.activity_id
                    ),
                });
            }
        }
        if let Some(&decl) = level_lines.get(&stmt.level_index) {
            if decl > line_no {
                return Err(ModelError::Parse {
                    line: line_no,
                    message: format!(
                        "statement {} references level {} before its declaration (line {decl})",
                        stmt.id, stmt.level_index
                    ),
                });
            }
        }
    }

    let mut model = MaturityModel {
        name: name.unwrap_or_else(|| id.clone()),
        id,
        pass_ratio: pass_ratio.unwrap_or(PassRatio::DEFAULT),
        levels,
        activities,
        statements,
    };
    model.refresh_statement_counts();
    Ok(model)
}

/// Check every structural invariant. Returns one human-readable violation per
/// problem; an empty list means the model is sound. Pure: equal models yield
/// equal violation lists.
pub fn validate_model(model: &MaturityModel) -> Vec<String> {
    let mut violations = Vec::new();

    let mut seen_activities = BTreeSet::new();
    for a in &model.activities {
        if !seen_activities.insert(a.id.as_str()) {
            violations.push(format!("duplicate activity id `{}`", a.id));
        }
    }

    let mut level_indices = BTreeSet::new();
    for l in &model.levels {
        if !level_indices.insert(l.index) {
            violations.push(format!("duplicate level index {}", l.index));
        }
    }
    if model.levels.is_empty() {
        violations.push("model declares no levels".into());
    } else {
        let expected: BTreeSet<u32> = (1..=model.levels.len() as u32).collect();
        if level_indices != expected {
            let got: Vec<String> = level_indices.iter().map(u32::to_string).collect();
            violations.push(format!(
                "non-contiguous level indices: expected 1..{}, found {{{}}}",
                model.levels.len(),
                got.join(", ")
            ));
        }
    }

    let mut seen_statements = BTreeSet::new();
    for s in &model.statements {
        if !seen_statements.insert(s.id.as_str()) {
            violations.push(format!("duplicate statement id `{}`", s.id));
        }
        if !level_indices.contains(&s.level_index) {
            violations.push(format!(
                "statement {} references unknown level {}",
                s.id, s.level_index
            ));
        }
        if !seen_activities.contains(s.activity_id.as_str()) {
            violations.push(format!(
                "statement {} references unknown activity `{}`",
                s.id, s.activity_id
            ));
        }
    }

    // every gating activity needs at least one statement per level, otherwise
    // its threshold could never be met there
    for gate in model.activities.iter().filter(|a| a.gating) {
        for level in &model.levels {
            let present = model
                .statements
                .iter()
                .any(|s| s.level_index == level.index && s.activity_id == gate.id);
            if !present {
                violations.push(format!(
                    "gating activity `{}` has no statements at level {}",
                    gate.id, level.index
                ));
            }
        }
    }

    violations
}

/// Render a model back into its text form. `load_model` on the output yields
/// an equal model; emission is deterministic.
pub fn serialize_model(model: &MaturityModel) -> String {
    let mut out = String::new();
    out.push_str(&format!("model {}\n", model.id));
    out.push_str(&format!("name {}\n", model.name));
    out.push_str(&format!("pass-ratio {}\n", model.pass_ratio));
    out.push('\n');
    for a in &model.activities {
        out.push_str(&format!(
            "activity {} {} {} {}\n",
            a.id,
            a.dimension.keyword(),
            if a.gating { "gating" } else { "non-gating" },
            a.name
        ));
    }
    out.push('\n');
    for l in &model.levels {
        out.push_str(&format!("level {} {}\n", l.index, l.name));
    }
    out.push('\n');
    for s in &model.statements {
        out.push_str(&format!(
            "statement {} {} {} {}\n",
            s.id, s.level_index, s.activity_id, s.text
        ));
    }
    out
}
