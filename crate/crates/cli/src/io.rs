//! Distribution file parsing and result rendering.
//!
//! Accepted input:
//!
//! * a JSON array of numbers, `[0.6, 0.3, 0.1]`
//! * a JSON object with a `values` array and an optional `kind`
//!   (`"probability"` or `"possibility"`); other fields are ignored, so a
//!   result document written by this tool can be fed back in
//! * one number per line (blank lines ignored)

use std::fmt;
use std::str::FromStr;

use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Probability,
    Possibility,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Probability => "probability",
            Kind::Possibility => "possibility",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "probability" => Ok(Kind::Probability),
            "possibility" => Ok(Kind::Possibility),
            other => Err(format!("unknown distribution kind `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionFile {
    pub kind: Option<Kind>,
    pub values: Vec<f64>,
}

impl DistributionFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let trimmed = text.trim();
        let file = if trimmed.starts_with('[') {
            let values: Vec<f64> = serde_json::from_str(trimmed)
                .map_err(|e| CliError::Parse(format!("invalid numeric array: {e}")))?;
            Self { kind: None, values }
        } else if trimmed.starts_with('{') {
            Self::from_object(trimmed)?
        } else {
            let values = trimmed
                .lines()
                .map(str::trim)
                .filter(|line| !line.is_empty())
                .enumerate()
                .map(|(i, line)| {
                    line.parse::<f64>()
                        .map_err(|_| CliError::Parse(format!("line {}: `{line}` is not a number", i + 1)))
                })
                .collect::<Result<_, _>>()?;
            Self { kind: None, values }
        };
        if file.values.is_empty() {
            return Err(CliError::Parse("no values found".into()));
        }
        if let Some(i) = file.values.iter().position(|v| !v.is_finite()) {
            return Err(CliError::Parse(format!("value {} is not finite", i + 1)));
        }
        Ok(file)
    }

    fn from_object(text: &str) -> Result<Self, CliError> {
        let object: Value =
            serde_json::from_str(text).map_err(|e| CliError::Parse(format!("invalid document: {e}")))?;
        let values = object
            .get("values")
            .ok_or_else(|| CliError::Parse("document has no `values` field".into()))?;
        let values: Vec<f64> = serde_json::from_value(values.clone())
            .map_err(|e| CliError::Parse(format!("`values` must be an array of numbers: {e}")))?;
        let kind = match object.get("kind") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(s.parse().map_err(CliError::Parse)?),
            Some(other) => return Err(CliError::Parse(format!("`kind` must be a string, got {other}"))),
        };
        Ok(Self { kind, values })
    }

    /// Guesses the kind from the numbers alone: unit total means probability,
    /// unit maximum means possibility. `None` when both or neither apply.
    pub fn detect_kind(&self) -> Option<Kind> {
        let sum: f64 = self.values.iter().sum();
        let max = self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let probability = (sum - 1.0).abs() <= possibility::dist::SUM_TOLERANCE;
        let possibility = (max - 1.0).abs() <= possibility::dist::NORMALIZATION_TOLERANCE;
        match (probability, possibility) {
            (true, false) => Some(Kind::Probability),
            (false, true) => Some(Kind::Possibility),
            _ => None,
        }
    }

    /// Checks that the file can be read as `expected`. An explicit kind (the
    /// `override_kind` flag, else the file's own field) must match; otherwise
    /// auto-detection must not contradict it.
    pub fn require_kind(&self, expected: Kind, override_kind: Option<Kind>) -> Result<(), CliError> {
        match override_kind.or(self.kind) {
            Some(kind) if kind == expected => Ok(()),
            Some(kind) => Err(CliError::Usage(format!(
                "input is marked as a {kind} distribution, but this command needs a {expected} distribution"
            ))),
            None => match self.detect_kind() {
                Some(kind) if kind != expected => Err(CliError::Usage(format!(
                    "input looks like a {kind} distribution, but this command needs a {expected} distribution \
                     (pass --kind {expected} to override)"
                ))),
                _ => Ok(()),
            },
        }
    }
}

/// Renders a CSV table (comma separated, header row, LF line endings).
pub fn csv<H: AsRef<str>>(header: &[H], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.iter().map(AsRef::as_ref).collect::<Vec<_>>().join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
