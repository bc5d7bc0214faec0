//! Machine-readable verification reports.

use std::fmt;

use serde::Serialize;

use crate::series::{Coefficient, Series};

/// Where two sides of an identity first disagree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub word: String,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of one identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub identity: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<Discrepancy>,
}

impl Check {
    pub fn pass(identity: impl Into<String>) -> Self {
        Check { identity: identity.into(), passed: true, note: None, first_failure: None }
    }

    pub fn fail(identity: impl Into<String>, failure: Discrepancy) -> Self {
        Check { identity: identity.into(), passed: false, note: None, first_failure: Some(failure) }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Compares two series coefficient by coefficient at their common
    /// truncation.
    pub fn series<C: Coefficient + fmt::Display>(
        identity: impl Into<String>,
        lhs: &Series<C>,
        rhs: &Series<C>,
    ) -> Self {
        match lhs.first_difference(rhs) {
            Ok(None) => Check::pass(identity),
            Ok(Some(w)) => Check::fail(
                identity,
                Discrepancy {
                    word: lhs.alphabet().render(&w),
                    lhs: lhs.coeff(&w).to_string(),
                    rhs: rhs.coeff(&w).to_string(),
                },
            ),
            Err(e) => {
                Check::fail(identity, Discrepancy { word: String::new(), lhs: e.to_string(), rhs: String::new() })
            }
        }
    }
}

/// A list of checks; passes when every check passes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(checks: Vec<Check>) -> Self {
        Report { checks }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "[{}] {}", if c.passed { "PASS" } else { "FAIL" }, c.identity)?;
            if let Some(n) = &c.note {
                write!(f, " ({n})")?;
            }
            if let Some(d) = &c.first_failure {
                write!(f, ": first difference at {}: {} vs {}", d.word, d.lhs, d.rhs)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
