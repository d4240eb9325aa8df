//! Structured pass/fail records with witnesses.

use serde::{Deserialize, Serialize};

use crate::algebra::{format_rational, Rational};

/// Where and how a check failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Sample point, as exact rationals, when the failure is pointwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<String>>,
    pub detail: String,
}

impl Witness {
    pub fn new(detail: impl Into<String>) -> Self {
        Witness { point: None, detail: detail.into() }
    }

    pub fn at(point: &[Rational], detail: impl Into<String>) -> Self {
        Witness { point: Some(point.iter().map(format_rational).collect()), detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub check: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl CheckOutcome {
    pub fn pass(check: impl Into<String>) -> Self {
        CheckOutcome { check: check.into(), passed: true, witness: None }
    }

    pub fn fail(check: impl Into<String>, witness: Witness) -> Self {
        CheckOutcome { check: check.into(), passed: false, witness: Some(witness) }
    }

    pub fn from_result(check: impl Into<String>, r: std::result::Result<(), Witness>) -> Self {
        match r {
            Ok(()) => Self::pass(check),
            Err(w) => Self::fail(check, w),
        }
    }
}

/// A list of outcomes plus informational notices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub outcomes: Vec<CheckOutcome>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notices: Vec<String>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, o: CheckOutcome) {
        self.outcomes.push(o);
    }

    pub fn notice(&mut self, s: impl Into<String>) {
        let s = s.into();
        log::info!("{s}");
        self.notices.push(s);
    }

    pub fn extend(&mut self, other: Report) {
        self.outcomes.extend(other.outcomes);
        self.notices.extend(other.notices);
    }

    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.outcomes.iter().find(|o| !o.passed)
    }

    pub fn get(&self, check: &str) -> Option<&CheckOutcome> {
        self.outcomes.iter().find(|o| o.check == check)
    }

    /// Outcomes sorted by check identifier, for deterministic output.
    pub fn sorted(mut self) -> Self {
        self.outcomes.sort_by(|a, b| a.check.cmp(&b.check));
        self
    }
}

impl std::fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:<28} {}", self.check, if self.passed { "pass" } else { "FAIL" })?;
        if let Some(w) = &self.witness {
            write!(f, "  {}", w.detail)?;
            if let Some(p) = &w.point {
                write!(f, " at ({})", p.join(", "))?;
            }
        }
        Ok(())
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for o in &self.outcomes {
            writeln!(f, "{o}")?;
        }
        for n in &self.notices {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}
