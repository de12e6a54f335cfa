//! Outcome records shared by the verification routines.

use std::fmt;

use serde::Serialize;

/// Outcome of a randomized or exhaustive property check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub property: String,
    pub seed: u64,
    pub trials: usize,
    pub evaluations: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
    pub passed: bool,
}

impl PropertyReport {
    pub fn new(property: &str, seed: u64, trials: usize, outcomes: Vec<Option<String>>) -> Self {
        let failures = outcomes.iter().filter(|o| o.is_some()).count();
        PropertyReport {
            property: property.to_string(),
            seed,
            trials,
            evaluations: outcomes.len(),
            failures,
            first_failure: outcomes.into_iter().flatten().next(),
            passed: failures == 0,
        }
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} ({} evaluations, {} failures, seed {})",
            self.property,
            if self.passed { "holds" } else { "FAILS" },
            self.evaluations,
            self.failures,
            self.seed
        )?;
        if let Some(first) = &self.first_failure {
            write!(f, "; first failure: {first}")?;
        }
        Ok(())
    }
}

