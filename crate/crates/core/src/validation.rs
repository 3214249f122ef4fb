use serde::Serialize;

/// One violated identity or axiom, with the basis tuple that witnesses it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: String,
    pub witness: Vec<String>,
    pub detail: String,
}

/// Violations are data: an empty report means every check passed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, check: &str, witness: Vec<String>, detail: impl Into<String>) {
        self.violations.push(Violation {
            check: check.to_string(),
            witness,
            detail: detail.into(),
        });
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    pub fn fails(&self, check: &str) -> bool {
        self.violations.iter().any(|v| v.check == check)
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        let mut names: Vec<&str> = self.violations.iter().map(|v| v.check.as_str()).collect();
        names.dedup();
        names
    }
}
