//! Residual records shared by the validators.

use std::fmt;

/// One named check: a measured residual against a tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// `pass` is `residual <= tolerance`; a NaN residual never passes.
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<28} residual {:>12.3e}  tol {:>9.1e}  {}",
            self.name,
            self.residual,
            self.tolerance,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

/// Outcome of a validator: every invariant it looked at, with its residual.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationVerdict {
    pub checks: Vec<Check>,
}

impl ValidationVerdict {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Names of the failing checks, in order.
    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect()
    }
}

impl fmt::Display for ValidationVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}
