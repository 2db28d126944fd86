//! Run reports and the bound-verdict CSV.

use std::fmt::Write as _;
use std::io::{self, Write};

use relconv::bounds::BoundVerdict;

use crate::config::{ScenarioConfig, Suite};

pub const CSV_HEADER_COMMENT: &str = "# relconv bound-verdicts v1";
pub const CSV_COLUMNS: &str = "scenario,lambda,grid,lhs,rhs,margin,eps_disc,pass";

/// How a record's value is compared with its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    /// Passes when `value ≤ tolerance`.
    Residual,
    /// Passes when `value + tolerance ≥ 0` at every resolution computed;
    /// `tolerance` is the discretization estimate.
    Margin,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub suite: Suite,
    pub name: String,
    pub measure: Measure,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub note: Option<String>,
}

impl Record {
    pub fn residual(suite: Suite, name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Record {
            suite,
            name: name.into(),
            measure: Measure::Residual,
            value,
            tolerance,
            pass: value <= tolerance,
            note: None,
        }
    }

    pub fn bound(suite: Suite, name: impl Into<String>, verdict: &BoundVerdict) -> Self {
        let note = format!(
            "lhs={:e} rhs={:e}{} min|Phi| on supp f={:e}{}",
            verdict.lhs,
            verdict.rhs,
            verdict
                .refined
                .map(|(l, r)| format!(" refined lhs={l:e} rhs={r:e}"))
                .unwrap_or_default(),
            verdict.min_phi_on_support,
            if verdict.truncation_warning {
                " WARNING: kernel exceeds half the rep window"
            } else {
                ""
            }
        );
        Record {
            suite,
            name: name.into(),
            measure: Measure::Margin,
            value: verdict.margin,
            tolerance: verdict.discretization_estimate,
            pass: verdict.pass,
            note: Some(note),
        }
    }

    /// A check that could not be computed.
    pub fn error(suite: Suite, name: impl Into<String>, message: impl Into<String>) -> Self {
        Record {
            suite,
            name: name.into(),
            measure: Measure::Residual,
            value: f64::NAN,
            tolerance: 0.0,
            pass: false,
            note: Some(format!("error: {}", message.into())),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Skipped {
    pub suite: Suite,
    pub reason: String,
}

/// One row of the bound-verdict CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub scenario: String,
    pub lambda: f64,
    pub grid: String,
    pub verdict: BoundVerdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub config: ScenarioConfig,
    pub records: Vec<Record>,
    pub skipped: Vec<Skipped>,
    pub csv_rows: Vec<CsvRow>,
    /// Not part of the rendered report, which must be reproducible.
    pub wall_clock: std::time::Duration,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    /// First failing suite in execution order.
    pub fn first_failure(&self) -> Option<Suite> {
        Suite::ALL
            .into_iter()
            .find(|s| self.records.iter().any(|r| r.suite == *s && !r.pass))
    }

    pub fn exit_code(&self) -> u8 {
        self.first_failure().map_or(0, |s| s.exit_code())
    }

    pub fn min_margin(&self) -> Option<f64> {
        self.csv_rows
            .iter()
            .map(|r| r.verdict.margin)
            .min_by(|a, b| a.total_cmp(b))
    }

    /// Deterministic text rendering.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "relconv {} report: {}", relconv::VERSION, self.config.name);
        let _ = writeln!(out, "--- config");
        out.push_str(&self.config.echo());
        let _ = writeln!(out, "--- checks");
        for suite in Suite::ALL {
            for r in self.records.iter().filter(|r| r.suite == suite) {
                let (label, tol_label) = match r.measure {
                    Measure::Residual => ("residual", "tol"),
                    Measure::Margin => ("margin", "eps_disc"),
                };
                let _ = write!(
                    out,
                    "[{}] {}: {}={:e} {}={:e} {}",
                    r.suite,
                    r.name,
                    label,
                    r.value,
                    tol_label,
                    r.tolerance,
                    if r.pass { "PASS" } else { "FAIL" }
                );
                if let Some(note) = &r.note {
                    let _ = write!(out, " ({note})");
                }
                out.push('\n');
            }
            for s in self.skipped.iter().filter(|s| s.suite == suite) {
                let _ = writeln!(out, "[{}] skipped: {}", s.suite, s.reason);
            }
        }
        if let Some(m) = self.min_margin() {
            let _ = writeln!(out, "min margin over {} bound verdicts: {:e}", self.csv_rows.len(), m);
        }
        let failed = self.records.iter().filter(|r| !r.pass).count();
        if self.records.is_empty() {
            let _ = writeln!(out, "overall: PASS (no checks)");
        } else if failed == 0 {
            let _ = writeln!(out, "overall: PASS ({} checks)", self.records.len());
        } else {
            let _ = writeln!(out, "overall: FAIL ({failed} of {} checks failed)", self.records.len());
        }
        out
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{CSV_HEADER_COMMENT}")?;
        writeln!(out, "{CSV_COLUMNS}")?;
        for row in &self.csv_rows {
            let v = &row.verdict;
            writeln!(
                out,
                "{},{:e},{},{:e},{:e},{:e},{:e},{}",
                row.scenario, row.lambda, row.grid, v.lhs, v.rhs, v.margin, v.discretization_estimate, v.pass
            )?;
        }
        Ok(())
    }

    pub fn csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii")
    }
}
