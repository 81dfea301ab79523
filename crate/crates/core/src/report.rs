//! Check records, residual records and their CSV/text renderings.

use std::io::{self, Write};

/// Whether a record participates in the exit status or is informational.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    /// Compared against a threshold; failures flip the exit status.
    Assert,
    /// Emitted for inspection only; never affects the exit status.
    LogOnly,
}

/// One verification record: a named value, the relation tag it exercises,
/// and an optional threshold.
#[derive(Debug, Clone)]
pub struct CheckRecord {
    pub name: String,
    /// Relation tag, e.g. `Eq.(20)-conservation`.
    pub tag: String,
    pub value: f64,
    pub threshold: Option<f64>,
    pub kind: CheckKind,
    /// Extra context (configuration, seed, regime flags).
    pub note: String,
}

impl CheckRecord {
    pub fn assert_leq(name: &str, tag: &str, value: f64, threshold: f64) -> Self {
        Self {
            name: name.to_string(),
            tag: tag.to_string(),
            value,
            threshold: Some(threshold),
            kind: CheckKind::Assert,
            note: String::new(),
        }
    }

    /// Assert that `value` lies in `[lo, hi]`; stored as the distance to the
    /// interval (0 when inside) against a zero threshold, with the raw value
    /// in the note.
    pub fn assert_in_range(name: &str, tag: &str, value: f64, lo: f64, hi: f64) -> Self {
        let distance = if value < lo {
            lo - value
        } else if value > hi {
            value - hi
        } else {
            0.0
        };
        Self {
            name: name.to_string(),
            tag: tag.to_string(),
            value: distance,
            threshold: Some(0.0),
            kind: CheckKind::Assert,
            note: format!("value={value:e} window=[{lo},{hi}]"),
        }
    }

    pub fn log(name: &str, tag: &str, value: f64) -> Self {
        Self {
            name: name.to_string(),
            tag: tag.to_string(),
            value,
            threshold: None,
            kind: CheckKind::LogOnly,
            note: String::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    /// Pass/fail of an assert record; log-only records always pass.
    pub fn passed(&self) -> bool {
        match (self.kind, self.threshold) {
            (CheckKind::Assert, Some(t)) => self.value.is_finite() && self.value <= t,
            _ => true,
        }
    }

    pub fn status(&self) -> &'static str {
        match self.kind {
            CheckKind::LogOnly => "log-only",
            CheckKind::Assert => {
                if self.passed() {
                    "pass"
                } else {
                    "FAIL"
                }
            }
        }
    }
}

/// An ordered collection of check records.
#[derive(Debug, Clone, Default)]
pub struct SuiteReport {
    pub records: Vec<CheckRecord>,
}

impl SuiteReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.records.push(record);
    }

    pub fn extend(&mut self, other: SuiteReport) {
        self.records.extend(other.records);
    }

    /// True iff every assert record passed; log-only records cannot flip it.
    pub fn all_passed(&self) -> bool {
        self.records.iter().all(CheckRecord::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.passed())
    }

    /// `report.csv` rendering: check, equation-tag, value, threshold, status.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "check,equation_tag,value,threshold,status")?;
        for r in &self.records {
            let threshold = r
                .threshold
                .map(|t| format!("{t:e}"))
                .unwrap_or_default();
            writeln!(
                w,
                "{},{},{:e},{},{}",
                r.name,
                r.tag,
                r.value,
                threshold,
                r.status()
            )?;
        }
        Ok(())
    }

    /// Human-readable summary.
    pub fn write_summary<W: Write>(&self, w: &mut W, header: &str) -> io::Result<()> {
        writeln!(w, "{header}")?;
        writeln!(w, "{}", "-".repeat(header.len()))?;
        for r in &self.records {
            let bound = match r.threshold {
                Some(t) => format!(" (<= {t:e})"),
                None => String::new(),
            };
            let note = if r.note.is_empty() {
                String::new()
            } else {
                format!("  [{}]", r.note)
            };
            writeln!(
                w,
                "{:8} {:44} {:24} {:e}{}{}",
                r.status(),
                r.name,
                r.tag,
                r.value,
                bound,
                note
            )?;
        }
        let (pass, fail): (Vec<_>, Vec<_>) = self
            .records
            .iter()
            .filter(|r| r.kind == CheckKind::Assert)
            .partition(|r| r.passed());
        writeln!(
            w,
            "asserted: {} passed, {} failed; {} log-only records",
            pass.len(),
            fail.len(),
            self.records.len() - pass.len() - fail.len()
        )
    }
}

/// One residual measurement attached to its lattice/transform scales.
#[derive(Debug, Clone)]
pub struct ResidualRecord {
    pub name: String,
    pub norm: f64,
    pub relative: f64,
    pub spacing: f64,
    pub epsilon: f64,
}

/// Residual table rendering: name, norm, relative norm, lattice h, ε.
pub fn write_residual_csv<W: Write>(w: &mut W, records: &[ResidualRecord]) -> io::Result<()> {
    writeln!(w, "name,norm,relative,h,epsilon")?;
    for r in records {
        writeln!(
            w,
            "{},{:e},{:e},{:e},{:e}",
            r.name, r.norm, r.relative, r.spacing, r.epsilon
        )?;
    }
    Ok(())
}
