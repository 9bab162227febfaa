use std::fmt;
use std::io::Write;

use crate::fmt::g17;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Vacuous or not evaluable; never counts as a violation.
    Degenerate,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Degenerate => "degenerate",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of one claim.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyReport {
    pub claim_id: String,
    pub status: Status,
    pub samples: usize,
    /// Smallest margin seen; positive margins satisfy the claim.
    pub worst_margin: f64,
    pub worst_coordinates: Vec<(String, f64)>,
    pub notes: String,
}

impl PropertyReport {
    pub fn coordinates_string(&self) -> String {
        self.worst_coordinates
            .iter()
            .map(|(k, v)| format!("{k}={}", g17(*v)))
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<40} {:<10} samples={:<7} worst_margin={} at {}",
            self.claim_id,
            self.status,
            self.samples,
            g17(self.worst_margin),
            self.coordinates_string()
        )?;
        if !self.notes.is_empty() {
            write!(f, " ({})", self.notes)?;
        }
        Ok(())
    }
}

/// Accumulates margins for one claim.
#[derive(Debug)]
pub struct ClaimCheck {
    id: String,
    strict: bool,
    samples: usize,
    violations: usize,
    worst_margin: f64,
    worst_coordinates: Vec<(String, f64)>,
    degenerate: Vec<String>,
    notes: Vec<String>,
}

impl ClaimCheck {
    /// `strict` claims need margin > 0; others need margin ≥ 0.
    pub fn new(id: impl Into<String>, strict: bool) -> Self {
        Self {
            id: id.into(),
            strict,
            samples: 0,
            violations: 0,
            worst_margin: f64::INFINITY,
            worst_coordinates: Vec::new(),
            degenerate: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn record(&mut self, margin: f64, coords: &[(&str, f64)]) {
        self.samples += 1;
        let ok = if self.strict {
            margin > 0.0
        } else {
            margin >= 0.0
        };
        if !ok {
            self.violations += 1;
        }
        if margin < self.worst_margin || (margin.is_nan() && !self.worst_margin.is_nan()) {
            self.worst_margin = margin;
            self.worst_coordinates = coords.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        }
    }

    /// Marks a sample that could not be evaluated (e.g. quadrature failure).
    pub fn degenerate_at(&mut self, coords: &[(&str, f64)], why: &str) {
        let at = coords
            .iter()
            .map(|(k, v)| format!("{k}={}", g17(*v)))
            .collect::<Vec<_>>()
            .join(";");
        self.degenerate.push(format!("{why} at {at}"));
    }

    /// Marks the whole claim as vacuous.
    pub fn vacuous(&mut self, why: &str) {
        self.degenerate.push(why.to_string());
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn finish(self) -> PropertyReport {
        let status = if self.violations > 0 {
            Status::Fail
        } else if !self.degenerate.is_empty() {
            Status::Degenerate
        } else {
            Status::Pass
        };
        let mut notes = self.notes;
        if self.violations > 0 {
            notes.push(format!("{} violations", self.violations));
        }
        if let Some(first) = self.degenerate.first() {
            notes.push(format!("{} degenerate: {first}", self.degenerate.len()));
        }
        PropertyReport {
            claim_id: self.id,
            status,
            samples: self.samples,
            worst_margin: self.worst_margin,
            worst_coordinates: self.worst_coordinates,
            notes: notes.join("; "),
        }
    }
}

/// All claims of one suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: String,
    pub claims: Vec<PropertyReport>,
}

impl SuiteReport {
    /// Fail if any claim failed; degenerate claims do not fail a suite.
    pub fn status(&self) -> Status {
        if self.claims.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else {
            Status::Pass
        }
    }

    pub fn claim(&self, id: &str) -> Option<&PropertyReport> {
        self.claims.iter().find(|c| c.claim_id == id)
    }
}

pub const CSV_HEADER: [&str; 6] = [
    "claim_id",
    "status",
    "samples",
    "worst_margin",
    "worst_coordinates",
    "notes",
];

/// One CSV row per claim, claims ordered by id.
pub fn write_csv<W: Write>(reports: &[PropertyReport], out: W) -> std::io::Result<()> {
    let mut sorted: Vec<&PropertyReport> = reports.iter().collect();
    sorted.sort_by(|a, b| a.claim_id.cmp(&b.claim_id));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in sorted {
        w.write_record([
            r.claim_id.as_str(),
            r.status.as_str(),
            &r.samples.to_string(),
            &g17(r.worst_margin),
            &r.coordinates_string(),
            &r.notes,
        ])?;
    }
    w.flush()?;
    Ok(())
}
