use serde::Serialize;

use crate::error::{GhdError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Skipped,
}

/// One row per grid point. Fields that do not apply to a protocol are empty
/// in CSV and `null` in JSON.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub protocol: &'static str,
    pub status: Status,
    /// `<error-kind>: <detail>` for skipped points, empty otherwise.
    pub reason: String,
    pub n: usize,
    #[serde(rename = "L")]
    pub lower: Option<usize>,
    #[serde(rename = "U")]
    pub upper: Option<usize>,
    pub t: Option<usize>,
    pub s: Option<f64>,
    pub c: Option<f64>,
    pub p: Option<usize>,
    /// Sketch block length.
    pub a: Option<usize>,
    /// Sketch block count.
    pub b: Option<usize>,
    /// Sampling trial count.
    pub m: Option<u64>,
    pub code_size: Option<usize>,
    /// Streaming state size `S`.
    pub state_bits: Option<u64>,
    pub worst_case_bits: Option<u64>,
    pub declared_bits: Option<u64>,
    pub trials: u64,
    pub error_close: Option<f64>,
    pub halfwidth_close: Option<f64>,
    pub error_far: Option<f64>,
    pub halfwidth_far: Option<f64>,
    /// Allowed error probability; `0` for exact protocols.
    pub error_bound: Option<f64>,
    /// Theoretical communication rate the cost is compared with.
    pub rate: Option<f64>,
    pub theory_lower: Option<f64>,
    pub theory_upper: Option<f64>,
    pub bound_satisfied: Option<bool>,
}

impl Record {
    pub(crate) fn blank(protocol: &'static str, n: usize, trials: u64) -> Self {
        Self {
            protocol,
            status: Status::Ok,
            reason: String::new(),
            n,
            lower: None,
            upper: None,
            t: None,
            s: None,
            c: None,
            p: None,
            a: None,
            b: None,
            m: None,
            code_size: None,
            state_bits: None,
            worst_case_bits: None,
            declared_bits: None,
            trials,
            error_close: None,
            halfwidth_close: None,
            error_far: None,
            halfwidth_far: None,
            error_bound: None,
            rate: None,
            theory_lower: None,
            theory_upper: None,
            bound_satisfied: None,
        }
    }

    pub(crate) fn skip(mut self, err: &GhdError) -> Self {
        let kind = match err {
            GhdError::InvalidInput(_) => "invalid_input",
            GhdError::LengthMismatch { .. } => "length_mismatch",
            GhdError::HypothesisViolated { .. } => "hypothesis_violated",
            GhdError::ContractViolation(_) => "contract_violation",
            GhdError::BudgetExceeded { .. } => "budget_exceeded",
            GhdError::SizeLimit { .. } => "size_limit",
            GhdError::ConstructionFailed(_) => "construction_failed",
            GhdError::Parse(_) => "parse",
        };
        self.status = Status::Skipped;
        self.reason = format!("{kind}: {err}");
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub records: Vec<Record>,
}

impl Report {
    /// True when any record failed its bound check.
    pub fn has_violation(&self) -> bool {
        self.records
            .iter()
            .any(|r| r.bound_satisfied == Some(false))
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.records.is_empty() {
            w.write_record(CSV_COLUMNS).map_err(csv_err)?;
        }
        for r in &self.records {
            w.serialize(r).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| GhdError::Parse(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(&self.records).map_err(|e| GhdError::Parse(e.to_string()))
    }
}

fn csv_err(e: csv::Error) -> GhdError {
    GhdError::Parse(e.to_string())
}

/// Column order of the CSV report.
pub const CSV_COLUMNS: [&str; 27] = [
    "protocol",
    "status",
    "reason",
    "n",
    "L",
    "U",
    "t",
    "s",
    "c",
    "p",
    "a",
    "b",
    "m",
    "code_size",
    "state_bits",
    "worst_case_bits",
    "declared_bits",
    "trials",
    "error_close",
    "halfwidth_close",
    "error_far",
    "halfwidth_far",
    "error_bound",
    "rate",
    "theory_lower",
    "theory_upper",
    "bound_satisfied",
];
