use serde::Serialize;

use super::report::{Record, Status};
use crate::error::{invalid, Result};

/// Sampling and sketch costs at one `(n, L, U, s)` point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub n: usize,
    #[serde(rename = "L")]
    pub lower: usize,
    #[serde(rename = "U")]
    pub upper: usize,
    pub s: f64,
    pub sampling_bits: u64,
    pub sketch_bits: u64,
    /// `(s/U) n`.
    pub sampling_rate: f64,
    /// `(s/U)^{1/3} n log2 n`.
    pub sketch_rate: f64,
    /// Set when `s < U`, where `(s/U)^{1/3}` exceeds `s/U`.
    pub cube_root_exceeds_linear: bool,
}

fn key(r: &Record) -> Option<(usize, usize, usize, u64)> {
    Some((r.n, r.lower?, r.upper?, r.s?.to_bits()))
}

/// Pairs completed sampling and sketch records on `(n, L, U, s)`. Fails
/// unless both protocols are present and their grids match exactly.
pub fn compare_bounds(records: &[Record]) -> Result<Vec<ComparisonRow>> {
    let ok = |name: &str| -> Vec<&Record> {
        records
            .iter()
            .filter(|r| r.protocol == name && r.status == Status::Ok)
            .collect()
    };
    let (sampling, sketch) = (ok("sampling"), ok("sketch"));
    if sampling.is_empty() || sketch.is_empty() {
        return Err(invalid(
            "comparison needs completed sampling and sketch records",
        ));
    }
    let mut a: Vec<_> = sampling
        .iter()
        .filter_map(|r| key(r).map(|k| (k, *r)))
        .collect();
    let mut b: Vec<_> = sketch
        .iter()
        .filter_map(|r| key(r).map(|k| (k, *r)))
        .collect();
    a.sort_by_key(|(k, _)| *k);
    b.sort_by_key(|(k, _)| *k);
    if a.len() != b.len() || a.iter().zip(&b).any(|((ka, _), (kb, _))| ka != kb) {
        return Err(invalid("sampling and sketch grids differ"));
    }
    Ok(a.into_iter()
        .zip(b)
        .map(|(((n, lower, upper, _), ra), (_, rb))| {
            let s = ra.s.unwrap_or_default();
            let nf = n as f64;
            let ratio = s / upper as f64;
            ComparisonRow {
                n,
                lower,
                upper,
                s,
                sampling_bits: ra.worst_case_bits.unwrap_or_default(),
                sketch_bits: rb.worst_case_bits.unwrap_or_default(),
                sampling_rate: ratio * nf,
                sketch_rate: ratio.cbrt() * nf * nf.log2(),
                cube_root_exceeds_linear: s < upper as f64,
            }
        })
        .collect())
}
