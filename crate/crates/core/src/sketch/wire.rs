use crate::error::{GhdError, Result};
use crate::runtime::Payload;

/// Nearest grid index `m` with `m / n^3` closest to `value`, ties to even.
pub fn quantize_projection(value: f64, n: usize) -> Result<i64> {
    let limit = (n as f64).sqrt();
    if !value.is_finite() || value.abs() > limit * (1.0 + 1e-12) {
        return Err(GhdError::ContractViolation(format!(
            "projection {value} exceeds sqrt(n) = {limit}"
        )));
    }
    let scale = (n as f64).powi(3);
    Ok((value * scale).round_ties_even() as i64)
}

/// Alice's quantized projections `m_1..m_b`, standing for `r_i = m_i / n^3`.
///
/// Wire format: `b` sign-magnitude integers of `word_width` bits each, sign
/// bit first (1 = negative), magnitude most significant bit first, packed
/// back to back with no header.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SketchMessage {
    pub values: Vec<i64>,
}

impl SketchMessage {
    pub fn encode(&self, word_width: u32) -> Result<Payload> {
        assert!((2..=64).contains(&word_width));
        let mag_bits = word_width - 1;
        let mut p = Payload::with_capacity(self.values.len() * word_width as usize);
        for &m in &self.values {
            let mag = m.unsigned_abs();
            if mag_bits < 64 && mag >> mag_bits != 0 {
                return Err(GhdError::ContractViolation(format!(
                    "grid index {m} does not fit in {word_width} bits"
                )));
            }
            p.push_bit(m < 0);
            p.push_uint(mag, mag_bits);
        }
        Ok(p)
    }

    pub fn decode(payload: &Payload, blocks: usize, word_width: u32) -> Result<Self> {
        let expected = blocks * word_width as usize;
        if payload.len() != expected {
            return Err(GhdError::ContractViolation(format!(
                "sketch message has {} bits, expected {expected}",
                payload.len()
            )));
        }
        let mut r = payload.reader();
        let values = (0..blocks)
            .map(|_| {
                let negative = r.read_bit().unwrap();
                let mag = r.read_uint(word_width - 1).unwrap() as i64;
                if negative {
                    -mag
                } else {
                    mag
                }
            })
            .collect();
        Ok(Self { values })
    }

    pub fn grid_value(&self, i: usize, grid_scale: u64) -> f64 {
        self.values[i] as f64 / grid_scale as f64
    }
}
