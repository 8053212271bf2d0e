use serde::Serialize;

use crate::error::{invalid, GhdError, Result};

/// Largest supported input length; keeps `n^3` exact in an `f64`.
pub const MAX_N: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SketchParams {
    pub n: usize,
    pub lower: usize,
    pub upper: usize,
    pub s: f64,
    /// `b = ceil(4 n (s/U)^{1/3})`.
    pub blocks: usize,
    /// `a = ceil(n / b)`.
    pub block_len: usize,
    pub padded_len: usize,
    /// Grid denominator `n^3`.
    pub grid_scale: u64,
    /// Bits per transmitted grid index, sign included.
    pub word_width: u32,
    /// Bob outputs 1 iff `T' > L + 5/n`.
    pub threshold: f64,
    /// `b > n`: Alice sends `x` verbatim instead.
    pub trivial_mode: bool,
    /// Whether `s >= (L + 10/n)^3 / U^2`. Only false when the check was
    /// explicitly overridden.
    pub hypothesis_holds: bool,
}

pub fn derive_sketch_params(n: usize, lower: usize, upper: usize, s: f64) -> Result<SketchParams> {
    derive_sketch_params_with(n, lower, upper, s, false)
}

/// Smallest `(L + 10/n)^3 / U^2` admissible `s`.
pub fn required_s(n: usize, lower: usize, upper: usize) -> f64 {
    let l = lower as f64 + 10.0 / n as f64;
    l * l * l / (upper as f64 * upper as f64)
}

fn ceil_log2(k: u128) -> u32 {
    if k <= 1 {
        0
    } else {
        128 - (k - 1).leading_zeros()
    }
}

/// `allow_violation` keeps going when the error guarantee does not apply;
/// the returned params record that in `hypothesis_holds`.
pub fn derive_sketch_params_with(
    n: usize,
    lower: usize,
    upper: usize,
    s: f64,
    allow_violation: bool,
) -> Result<SketchParams> {
    if n == 0 || lower >= upper || upper > n {
        return Err(invalid(format!(
            "need 0 <= L < U <= n, got L={lower} U={upper} n={n}"
        )));
    }
    if n > MAX_N {
        return Err(invalid(format!(
            "n = {n} exceeds the supported maximum {MAX_N}"
        )));
    }
    if !(s.is_finite() && s > 0.0) {
        return Err(invalid(format!("s must be positive, got {s}")));
    }
    let required = required_s(n, lower, upper);
    let hypothesis_holds = s >= required;
    if !hypothesis_holds && !allow_violation {
        return Err(GhdError::HypothesisViolated { s, required });
    }

    let nf = n as f64;
    let blocks = ((4.0 * nf * (s / upper as f64).cbrt()).ceil() as usize).max(1);
    let block_len = n.div_ceil(blocks);
    let grid_scale = (n as u64).pow(3);
    // floor(sqrt(a) n^3) bounds |m| since |<alpha_i, U_i>| <= ||alpha_i|| <= sqrt(a).
    let n6 = (grid_scale as u128) * (grid_scale as u128);
    let max_index = (block_len as u128 * n6).isqrt();
    let word_width = ceil_log2(2 * max_index + 1) + 1;

    Ok(SketchParams {
        n,
        lower,
        upper,
        s,
        blocks,
        block_len,
        padded_len: blocks * block_len,
        grid_scale,
        word_width,
        threshold: lower as f64 + 5.0 / nf,
        trivial_mode: blocks > n,
        hypothesis_holds,
    })
}

/// Exact bits on the wire, Bob's answer included.
pub fn sketch_cost(params: &SketchParams) -> u64 {
    if params.trivial_mode {
        params.n as u64 + 1
    } else {
        params.blocks as u64 * params.word_width as u64 + 1
    }
}

impl SketchParams {
    pub fn cost(&self) -> u64 {
        sketch_cost(self)
    }

    /// `(s/U)^{1/3} n log2 n`, the rate the cost is compared against.
    pub fn rate(&self) -> f64 {
        let nf = self.n as f64;
        (self.s / self.upper as f64).cbrt() * nf * nf.log2()
    }
}
