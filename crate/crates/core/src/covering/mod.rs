//! Covering codes and the deterministic protocol for `L = 0`, `U = t`.
//!
//! Alice sends the index of her nearest codeword `c` in a covering code of
//! radius `floor((t-1)/2)`; Bob answers 0 iff `H(c, y)` is within that radius.
//! For `x = y` this always holds, and for `H(x, y) >= t` the triangle
//! inequality rules it out, so the protocol is exact on the promise.

mod code;
mod diameter;
mod protocol;

pub use code::{
    audit_exhaustive, audit_sampled, greedy_covering_code, nearest_codeword, random_covering_code,
    CoveringCode, Nearest, AUDIT_SAMPLES, EXHAUSTIVE_AUDIT_MAX_N, GREEDY_MAX_N,
};
pub use diameter::set_diameter;
pub use protocol::{
    det_complexity_bounds, DetAlice, DetBob, DetBounds, DetProtocol, DetProtocolParams,
};

/// Greedy's guarantee: `|C| <= (0.694 n + 1) 2^n / V(n, r)`.
pub fn greedy_size_factor(n: usize) -> f64 {
    0.694 * n as f64 + 1.0
}
