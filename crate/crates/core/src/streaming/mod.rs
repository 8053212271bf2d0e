//! Distinct-element estimation versus the deterministic `L = 0` protocol.
//!
//! Alice turns `x` into the stream `u_i = n x_i + i` and Bob turns `y` into
//! `v_i = n y_i + i`, so the concatenation has exactly `n + H(x, y)` distinct
//! tokens. Any deterministic `p`-pass algorithm with `S` bits of state that
//! is a `c`-approximation (`F0 <= E < c F0`) then decides the promise
//! `x = y` vs `H(x, y) >= ceil(n (c - 1))` by shipping its state back and
//! forth, at most `2 p S` bits in total.

mod algorithm;
mod reduction;
mod stream;

pub use algorithm::{ExactBitmap, StreamingAlgorithm, TruncatedBitmap};
pub use reduction::{
    distance_threshold, ghd_via_streaming, search_counterexample, space_lower_bound,
    Counterexample, FalsificationReport, ReductionRun, StreamBound,
};
pub use stream::{encode_streams, exact_f0, TokenStream};
