//! Two-party protocols for the Gap Hamming Distance problem: decide whether
//! the Hamming distance between Alice's `x` and Bob's `y` is at most `L` or at
//! least `U`, counting every bit the parties exchange.
//!
//! * [`sampling`]: public-coin coordinate sampling with a majority vote.
//! * [`sketch`]: random-projection sketch with one-sided error `e^{-s}`.
//! * [`covering`]: deterministic covering-code protocol for `L = 0`, with
//!   the matching volume bounds.
//! * [`streaming`]: the reduction from `L = 0` to deterministic distinct
//!   element estimation, with metered algorithm state.
//! * [`experiments`]: parameter sweeps and reports.

pub mod bits;
pub mod covering;
pub mod error;
pub mod experiments;
pub mod instance;
pub mod par;
pub mod runtime;
pub mod sampling;
pub mod sketch;
pub mod streaming;
pub mod volume;

pub use bits::{hamming_distance, BitString};
pub use error::{GhdError, Result};
pub use instance::{random_pair_at_distance, GhdInstance, Promise};
pub use volume::{ball_volume, log2_ball_volume, BallVolume};
