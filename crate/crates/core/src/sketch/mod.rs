//! One-sided-error random projection sketch.
//!
//! Both inputs are zero padded to `a * b` bits and cut into `b` blocks of
//! length `a`. For each block the parties draw a shared uniform unit vector;
//! Alice sends her block projections rounded to the grid `m / n^3`, and Bob
//! outputs 1 iff `T' = sum_i (r_i - <beta_i, U_i>)^2` exceeds `L + 5/n`.
//! Close instances are never misclassified; far instances are missed with
//! probability at most `e^{-s}`.

mod params;
mod protocol;
mod sphere;
mod wire;

pub use params::{
    derive_sketch_params, derive_sketch_params_with, sketch_cost, SketchParams, MAX_N,
};
pub use protocol::{
    alice_sketch, bob_decide, sketch_statistics, BobDecision, SketchAlice, SketchBob,
    SketchProtocol, SketchStatistics,
};
pub use sphere::{gaussian_unit_vector, standard_normal, WORDS_PER_COORDINATE};
pub use wire::{quantize_projection, SketchMessage};
