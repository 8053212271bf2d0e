use std::f64::consts::TAU;

use rand::RngCore;

use crate::error::{invalid, Result};

/// Stream words (64-bit) consumed per Gaussian coordinate: one for the
/// radius, one for the angle.
pub const WORDS_PER_COORDINATE: u64 = 2;

const INV_2_53: f64 = 1.0 / (1u64 << 53) as f64;

/// Box-Muller, cosine branch only, so every coordinate costs exactly two
/// words and both parties stay aligned.
#[inline]
pub fn standard_normal<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    // u1 in (0, 1], u2 in [0, 1)
    let u1 = ((rng.next_u64() >> 11) + 1) as f64 * INV_2_53;
    let u2 = (rng.next_u64() >> 11) as f64 * INV_2_53;
    (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
}

/// Uniform point on the unit sphere in `dim` dimensions: independent
/// standard normals divided by their norm. An all-zero draw is redrawn.
pub fn gaussian_unit_vector<R: RngCore + ?Sized>(dim: usize, rng: &mut R) -> Result<Vec<f64>> {
    if dim == 0 {
        return Err(invalid("sphere dimension must be at least 1"));
    }
    let mut v = vec![0.0; dim];
    loop {
        v.iter_mut().for_each(|c| *c = standard_normal(rng));
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 0.0 {
            v.iter_mut().for_each(|c| *c /= norm);
            return Ok(v);
        }
    }
}
