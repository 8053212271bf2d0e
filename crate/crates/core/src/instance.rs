//! Promise instances and seeded instance generation.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits::{hamming_distance, BitString};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Promise {
    /// `H(x, y) <= L`; the correct output is 0.
    Close,
    /// `H(x, y) >= U`; the correct output is 1.
    Far,
    Violated,
}

impl Promise {
    pub fn expected_output(self) -> Option<bool> {
        match self {
            Promise::Close => Some(false),
            Promise::Far => Some(true),
            Promise::Violated => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GhdInstance {
    pub n: usize,
    pub lower: usize,
    pub upper: usize,
    pub x: BitString,
    pub y: BitString,
    pub distance: usize,
    pub promise: Promise,
}

impl GhdInstance {
    pub fn new(lower: usize, upper: usize, x: BitString, y: BitString) -> Result<Self> {
        let n = x.len();
        let distance = hamming_distance(&x, &y)?;
        if lower >= upper || upper > n {
            return Err(invalid(format!(
                "need L < U <= n, got L={lower} U={upper} n={n}"
            )));
        }
        let promise = if distance <= lower {
            Promise::Close
        } else if distance >= upper {
            Promise::Far
        } else {
            Promise::Violated
        };
        Ok(Self {
            n,
            lower,
            upper,
            x,
            y,
            distance,
            promise,
        })
    }

    /// A random instance with `H(x, y) = distance` exactly.
    pub fn random(
        n: usize,
        lower: usize,
        upper: usize,
        distance: usize,
        seed: u64,
    ) -> Result<Self> {
        let (x, y) = random_pair_at_distance(n, distance, seed)?;
        Self::new(lower, upper, x, y)
    }
}

pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_bitstring<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<BitString> {
    let words = (0..n.div_ceil(64)).map(|_| rng.random::<u64>()).collect();
    BitString::from_words(n, words)
}

/// `x` uniform over `{0,1}^n`; `y` is `x` with a uniformly chosen set of `d`
/// positions flipped.
pub fn random_pair_at_distance(n: usize, d: usize, seed: u64) -> Result<(BitString, BitString)> {
    if d > n {
        return Err(invalid(format!("distance {d} exceeds length {n}")));
    }
    let mut rng = rng_from_seed(seed);
    let x = random_bitstring(n, &mut rng)?;
    let mut y = x.clone();
    for i in index::sample(&mut rng, n, d) {
        y.flip(i);
    }
    Ok((x, y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extreme_distances() {
        for seed in 0..20 {
            let (x, y) = random_pair_at_distance(8, 0, seed).unwrap();
            assert_eq!(x, y);
            let (x, y) = random_pair_at_distance(8, 8, seed).unwrap();
            assert_eq!(y, x.complement());
        }
    }

    #[test]
    fn exact_distance_and_determinism() {
        let (x, y) = random_pair_at_distance(100, 37, 1).unwrap();
        assert_eq!(hamming_distance(&x, &y).unwrap(), 37);
        assert_eq!(random_pair_at_distance(100, 37, 1).unwrap(), (x.clone(), y));
        assert_ne!(random_pair_at_distance(100, 37, 2).unwrap().0, x);
        assert!(random_pair_at_distance(8, 9, 0).is_err());
    }

    #[test]
    fn flipped_positions_look_uniform() {
        // Each position is flipped with probability d/n.
        let (n, d, trials) = (10usize, 3usize, 20_000u64);
        let mut counts = vec![0u32; n];
        for seed in 0..trials {
            let (x, y) = random_pair_at_distance(n, d, seed).unwrap();
            for (i, c) in counts.iter_mut().enumerate() {
                if x.get(i) != y.get(i) {
                    *c += 1;
                }
            }
        }
        let p = d as f64 / n as f64;
        let sd = (trials as f64 * p * (1.0 - p)).sqrt();
        for c in counts {
            assert!((c as f64 - trials as f64 * p).abs() < 5.0 * sd);
        }
    }

    #[test]
    fn promise_classes() {
        let x: BitString = "000000".parse().unwrap();
        let mk = |y: &str| GhdInstance::new(1, 4, x.clone(), y.parse().unwrap()).unwrap();
        assert_eq!(mk("100000").promise, Promise::Close);
        assert_eq!(mk("110000").promise, Promise::Violated);
        assert_eq!(mk("111100").promise, Promise::Far);
        assert!(GhdInstance::new(4, 4, x.clone(), x.clone()).is_err());
        assert!(GhdInstance::new(1, 7, x.clone(), x).is_err());
    }
}
