//! Exact Hamming ball volumes `V(n, r) = sum_{i <= r} C(n, i)`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallVolume {
    pub n: usize,
    pub r: usize,
    pub value: BigUint,
}

impl BallVolume {
    pub fn log2(&self) -> f64 {
        log2_biguint(&self.value)
    }
}

fn check(n: usize, r: i64) -> Result<usize> {
    if n == 0 {
        return Err(invalid("ball volume needs n >= 1"));
    }
    if r < 0 || r as u64 > n as u64 {
        return Err(invalid(format!("radius {r} outside [0, {n}]")));
    }
    Ok(r as usize)
}

/// Partial binomial sum `sum_{i=0}^{r} C(n, i)` using the running ratio
/// `C(n, i+1) = C(n, i) (n - i) / (i + 1)`, which is always exact.
fn partial_sum(n: usize, r: usize) -> BigUint {
    let mut term = BigUint::one();
    let mut total = BigUint::one();
    for i in 0..r {
        term *= n - i;
        term /= i + 1;
        total += &term;
    }
    total
}

pub fn ball_volume(n: usize, r: i64) -> Result<BallVolume> {
    let r = check(n, r)?;
    // Above the midpoint, count the complement: V(n, r) = 2^n - V(n, n-r-1).
    let value = if r == n {
        BigUint::one() << n
    } else if 2 * r > n {
        (BigUint::one() << n) - partial_sum(n, n - r - 1)
    } else {
        partial_sum(n, r)
    };
    Ok(BallVolume { n, r, value })
}

pub fn log2_ball_volume(n: usize, r: i64) -> Result<f64> {
    Ok(ball_volume(n, r)?.log2())
}

/// `C(n, k)` exactly; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut c = BigUint::one();
    for i in 0..k {
        c *= n - i;
        c /= i + 1;
    }
    c
}

/// log2 from the bit length plus the top 64 significant bits.
pub fn log2_biguint(v: &BigUint) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    if bits <= 64 {
        return (v.to_u64().unwrap() as f64).log2();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_u64().unwrap();
    shift as f64 + (top as f64).log2()
}
