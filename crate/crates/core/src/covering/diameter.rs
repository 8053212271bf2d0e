use crate::bits::{hamming_distance, BitString};
use crate::error::{invalid, Result};

/// Largest pairwise Hamming distance in `points`.
pub fn set_diameter(points: &[BitString]) -> Result<usize> {
    let first = points
        .first()
        .ok_or_else(|| invalid("diameter of an empty set"))?;
    for p in points {
        hamming_distance(first, p)?;
    }
    let mut diam = 0;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            diam = diam.max(p.distance_unchecked(q));
        }
    }
    Ok(diam)
}
