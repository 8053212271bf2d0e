use std::fmt::Write;

use crate::bits::BitString;
use crate::error::{invalid, GhdError, Result};
use crate::instance::{random_bitstring, rng_from_seed};
use crate::par::{derive_seed, map_indices, Exec};
use crate::volume::log2_ball_volume;

/// Largest length for the greedy construction, which walks all of `{0,1}^n`.
pub const GREEDY_MAX_N: usize = 22;
pub const EXHAUSTIVE_AUDIT_MAX_N: usize = 24;
/// Points checked by the sampled covering audit.
pub const AUDIT_SAMPLES: u64 = 100_000;
const RANDOM_CODE_MAX_SIZE: f64 = (1u64 << 20) as f64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringCode {
    n: usize,
    radius: usize,
    codewords: Vec<BitString>,
    index_width: u32,
}

fn ceil_log2(k: usize) -> u32 {
    if k <= 1 {
        0
    } else {
        usize::BITS - (k - 1).leading_zeros()
    }
}

impl CoveringCode {
    /// Wraps a codeword list. Covering is not checked here; see the audits.
    pub fn new(n: usize, radius: usize, codewords: Vec<BitString>) -> Result<Self> {
        if codewords.is_empty() {
            return Err(invalid("a covering code needs at least one codeword"));
        }
        if radius > n {
            return Err(invalid(format!("radius {radius} exceeds length {n}")));
        }
        if let Some(bad) = codewords.iter().find(|c| c.len() != n) {
            return Err(GhdError::LengthMismatch {
                left: bad.len(),
                right: n,
            });
        }
        let index_width = ceil_log2(codewords.len());
        Ok(Self {
            n,
            radius,
            codewords,
            index_width,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn codewords(&self) -> &[BitString] {
        &self.codewords
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    /// `ceil(log2 |C|)` bits per transmitted index.
    pub fn index_width(&self) -> u32 {
        self.index_width
    }

    /// Text form: a header line `covering-code n=<n> r=<r> size=<k>` followed
    /// by one hex row per codeword (see [`BitString::to_hex`]).
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "covering-code n={} r={} size={}\n",
            self.n,
            self.radius,
            self.len()
        );
        for c in &self.codewords {
            writeln!(out, "{}", c.to_hex()).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| GhdError::Parse("empty code file".into()))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("covering-code") {
            return Err(GhdError::Parse(format!("bad header {header:?}")));
        }
        let mut get = |key: &str| -> Result<usize> {
            let field = fields
                .next()
                .ok_or_else(|| GhdError::Parse(format!("header is missing {key}")))?;
            field
                .strip_prefix(key)
                .and_then(|v| v.strip_prefix('='))
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| GhdError::Parse(format!("expected {key}=<int>, got {field:?}")))
        };
        let (n, radius, size) = (get("n")?, get("r")?, get("size")?);
        let codewords = lines
            .map(|row| BitString::from_hex(n, row))
            .collect::<Result<Vec<_>>>()?;
        if codewords.len() != size {
            return Err(GhdError::Parse(format!(
                "header declares {size} codewords, found {}",
                codewords.len()
            )));
        }
        Self::new(n, radius, codewords)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Nearest {
    pub index: usize,
    pub distance: usize,
}

/// Closest codeword to `x`; ties go to the lowest index.
pub fn nearest_codeword(code: &CoveringCode, x: &BitString) -> Result<Nearest> {
    if x.len() != code.n {
        return Err(GhdError::LengthMismatch {
            left: x.len(),
            right: code.n,
        });
    }
    let mut best = Nearest {
        index: 0,
        distance: usize::MAX,
    };
    for (index, c) in code.codewords.iter().enumerate() {
        let distance = c.distance_unchecked(x);
        if distance < best.distance {
            best = Nearest { index, distance };
            if distance == 0 {
                break;
            }
        }
    }
    Ok(best)
}

/// Masks of weight at most `r` on `n` bits: the ball around 0.
fn ball_offsets(n: usize, r: usize) -> Vec<u32> {
    (0..1u32 << n)
        .filter(|m| m.count_ones() as usize <= r)
        .collect()
}

const NIL: u32 = u32::MAX;

/// Candidates bucketed by current gain in intrusive doubly linked lists, so
/// a gain decrement is O(1).
struct GainBuckets {
    gain: Vec<u32>,
    head: Vec<u32>,
    next: Vec<u32>,
    prev: Vec<u32>,
    top: usize,
}

impl GainBuckets {
    fn new(points: usize, initial: u32) -> Self {
        let mut b = Self {
            gain: vec![initial; points],
            head: vec![NIL; initial as usize + 1],
            next: vec![NIL; points],
            prev: vec![NIL; points],
            top: initial as usize,
        };
        for p in (0..points as u32).rev() {
            b.push(p);
        }
        b
    }

    fn push(&mut self, p: u32) {
        let g = self.gain[p as usize] as usize;
        let h = self.head[g];
        self.next[p as usize] = h;
        self.prev[p as usize] = NIL;
        if h != NIL {
            self.prev[h as usize] = p;
        }
        self.head[g] = p;
    }

    fn unlink(&mut self, p: u32) {
        let (pr, nx) = (self.prev[p as usize], self.next[p as usize]);
        if pr != NIL {
            self.next[pr as usize] = nx;
        } else {
            self.head[self.gain[p as usize] as usize] = nx;
        }
        if nx != NIL {
            self.prev[nx as usize] = pr;
        }
    }

    fn decrement(&mut self, p: u32) {
        self.unlink(p);
        self.gain[p as usize] -= 1;
        self.push(p);
    }

    fn pop_max(&mut self) -> Option<u32> {
        while self.head[self.top] == NIL {
            if self.top == 0 {
                return None;
            }
            self.top -= 1;
        }
        let p = self.head[self.top];
        self.unlink(p);
        Some(p)
    }
}

/// Greedy set cover over all of `{0,1}^n`: repeatedly take the word whose
/// radius-`r` ball covers the most uncovered points. The result has at most
/// `(1 + ln V) 2^n / V <= (0.694 n + 1) 2^n / V` codewords.
pub fn greedy_covering_code(n: usize, r: usize) -> Result<CoveringCode> {
    if n == 0 {
        return Err(invalid("code length must be at least 1"));
    }
    if n > GREEDY_MAX_N {
        return Err(GhdError::SizeLimit {
            n,
            max: GREEDY_MAX_N,
        });
    }
    if r > n {
        return Err(invalid(format!("radius {r} exceeds length {n}")));
    }
    let to_word = |p: u32| BitString::from_u64(n, p as u64).unwrap();
    if r == n {
        return CoveringCode::new(n, r, vec![to_word(0)]);
    }
    if r == 0 {
        return CoveringCode::new(n, 0, (0..1u32 << n).map(to_word).collect());
    }

    let points = 1usize << n;
    let offsets = ball_offsets(n, r);
    let mut buckets = GainBuckets::new(points, offsets.len() as u32);
    let mut covered = vec![false; points];
    let mut chosen = vec![false; points];
    let mut uncovered = points;
    let mut code = Vec::new();

    while uncovered > 0 {
        let c = buckets
            .pop_max()
            .expect("an uncovered point always has a positive-gain centre");
        chosen[c as usize] = true;
        code.push(c);
        for &off in &offsets {
            let p = c ^ off;
            if covered[p as usize] {
                continue;
            }
            covered[p as usize] = true;
            uncovered -= 1;
            // every centre whose ball contains p loses one unit of gain
            for &off2 in &offsets {
                let q = p ^ off2;
                if !chosen[q as usize] {
                    buckets.decrement(q);
                }
            }
        }
    }
    CoveringCode::new(n, r, code.into_iter().map(to_word).collect())
}

/// Samples uniform codewords, `ceil(2^n / V (n ln 2 + ln(1/delta)))` of them
/// with `delta = 1 - confidence` (by the union bound the cover is complete
/// with probability at least `confidence`), then runs the sampled audit,
/// adding any uncovered witness as a codeword until an audit passes.
pub fn random_covering_code(
    n: usize,
    r: usize,
    confidence: f64,
    seed: u64,
) -> Result<CoveringCode> {
    if n == 0 {
        return Err(invalid("code length must be at least 1"));
    }
    if r == 0 || r > n {
        return Err(invalid(format!("radius must be in [1, {n}], got {r}")));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(invalid(format!(
            "confidence must be in (0, 1), got {confidence}"
        )));
    }
    if r == n {
        return CoveringCode::new(n, r, vec![BitString::zeros(n)?]);
    }
    let density_log2 = n as f64 - log2_ball_volume(n, r as i64)?;
    let target = 2f64.powf(density_log2)
        * (n as f64 * std::f64::consts::LN_2 + (1.0 / (1.0 - confidence)).ln());
    if target.is_nan() || target > RANDOM_CODE_MAX_SIZE {
        return Err(GhdError::ConstructionFailed(format!(
            "random code would need about {target:.3e} codewords"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut words = (0..target.ceil() as usize)
        .map(|_| random_bitstring(n, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    for round in 0..64u64 {
        let code = CoveringCode::new(n, r, words)?;
        match audit_sampled(&code, AUDIT_SAMPLES, derive_seed(seed, round))? {
            None => return Ok(code),
            Some(witness) => {
                words = code.codewords;
                words.push(witness);
            }
        }
    }
    Err(GhdError::ConstructionFailed(
        "sampled audit still failing after 64 repair rounds".into(),
    ))
}

/// First point of `{0,1}^n` farther than the radius from every codeword, or
/// `None` if the code covers the cube.
pub fn audit_exhaustive(code: &CoveringCode) -> Result<Option<BitString>> {
    let n = code.n;
    if n > EXHAUSTIVE_AUDIT_MAX_N {
        return Err(GhdError::SizeLimit {
            n,
            max: EXHAUSTIVE_AUDIT_MAX_N,
        });
    }
    let words: Vec<u64> = code.codewords.iter().map(|c| c.words()[0]).collect();
    let r = code.radius as u32;
    let misses = map_indices(Exec::default(), 1u64 << n, |z| {
        !words.iter().any(|&c| (c ^ z).count_ones() <= r)
    });
    Ok(misses
        .iter()
        .position(|&m| m)
        .map(|z| BitString::from_u64(n, z as u64).unwrap()))
}

/// Checks `samples` uniform points; returns an uncovered one if found.
pub fn audit_sampled(code: &CoveringCode, samples: u64, seed: u64) -> Result<Option<BitString>> {
    let points = map_indices(Exec::default(), samples, |i| {
        let mut rng = rng_from_seed(derive_seed(seed, i));
        let z = random_bitstring(code.n, &mut rng).unwrap();
        let nearest = nearest_codeword(code, &z).unwrap();
        (nearest.distance > code.radius).then_some(z)
    });
    Ok(points.into_iter().flatten().next())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::greedy_size_factor;
    use crate::volume::ball_volume;
    use num_traits::ToPrimitive;

    fn volume(n: usize, r: usize) -> f64 {
        ball_volume(n, r as i64).unwrap().value.to_f64().unwrap()
    }

    #[test]
    fn extreme_radii() {
        for n in 1..=10 {
            assert_eq!(greedy_covering_code(n, n).unwrap().len(), 1);
            let all = greedy_covering_code(n, 0).unwrap();
            assert_eq!(all.len(), 1 << n);
            assert_eq!(all.index_width(), n as u32);
        }
        assert_eq!(random_covering_code(9, 9, 0.99, 1).unwrap().len(), 1);
    }

    #[test]
    fn hamming_length_seven() {
        let code = greedy_covering_code(7, 1).unwrap();
        assert!((16..=93).contains(&code.len()), "{}", code.len());
        assert_eq!(audit_exhaustive(&code).unwrap(), None);
    }

    #[test]
    fn size_guard() {
        assert_eq!(
            greedy_covering_code(23, 3).unwrap_err(),
            GhdError::SizeLimit {
                n: 23,
                max: GREEDY_MAX_N
            }
        );
        assert!(greedy_covering_code(5, 6).is_err());
    }

    #[test]
    fn greedy_codes_cover_and_respect_bounds() {
        for n in 1..=11 {
            for r in 0..=n {
                let code = greedy_covering_code(n, r).unwrap();
                assert_eq!(audit_exhaustive(&code).unwrap(), None, "n={n} r={r}");
                let v = volume(n, r);
                let cube = (1u64 << n) as f64;
                assert!(code.len() as f64 * v >= cube);
                assert!(
                    code.len() as f64 <= greedy_size_factor(n) * cube / v,
                    "n={n} r={r}"
                );
            }
        }
    }

    #[test]
    fn audit_finds_holes() {
        let words = vec![BitString::zeros(6).unwrap()];
        let code = CoveringCode::new(6, 2, words).unwrap();
        let hole = audit_exhaustive(&code).unwrap().unwrap();
        assert!(hole.count_ones() > 2);
        assert!(audit_sampled(&code, 1000, 0).unwrap().is_some());
    }

    #[test]
    fn nearest_codeword_cases() {
        let code = greedy_covering_code(7, 1).unwrap();
        for (i, c) in code.codewords().iter().enumerate() {
            assert_eq!(
                nearest_codeword(&code, c).unwrap(),
                Nearest {
                    index: i,
                    distance: 0
                }
            );
        }
        let all = greedy_covering_code(5, 0).unwrap();
        let x: BitString = "10110".parse().unwrap();
        assert_eq!(nearest_codeword(&all, &x).unwrap().distance, 0);
        let mut rng = rng_from_seed(3);
        for _ in 0..500 {
            let x = random_bitstring(7, &mut rng).unwrap();
            assert!(nearest_codeword(&code, &x).unwrap().distance <= 1);
        }
        // ties resolve to the lower index
        let two =
            CoveringCode::new(2, 1, vec!["00".parse().unwrap(), "11".parse().unwrap()]).unwrap();
        assert_eq!(
            nearest_codeword(&two, &"01".parse().unwrap()).unwrap(),
            Nearest {
                index: 0,
                distance: 1
            }
        );
        assert!(nearest_codeword(&two, &"011".parse().unwrap()).is_err());
    }

    #[test]
    fn random_codes_pass_audit() {
        let code = random_covering_code(14, 7, 0.99, 5).unwrap();
        assert_eq!(audit_exhaustive(&code).unwrap(), None);
        assert!(code.len() < 64, "{}", code.len());
        let code = random_covering_code(30, 10, 0.99, 6).unwrap();
        assert_eq!(audit_sampled(&code, AUDIT_SAMPLES, 12345).unwrap(), None);
        assert!(code.len() as f64 >= 2f64.powf(30.0 - log2_ball_volume(30, 10).unwrap()));
        assert!(random_covering_code(100, 3, 0.99, 0).is_err());
        assert!(random_covering_code(10, 0, 0.99, 0).is_err());
        assert!(random_covering_code(10, 2, 1.0, 0).is_err());
    }

    #[test]
    fn text_round_trip() {
        let code = greedy_covering_code(9, 2).unwrap();
        let text = code.to_text();
        assert!(text.starts_with(&format!("covering-code n=9 r=2 size={}\n", code.len())));
        assert_eq!(CoveringCode::from_text(&text).unwrap(), code);
        assert!(CoveringCode::from_text("covering-code n=3 r=1 size=2\n0\n").is_err());
        assert!(CoveringCode::from_text("code n=3\n").is_err());
        assert!(CoveringCode::from_text("").is_err());
    }
}
