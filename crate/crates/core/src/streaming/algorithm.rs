use crate::error::{invalid, GhdError, Result};
use crate::runtime::Payload;

/// A deterministic multi-pass streaming algorithm with serializable state.
///
/// The reduction moves the state between parties as `snapshot` payloads, so
/// the snapshot's bit length is the memory being metered. `restore` applied
/// to a snapshot must reproduce the snapshotted instance's future behavior
/// exactly.
pub trait StreamingAlgorithm {
    fn passes(&self) -> usize;

    /// Called at the start of every pass, zero based.
    fn begin_pass(&mut self, pass: usize);

    fn consume(&mut self, token: u64);

    fn snapshot(&self) -> Payload;

    fn restore(&mut self, snapshot: &Payload) -> Result<()>;

    /// The estimate `E` after the final pass.
    fn estimate(&self) -> u64;
}

fn restore_bitmap(bits: &mut [bool], snapshot: &Payload) -> Result<()> {
    if snapshot.len() != bits.len() {
        return Err(GhdError::ContractViolation(format!(
            "snapshot has {} bits, state has {}",
            snapshot.len(),
            bits.len()
        )));
    }
    bits.iter_mut()
        .zip(snapshot.iter())
        .for_each(|(b, s)| *b = s);
    Ok(())
}

fn snapshot_bitmap(bits: &[bool]) -> Payload {
    let mut p = Payload::with_capacity(bits.len());
    bits.iter().for_each(|&b| p.push_bit(b));
    p
}

/// One presence bit per universe element; exact, `S = |universe|`.
#[derive(Debug, Clone)]
pub struct ExactBitmap {
    seen: Vec<bool>,
    passes: usize,
}

impl ExactBitmap {
    pub fn new(universe: usize, passes: usize) -> Result<Self> {
        if universe == 0 || passes == 0 {
            return Err(invalid("universe and pass count must be positive"));
        }
        Ok(Self {
            seen: vec![false; universe],
            passes,
        })
    }
}

impl StreamingAlgorithm for ExactBitmap {
    fn passes(&self) -> usize {
        self.passes
    }

    fn begin_pass(&mut self, _pass: usize) {}

    fn consume(&mut self, token: u64) {
        self.seen[token as usize - 1] = true;
    }

    fn snapshot(&self) -> Payload {
        snapshot_bitmap(&self.seen)
    }

    fn restore(&mut self, snapshot: &Payload) -> Result<()> {
        restore_bitmap(&mut self.seen, snapshot)
    }

    fn estimate(&self) -> u64 {
        self.seen.iter().filter(|&&b| b).count() as u64
    }
}

/// Folds the universe onto `width` buckets (`(token - 1) mod width`) and
/// scales the bucket count back up. Too small to be a valid approximation;
/// exists to be caught by the falsification harness.
#[derive(Debug, Clone)]
pub struct TruncatedBitmap {
    seen: Vec<bool>,
    universe: usize,
    passes: usize,
}

impl TruncatedBitmap {
    pub fn new(universe: usize, width: usize, passes: usize) -> Result<Self> {
        if universe == 0 || width == 0 || passes == 0 {
            return Err(invalid("universe, width and pass count must be positive"));
        }
        Ok(Self {
            seen: vec![false; width],
            universe,
            passes,
        })
    }
}

impl StreamingAlgorithm for TruncatedBitmap {
    fn passes(&self) -> usize {
        self.passes
    }

    fn begin_pass(&mut self, _pass: usize) {}

    fn consume(&mut self, token: u64) {
        let w = self.seen.len();
        self.seen[(token as usize - 1) % w] = true;
    }

    fn snapshot(&self) -> Payload {
        snapshot_bitmap(&self.seen)
    }

    fn restore(&mut self, snapshot: &Payload) -> Result<()> {
        restore_bitmap(&mut self.seen, snapshot)
    }

    fn estimate(&self) -> u64 {
        let filled = self.seen.iter().filter(|&&b| b).count();
        (filled * self.universe).div_ceil(self.seen.len()) as u64
    }
}
