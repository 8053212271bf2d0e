//! Public-coin sampling baseline: compare `m` shared random coordinates and
//! threshold the mismatch fraction at `(L + U) / 2n`.

use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, GhdError, Result};
use crate::runtime::{Move, Party, PartyView, Payload, Protocol, SharedStream};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SamplingRate {
    /// `m = ceil(2 s n^2 / (U - L)^2)`, the two-sided Hoeffding count.
    Provable,
    /// `m = ceil(C s n U / (U - L)^2)`; only validated empirically.
    Multiplicative { constant: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamplingParams {
    pub n: usize,
    pub lower: usize,
    pub upper: usize,
    pub s: f64,
    pub trials: u64,
    pub threshold: f64,
    pub rate: SamplingRate,
}

pub fn derive_sampling_params(
    n: usize,
    lower: usize,
    upper: usize,
    s: f64,
) -> Result<SamplingParams> {
    derive_sampling_params_with(n, lower, upper, s, SamplingRate::Provable)
}

pub fn derive_sampling_params_with(
    n: usize,
    lower: usize,
    upper: usize,
    s: f64,
    rate: SamplingRate,
) -> Result<SamplingParams> {
    if n == 0 || lower >= upper || upper > n {
        return Err(invalid(format!(
            "need 0 <= L < U <= n, got L={lower} U={upper} n={n}"
        )));
    }
    if !(s.is_finite() && s > 0.0) {
        return Err(invalid(format!("s must be positive, got {s}")));
    }
    let gap = (upper - lower) as f64;
    let nf = n as f64;
    let raw = match rate {
        SamplingRate::Provable => 2.0 * s * nf * nf / (gap * gap),
        SamplingRate::Multiplicative { constant } => {
            if !(constant.is_finite() && constant > 0.0) {
                return Err(invalid(format!(
                    "rate constant must be positive, got {constant}"
                )));
            }
            constant * s * nf * upper as f64 / (gap * gap)
        }
    };
    let trials = (raw.ceil() as u64).max(1);
    Ok(SamplingParams {
        n,
        lower,
        upper,
        s,
        trials,
        threshold: (lower + upper) as f64 / (2.0 * nf),
        rate,
    })
}

impl SamplingParams {
    /// `m` answer bits from Alice plus Bob's output bit.
    pub fn cost(&self) -> u64 {
        self.trials + 1
    }

    /// Bob's rule: output 1 iff `mismatches / m * n > (L + U) / 2`.
    pub fn decide(&self, mismatches: u64) -> bool {
        2 * mismatches as u128 * self.n as u128
            > (self.lower + self.upper) as u128 * self.trials as u128
    }
}

/// The `m` coordinates both parties read off the shared stream, with
/// replacement.
pub fn sampled_indices(params: &SamplingParams, stream: &mut SharedStream) -> Vec<usize> {
    (0..params.trials)
        .map(|_| stream.random_range(0..params.n))
        .collect()
}

#[derive(Debug, Clone, Copy)]
pub struct SamplingProtocol {
    pub params: SamplingParams,
}

impl SamplingProtocol {
    pub fn new(params: SamplingParams) -> Self {
        Self { params }
    }
}

pub struct SamplingAlice {
    params: SamplingParams,
}

pub struct SamplingBob {
    params: SamplingParams,
}

impl Party for SamplingAlice {
    fn respond(&mut self, view: &mut PartyView<'_>, _: &Payload) -> Result<Move> {
        let idx = sampled_indices(&self.params, view.shared());
        let x = view.input();
        let mut msg = Payload::with_capacity(idx.len());
        for i in idx {
            msg.push_bit(x.get(i));
        }
        Ok(Move::Send(msg))
    }
}

impl Party for SamplingBob {
    fn respond(&mut self, view: &mut PartyView<'_>, incoming: &Payload) -> Result<Move> {
        if incoming.len() as u64 != self.params.trials {
            return Err(GhdError::ContractViolation(format!(
                "expected {} sampled bits, received {}",
                self.params.trials,
                incoming.len()
            )));
        }
        let idx = sampled_indices(&self.params, view.shared());
        let y = view.input();
        let mismatches = idx
            .into_iter()
            .zip(incoming.iter())
            .filter(|&(i, xi)| y.get(i) != xi)
            .count() as u64;
        Ok(Move::Output(self.params.decide(mismatches)))
    }
}

impl Protocol for SamplingProtocol {
    type Alice = SamplingAlice;
    type Bob = SamplingBob;

    fn input_len(&self) -> usize {
        self.params.n
    }

    fn parties(&self) -> (SamplingAlice, SamplingBob) {
        (
            SamplingAlice {
                params: self.params,
            },
            SamplingBob {
                params: self.params,
            },
        )
    }

    fn declared_cost(&self) -> u64 {
        self.params.cost()
    }
}
