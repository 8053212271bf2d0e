use rand::RngCore;
use serde::Serialize;

use super::params::{sketch_cost, SketchParams};
use super::sphere::gaussian_unit_vector;
use super::wire::{quantize_projection, SketchMessage};
use crate::bits::BitString;
use crate::error::{invalid, GhdError, Result};
use crate::runtime::{Move, Party, PartyView, Payload, Protocol, SharedRandomness};

/// `<bits restricted to block, u>`; padding positions past `n` are zero.
fn block_projection(bits: &BitString, block: usize, block_len: usize, u: &[f64]) -> f64 {
    let start = block * block_len;
    let end = (start + block_len).min(bits.len());
    (start..end)
        .filter(|&pos| bits.get(pos))
        .map(|pos| u[pos - start])
        .sum()
}

fn check_len(bits: &BitString, params: &SketchParams) -> Result<()> {
    if bits.len() != params.n {
        return Err(GhdError::LengthMismatch {
            left: bits.len(),
            right: params.n,
        });
    }
    Ok(())
}

/// Alice's side: one shared sphere vector per block, projections quantized
/// to the `1/n^3` grid.
pub fn alice_sketch<R: RngCore + ?Sized>(
    x: &BitString,
    params: &SketchParams,
    stream: &mut R,
) -> Result<SketchMessage> {
    check_len(x, params)?;
    if params.trivial_mode {
        return Err(invalid("no sketch in trivial mode; x is sent verbatim"));
    }
    let values = (0..params.blocks)
        .map(|i| {
            let u = gaussian_unit_vector(params.block_len, stream)?;
            quantize_projection(block_projection(x, i, params.block_len, &u), params.n)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SketchMessage { values })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BobDecision {
    pub decision: bool,
    pub t_prime: f64,
}

/// Bob's side. `stream` must sit where Alice's started.
pub fn bob_decide<R: RngCore + ?Sized>(
    y: &BitString,
    msg: &SketchMessage,
    params: &SketchParams,
    stream: &mut R,
) -> Result<BobDecision> {
    check_len(y, params)?;
    if msg.values.len() != params.blocks {
        return Err(GhdError::ContractViolation(format!(
            "{} sketch values for {} blocks",
            msg.values.len(),
            params.blocks
        )));
    }
    let mut t_prime = 0.0;
    for i in 0..params.blocks {
        let u = gaussian_unit_vector(params.block_len, stream)?;
        let d = msg.grid_value(i, params.grid_scale) - block_projection(y, i, params.block_len, &u);
        t_prime += d * d;
    }
    Ok(BobDecision {
        decision: t_prime > params.threshold,
        t_prime,
    })
}

/// Both statistics of one run, for auditing. Needs both inputs, so it is
/// never part of the protocol itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SketchStatistics {
    /// `sum_i <alpha_i - beta_i, U_i>^2`
    pub t: f64,
    /// `sum_i (r_i - <beta_i, U_i>)^2`
    pub t_prime: f64,
    pub decision: bool,
}

pub fn sketch_statistics(
    x: &BitString,
    y: &BitString,
    msg: &SketchMessage,
    params: &SketchParams,
    shared: SharedRandomness,
) -> Result<SketchStatistics> {
    check_len(x, params)?;
    check_len(y, params)?;
    let bob = bob_decide(y, msg, params, &mut shared.stream())?;
    let mut stream = shared.stream();
    let a = params.block_len;
    let mut t = 0.0;
    for i in 0..params.blocks {
        let u = gaussian_unit_vector(a, &mut stream)?;
        let start = i * a;
        let diff: f64 = (start..(start + a).min(params.n))
            .map(|pos| (x.get(pos) as i8 - y.get(pos) as i8) as f64 * u[pos - start])
            .sum();
        t += diff * diff;
    }
    Ok(SketchStatistics {
        t,
        t_prime: bob.t_prime,
        decision: bob.decision,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct SketchProtocol {
    pub params: SketchParams,
}

impl SketchProtocol {
    pub fn new(params: SketchParams) -> Self {
        Self { params }
    }
}

pub struct SketchAlice {
    params: SketchParams,
}

pub struct SketchBob {
    params: SketchParams,
}

impl Party for SketchAlice {
    fn respond(&mut self, view: &mut PartyView<'_>, _: &Payload) -> Result<Move> {
        let x = view.input();
        if self.params.trivial_mode {
            let mut p = Payload::with_capacity(x.len());
            x.iter().for_each(|b| p.push_bit(b));
            return Ok(Move::Send(p));
        }
        let msg = alice_sketch(x, &self.params, view.shared())?;
        Ok(Move::Send(msg.encode(self.params.word_width)?))
    }
}

impl Party for SketchBob {
    fn respond(&mut self, view: &mut PartyView<'_>, incoming: &Payload) -> Result<Move> {
        let y = view.input();
        if self.params.trivial_mode {
            if incoming.len() != y.len() {
                return Err(GhdError::ContractViolation(format!(
                    "expected {} bits of x, received {}",
                    y.len(),
                    incoming.len()
                )));
            }
            let distance = incoming
                .iter()
                .zip(y.iter())
                .filter(|(a, b)| a != b)
                .count();
            return Ok(Move::Output(distance > self.params.lower));
        }
        let msg = SketchMessage::decode(incoming, self.params.blocks, self.params.word_width)?;
        let d = bob_decide(y, &msg, &self.params, view.shared())?;
        Ok(Move::Output(d.decision))
    }
}

impl Protocol for SketchProtocol {
    type Alice = SketchAlice;
    type Bob = SketchBob;

    fn input_len(&self) -> usize {
        self.params.n
    }

    fn parties(&self) -> (SketchAlice, SketchBob) {
        (
            SketchAlice {
                params: self.params,
            },
            SketchBob {
                params: self.params,
            },
        )
    }

    fn declared_cost(&self) -> u64 {
        sketch_cost(&self.params)
    }
}
