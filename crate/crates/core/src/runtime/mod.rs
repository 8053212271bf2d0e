//! Two-party protocol execution over an instrumented channel.
//!
//! Protocols are written as a pair of [`Party`] strategies. The runtime hands
//! each party only its own input, its own cursor over the shared random
//! stream, and the bits the other side sent. Every bit crosses the
//! [`ChannelLedger`]; a party's final answer is announced as one more bit.

mod ledger;
mod measure;
mod payload;
mod shared;

pub use ledger::{ChannelLedger, Direction, Message};
pub use measure::{
    estimate_error_rate, estimate_error_rate_with, measure_worst_case_cost, ErrorEstimate,
};
pub use payload::{Payload, PayloadReader};
pub use shared::{SharedRandomness, SharedStream};

use crate::bits::BitString;
use crate::error::{GhdError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Alice,
    Bob,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Alice => Side::Bob,
            Side::Bob => Side::Alice,
        }
    }

    fn outgoing(self) -> Direction {
        match self {
            Side::Alice => Direction::AliceToBob,
            Side::Bob => Direction::BobToAlice,
        }
    }
}

pub enum Move {
    /// Send bits to the other party and hand over the turn. An empty payload
    /// is a free pass.
    Send(Payload),
    /// Terminate with this output; charged as a single announced bit.
    Output(bool),
}

/// What a party can see.
pub struct PartyView<'a> {
    side: Side,
    input: &'a BitString,
    shared: SharedStream,
}

impl<'a> PartyView<'a> {
    pub fn side(&self) -> Side {
        self.side
    }

    pub fn input(&self) -> &'a BitString {
        self.input
    }

    /// Checked access by side; asking for the other party's input is a
    /// contract violation.
    pub fn input_of(&self, side: Side) -> Result<&'a BitString> {
        if side == self.side {
            Ok(self.input)
        } else {
            Err(GhdError::ContractViolation(format!(
                "{:?} tried to read {:?}'s input",
                self.side, side
            )))
        }
    }

    pub fn shared(&mut self) -> &mut SharedStream {
        &mut self.shared
    }
}

pub trait Party {
    /// Called on each of this party's turns with the last message received
    /// (empty on Alice's first turn).
    fn respond(&mut self, view: &mut PartyView<'_>, incoming: &Payload) -> Result<Move>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolOutcome {
    pub output: bool,
    pub ledger: ChannelLedger,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunConfig {
    /// Defaults to `64 n^2` bits.
    pub bit_budget: Option<u64>,
}

pub fn default_bit_budget(n: usize) -> u64 {
    64 * (n as u64) * (n as u64)
}

/// Runs `alice` against `bob` on `(x, y)`. Alice moves first.
pub fn run_protocol<A: Party, B: Party>(
    alice: &mut A,
    bob: &mut B,
    x: &BitString,
    y: &BitString,
    shared: SharedRandomness,
    config: RunConfig,
) -> Result<ProtocolOutcome> {
    if x.len() != y.len() {
        return Err(GhdError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let budget = config
        .bit_budget
        .unwrap_or_else(|| default_bit_budget(x.len()));
    // Empty sends are free, so turns are capped separately.
    let max_turns = budget.saturating_add(2).max(16);

    let mut alice_view = PartyView {
        side: Side::Alice,
        input: x,
        shared: shared.stream(),
    };
    let mut bob_view = PartyView {
        side: Side::Bob,
        input: y,
        shared: shared.stream(),
    };
    let mut ledger = ChannelLedger::new();
    let mut incoming = Payload::new();
    let mut turn = Side::Alice;

    for _ in 0..max_turns {
        let mv = match turn {
            Side::Alice => alice.respond(&mut alice_view, &incoming)?,
            Side::Bob => bob.respond(&mut bob_view, &incoming)?,
        };
        match mv {
            Move::Send(payload) => {
                ledger.record(turn.outgoing(), payload.clone());
                if ledger.total() > budget {
                    return Err(GhdError::BudgetExceeded { budget });
                }
                incoming = payload;
                turn = turn.other();
            }
            Move::Output(bit) => {
                ledger.record(turn.outgoing(), Payload::bit(bit));
                if ledger.total() > budget {
                    return Err(GhdError::BudgetExceeded { budget });
                }
                return Ok(ProtocolOutcome {
                    output: bit,
                    ledger,
                });
            }
        }
    }
    Err(GhdError::BudgetExceeded { budget })
}

/// A protocol: a factory for a fresh pair of strategies plus its declared
/// worst-case cost.
pub trait Protocol: Sync {
    type Alice: Party;
    type Bob: Party;

    fn input_len(&self) -> usize;

    fn parties(&self) -> (Self::Alice, Self::Bob);

    /// Upper bound on the ledger total of any run.
    fn declared_cost(&self) -> u64;

    fn run_config(&self) -> RunConfig {
        RunConfig::default()
    }
}

/// Runs a protocol and checks the ledger against its declared cost.
pub fn run<P: Protocol + ?Sized>(
    protocol: &P,
    x: &BitString,
    y: &BitString,
    shared: SharedRandomness,
) -> Result<ProtocolOutcome> {
    if x.len() != protocol.input_len() {
        return Err(GhdError::LengthMismatch {
            left: x.len(),
            right: protocol.input_len(),
        });
    }
    let (mut alice, mut bob) = protocol.parties();
    let outcome = run_protocol(&mut alice, &mut bob, x, y, shared, protocol.run_config())?;
    if outcome.ledger.total() > protocol.declared_cost() {
        return Err(GhdError::ContractViolation(format!(
            "run used {} bits, declared worst case is {}",
            outcome.ledger.total(),
            protocol.declared_cost()
        )));
    }
    Ok(outcome)
}

/// Bob announces a fixed bit without any exchange.
#[derive(Debug, Clone, Copy)]
pub struct ConstantProtocol {
    pub n: usize,
    pub output: bool,
}

pub struct Silent;

impl Party for Silent {
    fn respond(&mut self, _: &mut PartyView<'_>, _: &Payload) -> Result<Move> {
        Ok(Move::Send(Payload::new()))
    }
}

pub struct Announce(pub bool);

impl Party for Announce {
    fn respond(&mut self, _: &mut PartyView<'_>, _: &Payload) -> Result<Move> {
        Ok(Move::Output(self.0))
    }
}

impl Protocol for ConstantProtocol {
    type Alice = Silent;
    type Bob = Announce;

    fn input_len(&self) -> usize {
        self.n
    }

    fn parties(&self) -> (Silent, Announce) {
        (Silent, Announce(self.output))
    }

    fn declared_cost(&self) -> u64 {
        1
    }
}

/// Alice sends `x` verbatim; Bob answers whether it differs from `y`.
#[derive(Debug, Clone, Copy)]
pub struct SendInputProtocol {
    pub n: usize,
}

pub struct SendInput;

impl Party for SendInput {
    fn respond(&mut self, view: &mut PartyView<'_>, _: &Payload) -> Result<Move> {
        let mut p = Payload::with_capacity(view.input().len());
        view.input().iter().for_each(|b| p.push_bit(b));
        Ok(Move::Send(p))
    }
}

pub struct CompareInput;

impl Party for CompareInput {
    fn respond(&mut self, view: &mut PartyView<'_>, incoming: &Payload) -> Result<Move> {
        let y = view.input();
        if incoming.len() != y.len() {
            return Err(GhdError::ContractViolation(format!(
                "expected {} bits, received {}",
                y.len(),
                incoming.len()
            )));
        }
        Ok(Move::Output(
            incoming.iter().zip(y.iter()).any(|(a, b)| a != b),
        ))
    }
}

impl Protocol for SendInputProtocol {
    type Alice = SendInput;
    type Bob = CompareInput;

    fn input_len(&self) -> usize {
        self.n
    }

    fn parties(&self) -> (SendInput, CompareInput) {
        (SendInput, CompareInput)
    }

    fn declared_cost(&self) -> u64 {
        self.n as u64 + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn send_everything_baseline() {
        let x = bs("1011");
        let out = run(
            &SendInputProtocol { n: 4 },
            &x,
            &x,
            SharedRandomness::new(0),
        )
        .unwrap();
        assert!(!out.output);
        assert_eq!(out.ledger.bits_alice_to_bob(), 4);
        assert_eq!(out.ledger.bits_bob_to_alice(), 1);
        assert_eq!(out.ledger.rounds(), 2);
        let out = run(
            &SendInputProtocol { n: 4 },
            &x,
            &bs("1001"),
            SharedRandomness::new(0),
        )
        .unwrap();
        assert!(out.output);
    }

    #[test]
    fn constant_protocol_costs_one_bit() {
        let x = bs("0110");
        let out = run(
            &ConstantProtocol { n: 4, output: true },
            &x,
            &x,
            SharedRandomness::new(3),
        )
        .unwrap();
        assert!(out.output);
        assert_eq!(out.ledger.total(), 1);
        assert_eq!(out.ledger.bits_bob_to_alice(), 1);
        assert_eq!(out.ledger.rounds(), 1);
    }

    struct Chatter;

    impl Party for Chatter {
        fn respond(&mut self, _: &mut PartyView<'_>, _: &Payload) -> Result<Move> {
            Ok(Move::Send(Payload::bit(true)))
        }
    }

    #[test]
    fn runaway_exchange_hits_budget() {
        let x = bs("01");
        let err = run_protocol(
            &mut Chatter,
            &mut Chatter,
            &x,
            &x,
            SharedRandomness::new(0),
            RunConfig::default(),
        )
        .unwrap_err();
        assert_eq!(err, GhdError::BudgetExceeded { budget: 256 });
        let err = run_protocol(
            &mut Silent,
            &mut Silent,
            &x,
            &x,
            SharedRandomness::new(0),
            RunConfig {
                bit_budget: Some(10),
            },
        )
        .unwrap_err();
        assert_eq!(err, GhdError::BudgetExceeded { budget: 10 });
    }

    struct Peeker;

    impl Party for Peeker {
        fn respond(&mut self, view: &mut PartyView<'_>, _: &Payload) -> Result<Move> {
            let other = view.side().other();
            let _ = view.input_of(other)?;
            Ok(Move::Output(false))
        }
    }

    #[test]
    fn reading_other_input_is_a_contract_violation() {
        let x = bs("01");
        let err = run_protocol(
            &mut Peeker,
            &mut Announce(true),
            &x,
            &x,
            SharedRandomness::new(0),
            RunConfig::default(),
        )
        .unwrap_err();
        assert!(matches!(err, GhdError::ContractViolation(_)));
    }

    #[test]
    fn mismatched_inputs_rejected() {
        let err = run(
            &SendInputProtocol { n: 2 },
            &bs("01"),
            &bs("011"),
            SharedRandomness::new(0),
        )
        .unwrap_err();
        assert!(matches!(err, GhdError::LengthMismatch { .. }));
        let err = run(
            &SendInputProtocol { n: 3 },
            &bs("01"),
            &bs("01"),
            SharedRandomness::new(0),
        )
        .unwrap_err();
        assert!(matches!(err, GhdError::LengthMismatch { .. }));
    }

    struct Overspender;

    impl Protocol for Overspender {
        type Alice = SendInput;
        type Bob = CompareInput;
        fn input_len(&self) -> usize {
            4
        }
        fn parties(&self) -> (SendInput, CompareInput) {
            (SendInput, CompareInput)
        }
        fn declared_cost(&self) -> u64 {
            2
        }
    }

    #[test]
    fn declared_cost_is_enforced() {
        let x = bs("0101");
        let err = run(&Overspender, &x, &x, SharedRandomness::new(0)).unwrap_err();
        assert!(matches!(err, GhdError::ContractViolation(_)));
    }
}
