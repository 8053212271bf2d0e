use std::fmt::Write;

use serde::Serialize;

use super::payload::Payload;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    AliceToBob,
    BobToAlice,
}

impl Direction {
    pub fn tag(self) -> &'static str {
        match self {
            Direction::AliceToBob => "A->B",
            Direction::BobToAlice => "B->A",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    pub direction: Direction,
    pub payload: Payload,
}

/// Every bit sent over the channel, in order, with its direction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChannelLedger {
    bits_alice_to_bob: u64,
    bits_bob_to_alice: u64,
    rounds: u64,
    messages: Vec<Message>,
}

impl ChannelLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Empty payloads are not recorded and do not start a round.
    pub fn record(&mut self, direction: Direction, payload: Payload) {
        if payload.is_empty() {
            return;
        }
        let bits = payload.len() as u64;
        match direction {
            Direction::AliceToBob => self.bits_alice_to_bob += bits,
            Direction::BobToAlice => self.bits_bob_to_alice += bits,
        }
        if self.messages.last().map(|m| m.direction) != Some(direction) {
            self.rounds += 1;
        }
        self.messages.push(Message { direction, payload });
    }

    pub fn bits_alice_to_bob(&self) -> u64 {
        self.bits_alice_to_bob
    }

    pub fn bits_bob_to_alice(&self) -> u64 {
        self.bits_bob_to_alice
    }

    pub fn total(&self) -> u64 {
        self.bits_alice_to_bob + self.bits_bob_to_alice
    }

    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    /// All transcript bits in order.
    pub fn transcript(&self) -> impl Iterator<Item = (Direction, bool)> + '_ {
        self.messages
            .iter()
            .flat_map(|m| m.payload.iter().map(move |b| (m.direction, b)))
    }

    /// One line per message: `direction bitcount hex-payload`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for m in &self.messages {
            writeln!(
                out,
                "{} {} {}",
                m.direction.tag(),
                m.payload.len(),
                m.payload.to_hex()
            )
            .unwrap();
        }
        out
    }
}
