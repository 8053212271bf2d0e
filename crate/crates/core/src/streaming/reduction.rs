use serde::Serialize;

use super::algorithm::StreamingAlgorithm;
use super::stream::{encode_streams, exact_f0, TokenStream};
use crate::bits::{hamming_distance, BitString};
use crate::error::{invalid, GhdError, Result};
use crate::instance::random_pair_at_distance;
use crate::par::derive_seed;
use crate::runtime::{
    run_protocol, ChannelLedger, Move, Party, PartyView, Payload, RunConfig, SharedRandomness,
};
use crate::volume::log2_ball_volume;

fn check_c(c: f64) -> Result<()> {
    if !(c > 1.0 && c < 2.0) {
        return Err(invalid(format!(
            "approximation factor must be in (1, 2), got {c}"
        )));
    }
    Ok(())
}

/// `t = ceil(n (c - 1))`. The product is nudged down by 1e-9 first so that
/// values like `100 * 0.1 = 10.000000000000002` do not round up past the
/// intended integer.
pub fn distance_threshold(n: usize, c: f64) -> Result<usize> {
    check_c(c)?;
    let t = ((n as f64 * (c - 1.0)) - 1e-9).ceil().max(1.0) as usize;
    Ok(t.min(n))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionRun {
    pub n: usize,
    pub c: f64,
    pub t: usize,
    pub distance: usize,
    /// Exact distinct count of `u . v`.
    pub f0: usize,
    /// The algorithm's estimate `E`.
    pub estimate: u64,
    /// `S`: largest snapshot handed over, in bits.
    pub state_bits: u64,
    pub passes: usize,
    pub handoffs: u64,
    /// Ledger total: every snapshot plus Bob's answer bit.
    pub communication: u64,
    pub output: bool,
    #[serde(skip)]
    pub ledger: ChannelLedger,
}

impl ReductionRun {
    pub fn budget(&self) -> u64 {
        2 * self.passes as u64 * self.state_bits
    }
}

struct StreamParty<A> {
    algorithm: A,
    stream: TokenStream,
    passes: usize,
    pass: usize,
    max_state: u64,
    handoffs: u64,
    started: bool,
}

impl<A: StreamingAlgorithm> StreamParty<A> {
    fn new(algorithm: A, stream: TokenStream) -> Self {
        let passes = algorithm.passes();
        Self {
            algorithm,
            stream,
            passes,
            pass: 0,
            max_state: 0,
            handoffs: 0,
            started: false,
        }
    }

    fn feed(&mut self) {
        for &tok in self.stream.tokens() {
            self.algorithm.consume(tok);
        }
    }

    fn hand_over(&mut self) -> Move {
        let snap = self.algorithm.snapshot();
        self.max_state = self.max_state.max(snap.len() as u64);
        self.handoffs += 1;
        Move::Send(snap)
    }
}

/// Alice runs the `u` half of every pass.
struct AliceStream<A>(StreamParty<A>);

/// Bob runs the `v` half and, after the last pass, answers.
struct BobStream<A> {
    inner: StreamParty<A>,
    threshold: u64,
    estimate: Option<u64>,
}

impl<A: StreamingAlgorithm> Party for AliceStream<A> {
    fn respond(&mut self, _: &mut PartyView<'_>, incoming: &Payload) -> Result<Move> {
        let me = &mut self.0;
        if me.started {
            me.algorithm.restore(incoming)?;
            me.pass += 1;
        }
        me.started = true;
        me.algorithm.begin_pass(me.pass);
        me.feed();
        Ok(me.hand_over())
    }
}

impl<A: StreamingAlgorithm> Party for BobStream<A> {
    fn respond(&mut self, _: &mut PartyView<'_>, incoming: &Payload) -> Result<Move> {
        let me = &mut self.inner;
        me.algorithm.restore(incoming)?;
        me.feed();
        if me.pass + 1 == me.passes {
            let e = me.algorithm.estimate();
            self.estimate = Some(e);
            return Ok(Move::Output(e >= self.threshold));
        }
        me.pass += 1;
        Ok(me.hand_over())
    }
}

fn simulate<A, F>(factory: &F, c: f64, x: &BitString, y: &BitString) -> Result<ReductionRun>
where
    A: StreamingAlgorithm,
    F: Fn() -> A,
{
    let n = x.len();
    let t = distance_threshold(n, c)?;
    let (u, v) = encode_streams(x, y)?;
    let f0 = exact_f0(&u.concat(&v)?);
    let distance = hamming_distance(x, y)?;

    let alice_alg = factory();
    let passes = alice_alg.passes();
    if passes == 0 {
        return Err(invalid("algorithm must make at least one pass"));
    }
    let mut alice = AliceStream(StreamParty::new(alice_alg, u));
    let mut bob = BobStream {
        inner: StreamParty::new(factory(), v),
        threshold: (n + t) as u64,
        estimate: None,
    };
    let config = RunConfig {
        bit_budget: Some(u64::MAX),
    };
    let outcome = run_protocol(&mut alice, &mut bob, x, y, SharedRandomness::new(0), config)?;
    let estimate = bob
        .estimate
        .ok_or_else(|| GhdError::ContractViolation("Bob never produced an estimate".into()))?;
    let state_bits = alice.0.max_state.max(bob.inner.max_state);
    Ok(ReductionRun {
        n,
        c,
        t,
        distance,
        f0,
        estimate,
        state_bits,
        passes,
        handoffs: alice.0.handoffs + bob.inner.handoffs,
        communication: outcome.ledger.total(),
        output: outcome.output,
        ledger: outcome.ledger,
    })
}

/// Decides `x = y` vs `H(x, y) >= t` with a streaming algorithm: output 0
/// iff `E < n + t`. Runs the simulation twice from fresh instances and
/// rejects algorithms whose runs differ.
pub fn ghd_via_streaming<A, F>(
    factory: F,
    c: f64,
    x: &BitString,
    y: &BitString,
) -> Result<(bool, ReductionRun)>
where
    A: StreamingAlgorithm,
    F: Fn() -> A,
{
    check_c(c)?;
    let run = simulate(&factory, c, x, y)?;
    let replay = simulate(&factory, c, x, y)?;
    if run.estimate != replay.estimate || run.ledger != replay.ledger {
        return Err(GhdError::ContractViolation(
            "streaming algorithm is not deterministic".into(),
        ));
    }
    if run.communication > run.budget() {
        return Err(GhdError::ContractViolation(format!(
            "{} bits exchanged, above 2pS = {}",
            run.communication,
            run.budget()
        )));
    }
    Ok((run.output, run))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StreamBound {
    pub t: usize,
    /// `(n - log2 V(n, floor(t/2))) / (2p)`: any correct algorithm needs
    /// `S` at least this.
    pub exact: f64,
    /// `n (2 - c)^2 / p`, the asymptotic form.
    pub asymptotic: f64,
}

pub fn space_lower_bound(n: usize, c: f64, p: usize) -> Result<StreamBound> {
    check_c(c)?;
    if p == 0 || n == 0 {
        return Err(invalid("n and p must be positive"));
    }
    let t = distance_threshold(n, c)?;
    let deterministic = n as f64 - log2_ball_volume(n, (t / 2) as i64)?;
    Ok(StreamBound {
        t,
        exact: deterministic / (2.0 * p as f64),
        asymptotic: n as f64 * (2.0 - c).powi(2) / p as f64,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub x: BitString,
    pub y: BitString,
    pub expected: bool,
    pub run: ReductionRun,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FalsificationReport {
    /// `2 p S < n - log2 V(n, floor(t/2))`: the algorithm's budget is below
    /// the deterministic lower bound, so some promise pair must fail.
    pub must_err: bool,
    pub tries: u64,
    /// `None` is inconclusive, not a proof of correctness.
    pub counterexample: Option<Counterexample>,
}

/// Random search for a promise pair the algorithm gets wrong. Even tries use
/// `x = y`; odd tries use a distance drawn from `[t, n]`.
pub fn search_counterexample<A, F>(
    factory: F,
    n: usize,
    c: f64,
    tries: u64,
    seed: u64,
) -> Result<FalsificationReport>
where
    A: StreamingAlgorithm,
    F: Fn() -> A,
{
    let t = distance_threshold(n, c)?;
    let lower = n as f64 - log2_ball_volume(n, (t / 2) as i64)?;
    let mut must_err = None;
    for i in 0..tries {
        let s = derive_seed(seed, i);
        let d = if i % 2 == 0 {
            0
        } else {
            t + (s as usize) % (n - t + 1)
        };
        let (x, y) = random_pair_at_distance(n, d, s)?;
        let (out, run) = ghd_via_streaming(&factory, c, &x, &y)?;
        must_err.get_or_insert((run.budget() as f64) < lower);
        let expected = d > 0;
        if out != expected {
            return Ok(FalsificationReport {
                must_err: must_err.unwrap(),
                tries: i + 1,
                counterexample: Some(Counterexample {
                    x,
                    y,
                    expected,
                    run,
                }),
            });
        }
    }
    Ok(FalsificationReport {
        must_err: must_err.unwrap_or(false),
        tries,
        counterexample: None,
    })
}
