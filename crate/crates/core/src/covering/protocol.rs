use std::sync::Arc;

use serde::Serialize;

use super::code::{greedy_covering_code, nearest_codeword, CoveringCode};
use crate::error::{invalid, GhdError, Result};
use crate::runtime::{Move, Party, PartyView, Payload, Protocol};
use crate::volume::log2_ball_volume;

#[derive(Debug, Clone)]
pub struct DetProtocolParams {
    pub n: usize,
    pub t: usize,
    /// `floor((t - 1) / 2)`, equal to the code radius.
    pub decision_radius: usize,
    pub code: Arc<CoveringCode>,
}

impl DetProtocolParams {
    pub fn new(n: usize, t: usize, code: Arc<CoveringCode>) -> Result<Self> {
        if t == 0 || t > n {
            return Err(invalid(format!("t must be in [1, {n}], got {t}")));
        }
        let decision_radius = (t - 1) / 2;
        if code.n() != n || code.radius() != decision_radius {
            return Err(invalid(format!(
                "need a length-{n} code of radius {decision_radius}, got length {} radius {}",
                code.n(),
                code.radius()
            )));
        }
        Ok(Self {
            n,
            t,
            decision_radius,
            code,
        })
    }

    /// Builds the greedy code of radius `floor((t-1)/2)`.
    pub fn greedy(n: usize, t: usize) -> Result<Self> {
        if t == 0 || t > n {
            return Err(invalid(format!("t must be in [1, {n}], got {t}")));
        }
        let code = greedy_covering_code(n, (t - 1) / 2)?;
        Self::new(n, t, Arc::new(code))
    }

    /// `ceil(log2 |C|) + 1`.
    pub fn cost(&self) -> u64 {
        self.code.index_width() as u64 + 1
    }
}

#[derive(Debug, Clone)]
pub struct DetProtocol {
    pub params: DetProtocolParams,
}

impl DetProtocol {
    pub fn new(params: DetProtocolParams) -> Self {
        Self { params }
    }
}

pub struct DetAlice {
    code: Arc<CoveringCode>,
}

pub struct DetBob {
    code: Arc<CoveringCode>,
    radius: usize,
}

impl Party for DetAlice {
    fn respond(&mut self, view: &mut PartyView<'_>, _: &Payload) -> Result<Move> {
        let nearest = nearest_codeword(&self.code, view.input())?;
        let width = self.code.index_width();
        let mut p = Payload::with_capacity(width as usize);
        p.push_uint(nearest.index as u64, width);
        Ok(Move::Send(p))
    }
}

impl Party for DetBob {
    fn respond(&mut self, view: &mut PartyView<'_>, incoming: &Payload) -> Result<Move> {
        let width = self.code.index_width();
        if incoming.len() != width as usize {
            return Err(GhdError::ContractViolation(format!(
                "expected a {width}-bit index, received {} bits",
                incoming.len()
            )));
        }
        let index = incoming.reader().read_uint(width).unwrap() as usize;
        let c = self.code.codewords().get(index).ok_or_else(|| {
            GhdError::ContractViolation(format!("codeword index {index} out of range"))
        })?;
        let far = c.distance_unchecked(view.input()) > self.radius;
        Ok(Move::Output(far))
    }
}

impl Protocol for DetProtocol {
    type Alice = DetAlice;
    type Bob = DetBob;

    fn input_len(&self) -> usize {
        self.params.n
    }

    fn parties(&self) -> (DetAlice, DetBob) {
        (
            DetAlice {
                code: Arc::clone(&self.params.code),
            },
            DetBob {
                code: Arc::clone(&self.params.code),
                radius: self.params.decision_radius,
            },
        )
    }

    fn declared_cost(&self) -> u64 {
        self.params.cost()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetBounds {
    /// `n - log2 V(n, floor(t/2))`: no deterministic protocol does better.
    pub lower: f64,
    /// `n - log2 V(n, floor((t-1)/2)) + log2 n + 2`: what the greedy-code
    /// protocol is guaranteed to achieve.
    pub upper: f64,
}

/// Sandwich for the deterministic complexity with `L = 0`, `U = t`.
///
/// The upper constant comes from the greedy code: its index costs
/// `ceil(log2 |C|) <= log2 |C| + 1` bits, Bob answers with one more, and
/// `|C| <= (0.694 n + 1) 2^n / V` with `0.694 n + 1 <= n` once `n >= 4`.
pub fn det_complexity_bounds(n: usize, t: usize) -> Result<DetBounds> {
    if n == 0 || t == 0 || t > n {
        return Err(invalid(format!("t must be in [1, {n}], got {t}")));
    }
    let nf = n as f64;
    Ok(DetBounds {
        lower: nf - log2_ball_volume(n, (t / 2) as i64)?,
        upper: nf - log2_ball_volume(n, ((t - 1) / 2) as i64)? + nf.log2() + 2.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitString;
    use crate::instance::random_pair_at_distance;
    use crate::runtime::{measure_worst_case_cost, run, SharedRandomness};

    #[test]
    fn bounds_examples() {
        let b = det_complexity_bounds(10, 4).unwrap();
        assert!((b.lower - (10.0 - 56f64.log2())).abs() < 1e-12);
        assert!((b.lower - 4.1926).abs() < 1e-4);
        assert_eq!(det_complexity_bounds(12, 1).unwrap().lower, 12.0);
        // t = n even: V(n, n/2) > 2^(n-1), so the lower bound drops below 1
        assert!(det_complexity_bounds(20, 20).unwrap().lower < 1.0);
        assert!(det_complexity_bounds(10, 0).is_err());
        assert!(det_complexity_bounds(10, 11).is_err());
    }

    #[test]
    fn worst_case_cost_matches_index_width() {
        let params = DetProtocolParams::greedy(10, 4).unwrap();
        let expected = params.code.index_width() as u64 + 1;
        let proto = DetProtocol::new(params);
        let pairs: Vec<_> = (0..50)
            .map(|s| {
                random_pair_at_distance(10, if s % 2 == 0 { 0 } else { 4 + s as usize % 7 }, s)
                    .unwrap()
            })
            .collect();
        assert_eq!(
            measure_worst_case_cost(&proto, &pairs, 0).unwrap(),
            expected
        );
    }

    #[test]
    fn exact_on_promise_small() {
        for n in 1..=8usize {
            for t in 1..=n {
                let proto = DetProtocol::new(DetProtocolParams::greedy(n, t).unwrap());
                for a in 0..1u64 << n {
                    let x = BitString::from_u64(n, a).unwrap();
                    assert!(
                        !run(&proto, &x, &x, SharedRandomness::new(0))
                            .unwrap()
                            .output
                    );
                    for b in 0..1u64 << n {
                        if ((a ^ b).count_ones() as usize) < t {
                            continue;
                        }
                        let y = BitString::from_u64(n, b).unwrap();
                        assert!(
                            run(&proto, &x, &y, SharedRandomness::new(0))
                                .unwrap()
                                .output,
                            "n={n} t={t}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn mismatched_code_rejected() {
        let code = Arc::new(greedy_covering_code(8, 2).unwrap());
        assert!(DetProtocolParams::new(8, 4, code.clone()).is_err());
        assert!(DetProtocolParams::new(8, 5, code.clone()).is_ok());
        assert!(DetProtocolParams::new(8, 6, code.clone()).is_ok());
        assert!(DetProtocolParams::new(9, 5, code).is_err());
    }
}
