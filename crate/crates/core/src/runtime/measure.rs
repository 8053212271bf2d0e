use serde::Serialize;

use super::{run, Protocol, SharedRandomness};
use crate::bits::BitString;
use crate::error::{invalid, GhdError, Result};
use crate::instance::GhdInstance;
use crate::par::{derive_seed, map_indices, map_slice, Exec};

/// Largest ledger total over `instances`, each run with shared seed
/// `derive_seed(seed, index)`.
pub fn measure_worst_case_cost<P: Protocol>(
    protocol: &P,
    instances: &[(BitString, BitString)],
    seed: u64,
) -> Result<u64> {
    if instances.is_empty() {
        return Err(invalid("instance set is empty"));
    }
    let indexed: Vec<(u64, &(BitString, BitString))> = instances
        .iter()
        .enumerate()
        .map(|(i, p)| (i as u64, p))
        .collect();
    let costs = map_slice(Exec::default(), &indexed, |(i, (x, y))| {
        run(protocol, x, y, SharedRandomness::new(derive_seed(seed, *i))).map(|o| o.ledger.total())
    });
    costs.into_iter().try_fold(0, |acc, c| Ok(acc.max(c?)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorEstimate {
    pub errors: u64,
    pub trials: u64,
    pub rate: f64,
    /// `3 sqrt(p (1 - p) / trials)` at the observed rate.
    pub halfwidth: f64,
}

impl ErrorEstimate {
    pub fn from_counts(errors: u64, trials: u64) -> Self {
        let rate = errors as f64 / trials as f64;
        Self {
            errors,
            trials,
            rate,
            halfwidth: 3.0 * (rate * (1.0 - rate) / trials as f64).sqrt(),
        }
    }
}

pub fn estimate_error_rate<P: Protocol>(
    protocol: &P,
    instance: &GhdInstance,
    trials: u64,
    seed: u64,
) -> Result<ErrorEstimate> {
    estimate_error_rate_with(Exec::default(), protocol, instance, trials, seed)
}

/// Fraction of shared seeds on which the protocol disagrees with the
/// instance's promise class.
pub fn estimate_error_rate_with<P: Protocol>(
    exec: Exec,
    protocol: &P,
    instance: &GhdInstance,
    trials: u64,
    seed: u64,
) -> Result<ErrorEstimate> {
    if trials == 0 {
        return Err(invalid("at least one trial is required"));
    }
    let truth = instance.promise.expected_output().ok_or_else(|| {
        GhdError::InvalidInput(format!(
            "distance {} violates the promise (L={}, U={})",
            instance.distance, instance.lower, instance.upper
        ))
    })?;
    let outcomes = map_indices(exec, trials, |i| {
        run(
            protocol,
            &instance.x,
            &instance.y,
            SharedRandomness::new(derive_seed(seed, i)),
        )
        .map(|o| o.output != truth)
    });
    let mut errors = 0;
    for wrong in outcomes {
        errors += wrong? as u64;
    }
    Ok(ErrorEstimate::from_counts(errors, trials))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runtime::{ConstantProtocol, SendInputProtocol};

    #[test]
    fn constant_protocol_worst_case() {
        let pairs: Vec<_> = (0..5)
            .map(|s| crate::instance::random_pair_at_distance(6, 2, s).unwrap())
            .collect();
        let p = ConstantProtocol {
            n: 6,
            output: false,
        };
        assert_eq!(measure_worst_case_cost(&p, &pairs, 1).unwrap(), 1);
        assert!(measure_worst_case_cost(&p, &[], 1).is_err());
        assert_eq!(
            measure_worst_case_cost(&SendInputProtocol { n: 6 }, &pairs, 1).unwrap(),
            7
        );
    }

    #[test]
    fn error_rates_of_constant_protocols() {
        let close = GhdInstance::random(8, 2, 6, 1, 0).unwrap();
        let right = ConstantProtocol {
            n: 8,
            output: false,
        };
        let wrong = ConstantProtocol { n: 8, output: true };
        let e = estimate_error_rate(&right, &close, 100, 0).unwrap();
        assert_eq!((e.errors, e.rate, e.halfwidth), (0, 0.0, 0.0));
        assert_eq!(
            estimate_error_rate(&wrong, &close, 100, 0).unwrap().rate,
            1.0
        );
        assert!(estimate_error_rate(&right, &close, 0, 0).is_err());
        let violated = GhdInstance::random(8, 2, 6, 4, 0).unwrap();
        assert!(estimate_error_rate(&right, &violated, 10, 0).is_err());
    }

    #[test]
    fn halfwidth_formula() {
        let e = ErrorEstimate::from_counts(25, 100);
        assert!((e.halfwidth - 3.0 * (0.25f64 * 0.75 / 100.0).sqrt()).abs() < 1e-15);
    }
}
