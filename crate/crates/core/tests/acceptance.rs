//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails. Reference values are recomputed here by
//! brute force rather than taken from the library.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use ghd_core::covering::{greedy_covering_code, DetProtocol, DetProtocolParams};
use ghd_core::par::derive_seed;
use ghd_core::runtime::{measure_worst_case_cost, run, SharedRandomness};
use ghd_core::sampling::{derive_sampling_params, SamplingProtocol};
use ghd_core::sketch::{
    alice_sketch, derive_sketch_params, sketch_statistics, SketchParams, SketchProtocol,
};
use ghd_core::streaming::{encode_streams, exact_f0, ghd_via_streaming, ExactBitmap};
use ghd_core::{ball_volume, random_pair_at_distance, BitString};

const EPS: f64 = 1e-6;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

// ---------------------------------------------------------------- oracles

fn popcount_volume(n: usize, r: usize) -> u64 {
    (0u64..1 << n)
        .filter(|z| z.count_ones() as usize <= r)
        .count() as u64
}

fn binomial(n: u64, k: u64) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn to_bits(n: usize, z: u64) -> BitString {
    BitString::from_u64(n, z).unwrap()
}

/// Distance from every point of the cube to the nearest codeword, maximized.
fn covering_radius(n: usize, codewords: &[u64]) -> usize {
    (0u64..1 << n)
        .map(|z| {
            codewords
                .iter()
                .map(|c| (c ^ z).count_ones())
                .min()
                .unwrap() as usize
        })
        .max()
        .unwrap()
}

fn as_u64(x: &BitString) -> u64 {
    x.words().first().copied().unwrap_or(0)
}

/// `T` and `T'` from a fresh sketch run, alongside the protocol's output.
struct SketchRun {
    distance: usize,
    t: f64,
    t_prime: f64,
    output: bool,
}

fn sketch_run(params: &SketchParams, d: usize, seed: u64) -> SketchRun {
    let (x, y) = random_pair_at_distance(params.n, d, seed).unwrap();
    let shared = SharedRandomness::new(derive_seed(seed, 1));
    let out = run(&SketchProtocol::new(*params), &x, &y, shared).unwrap();
    let msg = alice_sketch(&x, params, &mut shared.stream()).unwrap();
    let st = sketch_statistics(&x, &y, &msg, params, shared).unwrap();
    assert_eq!(st.decision, out.output, "protocol and statistics disagree");
    assert_eq!(out.ledger.total(), params.cost());
    SketchRun {
        distance: d,
        t: st.t,
        t_prime: st.t_prime,
        output: out.output,
    }
}

fn chain_holds(r: &SketchRun, n: usize) -> bool {
    r.t <= r.distance as f64 + EPS && (r.t - r.t_prime).abs() <= 5.0 / n as f64 + EPS
}

// ---------------------------------------------------------------- criteria

const REF: (usize, usize, usize) = (512, 4, 256);

/// Runs of criteria 1 and 2 failing the `T <= H`, `|T - T'| <= 5/n` chain.
#[derive(Default)]
struct ChainTally {
    runs: u64,
    broken: u64,
}

fn one_sidedness(chain: &mut ChainTally) -> Outcome {
    let (n, l, u) = REF;
    let s = 2.0;
    let required = (l as f64 + 10.0 / n as f64).powi(3) / (u as f64).powi(2);
    let params = derive_sketch_params(n, l, u, s).unwrap();
    if !(required <= s && params.hypothesis_holds) {
        return outcome(false, format!("hypothesis check: required {required}"));
    }
    let mut ones = 0;
    for i in 0..10_000u64 {
        let seed = derive_seed(1, i);
        let r = sketch_run(&params, (i % (l as u64 + 1)) as usize, seed);
        ones += r.output as u64;
        chain.runs += 1;
        chain.broken += !chain_holds(&r, n) as u64;
    }
    outcome(
        ones == 0,
        format!("{ones} of 10000 close runs output 1 (required s = {required:.6})"),
    )
}

fn error_exponent(chain: &mut ChainTally) -> Outcome {
    let (n, l, u) = REF;
    let trials = 10_000u64;
    let mut pass = true;
    let mut parts = Vec::new();
    for s in [1.0f64, 2.0, 3.0] {
        let params = derive_sketch_params(n, l, u, s).unwrap();
        let mut errors = 0;
        for i in 0..trials {
            let r = sketch_run(&params, u, derive_seed(2 + s as u64, i));
            errors += !r.output as u64;
            chain.runs += 1;
            chain.broken += !chain_holds(&r, n) as u64;
        }
        let rate = errors as f64 / trials as f64;
        let limit = (-s).exp() + 3.0 * ((-s).exp() / trials as f64).sqrt();
        pass &= rate <= limit;
        parts.push(format!("s={s}: {rate:.4} <= {limit:.4}"));
    }
    outcome(pass, parts.join(", "))
}

fn bound_chain(chain: &ChainTally) -> Outcome {
    outcome(
        chain.broken == 0 && chain.runs == 40_000,
        format!(
            "{} of {} runs break T <= H or |T - T'| <= 5/n",
            chain.broken, chain.runs
        ),
    )
}

fn projection_mean() -> Outcome {
    let (n, l, u) = REF;
    let params = derive_sketch_params(n, l, u, 2.0).unwrap();
    if params.block_len != 2 {
        return outcome(
            false,
            format!("block length is {}, wanted 2", params.block_len),
        );
    }
    let (x, y) = random_pair_at_distance(n, 64, 4).unwrap();
    let trials = 10_000u64;
    let ts: Vec<f64> = (0..trials)
        .map(|i| {
            let shared = SharedRandomness::new(derive_seed(4, i));
            let msg = alice_sketch(&x, &params, &mut shared.stream()).unwrap();
            sketch_statistics(&x, &y, &msg, &params, shared).unwrap().t
        })
        .collect();
    let mean = ts.iter().sum::<f64>() / trials as f64;
    let var = ts.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
    let se = (var / trials as f64).sqrt();
    let z = (mean - 32.0) / se;
    outcome(
        z.abs() <= 5.0,
        format!("mean T = {mean:.4}, se = {se:.4}, z = {z:.2}"),
    )
}

fn cost_envelope() -> Outcome {
    let mut points = 0;
    let mut worst: f64 = 0.0;
    let mut worst_at = String::new();
    for n in [128usize, 256, 512, 1024] {
        for u in [n / 8, n / 4, n / 2, n] {
            for l in [0, u / 32, u / 8] {
                for s in [0.25, 0.5, 1.0, 2.0, 4.0] {
                    let Ok(params) = derive_sketch_params(n, l, u, s) else {
                        continue;
                    };
                    let (x, y) = random_pair_at_distance(n, u, derive_seed(5, points)).unwrap();
                    let bits =
                        measure_worst_case_cost(&SketchProtocol::new(params), &[(x, y)], points)
                            .unwrap();
                    let nf = n as f64;
                    let constant = bits as f64 / ((s / u as f64).cbrt() * nf * nf.log2());
                    if constant > worst {
                        worst = constant;
                        worst_at = format!("n={n} L={l} U={u} s={s}");
                    }
                    points += 1;
                }
            }
        }
    }
    outcome(
        worst <= 40.0 && points > 0,
        format!("{points} grid points, empirical constant {worst:.2} at {worst_at}"),
    )
}

fn volume_oracle() -> Outcome {
    let mut mismatches = 0;
    for n in 1..=16usize {
        for r in 0..=n {
            let lib = ball_volume(n, r as i64).unwrap().value;
            if lib != popcount_volume(n, r).into() {
                mismatches += 1;
            }
        }
    }
    let v = ball_volume(10, 3).unwrap().value;
    let sum: u128 = (0..=3).map(|i| binomial(10, i)).sum();
    outcome(
        mismatches == 0 && v == 176u32.into() && sum == 176,
        format!("{mismatches} mismatches for n <= 16; V(10,3) = {v}"),
    )
}

fn det_exactness() -> Outcome {
    let (n, t) = (10usize, 4usize);
    let params = match DetProtocolParams::greedy(n, t) {
        Ok(p) if p.code.radius() == 1 => p,
        _ => return outcome(false, "could not build the radius-1 greedy code"),
    };
    let protocol = DetProtocol::new(params);
    let shared = SharedRandomness::new(0);
    let mut runs = 0u64;
    let mut errors = 0u64;
    for xz in 0u64..1 << n {
        let x = to_bits(n, xz);
        for yz in 0u64..1 << n {
            let d = (xz ^ yz).count_ones() as usize;
            if d != 0 && d < t {
                continue;
            }
            let out = run(&protocol, &x, &to_bits(n, yz), shared).unwrap().output;
            errors += (out != (d >= t)) as u64;
            runs += 1;
        }
    }
    let expected: u128 = (1u128 << n)
        * (1 + (t as u64..=n as u64)
            .map(|d| binomial(n as u64, d))
            .sum::<u128>());
    outcome(
        errors == 0 && runs as u128 == expected,
        format!("{errors} errors over {runs} exhaustive promise pairs"),
    )
}

fn greedy_code(n: usize, r: usize) -> Arc<ghd_core::covering::CoveringCode> {
    Arc::new(greedy_covering_code(n, r).unwrap())
}

fn sandwich() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 1..=14usize {
        let codes: Vec<_> = (0..=(n - 1) / 2).map(|r| greedy_code(n, r)).collect();
        for t in 1..=n {
            let (lo_r, hi_r) = (t / 2, (t - 1) / 2);
            let (v_lo, v_hi) = (popcount_volume(n, lo_r), popcount_volume(n, hi_r));
            let nf = n as f64;
            let lower = nf - (v_lo as f64).log2();
            let upper = nf - (v_hi as f64).log2() + nf.log2() + 2.0;
            let protocol =
                DetProtocol::new(DetProtocolParams::new(n, t, codes[hi_r].clone()).unwrap());
            let mut pairs = Vec::new();
            for i in 0..32u64 {
                let seed = derive_seed(8, i);
                let d = if i % 2 == 0 {
                    0
                } else {
                    t + (seed as usize) % (n - t + 1)
                };
                let (x, y) = random_pair_at_distance(n, d, seed).unwrap();
                pairs.push((x, y));
            }
            let bits = measure_worst_case_cost(&protocol, &pairs, 8).unwrap() as f64;
            let step = v_lo <= (1 + n as u64) * v_hi;
            if !(lower - EPS <= bits && bits <= upper + EPS && step) {
                failures.push(format!(
                    "n={n} t={t}: {bits} not in [{lower:.3}, {upper:.3}] or step fails"
                ));
            }
            checked += 1;
        }
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            format!("{checked} (n, t) pairs inside the sandwich, step inequality holds")
        } else {
            failures.join("; ")
        },
    )
}

fn greedy_guarantee() -> Outcome {
    let mut checked = 0;
    let mut worst_ratio: f64 = 0.0;
    let mut failures = Vec::new();
    for n in 1..=14usize {
        for r in 0..=n {
            let code = greedy_code(n, r);
            let words: Vec<u64> = code.codewords().iter().map(as_u64).collect();
            let bound =
                (0.694 * n as f64 + 1.0) * (1u64 << n) as f64 / popcount_volume(n, r) as f64;
            let covered = covering_radius(n, &words) <= r;
            worst_ratio = worst_ratio.max(words.len() as f64 / bound);
            if !covered || words.len() as f64 > bound {
                failures.push(format!(
                    "n={n} r={r}: size {} bound {bound:.2} covered {covered}",
                    words.len()
                ));
            }
            checked += 1;
        }
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            format!("{checked} codes cover the cube; largest size/bound = {worst_ratio:.3}")
        } else {
            failures.join("; ")
        },
    )
}

fn streaming_identity() -> Outcome {
    let mut checked = 0u64;
    let mut failures = 0u64;
    let mut check = |x: &BitString, y: &BitString| {
        let (u, v) = encode_streams(x, y).unwrap();
        let mut seen: Vec<u64> = u.tokens().iter().chain(v.tokens()).copied().collect();
        seen.sort_unstable();
        seen.dedup();
        let h = x.iter().zip(y.iter()).filter(|(a, b)| a != b).count();
        let lib = exact_f0(&u.concat(&v).unwrap());
        failures += (seen.len() != x.len() + h || lib != seen.len()) as u64;
        checked += 1;
    };
    for n in 1..=6usize {
        for xz in 0u64..1 << n {
            for yz in 0u64..1 << n {
                check(&to_bits(n, xz), &to_bits(n, yz));
            }
        }
    }
    for i in 0..1000u64 {
        let seed = derive_seed(10, i);
        let (x, y) = random_pair_at_distance(100, (seed % 101) as usize, seed).unwrap();
        check(&x, &y);
    }
    outcome(
        failures == 0,
        format!("{failures} of {checked} pairs break F0 = n + H"),
    )
}

fn streaming_budget() -> Outcome {
    let (n, c) = (100usize, 1.5f64);
    let t = ((n as f64) * (c - 1.0)).ceil() as usize;
    let mut parts = Vec::new();
    let mut pass = true;
    for p in 1..=3usize {
        let mut errors = 0;
        let mut over = 0;
        let mut wrong_state = 0;
        for i in 0..2000u64 {
            let seed = derive_seed(11 + p as u64, i);
            let far = i % 2 == 1;
            let d = if far {
                t + (seed as usize) % (n - t + 1)
            } else {
                0
            };
            let (x, y) = random_pair_at_distance(n, d, seed).unwrap();
            let (out, run) =
                ghd_via_streaming(|| ExactBitmap::new(2 * n, p).unwrap(), c, &x, &y).unwrap();
            errors += (out != far) as u64;
            over += (run.communication > 2 * p as u64 * run.state_bits) as u64;
            wrong_state += (run.state_bits != 2 * n as u64) as u64;
        }
        pass &= errors == 0 && over == 0 && wrong_state == 0;
        parts.push(format!(
            "p={p}: {errors} errors, {over} over 2pS, {wrong_state} with S != 2n"
        ));
    }
    outcome(pass, parts.join(", "))
}

fn sampling_baseline() -> Outcome {
    let (n, l, u, s) = (100usize, 10usize, 90usize, 2.0f64);
    let m = (2.0 * s * (n * n) as f64 / ((u - l) * (u - l)) as f64).ceil() as u64;
    let params = derive_sampling_params(n, l, u, s).unwrap();
    let protocol = SamplingProtocol::new(params);
    let trials = 10_000u64;
    let p = (-s).exp();
    let limit = p + 3.0 * (p * (1.0 - p) / trials as f64).sqrt();
    let mut pass = params.trials == m;
    let mut parts = vec![format!("m = {}", params.trials)];
    for (label, d, truth) in [("close", l, false), ("far", u, true)] {
        let mut errors = 0;
        let mut bad_ledger = 0;
        for i in 0..trials {
            let seed = derive_seed(12 + d as u64, i);
            let (x, y) = random_pair_at_distance(n, d, seed).unwrap();
            let out = run(
                &protocol,
                &x,
                &y,
                SharedRandomness::new(derive_seed(seed, 1)),
            )
            .unwrap();
            errors += (out.output != truth) as u64;
            bad_ledger += (out.ledger.total() != m + 1) as u64;
        }
        let rate = errors as f64 / trials as f64;
        pass &= rate <= limit && bad_ledger == 0;
        parts.push(format!(
            "{label} {rate:.4} <= {limit:.4}, {bad_ledger} ledgers != m+1"
        ));
    }
    outcome(pass, parts.join(", "))
}

fn main() -> ExitCode {
    let mut chain = ChainTally::default();
    let mut results: Vec<(&str, Outcome, f64)> = Vec::new();
    let mut timed = |name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        let secs = start.elapsed().as_secs_f64();
        println!(
            "{} {name}: {} ({secs:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        results.push((name, o, secs));
    };
    timed("1 sketch one-sidedness", &mut || one_sidedness(&mut chain));
    timed("2 sketch error exponent", &mut || {
        error_exponent(&mut chain)
    });
    timed("3 numeric bound chain", &mut || bound_chain(&chain));
    timed("4 projection second moment", &mut projection_mean);
    timed("5 sketch cost envelope", &mut cost_envelope);
    timed("6 ball volume oracle", &mut volume_oracle);
    timed("7 deterministic exactness", &mut det_exactness);
    timed("8 deterministic sandwich", &mut sandwich);
    timed("9 greedy code guarantee", &mut greedy_guarantee);
    timed("10 streaming identity", &mut streaming_identity);
    timed("11 streaming budget", &mut streaming_budget);
    timed("12 sampling baseline", &mut sampling_baseline);
    let failed = results.iter().filter(|(_, o, _)| !o.pass).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
