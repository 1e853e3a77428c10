//! Shared helpers for the integration tests: an exact dynamic-programming
//! oracle for the at-risk-count Markov chain of a progressively censored
//! test, and seeded random model/schedule generators.
#![allow(dead_code)] // each test target uses a different subset

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use rasp_core::{ModelParams, PicScheme, Result};

/// Exact per-interval expectations and termination law of an `n`-unit test,
/// computed by dynamic programming over the number of units at risk. The
/// realized withdrawal rule (`floor(p_i * survivors)`, everything at the
/// final inspection) is applied exactly, so these values include the floor
/// effects that closed-form expected counts ignore.
pub struct DpOracle {
    /// Expected units entering each interval.
    pub e_n: Vec<f64>,
    /// Expected total failures in each interval.
    pub e_dplus: Vec<f64>,
    /// Expected withdrawals at each inspection.
    pub e_r: Vec<f64>,
    /// `term_prob[m]`: probability the test ends exactly at inspection `m+1`.
    pub term_prob: Vec<f64>,
}

/// Binomial(s, q) probability mass over d = 0..=s via the stable ratio
/// recurrence; exact enough for the modest `s` used in tests.
fn binomial_pmf(s: u64, q: f64) -> Vec<f64> {
    let s_us = s as usize;
    let mut pmf = vec![0.0; s_us + 1];
    if q <= 0.0 {
        pmf[0] = 1.0;
        return pmf;
    }
    if q >= 1.0 {
        pmf[s_us] = 1.0;
        return pmf;
    }
    // work in logs: pmf[d] = C(s,d) q^d (1-q)^(s-d)
    let log_start = s as f64 * (1.0 - q).ln();
    let log_ratio = (q / (1.0 - q)).ln();
    let mut log_acc = 0.0;
    for d in 0..=s_us {
        pmf[d] = (log_start + log_acc).exp();
        if d < s_us {
            log_acc += log_ratio + ((s_us - d) as f64 / (d + 1) as f64).ln();
        }
    }
    let total: f64 = pmf.iter().sum();
    for v in pmf.iter_mut() {
        *v /= total;
    }
    pmf
}

/// Runs the exact DP for `n` units under `model` on `scheme`.
pub fn dp_oracle(model: &ModelParams, scheme: &PicScheme, n: u64) -> Result<DpOracle> {
    let probs = model.interval_probs(scheme.times())?;
    let m = scheme.n_inspections();
    let n_us = n as usize;
    // dist[s] = P(s units at risk entering the current interval)
    let mut dist = vec![0.0; n_us + 1];
    dist[n_us] = 1.0;
    let mut e_n = vec![0.0; m];
    let mut e_dplus = vec![0.0; m];
    let mut e_r = vec![0.0; m];
    let mut term_prob = vec![0.0; m];
    for i in 0..m {
        let q = probs.q[i];
        let p = scheme.withdrawals()[i];
        let last = i + 1 == m;
        let mut next = vec![0.0; n_us + 1];
        for (s, &mass) in dist.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            if s == 0 {
                // test already over; nothing happens
                continue;
            }
            e_n[i] += mass * s as f64;
            let pmf = binomial_pmf(s as u64, q);
            for (d, &pd) in pmf.iter().enumerate() {
                if pd == 0.0 {
                    continue;
                }
                let survivors = s - d;
                let r = if last {
                    survivors
                } else {
                    ((p * survivors as f64).floor() as usize).min(survivors)
                };
                let alive = survivors - r;
                e_dplus[i] += mass * pd * d as f64;
                e_r[i] += mass * pd * r as f64;
                if alive == 0 {
                    term_prob[i] += mass * pd;
                } else {
                    next[alive] += mass * pd;
                }
            }
        }
        dist = next;
    }
    Ok(DpOracle { e_n, e_dplus, e_r, term_prob })
}

/// A random common-shape model with two causes; `nu` is drawn from
/// `nu_range` (use `0.0..=0.0` for the independent model).
pub fn random_equal_model(rng: &mut ChaCha8Rng, nu_range: (f64, f64)) -> ModelParams {
    let eta = vec![rng.gen_range(-0.5..0.5f64).exp(), rng.gen_range(-0.5..0.5f64).exp()];
    let gamma = rng.gen_range(0.8..2.5);
    let nu = if nu_range.0 == nu_range.1 {
        nu_range.0
    } else {
        rng.gen_range(nu_range.0..nu_range.1)
    };
    ModelParams::new_equal(eta, gamma, nu).expect("generated parameters are valid")
}

/// A random equispaced schedule that covers a meaningful probability range
/// for models with scales near 1.
pub fn random_scheme(rng: &mut ChaCha8Rng) -> PicScheme {
    let m = rng.gen_range(4..=8);
    let h = rng.gen_range(0.08..0.35);
    let p = [0.0, 0.1, 0.2, 0.3, 0.4][rng.gen_range(0..5)];
    PicScheme::equispaced(m, h, p).expect("generated schedule is valid")
}
