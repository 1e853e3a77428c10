//! Monte-Carlo simulation of progressively censored life tests.
//!
//! [`simulate_dataset`] draws one experiment: interval by interval, the
//! failure-cause split of the units at risk is multinomial with the model's
//! conditional cell probabilities `(q_i1, ..., q_iJ, 1 - q_i)`, sampled as a
//! chain of binomials; the realized withdrawal rule then removes
//! `floor(p_i * survivors)` units (all survivors at the final inspection).
//!
//! [`mc_evaluate`] replays a sampling plan over many simulated experiments,
//! refitting the model each time, and summarizes estimator accuracy and the
//! realized acceptance rate.
//!
//! Randomness is counter-based: every (seed, replicate, interval) triple is
//! hashed through SplitMix64 into an independent ChaCha stream, so results
//! are reproducible for a given master seed regardless of thread count or
//! execution order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fisher::std_variance;
use crate::inference::{estimate_reliability, fit_mle, FitVariant, ObservedData};
use crate::model::ModelParams;
use crate::plans::{decide, Decision, PlanResult};
use crate::scheme::PicScheme;

// --- deterministic stream splitting -----------------------------------------

/// SplitMix64 finalizer: a bijective 64-bit mix with good avalanche.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent stream seed from a parent seed and a counter.
pub(crate) fn stream_seed(parent: u64, counter: u64) -> u64 {
    mix(parent ^ mix(counter))
}

// --- single experiment -------------------------------------------------------

/// Simulates one `n`-unit life test under `model` on `scheme`, reproducibly
/// for the given `seed`.
pub fn simulate_dataset(
    model: &ModelParams,
    scheme: &PicScheme,
    n: u64,
    seed: u64,
) -> Result<ObservedData> {
    if n == 0 {
        return Err(Error::Invalid("n: at least one test unit is required".into()));
    }
    let probs = model.interval_probs(scheme.times())?;
    let m = scheme.n_inspections();
    let n_causes = model.n_causes();
    let mut d = vec![vec![0u64; n_causes]; m];
    let mut r = vec![0u64; m];
    let mut alive = n;
    for i in 0..m {
        if alive == 0 {
            break;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, i as u64));
        // Multinomial over (cause 1, ..., cause J, survive) as sequential
        // binomials on the remaining pool and renormalized probabilities.
        let mut pool = alive;
        let mut rem = 1.0;
        for j in 0..n_causes {
            if pool == 0 {
                break;
            }
            let qij = probs.q_cause[i][j];
            let p_cond = if rem > 0.0 { (qij / rem).clamp(0.0, 1.0) } else { 0.0 };
            let draw = Binomial::new(pool, p_cond)
                .map_err(|e| Error::Numerical(format!("binomial sampling failed: {e}")))?
                .sample(&mut rng);
            d[i][j] = draw;
            pool -= draw;
            rem -= qij;
        }
        let survivors = pool;
        r[i] = if i + 1 == m {
            survivors
        } else {
            let planned = (scheme.withdrawals()[i] * survivors as f64).floor() as u64;
            planned.min(survivors)
        };
        alive = survivors - r[i];
    }
    // Any units still alive after the loop only exist if the final row was
    // never reached, which the final-withdrawal rule prevents.
    debug_assert_eq!(alive, 0);
    ObservedData::new(scheme.times().to_vec(), d, r)
}

// --- plan evaluation ----------------------------------------------------------

/// Accuracy and acceptance summary of a plan over simulated experiments.
#[derive(Debug, Clone, Serialize)]
pub struct McSummary {
    /// Replicates attempted.
    pub reps: usize,
    /// Replicates whose fit did not converge (excluded from the averages).
    pub fit_failures: usize,
    /// Mean estimated reliability at `t0`.
    pub avg_reliability: f64,
    /// Root-mean-square deviation of the estimate from the true reliability.
    pub rmsd_reliability: f64,
    /// Mean plug-in per-unit asymptotic variance at the estimate.
    pub avg_s2: f64,
    /// Root-mean-square deviation of the plug-in variance from the true one.
    pub rmsd_s2: f64,
    /// Fraction of replicates the plan accepted.
    pub acceptance_rate: f64,
    /// True reliability at `t0` under the simulating model.
    pub true_reliability: f64,
    /// True per-unit variance under the simulating model.
    pub true_s2: f64,
}

/// Compensated (Kahan) accumulator so the reduction is exact enough to be
/// independent of how the replicate list was produced.
#[derive(Default)]
struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Simulates `reps` experiments of `plan.n_star` units under `true_model`,
/// fits `variant` to each, and summarizes. Replicates run in parallel;
/// aggregation order is fixed, so a given `seed` always yields identical
/// output.
///
/// Replicates whose likelihood supremum sits on a degenerate boundary (for
/// the dependent model, the joint large-shape/large-frailty ridge where the
/// survival curve becomes a power law and the information matrix is
/// singular) cannot produce a variance estimate; they are excluded from the
/// averages and counted in [`McSummary::fit_failures`]. Small sample sizes
/// with few inspections can put a few percent of replicates there. Errors
/// only when more than 20% of fits fail, which indicates a broken
/// configuration rather than ordinary boundary mass.
pub fn mc_evaluate(
    plan: &PlanResult,
    true_model: &ModelParams,
    variant: FitVariant,
    reps: usize,
    seed: u64,
) -> Result<McSummary> {
    if reps < 100 {
        return Err(Error::Invalid(format!(
            "reps: at least 100 replicates are required for a meaningful summary, got {reps}"
        )));
    }
    let t0 = plan.risk.t0();
    let true_reliability = true_model.reliability(t0)?;
    let true_s2 = std_variance(true_model, &plan.scheme, t0)?;

    struct Rep {
        reliability: f64,
        s2: f64,
        accepted: bool,
    }
    let results: Vec<Option<Rep>> = (0..reps as u64)
        .into_par_iter()
        .map(|k| {
            let data =
                simulate_dataset(true_model, &plan.scheme, plan.n_star, stream_seed(seed, k))
                    .ok()?;
            let fit = fit_mle(&data, variant).ok()?;
            let (rel, _) = estimate_reliability(&fit, t0).ok()?;
            let s2 = std_variance(&fit.params, &plan.scheme, t0).ok()?;
            Some(Rep { reliability: rel, s2, accepted: decide(plan, rel) == Decision::Accept })
        })
        .collect();

    let mut fit_failures = 0usize;
    let mut accepted = 0usize;
    let mut sum_rel = Kahan::default();
    let mut sum_rel_sq = Kahan::default();
    let mut sum_s2 = Kahan::default();
    let mut sum_s2_sq = Kahan::default();
    for rep in results.iter() {
        match rep {
            Some(rep) => {
                sum_rel.add(rep.reliability);
                sum_rel_sq.add((rep.reliability - true_reliability).powi(2));
                sum_s2.add(rep.s2);
                sum_s2_sq.add((rep.s2 - true_s2).powi(2));
                accepted += usize::from(rep.accepted);
            }
            None => fit_failures += 1,
        }
    }
    if fit_failures * 5 > reps {
        return Err(Error::Numerical(format!(
            "{fit_failures} of {reps} replicate fits failed (more than 20%); the plan or \
             model is too fragile to summarize"
        )));
    }
    let ok = (reps - fit_failures) as f64;
    Ok(McSummary {
        reps,
        fit_failures,
        avg_reliability: sum_rel.sum / ok,
        rmsd_reliability: (sum_rel_sq.sum / ok).sqrt(),
        avg_s2: sum_s2.sum / ok,
        rmsd_s2: (sum_s2_sq.sum / ok).sqrt(),
        acceptance_rate: accepted as f64 / ok,
        true_reliability,
        true_s2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plans::{derive_hypotheses, design_plan, RiskSpec};

    fn battery(nu: f64) -> ModelParams {
        ModelParams::new_equal(vec![1.291, 1.339], 1.644, nu).unwrap()
    }

    #[test]
    fn simulation_is_reproducible_and_seed_sensitive() {
        let scheme = PicScheme::equispaced(5, 0.115, 0.2).unwrap();
        let model = battery(0.5);
        let a = simulate_dataset(&model, &scheme, 500, 42).unwrap();
        let b = simulate_dataset(&model, &scheme, 500, 42).unwrap();
        assert_eq!(a, b);
        let c = simulate_dataset(&model, &scheme, 500, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn withdrawals_follow_the_floor_rule() {
        let scheme = PicScheme::equispaced(5, 0.115, 0.2).unwrap();
        let data = simulate_dataset(&battery(0.5), &scheme, 73, 7).unwrap();
        assert_eq!(data.n_units(), 73);
        let at_risk = data.at_risk();
        for i in 0..5 {
            let survivors = at_risk[i] - data.failures()[i].iter().sum::<u64>();
            let expected = if i == 4 {
                survivors
            } else {
                (0.2 * survivors as f64).floor() as u64
            };
            assert_eq!(data.withdrawals()[i], expected, "interval {i}");
        }
    }

    #[test]
    fn first_interval_frequencies_match_probabilities() {
        let scheme = PicScheme::equispaced(3, 0.3, 0.0).unwrap();
        let model = battery(0.5);
        let n = 200_000u64;
        let data = simulate_dataset(&model, &scheme, n, 2024).unwrap();
        let probs = model.interval_probs(scheme.times()).unwrap();
        for j in 0..2 {
            let q = probs.q_cause[0][j];
            let freq = data.failures()[0][j] as f64 / n as f64;
            let sigma = (q * (1.0 - q) / n as f64).sqrt();
            assert!(
                (freq - q).abs() < 4.0 * sigma,
                "cause {j}: freq {freq} vs q {q} (sigma {sigma})"
            );
        }
    }

    #[test]
    fn mc_summary_matches_design_model() {
        let model0 = battery(0.0);
        let model1 = derive_hypotheses(&model0, &[1.5]).unwrap();
        let scheme = PicScheme::equispaced(4, 0.2, 0.0).unwrap();
        let risk = RiskSpec::new(0.05, 0.10, 0.5).unwrap();
        let plan = design_plan(&model0, &model1, &scheme, &risk).unwrap();
        let summary =
            mc_evaluate(&plan, &model0, FitVariant::IndependentEqualShape, 200, 99).unwrap();
        assert!(summary.fit_failures <= 2, "failures: {}", summary.fit_failures);
        // pi_0 = 0.6648; estimator noise is ~S/sqrt(n) = 0.072 per replicate,
        // so the mean of 200 replicates sits within ~0.02.
        assert!(
            (summary.avg_reliability - 0.6648).abs() < 0.02,
            "avg {}",
            summary.avg_reliability
        );
        assert!(summary.rmsd_reliability > 0.03 && summary.rmsd_reliability < 0.12);
        assert!(
            summary.acceptance_rate > 0.85,
            "acceptance {}",
            summary.acceptance_rate
        );
        assert!((summary.avg_s2 - summary.true_s2).abs() / summary.true_s2 < 0.3);
        assert_eq!(summary.reps, 200);
    }

    #[test]
    fn too_few_replicates_are_rejected() {
        let model0 = battery(0.0);
        let model1 = derive_hypotheses(&model0, &[1.5]).unwrap();
        let scheme = PicScheme::equispaced(4, 0.2, 0.0).unwrap();
        let risk = RiskSpec::new(0.05, 0.10, 0.5).unwrap();
        let plan = design_plan(&model0, &model1, &scheme, &risk).unwrap();
        let err = mc_evaluate(&plan, &model0, FitVariant::IndependentEqualShape, 50, 1)
            .unwrap_err();
        assert!(err.to_string().contains("replicates"), "{err}");
    }
}
