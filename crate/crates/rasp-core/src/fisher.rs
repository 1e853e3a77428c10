//! Expected (Fisher) information of the interval-censored experiment.
//!
//! Interval counts form a product of conditional multinomials: given `N_i`
//! units at risk, the cause-`j` failure count has probability `q_ij` and
//! survival has `1 - q_i`. Taking expectations of the negative log-likelihood
//! Hessian collapses the data dependence into the expected at-risk counts
//! `E[N_i] = n b_i`, `b_i = prod_{l<i} (1 - q_l)(1 - p_l)`, giving
//!
//! ```text
//! I(theta) = sum_i E[N_i] [ sum_j (grad q_ij)(grad q_ij)^T / q_ij
//!                           + (grad q_i)(grad q_i)^T / (1 - q_i) ].
//! ```
//!
//! Everything scales linearly in `n`, so design work uses the per-unit matrix
//! `I^1` and the scale-free criterion
//!
//! ```text
//! S^2(theta) = C^T [I^1]^{-1} C,      C = grad R(t0),
//! ```
//!
//! the per-unit asymptotic variance of the estimated reliability at the
//! demonstration time `t0`: the variance of `Rhat(t0)` from an `n`-unit test
//! is `S^2 / n`.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::model::{GradIntervalProbs, ModelParams};
use crate::scheme::PicScheme;

/// Per-interval probability gradients: analytic under a common shape, central
/// finite differences otherwise (the separate-shape probabilities are
/// quadrature-valued and have no closed-form gradient).
pub(crate) fn interval_prob_gradients(
    model: &ModelParams,
    times: &[f64],
) -> Result<GradIntervalProbs> {
    if model.is_equal_shape() {
        return model.grad_interval_probs(times);
    }
    let theta = model.param_vector();
    let dim = model.dim();
    let m = times.len();
    let jn = model.n_causes();
    let mut dq = vec![vec![0.0; dim]; m];
    let mut dq_cause = vec![vec![vec![0.0; dim]; jn]; m];
    for u in 0..dim {
        let step = 1e-6 * theta[u].abs().max(1.0);
        let mut hi = theta.clone();
        let mut lo = theta.clone();
        hi[u] += step;
        lo[u] -= step;
        let p_hi = model.with_param_vector(&hi)?.interval_probs(times)?;
        let p_lo = model.with_param_vector(&lo)?.interval_probs(times)?;
        for i in 0..m {
            dq[i][u] = (p_hi.q[i] - p_lo.q[i]) / (2.0 * step);
            for j in 0..jn {
                dq_cause[i][j][u] =
                    (p_hi.q_cause[i][j] - p_lo.q_cause[i][j]) / (2.0 * step);
            }
        }
    }
    Ok(GradIntervalProbs { dq_cause, dq })
}

/// Per-unit expected information `I^1(theta)` for the scheme.
pub(crate) fn per_unit_information(
    model: &ModelParams,
    scheme: &PicScheme,
) -> Result<Matrix> {
    let dim = model.dim();
    let m = scheme.n_inspections();
    if m < dim {
        return Err(Error::Invalid(format!(
            "identifiability: the schedule has {m} inspections but the model has {dim} free \
             parameters; at least {dim} inspections are required"
        )));
    }
    let probs = model.interval_probs(scheme.times())?;
    let grads = interval_prob_gradients(model, scheme.times())?;

    let mut info = Matrix::zeros(dim);
    let mut b = 1.0; // per-unit P(at risk entering interval i)
    for i in 0..m {
        for (j, dqij) in grads.dq_cause[i].iter().enumerate() {
            let qij = probs.q_cause[i][j];
            // A vanishing cell contributes q_ij * (dlog)^2 -> 0.
            if qij > 0.0 {
                info.add_outer(dqij, b / qij);
            }
        }
        let qi = probs.q[i];
        if qi < 1.0 {
            info.add_outer(&grads.dq[i], b / (1.0 - qi));
        }
        b *= (1.0 - qi) * (1.0 - scheme.withdrawals()[i]);
    }

    // Surface rank deficiency here, where the design context is known.
    info.cholesky().map_err(|e| {
        Error::Numerical(format!(
            "the design is singular: the expected information matrix is not positive \
             definite ({e})"
        ))
    })?;
    Ok(info)
}

/// Expected information of an `n`-unit test: `n * I^1(theta)`.
pub fn fisher_information(
    n: u64,
    model: &ModelParams,
    scheme: &PicScheme,
) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::Invalid("n: at least one test unit is required".into()));
    }
    let mut info = per_unit_information(model, scheme)?;
    info.scale(n as f64);
    Ok(info)
}

/// Per-unit asymptotic variance `S^2` of the reliability estimate at `t0`.
pub fn std_variance(model: &ModelParams, scheme: &PicScheme, t0: f64) -> Result<f64> {
    let info = per_unit_information(model, scheme)?;
    let c = model.grad_reliability(t0)?;
    let x = info.solve(&c).map_err(|e| {
        Error::Numerical(format!("the design is singular: {e}"))
    })?;
    Ok(c.iter().zip(&x).map(|(a, b)| a * b).sum())
}

/// Asymptotic covariance of the parameter estimates from an `n`-unit test:
/// `[n I^1]^{-1}`.
pub fn asymptotic_covariance(
    n: u64,
    model: &ModelParams,
    scheme: &PicScheme,
) -> Result<Matrix> {
    let info = fisher_information(n, model, scheme)?;
    info.inverse()
        .map_err(|e| Error::Numerical(format!("the design is singular: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn battery(nu: f64) -> ModelParams {
        ModelParams::new_equal(vec![1.291, 1.339], 1.644, nu).unwrap()
    }

    #[test]
    fn std_variance_reference_values() {
        let cases = [
            (0.0, 4, 0.2, 0.0, 0.164_987_673_986_905_42),
            (1.0, 4, 0.4, 0.0, 0.179_543_834_688_781_16),
            (0.5, 6, 0.3, 0.3, 0.202_786_914_322_423_79),
            (1.0, 4, 0.348, 0.0, 0.176_616_850_061_688_17),
        ];
        for (nu, m, h, p, want) in cases {
            let scheme = PicScheme::equispaced(m, h, p).unwrap();
            let s2 = std_variance(&battery(nu), &scheme, 0.5).unwrap();
            assert_relative_eq!(s2, want, max_relative = 1e-11);
        }
    }

    #[test]
    fn per_unit_information_reference_matrix() {
        let scheme = PicScheme::equispaced(6, 0.3, 0.2).unwrap();
        let info = per_unit_information(&battery(0.5), &scheme).unwrap();
        let expect = [
            0.397_733_296_345_017_92,
            -0.083_927_735_168_766_671,
            0.128_469_042_852_276_09,
            0.110_467_975_335_425_6,
            -0.083_927_735_168_766_671,
            0.352_905_538_223_314_89,
            0.129_407_496_165_147_82,
            0.100_303_833_881_015_46,
            0.128_469_042_852_276_09,
            0.129_407_496_165_147_82,
            0.372_382_533_317_302_37,
            -0.043_571_813_461_032_782,
            0.110_467_975_335_425_6,
            0.100_303_833_881_015_46,
            -0.043_571_813_461_032_782,
            0.166_769_564_670_356_22,
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert_relative_eq!(
                    info.get(i, j),
                    expect[i * 4 + j],
                    max_relative = 1e-11,
                    epsilon = 1e-14
                );
            }
        }
        assert!(info.asymmetry() < 1e-14);
    }

    #[test]
    fn information_scales_linearly_in_n() {
        let scheme = PicScheme::equispaced(5, 0.25, 0.1).unwrap();
        let one = fisher_information(1, &battery(0.5), &scheme).unwrap();
        let fifty = fisher_information(50, &battery(0.5), &scheme).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_relative_eq!(fifty.get(i, j), 50.0 * one.get(i, j), max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn covariance_inverts_the_information() {
        let scheme = PicScheme::equispaced(6, 0.3, 0.2).unwrap();
        let model = battery(0.5);
        let info = fisher_information(40, &model, &scheme).unwrap();
        let cov = asymptotic_covariance(40, &model, &scheme).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let mut prod = 0.0;
                for k in 0..4 {
                    prod += info.get(i, k) * cov.get(k, j);
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((prod - expect).abs() < 1e-9, "entry ({i},{j}) = {prod}");
            }
        }
        // Delta-method variance through the covariance agrees with std_variance.
        let c = model.grad_reliability(0.5).unwrap();
        let s2 = std_variance(&model, &scheme, 0.5).unwrap();
        assert_relative_eq!(cov.quad_form(&c), s2 / 40.0, max_relative = 1e-10);
    }

    #[test]
    fn too_few_inspections_is_an_identifiability_error() {
        let scheme = PicScheme::equispaced(3, 0.2, 0.0).unwrap();
        let err = fisher_information(30, &battery(0.5), &scheme).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("inspections"), "{msg}");
        assert!(matches!(err, Error::Invalid(_)));
    }

    #[test]
    fn informationless_schedule_is_design_singular() {
        // All inspections bunched within ~1e-13: beyond the first interval no
        // information accrues, so the 4-parameter matrix is rank deficient.
        let times = vec![0.5, 0.5 + 1e-13, 0.5 + 2e-13, 0.5 + 3e-13];
        let scheme = PicScheme::from_times(times, 0.0).unwrap();
        let err = per_unit_information(&battery(0.5), &scheme).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("singular"), "{msg}");
        assert!(matches!(err, Error::Numerical(_)));
    }

    #[test]
    fn separate_shape_information_via_finite_differences() {
        let model =
            ModelParams::new_unequal(vec![1.0, 2.0], vec![1.2, 0.8], 0.7).unwrap();
        let scheme = PicScheme::equispaced(5, 0.3, 0.1).unwrap();
        let info = per_unit_information(&model, &scheme).unwrap();
        assert_eq!(info.order(), 5);
        assert!(info.asymmetry() < 1e-9);
        let s2 = std_variance(&model, &scheme, 0.6).unwrap();
        assert!(s2.is_finite() && s2 > 0.0, "S^2 = {s2}");
    }
}
