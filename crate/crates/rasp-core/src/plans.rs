//! Acceptance sampling plans built on the asymptotic reliability estimate.
//!
//! A plan tests `H0: R(t0) = pi_0` (acceptable reliability, the design
//! model) against `H1: R(t0) = pi_1` (rejectable reliability, the design
//! model with each scale deteriorated by a factor `d_j >= 1`). The decision
//! statistic is the maximum-likelihood estimate `Rhat(t0)`, which is
//! asymptotically normal with standard deviation `S(theta)/sqrt(n)` where
//! `S^2` is the per-unit variance from the expected information
//! ([`crate::fisher::std_variance`]). Matching producer risk `alpha` at
//! `pi_0` and consumer risk `beta` at `pi_1` gives
//!
//! ```text
//! z_b  = Phi^{-1}(1 - beta),   z_a = Phi^{-1}(alpha),
//! pi_c = (pi_0 S_1 z_b - pi_1 S_0 z_a) / (S_1 z_b - S_0 z_a),
//! n    = [ (S_1 z_b - S_0 z_a) / (pi_0 - pi_1) ]^2,
//! ```
//!
//! with the fractional `n` rounded down to `n*` by convention. The lot is
//! accepted exactly when `Rhat(t0) > pi_c`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fisher::std_variance;
use crate::model::{ModelParams, Shape};
use crate::scheme::PicScheme;
use crate::special::{normal_quantile, normal_sf};

// --- specification ----------------------------------------------------------

/// Producer/consumer risk levels and the demonstration time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RiskSpec {
    alpha: f64,
    beta: f64,
    t0: f64,
}

impl RiskSpec {
    /// `alpha`: probability of rejecting at the acceptable reliability.
    /// `beta`: probability of accepting at the rejectable reliability.
    /// Both must lie in `(0, 0.5]`; `t0` is the time at which reliability is
    /// demonstrated.
    pub fn new(alpha: f64, beta: f64, t0: f64) -> Result<Self> {
        let mut bad = Vec::new();
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !(v.is_finite() && v > 0.0 && v <= 0.5) {
                bad.push(format!("{name}: must lie in (0, 0.5], got {v}"));
            }
        }
        if !(t0.is_finite() && t0 > 0.0) {
            bad.push(format!("t0: must be a finite positive time, got {t0}"));
        }
        if !bad.is_empty() {
            return Err(Error::invalid_report(&bad));
        }
        Ok(RiskSpec { alpha, beta, t0 })
    }

    /// Producer risk.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Consumer risk.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Demonstration time.
    pub fn t0(&self) -> f64 {
        self.t0
    }
}

/// A designed plan: the schedule it was built for, the sample size, and the
/// acceptance threshold on the estimated reliability.
#[derive(Debug, Clone, Serialize)]
pub struct PlanResult {
    /// Inspection schedule the plan was designed for.
    pub scheme: PicScheme,
    /// Risk specification the plan satisfies.
    pub risk: RiskSpec,
    /// Exact (fractional) sample size solving the two risk equations.
    pub n_real: f64,
    /// Adopted sample size (`n_real` rounded down, at least 1).
    pub n_star: u64,
    /// Acceptance threshold: accept when `Rhat(t0) > pi_c`.
    pub pi_c: f64,
    /// Reliability at `t0` under the acceptable model.
    pub pi_0: f64,
    /// Reliability at `t0` under the rejectable model.
    pub pi_1: f64,
    /// Per-unit asymptotic standard deviation under the acceptable model.
    pub s_0: f64,
    /// Per-unit asymptotic standard deviation under the rejectable model.
    pub s_1: f64,
}

/// Accept/reject outcome of comparing an estimate against the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    /// The estimated reliability exceeded the threshold.
    Accept,
    /// The estimated reliability did not exceed the threshold.
    Reject,
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Decision::Accept => "accept",
            Decision::Reject => "reject",
        })
    }
}

// --- construction -----------------------------------------------------------

/// Builds the rejectable-quality model by deteriorating each scale:
/// `eta_1j = eta_0j / d_j`. `d` holds one factor per cause, or a single
/// factor applied to all causes. Factors must be `>= 1` with at least one
/// strict deterioration.
pub fn derive_hypotheses(model0: &ModelParams, d: &[f64]) -> Result<ModelParams> {
    let n_causes = model0.n_causes();
    let factors: Vec<f64> = match d.len() {
        1 => vec![d[0]; n_causes],
        len if len == n_causes => d.to_vec(),
        len => {
            return Err(Error::Invalid(format!(
                "d: expected 1 or {n_causes} deterioration factors, got {len}"
            )))
        }
    };
    let mut bad = Vec::new();
    for (j, f) in factors.iter().enumerate() {
        if !(f.is_finite() && *f >= 1.0) {
            bad.push(format!("d[{j}]: deterioration factors must be >= 1, got {f}"));
        }
    }
    if bad.is_empty() && factors.iter().all(|f| *f == 1.0) {
        bad.push("d: at least one cause must deteriorate (some d_j > 1)".to_string());
    }
    if !bad.is_empty() {
        return Err(Error::invalid_report(&bad));
    }
    let eta1: Vec<f64> = model0.eta().iter().zip(&factors).map(|(e, f)| e / f).collect();
    rebuild_with_eta(model0, eta1)
}

fn rebuild_with_eta(model: &ModelParams, eta: Vec<f64>) -> Result<ModelParams> {
    match model.shape() {
        Shape::Equal(g) => ModelParams::new_equal(eta, *g, model.nu()),
        Shape::Unequal(gs) => ModelParams::new_unequal(eta, gs.clone(), model.nu()),
    }
}

/// Designs the plan `(n*, pi_c)` for testing `model0` against `model1` on
/// `scheme` at the risks in `risk`.
pub fn design_plan(
    model0: &ModelParams,
    model1: &ModelParams,
    scheme: &PicScheme,
    risk: &RiskSpec,
) -> Result<PlanResult> {
    if model0.n_causes() != model1.n_causes() {
        return Err(Error::Invalid(format!(
            "hypotheses disagree on the number of causes: {} vs {}",
            model0.n_causes(),
            model1.n_causes()
        )));
    }
    let pi_0 = model0.reliability(risk.t0)?;
    let pi_1 = model1.reliability(risk.t0)?;
    if pi_0 - pi_1 < 1e-10 {
        return Err(Error::Infeasible(format!(
            "the hypotheses are not separated: acceptable reliability {pi_0} does not \
             exceed rejectable reliability {pi_1} at t0 = {}",
            risk.t0
        )));
    }
    let s_0 = std_variance(model0, scheme, risk.t0)?.sqrt();
    let s_1 = std_variance(model1, scheme, risk.t0)?.sqrt();
    let z_b = normal_quantile(1.0 - risk.beta)?;
    let z_a = normal_quantile(risk.alpha)?;
    let spread = s_1 * z_b - s_0 * z_a;
    if spread <= 0.0 {
        return Err(Error::Infeasible(
            "the risk levels leave no separation between the acceptance and rejection \
             regions"
                .into(),
        ));
    }
    let pi_c = (pi_0 * s_1 * z_b - pi_1 * s_0 * z_a) / spread;
    let n_real = (spread / (pi_0 - pi_1)).powi(2);
    let n_star = (n_real.floor() as u64).max(1);
    Ok(PlanResult {
        scheme: scheme.clone(),
        risk: *risk,
        n_real,
        n_star,
        pi_c,
        pi_0,
        pi_1,
        s_0,
        s_1,
    })
}

// --- evaluation -------------------------------------------------------------

/// Probability that a test of `n_units` units accepts when `model` is true:
/// `P(Rhat > pi_c) = 1 - Phi( sqrt(n) (pi_c - R) / S )` under the asymptotic
/// normal law of the estimate.
pub fn acceptance_probability(
    plan: &PlanResult,
    model: &ModelParams,
    n_units: f64,
) -> Result<f64> {
    if !(n_units.is_finite() && n_units > 0.0) {
        return Err(Error::Invalid(format!(
            "n_units: must be a positive number of units, got {n_units}"
        )));
    }
    let r = model.reliability(plan.risk.t0)?;
    let s = std_variance(model, &plan.scheme, plan.risk.t0)?.sqrt();
    Ok(normal_sf(n_units.sqrt() * (plan.pi_c - r) / s))
}

/// One point on an operating-characteristic curve.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OcPoint {
    /// Common factor applied to every scale (1 at the acceptable model).
    pub scale: f64,
    /// Failure probability `1 - R(t0)` at this point.
    pub defective_proportion: f64,
    /// Probability the `n*`-unit plan accepts.
    pub acceptance_probability: f64,
}

/// Operating characteristic of the adopted plan along the path that shrinks
/// every scale of `model0` by a common factor `c` running from 1 down to
/// `c_lo` over `n_points` evenly spaced values (quality degrades as `c`
/// falls, so defective proportion increases along the returned curve).
pub fn oc_curve(
    plan: &PlanResult,
    model0: &ModelParams,
    c_lo: f64,
    n_points: usize,
) -> Result<Vec<OcPoint>> {
    if !(c_lo.is_finite() && c_lo > 0.0 && c_lo <= 1.0) {
        return Err(Error::Invalid(format!(
            "c_lo: the lower scale factor must lie in (0, 1], got {c_lo}"
        )));
    }
    if n_points < 2 {
        return Err(Error::Invalid(format!(
            "n_points: at least 2 curve points are required, got {n_points}"
        )));
    }
    let mut out = Vec::with_capacity(n_points);
    for k in 0..n_points {
        let c = 1.0 - (1.0 - c_lo) * k as f64 / (n_points - 1) as f64;
        let eta: Vec<f64> = model0.eta().iter().map(|e| e * c).collect();
        let model = rebuild_with_eta(model0, eta)?;
        let r = model.reliability(plan.risk.t0)?;
        out.push(OcPoint {
            scale: c,
            defective_proportion: 1.0 - r,
            acceptance_probability: acceptance_probability(plan, &model, plan.n_star as f64)?,
        });
    }
    Ok(out)
}

/// Applies the acceptance rule to an estimated reliability: accept exactly
/// when the estimate strictly exceeds `pi_c` (a non-finite estimate rejects).
pub fn decide(plan: &PlanResult, reliability_estimate: f64) -> Decision {
    if reliability_estimate > plan.pi_c {
        Decision::Accept
    } else {
        Decision::Reject
    }
}
