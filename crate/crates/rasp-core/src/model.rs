//! Frailty-Weibull lifetime model with competing failure causes.
//!
//! Each unit carries `J` latent cause-specific lifetimes with Weibull marginal
//! hazards; the unit fails at the earliest one, and the failure cause is
//! recorded. Dependence between causes enters through a shared multiplicative
//! gamma frailty with variance `nu`: integrating the frailty out gives the
//! system survivor function
//!
//! ```text
//! R(t) = (1 + nu * D(t))^(-1/nu),     D(t) = sum_j (t / eta_j)^(gamma_j),
//! ```
//!
//! which tends to the independent-causes form `exp(-D(t))` as `nu -> 0`.
//! The cause-`j` sub-density (failure at `t` from cause `j`) is
//!
//! ```text
//! g_j(t) = (gamma_j/eta_j) (t/eta_j)^(gamma_j - 1) (1 + nu D(t))^(-1/nu - 1).
//! ```
//!
//! Under a common shape (`gamma_j = gamma` for all `j`) the failure cause is
//! independent of the failure time: the cause-`j` share of failures is the
//! constant `exp(-psi_j) = eta_j^-gamma / sum_k eta_k^-gamma`, and every
//! sub-survivor factorizes as `exp(-psi_j) * R(t)`. With separate shapes those
//! quantities require one-dimensional quadrature, provided here as well.
//!
//! For an inspection schedule `L_1 < … < L_M` the conditional per-interval
//! failure probabilities (given at-risk at the interval's start) are
//!
//! ```text
//! q_i  = [R(L_{i-1}) - R(L_i)] / R(L_{i-1}),
//! q_ij = [Gbar_j(L_{i-1}) - Gbar_j(L_i)] / R(L_{i-1}),
//! ```
//!
//! with `L_0 = 0`. These, and their analytic parameter gradients, are the
//! building blocks for likelihoods and information matrices.
//!
//! # Numerical policy
//!
//! * `R(t)` is evaluated as `exp(-ln(1 + nu D)/nu)`, switching to the
//!   expansion `exp(-D + nu D^2/2)` below `nu = 1e-8` so the independent
//!   limit is approached smoothly.
//! * `(1 + nu D)^(-1/nu - 1)` is evaluated as `R(t) / (1 + nu D)`, which is
//!   exact and avoids a second exponentiation.
//! * The frailty derivative `dR/dnu` switches to an alternating series below
//!   `nu = 1e-4`, where the closed form loses digits to cancellation.
//! * Interval probabilities are formed from differences of the *log* survivor
//!   (`q_i = -expm1(-(H_i - H_{i-1}))`), so precision does not degrade as the
//!   survivor shrinks; an explicit conditioning error is raised once the
//!   survivor at an interval's lower endpoint underflows entirely.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Below this frailty variance the log-survivor uses the small-`nu` expansion.
const NU_LOG_SERIES: f64 = 1e-8;
/// Below this frailty variance `dR/dnu` uses the alternating series.
const NU_GRAD_SERIES: f64 = 1e-4;
/// Cumulative log-hazard beyond which `R(t)` underflows a double.
const LOG_SURVIVOR_FLOOR: f64 = 708.0;
/// Absolute tolerance for the quadratures behind separate-shape quantities.
const QUAD_TOL: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

/// Weibull shape specification: one common shape or one per cause.
///
/// The two variants are distinct statistical models with different parameter
/// counts, so `Unequal` with identical entries is *not* collapsed to `Equal`.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// Common shape `gamma` across all causes.
    Equal(f64),
    /// Per-cause shapes `gamma_j`, same length as `eta`.
    Unequal(Vec<f64>),
}

/// Validated parameters of the frailty-Weibull competing-cause model.
///
/// Free-parameter vectors (gradients, information matrices, fitted standard
/// errors) are always ordered
///
/// ```text
/// (eta_1, …, eta_J, gamma)            common shape, nu = 0
/// (eta_1, …, eta_J, gamma, nu)        common shape, nu > 0
/// (eta_1, …, eta_J, gamma_1, …, gamma_J[, nu])   separate shapes
/// ```
///
/// The frailty coordinate exists exactly when the model is dependent
/// (`nu > 0`); the independent model does not carry a pinned zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelParamsJson", into = "ModelParamsJson")]
pub struct ModelParams {
    eta: Vec<f64>,
    shape: Shape,
    nu: f64,
}

/// Wire format: `{"eta": […], "gamma": x | "gammas": […], "nu": x?}`.
/// An omitted `nu` means the independent model (`nu = 0`).
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelParamsJson {
    eta: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gammas: Option<Vec<f64>>,
    nu: Option<f64>,
}

impl TryFrom<ModelParamsJson> for ModelParams {
    type Error = Error;
    fn try_from(raw: ModelParamsJson) -> Result<Self> {
        let shape = match (raw.gamma, raw.gammas) {
            (Some(g), None) => Shape::Equal(g),
            (None, Some(gs)) => Shape::Unequal(gs),
            (Some(_), Some(_)) => {
                return Err(Error::Invalid(
                    "gamma/gammas: provide either a common shape or per-cause shapes, not both"
                        .into(),
                ))
            }
            (None, None) => {
                return Err(Error::Invalid(
                    "gamma/gammas: a shape parameter is required".into(),
                ))
            }
        };
        ModelParams::new(raw.eta, shape, raw.nu.unwrap_or(0.0))
    }
}

impl From<ModelParams> for ModelParamsJson {
    fn from(m: ModelParams) -> Self {
        let (gamma, gammas) = match m.shape {
            Shape::Equal(g) => (Some(g), None),
            Shape::Unequal(gs) => (None, Some(gs)),
        };
        ModelParamsJson { eta: m.eta, gamma, gammas, nu: Some(m.nu) }
    }
}

/// Cause-mass vector of a common-shape model: `psi_j` is the exponent in the
/// constant cause-`j` failure share `exp(-psi_j)`, and the shares sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct CauseMassVector {
    /// Exponents `psi_j = ln sum_k (eta_j/eta_k)^gamma`.
    pub psi: Vec<f64>,
}

impl CauseMassVector {
    /// The failure shares `exp(-psi_j)`.
    pub fn masses(&self) -> Vec<f64> {
        self.psi.iter().map(|p| (-p).exp()).collect()
    }
}

/// Conditional per-interval failure probabilities for one schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalProbs {
    /// `q_cause[i][j]`: probability a unit at risk at `L_i`'s lower endpoint
    /// fails in interval `i` from cause `j` (`M x J`).
    pub q_cause: Vec<Vec<f64>>,
    /// `q[i]`: probability such a unit fails in interval `i` from any cause.
    pub q: Vec<f64>,
}

/// Parameter gradients of the per-interval failure probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct GradIntervalProbs {
    /// `dq_cause[i][j]`: gradient of `q_cause[i][j]` (length = parameter dim).
    pub dq_cause: Vec<Vec<Vec<f64>>>,
    /// `dq[i]`: gradient of `q[i]`.
    pub dq: Vec<Vec<f64>>,
}

impl ModelParams {
    /// Build a validated parameter set. Violations are all reported at once,
    /// one `path: problem` line each.
    pub fn new(eta: Vec<f64>, shape: Shape, nu: f64) -> Result<Self> {
        let mut bad: Vec<String> = Vec::new();
        if eta.is_empty() {
            bad.push("eta: at least one cause scale is required".into());
        }
        for (k, e) in eta.iter().enumerate() {
            if !(e.is_finite() && *e > 0.0) {
                bad.push(format!("eta[{k}]: must be a positive finite number, got {e}"));
            }
        }
        match &shape {
            Shape::Equal(g) => {
                if !(g.is_finite() && *g > 0.0) {
                    bad.push(format!("gamma: must be a positive finite number, got {g}"));
                }
            }
            Shape::Unequal(gs) => {
                if gs.len() != eta.len() {
                    bad.push(format!(
                        "gammas: expected {} per-cause shapes to match eta, got {}",
                        eta.len(),
                        gs.len()
                    ));
                }
                for (k, g) in gs.iter().enumerate() {
                    if !(g.is_finite() && *g > 0.0) {
                        bad.push(format!(
                            "gammas[{k}]: must be a positive finite number, got {g}"
                        ));
                    }
                }
            }
        }
        if !(nu.is_finite() && nu >= 0.0) {
            bad.push(format!("nu: must be a finite number >= 0, got {nu}"));
        }
        if bad.is_empty() {
            Ok(ModelParams { eta, shape, nu })
        } else {
            Err(Error::invalid_report(&bad))
        }
    }

    /// Common-shape model.
    pub fn new_equal(eta: Vec<f64>, gamma: f64, nu: f64) -> Result<Self> {
        ModelParams::new(eta, Shape::Equal(gamma), nu)
    }

    /// Separate-shapes model.
    pub fn new_unequal(eta: Vec<f64>, gammas: Vec<f64>, nu: f64) -> Result<Self> {
        ModelParams::new(eta, Shape::Unequal(gammas), nu)
    }

    /// Parse from the JSON wire format (see [`ModelParams`] docs).
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("model: {e}")))
    }

    pub fn n_causes(&self) -> usize {
        self.eta.len()
    }

    pub fn eta(&self) -> &[f64] {
        &self.eta
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// True when causes are dependent (`nu > 0`).
    pub fn is_dependent(&self) -> bool {
        self.nu > 0.0
    }

    pub fn is_equal_shape(&self) -> bool {
        matches!(self.shape, Shape::Equal(_))
    }

    /// The common shape, if this model has one.
    pub fn equal_shape_gamma(&self) -> Option<f64> {
        match self.shape {
            Shape::Equal(g) => Some(g),
            Shape::Unequal(_) => None,
        }
    }

    /// Shape for cause `j` (common value repeated under `Shape::Equal`).
    fn gamma_j(&self, j: usize) -> f64 {
        match &self.shape {
            Shape::Equal(g) => *g,
            Shape::Unequal(gs) => gs[j],
        }
    }

    /// Number of free parameters (length of every gradient in this module).
    pub fn dim(&self) -> usize {
        let shape_dim = match self.shape {
            Shape::Equal(_) => 1,
            Shape::Unequal(_) => self.eta.len(),
        };
        self.eta.len() + shape_dim + usize::from(self.nu > 0.0)
    }

    /// Free parameters in gradient order.
    pub fn param_vector(&self) -> Vec<f64> {
        let mut v = self.eta.clone();
        match &self.shape {
            Shape::Equal(g) => v.push(*g),
            Shape::Unequal(gs) => v.extend_from_slice(gs),
        }
        if self.nu > 0.0 {
            v.push(self.nu);
        }
        v
    }

    /// Human-readable names matching [`ModelParams::param_vector`].
    pub fn param_names(&self) -> Vec<String> {
        let j = self.eta.len();
        let mut names: Vec<String> = (1..=j).map(|k| format!("eta_{k}")).collect();
        match self.shape {
            Shape::Equal(_) => names.push("gamma".into()),
            Shape::Unequal(_) => names.extend((1..=j).map(|k| format!("gamma_{k}"))),
        }
        if self.nu > 0.0 {
            names.push("nu".into());
        }
        names
    }

    /// Rebuild a model of the same kind from a free-parameter vector.
    pub fn with_param_vector(&self, v: &[f64]) -> Result<Self> {
        if v.len() != self.dim() {
            return Err(Error::Invalid(format!(
                "parameter vector: expected {} entries, got {}",
                self.dim(),
                v.len()
            )));
        }
        let j = self.eta.len();
        let eta = v[..j].to_vec();
        let (shape, used) = match self.shape {
            Shape::Equal(_) => (Shape::Equal(v[j]), j + 1),
            Shape::Unequal(_) => (Shape::Unequal(v[j..2 * j].to_vec()), 2 * j),
        };
        let nu = if self.nu > 0.0 { v[used] } else { 0.0 };
        ModelParams::new(eta, shape, nu)
    }

    // -----------------------------------------------------------------------
    // Survivor function and friends
    // -----------------------------------------------------------------------

    /// Cumulative hazard sum `D(t) = sum_j (t/eta_j)^(gamma_j)`.
    fn hazard_sum(&self, t: f64) -> f64 {
        self.eta
            .iter()
            .enumerate()
            .map(|(j, e)| (t / e).powf(self.gamma_j(j)))
            .sum()
    }

    /// Negative log-survivor `H(t) = -ln R(t)` from a precomputed `D(t)`.
    fn neg_log_survivor_from(&self, delta: f64) -> f64 {
        if self.nu == 0.0 {
            delta
        } else if self.nu < NU_LOG_SERIES {
            delta * (1.0 - 0.5 * self.nu * delta)
        } else {
            (self.nu * delta).ln_1p() / self.nu
        }
    }

    fn neg_log_survivor(&self, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else {
            self.neg_log_survivor_from(self.hazard_sum(t))
        }
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::Invalid(format!(
                "t: must be a finite number >= 0, got {t}"
            )));
        }
        Ok(())
    }

    /// System survivor (reliability) `R(t)`.
    pub fn reliability(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        Ok((-self.neg_log_survivor(t)).exp())
    }

    /// Ratio of the dependent survivor to the independent one with the same
    /// marginal hazards, `R(t) / exp(-D(t))`; identically 1 when `nu = 0` and
    /// >= 1 otherwise (shared frailty makes joint survival more likely).
    pub fn dependence_ratio(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        if t == 0.0 {
            return Ok(1.0);
        }
        let delta = self.hazard_sum(t);
        Ok((delta - self.neg_log_survivor_from(delta)).exp())
    }

    /// Density-level factor `(1 + nu D)^(-1/nu - 1) = R(t)/(1 + nu D)`.
    fn density_attenuation(&self, delta: f64) -> f64 {
        (-self.neg_log_survivor_from(delta)).exp() / (1.0 + self.nu * delta)
    }

    /// Cause-mass vector `psi` of a common-shape model; with separate shapes
    /// the cause share varies over time and no such vector exists.
    pub fn cause_mass(&self) -> Result<CauseMassVector> {
        let Shape::Equal(gamma) = self.shape else {
            return Err(Error::Invalid(
                "cause_mass: the failure-cause share is constant only under a common shape"
                    .into(),
            ));
        };
        Ok(CauseMassVector { psi: psi_from_log_masses(&self.eta, gamma) })
    }

    /// Sub-survivor `Gbar_j(t) = P(T > t, failure cause = j)`.
    ///
    /// Closed form under a common shape; adaptive quadrature of the
    /// sub-density otherwise (absolute accuracy ~1e-12).
    pub fn sub_survivor(&self, j: usize, t: f64) -> Result<f64> {
        self.check_cause(j)?;
        self.check_time(t)?;
        match self.shape {
            Shape::Equal(_) => {
                let mass = self.cause_mass()?.masses()[j];
                Ok(mass * self.reliability(t)?)
            }
            Shape::Unequal(_) => self.sub_survivor_quadrature(j, t),
        }
    }

    /// Sub-density `g_j(t)`: failure-time density restricted to cause `j`.
    ///
    /// At `t = 0` the mathematical limit is returned (`+inf` when
    /// `gamma_j < 1`).
    pub fn sub_density(&self, j: usize, t: f64) -> Result<f64> {
        self.check_cause(j)?;
        self.check_time(t)?;
        let gamma = self.gamma_j(j);
        if t == 0.0 {
            return Ok(if gamma > 1.0 {
                0.0
            } else if gamma == 1.0 {
                1.0 / self.eta[j]
            } else {
                f64::INFINITY
            });
        }
        let delta = self.hazard_sum(t);
        let e = self.eta[j];
        Ok((gamma / e) * (t / e).powf(gamma - 1.0) * self.density_attenuation(delta))
    }

    fn check_cause(&self, j: usize) -> Result<()> {
        if j >= self.eta.len() {
            return Err(Error::Invalid(format!(
                "cause index: must be < {}, got {j}",
                self.eta.len()
            )));
        }
        Ok(())
    }

    // -----------------------------------------------------------------------
    // Interval probabilities
    // -----------------------------------------------------------------------

    fn check_schedule(times: &[f64]) -> Result<()> {
        if times.is_empty() {
            return Err(Error::Invalid(
                "inspection times: at least one inspection is required".into(),
            ));
        }
        let mut prev = 0.0;
        for (i, t) in times.iter().enumerate() {
            if !(t.is_finite() && *t > prev) {
                return Err(Error::Invalid(format!(
                    "inspection times: must be finite and strictly increasing from 0; \
                     L[{}] = {} does not exceed {}",
                    i + 1,
                    t,
                    prev
                )));
            }
            prev = *t;
        }
        Ok(())
    }

    /// Conditional per-interval failure probabilities for the inspection
    /// times `times` (`L_1 < … < L_M`, with `L_0 = 0` implied).
    ///
    /// Fails with a conditioning error if the survivor function underflows at
    /// some interval's lower endpoint — conditional probabilities beyond that
    /// point are not representable.
    pub fn interval_probs(&self, times: &[f64]) -> Result<IntervalProbs> {
        Self::check_schedule(times)?;
        let jn = self.eta.len();
        let mut q = Vec::with_capacity(times.len());
        let mut q_cause = Vec::with_capacity(times.len());

        match self.shape {
            Shape::Equal(gamma) => {
                let masses = CauseMassVector { psi: psi_from_log_masses(&self.eta, gamma) }
                    .masses();
                let mut h_prev = 0.0;
                let mut lower = 0.0;
                for (i, t) in times.iter().enumerate() {
                    self.check_conditioning(i, lower, h_prev)?;
                    let h_cur = self.neg_log_survivor(*t);
                    let qi = -(-(h_cur - h_prev)).exp_m1();
                    q.push(qi);
                    q_cause.push(masses.iter().map(|m| m * qi).collect());
                    h_prev = h_cur;
                    lower = *t;
                }
            }
            Shape::Unequal(_) => {
                let mut h_prev = 0.0;
                let mut lower = 0.0;
                for (i, t) in times.iter().enumerate() {
                    self.check_conditioning(i, lower, h_prev)?;
                    let h_cur = self.neg_log_survivor(*t);
                    let qi = -(-(h_cur - h_prev)).exp_m1();
                    let s_prev = (-h_prev).exp();
                    let mut row = Vec::with_capacity(jn);
                    for j in 0..jn {
                        let numer = self.sub_density_integral(j, lower, *t)?;
                        row.push((numer / s_prev).clamp(0.0, 1.0));
                    }
                    q.push(qi);
                    q_cause.push(row);
                    h_prev = h_cur;
                    lower = *t;
                }
            }
        }
        Ok(IntervalProbs { q_cause, q })
    }

    fn check_conditioning(&self, i: usize, lower: f64, h_lower: f64) -> Result<()> {
        if h_lower > LOG_SURVIVOR_FLOOR {
            return Err(Error::Numerical(format!(
                "interval {}: conditional failure probabilities are ill-conditioned — the \
                 survivor function underflows at the interval's lower endpoint L = {lower}",
                i + 1
            )));
        }
        Ok(())
    }

    // -----------------------------------------------------------------------
    // Gradients
    // -----------------------------------------------------------------------

    /// Series/closed-form switch for the frailty derivative of the
    /// log-survivor: `d ln R / d nu` at cumulative hazard `delta`.
    fn nu_log_derivative(&self, delta: f64) -> f64 {
        let nu = self.nu;
        if nu >= NU_GRAD_SERIES {
            let x = nu * delta;
            return x.ln_1p() / (nu * nu) - delta / (nu * (1.0 + x));
        }
        // sum_{k>=2} (-1)^k nu^(k-2) delta^k (k-1)/k, convergent for nu*delta < 1.
        let x = nu * delta;
        let mut power = delta * delta; // nu^(k-2) delta^k at k = 2
        let mut sign = 1.0;
        let mut sum = 0.0;
        for k in 2..200u32 {
            let term = sign * power * (k as f64 - 1.0) / k as f64;
            sum += term;
            if term.abs() <= 1e-16 * sum.abs() {
                break;
            }
            power *= x;
            sign = -sign;
        }
        sum
    }

    /// Gradient of the log-survivor `ln R(t)` in parameter order.
    fn grad_log_survivor(&self, t: f64) -> Vec<f64> {
        let jn = self.eta.len();
        let dim = self.dim();
        let mut g = vec![0.0; dim];
        if t <= 0.0 {
            return g;
        }
        let delta = self.hazard_sum(t);
        let damp = 1.0 / (1.0 + self.nu * delta);
        match self.shape {
            Shape::Equal(gamma) => {
                let mut dgamma = 0.0;
                for (j, e) in self.eta.iter().enumerate() {
                    let w = (t / e).powf(gamma);
                    g[j] = gamma / e * w * damp;
                    dgamma -= w * (t / e).ln();
                }
                g[jn] = dgamma * damp;
            }
            Shape::Unequal(ref gs) => {
                for (j, e) in self.eta.iter().enumerate() {
                    let w = (t / e).powf(gs[j]);
                    g[j] = gs[j] / e * w * damp;
                    g[jn + j] = -w * (t / e).ln() * damp;
                }
            }
        }
        if self.nu > 0.0 {
            g[dim - 1] = self.nu_log_derivative(delta);
        }
        g
    }

    /// Gradient of the reliability `R(t)` with respect to the free parameters
    /// (see [`ModelParams`] for the ordering). Exactly zero at `t = 0`.
    pub fn grad_reliability(&self, t: f64) -> Result<Vec<f64>> {
        self.check_time(t)?;
        let r = self.reliability(t)?;
        Ok(self.grad_log_survivor(t).into_iter().map(|g| g * r).collect())
    }

    /// Gradients `d psi_j / d theta` of the cause-mass exponents
    /// (common shape only; the frailty component is identically zero).
    fn grad_psi(&self, j: usize) -> Vec<f64> {
        let Shape::Equal(gamma) = self.shape else {
            unreachable!("grad_psi is only called for common-shape models")
        };
        let jn = self.eta.len();
        let mut g = vec![0.0; self.dim()];
        // S_j = sum_k (eta_j/eta_k)^gamma, computed via ratios (moderate range).
        let ratios: Vec<f64> = (0..jn).map(|k| (self.eta[j] / self.eta[k]).powf(gamma)).collect();
        let s_j: f64 = ratios.iter().sum();
        g[j] = gamma / self.eta[j] * (s_j - 1.0) / s_j;
        for (k, r) in ratios.iter().enumerate() {
            if k != j {
                g[k] = -(gamma / self.eta[k]) * r / s_j;
            }
        }
        g[jn] = (0..jn)
            .map(|k| ratios[k] * (self.eta[j] / self.eta[k]).ln())
            .sum::<f64>()
            / s_j;
        g
    }

    /// Analytic gradients of all per-interval probabilities (common shape).
    ///
    /// With separate shapes the cause-specific gradients have no closed form;
    /// differentiate [`ModelParams::interval_probs`] numerically instead.
    pub fn grad_interval_probs(&self, times: &[f64]) -> Result<GradIntervalProbs> {
        if !self.is_equal_shape() {
            return Err(Error::Invalid(
                "grad_interval_probs: analytic gradients require a common shape".into(),
            ));
        }
        let probs = self.interval_probs(times)?;
        let masses = self.cause_mass()?.masses();
        let grad_psis: Vec<Vec<f64>> = (0..self.eta.len()).map(|j| self.grad_psi(j)).collect();
        let dim = self.dim();

        let mut dq = Vec::with_capacity(times.len());
        let mut dq_cause = Vec::with_capacity(times.len());
        let mut glog_prev = vec![0.0; dim];
        for (i, t) in times.iter().enumerate() {
            let glog_cur = self.grad_log_survivor(*t);
            let qi = probs.q[i];
            let keep = 1.0 - qi; // R(L_i)/R(L_{i-1})

            // dq_i = (1 - q_i) (dlnR_prev - dlnR_cur)
            let dqi: Vec<f64> =
                (0..dim).map(|u| keep * (glog_prev[u] - glog_cur[u])).collect();

            // dq_ij = m_j (dlnR_prev - keep * dlnR_cur) - q_ij (dpsi_j + dlnR_prev),
            // the difference-quotient form rewritten so no division by q_i occurs.
            let mut rows = Vec::with_capacity(masses.len());
            for (j, m) in masses.iter().enumerate() {
                let qij = probs.q_cause[i][j];
                let dpsi = &grad_psis[j];
                let row: Vec<f64> = (0..dim)
                    .map(|u| {
                        m * (glog_prev[u] - keep * glog_cur[u])
                            - qij * (dpsi[u] + glog_prev[u])
                    })
                    .collect();
                rows.push(row);
            }
            dq.push(dqi);
            dq_cause.push(rows);
            glog_prev = glog_cur;
        }
        Ok(GradIntervalProbs { dq_cause, dq })
    }

    // -----------------------------------------------------------------------
    // Quadrature for separate shapes
    // -----------------------------------------------------------------------

    /// `int_a^b g_j(s) ds` with the `s = b u^(1/gamma_j)` substitution when
    /// `a = 0` (removes the integrable endpoint singularity of `gamma_j < 1`).
    fn sub_density_integral(&self, j: usize, a: f64, b: f64) -> Result<f64> {
        if a == 0.0 {
            let gamma = self.gamma_j(j);
            let e = self.eta[j];
            let scale = (b / e).powf(gamma);
            let f = |u: f64| {
                if u <= 0.0 {
                    1.0
                } else {
                    self.density_attenuation(self.hazard_sum(b * u.powf(1.0 / gamma)))
                }
            };
            Ok(scale * quad::adaptive(&f, 0.0, 1.0, QUAD_TOL))
        } else {
            let f = |s: f64| self.sub_density(j, s).unwrap_or(0.0);
            Ok(quad::adaptive(&f, a, b, QUAD_TOL))
        }
    }

    /// Tail integral `Gbar_j(t) = int_t^inf g_j(s) ds` for separate shapes.
    fn sub_survivor_quadrature(&self, j: usize, t: f64) -> Result<f64> {
        if t == 0.0 {
            // Split at the cause scale: transformed head + smooth tail.
            let head = self.sub_density_integral(j, 0.0, self.eta[j])?;
            return Ok(head + self.sub_survivor_quadrature(j, self.eta[j])?);
        }
        // Cutoff where the remaining mass (<= R(T)) is negligible.
        let mut upper = 2.0 * t.max(self.eta.iter().cloned().fold(0.0, f64::max));
        let mut doublings = 0;
        while self.neg_log_survivor(upper) < 40.0 {
            upper *= 2.0;
            doublings += 1;
            if doublings > 600 {
                return Err(Error::Numerical(
                    "sub_survivor: tail integration cannot reach a negligible-mass cutoff"
                        .into(),
                ));
            }
        }
        let f = |s: f64| self.sub_density(j, s).unwrap_or(0.0);
        Ok(quad::adaptive(&f, t, upper, QUAD_TOL))
    }
}

/// `psi_j = -ln mass_j` from log-masses `-gamma ln eta_j`, normalized with the
/// usual max-subtraction so extreme `eta^gamma` cannot overflow.
fn psi_from_log_masses(eta: &[f64], gamma: f64) -> Vec<f64> {
    let lw: Vec<f64> = eta.iter().map(|e| -gamma * e.ln()).collect();
    let m = lw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let log_norm = lw.iter().map(|v| (v - m).exp()).sum::<f64>().ln() + m;
    lw.iter().map(|v| log_norm - v).collect()
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod quadrature
// ---------------------------------------------------------------------------

mod quad {
    //! Recursive adaptive Gauss-Kronrod (7-15) integration. Wide tails are
    //! handled by splitting at the *geometric* midpoint, which halves the log
    //! range instead of the linear one.

    // 15-point Kronrod abscissae (non-negative half) and weights, with the
    // embedded 7-point Gauss weights on the shared nodes.
    const XGK: [f64; 8] = [
        0.991455371120813,
        0.949107912342759,
        0.864864423359769,
        0.741531185599394,
        0.586087235467691,
        0.405845151377397,
        0.207784955007898,
        0.0,
    ];
    const WGK: [f64; 8] = [
        0.022935322010529,
        0.063092092629979,
        0.104790010322250,
        0.140653259715525,
        0.169004726639267,
        0.190350578064785,
        0.204432940075298,
        0.209482141084728,
    ];
    const WG: [f64; 4] = [
        0.129484966168870,
        0.279705391489277,
        0.381830050505119,
        0.417959183673469,
    ];

    /// One Gauss-Kronrod panel; returns `(gauss7, kronrod15)`.
    fn panel(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut gauss = 0.0;
        let mut kronrod = 0.0;
        for (k, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
            let (fl, fr) = (f(c - h * x), f(c + h * x));
            let pair = if x == 0.0 { fl } else { fl + fr };
            kronrod += wk * pair;
            if k % 2 == 1 {
                gauss += WG[k / 2] * pair;
            } else if x == 0.0 {
                gauss += WG[3] * fl;
            }
        }
        (gauss * h, kronrod * h)
    }

    fn recurse(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (g, k) = panel(f, a, b);
        if (k - g).abs() <= tol || depth >= 48 {
            return k;
        }
        let mid = if a > 0.0 && b / a > 4.0 { (a * b).sqrt() } else { 0.5 * (a + b) };
        recurse(f, a, mid, 0.5 * tol, depth + 1) + recurse(f, mid, b, 0.5 * tol, depth + 1)
    }

    /// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
    ///
    /// Ranges spanning many octaves are pre-split at powers of two: a single
    /// panel across a huge range samples no node near `a` and would silently
    /// accept 0 for an integrand concentrated there.
    pub fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        if a >= b {
            return 0.0;
        }
        let mut edges = vec![a];
        if a > 0.0 && b / a > 4.0 {
            let mut e = 2.0 * a;
            while e < b {
                edges.push(e);
                e *= 2.0;
            }
        }
        edges.push(b);
        let tol_seg = tol / (edges.len() - 1) as f64;
        edges
            .windows(2)
            .map(|w| recurse(f, w[0], w[1], tol_seg, 0))
            .sum()
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn integrates_smooth_functions_to_tolerance() {
            let val = adaptive(&|x: f64| x.exp(), 0.0, 1.0, 1e-12);
            assert!((val - (1f64.exp() - 1.0)).abs() < 1e-12);
            // Gauss 7 is exact for polynomials up to degree 13.
            let poly = adaptive(&|x: f64| 7.0 * x.powi(6), 0.0, 2.0, 1e-12);
            assert!((poly - 128.0).abs() < 1e-10);
        }

        #[test]
        fn handles_wide_decaying_tails() {
            // int_1^inf x^-2 dx = 1; truncate at 1e12 (tail 1e-12).
            let val = adaptive(&|x: f64| x.powi(-2), 1.0, 1e12, 1e-11);
            assert!((val - (1.0 - 1e-12)).abs() < 1e-9, "got {val}");
        }
    }
}

// ---------------------------------------------------------------------------
