//! Maximum-likelihood fitting from interval count data.
//!
//! ## Data layout
//!
//! An observed life test is a table of per-interval counts: `d[i][j]` units
//! failed from cause `j` in `(L_{i-1}, L_i]` and `r[i]` surviving units were
//! withdrawn at `L_i`. The at-risk sizes follow from the counting recursion
//! `n_{i+1} = n_i - d_{i+} - r_i`, and every unit must be accounted for by
//! the final inspection.
//!
//! ## Likelihood
//!
//! Conditioning interval by interval turns the sample into a product of
//! multinomials: given `n_i` units at risk, each fails from cause `j` with
//! probability `q_ij` or survives the interval with probability `1 - q_i`.
//! Since withdrawals are made only from survivors and do not depend on the
//! parameters, they drop out of the score and
//!
//! ```text
//! l(theta) = sum_i [ sum_j d_ij ln q_ij + (n_i - d_i+) ln(1 - q_i) ].
//! ```
//!
//! ## Fitting
//!
//! [`fit_mle`] maximizes `l` in log-parameter coordinates (all parameters are
//! positive), using BFGS with the analytic score plus a simplex polish when
//! the causes share a shape, and simplex search alone otherwise (the
//! separate-shape probabilities are quadrature-valued). Five deterministic
//! restarts guard against local maxima. A dependent fit whose frailty
//! variance collapses below `1e-6` is reported as its independent limit with
//! [`FitResult::independence_limit`] set.
//!
//! Standard errors come from the inverse of the information matrix evaluated
//! at the estimate with the *observed* at-risk counts in place of their
//! expectations.

use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fisher;
use crate::linalg::Matrix;
use crate::model::ModelParams;
use crate::optim;

/// Boundary below which a fitted frailty variance is treated as zero.
const NU_COLLAPSE: f64 = 1e-6;
/// Relative tolerance on the maximized log-likelihood.
const FIT_TOL: f64 = 1e-8;

// --- observed data ---------------------------------------------------------

/// Cause-by-interval failure and withdrawal counts from one life test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservedData {
    times: Vec<f64>,
    d: Vec<Vec<u64>>,
    r: Vec<u64>,
}

impl ObservedData {
    /// Builds a dataset from inspection times `times`, failure counts
    /// `d[i][j]` (interval `i`, cause `j`), and withdrawal counts `r[i]`.
    pub fn new(times: Vec<f64>, d: Vec<Vec<u64>>, r: Vec<u64>) -> Result<Self> {
        let mut bad = Vec::new();
        if times.is_empty() {
            bad.push("L: at least one inspection is required".to_string());
        }
        let mut prev = 0.0;
        for (i, t) in times.iter().enumerate() {
            if !(t.is_finite() && *t > prev) {
                bad.push(format!(
                    "L[{i}]: inspection times must be finite, positive, and strictly \
                     increasing, got {t} after {prev}"
                ));
                break;
            }
            prev = *t;
        }
        if d.len() != times.len() {
            bad.push(format!(
                "d: expected {} rows of failure counts, got {}",
                times.len(),
                d.len()
            ));
        }
        if r.len() != times.len() {
            bad.push(format!(
                "r: expected {} withdrawal counts, got {}",
                times.len(),
                r.len()
            ));
        }
        let n_causes = d.first().map_or(0, Vec::len);
        if d.first().is_some() && n_causes == 0 {
            bad.push("d: at least one failure cause is required".to_string());
        }
        for (i, row) in d.iter().enumerate() {
            if row.len() != n_causes {
                bad.push(format!(
                    "d[{i}]: expected {n_causes} cause counts, got {}",
                    row.len()
                ));
            }
        }
        if bad.is_empty() && d.iter().map(|row| row.iter().sum::<u64>()).sum::<u64>()
            + r.iter().sum::<u64>()
            == 0
        {
            bad.push("counts: the dataset contains no units".to_string());
        }
        if !bad.is_empty() {
            return Err(Error::invalid_report(&bad));
        }
        Ok(ObservedData { times, d, r })
    }

    /// Number of inspection intervals.
    pub fn n_inspections(&self) -> usize {
        self.times.len()
    }

    /// Number of failure causes.
    pub fn n_causes(&self) -> usize {
        self.d[0].len()
    }

    /// Inspection times `L_1 < ... < L_M`.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Failure counts by interval and cause.
    pub fn failures(&self) -> &[Vec<u64>] {
        &self.d
    }

    /// Withdrawal counts by interval.
    pub fn withdrawals(&self) -> &[u64] {
        &self.r
    }

    /// Total units placed on test (every unit fails or is withdrawn).
    pub fn n_units(&self) -> u64 {
        self.d.iter().map(|row| row.iter().sum::<u64>()).sum::<u64>()
            + self.r.iter().sum::<u64>()
    }

    /// Total failures across intervals and causes.
    pub fn total_failures(&self) -> u64 {
        self.d.iter().map(|row| row.iter().sum::<u64>()).sum()
    }

    /// Units at risk entering each interval (`n_1 = n`).
    pub fn at_risk(&self) -> Vec<u64> {
        // n_i equals everything consumed from interval i onward.
        let m = self.times.len();
        let mut out = vec![0u64; m];
        let mut acc = 0u64;
        for i in (0..m).rev() {
            acc += self.d[i].iter().sum::<u64>() + self.r[i];
            out[i] = acc;
        }
        out
    }

    // --- CSV interchange ---------------------------------------------------

    /// Reads the CSV interchange form: header
    /// `i,L_lower,L_upper,d_1,...,d_J,r`, one row per interval with `i`
    /// running from 1 and each `L_lower` equal to the previous `L_upper`
    /// (zero for the first row).
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| Error::Invalid(format!("csv: cannot read header: {e}")))?
            .clone();
        let cols = headers.len();
        if cols < 5
            || headers.get(0) != Some("i")
            || headers.get(1) != Some("L_lower")
            || headers.get(2) != Some("L_upper")
            || headers.get(cols - 1) != Some("r")
        {
            return Err(Error::Invalid(format!(
                "csv: expected header i,L_lower,L_upper,d_1,...,d_J,r, got {:?}",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let n_causes = cols - 4;
        for j in 0..n_causes {
            let want = format!("d_{}", j + 1);
            if headers.get(3 + j) != Some(want.as_str()) {
                return Err(Error::Invalid(format!(
                    "csv: expected column {} to be {want}, got {:?}",
                    4 + j,
                    headers.get(3 + j).unwrap_or("")
                )));
            }
        }

        let mut times = Vec::new();
        let mut d = Vec::new();
        let mut r = Vec::new();
        let mut prev_upper = 0.0_f64;
        for (row_idx, record) in rdr.records().enumerate() {
            let row = row_idx + 1;
            let record =
                record.map_err(|e| Error::Invalid(format!("csv row {row}: {e}")))?;
            if record.len() != cols {
                return Err(Error::Invalid(format!(
                    "csv row {row}: expected {cols} fields, got {}",
                    record.len()
                )));
            }
            let field = |k: usize| record.get(k).unwrap_or("");
            let idx: u64 = field(0).parse().map_err(|_| {
                Error::Invalid(format!("csv row {row}: i must be an integer, got {:?}", field(0)))
            })?;
            if idx != row as u64 {
                return Err(Error::Invalid(format!(
                    "csv row {row}: intervals must be numbered consecutively from 1, got i={idx}"
                )));
            }
            let lower: f64 = field(1).parse().map_err(|_| {
                Error::Invalid(format!("csv row {row}: L_lower must be a number, got {:?}", field(1)))
            })?;
            let upper: f64 = field(2).parse().map_err(|_| {
                Error::Invalid(format!("csv row {row}: L_upper must be a number, got {:?}", field(2)))
            })?;
            let tol = 1e-9 * prev_upper.abs().max(1.0);
            if (lower - prev_upper).abs() > tol {
                return Err(Error::Invalid(format!(
                    "csv row {row}: L_lower={lower} does not continue the previous interval \
                     (expected {prev_upper})"
                )));
            }
            let mut counts = Vec::with_capacity(n_causes);
            for j in 0..n_causes {
                let c: u64 = field(3 + j).parse().map_err(|_| {
                    Error::Invalid(format!(
                        "csv row {row}: d_{} must be a non-negative integer, got {:?}",
                        j + 1,
                        field(3 + j)
                    ))
                })?;
                counts.push(c);
            }
            let withdrawn: u64 = field(cols - 1).parse().map_err(|_| {
                Error::Invalid(format!(
                    "csv row {row}: r must be a non-negative integer, got {:?}",
                    field(cols - 1)
                ))
            })?;
            times.push(upper);
            d.push(counts);
            r.push(withdrawn);
            prev_upper = upper;
        }
        ObservedData::new(times, d, r)
    }

    /// Reads the CSV interchange form from a file.
    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Invalid(format!("cannot open {}: {e}", path.display())))?;
        Self::from_csv_reader(file)
    }

    /// Writes the CSV interchange form (see [`ObservedData::from_csv_reader`]).
    pub fn to_csv_string(&self) -> String {
        let n_causes = self.n_causes();
        let mut out = String::from("i,L_lower,L_upper");
        for j in 1..=n_causes {
            out.push_str(&format!(",d_{j}"));
        }
        out.push_str(",r\n");
        let mut lower = 0.0;
        for i in 0..self.n_inspections() {
            out.push_str(&format!("{},{},{}", i + 1, lower, self.times[i]));
            for j in 0..n_causes {
                out.push_str(&format!(",{}", self.d[i][j]));
            }
            out.push_str(&format!(",{}\n", self.r[i]));
            lower = self.times[i];
        }
        out
    }
}

// --- likelihood -------------------------------------------------------------

/// Log-likelihood of `model` for the observed counts.
///
/// Returns `-inf` when the model puts zero probability on an observed cell
/// (a legitimate likelihood value, distinct from invalid input).
pub fn log_likelihood(model: &ModelParams, data: &ObservedData) -> Result<f64> {
    check_causes(model, data)?;
    let probs = model.interval_probs(data.times())?;
    let at_risk = data.at_risk();
    let mut l = 0.0;
    for i in 0..data.n_inspections() {
        let d_plus: u64 = data.d[i].iter().sum();
        for (j, &dij) in data.d[i].iter().enumerate() {
            if dij > 0 {
                let qij = probs.q_cause[i][j];
                if qij <= 0.0 {
                    return Ok(f64::NEG_INFINITY);
                }
                l += dij as f64 * qij.ln();
            }
        }
        let survivors = at_risk[i] - d_plus;
        if survivors > 0 {
            let keep = 1.0 - probs.q[i];
            if keep <= 0.0 {
                return Ok(f64::NEG_INFINITY);
            }
            l += survivors as f64 * keep.ln();
        }
    }
    Ok(l)
}

/// Score (gradient of the log-likelihood in the natural parameters, ordered
/// as [`ModelParams::param_names`]).
pub fn score(model: &ModelParams, data: &ObservedData) -> Result<Vec<f64>> {
    check_causes(model, data)?;
    let probs = model.interval_probs(data.times())?;
    let grads = fisher::interval_prob_gradients(model, data.times())?;
    let at_risk = data.at_risk();
    let dim = model.dim();
    let mut g = vec![0.0; dim];
    for i in 0..data.n_inspections() {
        let d_plus: u64 = data.d[i].iter().sum();
        for (j, &dij) in data.d[i].iter().enumerate() {
            if dij > 0 {
                let qij = probs.q_cause[i][j];
                if qij <= 0.0 {
                    return Err(Error::Numerical(format!(
                        "score is undefined: interval {} cause {} has zero probability but \
                         {dij} observed failures",
                        i + 1,
                        j + 1
                    )));
                }
                for u in 0..dim {
                    g[u] += dij as f64 * grads.dq_cause[i][j][u] / qij;
                }
            }
        }
        let survivors = at_risk[i] - d_plus;
        if survivors > 0 {
            let keep = 1.0 - probs.q[i];
            if keep <= 0.0 {
                return Err(Error::Numerical(format!(
                    "score is undefined: interval {} has zero survival probability but \
                     {survivors} observed survivors",
                    i + 1
                )));
            }
            for u in 0..dim {
                g[u] -= survivors as f64 * grads.dq[i][u] / keep;
            }
        }
    }
    Ok(g)
}

fn check_causes(model: &ModelParams, data: &ObservedData) -> Result<()> {
    if model.n_causes() != data.n_causes() {
        return Err(Error::Invalid(format!(
            "model has {} causes but the data has {}",
            model.n_causes(),
            data.n_causes()
        )));
    }
    Ok(())
}

// --- fitting ----------------------------------------------------------------

/// Which model family to fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FitVariant {
    /// Shared frailty, one Weibull shape for all causes.
    #[serde(rename = "dependent-equal")]
    DependentEqualShape,
    /// Independent causes, one shape.
    #[serde(rename = "independent-equal")]
    IndependentEqualShape,
    /// Shared frailty, a shape per cause.
    #[serde(rename = "dependent-unequal")]
    DependentUnequalShape,
    /// Independent causes, a shape per cause.
    #[serde(rename = "independent-unequal")]
    IndependentUnequalShape,
}

impl FitVariant {
    /// Whether the variant carries a frailty-variance parameter.
    pub fn is_dependent(self) -> bool {
        matches!(
            self,
            FitVariant::DependentEqualShape | FitVariant::DependentUnequalShape
        )
    }

    /// Whether all causes share one Weibull shape.
    pub fn is_equal_shape(self) -> bool {
        matches!(
            self,
            FitVariant::DependentEqualShape | FitVariant::IndependentEqualShape
        )
    }

    /// Free parameter count for `n_causes` causes.
    pub fn n_params(self, n_causes: usize) -> usize {
        let shapes = if self.is_equal_shape() { 1 } else { n_causes };
        n_causes + shapes + usize::from(self.is_dependent())
    }

    fn independent_counterpart(self) -> FitVariant {
        match self {
            FitVariant::DependentEqualShape => FitVariant::IndependentEqualShape,
            FitVariant::DependentUnequalShape => FitVariant::IndependentUnequalShape,
            other => other,
        }
    }
}

impl fmt::Display for FitVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FitVariant::DependentEqualShape => "dependent-equal",
            FitVariant::IndependentEqualShape => "independent-equal",
            FitVariant::DependentUnequalShape => "dependent-unequal",
            FitVariant::IndependentUnequalShape => "independent-unequal",
        })
    }
}

impl FromStr for FitVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dependent-equal" => Ok(FitVariant::DependentEqualShape),
            "independent-equal" => Ok(FitVariant::IndependentEqualShape),
            "dependent-unequal" => Ok(FitVariant::DependentUnequalShape),
            "independent-unequal" => Ok(FitVariant::IndependentUnequalShape),
            other => Err(Error::Invalid(format!(
                "unknown model variant {other:?}; expected one of dependent-equal, \
                 independent-equal, dependent-unequal, independent-unequal"
            ))),
        }
    }
}

/// A maximum-likelihood fit.
#[derive(Debug, Clone, Serialize)]
pub struct FitResult {
    /// Estimated parameters.
    pub params: ModelParams,
    /// Variant the parameters belong to (the independent counterpart when a
    /// dependent fit collapsed; see `independence_limit`).
    pub variant: FitVariant,
    /// Maximized log-likelihood.
    pub log_likelihood: f64,
    /// Akaike information criterion `-2l + 2k`.
    pub aic: f64,
    /// Bayesian information criterion `-2l + k ln(n)` with `n` the number of
    /// test units.
    pub bic: f64,
    /// Free parameter count `k`.
    pub n_params: usize,
    /// Units on test.
    pub n_units: u64,
    /// Names aligned with `std_errors` and the covariance rows.
    pub param_names: Vec<String>,
    /// Observed-information standard errors; `None` when the information
    /// matrix is singular at the estimate.
    pub std_errors: Option<Vec<f64>>,
    /// Observed-information covariance rows; `None` when singular.
    pub covariance: Option<Vec<Vec<f64>>>,
    /// True when a requested dependent fit collapsed to the independence
    /// boundary (frailty variance below `1e-6`) and was refitted with the
    /// frailty removed.
    pub independence_limit: bool,
}

/// Builds a parameter set for `variant` from log-coordinates, or `None`
/// outside a generous sanity box.
fn params_from_log(x: &[f64], variant: FitVariant, n_causes: usize) -> Option<ModelParams> {
    let theta: Vec<f64> = x.iter().map(|v| v.exp()).collect();
    if theta.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let eta = theta[..n_causes].to_vec();
    if eta.iter().any(|e| !(1e-8..=1e8).contains(e)) {
        return None;
    }
    let n_shapes = if variant.is_equal_shape() { 1 } else { n_causes };
    let shapes = &theta[n_causes..n_causes + n_shapes];
    if shapes.iter().any(|g| !(1e-6..=200.0).contains(g)) {
        return None;
    }
    let nu = if variant.is_dependent() {
        let nu = theta[n_causes + n_shapes];
        if nu > 200.0 {
            return None;
        }
        nu
    } else {
        0.0
    };
    let built = if variant.is_equal_shape() {
        ModelParams::new_equal(eta, shapes[0], nu)
    } else {
        ModelParams::new_unequal(eta, shapes.to_vec(), nu)
    };
    built.ok()
}

/// Starting log-coordinates: a crude product-limit estimate of the failure
/// probability at the last inspection, split across causes by their observed
/// failure shares, inverted through a unit-shape model.
fn initial_log_coords(data: &ObservedData, variant: FitVariant) -> Vec<f64> {
    let at_risk = data.at_risk();
    let mut surv = 1.0;
    for i in 0..data.n_inspections() {
        let n_i = at_risk[i];
        if n_i > 0 {
            let d_plus: u64 = data.d[i].iter().sum();
            surv *= 1.0 - d_plus as f64 / n_i as f64;
        }
    }
    let f_hat = (1.0 - surv).clamp(0.05, 0.95);
    let delta_hat = -(1.0 - f_hat).ln();

    let total = data.total_failures().max(1) as f64;
    let n_causes = data.n_causes();
    let mut weights: Vec<f64> = (0..n_causes)
        .map(|j| {
            let dj: u64 = data.d.iter().map(|row| row[j]).sum();
            (dj as f64 / total).max(1e-3)
        })
        .collect();
    let wsum: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= wsum;
    }

    let horizon = *data.times().last().expect("validated non-empty");
    let mut x: Vec<f64> = weights
        .iter()
        .map(|w| (horizon / (w * delta_hat)).ln())
        .collect();
    let n_shapes = if variant.is_equal_shape() { 1 } else { n_causes };
    x.extend(std::iter::repeat(0.0).take(n_shapes)); // shape 1.0
    if variant.is_dependent() {
        x.push(0.5_f64.ln());
    }
    x
}

/// Maximum-likelihood fit of `variant` to `data`.
pub fn fit_mle(data: &ObservedData, variant: FitVariant) -> Result<FitResult> {
    let n_causes = data.n_causes();
    let dim = variant.n_params(n_causes);
    if data.total_failures() == 0 {
        return Err(Error::Numerical(
            "the likelihood is degenerate: no failures were observed".into(),
        ));
    }
    let cells = data.n_inspections() * (n_causes + 1);
    if cells < dim {
        return Err(Error::Invalid(format!(
            "identifiability: the data has {cells} observable cells but the model has \
             {dim} free parameters"
        )));
    }

    let mut neg_ll = |x: &[f64]| -> f64 {
        match params_from_log(x, variant, n_causes) {
            Some(model) => match log_likelihood(&model, data) {
                Ok(l) if l.is_finite() => -l,
                _ => f64::INFINITY,
            },
            None => f64::INFINITY,
        }
    };
    // Chain rule into log-coordinates: d(-l)/dx_u = -theta_u dl/dtheta_u.
    // Only consulted at points the line search already found feasible.
    let mut neg_grad = |x: &[f64]| -> Vec<f64> {
        params_from_log(x, variant, n_causes)
            .and_then(|model| {
                score(&model, data).ok().map(|g| {
                    g.iter()
                        .zip(x)
                        .map(|(gu, xu)| -gu * xu.exp())
                        .collect::<Vec<f64>>()
                })
            })
            .unwrap_or_else(|| vec![0.0; x.len()])
    };

    let x0 = initial_log_coords(data, variant);
    let restarts = if variant.is_equal_shape() { 5 } else { 4 };
    let mut rng = ChaCha8Rng::seed_from_u64(0x7261_7370_6669_7431);
    let mut best: Option<(Vec<f64>, f64)> = None;
    for k in 0..restarts {
        let mut xs = x0.clone();
        if k > 0 {
            for v in &mut xs {
                *v += 0.35 * rng.sample::<f64, _>(StandardNormal);
            }
        }
        let (x1, f1) = if variant.is_equal_shape() {
            let (xb, _) = optim::bfgs(&mut neg_ll, &mut neg_grad, &xs, FIT_TOL * 1e-2, 400);
            optim::nelder_mead(&mut neg_ll, &xb, 0.05, FIT_TOL * 1e-4, 2500)
        } else {
            let (xb, _) = optim::nelder_mead(&mut neg_ll, &xs, 0.3, FIT_TOL * 1e-3, 4000);
            optim::nelder_mead(&mut neg_ll, &xb, 0.05, FIT_TOL * 1e-5, 4000)
        };
        if f1.is_finite() && best.as_ref().is_none_or(|(_, fb)| f1 < *fb) {
            best = Some((x1, f1));
        }
    }
    let Some((x_hat, neg_l_hat)) = best else {
        return Err(Error::Numerical(
            "maximum-likelihood fit failed to converge: no restart reached a finite \
             likelihood"
                .into(),
        ));
    };

    let params = params_from_log(&x_hat, variant, n_causes).ok_or_else(|| {
        Error::Numerical("maximum-likelihood fit converged outside the parameter space".into())
    })?;

    // Frailty variance on the independence boundary: report the sub-model.
    if variant.is_dependent() && params.nu() < NU_COLLAPSE {
        let mut sub = fit_mle(data, variant.independent_counterpart())?;
        sub.independence_limit = true;
        return Ok(sub);
    }

    let l_hat = -neg_l_hat;
    let k = params.dim();
    let n_units = data.n_units();
    let (std_errors, covariance) = observed_errors(&params, data);
    Ok(FitResult {
        param_names: params.param_names(),
        params,
        variant,
        log_likelihood: l_hat,
        aic: -2.0 * l_hat + 2.0 * k as f64,
        bic: -2.0 * l_hat + k as f64 * (n_units as f64).ln(),
        n_params: k,
        n_units,
        std_errors,
        covariance,
        independence_limit: false,
    })
}

/// Information matrix at `model` with the observed at-risk counts, inverted
/// into standard errors and a covariance matrix. `None` when singular.
fn observed_errors(
    model: &ModelParams,
    data: &ObservedData,
) -> (Option<Vec<f64>>, Option<Vec<Vec<f64>>>) {
    let inner = || -> Result<Matrix> {
        let probs = model.interval_probs(data.times())?;
        let grads = fisher::interval_prob_gradients(model, data.times())?;
        let at_risk = data.at_risk();
        let mut info = Matrix::zeros(model.dim());
        for i in 0..data.n_inspections() {
            let w = at_risk[i] as f64;
            if w == 0.0 {
                continue;
            }
            for (j, dqij) in grads.dq_cause[i].iter().enumerate() {
                let qij = probs.q_cause[i][j];
                if qij > 0.0 {
                    info.add_outer(dqij, w / qij);
                }
            }
            let keep = 1.0 - probs.q[i];
            if keep > 0.0 {
                info.add_outer(&grads.dq[i], w / keep);
            }
        }
        info.inverse()
    };
    match inner() {
        Ok(cov) => {
            let dim = cov.order();
            let se: Vec<f64> = cov.diagonal().iter().map(|v| v.max(0.0).sqrt()).collect();
            let rows: Vec<Vec<f64>> = (0..dim)
                .map(|i| (0..dim).map(|j| cov.get(i, j)).collect())
                .collect();
            (Some(se), Some(rows))
        }
        Err(_) => (None, None),
    }
}

/// Reliability estimate at `t0` from a fit, with a delta-method standard
/// error when the fit's covariance is available.
pub fn estimate_reliability(fit: &FitResult, t0: f64) -> Result<(f64, Option<f64>)> {
    let estimate = fit.params.reliability(t0)?;
    let se = match &fit.covariance {
        Some(rows) => {
            let c = fit.params.grad_reliability(t0)?;
            let mut var = 0.0;
            for (i, row) in rows.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    var += c[i] * v * c[j];
                }
            }
            Some(var.max(0.0).sqrt())
        }
        None => None,
    };
    Ok((estimate, se))
}
