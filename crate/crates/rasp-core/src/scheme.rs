//! Inspection schedules with progressive withdrawal, and their bookkeeping.
//!
//! A progressively interval-censored life test inspects at times
//! `L_1 < … < L_M`. At inspection `i` the failures since `L_{i-1}` are
//! recorded by cause and withdrawn; a proportion `p_i` of the remaining
//! survivors is also withdrawn (`floor(p_i * survivors)` units in a real
//! test). The final inspection withdraws everything: `p_M = 1`.
//!
//! Expected-count formulas here are *floor-free*: with `q_i` the conditional
//! per-interval failure probability,
//!
//! ```text
//! E[N_i]  = n * prod_{l<i} (1 - q_l)(1 - p_l)        units entering interval i
//! E[D_ij] = E[N_i] q_ij                              cause-j failures in i
//! E[R_i]  = E[N_i] (1 - q_i) p_i                     withdrawals at L_i
//! ```
//!
//! The rounding bias of the floor rule is O(1) per inspection and is covered
//! by simulation-based tests, not by these formulas.
//!
//! A test can end before `L_M` if every unit fails or is withdrawn first. The
//! per-unit probability of being gone by `L_m` is `sum_{l<=m} c_l a_l` with
//! `a_l = q_l + (1 - q_l) p_l` (fail or be withdrawn at inspection `l`) and
//! `c_l = prod_{l'<l} (1 - q_{l'})(1 - p_{l'})` (still around to try); raising
//! it to the `n`-th power gives `P_m = P(test over by L_m)`, hence the
//! termination-time distribution, the expected test duration
//! `E[tau] = sum_m L_m (P_m - P_{m-1})`, and the expected number of
//! inspections actually performed.
//!
//! Total testing cost combines unit, duration, failure, and inspection
//! prices: `TC = n c_sample + c_time E[tau] + c_failure E[D] + c_inspection E[I]`.

use crate::error::{Error, Result};
use crate::model::ModelParams;
use serde::{Deserialize, Serialize};

// ---------------------------------------------------------------------------
// Scheme
// ---------------------------------------------------------------------------

/// A validated inspection schedule with withdrawal proportions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PicSchemeJson", into = "PicSchemeJson")]
pub struct PicScheme {
    times: Vec<f64>,
    withdrawals: Vec<f64>,
}

/// Wire format. The schedule is either equispaced (`{"M": 4, "h": 0.2}`) or
/// explicit (`{"L": [0.2, 0.4, …]}`); withdrawals are either a common
/// proportion for every non-final inspection (`{"p": 0.3}`) or explicit
/// per-inspection values whose final entry must be 1 (`{"p_list": […]}`).
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PicSchemeJson {
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    h: Option<f64>,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    l: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p_list: Option<Vec<f64>>,
}

impl TryFrom<PicSchemeJson> for PicScheme {
    type Error = Error;
    fn try_from(raw: PicSchemeJson) -> Result<Self> {
        let times = match (raw.m, raw.h, raw.l) {
            (Some(m), Some(h), None) => {
                if !(h.is_finite() && h > 0.0) {
                    return Err(Error::Invalid(format!(
                        "h: must be a positive finite number, got {h}"
                    )));
                }
                (1..=m).map(|i| i as f64 * h).collect()
            }
            (None, None, Some(l)) => l,
            _ => {
                return Err(Error::Invalid(
                    "schedule: provide either M and h (equispaced) or L (explicit), \
                     not a mixture"
                        .into(),
                ))
            }
        };
        match (raw.p, raw.p_list) {
            (Some(p), None) => PicScheme::from_times(times, p),
            (None, Some(list)) => PicScheme::from_times_with_list(times, list),
            _ => Err(Error::Invalid(
                "withdrawals: provide either a common p or an explicit p_list".into(),
            )),
        }
    }
}

impl From<PicScheme> for PicSchemeJson {
    fn from(s: PicScheme) -> Self {
        PicSchemeJson {
            m: None,
            h: None,
            l: Some(s.times),
            p: None,
            p_list: Some(s.withdrawals),
        }
    }
}

impl PicScheme {
    /// Equispaced schedule `L_i = i h` with a common withdrawal proportion
    /// `p` at every non-final inspection.
    pub fn equispaced(m: usize, h: f64, p: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::Invalid(format!(
                "h: must be a positive finite number, got {h}"
            )));
        }
        Self::from_times((1..=m).map(|i| i as f64 * h).collect(), p)
    }

    /// Explicit schedule with a common withdrawal proportion.
    pub fn from_times(times: Vec<f64>, p: f64) -> Result<Self> {
        if !(p.is_finite() && (0.0..1.0).contains(&p)) {
            return Err(Error::Invalid(format!(
                "p: common withdrawal proportion must lie in [0, 1), got {p}"
            )));
        }
        let m = times.len();
        let mut withdrawals = vec![p; m.saturating_sub(1)];
        withdrawals.push(1.0);
        Self::from_times_with_list(times, withdrawals)
    }

    /// Explicit schedule and per-inspection withdrawal proportions. The list
    /// must have one entry per inspection, each in `[0, 1)` except the final
    /// entry, which must be exactly 1 (everything is withdrawn at the end).
    pub fn from_times_with_list(times: Vec<f64>, withdrawals: Vec<f64>) -> Result<Self> {
        let mut bad: Vec<String> = Vec::new();
        if times.is_empty() {
            bad.push("L: at least one inspection is required".into());
        }
        let mut prev = 0.0;
        for (i, t) in times.iter().enumerate() {
            if !(t.is_finite() && *t > prev) {
                bad.push(format!(
                    "L[{i}]: inspection times must be finite and strictly increasing \
                     from 0; got {t} after {prev}"
                ));
                prev = if t.is_finite() { t.max(prev) } else { prev };
            } else {
                prev = *t;
            }
        }
        if withdrawals.len() != times.len() {
            bad.push(format!(
                "p_list: expected {} entries to match the schedule, got {}",
                times.len(),
                withdrawals.len()
            ));
        } else {
            let m = withdrawals.len();
            for (i, p) in withdrawals.iter().enumerate() {
                if i + 1 == m {
                    if *p != 1.0 {
                        bad.push(format!(
                            "p_list[{i}]: the final inspection withdraws every survivor; \
                             expected exactly 1, got {p}"
                        ));
                    }
                } else if !(p.is_finite() && (0.0..1.0).contains(p)) {
                    bad.push(format!(
                        "p_list[{i}]: withdrawal proportions before the final inspection \
                         must lie in [0, 1), got {p}"
                    ));
                }
            }
        }
        if bad.is_empty() {
            Ok(PicScheme { times, withdrawals })
        } else {
            Err(Error::invalid_report(&bad))
        }
    }

    /// Parse from the JSON wire format (see [`PicSchemeJson`] docs).
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("scheme: {e}")))
    }

    /// Number of inspections `M`.
    pub fn n_inspections(&self) -> usize {
        self.times.len()
    }

    /// Inspection times `L_1 < … < L_M`.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Withdrawal proportions `p_1, …, p_M` (`p_M = 1`).
    pub fn withdrawals(&self) -> &[f64] {
        &self.withdrawals
    }

    /// The final inspection time `L_M` (maximal test duration).
    pub fn horizon(&self) -> f64 {
        *self.times.last().expect("schedule is never empty")
    }
}

// ---------------------------------------------------------------------------
// Costs
// ---------------------------------------------------------------------------

/// Unit prices of a life test, and an optional total budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CostParamsJson", into = "CostParamsJson")]
pub struct CostParams {
    /// Price per unit placed on test.
    pub c_sample: f64,
    /// Price per unit of test duration.
    pub c_time: f64,
    /// Price per observed failure.
    pub c_failure: f64,
    /// Price per inspection performed.
    pub c_inspection: f64,
    /// Total-cost ceiling for budget-constrained design, if any.
    pub budget: Option<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CostParamsJson {
    c_sample: f64,
    c_time: f64,
    c_failure: f64,
    c_inspection: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    budget: Option<f64>,
}

impl TryFrom<CostParamsJson> for CostParams {
    type Error = Error;
    fn try_from(raw: CostParamsJson) -> Result<Self> {
        let mut bad: Vec<String> = Vec::new();
        for (name, v) in [
            ("c_sample", raw.c_sample),
            ("c_time", raw.c_time),
            ("c_failure", raw.c_failure),
            ("c_inspection", raw.c_inspection),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                bad.push(format!("{name}: must be a finite number >= 0, got {v}"));
            }
        }
        if let Some(b) = raw.budget {
            if !(b.is_finite() && b > 0.0) {
                bad.push(format!("budget: must be a positive finite number, got {b}"));
            }
        }
        if bad.is_empty() {
            Ok(CostParams {
                c_sample: raw.c_sample,
                c_time: raw.c_time,
                c_failure: raw.c_failure,
                c_inspection: raw.c_inspection,
                budget: raw.budget,
            })
        } else {
            Err(Error::invalid_report(&bad))
        }
    }
}

impl From<CostParams> for CostParamsJson {
    fn from(c: CostParams) -> Self {
        CostParamsJson {
            c_sample: c.c_sample,
            c_time: c.c_time,
            c_failure: c.c_failure,
            c_inspection: c.c_inspection,
            budget: c.budget,
        }
    }
}

impl CostParams {
    /// Build validated cost parameters.
    pub fn new(
        c_sample: f64,
        c_time: f64,
        c_failure: f64,
        c_inspection: f64,
        budget: Option<f64>,
    ) -> Result<Self> {
        CostParamsJson { c_sample, c_time, c_failure, c_inspection, budget }.try_into()
    }

    /// Parse from JSON.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("costs: {e}")))
    }

    /// Cost per unit placed on test.
    pub fn c_sample(&self) -> f64 {
        self.c_sample
    }

    /// Cost per unit of test duration.
    pub fn c_time(&self) -> f64 {
        self.c_time
    }

    /// Cost per observed failure.
    pub fn c_failure(&self) -> f64 {
        self.c_failure
    }

    /// Cost per inspection performed.
    pub fn c_inspection(&self) -> f64 {
        self.c_inspection
    }

    /// Total-cost ceiling, when one applies.
    pub fn budget(&self) -> Option<f64> {
        self.budget
    }
}

// ---------------------------------------------------------------------------
// Expected counts
// ---------------------------------------------------------------------------

/// Floor-free expected counts of a progressively censored life test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectedCounts {
    /// `e_n[i]`: expected units entering interval `i`.
    pub e_n: Vec<f64>,
    /// `e_d[i][j]`: expected cause-`j` failures in interval `i`.
    pub e_d: Vec<Vec<f64>>,
    /// `e_dplus[i]`: expected total failures in interval `i`.
    pub e_dplus: Vec<f64>,
    /// `e_r[i]`: expected withdrawals at inspection `i`.
    pub e_r: Vec<f64>,
    /// Expected total number of failures over the whole test.
    pub e_d_total: f64,
}

/// Termination-time distribution of the test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Termination {
    /// `term_prob[m]`: probability the test ends exactly at `L_{m+1}`.
    pub term_prob: Vec<f64>,
    /// Expected test duration `E[tau]`.
    pub e_tau: f64,
    /// Expected number of inspections performed.
    pub e_inspections: f64,
}

fn check_units(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Invalid("n: at least one test unit is required".into()));
    }
    Ok(n as f64)
}

/// Expected counts when `n` units start the test. See the module docs for the
/// formulas; the floor in the realized withdrawal rule is not applied.
pub fn expected_counts(
    n: u64,
    model: &ModelParams,
    scheme: &PicScheme,
) -> Result<ExpectedCounts> {
    expected_counts_real(check_units(n)?, model, scheme)
}

/// Continuous-`n` extension used internally by the design search.
pub(crate) fn expected_counts_real(
    n: f64,
    model: &ModelParams,
    scheme: &PicScheme,
) -> Result<ExpectedCounts> {
    let probs = model.interval_probs(scheme.times())?;
    let m = scheme.n_inspections();
    let mut e_n = Vec::with_capacity(m);
    let mut e_d = Vec::with_capacity(m);
    let mut e_dplus = Vec::with_capacity(m);
    let mut e_r = Vec::with_capacity(m);
    let mut at_risk = n;
    let mut e_d_total = 0.0;
    for i in 0..m {
        let q = probs.q[i];
        let p = scheme.withdrawals()[i];
        e_n.push(at_risk);
        e_d.push(probs.q_cause[i].iter().map(|qij| at_risk * qij).collect());
        e_dplus.push(at_risk * q);
        e_r.push(at_risk * (1.0 - q) * p);
        e_d_total += at_risk * q;
        at_risk *= (1.0 - q) * (1.0 - p);
    }
    Ok(ExpectedCounts { e_n, e_d, e_dplus, e_r, e_d_total })
}

/// Distribution of the inspection at which the test ends (the first with no
/// unit left), with the resulting expected duration and inspection count.
pub fn termination_distribution(
    n: u64,
    model: &ModelParams,
    scheme: &PicScheme,
) -> Result<Termination> {
    termination_real(check_units(n)?, model, scheme)
}

pub(crate) fn termination_real(
    n: f64,
    model: &ModelParams,
    scheme: &PicScheme,
) -> Result<Termination> {
    let probs = model.interval_probs(scheme.times())?;
    let m = scheme.n_inspections();
    let mut gone_by = Vec::with_capacity(m); // P(single unit gone by L_m)
    let mut acc = 0.0;
    let mut still_in = 1.0; // prod_{l'<l} (1-q)(1-p)
    for i in 0..m {
        let q = probs.q[i];
        let p = scheme.withdrawals()[i];
        acc += still_in * (q + (1.0 - q) * p);
        gone_by.push(acc);
        still_in *= (1.0 - q) * (1.0 - p);
    }

    let mut term_prob = Vec::with_capacity(m);
    let mut prev = 0.0;
    for (i, g) in gone_by.iter().enumerate() {
        // All n units gone by L_m; the final inspection always ends the test.
        let p_m = if i + 1 == m { 1.0 } else { g.powf(n) };
        term_prob.push((p_m - prev).max(0.0));
        prev = p_m;
    }

    let e_tau = scheme
        .times()
        .iter()
        .zip(&term_prob)
        .map(|(l, pr)| l * pr)
        .sum();
    let e_inspections = term_prob
        .iter()
        .enumerate()
        .map(|(i, pr)| (i + 1) as f64 * pr)
        .sum();
    Ok(Termination { term_prob, e_tau, e_inspections })
}

/// Expected total cost of running the test:
/// `n c_sample + c_time E[tau] + c_failure E[D] + c_inspection E[I]`.
pub fn total_cost(
    n: u64,
    model: &ModelParams,
    scheme: &PicScheme,
    costs: &CostParams,
) -> Result<f64> {
    total_cost_real(check_units(n)?, model, scheme, costs)
}

pub(crate) fn total_cost_real(
    n: f64,
    model: &ModelParams,
    scheme: &PicScheme,
    costs: &CostParams,
) -> Result<f64> {
    let counts = expected_counts_real(n, model, scheme)?;
    let term = termination_real(n, model, scheme)?;
    Ok(n * costs.c_sample
        + costs.c_time * term.e_tau
        + costs.c_failure * counts.e_d_total
        + costs.c_inspection * term.e_inspections)
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn battery(nu: f64) -> ModelParams {
        ModelParams::new_equal(vec![1.291, 1.339], 1.644, nu).unwrap()
    }

    fn costs() -> CostParams {
        CostParams::new(0.1, 5.0, 0.025, 10.0, None).unwrap()
    }

    // --- construction and validation ----------------------------------------

    #[test]
    fn equispaced_schedule_and_withdrawals() {
        let s = PicScheme::equispaced(4, 0.2, 0.0).unwrap();
        assert_eq!(s.n_inspections(), 4);
        assert_abs_diff_eq!(s.horizon(), 0.8, epsilon = 1e-15);
        assert_eq!(s.withdrawals(), &[0.0, 0.0, 0.0, 1.0]);

        let s = PicScheme::equispaced(3, 0.5, 0.25).unwrap();
        assert_eq!(s.withdrawals(), &[0.25, 0.25, 1.0]);
    }

    #[test]
    fn construction_rejects_bad_inputs() {
        assert!(PicScheme::equispaced(4, 0.0, 0.0).is_err());
        assert!(PicScheme::equispaced(0, 0.2, 0.0).is_err());
        assert!(PicScheme::equispaced(4, 0.2, 1.0).is_err()); // common p must be < 1
        assert!(PicScheme::from_times(vec![0.2, 0.2], 0.0).is_err());
        assert!(PicScheme::from_times_with_list(vec![0.2, 0.4], vec![0.3, 0.5]).is_err());
        let err =
            PicScheme::from_times_with_list(vec![0.2, 0.4], vec![1.2, 1.0]).unwrap_err();
        assert!(err.to_string().contains("p_list[0]"), "{err}");
    }

    #[test]
    fn json_forms_round_trip() {
        let a = PicScheme::from_json(r#"{"M":4,"h":0.2,"p":0}"#).unwrap();
        let b = PicScheme::from_json(r#"{"L":[0.2,0.4,0.6,0.8],"p_list":[0,0,0,1]}"#).unwrap();
        for (x, y) in a.times().iter().zip(b.times()) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-15);
        }
        assert_eq!(a.withdrawals(), b.withdrawals());

        let text = serde_json::to_string(&a).unwrap();
        let back: PicScheme = serde_json::from_str(&text).unwrap();
        assert_eq!(a, back);

        assert!(PicScheme::from_json(r#"{"M":4,"p":0}"#).is_err());
        assert!(PicScheme::from_json(r#"{"M":4,"h":0.2,"L":[0.2],"p":0}"#).is_err());
        assert!(PicScheme::from_json(r#"{"M":4,"h":0.2}"#).is_err());
        assert!(PicScheme::from_json(r#"{"M":4,"h":0.2,"p":0,"x":1}"#).is_err());
    }

    #[test]
    fn cost_params_validation() {
        assert!(CostParams::new(0.1, 5.0, 0.025, 10.0, Some(55.0)).is_ok());
        let err = CostParams::new(-0.1, 5.0, 0.025, f64::NAN, Some(0.0)).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("c_sample"), "{msg}");
        assert!(msg.contains("c_inspection"), "{msg}");
        assert!(msg.contains("budget"), "{msg}");
    }

    // --- expected counts ----------------------------------------------------

    #[test]
    fn expected_counts_reference_values() {
        let s = PicScheme::equispaced(4, 0.2, 0.0).unwrap();
        let ec = expected_counts(32, &battery(0.0), &s).unwrap();
        let expect_n = [
            32.0,
            29.230_720_399_980_303,
            24.115_293_187_275_554,
            18.444_887_216_452_873,
        ];
        for (got, want) in ec.e_n.iter().zip(expect_n) {
            assert_relative_eq!(*got, want, max_relative = 1e-13);
        }
        assert_relative_eq!(ec.e_d_total, 18.781_498_315_729_934, max_relative = 1e-13);
        // No progressive withdrawals before the final inspection at p = 0.
        for r in &ec.e_r[..3] {
            assert_abs_diff_eq!(*r, 0.0, epsilon = 1e-15);
        }
        // Final withdrawal takes every survivor.
        let survivors = ec.e_n[3] - ec.e_dplus[3];
        assert_relative_eq!(ec.e_r[3], survivors, max_relative = 1e-13);
    }

    #[test]
    fn expected_counts_internal_identities() {
        let s = PicScheme::equispaced(6, 0.3, 0.3).unwrap();
        let ec = expected_counts(61, &battery(0.5), &s).unwrap();
        let expect_n = [
            61.0,
            36.062_508_040_343_708,
            18.373_100_943_045_28,
            8.862_474_794_701_958_2,
            4.229_176_286_175_412_1,
            2.038_718_202_272_505_2,
        ];
        for (got, want) in ec.e_n.iter().zip(expect_n) {
            assert_relative_eq!(*got, want, max_relative = 1e-13);
        }
        assert_relative_eq!(ec.e_d_total, 29.755_126_123_462_158, max_relative = 1e-13);
        // Counting identity: entrants - failures - withdrawals = next entrants.
        for i in 0..5 {
            assert_relative_eq!(
                ec.e_n[i] - ec.e_dplus[i] - ec.e_r[i],
                ec.e_n[i + 1],
                max_relative = 1e-12
            );
        }
        // Cause-level counts add up to interval totals.
        for i in 0..6 {
            assert_relative_eq!(
                ec.e_d[i].iter().sum::<f64>(),
                ec.e_dplus[i],
                max_relative = 1e-12
            );
        }
        assert_relative_eq!(
            ec.e_dplus.iter().sum::<f64>(),
            ec.e_d_total,
            max_relative = 1e-13
        );
    }

    // --- termination ----------------------------------------------------------

    #[test]
    fn termination_reference_values() {
        let s = PicScheme::equispaced(4, 0.2, 0.0).unwrap();
        let t = termination_distribution(32, &battery(0.0), &s).unwrap();
        assert_relative_eq!(t.e_tau, 0.799_999_999_999_769_12, max_relative = 1e-12);
        assert_relative_eq!(t.e_inspections, 3.999_999_999_998_845_4, max_relative = 1e-12);

        let s6 = PicScheme::equispaced(6, 0.3, 0.3).unwrap();
        let t6 = termination_distribution(61, &battery(0.5), &s6).unwrap();
        let expect = [
            2.008_626_636_928_618_3e-24,
            3.203_230_842_226_821_2e-10,
            6.935_108_176_132_162_5e-5,
            0.012_419_341_858_940_882,
            0.113_247_979_120_066_86,
            0.874_263_327_618_907_79,
        ];
        for (got, want) in t6.term_prob.iter().zip(expect) {
            assert_relative_eq!(*got, want, max_relative = 1e-10, epsilon = 1e-20);
        }
        assert_relative_eq!(t6.e_tau, 1.758_511_584_790_642_3, max_relative = 1e-12);
        assert_relative_eq!(t6.e_inspections, 5.861_705_282_635_474_7, max_relative = 1e-12);
    }

    #[test]
    fn termination_probabilities_form_a_distribution() {
        for (nu, m, h, p, n) in
            [(0.0, 4, 0.2, 0.0, 32), (0.5, 6, 0.3, 0.3, 61), (1.0, 7, 0.283, 0.2, 15)]
        {
            let s = PicScheme::equispaced(m, h, p).unwrap();
            let t = termination_distribution(n, &battery(nu), &s).unwrap();
            assert!(t.term_prob.iter().all(|v| *v >= 0.0));
            assert_abs_diff_eq!(t.term_prob.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
            assert!(t.e_tau <= s.horizon() + 1e-12);
            assert!(t.e_inspections <= m as f64 + 1e-12);
        }
    }

    #[test]
    fn small_tests_end_early() {
        // With aggressive withdrawals and few units, the test usually ends
        // well before the final inspection.
        let s = PicScheme::equispaced(7, 0.283, 0.2).unwrap();
        let t = termination_distribution(15, &battery(0.0), &s).unwrap();
        assert_relative_eq!(t.e_tau, 1.493_450_745_449_505_8, max_relative = 1e-12);
        assert_relative_eq!(t.e_inspections, 5.277_211_114_662_565_1, max_relative = 1e-12);
        let ec = expected_counts(15, &battery(0.0), &s).unwrap();
        assert_relative_eq!(ec.e_d_total, 9.690_703_683_134_358_9, max_relative = 1e-12);
    }

    // --- cost ------------------------------------------------------------------

    #[test]
    fn total_cost_reference_values() {
        let s4 = PicScheme::equispaced(4, 0.2, 0.0).unwrap();
        assert_relative_eq!(
            total_cost(32, &battery(0.0), &s4, &costs()).unwrap(),
            47.669_537_457_880_551,
            max_relative = 1e-12
        );
        let s6 = PicScheme::equispaced(6, 0.3, 0.3).unwrap();
        assert_relative_eq!(
            total_cost(61, &battery(0.5), &s6, &costs()).unwrap(),
            74.253_488_903_394_512,
            max_relative = 1e-12
        );
    }

    #[test]
    fn zero_units_rejected() {
        let s = PicScheme::equispaced(4, 0.2, 0.0).unwrap();
        assert!(expected_counts(0, &battery(0.0), &s).is_err());
        assert!(termination_distribution(0, &battery(0.0), &s).is_err());
    }
}
