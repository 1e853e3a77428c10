//! Choosing the inspection schedule: spacing optimization and budget search.
//!
//! For an equispaced schedule `L_i = i h` with common withdrawal proportion
//! `p`, the design criterion is the per-unit asymptotic variance of the
//! reliability estimate at the demonstration time under the acceptable model,
//!
//! ```text
//! phi(h) = S^2(theta_0; M, h, p, t0),
//! ```
//!
//! minimized over the spacing `h` ([`optimize_h`]). Smaller `phi` means fewer
//! units for the same discriminating power, so the unconstrained design
//! ([`design_unconstrained`]) fixes `M` and `p`, tunes `h`, and sizes the
//! plan at the optimum.
//!
//! [`design_budget`] additionally respects a ceiling on the expected total
//! cost. For each admissible inspection count `M` it takes the unconstrained
//! optimum when affordable, and otherwise scans the feasible set
//! `{h : TC(h) <= budget}` (total cost computed at the fractional sample
//! size) for the smallest criterion value; the best `M` wins, with ties
//! going to fewer inspections. Reported expectations are evaluated at the
//! adopted integer sample size.
//!
//! [`monotonicity_report`] verifies the two structural laws the search
//! relies on: at fixed spacing, the criterion never increases when an
//! inspection is appended, and never decreases when the withdrawal
//! proportion grows.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fisher::std_variance;
use crate::model::ModelParams;
use crate::optim::brent_min;
use crate::plans::{derive_hypotheses, design_plan, PlanResult, RiskSpec};
use crate::scheme::{
    expected_counts, termination_distribution, total_cost, total_cost_real, CostParams,
    ExpectedCounts, PicScheme, Termination,
};

/// Spacing values this close to a bracket edge (relative to its width) set
/// the boundary flag.
const BOUNDARY_MARGIN: f64 = 1e-3;
/// Candidate designs must beat the incumbent by more than this to displace
/// it, so criterion ties resolve toward fewer inspections.
const TIE_TOL: f64 = 1e-12;

/// Per-unit asymptotic variance of the reliability estimate at `t0` for the
/// equispaced design `(m, h, p)` under `model` — the spacing criterion.
pub fn equispaced_variance(
    model: &ModelParams,
    m: usize,
    h: f64,
    p: f64,
    t0: f64,
) -> Result<f64> {
    let scheme = PicScheme::equispaced(m, h, p)?;
    std_variance(model, &scheme, t0)
}

/// Result of minimizing the spacing criterion for fixed `m` and `p`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HOptimum {
    /// Optimal spacing.
    pub h_star: f64,
    /// Criterion value at the optimum.
    pub variance: f64,
    /// True when the optimum sits on the search bracket's edge, i.e. the
    /// reported spacing is constrained by the bracket rather than stationary.
    pub at_boundary: bool,
}

fn resolve_bracket(t0: f64, bracket: Option<(f64, f64)>) -> Result<(f64, f64)> {
    let (lo, hi) = bracket.unwrap_or((0.02 * t0, 2.0 * t0));
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
        return Err(Error::Invalid(format!(
            "bracket: the spacing search interval must satisfy 0 < lo < hi, got \
             ({lo}, {hi})"
        )));
    }
    Ok((lo, hi))
}

/// Minimizes the spacing criterion over `h` in `bracket` (default
/// `(0.02 t0, 2 t0)`) for the equispaced design with `m` inspections and
/// withdrawal proportion `p`.
pub fn optimize_h(
    model: &ModelParams,
    m: usize,
    p: f64,
    t0: f64,
    bracket: Option<(f64, f64)>,
) -> Result<HOptimum> {
    let (lo, hi) = resolve_bracket(t0, bracket)?;
    // Surface schedule/identifiability problems eagerly rather than as an
    // inscrutable all-infinite search.
    equispaced_variance(model, m, lo, p, t0)?;

    let crit = |h: f64| equispaced_variance(model, m, h, p, t0).unwrap_or(f64::INFINITY);
    let (h_star, variance) = brent_min(crit, lo, hi, 1e-6, 200);
    if !variance.is_finite() {
        return Err(Error::Numerical(format!(
            "the spacing criterion has no finite value inside the bracket ({lo}, {hi})"
        )));
    }
    let margin = BOUNDARY_MARGIN * (hi - lo);
    Ok(HOptimum {
        h_star,
        variance,
        at_boundary: h_star - lo < margin || hi - h_star < margin,
    })
}

/// An `h`-optimized acceptance plan for fixed `m` and `p`.
#[derive(Debug, Clone, Serialize)]
pub struct DesignResult {
    /// Number of inspections.
    pub m: usize,
    /// Common withdrawal proportion.
    pub p: f64,
    /// Optimal spacing.
    pub h_star: f64,
    /// Criterion value at the optimum.
    pub variance: f64,
    /// Whether the spacing search hit its bracket edge.
    pub at_boundary: bool,
    /// The sampling plan sized at the optimal spacing.
    pub plan: PlanResult,
}

/// Designs the plan with criterion-optimal spacing for `m` inspections,
/// withdrawal proportion `p`, risks `risk`, and deterioration factors `d`.
pub fn design_unconstrained(
    model0: &ModelParams,
    m: usize,
    p: f64,
    risk: &RiskSpec,
    d: &[f64],
    bracket: Option<(f64, f64)>,
) -> Result<DesignResult> {
    let model1 = derive_hypotheses(model0, d)?;
    let opt = optimize_h(model0, m, p, risk.t0(), bracket)?;
    let scheme = PicScheme::equispaced(m, opt.h_star, p)?;
    let plan = design_plan(model0, &model1, &scheme, risk)?;
    Ok(DesignResult {
        m,
        p,
        h_star: opt.h_star,
        variance: opt.variance,
        at_boundary: opt.at_boundary,
        plan,
    })
}

/// A budget-constrained design.
#[derive(Debug, Clone, Serialize)]
pub struct BudgetDesign {
    /// Chosen number of inspections.
    pub m: usize,
    /// Common withdrawal proportion.
    pub p: f64,
    /// Chosen spacing.
    pub h: f64,
    /// Criterion value at the chosen design.
    pub variance: f64,
    /// Whether the budget excluded this `m`'s unconstrained optimum.
    pub constraint_active: bool,
    /// The sampling plan at the chosen design.
    pub plan: PlanResult,
    /// Expected counts at the adopted sample size.
    pub expected: ExpectedCounts,
    /// Termination behavior at the adopted sample size.
    pub termination: Termination,
    /// Expected total cost at the adopted sample size.
    pub total_cost: f64,
    /// The ceiling the design respects.
    pub budget: f64,
}

/// Minimizes the spacing criterion subject to the expected total cost of the
/// resulting plan staying within `costs.budget()`, over inspection counts
/// from the model's parameter dimension up to `m_max`.
pub fn design_budget(
    model0: &ModelParams,
    costs: &CostParams,
    risk: &RiskSpec,
    d: &[f64],
    p: f64,
    m_max: usize,
    bracket: Option<(f64, f64)>,
) -> Result<BudgetDesign> {
    let budget = costs.budget().ok_or_else(|| {
        Error::Invalid("budget: cost parameters must include a total-cost ceiling".into())
    })?;
    let dim = model0.dim();
    if m_max < dim {
        return Err(Error::Invalid(format!(
            "m_max: at most {m_max} inspections cannot identify {dim} parameters"
        )));
    }
    let model1 = derive_hypotheses(model0, d)?;
    let (lo, hi) = resolve_bracket(risk.t0(), bracket)?;

    struct Candidate {
        m: usize,
        h: f64,
        variance: f64,
        constrained: bool,
    }
    let mut best: Option<Candidate> = None;
    let mut cheapest = f64::INFINITY;

    for m in dim..=m_max {
        let cost_at = |h: f64| -> Option<f64> {
            let scheme = PicScheme::equispaced(m, h, p).ok()?;
            let plan = design_plan(model0, &model1, &scheme, risk).ok()?;
            total_cost_real(plan.n_real, model0, &scheme, costs).ok()
        };
        let crit_at =
            |h: f64| equispaced_variance(model0, m, h, p, risk.t0()).unwrap_or(f64::INFINITY);

        let opt = optimize_h(model0, m, p, risk.t0(), Some((lo, hi)))?;
        let mut h_use = opt.h_star;
        let mut constrained = false;
        let affordable = match cost_at(h_use) {
            Some(tc) => {
                cheapest = cheapest.min(tc);
                tc <= budget
            }
            None => false,
        };
        if !affordable {
            constrained = true;
            // Scan the bracket for the affordable spacing with the smallest
            // criterion, then refine around it.
            let mut scan = |a: f64, b: f64, points: usize| -> Option<(f64, f64)> {
                let mut found: Option<(f64, f64)> = None;
                for k in 0..points {
                    let h = a + (b - a) * k as f64 / (points - 1) as f64;
                    if let Some(tc) = cost_at(h) {
                        cheapest = cheapest.min(tc);
                        if tc <= budget {
                            let v = crit_at(h);
                            if v.is_finite()
                                && found.as_ref().is_none_or(|(fv, _)| v < *fv)
                            {
                                found = Some((v, h));
                            }
                        }
                    }
                }
                found
            };
            let Some((_, h_coarse)) = scan(lo, hi, 400) else {
                continue;
            };
            let (_, h_fine) = scan(
                (h_coarse - 0.005).max(lo),
                (h_coarse + 0.005).min(hi),
                200,
            )
            .expect("the coarse point itself is affordable");
            h_use = h_fine;
        }
        let variance = crit_at(h_use);
        if !variance.is_finite() {
            continue;
        }
        if best.as_ref().is_none_or(|b| variance < b.variance - TIE_TOL) {
            best = Some(Candidate { m, h: h_use, variance, constrained });
        }
    }

    let Some(chosen) = best else {
        return Err(Error::Infeasible(format!(
            "no schedule with up to {m_max} inspections fits the budget {budget}; the \
             cheapest candidate design costs {cheapest:.3}"
        )));
    };

    let scheme = PicScheme::equispaced(chosen.m, chosen.h, p)?;
    let plan = design_plan(model0, &model1, &scheme, risk)?;
    let expected = expected_counts(plan.n_star, model0, &scheme)?;
    let termination = termination_distribution(plan.n_star, model0, &scheme)?;
    let realized_cost = total_cost(plan.n_star, model0, &scheme, costs)?;
    Ok(BudgetDesign {
        m: chosen.m,
        p,
        h: chosen.h,
        variance: chosen.variance,
        constraint_active: chosen.constrained,
        plan,
        expected,
        termination,
        total_cost: realized_cost,
        budget,
    })
}

/// Outcome of sweeping the structural monotonicity checks.
#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityReport {
    /// Number of ordered pairs examined.
    pub checks: usize,
    /// Human-readable descriptions of any violations (empty on success).
    pub violations: Vec<String>,
}

/// Verifies, for the given spacing `h`, that the criterion is non-increasing
/// in the inspection count and non-decreasing in the withdrawal proportion
/// over the supplied ascending grids (slack `1e-12` for roundoff).
pub fn monotonicity_report(
    model: &ModelParams,
    t0: f64,
    h: f64,
    m_values: &[usize],
    p_values: &[f64],
) -> Result<MonotonicityReport> {
    const SLACK: f64 = 1e-12;
    if m_values.windows(2).any(|w| w[1] <= w[0]) || p_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Invalid(
            "monotonicity grids must be strictly ascending".into(),
        ));
    }
    let mut checks = 0;
    let mut violations = Vec::new();
    let value = |m: usize, p: f64| equispaced_variance(model, m, h, p, t0);

    for &p in p_values {
        for w in m_values.windows(2) {
            let lo_m = value(w[0], p)?;
            let hi_m = value(w[1], p)?;
            checks += 1;
            if hi_m > lo_m + SLACK {
                violations.push(format!(
                    "variance rose from {lo_m} to {hi_m} when inspections went {} -> {} \
                     at p={p}",
                    w[0], w[1]
                ));
            }
        }
    }
    for &m in m_values {
        for w in p_values.windows(2) {
            let lo_p = value(m, w[0])?;
            let hi_p = value(m, w[1])?;
            checks += 1;
            if hi_p < lo_p - SLACK {
                violations.push(format!(
                    "variance fell from {lo_p} to {hi_p} when withdrawals went {} -> {} \
                     at m={m}",
                    w[0], w[1]
                ));
            }
        }
    }
    Ok(MonotonicityReport { checks, violations })
}
