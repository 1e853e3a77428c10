//! Design and analysis of reliability acceptance sampling plans for life tests
//! under progressive Type-I interval censoring with competing failure causes.
//!
//! A batch of `n` units goes on test with inspections scheduled at
//! `L_1 < L_2 < ... < L_M`. At inspection `i` the failures since the previous
//! inspection are counted by cause (`d_i1, ..., d_iJ`) and a fixed proportion
//! `p_i` of the surviving units is withdrawn; the test ends at `L_M` or when no
//! units remain. Failure times follow a Weibull competing-cause model whose
//! causes may be dependent through a shared gamma frailty (`nu > 0`); `nu = 0`
//! recovers the classical independent-causes model.
//!
//! The crate covers the full workflow:
//!
//! * [`model`] — the frailty-Weibull lifetime model: survivor functions,
//!   cause-specific sub-distributions, per-interval failure probabilities and
//!   their analytic parameter gradients.
//! * [`scheme`] — inspection schedules, withdrawal plans, expected count /
//!   duration / cost bookkeeping.
//! * [`fisher`] — expected (Fisher) information of the interval-censored
//!   experiment and the asymptotic variance of the reliability estimate.
//! * [`inference`] — maximum-likelihood fitting of observed interval count
//!   data, standard errors, information criteria, reliability estimation.
//! * [`plans`] — sample-size / acceptance-threshold computation meeting
//!   producer and consumer risk targets, operating-characteristic curves.
//! * [`design`] — variance-optimal choice of the inspection spacing, and
//!   cost-constrained choice of schedule length and spacing under a budget.
//! * [`simulate`] — reproducible Monte Carlo simulation of life tests and
//!   plan evaluation (empirical risks, estimator quality).
//!
//! Numbers follow these conventions throughout: inspection times are in the
//! same (arbitrary) time unit as the Weibull scales `eta`; probabilities are
//! plain fractions in `[0, 1]`; all parameter vectors are ordered
//! `(eta_1, ..., eta_J, gamma..., [nu])` — the frailty component is present
//! exactly when the model is dependent (`nu > 0`).

pub mod design;
pub mod error;
pub mod fisher;
pub mod inference;
pub mod linalg;
pub mod model;
mod optim;
pub mod plans;
pub mod scheme;
pub mod simulate;
pub mod special;

pub use design::{
    design_budget, design_unconstrained, equispaced_variance, monotonicity_report, optimize_h,
    BudgetDesign, DesignResult, HOptimum, MonotonicityReport,
};
pub use error::{Error, Result};
pub use fisher::{asymptotic_covariance, fisher_information, std_variance};
pub use inference::{
    estimate_reliability, fit_mle, log_likelihood, score, FitResult, FitVariant, ObservedData,
};
pub use model::{GradIntervalProbs, IntervalProbs, ModelParams, Shape};
pub use plans::{
    acceptance_probability, decide, derive_hypotheses, design_plan, oc_curve, Decision, OcPoint,
    PlanResult, RiskSpec,
};
pub use scheme::{
    expected_counts, termination_distribution, total_cost, CostParams, ExpectedCounts, PicScheme,
    Termination,
};
pub use simulate::{mc_evaluate, simulate_dataset, McSummary};
