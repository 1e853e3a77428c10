//! Command-line front end for designing and evaluating reliability acceptance
//! sampling plans for progressively interval-censored life tests with
//! competing failure causes.
//!
//! Subcommands:
//!
//! * `plan`          — size a plan (n*, pi_c) for a fixed schedule.
//! * `design`        — optimize the inspection spacing, then size the plan.
//! * `design-budget` — jointly choose inspections and spacing under a budget.
//! * `fit`           — maximum-likelihood fit of observed interval counts.
//! * `simulate`      — draw one synthetic experiment as CSV.
//! * `mc-eval`       — Monte-Carlo evaluation of a plan (risks, accuracy).
//! * `oc`            — operating-characteristic curve as CSV.
//!
//! Results go to stdout (or `--out`) as JSON or CSV; a one-line human summary
//! and all diagnostics go to stderr. Exit codes: 0 success, 2 invalid input,
//! 3 infeasible request, 4 numerical failure.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use rasp_core::inference::{estimate_reliability, fit_mle, FitVariant, ObservedData};
use rasp_core::plans::{derive_hypotheses, design_plan, oc_curve, PlanResult, RiskSpec};
use rasp_core::scheme::{CostParams, PicScheme};
use rasp_core::simulate::{mc_evaluate, simulate_dataset};
use rasp_core::{
    design_budget, design_unconstrained, BudgetDesign, DesignResult, Error, ModelParams, Result,
};

// --- argument surface ---------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "rasp",
    version,
    about = "Reliability acceptance sampling plans for interval-censored life tests \
             with competing failure causes"
)]
struct Cli {
    /// Significant digits for numbers in the output.
    #[arg(long, global = true, default_value_t = 6)]
    precision: usize,

    /// Write the result to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for Monte-Carlo work (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Cmd,
}

/// Lifetime-model parameters: either one JSON blob or individual flags.
#[derive(Args)]
#[group(id = "modelspec", required = true, multiple = true)]
struct ModelArgs {
    /// Model as JSON, e.g. '{"eta":[1.291,1.339],"gamma":1.644,"nu":0}'
    /// (per-cause shapes via "gammas":[...]; omitted "nu" means independent).
    #[arg(long, conflicts_with_all = ["eta0", "gamma", "nu"])]
    model: Option<String>,

    /// Acceptable-quality Weibull scales, comma-separated (one per cause).
    #[arg(long, value_delimiter = ',')]
    eta0: Vec<f64>,

    /// Weibull shape: one common value, or one per cause (comma-separated).
    #[arg(long, value_delimiter = ',')]
    gamma: Vec<f64>,

    /// Frailty variance inducing dependence (default 0 = independent causes).
    #[arg(long)]
    nu: Option<f64>,
}

impl ModelArgs {
    fn build(&self) -> Result<ModelParams> {
        if let Some(text) = &self.model {
            return ModelParams::from_json(text);
        }
        if self.eta0.is_empty() {
            return Err(Error::Invalid(
                "model: provide --model JSON or --eta0 together with --gamma".into(),
            ));
        }
        let nu = self.nu.unwrap_or(0.0);
        match self.gamma.len() {
            0 => Err(Error::Invalid("gamma: a shape parameter is required".into())),
            1 => ModelParams::new_equal(self.eta0.clone(), self.gamma[0], nu),
            _ => ModelParams::new_unequal(self.eta0.clone(), self.gamma.clone(), nu),
        }
    }
}

/// Producer/consumer risk targets and the reliability time point.
#[derive(Args)]
struct RiskArgs {
    /// Producer's risk: probability of rejecting acceptable quality.
    #[arg(long)]
    alpha: f64,

    /// Consumer's risk: probability of accepting rejectable quality.
    #[arg(long)]
    beta: f64,

    /// Mission time at which reliability is demonstrated.
    #[arg(long)]
    t0: f64,
}

impl RiskArgs {
    fn build(&self) -> Result<RiskSpec> {
        RiskSpec::new(self.alpha, self.beta, self.t0)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Size a sampling plan (n*, pi_c) for a fixed inspection schedule.
    Plan {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        risk: RiskArgs,
        /// Scale-deterioration factors defining rejectable quality:
        /// one common factor, or one per cause (comma-separated, each >= 1).
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<f64>,
        /// Schedule as JSON: '{"M":4,"h":0.2,"p":0}' (equispaced) or
        /// '{"L":[...],"p_list":[...]}' (explicit).
        #[arg(long)]
        scheme: String,
        /// Round the sample size up instead of down.
        #[arg(long)]
        round_up: bool,
    },
    /// Optimize the inspection spacing for fixed inspection counts, then size
    /// the plan at the optimum.
    Design {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        risk: RiskArgs,
        /// Scale-deterioration factors defining rejectable quality:
        /// one common factor, or one per cause (comma-separated, each >= 1).
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<f64>,
        /// Inspection counts to design for (comma-separated).
        #[arg(long, value_delimiter = ',', required = true)]
        m: Vec<usize>,
        /// Common withdrawal proportion at non-final inspections.
        #[arg(long, default_value_t = 0.0)]
        p: f64,
        /// Spacing search bracket "lo,hi" (default 0.02*t0 .. 2*t0).
        #[arg(long, value_delimiter = ',', num_args = 2)]
        bracket: Option<Vec<f64>>,
        /// Round the sample size up instead of down.
        #[arg(long)]
        round_up: bool,
        /// Emit results as CSV rows instead of JSON ("csv").
        #[arg(long)]
        emit_table: Option<String>,
    },
    /// Choose the number of inspections and the spacing jointly so the
    /// expected total cost stays within a budget.
    DesignBudget {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        risk: RiskArgs,
        /// Scale-deterioration factors defining rejectable quality:
        /// one common factor, or one per cause (comma-separated, each >= 1).
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<f64>,
        /// Cost parameters as JSON:
        /// '{"c_sample":0.1,"c_time":5,"c_failure":0.025,"c_inspection":10,"budget":55}'.
        #[arg(long)]
        costs: String,
        /// Budget ceiling; overrides any "budget" inside --costs.
        #[arg(long)]
        budget: Option<f64>,
        /// Common withdrawal proportion at non-final inspections.
        #[arg(long, default_value_t = 0.0)]
        p: f64,
        /// Largest number of inspections to consider.
        #[arg(long, default_value_t = 10)]
        m_max: usize,
        /// Spacing search bracket "lo,hi" (default 0.02*t0 .. 2*t0).
        #[arg(long, value_delimiter = ',', num_args = 2)]
        bracket: Option<Vec<f64>>,
        /// Emit the result as one CSV row instead of JSON ("csv").
        #[arg(long)]
        emit_table: Option<String>,
    },
    /// Fit a lifetime model to observed interval counts by maximum likelihood.
    Fit {
        /// CSV file with header i,L_lower,L_upper,d_1,...,d_J,r.
        #[arg(long)]
        data: PathBuf,
        /// Model variant: dependent-equal, independent-equal,
        /// dependent-unequal, or independent-unequal.
        #[arg(long)]
        variant: String,
        /// Also report the reliability estimate at this time.
        #[arg(long)]
        t0: Option<f64>,
    },
    /// Simulate one life test and emit the observed counts as CSV.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        /// Schedule as JSON: '{"M":4,"h":0.2,"p":0}' (equispaced) or
        /// '{"L":[...],"p_list":[...]}' (explicit).
        #[arg(long)]
        scheme: String,
        /// Units placed on test.
        #[arg(long)]
        n: u64,
        /// Random seed; the same seed always yields the same dataset.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate a plan by Monte Carlo: simulate, refit, decide, summarize.
    McEval {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        risk: RiskArgs,
        /// Scale-deterioration factors defining rejectable quality:
        /// one common factor, or one per cause (comma-separated, each >= 1).
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<f64>,
        /// Schedule as JSON: '{"M":4,"h":0.2,"p":0}' (equispaced) or
        /// '{"L":[...],"p_list":[...]}' (explicit).
        #[arg(long)]
        scheme: String,
        /// Model variant fitted to each replicate.
        #[arg(long)]
        variant: String,
        /// Simulate under this model instead of the acceptable-quality one
        /// (e.g. the rejectable model, to estimate the consumer's risk).
        #[arg(long)]
        true_model: Option<String>,
        /// Override the plan's sample size.
        #[arg(long)]
        n: Option<u64>,
        /// Number of simulated experiments.
        #[arg(long, default_value_t = 5000)]
        reps: usize,
        /// Random seed; the same seed always yields the same summary.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit the summary as one CSV row instead of JSON ("csv").
        #[arg(long)]
        emit_table: Option<String>,
    },
    /// Operating-characteristic curve of a plan, as CSV.
    Oc {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        risk: RiskArgs,
        /// Scale-deterioration factors defining rejectable quality:
        /// one common factor, or one per cause (comma-separated, each >= 1).
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<f64>,
        /// Schedule as JSON: '{"M":4,"h":0.2,"p":0}' (equispaced) or
        /// '{"L":[...],"p_list":[...]}' (explicit).
        #[arg(long)]
        scheme: String,
        /// Smallest scale factor on the curve (default: the rejectable
        /// quality, 1/max d).
        #[arg(long)]
        c_lo: Option<f64>,
        /// Number of points on the curve.
        #[arg(long, default_value_t = 21)]
        points: usize,
    },
}

// --- output helpers -------------------------------------------------------------

/// Rounds to `sig` significant digits (leaves integers and non-finite alone).
fn round_sig(x: f64, sig: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", sig.saturating_sub(1), x).parse().unwrap_or(x)
}

/// Rounds every fractional number in a JSON tree to `sig` significant digits.
fn round_value(v: &mut Value, sig: usize) {
    match v {
        Value::Number(n) => {
            if n.is_f64() {
                if let Some(x) = n.as_f64() {
                    if let Some(r) = serde_json::Number::from_f64(round_sig(x, sig)) {
                        *v = Value::Number(r);
                    }
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|x| round_value(x, sig)),
        Value::Object(map) => map.values_mut().for_each(|x| round_value(x, sig)),
        _ => {}
    }
}

/// Serializes to pretty JSON with `sig`-digit numbers.
fn to_json<T: serde::Serialize>(value: &T, sig: usize) -> Result<String> {
    let mut v = serde_json::to_value(value)
        .map_err(|e| Error::Numerical(format!("cannot serialize result: {e}")))?;
    round_value(&mut v, sig);
    serde_json::to_string_pretty(&v)
        .map_err(|e| Error::Numerical(format!("cannot serialize result: {e}")))
}

/// One CSV number, `sig` significant digits.
fn csv_num(x: f64, sig: usize) -> String {
    format!("{}", round_sig(x, sig))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    let mut body = text.to_string();
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn ceil_units(n_real: f64) -> u64 {
    (n_real.ceil().max(1.0)) as u64
}

fn parse_bracket(bracket: &Option<Vec<f64>>) -> Option<(f64, f64)> {
    bracket.as_ref().map(|b| (b[0], b[1]))
}

/// `p,nu,M,h,phi,n,pi_c` row shared by the design tables.
fn design_row(sig: usize, p: f64, nu: f64, m: usize, h: f64, phi: f64, plan: &PlanResult) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        csv_num(p, sig),
        csv_num(nu, sig),
        m,
        csv_num(h, sig),
        csv_num(phi, sig),
        plan.n_star,
        csv_num(plan.pi_c, sig),
    )
}

// --- subcommand handlers ----------------------------------------------------------

fn cmd_plan(
    cli_sig: usize,
    out: &Option<PathBuf>,
    model: &ModelArgs,
    risk: &RiskArgs,
    d: &[f64],
    scheme: &str,
    round_up: bool,
) -> Result<()> {
    let model0 = model.build()?;
    let model1 = derive_hypotheses(&model0, d)?;
    let scheme = PicScheme::from_json(scheme)?;
    let risk = risk.build()?;
    let mut plan = design_plan(&model0, &model1, &scheme, &risk)?;
    if round_up {
        plan.n_star = ceil_units(plan.n_real);
    }
    eprintln!(
        "plan: n*={} pi_c={:.4} (pi0={:.4}, pi1={:.4}, M={})",
        plan.n_star,
        plan.pi_c,
        plan.pi_0,
        plan.pi_1,
        plan.scheme.n_inspections()
    );
    emit(out, &to_json(&plan, cli_sig)?)
}

#[allow(clippy::too_many_arguments)]
fn cmd_design(
    sig: usize,
    out: &Option<PathBuf>,
    model: &ModelArgs,
    risk: &RiskArgs,
    d: &[f64],
    ms: &[usize],
    p: f64,
    bracket: &Option<Vec<f64>>,
    round_up: bool,
    emit_table: &Option<String>,
) -> Result<()> {
    let model0 = model.build()?;
    let risk = risk.build()?;
    let bracket = parse_bracket(bracket);
    let mut designs: Vec<DesignResult> = Vec::new();
    for &m in ms {
        let mut des = design_unconstrained(&model0, m, p, &risk, d, bracket)?;
        if round_up {
            des.plan.n_star = ceil_units(des.plan.n_real);
        }
        eprintln!(
            "design: M={} h*={:.4} phi={:.6} n*={} pi_c={:.4}{}",
            des.m,
            des.h_star,
            des.variance,
            des.plan.n_star,
            des.plan.pi_c,
            if des.at_boundary { " (bracket edge)" } else { "" }
        );
        designs.push(des);
    }
    match emit_table.as_deref() {
        Some("csv") => {
            let mut text = String::from("p,nu,M,h,phi,n,pi_c\n");
            for des in &designs {
                let _ = writeln!(
                    text,
                    "{}",
                    design_row(sig, des.p, model0.nu(), des.m, des.h_star, des.variance, &des.plan)
                );
            }
            emit(out, &text)
        }
        Some(other) => {
            Err(Error::Invalid(format!("emit-table: unknown format {other:?}, expected csv")))
        }
        None if designs.len() == 1 => emit(out, &to_json(&designs[0], sig)?),
        None => emit(out, &to_json(&designs, sig)?),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_design_budget(
    sig: usize,
    out: &Option<PathBuf>,
    model: &ModelArgs,
    risk: &RiskArgs,
    d: &[f64],
    costs: &str,
    budget: Option<f64>,
    p: f64,
    m_max: usize,
    bracket: &Option<Vec<f64>>,
    emit_table: &Option<String>,
) -> Result<()> {
    let model0 = model.build()?;
    let risk = risk.build()?;
    let mut costs = CostParams::from_json(costs)?;
    if budget.is_some() {
        costs = CostParams::new(
            costs.c_sample(),
            costs.c_time(),
            costs.c_failure(),
            costs.c_inspection(),
            budget,
        )?;
    }
    let des: BudgetDesign =
        design_budget(&model0, &costs, &risk, d, p, m_max, parse_bracket(bracket))?;
    eprintln!(
        "design-budget: M={} h={:.4} n*={} pi_c={:.4} cost={:.3} (budget {:.3}{})",
        des.m,
        des.h,
        des.plan.n_star,
        des.plan.pi_c,
        des.total_cost,
        des.budget,
        if des.constraint_active { ", active" } else { "" }
    );
    match emit_table.as_deref() {
        Some("csv") => {
            let mut text = String::from("p,nu,M,h,phi,n,pi_c,E_D,E_tau,E_I,TC\n");
            let _ = writeln!(
                text,
                "{},{},{},{},{}",
                design_row(sig, des.p, model0.nu(), des.m, des.h, des.variance, &des.plan),
                csv_num(des.expected.e_d_total, sig),
                csv_num(des.termination.e_tau, sig),
                csv_num(des.termination.e_inspections, sig),
                csv_num(des.total_cost, sig),
            );
            emit(out, &text)
        }
        Some(other) => {
            Err(Error::Invalid(format!("emit-table: unknown format {other:?}, expected csv")))
        }
        None => emit(out, &to_json(&des, sig)?),
    }
}

fn cmd_fit(
    sig: usize,
    out: &Option<PathBuf>,
    data: &PathBuf,
    variant: &str,
    t0: Option<f64>,
) -> Result<()> {
    let data = ObservedData::from_csv_path(data)?;
    let variant = FitVariant::from_str(variant)?;
    let fit = fit_mle(&data, variant)?;
    let mut doc = serde_json::to_value(&fit)
        .map_err(|e| Error::Numerical(format!("cannot serialize result: {e}")))?;
    if let Some(t0) = t0 {
        let (estimate, std_error) = estimate_reliability(&fit, t0)?;
        doc["reliability"] = json!({ "t0": t0, "estimate": estimate, "std_error": std_error });
    }
    round_value(&mut doc, sig);
    eprintln!(
        "fit: {} log-likelihood={:.4} AIC={:.3} BIC={:.3}{}",
        fit.variant,
        fit.log_likelihood,
        fit.aic,
        fit.bic,
        if fit.independence_limit { " (collapsed to independence)" } else { "" }
    );
    emit(
        out,
        &serde_json::to_string_pretty(&doc)
            .map_err(|e| Error::Numerical(format!("cannot serialize result: {e}")))?,
    )
}

fn cmd_simulate(
    out: &Option<PathBuf>,
    model: &ModelArgs,
    scheme: &str,
    n: u64,
    seed: u64,
) -> Result<()> {
    let model = model.build()?;
    let scheme = PicScheme::from_json(scheme)?;
    let data = simulate_dataset(&model, &scheme, n, seed)?;
    eprintln!(
        "simulate: n={} M={} seed={} -> {} failures",
        n,
        scheme.n_inspections(),
        seed,
        data.total_failures()
    );
    emit(out, &data.to_csv_string())
}

#[allow(clippy::too_many_arguments)]
fn cmd_mc_eval(
    sig: usize,
    out: &Option<PathBuf>,
    model: &ModelArgs,
    risk: &RiskArgs,
    d: &[f64],
    scheme: &str,
    variant: &str,
    true_model: &Option<String>,
    n: Option<u64>,
    reps: usize,
    seed: u64,
    emit_table: &Option<String>,
) -> Result<()> {
    let model0 = model.build()?;
    let model1 = derive_hypotheses(&model0, d)?;
    let scheme = PicScheme::from_json(scheme)?;
    let risk = risk.build()?;
    let variant = FitVariant::from_str(variant)?;
    let mut plan = design_plan(&model0, &model1, &scheme, &risk)?;
    if let Some(n) = n {
        plan.n_star = n;
    }
    let truth = match true_model {
        Some(text) => ModelParams::from_json(text)?,
        None => model0.clone(),
    };
    let summary = mc_evaluate(&plan, &truth, variant, reps, seed)?;
    eprintln!(
        "mc-eval: reps={} accept={:.4} avg_rf={:.4} rmsd_rf={:.4} failures={}",
        summary.reps,
        summary.acceptance_rate,
        summary.avg_reliability,
        summary.rmsd_reliability,
        summary.fit_failures
    );
    match emit_table.as_deref() {
        Some("csv") => {
            let header = "n,M,h,p,pi_c,avg_rf,rmsd_rf,avg_s2,rmsd_s2,acceptance_rate,\
                          fit_failures,reps";
            let times = plan.scheme.times();
            let h = times[0];
            let p = plan.scheme.withdrawals()[0];
            let row = format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                plan.n_star,
                plan.scheme.n_inspections(),
                csv_num(h, sig),
                csv_num(if times.len() == 1 { 1.0 } else { p }, sig),
                csv_num(plan.pi_c, sig),
                csv_num(summary.avg_reliability, sig),
                csv_num(summary.rmsd_reliability, sig),
                csv_num(summary.avg_s2, sig),
                csv_num(summary.rmsd_s2, sig),
                csv_num(summary.acceptance_rate, sig),
                summary.fit_failures,
                summary.reps,
            );
            emit(out, &format!("{header}\n{row}\n"))
        }
        Some(other) => {
            Err(Error::Invalid(format!("emit-table: unknown format {other:?}, expected csv")))
        }
        None => emit(out, &to_json(&json!({ "plan": plan, "mc": summary }), sig)?),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_oc(
    sig: usize,
    out: &Option<PathBuf>,
    model: &ModelArgs,
    risk: &RiskArgs,
    d: &[f64],
    scheme: &str,
    c_lo: Option<f64>,
    points: usize,
) -> Result<()> {
    let model0 = model.build()?;
    let model1 = derive_hypotheses(&model0, d)?;
    let scheme = PicScheme::from_json(scheme)?;
    let risk = risk.build()?;
    let plan = design_plan(&model0, &model1, &scheme, &risk)?;
    let c_lo = match c_lo {
        Some(c) => c,
        None => {
            1.0 / d.iter().cloned().fold(f64::NAN, f64::max) // largest deterioration
        }
    };
    let curve = oc_curve(&plan, &model0, c_lo, points)?;
    let mut text = String::from("defective_proportion,acceptance_probability,nu\n");
    for pt in &curve {
        let _ = writeln!(
            text,
            "{},{},{}",
            csv_num(pt.defective_proportion, sig),
            csv_num(pt.acceptance_probability, sig),
            csv_num(model0.nu(), sig),
        );
    }
    eprintln!("oc: {} points, n*={} pi_c={:.4}", curve.len(), plan.n_star, plan.pi_c);
    emit(out, &text)
}

// --- entry point ---------------------------------------------------------------

fn dispatch(cli: &Cli) -> Result<()> {
    let sig = cli.precision.max(1);
    let out = &cli.out;
    match &cli.command {
        Cmd::Plan { model, risk, d, scheme, round_up } => {
            cmd_plan(sig, out, model, risk, d, scheme, *round_up)
        }
        Cmd::Design { model, risk, d, m, p, bracket, round_up, emit_table } => {
            cmd_design(sig, out, model, risk, d, m, *p, bracket, *round_up, emit_table)
        }
        Cmd::DesignBudget { model, risk, d, costs, budget, p, m_max, bracket, emit_table } => {
            cmd_design_budget(
                sig, out, model, risk, d, costs, *budget, *p, *m_max, bracket, emit_table,
            )
        }
        Cmd::Fit { data, variant, t0 } => cmd_fit(sig, out, data, variant, *t0),
        Cmd::Simulate { model, scheme, n, seed } => cmd_simulate(out, model, scheme, *n, *seed),
        Cmd::McEval {
            model,
            risk,
            d,
            scheme,
            variant,
            true_model,
            n,
            reps,
            seed,
            emit_table,
        } => cmd_mc_eval(
            sig, out, model, risk, d, scheme, variant, true_model, *n, *reps, *seed, emit_table,
        ),
        Cmd::Oc { model, risk, d, scheme, c_lo, points } => {
            cmd_oc(sig, out, model, risk, d, scheme, *c_lo, *points)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // Ignore the error when a pool already exists (e.g. repeated calls in
        // one process under tests).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    match dispatch(&cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
