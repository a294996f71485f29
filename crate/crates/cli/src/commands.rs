use std::f64::consts::PI;

use clap::Args;
use polarsphere::dynamics::CompressionChain;
use polarsphere::experiments::{
    convergence_experiment, domination_check, fit_power_law, gamma_limit_check,
    hemisphere_limit_check, identity_check, upper_bound_check, ConvergenceOptions,
    ExperimentReport, Verdict, DEFAULT_BURN_IN,
};
use polarsphere::laws::{tau_integral_bound, tau_tail, TauLaw};
use polarsphere::rng::par_collect;
use polarsphere::sets::parse_set;
use polarsphere::stats::{ks_critical_value, ks_statistic, Ecdf};
use polarsphere::{Dimension, SpherePoint};
use serde::Serialize;

use crate::{param, Command, Settings};

/// Significance level of the KS envelope for the `law --mc` column.
const LAW_KS_ALPHA: f64 = 0.001;

#[derive(Args, Debug)]
pub struct ConvergeArgs {
    #[arg(long)]
    d: Option<usize>,
    /// Set specification, e.g. `hemi`, `cap:0.3:1.0`, `union(cap:0:1, hemi:2)`
    #[arg(long)]
    set: Option<String>,
    /// Polar angle of the center used by a bare `hemi`
    #[arg(long)]
    alpha: Option<f64>,
    /// Largest number of polarizations
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    /// Rows with n below this are left out of the power-law fit
    #[arg(long)]
    burn_in: Option<usize>,
    /// Monte Carlo points for the measure of a non-cap set
    #[arg(long)]
    polar_cap_samples: Option<usize>,
}

#[derive(Args, Debug)]
pub struct LawArgs {
    #[arg(long)]
    d: Option<usize>,
    /// Polar angle of the starting point, in (0, π]
    #[arg(long)]
    xi: Option<f64>,
    /// Number of β grid points on [0, π]
    #[arg(long)]
    points: Option<usize>,
    /// Add an empirical tail from this many reflections
    #[arg(long)]
    mc: Option<usize>,
}

#[derive(Args, Debug)]
pub struct GammaArgs {
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    /// Largest accepted KS distance
    #[arg(long)]
    threshold: Option<f64>,
}

#[derive(Args, Debug)]
pub struct LimitArgs {
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    /// Accepted relative deviation from d
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args, Debug)]
pub struct DominateArgs {
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    xi: Option<f64>,
    /// Upper end of the comparison uniforms (default π − ξ²)
    #[arg(long)]
    ell: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
}

#[derive(Args, Debug)]
pub struct IdentityArgs {
    #[arg(long)]
    d: Option<usize>,
    #[arg(long = "A", value_name = "SET")]
    a: Option<String>,
    #[arg(long = "B", value_name = "SET")]
    b: Option<String>,
    /// Number of random reflection axes
    #[arg(long)]
    axes: Option<usize>,
    /// Uniform points per axis
    #[arg(long)]
    samples: Option<usize>,
}

pub fn dispatch(cmd: &Command, s: &Settings) -> anyhow::Result<ExperimentReport> {
    match cmd {
        Command::Converge(a) => converge(a, s),
        Command::Law(a) => law(a, s),
        Command::Gamma(a) => gamma(a, s),
        Command::Limit(a) => limit(a, s),
        Command::Dominate(a) => dominate(a, s),
        Command::Identity(a) => identity(a, s),
    }
}

fn dim(flag: Option<usize>, s: &Settings) -> anyhow::Result<Dimension> {
    Ok(Dimension::new(param(flag, s, "d", 2)?)?)
}

fn converge(a: &ConvergeArgs, s: &Settings) -> anyhow::Result<ExperimentReport> {
    let d = dim(a.d, s)?;
    let spec: String = param(a.set.clone(), s, "set", "hemi".to_string())?;
    let alpha = param(a.alpha, s, "alpha", 0.2)?;
    let n = param(a.n, s, "n", 200)?;
    let trials = param(a.trials, s, "trials", 100_000)?;
    let burn_in = param(a.burn_in, s, "burn_in", DEFAULT_BURN_IN)?;
    let opts = ConvergenceOptions {
        polar_cap_samples: param(
            a.polar_cap_samples,
            s,
            "polar_cap_samples",
            ConvergenceOptions::default().polar_cap_samples,
        )?,
    };
    let set = parse_set(&spec, d, alpha)?;
    let table = convergence_experiment(&set, d, n, trials, s.seed, &opts)?;
    let verdicts = upper_bound_check(&table)?;
    let fit = fit_power_law(&table, burn_in).ok();
    let mut report = table
        .to_report()?
        .param("set", spec)
        .param("alpha", alpha)
        .param("burn_in", burn_in)
        .param("fit_c", fit.map(|f| f.c))
        .param("fit_p", fit.map(|f| f.p))
        .param("fit_residual", fit.map(|f| f.residual))
        .param("fit_rows_used", fit.map(|f| f.rows_used))
        .param("fit_non_decaying", fit.map(|f| f.non_decaying));
    report.verdicts.extend(verdicts);
    Ok(report)
}

#[derive(Serialize)]
struct LawRow {
    beta: f64,
    tail: f64,
    tail_lower_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    mc_tail: Option<f64>,
}

fn law(a: &LawArgs, s: &Settings) -> anyhow::Result<ExperimentReport> {
    let d = dim(a.d, s)?;
    let xi = param(a.xi, s, "xi", PI / 2.0)?;
    let points = param(a.points, s, "points", 33)?;
    let mc: Option<usize> = match a.mc {
        Some(m) => Some(m),
        None => s.config.get("mc")?,
    };
    if points < 2 {
        return Err(crate::config::UsageError("--points must be at least 2".into()).into());
    }
    let law = TauLaw::new(d, xi)?;

    // Empirical distances come from actual reflections, not from the law.
    let start = SpherePoint::at_polar_angle(d, xi);
    let draws = match mc {
        Some(0) => return Err(crate::config::UsageError("--mc must be at least 1".into()).into()),
        Some(m) => Some(par_collect(s.seed, m, |rng, _| {
            CompressionChain::new(start.clone()).step(rng).1
        })),
        None => None,
    };
    let ecdf = draws.as_deref().map(Ecdf::new).transpose()?;

    let mut columns = vec!["beta", "tail", "tail_lower_bound"];
    if mc.is_some() {
        columns.push("mc_tail");
    }
    let mut report = ExperimentReport::new("law", &columns)
        .param("d", d.get())
        .param("xi", xi)
        .param("points", points)
        .param("mc", mc)
        .param("seed", s.seed);
    for i in 0..points {
        let beta = PI * i as f64 / (points - 1) as f64;
        let tail_lower_bound = if beta < xi {
            1.0 - tau_integral_bound(d, xi, beta)?
        } else {
            0.0
        };
        report.push_row(&LawRow {
            beta,
            tail: tau_tail(&law, beta),
            tail_lower_bound,
            mc_tail: ecdf.as_ref().map(|e| 1.0 - e.eval(beta)),
        })?;
    }
    if let Some(draws) = &draws {
        // Stayed points sit at the recomputed start distance, which can be an
        // ulp away from the given ξ; the atom has to match it exactly.
        let start_law = TauLaw::new(d, CompressionChain::new(start).distance())?;
        let ks = ks_statistic(draws, &start_law)?;
        let crit = ks_critical_value(draws.len(), LAW_KS_ALPHA);
        report.verdicts.push(
            Verdict::new("law_mc", ks <= crit, ks, crit)
                .with_detail(format!("KS of reflected distances, level {LAW_KS_ALPHA}")),
        );
    }
    Ok(report)
}

fn gamma(a: &GammaArgs, s: &Settings) -> anyhow::Result<ExperimentReport> {
    let d = dim(a.d, s)?;
    let alpha = param(a.alpha, s, "alpha", 0.2)?;
    let n = param(a.n, s, "n", 500)?;
    let trials = param(a.trials, s, "trials", 10_000)?;
    let threshold = param(a.threshold, s, "threshold", 0.05)?;
    let r = gamma_limit_check(d, alpha, n, trials, s.seed, threshold)?;
    let mut report = ExperimentReport::new(
        "gamma",
        &["statistic", "n_samples", "reference", "threshold", "passed"],
    )
    .param("d", d.get())
    .param("alpha", alpha)
    .param("n", n)
    .param("trials", trials)
    .param("seed", s.seed);
    report.push_row(&r)?;
    report.verdicts.push(r.verdict("gamma_limit"));
    Ok(report)
}

fn limit(a: &LimitArgs, s: &Settings) -> anyhow::Result<ExperimentReport> {
    let d = dim(a.d, s)?;
    let alpha = param(a.alpha, s, "alpha", 0.2)?;
    let n = param(a.n, s, "n", 2000)?;
    let trials = param(a.trials, s, "trials", 10_000)?;
    let tolerance = param(a.tolerance, s, "tolerance", 0.1)?;
    let r = hemisphere_limit_check(d, alpha, n, trials, s.seed, tolerance)?;
    Ok(r.to_report()?)
}

fn dominate(a: &DominateArgs, s: &Settings) -> anyhow::Result<ExperimentReport> {
    let d = dim(a.d, s)?;
    let xi = param(a.xi, s, "xi", 0.3)?;
    let ell = param(a.ell, s, "ell", PI - xi * xi)?;
    let n = param(a.n, s, "n", 20)?;
    let trials = param(a.trials, s, "trials", 10_000)?;
    let r = domination_check(d, xi, ell, n, trials, s.seed)?;
    Ok(r.to_report()?)
}

fn identity(a: &IdentityArgs, s: &Settings) -> anyhow::Result<ExperimentReport> {
    let d = dim(a.d, s)?;
    let spec_a: String = param(a.a.clone(), s, "a", "cap:0:0.8".to_string())?;
    let spec_b: String = param(a.b.clone(), s, "b", "cap:2.0:0.6".to_string())?;
    let axes = param(a.axes, s, "axes", 20)?;
    let samples = param(a.samples, s, "samples", 100_000)?;
    let set_a = parse_set(&spec_a, d, PI / 2.0)?;
    let set_b = parse_set(&spec_b, d, PI / 2.0)?;
    let r = identity_check(&set_a, &set_b, d, axes, samples, s.seed)?;
    Ok(r.to_report()?.param("A", spec_a).param("B", spec_b))
}
