//! `E[m(S_{U_1…U_n} A △ A*)]` as a function of `n`, its `2^d/n` bound and
//! power-law fits.

use serde::Serialize;

use super::{ExperimentReport, Verdict, SIGMA_BAND};
use crate::dynamics::{run_cap_chain_with, symm_diff_to_polar_cap, TrajectoryMode};
use crate::error::{Error, Result};
use crate::rng::par_trials;
use crate::sets::{polar_cap, PolarizedSet, SetExpr};
use crate::sphere::{sample_uniform_axis, sample_uniform_point, Dimension};
use crate::stats::Moments;

/// Longest history used for sets that are not caps; membership cost grows
/// with the number of polarizations.
pub const GENERAL_SET_MAX_STEPS: usize = 18;

/// Rows with `n` below this are ignored by [`fit_power_law`].
pub const DEFAULT_BURN_IN: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceOptions {
    /// Samples used to size `A*` when `A` is not a cap.
    pub polar_cap_samples: usize,
}

impl Default for ConvergenceOptions {
    fn default() -> Self {
        ConvergenceOptions {
            polar_cap_samples: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub mean: f64,
    pub std_error: f64,
    /// `n · mean`.
    pub scaled: f64,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub d: usize,
    pub trials: usize,
    pub seed: u64,
    /// `"cap-tracking"` or `"membership-oracle"`.
    pub method: &'static str,
    /// `m(A*)` (exact for caps, estimated otherwise).
    pub measure: f64,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub fn row(&self, n: usize) -> Option<&ConvergenceRow> {
        self.rows.iter().find(|r| r.n == n)
    }

    pub fn to_report(&self) -> Result<ExperimentReport> {
        let mut r = ExperimentReport::new(
            "converge",
            &["n", "mean", "std_error", "scaled", "trials", "seed"],
        )
        .param("d", self.d)
        .param("trials", self.trials)
        .param("seed", self.seed)
        .param("method", self.method)
        .param("measure", self.measure);
        for row in &self.rows {
            r.push_row(row)?;
        }
        Ok(r)
    }
}

/// Estimates `E[m(S_{U_1…U_n} A △ A*)]` for `n = 0…n_max` over independent
/// trials.
///
/// A cap is followed exactly through its center; any other set is handled
/// with the membership recursion and one uniform test point per trial.
pub fn convergence_experiment(
    set: &SetExpr,
    d: Dimension,
    n_max: usize,
    trials: usize,
    seed: u64,
    opts: &ConvergenceOptions,
) -> Result<ConvergenceTable> {
    set.check_dim(d)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let (method, measure, moments) = if let Some(cap) = set.as_cap() {
        let moments = par_trials(
            seed,
            trials,
            || vec![Moments::default(); n_max + 1],
            |acc, rng, _| {
                let traj = run_cap_chain_with(cap, n_max, TrajectoryMode::Lean, rng);
                let diffs = symm_diff_to_polar_cap(&traj).expect("trajectory is nonempty");
                for (m, v) in acc.iter_mut().zip(diffs) {
                    m.push(v);
                }
            },
            merge_moments,
        );
        ("cap-tracking", cap.measure(), moments)
    } else {
        if n_max > GENERAL_SET_MAX_STEPS {
            return Err(Error::DepthLimit {
                len: n_max,
                limit: GENERAL_SET_MAX_STEPS,
            });
        }
        let star = polar_cap(set, d, opts.polar_cap_samples, seed)?;
        let moments = par_trials(
            seed,
            trials,
            || vec![Moments::default(); n_max + 1],
            |acc, rng, _| {
                let axes = (0..n_max).map(|_| sample_uniform_axis(d, rng)).collect();
                let x = sample_uniform_point(d, rng);
                let polarized = PolarizedSet::with_history(set.clone(), axes);
                let in_star = star.cap.contains(&x);
                for (k, m) in acc.iter_mut().enumerate() {
                    let inside = polarized.contains_after(k, &x).expect("depth checked");
                    m.push(if inside != in_star { 1.0 } else { 0.0 });
                }
            },
            merge_moments,
        );
        ("membership-oracle", star.measure.mean, moments)
    };
    let rows = moments
        .iter()
        .enumerate()
        .map(|(n, m)| {
            let e = m.estimate();
            ConvergenceRow {
                n,
                mean: e.mean,
                std_error: e.std_error,
                scaled: n as f64 * e.mean,
                trials,
                seed,
            }
        })
        .collect();
    Ok(ConvergenceTable {
        d: d.get(),
        trials,
        seed,
        method,
        measure,
        rows,
    })
}

fn merge_moments(total: &mut Vec<Moments>, part: Vec<Moments>) {
    for (t, p) in total.iter_mut().zip(&part) {
        t.merge(p);
    }
}

/// Checks `mean_n <= 2^d/n + 4σ_n` on every row with `n >= 1`, and the
/// recursion `1/z_n >= 1/z_{n-1} + 1` for `z_n = 2^{-d} mean_n` up to
/// statistical slack.
pub fn upper_bound_check(table: &ConvergenceTable) -> Result<Vec<Verdict>> {
    if table.rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    let c = 2f64.powi(table.d as i32);

    let mut worst = f64::NEG_INFINITY;
    let mut first_fail = None;
    for r in table.rows.iter().filter(|r| r.n >= 1) {
        let excess = r.mean - c / r.n as f64 - SIGMA_BAND * r.std_error;
        if excess > 0.0 && first_fail.is_none() {
            first_fail = Some(r.n);
        }
        worst = worst.max(excess);
    }
    let bound = match first_fail {
        Some(n) => Verdict::new("upper_bound", false, worst, 0.0)
            .with_detail(format!("row n = {n} exceeds 2^d/n + 4 sigma")),
        None => Verdict::new("upper_bound", true, if worst.is_finite() { worst } else { 0.0 }, 0.0)
            .with_detail("max over rows of mean - 2^d/n - 4 sigma"),
    }
    .with_sigma(SIGMA_BAND);

    // σ(1/z) = 2^d σ / mean² by the delta method.
    let mut worst_gap = f64::INFINITY;
    let mut first_fail = None;
    for w in table.rows.windows(2) {
        let (prev, cur) = (&w[0], &w[1]);
        if prev.mean <= 0.0 || cur.mean <= 0.0 {
            continue;
        }
        let inv_prev = c / prev.mean;
        let inv_cur = c / cur.mean;
        let slack = SIGMA_BAND
            * (c * cur.std_error / (cur.mean * cur.mean)
                + c * prev.std_error / (prev.mean * prev.mean));
        let gap = inv_cur - inv_prev - 1.0 + slack;
        if gap < 0.0 && first_fail.is_none() {
            first_fail = Some(cur.n);
        }
        worst_gap = worst_gap.min(gap);
    }
    let recursion = match first_fail {
        Some(n) => Verdict::new("recursion", false, worst_gap, 0.0)
            .with_detail(format!("row n = {n} violates 1/z_n >= 1/z_(n-1) + 1")),
        None => Verdict::new(
            "recursion",
            true,
            if worst_gap.is_finite() { worst_gap } else { 0.0 },
            0.0,
        )
        .with_detail("min over rows of 1/z_n - 1/z_(n-1) - 1 + slack"),
    }
    .with_sigma(SIGMA_BAND);
    Ok(vec![bound, recursion])
}

/// Least-squares fit of `mean ≈ C n^{-p}` in log–log coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub c: f64,
    pub p: f64,
    /// Root mean square of the log residuals.
    pub residual: f64,
    pub rows_used: usize,
    /// Set when the fitted exponent is below 0.1.
    pub non_decaying: bool,
}

/// Fits rows with `n >= burn_in` and positive mean; needs at least five.
pub fn fit_power_law(table: &ConvergenceTable, burn_in: usize) -> Result<PowerLawFit> {
    let pts: Vec<(f64, f64)> = table
        .rows
        .iter()
        .filter(|r| r.n >= burn_in.max(1) && r.mean > 0.0)
        .map(|r| ((r.n as f64).ln(), r.mean.ln()))
        .collect();
    if pts.len() < 5 {
        return Err(Error::FitNotApplicable(format!(
            "{} usable rows past burn-in {burn_in}, need 5",
            pts.len()
        )));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::FitNotApplicable("all rows share one n".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum::<f64>()
        / k)
        .sqrt();
    Ok(PowerLawFit {
        c: intercept.exp(),
        p: -slope,
        residual,
        rows_used: pts.len(),
        non_decaying: -slope < 0.1,
    })
}
