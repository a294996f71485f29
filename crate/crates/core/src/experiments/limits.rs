//! Large-`n` behavior of a hemisphere (equivalently, of its center).

use std::f64::consts::PI;

use serde::Serialize;

use super::{ExperimentReport, Verdict};
use crate::dynamics::CompressionChain;
use crate::error::{Error, Result};
use crate::laws::{GammaLaw, Scaled};
use crate::rng::par_collect;
use crate::sphere::{Dimension, SpherePoint};
use crate::stats::{ks_statistic, mean_ci};

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= PI) {
        return Err(Error::out_of_range("alpha", alpha, 0.0, PI));
    }
    Ok(())
}

/// `δ(τ_{U_1…U_n}(a), O)` for `trials` independent axis sequences, `δ(a, O) = α`.
fn final_distances(d: Dimension, alpha: f64, n: usize, trials: usize, seed: u64) -> Vec<f64> {
    let start = SpherePoint::at_polar_angle(d, alpha);
    par_collect(seed, trials, |rng, _| {
        let mut chain = CompressionChain::new(start.clone());
        for _ in 0..n {
            chain.step(rng);
        }
        chain.distance()
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HemisphereLimitReport {
    pub d: usize,
    pub alpha: f64,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// `n · E[m(S_{U_1…U_n} A △ A*)]`.
    pub scaled: f64,
    pub std_error: f64,
    /// The limit `d`.
    pub target: f64,
    /// `|scaled - d| / d`.
    pub relative_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl HemisphereLimitReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::new("hemisphere_limit", self.passed, self.relative_deviation, self.tolerance)
            .with_detail(format!(
                "n*E = {:.4} +- {:.4} against d = {}",
                self.scaled, self.std_error, self.d
            ))
    }

    pub fn to_report(&self) -> Result<ExperimentReport> {
        let mut r = ExperimentReport::new(
            "limit",
            &["n", "scaled", "std_error", "target", "relative_deviation"],
        )
        .param("d", self.d)
        .param("alpha", self.alpha)
        .param("trials", self.trials)
        .param("seed", self.seed)
        .param("tolerance", self.tolerance);
        r.push_row(self)?;
        r.verdicts.push(self.verdict());
        Ok(r)
    }
}

/// `n · E[m(S_{U_1…U_n} A △ A*)]` for the hemisphere centered at polar angle
/// `α`, compared with its limit `d` at relative tolerance `tolerance`.
///
/// For a hemisphere the symmetric difference is `δ(center, O)/π`, so only the
/// center is simulated.
pub fn hemisphere_limit_check(
    d: Dimension,
    alpha: f64,
    n: usize,
    trials: usize,
    seed: u64,
    tolerance: f64,
) -> Result<HemisphereLimitReport> {
    check_alpha(alpha)?;
    let scaled: Vec<f64> = final_distances(d, alpha, n, trials, seed)
        .into_iter()
        .map(|delta| n as f64 * delta / PI)
        .collect();
    let est = mean_ci(&scaled)?;
    let target = d.get() as f64;
    let relative_deviation = (est.mean - target).abs() / target;
    Ok(HemisphereLimitReport {
        d: d.get(),
        alpha,
        n,
        trials,
        seed,
        scaled: est.mean,
        std_error: est.std_error,
        target,
        relative_deviation,
        tolerance,
        passed: relative_deviation <= tolerance,
    })
}

/// Kolmogorov–Smirnov distance of a sample from a reference law.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KsReport {
    pub statistic: f64,
    pub n_samples: usize,
    pub reference: String,
    pub threshold: f64,
    pub passed: bool,
}

impl KsReport {
    pub fn verdict(&self, name: &str) -> Verdict {
        Verdict::new(name, self.passed, self.statistic, self.threshold)
            .with_detail(format!("KS against {}", self.reference))
    }
}

/// KS distance between `n · δ(τ_{U_1…U_n}(a), O)` and `π · Γ(d)`.
pub fn gamma_limit_check(
    d: Dimension,
    alpha: f64,
    n: usize,
    trials: usize,
    seed: u64,
    threshold: f64,
) -> Result<KsReport> {
    check_alpha(alpha)?;
    let samples: Vec<f64> = final_distances(d, alpha, n, trials, seed)
        .into_iter()
        .map(|delta| n as f64 * delta)
        .collect();
    let law = Scaled {
        inner: GammaLaw::new(d.get())?,
        scale: PI,
    };
    let statistic = ks_statistic(&samples, &law)?;
    Ok(KsReport {
        statistic,
        n_samples: samples.len(),
        reference: format!("pi * Gamma({})", d.get()),
        threshold,
        passed: statistic < threshold,
    })
}
