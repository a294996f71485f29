//! Stochastic domination of the compression chain by the order-statistic chain.
//!
//! With `Y_n = |τ_{U_1…U_n}(a) - O|` and `Ỹ_0 = Y_0`, the claim is
//! `P(Y_n > η) >= P(Ỹ_n > η)` for every `η`, where `Ỹ` is the `d`-th order
//! statistic chain on `[0, ℓ]`.

use std::f64::consts::PI;

use serde::Serialize;

use super::{ExperimentReport, Verdict, SIGMA_BAND};
use crate::dynamics::CompressionChain;
use crate::error::{Error, Result};
use crate::laws::{orderstat_exact_tail, OrderStatLaw};
use crate::rng::par_collect;
use crate::sphere::{Dimension, SpherePoint};

const GRID_POINTS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DominationRow {
    pub eta: f64,
    pub geometric_tail: f64,
    pub orderstat_tail: f64,
    pub sigma: f64,
    /// `geometric_tail - orderstat_tail + 4σ`; negative means a violation.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominationReport {
    pub d: usize,
    pub xi: f64,
    pub ell: f64,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub y0: f64,
    pub rows: Vec<DominationRow>,
    pub passed: bool,
    /// Largest `ℓ` in `[y0, π]` for which the same sample still passes.
    pub ell_max: f64,
}

impl DominationReport {
    pub fn verdict(&self) -> Verdict {
        let worst = self
            .rows
            .iter()
            .map(|r| r.margin)
            .fold(f64::INFINITY, f64::min);
        Verdict::new("domination", self.passed, worst, 0.0)
            .with_sigma(SIGMA_BAND)
            .with_detail(format!(
                "min margin over {} grid points; passes up to ell = {:.4}",
                self.rows.len(),
                self.ell_max
            ))
    }

    pub fn to_report(&self) -> Result<ExperimentReport> {
        let mut r = ExperimentReport::new(
            "dominate",
            &["eta", "geometric_tail", "orderstat_tail", "sigma", "margin"],
        )
        .param("d", self.d)
        .param("xi", self.xi)
        .param("ell", self.ell)
        .param("n", self.n)
        .param("trials", self.trials)
        .param("seed", self.seed)
        .param("y0", self.y0)
        .param("ell_max", self.ell_max);
        for row in &self.rows {
            r.push_row(row)?;
        }
        r.verdicts.push(self.verdict());
        Ok(r)
    }
}

fn compare(sorted: &[f64], law: &OrderStatLaw) -> Vec<DominationRow> {
    let total = sorted.len() as f64;
    (0..GRID_POINTS)
        .map(|i| {
            let eta = law.y0() * i as f64 / (GRID_POINTS - 1) as f64;
            let above = sorted.len() - sorted.partition_point(|&y| y <= eta);
            let geometric_tail = above as f64 / total;
            let orderstat_tail = orderstat_exact_tail(law, eta).expect("eta >= 0");
            let sigma = (orderstat_tail * (1.0 - orderstat_tail) / total).sqrt();
            DominationRow {
                eta,
                geometric_tail,
                orderstat_tail,
                sigma,
                margin: geometric_tail - orderstat_tail + SIGMA_BAND * sigma,
            }
        })
        .collect()
}

fn all_pass(rows: &[DominationRow]) -> bool {
    rows.iter().all(|r| r.margin >= 0.0)
}

/// Compares the empirical tail of `Y_n`, started at polar angle `ξ`, with the
/// exact order-statistic tail on a 50-point grid over `[0, Y_0]`.
pub fn domination_check(
    d: Dimension,
    xi: f64,
    ell: f64,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<DominationReport> {
    if !(xi > 0.0 && xi <= PI) {
        return Err(Error::out_of_range("xi", xi, 0.0, PI));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let y0 = 2.0 * (xi / 2.0).sin();
    if !(ell >= y0 && ell <= PI) {
        return Err(Error::out_of_range("ell", ell, y0, PI));
    }
    let start = SpherePoint::at_polar_angle(d, xi);
    let mut sorted = par_collect(seed, trials, |rng, _| {
        let mut chain = CompressionChain::new(start.clone());
        for _ in 0..n {
            chain.step(rng);
        }
        chain.point().polar_chord()
    });
    sorted.sort_by(f64::total_cmp);

    let law = OrderStatLaw::new(d.get(), ell, y0, n)?;
    let rows = compare(&sorted, &law);
    let passed = all_pass(&rows);

    // Larger ℓ slows the order-statistic chain and makes domination harder,
    // so the passing set of ℓ is an interval starting at y0.
    let passes_at = |l: f64| all_pass(&compare(&sorted, &law_with_ell(&law, l)));
    let ell_max = if passes_at(PI) {
        PI
    } else if !passes_at(y0) {
        y0
    } else {
        let (mut lo, mut hi) = (y0, PI);
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if passes_at(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };

    Ok(DominationReport {
        d: d.get(),
        xi,
        ell,
        n,
        trials,
        seed,
        y0,
        rows,
        passed,
        ell_max,
    })
}

fn law_with_ell(law: &OrderStatLaw, ell: f64) -> OrderStatLaw {
    OrderStatLaw::new(law.d(), ell, law.y0(), law.steps()).expect("ell >= y0")
}
