//! Monte Carlo check of
//! `m(SA ∩ SB) - m(A ∩ B) = ∫ I_{A∖B}(x) I_{B∖A}(σx) dm(x) >= 0`.
//!
//! Both sides are evaluated on the same uniform points, so their difference
//! has far smaller variance than either side alone.

use rand::Rng;
use serde::Serialize;

use super::{ExperimentReport, Verdict, SIGMA_BAND};
use crate::error::Result;
use crate::rng::{par_trials, trial_rng};
use crate::sets::{Cap, PolarizedSet, SetExpr};
use crate::sphere::{sample_uniform_axis, sample_uniform_point, Dimension, ReflectionAxis};
use crate::stats::Moments;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityRow {
    pub axis: usize,
    pub left: f64,
    pub left_se: f64,
    pub right: f64,
    pub right_se: f64,
    pub difference: f64,
    pub difference_se: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub d: usize,
    pub samples: usize,
    pub seed: u64,
    pub rows: Vec<IdentityRow>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn verdict(&self) -> Verdict {
        let worst = self
            .rows
            .iter()
            .map(|r| z_score(r.difference, r.difference_se))
            .fold(0.0, f64::max);
        Verdict::new("identity", self.passed(), worst, SIGMA_BAND)
            .with_sigma(SIGMA_BAND)
            .with_detail(format!(
                "largest |left - right| in standard errors over {} axes",
                self.rows.len()
            ))
    }

    pub fn to_report(&self) -> Result<ExperimentReport> {
        let mut r = ExperimentReport::new(
            "identity",
            &[
                "axis",
                "left",
                "left_se",
                "right",
                "right_se",
                "difference",
                "difference_se",
                "passed",
            ],
        )
        .param("d", self.d)
        .param("samples", self.samples)
        .param("seed", self.seed);
        for row in &self.rows {
            r.push_row(row)?;
        }
        r.verdicts.push(self.verdict());
        Ok(r)
    }
}

fn z_score(value: f64, se: f64) -> f64 {
    if se > 0.0 {
        value.abs() / se
    } else if value == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Both sides of the identity for one axis, from `samples` common points.
pub fn identity_for_axis(
    a: &SetExpr,
    b: &SetExpr,
    u: &ReflectionAxis,
    samples: usize,
    seed: u64,
) -> Result<IdentityRow> {
    let d = u.dim();
    a.check_dim(d)?;
    b.check_dim(d)?;
    let sa = PolarizedSet::with_history(a.clone(), vec![u.clone()]);
    let sb = PolarizedSet::with_history(b.clone(), vec![u.clone()]);
    let [left, right, diff] = par_trials(
        seed,
        samples,
        || [Moments::default(); 3],
        |acc, rng, _| {
            let x = sample_uniform_point(d, rng);
            let xbar = u.reflect(&x).expect("dimension checked");
            let (in_a, in_b) = (a.contains(&x), b.contains(&x));
            let l = indicator(sa.contains(&x).expect("one step") && sb.contains(&x).expect("one step"))
                - indicator(in_a && in_b);
            let r = indicator(in_a && !in_b && b.contains(&xbar) && !a.contains(&xbar));
            acc[0].push(l);
            acc[1].push(r);
            acc[2].push(l - r);
        },
        |total, part| {
            for (t, p) in total.iter_mut().zip(&part) {
                t.merge(p);
            }
        },
    )
    .map(|m| m.estimate());
    let passed = z_score(diff.mean, diff.std_error) <= SIGMA_BAND
        && left.mean >= -SIGMA_BAND * left.std_error
        && right.mean >= -SIGMA_BAND * right.std_error;
    Ok(IdentityRow {
        axis: 0,
        left: left.mean,
        left_se: left.std_error,
        right: right.mean,
        right_se: right.std_error,
        difference: diff.mean,
        difference_se: diff.std_error,
        passed,
    })
}

// Each axis gets its own sample seed, derived from the master seed.
fn axis_seed(seed: u64, k: usize) -> u64 {
    seed ^ (k as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

// Streams for drawing the axes themselves; disjoint from the sample streams.
const AXIS_STREAM_TAG: u64 = 1 << 61;

/// The identity for `trials_axes` uniform random axes.
pub fn identity_check(
    a: &SetExpr,
    b: &SetExpr,
    d: Dimension,
    trials_axes: usize,
    samples: usize,
    seed: u64,
) -> Result<IdentityReport> {
    let mut rng = trial_rng(seed, AXIS_STREAM_TAG);
    let rows = (0..trials_axes)
        .map(|k| {
            let u = sample_uniform_axis(d, &mut rng);
            let mut row = identity_for_axis(a, b, &u, samples, axis_seed(seed, k))?;
            row.axis = k;
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IdentityReport {
        d: d.get(),
        samples,
        seed,
        rows,
    })
}

/// Random `(A, B, u)`: caps with uniform centers and radii in `[0.3, 2.0]`;
/// every third `A` is a union of two such caps.
pub fn random_identity_triples(
    d: Dimension,
    count: usize,
    seed: u64,
) -> Vec<(SetExpr, SetExpr, ReflectionAxis)> {
    let mut rng = trial_rng(seed, AXIS_STREAM_TAG + 1);
    let cap = |rng: &mut crate::rng::TrialRng| -> SetExpr {
        let c = sample_uniform_point(d, rng);
        let r = rng.random_range(0.3..2.0);
        Cap::new(c, r).expect("radius in range").into()
    };
    (0..count)
        .map(|k| {
            let a = if k % 3 == 2 {
                SetExpr::Union(vec![cap(&mut rng), cap(&mut rng)])
            } else {
                cap(&mut rng)
            };
            let b = cap(&mut rng);
            (a, b, sample_uniform_axis(d, &mut rng))
        })
        .collect()
}
