//! Monte Carlo measure estimates.

use serde::{Deserialize, Serialize};

use super::{Cap, PolarizedSet, SetExpr};
use crate::error::{Error, Result};
use crate::rng::par_count;
use crate::sets::cap_radius_from_measure;
use crate::sphere::{sample_uniform_point, Dimension, SpherePoint};

/// Mean of an indicator (or of trial values in `[0, 1]`) with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
}

impl MeasureEstimate {
    /// Estimate from `hits` successes in `n` indicator draws.
    pub fn from_count(hits: u64, n: u64, seed: u64) -> Self {
        let mean = hits as f64 / n as f64;
        MeasureEstimate {
            mean,
            std_error: (mean * (1.0 - mean) / n as f64).sqrt(),
            n_samples: n,
            seed,
        }
    }

    /// An exactly known measure.
    pub fn exact(mean: f64) -> Self {
        MeasureEstimate {
            mean,
            std_error: 0.0,
            n_samples: 0,
            seed: 0,
        }
    }

    /// True if `value` lies within `k` standard errors of the mean.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.std_error
    }
}

/// Indicator Monte Carlo estimate of `m({x : predicate(x)})`.
pub fn mc_measure<F>(predicate: F, d: Dimension, n_samples: usize, seed: u64) -> Result<MeasureEstimate>
where
    F: Fn(&SpherePoint) -> bool + Sync + Send,
{
    if n_samples == 0 {
        return Err(Error::InvalidArgument("n_samples must be at least 1".into()));
    }
    let hits = par_count(seed, n_samples, |rng| predicate(&sample_uniform_point(d, rng)));
    Ok(MeasureEstimate::from_count(hits, n_samples as u64, seed))
}

/// Monte Carlo estimate of `m(A △ B)`.
pub fn mc_symm_diff(
    a: &PolarizedSet,
    b: &SetExpr,
    d: Dimension,
    n_samples: usize,
    seed: u64,
) -> Result<MeasureEstimate> {
    a.check_depth()?;
    a.base().check_dim(d)?;
    b.check_dim(d)?;
    if let Some(u) = a.history().first() {
        if u.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d.ambient(),
                found: u.dim().ambient(),
            });
        }
    }
    mc_measure(
        |x| a.contains(x).expect("depth and dimension checked") != b.contains(x),
        d,
        n_samples,
        seed,
    )
}

/// The polar cap `A*` together with the measure it was sized from.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarCap {
    pub cap: Cap,
    pub measure: MeasureEstimate,
}

/// Cap centered at the north pole with the same measure as `set`.
///
/// Exact for a single cap; other sets are measured with `mc_budget` samples.
pub fn polar_cap(set: &SetExpr, d: Dimension, mc_budget: usize, seed: u64) -> Result<PolarCap> {
    set.check_dim(d)?;
    if let Some(c) = set.as_cap() {
        return Ok(PolarCap {
            cap: Cap::polar(d, c.radius())?,
            measure: MeasureEstimate::exact(c.measure()),
        });
    }
    if mc_budget == 0 {
        return Err(Error::InvalidArgument(
            "polar cap of a non-cap set needs a Monte Carlo budget".into(),
        ));
    }
    let measure = mc_measure(|x| set.contains(x), d, mc_budget, seed)?;
    let radius = cap_radius_from_measure(d, measure.mean)?;
    Ok(PolarCap {
        cap: Cap::polar(d, radius)?,
        measure,
    })
}

impl PolarizedSet {
    /// Polarization preserves measure, so `A*` is the polar cap of the base.
    pub fn polar_cap(&self, d: Dimension, mc_budget: usize, seed: u64) -> Result<PolarCap> {
        polar_cap(self.base(), d, mc_budget, seed)
    }
}
