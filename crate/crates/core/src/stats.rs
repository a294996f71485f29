//! Sample summaries and Kolmogorov–Smirnov distances.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::laws::TailLaw;

/// Sample mean with its standard error (sample standard deviation over `√n`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: u64,
}

impl MeanEstimate {
    /// Half-width of a normal interval with `z` standard errors.
    pub fn half_width(&self, z: f64) -> f64 {
        z * self.std_error
    }
}

/// Running first and second moments, mergeable across blocks.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Chan et al. pairwise combination.
    pub fn merge(&mut self, other: &Moments) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        self.mean += delta * other.n as f64 / n as f64;
        self.m2 += other.m2 + delta * delta * (self.n as f64 * other.n as f64) / n as f64;
        self.n = n;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn estimate(&self) -> MeanEstimate {
        let var = if self.n > 1 {
            (self.m2 / (self.n - 1) as f64).max(0.0)
        } else {
            0.0
        };
        MeanEstimate {
            mean: self.mean,
            std_error: if self.n > 0 { (var / self.n as f64).sqrt() } else { 0.0 },
            n: self.n,
        }
    }
}

pub fn mean_ci(samples: &[f64]) -> Result<MeanEstimate> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut m = Moments::default();
    samples.iter().for_each(|&x| m.push(x));
    Ok(m.estimate())
}

/// Empirical distribution function of a sample.
#[derive(Debug, Clone)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn new(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyInput);
        }
        if samples.iter().any(|x| x.is_nan()) {
            return Err(Error::InvalidArgument("sample contains NaN".into()));
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Ecdf { sorted })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of the sample `<= x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }

    /// Fraction of the sample `< x`.
    pub fn eval_left(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v < x) as f64 / self.sorted.len() as f64
    }
}

/// `sup_x |F_n(x) - F(x)|` against a law that may have atoms.
///
/// Both distribution functions are step-compatible: the supremum is attained
/// at a sample value, either at it or just to its left.
pub fn ks_statistic<L: TailLaw + ?Sized>(samples: &[f64], law: &L) -> Result<f64> {
    let ecdf = Ecdf::new(samples)?;
    let s = ecdf.sorted();
    let n = s.len() as f64;
    let mut sup: f64 = 0.0;
    let mut i = 0;
    while i < s.len() {
        let x = s[i];
        let mut j = i;
        while j < s.len() && s[j] == x {
            j += 1;
        }
        let below = i as f64 / n;
        let upto = j as f64 / n;
        sup = sup
            .max((law.cdf_left(x) - below).abs())
            .max((law.cdf(x) - upto).abs());
        i = j;
    }
    Ok(sup)
}

/// Two-sample KS distance; ties across samples are handled by stepping over
/// each distinct value at once.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    let ea = Ecdf::new(a)?;
    let eb = Ecdf::new(b)?;
    let (sa, sb) = (ea.sorted(), eb.sorted());
    let (na, nb) = (sa.len() as f64, sb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut sup: f64 = 0.0;
    while i < sa.len() || j < sb.len() {
        let x = match (sa.get(i), sb.get(j)) {
            (Some(&u), Some(&v)) => u.min(v),
            (Some(&u), None) => u,
            (None, Some(&v)) => v,
            (None, None) => break,
        };
        while i < sa.len() && sa[i] == x {
            i += 1;
        }
        while j < sb.len() && sb[j] == x {
            j += 1;
        }
        sup = sup.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(sup)
}

/// Asymptotic two-sided KS critical value `c(α)/√n` (e.g. α = 0.05 gives 1.358/√n).
pub fn ks_critical_value(n: usize, alpha: f64) -> f64 {
    (-0.5 * (alpha / 2.0).ln()).sqrt() / (n as f64).sqrt()
}
