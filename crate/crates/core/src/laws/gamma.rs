use super::TailLaw;
use crate::error::{Error, Result};

/// Gamma law with integer shape `d` and unit rate: the arrival time of the
/// `d`-th point of a unit-rate Poisson process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaLaw {
    shape: usize,
}

impl GammaLaw {
    pub fn new(shape: usize) -> Result<Self> {
        if shape == 0 {
            return Err(Error::InvalidArgument("gamma shape must be at least 1".into()));
        }
        Ok(GammaLaw { shape })
    }

    pub fn shape(&self) -> usize {
        self.shape
    }

    pub fn mean(&self) -> f64 {
        self.shape as f64
    }
}

impl TailLaw for GammaLaw {
    fn tail(&self, s: f64) -> f64 {
        gamma_tail(self, s)
    }
}

/// `P(Γ(d) > s) = Σ_{k<d} e^{-s} s^k / k!`.
pub fn gamma_tail(law: &GammaLaw, s: f64) -> f64 {
    if s <= 0.0 {
        return 1.0;
    }
    let mut term = (-s).exp();
    let mut sum = term;
    for k in 1..law.shape {
        term *= s / k as f64;
        sum += term;
    }
    sum.min(1.0)
}
