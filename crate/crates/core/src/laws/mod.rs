//! Distribution laws of the compressed distance, of the order-statistic
//! comparison chain, and of their Gamma limit.
//!
//! Every law is exposed through [`TailLaw`], which is what the KS machinery
//! in [`crate::stats`] consumes.

mod gamma;
mod orderstat;
mod tau;

pub use gamma::{gamma_tail, GammaLaw};
pub use orderstat::{
    binomial_pmf, orderstat_exact_tail, sample_orderstat_chain, sample_orderstat_chain_final,
    sample_orderstat_direct,
    sample_orderstat_direct_given_start, OrderStatLaw,
};
pub use tau::{sample_tau_distance, tau_integral_bound, tau_integral_term, tau_tail, TauLaw, TAU_TOL};

/// A real law described by its tail `P(X > x)`.
pub trait TailLaw {
    /// `P(X > x)`.
    fn tail(&self, x: f64) -> f64;

    /// `P(X >= x)`; differs from [`TailLaw::tail`] only at atoms.
    fn tail_closed(&self, x: f64) -> f64 {
        self.tail(x)
    }

    fn cdf(&self, x: f64) -> f64 {
        1.0 - self.tail(x)
    }

    /// `P(X < x)`.
    fn cdf_left(&self, x: f64) -> f64 {
        1.0 - self.tail_closed(x)
    }
}

impl<L: TailLaw + ?Sized> TailLaw for &L {
    fn tail(&self, x: f64) -> f64 {
        (**self).tail(x)
    }
    fn tail_closed(&self, x: f64) -> f64 {
        (**self).tail_closed(x)
    }
}

/// Law of `scale · X`.
#[derive(Debug, Clone, Copy)]
pub struct Scaled<L> {
    pub inner: L,
    pub scale: f64,
}

impl<L: TailLaw> TailLaw for Scaled<L> {
    fn tail(&self, x: f64) -> f64 {
        self.inner.tail(x / self.scale)
    }
    fn tail_closed(&self, x: f64) -> f64 {
        self.inner.tail_closed(x / self.scale)
    }
}

/// A continuous law given by a tail closure.
pub struct TailFn<F>(pub F);

impl<F: Fn(f64) -> f64> TailLaw for TailFn<F> {
    fn tail(&self, x: f64) -> f64 {
        (self.0)(x)
    }
}

/// Uniform law on `[lo, hi]`.
#[derive(Debug, Clone, Copy)]
pub struct Uniform {
    pub lo: f64,
    pub hi: f64,
}

impl TailLaw for Uniform {
    fn tail(&self, x: f64) -> f64 {
        ((self.hi - x) / (self.hi - self.lo)).clamp(0.0, 1.0)
    }
}
