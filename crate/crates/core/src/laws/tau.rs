//! Law of the polar distance after one random compression.
//!
//! For a point at polar distance `ξ`,
//!
//! ```text
//! P(δ(τ_U x, O) > β) = 1{ξ > β} · (1 - (1/π) ∫_0^β ((cos θ - cos β)/(cos θ - cos ξ))^{(d-1)/2} dθ)
//! ```
//!
//! The law has an atom of mass `1 - ξ/π` at `ξ` (the point is not moved).

use std::f64::consts::PI;

use rand::Rng;

use super::TailLaw;
use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::sphere::Dimension;

/// Absolute tolerance on the tail value.
pub const TAU_TOL: f64 = 1e-10;

/// Inverse-CDF bisection stops once the bracket is this narrow.
const SAMPLE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauLaw {
    d: Dimension,
    xi: f64,
}

impl TauLaw {
    /// `xi` is the polar distance of the point before compression.
    pub fn new(d: Dimension, xi: f64) -> Result<Self> {
        if !(xi > 0.0 && xi <= PI) {
            return Err(Error::out_of_range("xi", xi, 0.0, PI));
        }
        Ok(TauLaw { d, xi })
    }

    pub fn dim(&self) -> Dimension {
        self.d
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// Probability that the point stays at `ξ`.
    pub fn atom(&self) -> f64 {
        1.0 - self.xi / PI
    }
}

impl TailLaw for TauLaw {
    fn tail(&self, beta: f64) -> f64 {
        tau_tail(self, beta)
    }

    fn tail_closed(&self, beta: f64) -> f64 {
        if beta == self.xi {
            self.atom()
        } else {
            tau_tail(self, beta)
        }
    }
}

/// `(1/π) ∫_0^β ((cos θ - cos β)/(cos θ - cos ξ))^{(d-1)/2} dθ` for `0 <= β <= ξ`.
pub fn tau_integral_term(law: &TauLaw, beta: f64) -> f64 {
    let xi = law.xi;
    let beta = beta.clamp(0.0, xi);
    if beta == 0.0 {
        return 0.0;
    }
    let k = law.d.get() as i32 - 1;
    if k == 0 || beta == xi {
        return beta / PI;
    }
    // θ = β(1 - v²) turns the (β - θ)^{(d-1)/2} edge at θ = β into v^{d-1}.
    // Differences of cosines are taken in product form to keep them accurate
    // when θ approaches β or ξ.
    let integrand = |v: f64| {
        let gap = beta * v * v;
        let theta = beta - gap;
        let num = (0.5 * (beta + theta)).sin() * (0.5 * gap).sin();
        let den = (0.5 * (xi + theta)).sin() * (0.5 * (xi - theta)).sin();
        if den <= 0.0 {
            return 0.0;
        }
        (num / den).max(0.0).sqrt().powi(k) * 2.0 * beta * v
    };
    let r = integrate(integrand, 0.0, 1.0, TAU_TOL * PI);
    (r.value / PI).clamp(0.0, beta / PI)
}

/// `P(δ(τ_U x, O) > β)` for a point at polar distance `ξ`.
pub fn tau_tail(law: &TauLaw, beta: f64) -> f64 {
    if beta >= law.xi {
        return 0.0;
    }
    if beta <= 0.0 {
        return 1.0;
    }
    if law.d.get() == 1 {
        return 1.0 - beta / PI;
    }
    1.0 - tau_integral_term(law, beta)
}

/// Upper bound `(β/π)((1 - cos β)/(1 - cos ξ))^{(d-1)/2}` on the integral term.
pub fn tau_integral_bound(d: Dimension, xi: f64, beta: f64) -> Result<f64> {
    if !(0.0 <= beta && beta <= xi && xi <= PI) {
        return Err(Error::InvalidArgument(format!(
            "tau bound needs 0 <= beta <= xi <= pi, got beta = {beta}, xi = {xi}"
        )));
    }
    if beta == 0.0 {
        return Ok(0.0);
    }
    // (1 - cos β)/(1 - cos ξ) = (sin(β/2)/sin(ξ/2))^2
    let ratio = (beta / 2.0).sin() / (xi / 2.0).sin();
    Ok(beta / PI * ratio.powi(d.get() as i32 - 1))
}

/// Exact draw from the law: the atom at `ξ` is returned as exactly `ξ`, the
/// continuous part by bisection on the tail.
pub fn sample_tau_distance<R: Rng + ?Sized>(law: &TauLaw, rng: &mut R) -> f64 {
    let v: f64 = rng.random();
    if v <= law.atom() {
        return law.xi;
    }
    if law.d.get() == 1 {
        return PI * (1.0 - v);
    }
    // tail decreases from 1 at β = 0 to the atom mass just below ξ.
    let (mut lo, mut hi) = (0.0, law.xi);
    while hi - lo > SAMPLE_TOL {
        let mid = 0.5 * (lo + hi);
        if tau_tail(law, mid) > v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
