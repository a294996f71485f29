//! The `d`-th order statistic of uniforms on `[0, ℓ]` as a comparison chain.
//!
//! `Ỹ_n` is the `d`-th lowest of `V_1, …, V_{n+d}`. Given `Ỹ_0 = y`, the `d-1`
//! points below `y` are uniform on `[0, y]`, which yields the exact tail
//!
//! ```text
//! P(Ỹ_n > η | Ỹ_0 = y) = 1{y > η} Σ_{j+k<d} P(B(d-1, η/y) = j) P(B(n, η/ℓ) = k)
//! ```
//!
//! and a one-step transition with `P(Ỹ_{n+1} > η | Ỹ_n = y) = 1 - (η/ℓ)(η/y)^{d-1}`.

use rand::Rng;

use super::TailLaw;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderStatLaw {
    d: usize,
    ell: f64,
    y0: f64,
    n: usize,
}

impl OrderStatLaw {
    pub fn new(d: usize, ell: f64, y0: f64, n: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if !(ell > 0.0 && ell.is_finite()) {
            return Err(Error::InvalidArgument(format!("ell must be positive, got {ell}")));
        }
        if !(y0 > 0.0 && y0 <= ell) {
            return Err(Error::out_of_range("y0", y0, 0.0, ell));
        }
        Ok(OrderStatLaw { d, ell, y0, n })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }

    pub fn y0(&self) -> f64 {
        self.y0
    }

    pub fn steps(&self) -> usize {
        self.n
    }

    /// The same law after a different number of steps.
    pub fn at_step(&self, n: usize) -> Self {
        OrderStatLaw { n, ..*self }
    }

    /// Probability that `Ỹ_n` never left `y0`.
    pub fn atom(&self) -> f64 {
        binomial_pmf(self.n as u64, 0, self.y0 / self.ell)
    }

    /// `P(Ỹ_n > η)` without conditioning on `Ỹ_0`: fewer than `d` of `n + d`
    /// uniforms fall at or below `η`.
    pub fn unconditional_tail(&self, eta: f64) -> f64 {
        if eta <= 0.0 {
            return 1.0;
        }
        if eta >= self.ell {
            return 0.0;
        }
        let p = eta / self.ell;
        let m = (self.n + self.d) as u64;
        (0..self.d as u64).map(|k| binomial_pmf(m, k, p)).sum::<f64>().min(1.0)
    }
}

impl TailLaw for OrderStatLaw {
    fn tail(&self, eta: f64) -> f64 {
        if eta < 0.0 {
            return 1.0;
        }
        orderstat_exact_tail(self, eta).unwrap_or(0.0)
    }

    fn tail_closed(&self, eta: f64) -> f64 {
        if eta == self.y0 {
            self.atom()
        } else {
            self.tail(eta)
        }
    }
}

/// `P(B(n, p) = k)`; direct for small `n`, log-space otherwise.
pub fn binomial_pmf(n: u64, k: u64, p: f64) -> f64 {
    if k > n {
        return 0.0;
    }
    if p <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p >= 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    // C(n, k) with the smaller of k, n-k factors.
    let j = k.min(n - k);
    if n <= 60 {
        let mut c = 1.0;
        for i in 0..j {
            c = c * (n - i) as f64 / (i + 1) as f64;
        }
        return c * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32);
    }
    let ln_c: f64 = (0..j).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum();
    (ln_c + k as f64 * p.ln() + (n - k) as f64 * (-p).ln_1p()).exp()
}

/// `P(Ỹ_n > η | Ỹ_0 = y0)` by the binomial double sum.
pub fn orderstat_exact_tail(law: &OrderStatLaw, eta: f64) -> Result<f64> {
    if !(eta >= 0.0) {
        return Err(Error::out_of_range("eta", eta, 0.0, law.ell));
    }
    if eta >= law.y0 {
        return Ok(0.0);
    }
    if eta == 0.0 {
        return Ok(1.0);
    }
    let (p_old, p_new) = (eta / law.y0, eta / law.ell);
    let d = law.d as u64;
    let mut sum = 0.0;
    for j in 0..d {
        let pj = binomial_pmf(d - 1, j, p_old);
        for k in 0..(d - j) {
            sum += pj * binomial_pmf(law.n as u64, k, p_new);
        }
    }
    Ok(sum.clamp(0.0, 1.0))
}

fn kth_smallest(values: &mut [f64], k: usize) -> f64 {
    *values.select_nth_unstable_by(k, f64::total_cmp).1
}

/// The `d`-th smallest of `n + d` uniforms on `[0, ℓ]` (unconditioned).
pub fn sample_orderstat_direct<R: Rng + ?Sized>(law: &OrderStatLaw, rng: &mut R) -> f64 {
    let mut v: Vec<f64> = (0..law.n + law.d)
        .map(|_| rng.random::<f64>() * law.ell)
        .collect();
    kth_smallest(&mut v, law.d - 1)
}

/// Direct simulation conditioned on `Ỹ_0 = y0`: the first `d` points are `y0`
/// and `d - 1` uniforms on `[0, y0]`, followed by `n` uniforms on `[0, ℓ]`.
pub fn sample_orderstat_direct_given_start<R: Rng + ?Sized>(
    law: &OrderStatLaw,
    rng: &mut R,
) -> f64 {
    let mut v = Vec::with_capacity(law.n + law.d);
    v.push(law.y0);
    v.extend((1..law.d).map(|_| rng.random::<f64>() * law.y0));
    v.extend((0..law.n).map(|_| rng.random::<f64>() * law.ell));
    kth_smallest(&mut v, law.d - 1)
}

/// One transition of the comparison chain from `y`.
#[inline]
pub(crate) fn orderstat_step<R: Rng + ?Sized>(d: usize, ell: f64, y: f64, rng: &mut R) -> f64 {
    let v: f64 = rng.random();
    // Move with probability y/ℓ; the new value has CDF (η/y)^d on [0, y].
    if v < y / ell {
        y * (v * ell / y).powf(1.0 / d as f64)
    } else {
        y
    }
}

/// `(Ỹ_0 = y0, Ỹ_1, …, Ỹ_n)` by iterating the exact one-step transition.
pub fn sample_orderstat_chain<R: Rng + ?Sized>(law: &OrderStatLaw, rng: &mut R) -> Vec<f64> {
    let mut out = Vec::with_capacity(law.n + 1);
    let mut y = law.y0;
    out.push(y);
    for _ in 0..law.n {
        y = orderstat_step(law.d, law.ell, y, rng);
        out.push(y);
    }
    out
}

/// Final value `Ỹ_n` of the chain without storing the path.
pub fn sample_orderstat_chain_final<R: Rng + ?Sized>(law: &OrderStatLaw, rng: &mut R) -> f64 {
    (0..law.n).fold(law.y0, |y, _| orderstat_step(law.d, law.ell, y, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;
    use crate::rng::trial_rng;
    use crate::stats::ks_statistic;
    use std::f64::consts::PI;

    #[test]
    fn pmf_sums_and_paths() {
        for &(n, p) in &[(5u64, 0.3), (60, 0.01), (61, 0.2), (10_000, 0.0003), (200, 0.999)] {
            let s: f64 = (0..=n).map(|k| binomial_pmf(n, k, p)).sum();
            assert!((s - 1.0).abs() < 1e-10, "n={n} p={p} sum={s}");
        }
        // Both evaluation paths agree near the switch-over.
        let direct = {
            let mut c = 1.0;
            for i in 0..3u64 {
                c = c * (61 - i) as f64 / (i + 1) as f64;
            }
            c * 0.2f64.powi(3) * 0.8f64.powi(58)
        };
        assert!((binomial_pmf(61, 3, 0.2) - direct).abs() < 1e-15);
        assert_eq!(binomial_pmf(4, 0, 0.0), 1.0);
        assert_eq!(binomial_pmf(4, 4, 1.0), 1.0);
        assert_eq!(binomial_pmf(4, 5, 0.5), 0.0);
    }

    #[test]
    fn d1_single_term() {
        let l = OrderStatLaw::new(1, PI, 2.0, 7).unwrap();
        for eta in [0.0, 0.3, 1.0, 1.99, 2.0, 2.5] {
            let want = if eta < 2.0 { (1.0 - eta / PI).powi(7) } else { 0.0 };
            assert!((orderstat_exact_tail(&l, eta).unwrap() - want).abs() < 1e-15);
        }
        assert!(orderstat_exact_tail(&l, -0.1).is_err());
    }

    #[test]
    fn tail_at_zero_and_monotone() {
        for d in 1..=4 {
            for n in [0, 5, 100, 5000] {
                let l = OrderStatLaw::new(d, PI, 2.0, n).unwrap();
                assert_eq!(orderstat_exact_tail(&l, 0.0).unwrap(), 1.0);
                let mut prev = 1.0;
                for i in 0..=100 {
                    let t = orderstat_exact_tail(&l, 2.0 * i as f64 / 100.0).unwrap();
                    assert!(t <= prev + 1e-14);
                    prev = t;
                }
                // Left limit at y0 is the atom.
                let below = orderstat_exact_tail(&l, 2.0 * (1.0 - 1e-12)).unwrap();
                assert!((below - l.atom()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn law_validation() {
        assert!(OrderStatLaw::new(0, PI, 1.0, 3).is_err());
        assert!(OrderStatLaw::new(2, -1.0, 1.0, 3).is_err());
        assert!(OrderStatLaw::new(2, PI, 0.0, 3).is_err());
        assert!(OrderStatLaw::new(2, PI, 4.0, 3).is_err());
    }

    #[test]
    fn marginalizing_exact_tail_gives_unconditional() {
        // Ỹ_0 is the max of d uniforms on [0, ℓ], density d y^{d-1}/ℓ^d.
        let ell = PI;
        for d in 1..=3usize {
            for n in [0usize, 5, 20] {
                for eta in [0.1, 0.7, 2.0] {
                    let f = |y: f64| {
                        let l = OrderStatLaw::new(d, ell, y.max(1e-300), n).unwrap();
                        orderstat_exact_tail(&l, eta).unwrap() * d as f64 * y.powi(d as i32 - 1)
                            / ell.powi(d as i32)
                    };
                    let m = integrate(f, eta, ell, 1e-12).value;
                    let l = OrderStatLaw::new(d, ell, ell, n).unwrap();
                    assert!((m - l.unconditional_tail(eta)).abs() < 1e-9, "d={d} n={n} eta={eta}");
                }
            }
        }
    }

    #[test]
    fn direct_vs_brute_force_value() {
        // d=2, ℓ=π, y=π, n=10, η=0.3.
        let l = OrderStatLaw::new(2, PI, PI, 10).unwrap();
        let exact = orderstat_exact_tail(&l, 0.3).unwrap();
        let trials = 100_000;
        let mut rng = trial_rng(3, 0);
        let hits = (0..trials)
            .filter(|_| sample_orderstat_direct_given_start(&l, &mut rng) > 0.3)
            .count();
        let p = hits as f64 / trials as f64;
        assert!((p - exact).abs() < 4.0 * (exact * (1.0 - exact) / trials as f64).sqrt());
    }

    #[test]
    fn direct_unconditional_matches() {
        let mut rng = trial_rng(4, 0);
        for d in 1..=3 {
            let l = OrderStatLaw::new(d, PI, PI, 20).unwrap();
            let draws: Vec<f64> = (0..50_000).map(|_| sample_orderstat_direct(&l, &mut rng)).collect();
            assert!(draws.iter().all(|&x| (0.0..=PI).contains(&x)));
            let ks = ks_statistic(&draws, &super::super::TailFn(|e| l.unconditional_tail(e))).unwrap();
            assert!(ks < 0.02, "d={d} ks={ks}");
        }
        let l = OrderStatLaw::new(1, 2.0, 2.0, 0).unwrap();
        let draws: Vec<f64> = (0..50_000).map(|_| sample_orderstat_direct(&l, &mut rng)).collect();
        let ks = ks_statistic(&draws, &super::super::Uniform { lo: 0.0, hi: 2.0 }).unwrap();
        assert!(ks < 0.02);
    }

    #[test]
    fn chain_stay_probability_and_monotone() {
        let mut rng = trial_rng(5, 0);
        let (d, ell, y) = (3, PI, 1.2);
        let n = 100_000;
        let stays = (0..n)
            .filter(|_| orderstat_step(d, ell, y, &mut rng) == y)
            .count() as f64
            / n as f64;
        let want = 1.0 - y / ell;
        assert!((stays - want).abs() < 4.0 * (want * (1.0 - want) / n as f64).sqrt());
        let l = OrderStatLaw::new(2, PI, 2.0, 50).unwrap();
        for _ in 0..200 {
            let path = sample_orderstat_chain(&l, &mut rng);
            assert_eq!(path.len(), 51);
            assert_eq!(path[0], 2.0);
            for w in path.windows(2) {
                assert!(w[1] <= w[0]);
            }
        }
    }

    #[test]
    fn chain_marginal_matches_exact() {
        let l = OrderStatLaw::new(2, PI, 2.0, 20).unwrap();
        let mut rng = trial_rng(6, 0);
        let draws: Vec<f64> = (0..100_000).map(|_| sample_orderstat_chain_final(&l, &mut rng)).collect();
        let ks = ks_statistic(&draws, &l).unwrap();
        assert!(ks < 0.02, "ks={ks}");
    }
}
