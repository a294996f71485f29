//! Exact (quadrature-based) measures of caps and of the symmetric difference
//! of two equal caps.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_with_breaks};
use crate::sphere::Dimension;

/// Absolute tolerance for lens (cap intersection) integrals.
pub const LENS_TOL: f64 = 1e-10;

// The cap integrand is analytic, so the tighter tolerance is nearly free and
// keeps the radius bisection well-conditioned.
const CAP_TOL: f64 = 1e-14;

fn check_angle(what: &'static str, v: f64) -> Result<()> {
    if !(0.0..=PI).contains(&v) {
        return Err(Error::out_of_range(what, v, 0.0, PI));
    }
    Ok(())
}

/// Normalized volume of a cap of geodesic radius `radius` on S^d.
pub fn cap_measure(d: Dimension, radius: f64) -> Result<f64> {
    check_angle("cap radius", radius)?;
    if radius == 0.0 {
        return Ok(0.0);
    }
    if radius == PI {
        return Ok(1.0);
    }
    if radius == FRAC_PI_2 {
        return Ok(0.5);
    }
    let k = d.get() as i32 - 1;
    if k == 0 {
        return Ok(radius / PI);
    }
    let r = integrate(|t: f64| t.sin().powi(k), 0.0, radius, CAP_TOL);
    Ok((r.value / d.polar_normalizer()).clamp(0.0, 1.0))
}

/// Inverse of [`cap_measure`] by bisection.
pub fn cap_radius_from_measure(d: Dimension, v: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::out_of_range("cap measure", v, 0.0, 1.0));
    }
    if v == 0.0 {
        return Ok(0.0);
    }
    if v == 1.0 {
        return Ok(PI);
    }
    if v == 0.5 {
        return Ok(FRAC_PI_2);
    }
    let (mut lo, mut hi) = (0.0f64, PI);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let m = cap_measure(d, mid)?;
        if (m - v).abs() < 1e-15 {
            return Ok(mid);
        }
        if m < v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `∫_0^φ sin^k t dt` by the reduction formula.
fn sin_power_partial(k: usize, phi: f64) -> f64 {
    match k {
        0 => phi,
        1 => 1.0 - phi.cos(),
        _ => {
            let kf = k as f64;
            -phi.sin().powi(k as i32 - 1) * phi.cos() / kf
                + (kf - 1.0) / kf * sin_power_partial(k - 2, phi)
        }
    }
}

/// Probability that `w·e >= t` for `w` uniform on S^{m} (m >= 0) and a fixed
/// unit vector `e`.
fn slice_fraction(m: usize, t: f64) -> f64 {
    if t <= -1.0 {
        return 1.0;
    }
    if t > 1.0 {
        return 0.0;
    }
    if m == 0 {
        // S^0 = {±e}.
        return 0.5;
    }
    let phi = t.clamp(-1.0, 1.0).acos();
    (sin_power_partial(m - 1, phi) / crate::sphere::sin_power_full(m - 1)).clamp(0.0, 1.0)
}

/// Measure of the intersection of two caps of radius `radius` whose centers
/// are `s` apart.
///
/// A point at angle `θ` from the first center lies in the second cap iff its
/// equatorial direction `w` satisfies `w·e >= (cos r - cos θ cos s)/(sin θ sin s)`;
/// the fraction of such directions is integrated over `θ ∈ [0, r]`.
pub fn cap_intersection_measure(d: Dimension, radius: f64, s: f64) -> Result<f64> {
    check_angle("cap radius", radius)?;
    check_angle("center distance", s)?;
    let full = cap_measure(d, radius)?;
    if s == 0.0 || radius == PI {
        return Ok(full);
    }
    if radius == 0.0 {
        return Ok(0.0);
    }
    if s >= PI - 1e-15 {
        // Antipodal centers: the band between the caps.
        return Ok((2.0 * full - 1.0).max(0.0));
    }
    if s >= 2.0 * radius {
        return Ok(0.0);
    }
    let k = d.get() as i32 - 1;
    let (cr, cs, ss) = (radius.cos(), s.cos(), s.sin());
    let integrand = |theta: f64| {
        let st = theta.sin();
        if st == 0.0 {
            return if theta + s <= radius { 1.0 } else { 0.0 };
        }
        let t = (cr - theta.cos() * cs) / (st * ss);
        st.powi(k) * slice_fraction(d.get() - 1, t)
    };
    // The slice is entirely inside for θ <= r - s and empty for θ < s - r.
    let mut points = vec![0.0, radius];
    for b in [radius - s, s - radius, 2.0 * PI - radius - s] {
        if b > 0.0 && b < radius {
            points.push(b);
        }
    }
    points.sort_by(f64::total_cmp);
    let r = integrate_with_breaks(integrand, &points, LENS_TOL * d.polar_normalizer());
    Ok((r.value / d.polar_normalizer()).clamp(0.0, full))
}

/// `m(C_1 △ C_2)` for caps of equal radius with centers `s` apart.
pub fn cap_symm_diff_measure(d: Dimension, radius: f64, s: f64) -> Result<f64> {
    check_angle("cap radius", radius)?;
    check_angle("center distance", s)?;
    if radius == FRAC_PI_2 {
        return Ok(s / PI);
    }
    let full = cap_measure(d, radius)?;
    let inter = cap_intersection_measure(d, radius, s)?;
    Ok((2.0 * (full - inter)).clamp(0.0, 1.0))
}
