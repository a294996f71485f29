//! Geometry and sampling on the unit sphere S^d in R^{d+1}.
//!
//! The north pole is the last coordinate axis, so the polar distance of a
//! point is a function of its last coordinate alone.

use std::f64::consts::PI;
use std::fmt;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the Euclidean norm of points and axes.
pub const UNIT_TOL: f64 = 1e-12;

/// Sphere dimension `d >= 1`; points live in R^{d+1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dimension(usize);

impl Dimension {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension(d));
        }
        Ok(Dimension(d))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }

    /// Number of coordinates of a point, `d + 1`.
    #[inline]
    pub fn ambient(self) -> usize {
        self.0 + 1
    }

    /// `∫_0^π sin^{d-1} θ dθ`, the normalizer of the polar-angle density.
    pub fn polar_normalizer(self) -> f64 {
        sin_power_full(self.0 - 1)
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `∫_0^π sin^k θ dθ` by the Wallis recurrence.
pub(crate) fn sin_power_full(k: usize) -> f64 {
    let (mut v, start) = if k % 2 == 0 { (PI, 0) } else { (2.0, 1) };
    let mut j = start + 2;
    while j <= k {
        v *= (j - 1) as f64 / j as f64;
        j += 2;
    }
    v
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(mut v: Vec<f64>) -> Result<Vec<f64>> {
    let n = norm(&v);
    if !n.is_finite() || n == 0.0 {
        return Err(Error::Singular("vector has zero or non-finite norm"));
    }
    v.iter_mut().for_each(|c| *c /= n);
    Ok(v)
}

/// A unit vector in R^{d+1}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    coords: Vec<f64>,
}

impl SpherePoint {
    /// Builds a point from coordinates, renormalizing onto the sphere.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidDimension(coords.len().saturating_sub(1)));
        }
        Ok(SpherePoint {
            coords: normalize(coords)?,
        })
    }

    /// The north pole `O = (0, …, 0, 1)`.
    pub fn north_pole(d: Dimension) -> Self {
        let mut coords = vec![0.0; d.ambient()];
        coords[d.get()] = 1.0;
        SpherePoint { coords }
    }

    /// The point at polar angle `theta` from the pole in the plane of the
    /// first and last coordinate axes.
    pub fn at_polar_angle(d: Dimension, theta: f64) -> Self {
        let mut coords = vec![0.0; d.ambient()];
        coords[0] = theta.sin();
        coords[d.get()] = theta.cos();
        SpherePoint { coords }
    }

    /// Hyperspherical coordinates: `angles[0]` is the polar angle from the
    /// north pole, the remaining angles place the point on the equatorial
    /// S^{d-1} in the usual nested way. Missing trailing angles are zero.
    pub fn from_angles(d: Dimension, angles: &[f64]) -> Result<Self> {
        if angles.len() > d.get() {
            return Err(Error::InvalidArgument(format!(
                "{} angles given for a point on S^{}",
                angles.len(),
                d
            )));
        }
        let mut a = angles.to_vec();
        a.resize(d.get(), 0.0);
        let mut coords = vec![0.0; d.ambient()];
        coords[d.get()] = a[0].cos();
        // Equatorial direction on S^{d-1} from angles a[1..].
        let mut scale = a[0].sin();
        for (i, &phi) in a[1..].iter().enumerate() {
            coords[i] = scale * phi.cos();
            scale *= phi.sin();
        }
        coords[d.get() - 1] = scale;
        SpherePoint::new(coords)
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> Dimension {
        Dimension(self.coords.len() - 1)
    }

    /// Coordinate along the north pole.
    #[inline]
    pub fn height(&self) -> f64 {
        self.coords[self.coords.len() - 1]
    }

    pub fn antipode(&self) -> Self {
        SpherePoint {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn dot(&self, other: &SpherePoint) -> Result<f64> {
        check_same(self.coords.len(), other.coords.len())?;
        Ok(dot(&self.coords, &other.coords))
    }

    /// `δ(x, O)`.
    pub fn polar_distance(&self) -> f64 {
        let n = self.coords.len() - 1;
        let side: f64 = self.coords[..n].iter().map(|c| c * c).sum();
        let below = self.coords[n] - 1.0;
        let above = self.coords[n] + 1.0;
        angle_from_chords((side + below * below).sqrt(), (side + above * above).sqrt())
    }

    /// `|x - O|`.
    pub fn polar_chord(&self) -> f64 {
        2.0 * (self.polar_distance() / 2.0).sin()
    }

    pub(crate) fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.coords
    }

    pub(crate) fn renormalize(&mut self) {
        let n = norm(&self.coords);
        self.coords.iter_mut().for_each(|c| *c /= n);
    }
}

/// Angle between unit vectors from `|x - y|` and `|x + y|`; accurate at
/// both ends of `[0, π]`, unlike `acos` of the dot product.
#[inline]
fn angle_from_chords(minus: f64, plus: f64) -> f64 {
    2.0 * minus.atan2(plus)
}

fn check_same(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Reflection axis `u ∈ S^d/±`, stored with its first nonzero coordinate
/// positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReflectionAxis {
    u: Vec<f64>,
}

impl ReflectionAxis {
    pub fn new(u: Vec<f64>) -> Result<Self> {
        if u.len() < 2 {
            return Err(Error::InvalidDimension(u.len().saturating_sub(1)));
        }
        let mut u = normalize(u)?;
        canonicalize(&mut u);
        Ok(ReflectionAxis { u })
    }

    pub fn from_point(p: &SpherePoint) -> Self {
        let mut u = p.coords.clone();
        canonicalize(&mut u);
        ReflectionAxis { u }
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.u
    }

    pub fn dim(&self) -> Dimension {
        Dimension(self.u.len() - 1)
    }

    /// `σ_u(x) = x - 2 (u·x) u`.
    pub fn reflect(&self, x: &SpherePoint) -> Result<SpherePoint> {
        check_same(self.u.len(), x.coords.len())?;
        let mut out = x.clone();
        self.reflect_in_place(&mut out);
        Ok(out)
    }

    /// Reflects `x` in place. Dimensions must already agree.
    pub(crate) fn reflect_in_place(&self, x: &mut SpherePoint) {
        let k = 2.0 * dot(&self.u, &x.coords);
        for (c, u) in x.coords.iter_mut().zip(&self.u) {
            *c -= k * u;
        }
        x.renormalize();
    }

    /// True when `σ_u(x)` is strictly closer to the north pole than `x`.
    ///
    /// The height of `σ_u(x)` exceeds that of `x` by `-2 (u·x) u_last`, so the
    /// comparison of polar distances reduces to a sign test.
    #[inline]
    pub fn brings_closer(&self, x: &SpherePoint) -> bool {
        dot(&self.u, &x.coords) * self.u[self.u.len() - 1] < 0.0
    }
}

fn canonicalize(u: &mut [f64]) {
    if let Some(&first) = u.iter().find(|c| **c != 0.0) {
        if first < 0.0 {
            u.iter_mut().for_each(|c| *c = -*c);
        }
    }
}

/// `δ(x, y)`, the angle between `x` and `y`, in `[0, π]`.
pub fn geodesic_distance(x: &SpherePoint, y: &SpherePoint) -> Result<f64> {
    check_same(x.coords.len(), y.coords.len())?;
    let mut minus = 0.0;
    let mut plus = 0.0;
    for (a, b) in x.coords.iter().zip(&y.coords) {
        minus += (a - b) * (a - b);
        plus += (a + b) * (a + b);
    }
    Ok(angle_from_chords(minus.sqrt(), plus.sqrt()))
}

/// `|x - y|`, the Euclidean distance in R^{d+1}.
pub fn chord_distance(x: &SpherePoint, y: &SpherePoint) -> Result<f64> {
    check_same(x.coords.len(), y.coords.len())?;
    Ok(x.coords
        .iter()
        .zip(&y.coords)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt())
}

pub fn reflect(u: &ReflectionAxis, x: &SpherePoint) -> Result<SpherePoint> {
    u.reflect(x)
}

/// A uniformly distributed point on S^d (normalized standard Gaussian).
pub fn sample_uniform_point<R: Rng + ?Sized>(d: Dimension, rng: &mut R) -> SpherePoint {
    loop {
        let v: Vec<f64> = (0..d.ambient()).map(|_| rng.sample(StandardNormal)).collect();
        if let Ok(p) = SpherePoint::new(v) {
            return p;
        }
    }
}

/// A uniformly distributed reflection axis on S^d/±.
pub fn sample_uniform_axis<R: Rng + ?Sized>(d: Dimension, rng: &mut R) -> ReflectionAxis {
    ReflectionAxis::from_point(&sample_uniform_point(d, rng))
}

/// Density of `σ_U(x)` at `z` with respect to the uniform probability measure:
/// `|x - z|^{-(d-1)}`.
pub fn reflected_point_density(d: Dimension, x: &SpherePoint, z: &SpherePoint) -> Result<f64> {
    check_same(d.ambient(), x.coords.len())?;
    let chord = chord_distance(x, z)?;
    let k = (d.get() - 1) as i32;
    if k == 0 {
        return Ok(1.0);
    }
    if chord == 0.0 {
        return Err(Error::Singular("reflected-point density is unbounded at z = x"));
    }
    Ok(chord.powi(-k))
}

/// Density of `δ(x, σ_U(x))` on `[0, π]`: `cos^{d-1}(δ/2) / ∫_0^π sin^{d-1}`.
pub fn reflected_distance_density(d: Dimension, delta: f64) -> f64 {
    if !(0.0..=PI).contains(&delta) {
        return 0.0;
    }
    (delta / 2.0).cos().powi(d.get() as i32 - 1) / d.polar_normalizer()
}
