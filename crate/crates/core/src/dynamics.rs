//! The compression map and the motion of points and caps under random
//! polarization.
//!
//! Polarizing a cap centered at `a` yields the cap of the same radius
//! centered at the compression of `a`, so a cap's whole trajectory is the
//! compression chain of its center and costs O(n).

use rand::Rng;

use crate::error::{Error, Result};
use crate::sets::{cap_symm_diff_measure, Cap};
use crate::sphere::{sample_uniform_axis, Dimension, ReflectionAxis, SpherePoint};

/// `τ_u(x)`: whichever of `x`, `σ_u(x)` is closer to the north pole, `x` on ties.
pub fn compress(u: &ReflectionAxis, x: &SpherePoint) -> Result<SpherePoint> {
    let reflected = u.reflect(x)?;
    if x.polar_distance() <= reflected.polar_distance() {
        Ok(x.clone())
    } else {
        Ok(reflected)
    }
}

/// Whether a trajectory keeps every point or only the distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TrajectoryMode {
    #[default]
    Full,
    Lean,
}

/// A point being compressed step by step with fresh uniform axes.
#[derive(Debug, Clone)]
pub struct CompressionChain {
    point: SpherePoint,
    scratch: SpherePoint,
    distance: f64,
}

impl CompressionChain {
    pub fn new(x0: SpherePoint) -> Self {
        let distance = x0.polar_distance();
        CompressionChain {
            scratch: x0.clone(),
            point: x0,
            distance,
        }
    }

    pub fn point(&self) -> &SpherePoint {
        &self.point
    }

    /// Current `δ(x_k, O)`.
    pub fn distance(&self) -> f64 {
        self.distance
    }

    /// Compresses with the given axis and returns the new polar distance.
    pub fn step_with(&mut self, u: &ReflectionAxis) -> f64 {
        self.scratch.coords_mut().copy_from_slice(self.point.coords());
        u.reflect_in_place(&mut self.scratch);
        let reflected = self.scratch.polar_distance();
        if reflected < self.distance {
            std::mem::swap(&mut self.point, &mut self.scratch);
            self.distance = reflected;
        }
        self.distance
    }

    /// Compresses with a fresh uniform axis, returning it and the new distance.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> (ReflectionAxis, f64) {
        let u = sample_uniform_axis(self.point.dim(), rng);
        let delta = self.step_with(&u);
        (u, delta)
    }
}

/// `τ_{U_1…U_k}(x)` for `k = 0…n` with their distances to the north pole.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressionTrajectory {
    /// Empty in lean mode.
    pub points: Vec<SpherePoint>,
    /// Empty in lean mode.
    pub axes: Vec<ReflectionAxis>,
    pub geodesic_distances: Vec<f64>,
    pub chord_distances: Vec<f64>,
}

impl CompressionTrajectory {
    pub fn steps(&self) -> usize {
        self.geodesic_distances.len() - 1
    }
}

pub fn run_compression_chain<R: Rng + ?Sized>(
    x0: &SpherePoint,
    n: usize,
    rng: &mut R,
) -> CompressionTrajectory {
    run_compression_chain_with(x0, n, TrajectoryMode::Full, rng)
}

pub fn run_compression_chain_with<R: Rng + ?Sized>(
    x0: &SpherePoint,
    n: usize,
    mode: TrajectoryMode,
    rng: &mut R,
) -> CompressionTrajectory {
    let full = mode == TrajectoryMode::Full;
    let mut chain = CompressionChain::new(x0.clone());
    let mut traj = CompressionTrajectory {
        points: Vec::new(),
        axes: Vec::new(),
        geodesic_distances: Vec::with_capacity(n + 1),
        chord_distances: Vec::with_capacity(n + 1),
    };
    let record = |chain: &CompressionChain, traj: &mut CompressionTrajectory| {
        let delta = chain.distance();
        traj.geodesic_distances.push(delta);
        traj.chord_distances.push(2.0 * (delta / 2.0).sin());
        if full {
            traj.points.push(chain.point().clone());
        }
    };
    record(&chain, &mut traj);
    for _ in 0..n {
        let (u, _) = chain.step(rng);
        if full {
            traj.axes.push(u);
        }
        record(&chain, &mut traj);
    }
    traj
}

/// Caps `S_{U_1…U_k} A` for a cap `A`, `k = 0…n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CapTrajectory {
    pub radius: f64,
    pub dim: Dimension,
    pub centers: CompressionTrajectory,
}

impl CapTrajectory {
    /// The caps themselves; requires a full-mode trajectory.
    pub fn caps(&self) -> Vec<Cap> {
        self.centers
            .points
            .iter()
            .map(|c| Cap::new(c.clone(), self.radius).expect("radius validated"))
            .collect()
    }
}

pub fn run_cap_chain<R: Rng + ?Sized>(cap0: &Cap, n: usize, rng: &mut R) -> CapTrajectory {
    run_cap_chain_with(cap0, n, TrajectoryMode::Full, rng)
}

pub fn run_cap_chain_with<R: Rng + ?Sized>(
    cap0: &Cap,
    n: usize,
    mode: TrajectoryMode,
    rng: &mut R,
) -> CapTrajectory {
    CapTrajectory {
        radius: cap0.radius(),
        dim: cap0.dim(),
        centers: run_compression_chain_with(cap0.center(), n, mode, rng),
    }
}

/// `m(cap_k △ A*)` along a cap trajectory.
pub fn symm_diff_to_polar_cap(traj: &CapTrajectory) -> Result<Vec<f64>> {
    if traj.centers.geodesic_distances.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut out = Vec::with_capacity(traj.centers.geodesic_distances.len());
    let mut last: Option<(f64, f64)> = None;
    for &s in &traj.centers.geodesic_distances {
        // Centers stay put on most steps; reuse the last quadrature.
        let v = match last {
            Some((ls, lv)) if ls == s => lv,
            _ => cap_symm_diff_measure(traj.dim, traj.radius, s)?,
        };
        last = Some((s, v));
        out.push(v);
    }
    Ok(out)
}
