//! Random polarizations and compressions of subsets of the sphere `S^d`.
//!
//! A random reflection hyperplane through the origin either moves a set toward
//! the north pole or leaves it alone. Iterating the operation drives any
//! measurable set toward the polar cap of the same measure; this crate
//! simulates that process, computes exact laws for the one-step and
//! order-statistic comparison chains, and runs the convergence experiments.

pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod laws;
pub mod quadrature;
pub mod rng;
pub mod sets;
pub mod sphere;
pub mod stats;

pub use error::{Error, Result};
pub use sets::{Cap, PolarizedSet, SetExpr};
pub use sphere::{Dimension, ReflectionAxis, SpherePoint};
