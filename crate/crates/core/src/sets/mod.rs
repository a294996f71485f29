//! Sets on S^d: caps, finitely generated set expressions, and sets obtained
//! from them by a sequence of polarizations.

mod measure;
mod mc;
mod parse;

pub use measure::{
    cap_intersection_measure, cap_measure, cap_radius_from_measure, cap_symm_diff_measure,
    LENS_TOL,
};
pub use mc::{mc_measure, mc_symm_diff, polar_cap, MeasureEstimate, PolarCap};
pub use parse::parse_set;

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sphere::{Dimension, ReflectionAxis, SpherePoint};

/// Histories longer than this are refused by the membership oracle.
pub const DEFAULT_DEPTH_LIMIT: usize = 24;

/// Orbit points are memoized on a grid of this spacing per coordinate.
const MEMO_QUANTUM: f64 = 1e-9;

/// Closed spherical cap `{x : δ(x, center) <= radius}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cap {
    center: SpherePoint,
    radius: f64,
    cos_radius: f64,
}

impl Cap {
    pub fn new(center: SpherePoint, radius: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&radius) {
            return Err(Error::out_of_range("cap radius", radius, 0.0, PI));
        }
        Ok(Cap {
            center,
            radius,
            cos_radius: radius.cos(),
        })
    }

    pub fn hemisphere(center: SpherePoint) -> Self {
        Cap {
            center,
            radius: FRAC_PI_2,
            cos_radius: 0.0,
        }
    }

    /// The cap of the given radius centered at the north pole.
    pub fn polar(d: Dimension, radius: f64) -> Result<Self> {
        Cap::new(SpherePoint::north_pole(d), radius)
    }

    pub fn center(&self) -> &SpherePoint {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn dim(&self) -> Dimension {
        self.center.dim()
    }

    pub fn is_hemisphere(&self) -> bool {
        self.radius == FRAC_PI_2
    }

    /// Exact normalized volume.
    pub fn measure(&self) -> f64 {
        cap_measure(self.dim(), self.radius).expect("radius validated on construction")
    }

    /// Same cap moved to a new center.
    pub fn recentered(&self, center: SpherePoint) -> Cap {
        Cap {
            center,
            radius: self.radius,
            cos_radius: self.cos_radius,
        }
    }

    #[inline]
    pub fn contains(&self, x: &SpherePoint) -> bool {
        let dot: f64 = self
            .center
            .coords()
            .iter()
            .zip(x.coords())
            .map(|(a, b)| a * b)
            .sum();
        dot >= self.cos_radius
    }
}

/// Caller-supplied membership function with a label for reports.
#[derive(Clone)]
pub struct Predicate {
    label: String,
    f: Arc<dyn Fn(&SpherePoint) -> bool + Send + Sync>,
}

impl Predicate {
    pub fn new(label: impl Into<String>, f: impl Fn(&SpherePoint) -> bool + Send + Sync + 'static) -> Self {
        Predicate {
            label: label.into(),
            f: Arc::new(f),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Predicate({})", self.label)
    }
}

/// A set built from caps and predicates by union, intersection and complement.
#[derive(Debug, Clone)]
pub enum SetExpr {
    Cap(Cap),
    Union(Vec<SetExpr>),
    Inter(Vec<SetExpr>),
    Complement(Box<SetExpr>),
    Predicate(Predicate),
}

impl SetExpr {
    pub fn cap(cap: Cap) -> Self {
        SetExpr::Cap(cap)
    }

    pub fn complement(self) -> Self {
        SetExpr::Complement(Box::new(self))
    }

    pub fn contains(&self, x: &SpherePoint) -> bool {
        match self {
            SetExpr::Cap(c) => c.contains(x),
            SetExpr::Union(parts) => parts.iter().any(|p| p.contains(x)),
            SetExpr::Inter(parts) => parts.iter().all(|p| p.contains(x)),
            SetExpr::Complement(inner) => !inner.contains(x),
            SetExpr::Predicate(p) => (p.f)(x),
        }
    }

    pub fn as_cap(&self) -> Option<&Cap> {
        match self {
            SetExpr::Cap(c) => Some(c),
            _ => None,
        }
    }

    /// Checks that every cap in the tree lives on S^d.
    pub fn check_dim(&self, d: Dimension) -> Result<()> {
        match self {
            SetExpr::Cap(c) if c.dim() != d => Err(Error::DimensionMismatch {
                expected: d.ambient(),
                found: c.dim().ambient(),
            }),
            SetExpr::Union(parts) | SetExpr::Inter(parts) => {
                parts.iter().try_for_each(|p| p.check_dim(d))
            }
            SetExpr::Complement(inner) => inner.check_dim(d),
            _ => Ok(()),
        }
    }
}

impl From<Cap> for SetExpr {
    fn from(c: Cap) -> Self {
        SetExpr::Cap(c)
    }
}

/// `S_{U_n} ∘ ⋯ ∘ S_{U_1} A` for a base set `A` and axes `U_1, …, U_n`.
#[derive(Debug, Clone)]
pub struct PolarizedSet {
    base: SetExpr,
    history: Vec<ReflectionAxis>,
    depth_limit: usize,
}

impl PolarizedSet {
    pub fn new(base: SetExpr) -> Self {
        PolarizedSet {
            base,
            history: Vec::new(),
            depth_limit: DEFAULT_DEPTH_LIMIT,
        }
    }

    pub fn with_history(base: SetExpr, history: Vec<ReflectionAxis>) -> Self {
        PolarizedSet {
            base,
            history,
            depth_limit: DEFAULT_DEPTH_LIMIT,
        }
    }

    pub fn with_depth_limit(mut self, limit: usize) -> Self {
        self.depth_limit = limit;
        self
    }

    /// Applies one more polarization.
    pub fn polarize(&mut self, u: ReflectionAxis) {
        self.history.push(u);
    }

    pub fn base(&self) -> &SetExpr {
        &self.base
    }

    pub fn history(&self) -> &[ReflectionAxis] {
        &self.history
    }

    pub fn depth_limit(&self) -> usize {
        self.depth_limit
    }

    pub fn check_depth(&self) -> Result<()> {
        if self.history.len() > self.depth_limit {
            return Err(Error::DepthLimit {
                len: self.history.len(),
                limit: self.depth_limit,
            });
        }
        Ok(())
    }

    /// Membership of `x` in the polarized set.
    pub fn contains(&self, x: &SpherePoint) -> Result<bool> {
        self.contains_after(self.history.len(), x)
    }

    /// Membership of `x` in the set after the first `steps` polarizations.
    pub fn contains_after(&self, steps: usize, x: &SpherePoint) -> Result<bool> {
        self.check_depth()?;
        let steps = steps.min(self.history.len());
        if let Some(u) = self.history.first() {
            if u.coords().len() != x.coords().len() {
                return Err(Error::DimensionMismatch {
                    expected: u.coords().len(),
                    found: x.coords().len(),
                });
            }
        }
        if steps == 0 {
            return Ok(self.base.contains(x));
        }
        let mut memo = HashMap::new();
        Ok(self.member(steps, x, &mut memo))
    }

    // x ∈ S_u B iff (x closer or tie) && (x ∈ B || x̄ ∈ B)
    //           or (x̄ closer)       && (x ∈ B && x̄ ∈ B)
    fn member(&self, level: usize, x: &SpherePoint, memo: &mut HashMap<MemoKey, bool>) -> bool {
        if level == 0 {
            return self.base.contains(x);
        }
        let key = MemoKey::new(level, x);
        if let Some(&hit) = memo.get(&key) {
            return hit;
        }
        let u = &self.history[level - 1];
        let mut xbar = x.clone();
        u.reflect_in_place(&mut xbar);
        let or_branch = !u.brings_closer(x);

        // Resolve an already memoized operand first; either order is valid.
        let bar_known = memo.contains_key(&MemoKey::new(level - 1, &xbar));
        let (first, second) = if bar_known { (&xbar, x) } else { (x, &xbar) };
        let a = self.member(level - 1, first, memo);
        let result = if or_branch {
            a || self.member(level - 1, second, memo)
        } else {
            a && self.member(level - 1, second, memo)
        };
        memo.insert(key, result);
        result
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct MemoKey {
    level: usize,
    cell: Vec<i64>,
}

impl MemoKey {
    fn new(level: usize, x: &SpherePoint) -> Self {
        MemoKey {
            level,
            cell: x
                .coords()
                .iter()
                .map(|c| (c / MEMO_QUANTUM).round() as i64)
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::trial_rng;
    use crate::sphere::{sample_uniform_axis, sample_uniform_point};

    fn dim(d: usize) -> Dimension {
        Dimension::new(d).unwrap()
    }

    fn random_cap(d: Dimension, seed: u64) -> Cap {
        let mut rng = trial_rng(seed, 99);
        let c = sample_uniform_point(d, &mut rng);
        Cap::new(c, 0.9).unwrap()
    }

    #[test]
    fn cap_radius_validated() {
        let o = SpherePoint::north_pole(dim(2));
        assert!(Cap::new(o.clone(), -0.1).is_err());
        assert!(Cap::new(o.clone(), 3.5).is_err());
        assert!(Cap::new(o, PI).is_ok());
    }

    #[test]
    fn expression_membership() {
        let d = dim(2);
        let o = SpherePoint::north_pole(d);
        let a = Cap::new(o.clone(), 0.5).unwrap();
        let b = Cap::new(SpherePoint::at_polar_angle(d, 0.6), 0.5).unwrap();
        let p = SpherePoint::at_polar_angle(d, 0.3);
        let q = SpherePoint::at_polar_angle(d, 1.0);
        let u = SetExpr::Union(vec![a.clone().into(), b.clone().into()]);
        let i = SetExpr::Inter(vec![a.clone().into(), b.clone().into()]);
        assert!(u.contains(&p) && u.contains(&q));
        assert!(i.contains(&p) && !i.contains(&q));
        assert!(!SetExpr::from(a.clone()).complement().contains(&p));
        let pred = SetExpr::Predicate(Predicate::new("north", |x: &SpherePoint| x.height() > 0.0));
        assert!(pred.contains(&o));
        assert!(SetExpr::Union(vec![a.into(), pred]).check_dim(d).is_ok());
        assert!(SetExpr::from(b).check_dim(dim(3)).is_err());
    }

    #[test]
    fn empty_history_is_base() {
        let d = dim(3);
        let cap = random_cap(d, 1);
        let set = PolarizedSet::new(cap.clone().into());
        let mut rng = trial_rng(4, 0);
        for _ in 0..1000 {
            let x = sample_uniform_point(d, &mut rng);
            assert_eq!(set.contains(&x).unwrap(), cap.contains(&x));
        }
    }

    #[test]
    fn single_step_rule_cases() {
        // Both in ⇒ in, both out ⇒ out, regardless of which branch applies.
        let d = dim(2);
        let base: SetExpr = random_cap(d, 2).into();
        let mut rng = trial_rng(8, 0);
        let mut seen = [0usize; 2];
        for _ in 0..5000 {
            let u = sample_uniform_axis(d, &mut rng);
            let x = sample_uniform_point(d, &mut rng);
            let xb = u.reflect(&x).unwrap();
            let set = PolarizedSet::with_history(base.clone(), vec![u]);
            let (a, b) = (base.contains(&x), base.contains(&xb));
            let got = set.contains(&x).unwrap();
            if a && b {
                assert!(got);
                seen[0] += 1;
            } else if !a && !b {
                assert!(!got);
                seen[1] += 1;
            } else {
                // Exactly one of x, x̄ lands in S_u A: the one closer to O.
                let closer_is_x = x.polar_distance() <= xb.polar_distance();
                assert_eq!(got, closer_is_x);
                assert_eq!(set.contains(&xb).unwrap(), !closer_is_x);
            }
        }
        assert!(seen[0] > 0 && seen[1] > 0);
    }

    #[test]
    fn polarizing_polar_cap_is_identity() {
        let d = dim(3);
        let star: SetExpr = Cap::polar(d, 1.2).unwrap().into();
        let mut rng = trial_rng(12, 0);
        for _ in 0..2000 {
            let u = sample_uniform_axis(d, &mut rng);
            let x = sample_uniform_point(d, &mut rng);
            let set = PolarizedSet::with_history(star.clone(), vec![u]);
            assert_eq!(set.contains(&x).unwrap(), star.contains(&x));
        }
    }

    #[test]
    fn depth_limit_enforced() {
        let d = dim(2);
        let mut rng = trial_rng(3, 0);
        let axes: Vec<_> = (0..25).map(|_| sample_uniform_axis(d, &mut rng)).collect();
        let set = PolarizedSet::with_history(random_cap(d, 3).into(), axes);
        let x = SpherePoint::north_pole(d);
        assert_eq!(
            set.contains(&x),
            Err(Error::DepthLimit { len: 25, limit: 24 })
        );
        let set = set.with_depth_limit(30);
        assert!(set.contains(&x).is_ok());
    }

    #[test]
    fn mismatched_point_rejected() {
        let d = dim(2);
        let mut rng = trial_rng(3, 1);
        let set = PolarizedSet::with_history(
            random_cap(d, 4).into(),
            vec![sample_uniform_axis(d, &mut rng)],
        );
        assert!(set.contains(&SpherePoint::north_pole(dim(3))).is_err());
    }
}
