use std::sync::Arc;

use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group_core::{CircleIndex, ExactIndex, Gen, GroupAction, PointIndex};

/// Orientation-preserving homeomorphism of `R/Z` with an explicit inverse.
pub trait CircleMap: Send + Sync + std::fmt::Debug {
    fn forward(&self, x: f64) -> f64;
    fn inverse(&self, x: f64) -> f64;
}

/// `x ↦ x + α mod 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    pub alpha: f64,
}

pub fn make_rotation(alpha: f64) -> Rotation {
    Rotation { alpha }
}

fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(1.0);
    // rem_euclid can return 1.0 for tiny negative inputs
    if y >= 1.0 {
        0.0
    } else {
        y
    }
}

impl Rotation {
    pub fn apply_n(&self, x: f64, n: i64) -> f64 {
        wrap(x + n as f64 * self.alpha)
    }
}

impl CircleMap for Rotation {
    fn forward(&self, x: f64) -> f64 {
        wrap(x + self.alpha)
    }

    fn inverse(&self, x: f64) -> f64 {
        wrap(x - self.alpha)
    }
}

/// Finitely many circle maps acting as generators `a1, a2, …`.
#[derive(Debug, Clone)]
pub struct CircleAction {
    maps: Vec<Arc<dyn CircleMap>>,
}

impl CircleAction {
    pub fn new(maps: Vec<Arc<dyn CircleMap>>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::Invalid("an action needs at least one generator".into()));
        }
        Ok(CircleAction { maps })
    }

    pub fn rotation(alpha: f64) -> Self {
        CircleAction {
            maps: vec![Arc::new(make_rotation(alpha))],
        }
    }

    pub fn map(&self, i: usize) -> &Arc<dyn CircleMap> {
        &self.maps[i]
    }
}

impl GroupAction for CircleAction {
    type Point = f64;

    fn rank(&self) -> usize {
        self.maps.len()
    }

    fn act(&self, g: Gen, p: &f64) -> f64 {
        let m = &self.maps[g.index() - 1];
        if g.is_inverse() {
            m.inverse(*p)
        } else {
            m.forward(*p)
        }
    }

    fn check_point(&self, p: &f64) -> Result<()> {
        if !(0.0..1.0).contains(p) {
            return Err(Error::Domain(format!("{p} is not in [0,1)")));
        }
        Ok(())
    }

    fn new_index(&self, tol: f64) -> Box<dyn PointIndex<f64>> {
        Box::new(CircleIndex::new(tol))
    }
}

/// Rotation by a rational angle in exact arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalRotation {
    pub alpha: Rational64,
}

pub fn wrap_rational(x: Rational64) -> Rational64 {
    let f = x - x.floor();
    if f >= Rational64::one() {
        Rational64::zero()
    } else {
        f
    }
}

impl GroupAction for RationalRotation {
    type Point = Rational64;

    fn rank(&self) -> usize {
        1
    }

    fn act(&self, g: Gen, p: &Rational64) -> Rational64 {
        if g.is_inverse() {
            wrap_rational(*p - self.alpha)
        } else {
            wrap_rational(*p + self.alpha)
        }
    }

    fn check_point(&self, p: &Rational64) -> Result<()> {
        if *p < Rational64::zero() || *p >= Rational64::one() {
            return Err(Error::Domain(format!("{p} is not in [0,1)")));
        }
        Ok(())
    }

    fn new_index(&self, _tol: f64) -> Box<dyn PointIndex<Rational64>> {
        Box::new(ExactIndex::new())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_core::orbit_ball;

    #[test]
    fn rotation_basics() {
        let id = make_rotation(0.0);
        assert_eq!(id.forward(0.37), 0.37);
        let third = make_rotation(1.0 / 3.0);
        let x = (0..3).fold(0.2, |x, _| third.forward(x));
        assert!((x - 0.2).abs() < 1e-15);
        let r = make_rotation(2f64.sqrt() - 1.0);
        let v = r.apply_n(0.0, 100);
        assert!((v - (100.0 * (2f64.sqrt() - 1.0)).fract()).abs() < 1e-12);
    }

    #[test]
    fn orbit_sizes() {
        let exact = RationalRotation {
            alpha: Rational64::new(1, 3),
        };
        let b = orbit_ball(&exact, &Rational64::new(1, 7), 5, 0.0, 1000).unwrap();
        assert_eq!(b.size_at(5), 3);
        let float = CircleAction::rotation(1.0 / 3.0);
        let b = orbit_ball(&float, &0.1, 5, 1e-9, 1000).unwrap();
        assert_eq!(b.size_at(5), 3);
        let irr = CircleAction::rotation(2f64.sqrt() - 1.0);
        let b = orbit_ball(&irr, &0.0, 5, 1e-9, 1000).unwrap();
        assert_eq!(b.size_at(5), 10);
    }
}
