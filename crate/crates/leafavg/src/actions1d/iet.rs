use std::fmt::Debug;

use num_rational::Rational64;
use num_traits::{Num, One, Zero};

use crate::error::{Error, Result};
use crate::group_core::{CircleIndex, ExactIndex, Gen, GroupAction, PointIndex};

/// Scalars an interval exchange can run on: `f64` or exact rationals.
pub trait IetScalar: Num + Copy + PartialOrd + Debug {}
impl IetScalar for f64 {}
impl IetScalar for Rational64 {}

/// Interval exchange on `[0, 1)`. Interval `i` (0-based) moves to position
/// `perm[i]` (1-based) of the image.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalExchange<S: IetScalar> {
    lengths: Vec<S>,
    perm: Vec<usize>,
    starts: Vec<S>,
    image_starts: Vec<S>,
}

impl<S: IetScalar> IntervalExchange<S> {
    pub fn new(lengths: Vec<S>, perm: Vec<usize>, sum_tol: S) -> Result<Self> {
        let m = lengths.len();
        if m == 0 || perm.len() != m {
            return Err(Error::Invalid("lengths and permutation must have equal positive size".into()));
        }
        if lengths.iter().any(|l| !(*l > S::zero())) {
            return Err(Error::Invalid("interval lengths must be positive".into()));
        }
        let mut seen = vec![false; m];
        for &p in &perm {
            if p == 0 || p > m || seen[p - 1] {
                return Err(Error::Invalid(format!("{perm:?} is not a permutation of 1..={m}")));
            }
            seen[p - 1] = true;
        }
        let total = lengths.iter().fold(S::zero(), |a, &b| a + b);
        let diff = if total > S::one() {
            total - S::one()
        } else {
            S::one() - total
        };
        if diff > sum_tol {
            return Err(Error::Invalid("interval lengths must sum to 1".into()));
        }
        let starts = prefix(&lengths);
        // position -> interval
        let mut by_pos = vec![0; m];
        for (i, &p) in perm.iter().enumerate() {
            by_pos[p - 1] = i;
        }
        let ordered: Vec<S> = by_pos.iter().map(|&i| lengths[i]).collect();
        let pos_starts = prefix(&ordered);
        let image_starts = (0..m).map(|i| pos_starts[perm[i] - 1]).collect();
        Ok(IntervalExchange {
            lengths,
            perm,
            starts,
            image_starts,
        })
    }

    pub fn lengths(&self) -> &[S] {
        &self.lengths
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// Left endpoints of the intervals; the breakpoints of `T`.
    pub fn breakpoints(&self) -> &[S] {
        &self.starts
    }

    pub fn image_starts(&self) -> &[S] {
        &self.image_starts
    }

    pub fn interval_of(&self, x: S) -> usize {
        let i = self.starts.partition_point(|s| *s <= x);
        i.max(1) - 1
    }

    pub fn forward(&self, x: S) -> S {
        let i = self.interval_of(x);
        clamp_unit(x - self.starts[i] + self.image_starts[i])
    }

    pub fn inverse(&self, y: S) -> S {
        // the image interval containing y starts at the largest image start <= y
        let best = (0..self.lengths.len())
            .filter(|&i| self.image_starts[i] <= y)
            .fold(None, |b: Option<usize>, i| match b {
                Some(j) if self.image_starts[j] >= self.image_starts[i] => Some(j),
                _ => Some(i),
            })
            .unwrap_or(0);
        clamp_unit(y - self.image_starts[best] + self.starts[best])
    }

    pub fn apply(&self, x: S, n: i64) -> Result<S> {
        if x < S::zero() || x >= S::one() {
            return Err(Error::Domain(format!("{x:?} is not in [0,1)")));
        }
        let mut y = x;
        if n >= 0 {
            for _ in 0..n {
                y = self.forward(y);
            }
        } else {
            for _ in 0..(-n) {
                y = self.inverse(y);
            }
        }
        Ok(y)
    }
}

fn prefix<S: IetScalar>(v: &[S]) -> Vec<S> {
    let mut acc = S::zero();
    v.iter()
        .map(|&l| {
            let s = acc;
            acc = acc + l;
            s
        })
        .collect()
}

fn clamp_unit<S: IetScalar>(x: S) -> S {
    if x < S::zero() {
        S::zero()
    } else if x >= S::one() {
        x - S::one()
    } else {
        x
    }
}

pub fn iet_apply<S: IetScalar>(t: &IntervalExchange<S>, x: S, n: i64) -> Result<S> {
    t.apply(x, n)
}

impl GroupAction for IntervalExchange<f64> {
    type Point = f64;

    fn rank(&self) -> usize {
        1
    }

    fn act(&self, g: Gen, p: &f64) -> f64 {
        if g.is_inverse() {
            self.inverse(*p)
        } else {
            self.forward(*p)
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

impl GroupAction for IntervalExchange<Rational64> {
    type Point = Rational64;

    fn rank(&self) -> usize {
        1
    }

    fn act(&self, g: Gen, p: &Rational64) -> Rational64 {
        if g.is_inverse() {
            self.inverse(*p)
        } else {
            self.forward(*p)
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

/// Two intervals `(β, 1−β)` swapped: rotation by `1 − β`.
pub fn two_interval(beta: f64) -> Result<IntervalExchange<f64>> {
    IntervalExchange::new(vec![beta, 1.0 - beta], vec![2, 1], 1e-12)
}

/// Uniquely ergodic control: rotation by `√2 − 1`.
pub fn preset_rotation() -> IntervalExchange<f64> {
    two_interval(2.0 - 2f64.sqrt()).expect("valid preset")
}

/// Four intervals with rationally independent lengths, order reversed.
pub fn preset_four_interval() -> IntervalExchange<f64> {
    let raw = [1.0, 2f64.sqrt(), 3f64.sqrt(), 5f64.sqrt()];
    let total: f64 = raw.iter().sum();
    let mut lengths: Vec<f64> = raw.iter().map(|l| l / total).collect();
    let head: f64 = lengths[..3].iter().sum();
    lengths[3] = 1.0 - head;
    IntervalExchange::new(lengths, vec![4, 3, 2, 1], 1e-12).expect("valid preset")
}

/// Two invariant halves, each carrying its own irrational rotation.
pub fn preset_reducible() -> IntervalExchange<f64> {
    let a = (2f64.sqrt() - 1.0) / 4.0;
    let b = (3f64.sqrt() - 1.0) / 4.0;
    IntervalExchange::new(vec![a, 0.5 - a, b, 0.5 - b], vec![2, 1, 4, 3], 1e-12).expect("valid preset")
}
