//! Suspension flows over interval exchanges: hitting times, the flow map and
//! symmetric time averages along orbits.

use serde::{Deserialize, Serialize};

use crate::actions1d::IntervalExchange;
use crate::averages::{AverageSeries, Estimate, Observable};
use crate::error::{Error, Result};
use crate::group_core::circle_dist;

/// Bounded positive roof over the base interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Roof {
    Const { value: f64 },
    /// `a + b x`
    Affine { a: f64, b: f64 },
    /// One constant per exchanged interval; jumps only at breakpoints.
    Piecewise { values: Vec<f64> },
}

/// The suspension space over an interval exchange with a roof function.
#[derive(Debug, Clone)]
pub struct SuspensionSpace {
    base: IntervalExchange<f64>,
    roof: Roof,
}

/// A point `(x, y)` with `0 <= y < roof(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowPoint {
    pub x: f64,
    pub y: f64,
}

/// One vertical piece of an orbit: base point and fibre interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub x: f64,
    pub y0: f64,
    pub y1: f64,
}

impl SuspensionSpace {
    pub fn new(base: IntervalExchange<f64>, roof: Roof) -> Result<Self> {
        let (lo, hi) = match &roof {
            Roof::Const { value } => (*value, *value),
            Roof::Affine { a, b } => (a.min(a + b), a.max(a + b)),
            Roof::Piecewise { values } => {
                if values.len() != base.lengths().len() {
                    return Err(Error::Dimension {
                        expected: base.lengths().len(),
                        got: values.len(),
                    });
                }
                values
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)))
            }
        };
        if !(lo > 0.0 && hi.is_finite()) {
            return Err(Error::Invalid(format!("roof must be bounded and positive, range [{lo}, {hi}]")));
        }
        Ok(SuspensionSpace { base, roof })
    }

    pub fn base(&self) -> &IntervalExchange<f64> {
        &self.base
    }

    pub fn roof_fn(&self) -> &Roof {
        &self.roof
    }

    pub fn roof(&self, x: f64) -> f64 {
        match &self.roof {
            Roof::Const { value } => *value,
            Roof::Affine { a, b } => a + b * x,
            Roof::Piecewise { values } => values[self.base.interval_of(x)],
        }
    }

    /// `(inf roof, sup roof)`.
    pub fn roof_bounds(&self) -> (f64, f64) {
        match &self.roof {
            Roof::Const { value } => (*value, *value),
            Roof::Affine { a, b } => (a.min(a + b), a.max(a + b)),
            Roof::Piecewise { values } => values
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v))),
        }
    }

    pub fn check_point(&self, z: &FlowPoint) -> Result<()> {
        if !(0.0..1.0).contains(&z.x) || !(z.y >= 0.0 && z.y < self.roof(z.x)) {
            return Err(Error::Domain(format!("({}, {}) is outside the fundamental domain", z.x, z.y)));
        }
        Ok(())
    }
}

/// `τ_n(x)`, with `τ_0 = 0` and `τ_{n+1} = τ_n + roof(T^n x)`.
pub fn hitting_times(s: &SuspensionSpace, x: f64, n: i64) -> f64 {
    let t = s.base();
    let mut tau = 0.0;
    if n >= 0 {
        let mut p = x;
        for _ in 0..n {
            tau += s.roof(p);
            p = t.forward(p);
        }
    } else {
        let mut p = x;
        for _ in 0..(-n) {
            p = t.inverse(p);
            tau -= s.roof(p);
        }
    }
    tau
}

/// `f^t(z)`.
pub fn flow(s: &SuspensionSpace, z: FlowPoint, t: f64) -> FlowPoint {
    let base = s.base();
    let (mut x, mut y) = (z.x, z.y + t);
    if y >= 0.0 {
        loop {
            let r = s.roof(x);
            if y < r {
                break;
            }
            y -= r;
            x = base.forward(x);
        }
    } else {
        while y < 0.0 {
            x = base.inverse(x);
            y += s.roof(x);
        }
        let r = s.roof(x);
        if y >= r {
            y -= r;
            x = base.forward(x);
        }
    }
    FlowPoint { x, y }
}

/// Distance between flow points, accounting for the identification
/// `(x, roof(x)) ~ (T x, 0)`.
pub fn flow_distance(s: &SuspensionSpace, a: FlowPoint, b: FlowPoint) -> f64 {
    let direct = circle_dist(a.x, b.x) + (a.y - b.y).abs();
    let over = |p: FlowPoint, q: FlowPoint| {
        // p near the top, q near the bottom of the next fibre
        let px = s.base().forward(p.x);
        circle_dist(px, q.x) + (p.y - s.roof(p.x) - q.y).abs()
    };
    direct.min(over(a, b)).min(over(b, a))
}

/// Orbit pieces covering times `[-T, T]` around `z`, in time order.
pub fn segments(s: &SuspensionSpace, z: FlowPoint, big_t: f64) -> Vec<Segment> {
    let base = s.base();
    let mut back = Vec::new();
    // backwards from z
    let (mut x, mut y_top, mut left) = (z.x, z.y, big_t);
    loop {
        let take = y_top.min(left);
        if take > 0.0 {
            back.push(Segment {
                x,
                y0: y_top - take,
                y1: y_top,
            });
        }
        left -= take;
        if left <= 0.0 {
            break;
        }
        x = base.inverse(x);
        y_top = s.roof(x);
    }
    back.reverse();
    let (mut x, mut y_bot, mut left) = (z.x, z.y, big_t);
    loop {
        let r = s.roof(x);
        let take = (r - y_bot).min(left);
        if take > 0.0 {
            back.push(Segment {
                x,
                y0: y_bot,
                y1: y_bot + take,
            });
        }
        left -= take;
        if left <= 0.0 {
            break;
        }
        x = base.forward(x);
        y_bot = 0.0;
    }
    back
}

fn weighted_mean(psi: &Observable, segs: &[Segment], len: impl Fn(&Segment) -> f64) -> Estimate {
    let mut num = 0.0;
    let mut den = 0.0;
    for sg in segs {
        let l = len(sg);
        num += psi.eval(&[sg.x]) * l;
        den += l;
    }
    // Integrand is constant on each piece; only rounding remains.
    let error = 4.0 * f64::EPSILON * segs.len() as f64 * psi.sup_norm();
    Estimate {
        value: num / den,
        error,
    }
}

/// `(1/2T) ∫_{−T}^{T} ψ(f^t z) dt` for `ψ` depending on the base point.
pub fn time_average(s: &SuspensionSpace, psi: &Observable, z: FlowPoint, big_t: f64) -> Result<Estimate> {
    check_average_input(s, psi, &z, big_t)?;
    Ok(weighted_mean(psi, &segments(s, z, big_t), |sg| sg.y1 - sg.y0))
}

/// Mean of `ψ` over the leaf arc of length-radius `r` around `z`, measured by
/// arc length of the vertical pieces.
pub fn leaf_length_average(s: &SuspensionSpace, psi: &Observable, z: FlowPoint, r: f64) -> Result<Estimate> {
    check_average_input(s, psi, &z, r)?;
    Ok(weighted_mean(psi, &segments(s, z, r), |sg| {
        let (dx, dy) = (0.0f64, sg.y1 - sg.y0);
        dx.hypot(dy)
    }))
}

fn check_average_input(s: &SuspensionSpace, psi: &Observable, z: &FlowPoint, big_t: f64) -> Result<()> {
    if !(big_t > 0.0) {
        return Err(Error::Invalid(format!("averaging time must be positive, got {big_t}")));
    }
    psi.check_dim(1)?;
    s.check_point(z)
}

/// Time averages at `T = t0·2^j`, `j = 0..count`.
pub fn leaf_time_average_series(
    s: &SuspensionSpace,
    psi: &Observable,
    z: FlowPoint,
    t0: f64,
    count: usize,
) -> Result<AverageSeries> {
    let samples = (0..count)
        .map(|j| {
            let t = t0 * 2f64.powi(j as i32);
            time_average(s, psi, z, t).map(|e| (t, e.value, e.error))
        })
        .collect::<Result<Vec<_>>>()?;
    AverageSeries::with_quarter_window(samples)
}

/// Trajectory samples `(t, x, y)` on a uniform time grid.
pub fn trajectory_csv(s: &SuspensionSpace, z: FlowPoint, big_t: f64, steps: usize) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "x", "y"]).map_err(|e| Error::Parse(e.to_string()))?;
    for i in 0..=steps {
        let t = big_t * i as f64 / steps.max(1) as f64;
        let p = flow(s, z, t);
        w.serialize((t, p.x, p.y)).map_err(|e| Error::Parse(e.to_string()))?;
    }
    String::from_utf8(w.into_inner().map_err(|e| Error::Parse(e.to_string()))?)
        .map_err(|e| Error::Parse(e.to_string()))
}
