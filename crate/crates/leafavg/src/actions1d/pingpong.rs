use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::actions1d::circle::{CircleAction, CircleMap};
use crate::error::{Error, Result};
use crate::tolerances::PINGPONG_MARGIN;

/// Open arc `(start, end)` of `R/Z`, stored as a lift with `0 < end − start < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc1 {
    pub start: f64,
    pub end: f64,
}

impl Arc1 {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        let len = end - start;
        if !(len > 0.0 && len < 1.0) {
            return Err(Error::Layout(format!("arc ({start}, {end}) must have length in (0,1)")));
        }
        Ok(Arc1 { start, end })
    }

    pub fn len(&self) -> f64 {
        self.end - self.start
    }

    /// Whether `self` sits inside `other` with the given margin on both ends.
    pub fn inside(&self, other: &Arc1, margin: f64) -> bool {
        let shift = (self.start - other.start).rem_euclid(1.0);
        let s = other.start + shift;
        s >= other.start + margin && s + self.len() <= other.end - margin
    }

    pub fn middle_third(&self) -> Arc1 {
        let w = self.len() / 3.0;
        Arc1 {
            start: self.start + w,
            end: self.start + 2.0 * w,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let shift = (x - self.start).rem_euclid(1.0);
        shift > 0.0 && shift < self.len()
    }
}

/// Monotone piecewise-cubic Hermite lift `F` with `F(x + 1) = F(x) + 1`.
#[derive(Debug, Clone)]
pub struct HermiteCircleMap {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ds: Vec<f64>,
}

impl HermiteCircleMap {
    /// `knots` are `(x, F(x))` over one period starting at `x_0`, strictly
    /// increasing in both coordinates with `F(x_last) < F(x_0) + 1`.
    /// `fixed_slopes` pins the derivative at chosen knots.
    pub fn new(knots: &[(f64, f64)], fixed_slopes: &[(usize, f64)]) -> Result<Self> {
        let n = knots.len();
        if n < 2 {
            return Err(Error::Layout("need at least two knots".into()));
        }
        let mut xs: Vec<f64> = knots.iter().map(|k| k.0).collect();
        let mut ys: Vec<f64> = knots.iter().map(|k| k.1).collect();
        xs.push(xs[0] + 1.0);
        ys.push(ys[0] + 1.0);
        let secants: Vec<f64> = (0..n).map(|i| (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])).collect();
        if secants.iter().any(|s| !(*s > 0.0)) {
            return Err(Error::Layout("knots are not strictly increasing".into()));
        }
        // Fritsch–Butland harmonic slopes, periodic.
        let mut ds: Vec<f64> = (0..n)
            .map(|i| {
                let a = secants[(i + n - 1) % n];
                let b = secants[i];
                2.0 * a * b / (a + b)
            })
            .collect();
        for &(i, d) in fixed_slopes {
            ds[i] = d;
        }
        ds.push(ds[0]);
        let map = HermiteCircleMap { xs, ys, ds };
        map.check_monotone()?;
        Ok(map)
    }

    fn check_monotone(&self) -> Result<()> {
        for i in 0..self.xs.len() - 1 {
            let s = (self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i]);
            let (a, b) = (self.ds[i] / s, self.ds[i + 1] / s);
            if !(a > 0.0 && b > 0.0 && a * a + b * b <= 9.0) {
                return Err(Error::Layout(format!(
                    "Hermite slopes ({a:.3}, {b:.3}) leave the monotone region on piece {i}"
                )));
            }
        }
        Ok(())
    }

    /// Lift evaluated on `[x_0, x_0 + 1)`, extended periodically.
    pub fn lift(&self, x: f64) -> f64 {
        let x0 = self.xs[0];
        let k = ((x - x0) / 1.0).floor();
        let t = x - k;
        let i = self.xs.partition_point(|&v| v <= t).clamp(1, self.xs.len() - 1) - 1;
        let h = self.xs[i + 1] - self.xs[i];
        let s = (t - self.xs[i]) / h;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        k + h00 * self.ys[i] + h10 * h * self.ds[i] + h01 * self.ys[i + 1] + h11 * h * self.ds[i + 1]
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let x0 = self.xs[0];
        let t = x - ((x - x0).floor());
        let i = self.xs.partition_point(|&v| v <= t).clamp(1, self.xs.len() - 1) - 1;
        let h = self.xs[i + 1] - self.xs[i];
        let s = (t - self.xs[i]) / h;
        let s2 = s * s;
        let d00 = (6.0 * s2 - 6.0 * s) / h;
        let d10 = 3.0 * s2 - 4.0 * s + 1.0;
        let d01 = (-6.0 * s2 + 6.0 * s) / h;
        let d11 = 3.0 * s2 - 2.0 * s;
        d00 * self.ys[i] + d10 * self.ds[i] + d01 * self.ys[i + 1] + d11 * self.ds[i + 1]
    }

    fn inverse_lift(&self, y: f64) -> f64 {
        let y0 = self.ys[0];
        let k = (y - y0).floor();
        let t = y - k;
        let i = self.ys.partition_point(|&v| v <= t).clamp(1, self.ys.len() - 1) - 1;
        let (mut lo, mut hi) = (self.xs[i], self.xs[i + 1]);
        // Bisection to full precision; the lift is strictly increasing.
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.lift(mid) < t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let x = if (self.lift(lo) - t).abs() <= (self.lift(hi) - t).abs() {
            lo
        } else {
            hi
        };
        x + k
    }
}

impl CircleMap for HermiteCircleMap {
    fn forward(&self, x: f64) -> f64 {
        self.lift(x).rem_euclid(1.0) % 1.0
    }

    fn inverse(&self, y: f64) -> f64 {
        self.inverse_lift(y).rem_euclid(1.0) % 1.0
    }
}

/// Arc layout and contraction rate for [`make_ping_pong`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PingPongLayout {
    pub arcs: [Arc1; 3],
    pub kappa: f64,
}

impl Default for PingPongLayout {
    fn default() -> Self {
        PingPongLayout {
            arcs: [
                Arc1 { start: 0.0, end: 0.2 },
                Arc1 { start: 0.35, end: 0.55 },
                Arc1 { start: 0.7, end: 0.9 },
            ],
            kappa: 0.3,
        }
    }
}

/// Three circle maps with the interval conditions of a ping-pong triple.
#[derive(Debug, Clone)]
pub struct PingPongTriple {
    pub arcs: [Arc1; 3],
    pub j: Arc1,
    pub maps: [Arc<dyn CircleMap>; 3],
    pub smoothness: &'static str,
}

impl PingPongTriple {
    /// Circle action generated by the first `k` maps (`k = 2` or `3`).
    pub fn action(&self, k: usize) -> Result<CircleAction> {
        if !(1..=3).contains(&k) {
            return Err(Error::Invalid(format!("ping-pong action has 1..=3 generators, got {k}")));
        }
        CircleAction::new(self.maps[..k].to_vec())
    }

    /// Midpoint of `J`, a point with free orbit.
    pub fn base_point(&self) -> f64 {
        (0.5 * (self.j.start + self.j.end)).rem_euclid(1.0)
    }
}

/// The other two arcs lifted into `(end_ρ, start_ρ + 1)`.
fn hull_after(arcs: &[Arc1; 3], rho: usize) -> Result<(f64, f64)> {
    let me = arcs[rho];
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (i, a) in arcs.iter().enumerate() {
        if i == rho {
            continue;
        }
        let s = me.end + (a.start - me.end).rem_euclid(1.0);
        let e = s + a.len();
        if !(s > me.end && e < me.start + 1.0) {
            return Err(Error::Layout(format!(
                "arcs {} and {} overlap or touch",
                "ABC".as_bytes()[rho] as char,
                "ABC".as_bytes()[i] as char
            )));
        }
        lo = lo.min(s);
        hi = hi.max(e);
    }
    Ok((lo, hi))
}

pub fn make_ping_pong(layout: &PingPongLayout) -> Result<PingPongTriple> {
    let kappa = layout.kappa;
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::Layout(format!("contraction rate {kappa} outside (0,1)")));
    }
    let arcs = layout.arcs;
    for a in &arcs {
        Arc1::new(a.start, a.end)?;
    }
    if arcs.iter().map(Arc1::len).sum::<f64>() >= 1.0 {
        return Err(Error::Layout("arcs cover the whole circle".into()));
    }
    let mut maps: Vec<Arc<dyn CircleMap>> = Vec::with_capacity(3);
    for rho in 0..3 {
        let (q0, q1) = hull_after(&arcs, rho)?;
        let Arc1 { start: p0, end: p1 } = arcs[rho];
        let w = p1 - p0;
        let j = arcs[rho].middle_third();
        let g1 = q0 - p1;
        // Targets inside I_ρ + 1: J lands in (5%, 20%), I_ρ's right end at
        // 68% so that f_ρ(I_ρ) also covers J, the other arcs contract into
        // (73%, 98%).
        let u0 = p0 + 1.0 + 0.73 * w;
        let u1 = u0 + (kappa * (q1 - q0)).min(0.25 * w);
        let slope = (u1 - u0) / (q1 - q0);
        let knots = [
            (p0, p1 + 0.5 * g1),
            (j.start, p0 + 1.0 + 0.05 * w),
            (j.end, p0 + 1.0 + 0.2 * w),
            (p1, p0 + 1.0 + 0.68 * w),
            (q0, u0),
            (q1, u1),
        ];
        maps.push(Arc::new(HermiteCircleMap::new(&knots, &[(4, slope), (5, slope)])?));
    }
    let maps: [Arc<dyn CircleMap>; 3] = [maps[0].clone(), maps[1].clone(), maps[2].clone()];
    Ok(PingPongTriple {
        arcs,
        j: arcs[0].middle_third(),
        maps,
        smoothness: "C1 (monotone cubic Hermite)",
    })
}

/// Outcome of the interval conditions, one entry per map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PingPongReport {
    pub disjoint: bool,
    /// `I_{ρ+1} ∪ I_{ρ+2} ⊂ f_ρ(I_ρ)`
    pub covers: [bool; 3],
    /// `f_ρ(I_{ρ+1} ∪ I_{ρ+2}) ⊂ I_ρ`
    pub contracts: [bool; 3],
    /// `f_A(J) ⊂ I_A`
    pub j_condition: bool,
    /// `f_A⁻¹(J) ⊂ I_A`, needed by the negative half of the leaf recursion
    pub j_inverse_condition: bool,
    pub margin: f64,
    pub smoothness: String,
}

impl PingPongReport {
    pub fn all_hold(&self) -> bool {
        self.disjoint
            && self.covers.iter().all(|&b| b)
            && self.contracts.iter().all(|&b| b)
            && self.j_condition
            && self.j_inverse_condition
    }
}

/// Image of an arc under an orientation-preserving map, by endpoints.
fn image(map: &dyn CircleMap, a: &Arc1) -> Option<Arc1> {
    let s = map.forward(a.start.rem_euclid(1.0));
    let mid = map.forward((a.start + 0.5 * a.len()).rem_euclid(1.0));
    let e = map.forward(a.end.rem_euclid(1.0));
    // The image runs from s through mid to e.
    let to_mid = (mid - s).rem_euclid(1.0);
    let to_end = (e - s).rem_euclid(1.0);
    if to_mid >= to_end || to_end == 0.0 {
        return None;
    }
    Some(Arc1 {
        start: s,
        end: s + to_end,
    })
}

#[derive(Debug)]
struct Inverse<'a>(&'a dyn CircleMap);

impl CircleMap for Inverse<'_> {
    fn forward(&self, x: f64) -> f64 {
        self.0.inverse(x)
    }
    fn inverse(&self, x: f64) -> f64 {
        self.0.forward(x)
    }
}

pub fn check_ping_pong(t: &PingPongTriple) -> PingPongReport {
    let m = PINGPONG_MARGIN;
    let disjoint = (0..3).all(|r| hull_after(&t.arcs, r).is_ok());
    let mut covers = [false; 3];
    let mut contracts = [false; 3];
    for rho in 0..3 {
        let others = [t.arcs[(rho + 1) % 3], t.arcs[(rho + 2) % 3]];
        let map = t.maps[rho].as_ref();
        covers[rho] = image(map, &t.arcs[rho])
            .map(|img| others.iter().all(|o| o.inside(&img, m)))
            .unwrap_or(false);
        contracts[rho] = others
            .iter()
            .all(|o| image(map, o).map(|img| img.inside(&t.arcs[rho], m)).unwrap_or(false));
    }
    let j_condition = image(t.maps[0].as_ref(), &t.j)
        .map(|img| img.inside(&t.arcs[0], m))
        .unwrap_or(false);
    let j_inverse_condition = image(&Inverse(t.maps[0].as_ref()), &t.j)
        .map(|img| img.inside(&t.arcs[0], m))
        .unwrap_or(false);
    PingPongReport {
        disjoint,
        covers,
        contracts,
        j_condition,
        j_inverse_condition,
        margin: m,
        smoothness: t.smoothness.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug)]
    struct Identity;

    impl CircleMap for Identity {
        fn forward(&self, x: f64) -> f64 {
            x
        }
        fn inverse(&self, x: f64) -> f64 {
            x
        }
    }

    #[test]
    fn default_layout_passes() {
        let t = make_ping_pong(&PingPongLayout::default()).unwrap();
        let rep = check_ping_pong(&t);
        assert!(rep.all_hold(), "{rep:?}");
    }

    #[test]
    fn identity_fails_everything() {
        let t = make_ping_pong(&PingPongLayout::default()).unwrap();
        let id: Arc<dyn CircleMap> = Arc::new(Identity);
        let t = PingPongTriple {
            maps: [id.clone(), id.clone(), id],
            ..t
        };
        let rep = check_ping_pong(&t);
        assert!(rep.covers.iter().all(|&b| !b));
        assert!(rep.contracts.iter().all(|&b| !b));
    }

    #[test]
    fn touching_arcs_rejected() {
        let mut layout = PingPongLayout::default();
        layout.arcs[1] = Arc1 { start: 0.2, end: 0.55 };
        assert!(matches!(make_ping_pong(&layout), Err(Error::Layout(_))));
    }

    #[test]
    fn contraction_rate_respected() {
        let layout = PingPongLayout::default();
        let t = make_ping_pong(&layout).unwrap();
        for rho in 0..3 {
            let (q0, q1) = hull_after(&layout.arcs, rho).unwrap();
            let a = (t.maps[rho].forward(q1.rem_euclid(1.0)) - t.maps[rho].forward(q0.rem_euclid(1.0)))
                .rem_euclid(1.0);
            assert!(a <= layout.kappa * (q1 - q0) + 1e-12);
        }
    }

    #[test]
    fn round_trip_on_grid() {
        let t = make_ping_pong(&PingPongLayout::default()).unwrap();
        for m in &t.maps {
            for i in 0..10_000 {
                let x = i as f64 / 10_000.0;
                let d = crate::group_core::circle_dist(m.forward(m.inverse(x)), x);
                assert!(d <= crate::tolerances::ROUNDTRIP_TOL, "{x}: {d}");
            }
        }
    }

    #[test]
    fn orbit_of_j_is_free() {
        use crate::group_core::{ball_size, orbit_ball};
        let t = make_ping_pong(&PingPongLayout::default()).unwrap();
        for k in [2, 3] {
            let act = t.action(k).unwrap();
            // f_A stretches a third of I_A over the whole complement, so inverse
            // letters contract by about 1/12 and length-8 words come closer than 1e-9.
            let ball = orbit_ball(&act, &t.base_point(), 8, crate::tolerances::PINGPONG_ORBIT_TOL, 1 << 21).unwrap();
            for n in 1..=8 {
                assert_eq!(ball.size_at(n) as u128, ball_size(k, n), "k={k} n={n}");
            }
        }
    }
}
