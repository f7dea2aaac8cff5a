use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::graph::{dijkstra, stencil};
use crate::geometry::metric::smoothstep5;

const TOL: f64 = 1e-9;

/// Planar grid mesh of a closed region, Euclidean edge lengths.
#[derive(Debug, Clone)]
pub struct PlanarMesh {
    pub h: f64,
    pub points: Vec<(f64, f64)>,
    offs: Vec<u32>,
    adj: Vec<(u32, f64)>,
}

impl PlanarMesh {
    /// Grid nodes of spacing `h` on the box `[x0,x1] × [y0,y1]` inside the
    /// region, joined along a 32-direction stencil when the segment stays inside.
    pub fn build<F: Fn(f64, f64) -> bool>(h: f64, bbox: (f64, f64, f64, f64), inside: F) -> Self {
        let (x0, x1, y0, y1) = bbox;
        let i0 = (x0 / h).floor() as i64;
        let i1 = (x1 / h).ceil() as i64;
        let j0 = (y0 / h).floor() as i64;
        let j1 = (y1 / h).ceil() as i64;
        let nx = (i1 - i0 + 1) as usize;
        let ny = (j1 - j0 + 1) as usize;
        let mut id = vec![u32::MAX; nx * ny];
        let mut points = Vec::new();
        for j in 0..ny {
            for i in 0..nx {
                let p = ((i0 + i as i64) as f64 * h, (j0 + j as i64) as f64 * h);
                if inside(p.0, p.1) {
                    id[j * nx + i] = points.len() as u32;
                    points.push(p);
                }
            }
        }
        let offsets = stencil(3);
        let mut offs = vec![0u32];
        let mut adj = Vec::new();
        for j in 0..ny {
            for i in 0..nx {
                if id[j * nx + i] == u32::MAX {
                    continue;
                }
                let p = points[id[j * nx + i] as usize];
                for &(di, dj) in &offsets {
                    let (ti, tj) = (i as i64 + di as i64, j as i64 + dj as i64);
                    if ti < 0 || tj < 0 || ti >= nx as i64 || tj >= ny as i64 {
                        continue;
                    }
                    let t = id[tj as usize * nx + ti as usize];
                    if t == u32::MAX {
                        continue;
                    }
                    let q = points[t as usize];
                    let len = (q.0 - p.0).hypot(q.1 - p.1);
                    let samples = (len / (0.25 * h)).ceil() as usize;
                    let ok = (1..samples).all(|s| {
                        let u = s as f64 / samples as f64;
                        inside(p.0 + u * (q.0 - p.0), p.1 + u * (q.1 - p.1))
                    });
                    if ok {
                        adj.push((t, len));
                    }
                }
                offs.push(adj.len() as u32);
            }
        }
        PlanarMesh { h, points, offs, adj }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn distances(&self, sources: &[(u32, f64)]) -> Vec<f64> {
        dijkstra(self.len(), sources, f64::INFINITY, &[], |v, out| {
            let a = self.offs[v as usize] as usize;
            let b = self.offs[v as usize + 1] as usize;
            out.extend_from_slice(&self.adj[a..b]);
        })
    }

    pub fn nearest(&self, p: (f64, f64)) -> Option<u32> {
        self.points
            .iter()
            .enumerate()
            .min_by(|a, b| {
                let da = (a.1 .0 - p.0).hypot(a.1 .1 - p.1);
                let db = (b.1 .0 - p.0).hypot(b.1 .1 - p.1);
                da.total_cmp(&db)
            })
            .map(|(i, _)| i as u32)
    }
}

fn rotate(p: (f64, f64), theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    (c * p.0 - s * p.1, s * p.0 + c * p.1)
}

/// Lens profile: negative exactly on `(-1, 3)`, minimum `-1/3`.
fn lens(y: f64) -> f64 {
    if y <= -1.0 || y >= 3.0 {
        return 0.0;
    }
    let t = (y + 1.0) / 4.0;
    -(16.0 / 3.0) * t * t * (1.0 - t) * (1.0 - t)
}

/// Upper boundary of the connecting region, with a corridor of vertical width
/// `width` along the diagonal around `pinch`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ceiling {
    pub top: f64,
    pub pinch: f64,
    pub half_span: f64,
    pub width: f64,
}

impl Ceiling {
    pub fn eval(&self, x: f64) -> f64 {
        let cx = 3.0 * FRAC_1_SQRT_2;
        if x <= 0.0 {
            return 2.0 + (self.top - 2.0) * smoothstep5((x + 2.0) / 2.0);
        }
        let u = cx + (self.top - cx) * (1.0 - smoothstep5(x / cx));
        let s = ((x - self.pinch).abs() / self.half_span - 0.5) / 0.5;
        let g = 1.0 - smoothstep5(s);
        (1.0 - g) * u + g * (x + self.width)
    }
}

/// The planar plug piece with three boundary arcs of radius `1 + α`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CornerPlug {
    pub alpha: f64,
    pub h: f64,
    pub ceiling: Ceiling,
    /// Mesh distance from `d` to `c` inside the connecting region.
    pub dc_distance: f64,
    pub corners: Vec<(f64, f64)>,
    pub arc_centers: [(f64, f64); 3],
    pub arc_radius: f64,
    #[serde(skip)]
    mesh: Option<PlanarMesh>,
}

const A: (f64, f64) = (0.0, -2.0);
const B: (f64, f64) = (-1.0, 2.0);
const D: (f64, f64) = (0.0, 2.0);
const E: (f64, f64) = (0.0, 0.0);

fn c_point() -> (f64, f64) {
    (3.0 * FRAC_1_SQRT_2, 3.0 * FRAC_1_SQRT_2)
}

fn in_quarter(p: (f64, f64), center: (f64, f64), theta: f64, r: f64) -> bool {
    let q = rotate((p.0 - center.0, p.1 - center.1), -theta);
    q.0 >= -TOL && q.1 >= -TOL && q.0.hypot(q.1) <= r + TOL
}

fn in_lens(p: (f64, f64), shift: (f64, f64), theta: f64) -> bool {
    let q = rotate((p.0 - shift.0, p.1 - shift.1), -theta);
    q.1 >= -1.0 - TOL && q.1 <= 3.0 + TOL && q.0 <= TOL && q.0 >= lens(q.1) - TOL
}

fn in_connector(p: (f64, f64), ceil: &Ceiling) -> bool {
    let (x, y) = p;
    let cx = 3.0 * FRAC_1_SQRT_2;
    if (-2.0 - TOL..=0.0).contains(&x) && y >= 2.0 - TOL && y <= ceil.eval(x) + TOL {
        return true;
    }
    (-TOL..=cx + TOL).contains(&x) && y >= x - TOL && y <= ceil.eval(x.clamp(0.0, cx)) + TOL
}

impl CornerPlug {
    fn contains(&self, p: (f64, f64)) -> bool {
        let r = self.arc_radius;
        let c = c_point();
        in_quarter(p, A, 1.5 * PI, r)
            || in_quarter(p, B, PI, r)
            || in_quarter(p, c, 0.25 * PI, r)
            || in_lens(p, A, 0.0)
            || in_lens(p, c, 0.75 * PI)
            || in_connector(p, &self.ceiling)
    }

    pub fn mesh(&self) -> &PlanarMesh {
        self.mesh.as_ref().expect("built plugs carry a mesh")
    }

    /// Grid nodes within `1.5h` inside arc `which`, with their radial offset
    /// to the arc.
    fn arc_nodes(&self, which: usize) -> Vec<(u32, f64)> {
        let center = self.arc_centers[which];
        let theta = [1.5 * PI, PI, 0.25 * PI][which];
        let r = self.arc_radius;
        self.mesh()
            .points
            .iter()
            .enumerate()
            .filter_map(|(i, &p)| {
                let rr = (p.0 - center.0).hypot(p.1 - center.1);
                (in_quarter(p, center, theta, r) && r - rr <= 1.5 * self.h).then_some((i as u32, r - rr))
            })
            .collect()
    }

    /// Nodes near arc `which` at angular fractions `fracs` of the quarter.
    fn arc_samples(&self, which: usize, fracs: &[f64]) -> Vec<(u32, f64)> {
        let center = self.arc_centers[which];
        let theta = [1.5 * PI, PI, 0.25 * PI][which];
        let r = self.arc_radius;
        let nodes = self.arc_nodes(which);
        fracs
            .iter()
            .filter_map(|&f| {
                let ang = theta + f * 0.5 * PI;
                let target = (center.0 + r * ang.cos(), center.1 + r * ang.sin());
                nodes.iter().copied().min_by(|a, b| {
                    let pa = self.mesh().points[a.0 as usize];
                    let pb = self.mesh().points[b.0 as usize];
                    (pa.0 - target.0).hypot(pa.1 - target.1).total_cmp(&(pb.0 - target.0).hypot(pb.1 - target.1))
                })
            })
            .collect()
    }

    /// Minimum and maximum mesh distances between sampled points of each
    /// pair of boundary arcs, in the order `(∂,∂₀)`, `(∂,∂₁)`, `(∂₀,∂₁)`.
    pub fn boundary_distances(&self) -> [(f64, f64); 3] {
        let fracs = [0.15, 0.5, 0.85];
        let samples: Vec<Vec<(u32, f64)>> = (0..3).map(|w| self.arc_samples(w, &fracs)).collect();
        let mut out = [(f64::INFINITY, f64::NEG_INFINITY); 3];
        for (slot, (i, j)) in [(0usize, 1usize), (0, 2), (1, 2)].iter().enumerate() {
            for &(s, o1) in &samples[*i] {
                let d = self.mesh().distances(&[(s, o1)]);
                for &(t, o2) in &samples[*j] {
                    let v = d[t as usize] + o2;
                    out[slot].0 = out[slot].0.min(v);
                    out[slot].1 = out[slot].1.max(v);
                }
            }
        }
        out
    }

    /// Mesh length of the straight segment from `e` to `a`.
    pub fn segment_ea(&self) -> f64 {
        let m = self.mesh();
        let e = m.nearest(E).expect("mesh is non-empty");
        let a = m.nearest(A).expect("mesh is non-empty");
        m.distances(&[(e, 0.0)])[a as usize]
    }
}

fn connector_distance(h: f64, ceil: &Ceiling) -> f64 {
    let bbox = (-2.0, 3.0 * FRAC_1_SQRT_2 + h, 0.0, ceil.top + h);
    let mesh = PlanarMesh::build(h, bbox, |x, y| in_connector((x, y), ceil));
    let c = c_point();
    let (Some(dn), Some(cn)) = (mesh.nearest(D), mesh.nearest(c)) else {
        return f64::NAN;
    };
    let p = mesh.points[cn as usize];
    mesh.distances(&[(dn, 0.0)])[cn as usize] + (p.0 - c.0).hypot(p.1 - c.1)
}

/// Build the plug piece for `α > 0` at mesh spacing `h`, calibrating the
/// corridor position so that `d` and `c` are at distance 4 inside the
/// connecting region.
pub fn build_corner_plug(alpha: f64, h: f64) -> Result<CornerPlug> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Invalid(format!("alpha must be positive, got {alpha}")));
    }
    if !(h > 0.0 && h <= 0.05) {
        return Err(Error::Invalid(format!("mesh spacing {h} must be in (0, 0.05]")));
    }
    let cx = 3.0 * FRAC_1_SQRT_2;
    let half_span = 0.4;
    let width = (5.0 * h).max(0.1);
    let ceiling = |pinch| Ceiling {
        top: 3.0,
        pinch,
        half_span,
        width,
    };
    let (mut lo, mut hi) = (half_span, cx - half_span);
    let (f_lo, f_hi) = (connector_distance(h, &ceiling(lo)) - 4.0, connector_distance(h, &ceiling(hi)) - 4.0);
    if !(f_lo > 0.0 && f_hi < 0.0) {
        return Err(Error::Calibration(format!(
            "corridor bracket does not straddle 4: {} .. {}",
            f_lo + 4.0,
            f_hi + 4.0
        )));
    }
    let mut dc = f64::NAN;
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        dc = connector_distance(h, &ceiling(mid));
        if dc > 4.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (dc - 4.0).abs() < 0.25 * h || hi - lo < 1e-6 {
            break;
        }
    }
    if !((dc - 4.0).abs() < h) {
        return Err(Error::Calibration(format!("d-to-c distance settled at {dc}")));
    }
    let c = c_point();
    let r = 1.0 + alpha;
    let mut plug = CornerPlug {
        alpha,
        h,
        ceiling: ceiling(0.5 * (lo + hi)),
        dc_distance: dc,
        corners: vec![A, B, c, D, E],
        arc_centers: [A, B, c],
        arc_radius: r,
        mesh: None,
    };
    let bbox = (-2.0 - r, c.0 + r, -2.0 - r, c.1 + r);
    let probe = plug.clone();
    plug.mesh = Some(PlanarMesh::build(h, bbox, |x, y| probe.contains((x, y))));
    Ok(plug)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lens_profile() {
        assert_eq!(lens(-1.0), 0.0);
        assert_eq!(lens(3.0), 0.0);
        assert!((lens(1.0) + 1.0 / 3.0).abs() < 1e-15);
        assert!(lens(0.0) < 0.0);
    }

    #[test]
    fn ceiling_stays_above_floor() {
        let c = Ceiling {
            top: 3.0,
            pinch: 1.0,
            half_span: 0.4,
            width: 0.1,
        };
        for i in 1..100 {
            let x = 3.0 * FRAC_1_SQRT_2 * i as f64 / 100.0;
            assert!(c.eval(x) > x);
        }
        for i in 1..=100 {
            assert!(c.eval(-2.0 + 2.0 * i as f64 / 100.0) > 2.0);
        }
        assert!((c.eval(1.0) - 1.1).abs() < 1e-12);
    }

    #[test]
    fn coarse_plug_distances() {
        let p = build_corner_plug(0.25, 0.05).unwrap();
        assert!((p.segment_ea() - 2.0).abs() < 1e-12);
        for (lo, hi) in p.boundary_distances() {
            assert!((lo - 7.5).abs() / 7.5 < 0.03, "{lo}");
            assert!((hi - 7.5).abs() / 7.5 < 0.03, "{hi}");
        }
        assert_eq!(p.corners.len(), 5);
    }
}
