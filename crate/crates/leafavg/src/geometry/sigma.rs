use serde::{Deserialize, Serialize};

use crate::averages::AverageSeries;
use crate::error::{Error, Result};
use crate::geometry::metric::PantsMetric;
use crate::geometry::pants::{Chart, CopyLabel, PantsGrid, PantsMesh, Slot};
use crate::suspension::ProductSample;

/// Parameters of a finite-depth assembly of the tree surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaSpec {
    #[serde(rename = "L")]
    pub big_l: f64,
    pub depth: u32,
    pub delta: f64,
    pub h: f64,
}

impl Default for SigmaSpec {
    fn default() -> Self {
        SigmaSpec {
            big_l: 25.0,
            depth: 3,
            delta: 0.5,
            h: 0.05,
        }
    }
}

/// Pants copies `P^L_{k,ℓ}` for `1 ≤ |k| ≤ depth` glued into a tree, with the
/// height field and the involution `(k,ℓ) ↦ (-k,ℓ)`.
#[derive(Debug, Clone)]
pub struct Sigma {
    mesh: PantsMesh,
    spec: SigmaSpec,
    heights: Vec<f64>,
    mirror: Vec<u32>,
}

fn sign(k: i32) -> i32 {
    if k > 0 {
        1
    } else {
        -1
    }
}

/// Position of `(k, ℓ)` in the copy list: positive levels first.
fn copy_index(k: i32, l: u32, depth: u32) -> usize {
    let level = (k.unsigned_abs() - 1) as usize;
    let within = (1usize << level) - 1 + l as usize;
    if k > 0 {
        within
    } else {
        (1usize << depth) - 1 + within
    }
}

pub fn assemble_sigma(spec: SigmaSpec) -> Result<Sigma> {
    if spec.depth == 0 || spec.depth > 20 {
        return Err(Error::Invalid(format!("depth must be in 1..=20, got {}", spec.depth)));
    }
    let metric = PantsMetric::new(spec.delta)?;
    let grid = PantsGrid::new(metric, spec.h, spec.big_l)?;
    let delta_eff = grid.delta_effective();
    if !(spec.big_l > 5.0 * (2.0 + delta_eff)) {
        return Err(Error::Invalid(format!(
            "L = {} must exceed 5(2 + delta) = {}",
            spec.big_l,
            5.0 * (2.0 + delta_eff)
        )));
    }
    let mut copies = Vec::new();
    for s in [1, -1] {
        for level in 1..=spec.depth as i32 {
            for l in 0..(1u32 << (level - 1)) {
                copies.push(CopyLabel { k: s * level, l });
            }
        }
    }
    let n = grid.steps_per_unit();
    let bottom = grid.bottom_row();
    let tops = [grid.leg_top(0), grid.leg_top(1)];
    let mut gluings = Vec::new();
    for c in &copies {
        if c.k.unsigned_abs() >= spec.depth {
            continue;
        }
        let from = copy_index(c.k, c.l, spec.depth);
        for (sigma, top) in tops.iter().enumerate() {
            let child = copy_index(c.k + sign(c.k), 2 * c.l + sigma as u32, spec.depth);
            for (u, &t) in top.iter().enumerate() {
                gluings.push(((from, t), (child, bottom[u % n])));
            }
        }
    }
    let (p, m) = (copy_index(1, 0, spec.depth), copy_index(-1, 0, spec.depth));
    for ic in 0..n {
        gluings.push(((p, bottom[ic]), (m, bottom[(n - ic) % n])));
    }
    let mesh = PantsMesh::build(grid, copies, &gluings)?;
    let big_l = spec.big_l;
    let heights = (0..mesh.node_count() as u32)
        .map(|v| {
            let (c, _, y) = mesh.position(v);
            height_of(mesh.copies()[c].k, y, big_l)
        })
        .collect();
    let mirror = (0..mesh.node_count() as u32)
        .map(|v| {
            let (c, s) = mesh.decode(mesh.members(v)[0]);
            let lab = mesh.copies()[c];
            let mc = copy_index(-lab.k, lab.l, spec.depth);
            mesh.node(mc, s).expect("mirror copies share the layout")
        })
        .collect();
    Ok(Sigma {
        mesh,
        spec,
        heights,
        mirror,
    })
}

/// `(2k−1)L + y` for `k ≥ 1`, `(2k+1)L − y` for `k ≤ −1`.
pub fn height_of(k: i32, y: f64, big_l: f64) -> f64 {
    if k > 0 {
        (2 * k - 1) as f64 * big_l + y
    } else {
        (2 * k + 1) as f64 * big_l - y
    }
}

/// Observable on `Σ`, stored as its profile on one positive copy.
#[derive(Debug, Clone)]
pub struct SurfaceObservable {
    local: Vec<f64>,
    support: Vec<usize>,
    /// Scale applied to the raw bump so that each copy integrates to 1.
    pub normalization: f64,
    /// Mesh integral over one copy after normalization.
    pub copy_integral: f64,
}

impl Sigma {
    pub fn mesh(&self) -> &PantsMesh {
        &self.mesh
    }

    pub fn spec(&self) -> SigmaSpec {
        self.spec
    }

    pub fn big_l(&self) -> f64 {
        self.spec.big_l
    }

    pub fn depth(&self) -> u32 {
        self.spec.depth
    }

    pub fn delta_star(&self) -> f64 {
        self.mesh.delta_star()
    }

    pub fn node_count(&self) -> usize {
        self.mesh.node_count()
    }

    pub fn height(&self, v: u32) -> f64 {
        self.heights[v as usize]
    }

    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    /// Image of a node under the involution.
    pub fn mirror(&self, v: u32) -> u32 {
        self.mirror[v as usize]
    }

    pub fn copy_position(&self, k: i32, l: u32) -> Result<usize> {
        if k == 0 || k.unsigned_abs() > self.spec.depth || l >= 1u32 << (k.unsigned_abs() - 1) {
            return Err(Error::Invalid(format!("no copy ({k}, {l}) at depth {}", self.spec.depth)));
        }
        Ok(copy_index(k, l, self.spec.depth))
    }

    /// Node nearest to chart point `(x, y)` of copy `(k, ℓ)`.
    pub fn node_at(&self, k: i32, l: u32, x: f64, y: f64) -> Result<u32> {
        let c = self.copy_position(k, l)?;
        let s = self.mesh.grid().locate(x, y)?;
        Ok(self.mesh.node(c, s).expect("located slots are present"))
    }

    /// The node `π_{1,0}(0, -L)`, fixed by the involution.
    pub fn symmetric_base(&self) -> u32 {
        self.node_at(1, 0, 0.0, -self.spec.big_l).expect("copy (1,0) exists")
    }

    /// Base point in copy `(1,0)` on the column `x = 1` with height the
    /// largest grid value not above `2Δ*`.
    pub fn default_p0(&self) -> u32 {
        let h = self.mesh.h();
        let target = 2.0 * self.delta_star();
        let steps = (target / h + 1e-9).floor();
        self.node_at(1, 0, 1.0, -self.spec.big_l + steps * h).expect("copy (1,0) exists")
    }

    pub fn distances(&self, p: u32, cutoff: f64) -> Vec<f64> {
        self.mesh.distances(&[(p, 0.0)], cutoff, &[])
    }

    pub fn geodesic_distance(&self, p: u32, q: u32) -> Result<(f64, f64)> {
        self.mesh.geodesic_distance(p, q)
    }

    /// Metric volume of one pants copy.
    pub fn pants_volume(&self) -> f64 {
        self.mesh.grid().copy_volume()
    }

    pub fn make_phi(&self) -> SurfaceObservable {
        let g = self.mesh.grid();
        let n = g.steps_per_unit();
        let mut local = vec![0.0; g.local_len()];
        for (s, v) in local.iter_mut().enumerate() {
            let slot = g.slot(s);
            if slot.chart == Chart::Coarse && slot.j <= n {
                let t = slot.j as f64 / n as f64;
                *v = 16.0 * t * t * (1.0 - t) * (1.0 - t);
            }
        }
        let raw: f64 = local.iter().enumerate().map(|(s, v)| v * g.area(s)).sum();
        let normalization = 1.0 / raw;
        for v in local.iter_mut() {
            *v *= normalization;
        }
        let support: Vec<usize> = (0..local.len()).filter(|&s| local[s] != 0.0).collect();
        let copy_integral = support.iter().map(|&s| local[s] * g.area(s)).sum();
        SurfaceObservable {
            local,
            support,
            normalization,
            copy_integral,
        }
    }

    /// Value of `Φ` at raw slot `raw`.
    pub fn phi_raw(&self, phi: &SurfaceObservable, raw: u32) -> f64 {
        let (c, s) = self.mesh.decode(raw);
        sign(self.mesh.copies()[c].k) as f64 * phi.local[s]
    }

    /// Value of `Φ` at a node (all members agree).
    pub fn phi(&self, phi: &SurfaceObservable, v: u32) -> f64 {
        self.phi_raw(phi, self.mesh.members(v)[0])
    }

    fn positive_copies(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.mesh
            .copies()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.k > 0)
            .map(|(i, c)| (i, copy_index(-c.k, c.l, self.spec.depth)))
    }

    /// `∫ Φ` over the nodes selected by `keep`. Mirror pairs are summed
    /// first, so a selection closed under the involution gives exactly 0.
    pub fn integrate<F: Fn(u32) -> bool>(&self, phi: &SurfaceObservable, keep: F) -> f64 {
        let g = self.mesh.grid();
        let mut total = 0.0;
        for (pc, mc) in self.positive_copies() {
            for &s in &phi.support {
                let a = phi.local[s] * g.area(s);
                let plus = self.mesh.node(pc, s).is_some_and(&keep);
                let minus = self.mesh.node(mc, s).is_some_and(&keep);
                total += match (plus, minus) {
                    (true, true) => 0.0,
                    (true, false) => a,
                    (false, true) => -a,
                    (false, false) => 0.0,
                };
            }
        }
        total
    }

    /// Whether the selection meets the support of `Φ` in a set closed under
    /// the involution.
    pub fn support_symmetric<F: Fn(u32) -> bool>(&self, phi: &SurfaceObservable, keep: F) -> bool {
        self.positive_copies().all(|(pc, mc)| {
            phi.support.iter().all(|&s| {
                let plus = self.mesh.node(pc, s).is_some_and(&keep);
                let minus = self.mesh.node(mc, s).is_some_and(&keep);
                plus == minus
            })
        })
    }

    /// Largest radius whose ball about `p0` stays inside the assembled depth,
    /// by the height sandwich.
    pub fn reach(&self, p0: u32) -> f64 {
        let top = 2.0 * self.spec.depth as f64 * self.spec.big_l;
        let h0 = self.height(p0);
        (top - h0).min(top + h0)
    }

    /// Height-sandwich check for the ball `dist ≤ r`: every node with
    /// `|h − h0| ≤ r − Δ* − slack` is inside, and every node inside has
    /// `|h − h0| ≤ r`.
    pub fn height_sandwich(&self, p0: u32, dist: &[f64], r: f64, slack: f64) -> bool {
        let h0 = self.height(p0);
        let inner = r - self.delta_star() - slack;
        dist.iter().zip(&self.heights).all(|(&d, &h)| {
            let dh = (h - h0).abs();
            (dh > inner || d <= r) && (d > r || dh <= r + 1e-9)
        })
    }

    pub fn oscillation_series(&self, phi: &SurfaceObservable, p0: u32, kmax: u32) -> Result<SigmaSeries> {
        let ds = self.delta_star();
        let h0 = self.height(p0);
        if !(h0 >= ds + 1.0 && h0 <= 2.0 * ds) {
            return Err(Error::Hypothesis(format!(
                "base point height {h0} outside [{}, {}]",
                ds + 1.0,
                2.0 * ds
            )));
        }
        let big_l = self.spec.big_l;
        let r_max = 2.0 * kmax as f64 * big_l;
        if kmax == 0 || r_max > self.reach(p0) {
            return Err(Error::Mesh(format!(
                "depth {} cannot hold the ball of radius {r_max} about height {h0}",
                self.spec.depth
            )));
        }
        let eps = self.mesh.error_bound();
        let dist = self.distances(p0, r_max + eps);
        let vol_p = self.pants_volume();
        let mut plus_rows = Vec::new();
        let mut minus_rows = Vec::new();
        let mut support_disjoint = true;
        let mut sandwich = true;
        let mut volume_bound = true;
        for k in 1..=kmax {
            let rp = 2.0 * k as f64 * big_l;
            let rm = rp - 2.0 * ds;
            let row = |r: f64| {
                let i = self.integrate(phi, |v| dist[v as usize] <= r);
                let vol = self.mesh.volume(|v| dist[v as usize] <= r);
                (i, vol)
            };
            let (ip, vp) = row(rp);
            let avg = ip / vp;
            let (ia, va) = row(rp - eps);
            let (ib, vb) = row(rp + eps);
            let err = (ia / va - avg).abs().max((ib / vb - avg).abs());
            sandwich &= self.height_sandwich(p0, &dist, rp, eps);
            volume_bound &= vp <= ((1u64 << (k + 1)) - 1) as f64 * vol_p + eps * vol_p;
            plus_rows.push(SeriesRow {
                k,
                r: rp,
                integral: ip,
                volume: vp,
                average: avg,
                error: err,
            });
            let (im, vm) = row(rm);
            let disjoint = self.support_symmetric(phi, |v| dist[v as usize] <= rm) && im == 0.0;
            support_disjoint &= disjoint;
            minus_rows.push(SeriesRow {
                k,
                r: rm,
                integral: im,
                volume: vm,
                average: im / vm,
                error: 0.0,
            });
        }
        let to_series = |rows: &[SeriesRow]| AverageSeries::with_quarter_window(rows.iter().map(|r| (r.r, r.average, r.error)).collect());
        Ok(SigmaSeries {
            big_l,
            h: self.mesh.h(),
            delta_effective: self.mesh.delta_effective(),
            depth: self.spec.depth,
            kmax,
            p0_height: h0,
            pants_volume: vol_p,
            plus: to_series(&plus_rows)?,
            minus: to_series(&minus_rows)?,
            plus_rows,
            minus_rows,
            support_disjoint,
            height_sandwich: sandwich,
            volume_bound,
        })
    }

    /// Samples for the product extension check at the given radii, with
    /// inner radius `r − r1`, and whether every annulus misses the support.
    pub fn product_samples(&self, phi: &SurfaceObservable, dist: &[f64], radii: &[f64], r1: f64) -> (Vec<ProductSample>, bool) {
        let g = self.mesh.grid();
        let mut annulus_zero = true;
        let mut out = Vec::new();
        for &r in radii {
            let inner = r - r1;
            for (c, _) in self.mesh.copies().iter().enumerate() {
                for &s in &phi.support {
                    if let Some(v) = self.mesh.node(c, s) {
                        let d = dist[v as usize];
                        if d > inner && d <= r && g.area(s) > 0.0 {
                            annulus_zero = false;
                        }
                    }
                }
            }
            out.push(ProductSample {
                r,
                integral: self.integrate(phi, |v| dist[v as usize] <= r),
                volume: self.mesh.volume(|v| dist[v as usize] <= r),
                integral_inner: self.integrate(phi, |v| dist[v as usize] <= inner),
                volume_inner: self.mesh.volume(|v| dist[v as usize] <= inner),
            });
        }
        (out, annulus_zero)
    }

    /// Chart coordinates of a node: copy label and `(x, y)`.
    pub fn chart_point(&self, v: u32) -> (CopyLabel, f64, f64) {
        let (c, x, y) = self.mesh.position(v);
        (self.mesh.copies()[c], x, y)
    }

    /// Grid slot of a node's first member.
    pub fn slot(&self, v: u32) -> Slot {
        let (_, s) = self.mesh.decode(self.mesh.members(v)[0]);
        self.mesh.grid().slot(s)
    }
}

/// One radius of the oscillation series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub k: u32,
    pub r: f64,
    pub integral: f64,
    pub volume: f64,
    pub average: f64,
    pub error: f64,
}

/// Ball averages of `Φ` along the radii `2kL` and `2kL − 2Δ*`.
#[derive(Debug, Clone, Serialize)]
pub struct SigmaSeries {
    #[serde(rename = "L")]
    pub big_l: f64,
    pub h: f64,
    pub delta_effective: f64,
    pub depth: u32,
    pub kmax: u32,
    pub p0_height: f64,
    pub pants_volume: f64,
    #[serde(skip)]
    pub plus: AverageSeries,
    #[serde(skip)]
    pub minus: AverageSeries,
    pub plus_rows: Vec<SeriesRow>,
    pub minus_rows: Vec<SeriesRow>,
    /// Every `2kL − 2Δ*` ball meets the support in an involution-closed set.
    pub support_disjoint: bool,
    pub height_sandwich: bool,
    /// `vol B(p0, 2kL) ≤ (2^{k+1} − 1)·vol(P^L)` up to the mesh bound.
    pub volume_bound: bool,
}

impl SigmaSeries {
    /// `min` over the `2kL` averages minus `max` over the `2kL − 2Δ*` ones.
    pub fn gap(&self) -> f64 {
        let lo = self.plus_rows.iter().map(|r| r.average).fold(f64::INFINITY, f64::min);
        let hi = self.minus_rows.iter().map(|r| r.average).fold(f64::NEG_INFINITY, f64::max);
        lo - hi
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Sigma {
        assemble_sigma(SigmaSpec {
            big_l: 11.0,
            depth: 2,
            delta: 0.1,
            h: 0.1,
        })
        .unwrap()
    }

    #[test]
    fn gluing_formula_lands_on_bottom_row() {
        let s = tiny();
        // Top of leg 0 at x = -3/2 in copy (1,0) meets copy (2,0) at x' = 4(x+1) = -2.
        let a = s.node_at(1, 0, -1.5, 11.0).unwrap();
        let b = s.node_at(2, 0, -2.0, -11.0).unwrap();
        assert_eq!(a, b);
        let a = s.node_at(1, 0, 1.25, 11.0).unwrap();
        let b = s.node_at(2, 1, 1.0, -11.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn heights_and_involution() {
        let s = tiny();
        let b = s.symmetric_base();
        assert_eq!(s.height(b), 0.0);
        assert_eq!(s.mirror(b), b);
        for v in 0..s.node_count() as u32 {
            assert_eq!(s.mirror(s.mirror(v)), v);
            assert_eq!(s.height(s.mirror(v)), -s.height(v));
            let hs: Vec<f64> = s
                .mesh()
                .members(v)
                .iter()
                .map(|&r| {
                    let (c, loc) = s.mesh().decode(r);
                    let (_, y) = s.mesh().grid().coords(s.mesh().grid().slot(loc));
                    height_of(s.mesh().copies()[c].k, y, 11.0)
                })
                .collect();
            assert!(hs.iter().all(|h| (h - hs[0]).abs() < 1e-9));
        }
    }

    #[test]
    fn phi_normalized_and_odd() {
        let s = tiny();
        let phi = s.make_phi();
        assert!((phi.copy_integral - 1.0).abs() < 1e-12);
        for v in 0..s.node_count() as u32 {
            assert_eq!(s.phi(&phi, s.mirror(v)), -s.phi(&phi, v));
            let h = s.height(v);
            if h > 0.0 {
                assert!(s.phi(&phi, v) >= 0.0);
            }
            let level = (h / 22.0).ceil();
            if h > 0.0 && h - 22.0 * (level - 1.0) > 1.0 + 1e-9 {
                assert_eq!(s.phi(&phi, v), 0.0);
            }
        }
        for r in [1.5, 5.0, 30.0] {
            assert_eq!(s.integrate(&phi, |v| s.height(v).abs() <= r), 0.0);
        }
    }

    #[test]
    fn mirror_is_isometry() {
        let s = tiny();
        let p = s.node_at(1, 0, 0.3, -4.0).unwrap();
        let q = s.node_at(2, 1, 1.0, 3.0).unwrap();
        let d1 = s.geodesic_distance(p, q).unwrap().0;
        let d2 = s.geodesic_distance(s.mirror(p), s.mirror(q)).unwrap().0;
        assert_eq!(d1, d2);
    }
}
