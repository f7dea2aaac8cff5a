use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::graph::{dijkstra, stencil, DisjointSets};
use crate::geometry::metric::PantsMetric;
use crate::tolerances::MESH_ERROR_C;

/// Chart of one pants copy. The coarse chart covers `[-2,2] × [-L,-1]` with
/// horizontal spacing `4h`, which is isotropic for the metric there; the fine
/// chart covers `[-2,2] × [-1,0]` and both legs up to `y = L` with spacing `h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chart {
    Coarse,
    Fine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Slot {
    pub chart: Chart,
    pub i: usize,
    pub j: usize,
}

/// Grid layout and local geometry of a single pants copy `P^L`.
#[derive(Debug, Clone)]
pub struct PantsGrid {
    pub metric: PantsMetric,
    pub h: f64,
    pub big_l: f64,
    n: usize,
    coarse_rows: usize,
    fine_rows: usize,
    offsets: Vec<(i32, i32)>,
    coarse_weights: Vec<f64>,
    present: Vec<bool>,
    area: Vec<f64>,
}

fn integer_ratio(a: f64, b: f64) -> Option<usize> {
    let r = a / b;
    let k = r.round();
    if k >= 1.0 && (r - k).abs() < 1e-9 {
        Some(k as usize)
    } else {
        None
    }
}

impl PantsGrid {
    pub fn new(metric: PantsMetric, h: f64, big_l: f64) -> Result<Self> {
        if !(h > 0.0 && h <= 0.1) {
            return Err(Error::Mesh(format!("h = {h} is too coarse to resolve Z(1/10)")));
        }
        let half = integer_ratio(0.5, h).ok_or_else(|| Error::Mesh(format!("1/(2h) must be an integer, h = {h}")))?;
        let n = 2 * half;
        let nl = integer_ratio(big_l, h).ok_or_else(|| Error::Mesh(format!("L/h must be an integer, L = {big_l}, h = {h}")))?;
        if nl <= n + 1 {
            return Err(Error::Invalid(format!("L = {big_l} must exceed 1 + h")));
        }
        let coarse_rows = nl - n + 1;
        let fine_rows = nl + n + 1;
        let offsets = stencil(3);
        let coarse_weights = offsets.iter().map(|&(di, dj)| h * ((di * di + dj * dj) as f64).sqrt()).collect();
        let mut g = PantsGrid {
            metric,
            h,
            big_l,
            n,
            coarse_rows,
            fine_rows,
            offsets,
            coarse_weights,
            present: Vec::new(),
            area: Vec::new(),
        };
        let len = g.local_len();
        g.present = (0..len).map(|s| g.compute_present(g.slot(s))).collect();
        g.area = (0..len).map(|s| if g.present[s] { g.compute_area(g.slot(s)) } else { 0.0 }).collect();
        Ok(g)
    }

    /// Number of grid steps per unit length.
    pub fn steps_per_unit(&self) -> usize {
        self.n
    }

    fn coarse_len(&self) -> usize {
        self.n * self.coarse_rows
    }

    pub fn local_len(&self) -> usize {
        self.coarse_len() + 4 * self.n * self.fine_rows
    }

    pub fn index(&self, s: Slot) -> usize {
        match s.chart {
            Chart::Coarse => s.j * self.n + s.i,
            Chart::Fine => self.coarse_len() + s.j * 4 * self.n + s.i,
        }
    }

    pub fn slot(&self, idx: usize) -> Slot {
        if idx < self.coarse_len() {
            Slot {
                chart: Chart::Coarse,
                i: idx % self.n,
                j: idx / self.n,
            }
        } else {
            let r = idx - self.coarse_len();
            Slot {
                chart: Chart::Fine,
                i: r % (4 * self.n),
                j: r / (4 * self.n),
            }
        }
    }

    pub fn coords(&self, s: Slot) -> (f64, f64) {
        match s.chart {
            Chart::Coarse => (-2.0 + 4.0 * self.h * s.i as f64, -self.big_l + self.h * s.j as f64),
            Chart::Fine => (-2.0 + self.h * s.i as f64, -1.0 + self.h * s.j as f64),
        }
    }

    pub fn is_present(&self, idx: usize) -> bool {
        self.present[idx]
    }

    pub fn area(&self, idx: usize) -> f64 {
        self.area[idx]
    }

    /// First fine column of leg `σ`.
    fn leg_base(&self, sigma: usize) -> usize {
        self.n / 2 + 2 * self.n * sigma
    }

    fn leg_of(&self, i: usize) -> Option<usize> {
        (0..2).find(|&s| {
            let b = self.leg_base(s);
            i >= b && i <= b + self.n
        })
    }

    fn compute_present(&self, s: Slot) -> bool {
        match s.chart {
            Chart::Coarse => true,
            Chart::Fine => s.j <= self.n || self.leg_of(s.i).is_some(),
        }
    }

    fn compute_area(&self, s: Slot) -> f64 {
        let (x, y) = self.coords(s);
        let quarters = match s.chart {
            Chart::Coarse => 2 * usize::from(s.j > 0) + 2 * usize::from(s.j + 1 < self.coarse_rows),
            Chart::Fine => {
                let mut q = 0;
                for sy in [-1i64, 1] {
                    let j2 = s.j as i64 + sy;
                    if j2 < 0 || j2 >= self.fine_rows as i64 {
                        continue;
                    }
                    let top = s.j.max(j2 as usize);
                    for sx in [-1i64, 1] {
                        let i2 = (s.i as i64 + sx).rem_euclid(4 * self.n as i64) as usize;
                        let ok = if top <= self.n {
                            true
                        } else {
                            let unwrapped = s.i as i64 + sx;
                            unwrapped >= 0
                                && self.leg_of(s.i).is_some()
                                && self.leg_of(s.i) == self.leg_of(i2)
                                && (unwrapped as usize) == i2
                        };
                        q += usize::from(ok);
                    }
                }
                q
            }
        };
        let cell = match s.chart {
            Chart::Coarse => 4.0 * self.h * self.h,
            Chart::Fine => self.h * self.h,
        };
        cell * self.metric.area_density(x, y) * quarters as f64 / 4.0
    }

    /// Fine-chart target of offset `(di, dj)` from `(i, j)`, with the
    /// unwrapped target abscissa.
    fn fine_target(&self, i: usize, j: usize, di: i32, dj: i32) -> Option<(usize, usize, f64)> {
        let j2 = j as i64 + dj as i64;
        if j2 < 0 || j2 >= self.fine_rows as i64 {
            return None;
        }
        let j2 = j2 as usize;
        let n = self.n;
        let x1 = -2.0 + self.h * (i as f64 + di as f64);
        if j <= n && j2 <= n {
            let i2 = (i as i64 + di as i64).rem_euclid(4 * n as i64) as usize;
            return Some((i2, j2, x1));
        }
        if j >= n && j2 >= n {
            let sigma = self.leg_of(i)?;
            let base = self.leg_base(sigma);
            let u = (i - base) as i64 + di as i64;
            let i2 = base + u.rem_euclid(n as i64) as usize;
            return Some((i2, j2, x1));
        }
        // Crosses y = 0; the crossing point and the upper end must lie in the same leg.
        let i2 = i as i64 + di as i64;
        if i2 < 0 || i2 >= 4 * n as i64 {
            return None;
        }
        let i2 = i2 as usize;
        let (iu, ju, il, jl) = if j > n { (i, j, i2, j2) } else { (i2, j2, i, j) };
        let sigma = self.leg_of(iu)?;
        let t = (n - jl) as f64 / (ju - jl) as f64;
        let ic = il as f64 + (iu as f64 - il as f64) * t;
        let base = self.leg_base(sigma) as f64;
        if ic < base || ic > base + n as f64 {
            return None;
        }
        Some((i2, j2, x1))
    }

    /// Local neighbours of slot `idx` with edge lengths.
    pub fn neighbors(&self, idx: usize, with_bump: bool, out: &mut Vec<(usize, f64)>) {
        let s = self.slot(idx);
        match s.chart {
            Chart::Coarse => {
                for (k, &(di, dj)) in self.offsets.iter().enumerate() {
                    let j2 = s.j as i64 + dj as i64;
                    if j2 < 0 || j2 >= self.coarse_rows as i64 {
                        continue;
                    }
                    let i2 = (s.i as i64 + di as i64).rem_euclid(self.n as i64) as usize;
                    out.push((j2 as usize * self.n + i2, self.coarse_weights[k]));
                }
            }
            Chart::Fine => {
                if !self.present[idx] {
                    return;
                }
                let p = self.coords(s);
                for &(di, dj) in &self.offsets {
                    if let Some((i2, j2, x1)) = self.fine_target(s.i, s.j, di, dj) {
                        let t = self.index(Slot {
                            chart: Chart::Fine,
                            i: i2,
                            j: j2,
                        });
                        if !self.present[t] {
                            continue;
                        }
                        let q = (x1, -1.0 + self.h * j2 as f64);
                        // Evaluate from the lower endpoint so both directions agree bitwise.
                        let w = if (s.j, s.i) <= (j2, i2) {
                            self.metric.segment_length(p, q, with_bump)
                        } else {
                            let back = (-2.0 + self.h * (i2 as f64 - di as f64), p.1);
                            self.metric.segment_length(self.coords(self.slot(t)), back, with_bump)
                        };
                        out.push((t, w));
                    }
                }
            }
        }
    }

    /// Identifications inside one copy: coarse/fine interface, leg seams and
    /// the fold of the upper edge of the block.
    pub fn internal_gluings(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        let mut out = Vec::new();
        let fine = |i: usize, j: usize| self.index(Slot { chart: Chart::Fine, i, j });
        for ic in 0..n {
            out.push((self.index(Slot { chart: Chart::Coarse, i: ic, j: self.coarse_rows - 1 }), fine(4 * ic, 0)));
        }
        for sigma in 0..2 {
            let b = self.leg_base(sigma);
            for j in n..self.fine_rows {
                out.push((fine(b, j), fine(b + n, j)));
            }
        }
        // (x,0) ~ (-2-x,0) on [-1/2,0] and (x,0) ~ (2-x,0) on [0,1/2].
        for i in 3 * n / 2..=2 * n {
            out.push((fine(i, n), fine(2 * n - i, n)));
        }
        for i in 2 * n..=5 * n / 2 {
            out.push((fine(i, n), fine((6 * n - i) % (4 * n), n)));
        }
        out
    }

    /// Top row of leg `σ`, ordered by the leg coordinate `u = 0..=n`.
    pub fn leg_top(&self, sigma: usize) -> Vec<usize> {
        let b = self.leg_base(sigma);
        (0..=self.n)
            .map(|u| self.index(Slot { chart: Chart::Fine, i: b + u, j: self.fine_rows - 1 }))
            .collect()
    }

    /// Bottom row `y = -L`, ordered by column.
    pub fn bottom_row(&self) -> Vec<usize> {
        (0..self.n).map(|i| self.index(Slot { chart: Chart::Coarse, i, j: 0 })).collect()
    }

    /// Nearest grid slot to `(x, y)` in the chart `D^L`.
    pub fn locate(&self, x: f64, y: f64) -> Result<usize> {
        let l = self.big_l;
        if !(-2.0..=2.0).contains(&x) || !(-l..=l).contains(&y) {
            return Err(Error::Domain(format!("({x}, {y}) outside the pants chart")));
        }
        let idx = if y < -1.0 {
            let i = (((x + 2.0) / (4.0 * self.h)).round() as usize) % self.n;
            let j = ((y + l) / self.h).round() as usize;
            self.index(Slot { chart: Chart::Coarse, i, j: j.min(self.coarse_rows - 1) })
        } else {
            let i = (((x + 2.0) / self.h).round() as usize) % (4 * self.n);
            let j = ((y + 1.0) / self.h).round() as usize;
            self.index(Slot { chart: Chart::Fine, i, j: j.min(self.fine_rows - 1) })
        };
        if !self.present[idx] {
            return Err(Error::Domain(format!("({x}, {y}) outside the pants chart")));
        }
        Ok(idx)
    }

    /// Largest value of the bump on the grid.
    pub fn delta_effective(&self) -> f64 {
        (0..self.local_len())
            .filter(|&s| self.present[s])
            .map(|s| {
                let (x, y) = self.coords(self.slot(s));
                self.metric.chi(x, y)
            })
            .fold(0.0, f64::max)
    }

    /// Metric area of one copy.
    pub fn copy_volume(&self) -> f64 {
        self.area.iter().sum()
    }
}

/// Index of a pants copy `P^L_{k,ℓ}`; `k = 0` labels a standalone pants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CopyLabel {
    pub k: i32,
    pub l: u32,
}

/// Quotient mesh of several pants copies.
#[derive(Debug, Clone)]
pub struct PantsMesh {
    grid: PantsGrid,
    copies: Vec<CopyLabel>,
    canon: Vec<u32>,
    member_off: Vec<u32>,
    members: Vec<u32>,
    delta_eff: f64,
}

/// Upper bound on raw grid slots.
pub const MESH_SLOT_CAP: usize = 60_000_000;

/// Identification of slot `(copy, local)` with another.
pub type Gluing = ((usize, usize), (usize, usize));

impl PantsMesh {
    /// Build the quotient. `gluings` lists extra identifications between
    /// `(copy, local)` pairs.
    pub fn build(grid: PantsGrid, copies: Vec<CopyLabel>, gluings: &[Gluing]) -> Result<Self> {
        let per = grid.local_len();
        let total = per
            .checked_mul(copies.len())
            .filter(|&t| t <= MESH_SLOT_CAP)
            .ok_or(Error::ResourceCap {
                what: "mesh slots",
                needed: (per as u128) * copies.len() as u128,
                cap: MESH_SLOT_CAP as u128,
            })?;
        let mut sets = DisjointSets::new(total);
        let internal = grid.internal_gluings();
        for c in 0..copies.len() {
            for &(a, b) in &internal {
                sets.union((c * per + a) as u32, (c * per + b) as u32);
            }
        }
        for &((ca, a), (cb, b)) in gluings {
            sets.union((ca * per + a) as u32, (cb * per + b) as u32);
        }
        let mut root_id = vec![u32::MAX; total];
        let mut canon = vec![u32::MAX; total];
        let mut count = 0u32;
        #[allow(clippy::needless_range_loop)]
        for r in 0..total {
            if !grid.is_present(r % per) {
                continue;
            }
            let root = sets.find(r as u32) as usize;
            if root_id[root] == u32::MAX {
                root_id[root] = count;
                count += 1;
            }
            canon[r] = root_id[root];
        }
        let mut member_off = vec![0u32; count as usize + 1];
        for &c in canon.iter().filter(|&&c| c != u32::MAX) {
            member_off[c as usize + 1] += 1;
        }
        for i in 0..count as usize {
            member_off[i + 1] += member_off[i];
        }
        let mut fill = member_off.clone();
        let mut members = vec![0u32; member_off[count as usize] as usize];
        for (r, &c) in canon.iter().enumerate() {
            if c != u32::MAX {
                members[fill[c as usize] as usize] = r as u32;
                fill[c as usize] += 1;
            }
        }
        let delta_eff = grid.delta_effective();
        Ok(PantsMesh {
            grid,
            copies,
            canon,
            member_off,
            members,
            delta_eff,
        })
    }

    pub fn grid(&self) -> &PantsGrid {
        &self.grid
    }

    pub fn copies(&self) -> &[CopyLabel] {
        &self.copies
    }

    pub fn node_count(&self) -> usize {
        self.member_off.len() - 1
    }

    pub fn delta_effective(&self) -> f64 {
        self.delta_eff
    }

    /// `Δ* = 2 + Δ`.
    pub fn delta_star(&self) -> f64 {
        2.0 + self.delta_eff
    }

    pub fn h(&self) -> f64 {
        self.grid.h
    }

    /// A priori distance error scale `C·h`.
    pub fn error_bound(&self) -> f64 {
        MESH_ERROR_C * self.grid.h
    }

    pub fn raw(&self, copy: usize, local: usize) -> u32 {
        (copy * self.grid.local_len() + local) as u32
    }

    pub fn decode(&self, raw: u32) -> (usize, usize) {
        let per = self.grid.local_len();
        (raw as usize / per, raw as usize % per)
    }

    pub fn raw_len(&self) -> usize {
        self.canon.len()
    }

    /// Canonical node of a raw slot, if present.
    pub fn node_of_raw(&self, raw: u32) -> Option<u32> {
        let c = self.canon[raw as usize];
        (c != u32::MAX).then_some(c)
    }

    pub fn node(&self, copy: usize, local: usize) -> Option<u32> {
        self.node_of_raw(self.raw(copy, local))
    }

    pub fn members(&self, node: u32) -> &[u32] {
        let a = self.member_off[node as usize] as usize;
        let b = self.member_off[node as usize + 1] as usize;
        &self.members[a..b]
    }

    /// Copy and chart coordinates of the first member.
    pub fn position(&self, node: u32) -> (usize, f64, f64) {
        let (c, s) = self.decode(self.members(node)[0]);
        let (x, y) = self.grid.coords(self.grid.slot(s));
        (c, x, y)
    }

    pub fn node_area(&self, node: u32) -> f64 {
        self.members(node).iter().map(|&r| self.grid.area(self.decode(r).1)).sum()
    }

    pub fn neighbors(&self, node: u32, with_bump: bool, out: &mut Vec<(u32, f64)>) {
        let mut local = Vec::with_capacity(40);
        for &r in self.members(node) {
            let (c, s) = self.decode(r);
            local.clear();
            self.grid.neighbors(s, with_bump, &mut local);
            for &(t, w) in &local {
                let m = self.canon[c * self.grid.local_len() + t];
                if m != node {
                    out.push((m, w));
                }
            }
        }
    }

    /// Graph distances from the given sources, `+∞` beyond `cutoff`.
    pub fn distances(&self, sources: &[(u32, f64)], cutoff: f64, targets: &[u32]) -> Vec<f64> {
        dijkstra(self.node_count(), sources, cutoff, targets, |v, out| self.neighbors(v, true, out))
    }

    /// Mesh distance between two nodes with its a priori error scale.
    pub fn geodesic_distance(&self, p: u32, q: u32) -> Result<(f64, f64)> {
        let d = self.distances(&[(p, 0.0)], f64::INFINITY, &[q])[q as usize];
        if d.is_infinite() {
            return Err(Error::Mesh(format!("nodes {p} and {q} are not connected")));
        }
        Ok((d, self.error_bound()))
    }

    /// Metric volume of the node set selected by `keep`.
    pub fn volume<F: Fn(u32) -> bool>(&self, keep: F) -> f64 {
        let mut total = 0.0;
        for (r, &c) in self.canon.iter().enumerate() {
            if c != u32::MAX && keep(c) {
                total += self.grid.area(r % self.grid.local_len());
            }
        }
        total
    }

    /// Nodes within distance `r` of the source distances `dist`.
    pub fn metric_ball(dist: &[f64], r: f64) -> Vec<u32> {
        dist.iter().enumerate().filter(|(_, &d)| d <= r).map(|(v, _)| v as u32).collect()
    }
}

/// A single pants `P^L` meshed at resolution `h`.
pub fn build_pants(delta_target: f64, h: f64, big_l: f64) -> Result<PantsMesh> {
    let metric = PantsMetric::new(delta_target)?;
    let grid = PantsGrid::new(metric, h, big_l)?;
    let mesh = PantsMesh::build(grid, vec![CopyLabel { k: 0, l: 0 }], &[])?;
    if mesh.delta_effective() > delta_target {
        return Err(Error::Mesh(format!(
            "effective delta {} exceeds target {delta_target}",
            mesh.delta_effective()
        )));
    }
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn small() -> PantsMesh {
        build_pants(0.2, 0.05, 3.0).unwrap()
    }

    #[test]
    fn rejects_coarse_or_misaligned_grids() {
        assert!(matches!(build_pants(0.2, 0.2, 3.0), Err(Error::Mesh(_))));
        assert!(matches!(build_pants(0.2, 0.03, 3.0), Err(Error::Mesh(_))));
        assert!(matches!(build_pants(0.2, 0.05, 3.01), Err(Error::Mesh(_))));
    }

    #[test]
    fn cone_points_are_single_nodes() {
        let m = small();
        let g = m.grid();
        let a = m.node(0, g.locate(-0.5, 0.0).unwrap()).unwrap();
        let b = m.node(0, g.locate(-1.5, 0.0).unwrap()).unwrap();
        let c = m.node(0, g.locate(0.5, 0.0).unwrap()).unwrap();
        let d = m.node(0, g.locate(1.5, 0.0).unwrap()).unwrap();
        assert_eq!(a, b);
        assert_eq!(c, d);
        assert_ne!(a, c);
        assert_eq!(m.delta_effective(), 0.2);
    }

    #[test]
    fn vertical_leg_curve() {
        let m = small();
        let g = m.grid();
        let p = m.node(0, g.locate(-1.0, 2.0).unwrap()).unwrap();
        let q = m.node(0, g.locate(-1.0, 0.0).unwrap()).unwrap();
        let (d, eps) = m.geodesic_distance(p, q).unwrap();
        assert!((d - 2.0).abs() <= eps, "d = {d}");
        assert!((d - 2.0).abs() < 1e-12);
    }

    #[test]
    fn connected_and_symmetric() {
        let m = small();
        let d0 = m.distances(&[(0, 0.0)], f64::INFINITY, &[]);
        assert!(d0.iter().all(|d| d.is_finite()));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let a = rng.gen_range(0..m.node_count()) as u32;
            let b = rng.gen_range(0..m.node_count()) as u32;
            let c = rng.gen_range(0..m.node_count()) as u32;
            let da = m.distances(&[(a, 0.0)], f64::INFINITY, &[]);
            let db = m.distances(&[(b, 0.0)], f64::INFINITY, &[]);
            assert!((da[b as usize] - db[a as usize]).abs() < 1e-9);
            assert!(da[c as usize] <= da[b as usize] + db[c as usize] + 1e-9);
        }
    }

    #[test]
    fn edge_weights_are_comparable() {
        let m = small();
        let g = m.grid();
        let delta = m.delta_effective();
        let mut with = Vec::new();
        let mut without = Vec::new();
        for s in 0..g.local_len() {
            with.clear();
            without.clear();
            g.neighbors(s, true, &mut with);
            g.neighbors(s, false, &mut without);
            for (a, b) in with.iter().zip(&without) {
                assert_eq!(a.0, b.0);
                assert!(a.1 > 0.0);
                assert!(a.1 >= b.1 * (1.0 - 1e-12) && a.1 <= (1.0 + delta) * b.1 * (1.0 + 1e-12), "{s} {a:?} {b:?} {:?}", g.coords(g.slot(s)));
            }
        }
    }

    #[test]
    fn height_lower_bound_in_pants() {
        // d_P(p, q) >= |y(p) - y(q)|.
        let m = small();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..4 {
            let a = rng.gen_range(0..m.node_count()) as u32;
            let d = m.distances(&[(a, 0.0)], f64::INFINITY, &[]);
            let ya = m.position(a).2;
            for (v, &dv) in d.iter().enumerate() {
                let yv = m.position(v as u32).2;
                assert!(dv >= (ya - yv).abs() - 1e-9);
            }
        }
    }

    #[test]
    fn volume_matches_monte_carlo() {
        let big_l = 3.0;
        let m = build_pants(0.1, 0.05, big_l).unwrap();
        let mesh_vol = m.grid().copy_volume();
        // Independent oracle: uniform samples over the bounding box of D^L.
        let metric = m.grid().metric;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let samples = 400_000;
        let mut acc = 0.0;
        for _ in 0..samples {
            let x: f64 = rng.gen_range(-2.0..2.0);
            let y: f64 = rng.gen_range(-big_l..big_l);
            let inside = y <= 0.0 || (0.5..=1.5).contains(&x.abs());
            if inside {
                acc += metric.area_density(x, y);
            }
        }
        let mc = acc / samples as f64 * 4.0 * 2.0 * big_l;
        assert!((mesh_vol - mc).abs() / mc < 0.01, "mesh {mesh_vol} mc {mc}");
    }

    #[test]
    fn small_ball_area_on_the_cylinder() {
        let m = build_pants(0.1, 0.05, 25.0).unwrap();
        let g = m.grid();
        let p = m.node(0, g.locate(0.0, -12.0).unwrap()).unwrap();
        let r = 2.0;
        let d = m.distances(&[(p, 0.0)], r, &[]);
        let area = m.volume(|v| d[v as usize] <= r);
        // Flat cylinder of circumference 1: the ball meets height y in an
        // arc of length min(1, 2√(r² - y²)).
        let steps = 20_000;
        let exact: f64 = (0..steps)
            .map(|i| {
                let y = -r + (i as f64 + 0.5) * 2.0 * r / steps as f64;
                (2.0 * (r * r - y * y).sqrt()).min(1.0) * 2.0 * r / steps as f64
            })
            .sum();
        assert!((area - exact).abs() / exact < 0.05, "area {area}");
    }
}
