use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::geometry::graph::DisjointSets;

/// Boundary-component graph of `k` glued copies of the binary plug tree.
///
/// Each plug piece has three boundary components at mutual distance `r0`.
/// One tree has pieces `(m, ℓ)` for `0 ≤ m < n`; the children side `s` of
/// `(m, ℓ)` is glued to the root side of `(m+1, 2ℓ+s)`. The free components
/// are the root `∂⁰` and the `2ⁿ` leaves `∂¹..∂^{2ⁿ}`.
struct PlugGraph {
    adj: Vec<Vec<usize>>,
    /// Class of `∂⁰` in each tree copy.
    roots: Vec<usize>,
    /// Class of `∂^j`, `j = 1..=2ⁿ`, in each tree copy.
    leaves: Vec<Vec<usize>>,
}

fn tree_components(n: u32) -> (usize, Vec<[usize; 3]>) {
    // Component ids: piece p has root-side 3p, children sides 3p+1, 3p+2.
    let pieces = (1usize << n) - 1;
    let mut faces = Vec::with_capacity(pieces);
    for p in 0..pieces {
        faces.push([3 * p, 3 * p + 1, 3 * p + 2]);
    }
    (3 * pieces, faces)
}

fn piece(m: u32, l: usize) -> usize {
    (1usize << m) - 1 + l
}

fn build(n: u32, k: usize) -> PlugGraph {
    let (per, faces) = tree_components(n);
    let total = per * k;
    let mut sets = DisjointSets::new(total);
    for t in 0..k {
        for m in 0..n.saturating_sub(1) {
            for l in 0..(1usize << m) {
                for s in 0..2 {
                    let parent = faces[piece(m, l)][1 + s];
                    let child = faces[piece(m + 1, 2 * l + s)][0];
                    sets.union((t * per + parent) as u32, (t * per + child) as u32);
                }
            }
        }
    }
    let leaf = |t: usize, j: usize| {
        let l = (j - 1) / 2;
        let s = (j - 1) % 2;
        t * per + faces[piece(n - 1, l)][1 + s]
    };
    // ∂^i of copy j is glued to ∂^{j+1} of copy i whenever i > j.
    for i in 0..k {
        for j in 0..i {
            sets.union(leaf(j, i) as u32, leaf(i, j + 1) as u32);
        }
    }
    let mut class = vec![usize::MAX; total];
    let mut next = 0;
    let mut ids = vec![0usize; total];
    for (v, id) in ids.iter_mut().enumerate() {
        let r = sets.find(v as u32) as usize;
        if class[r] == usize::MAX {
            class[r] = next;
            next += 1;
        }
        *id = class[r];
    }
    let mut adj = vec![Vec::new(); next];
    for t in 0..k {
        for f in &faces {
            for a in 0..3 {
                for b in 0..3 {
                    if a != b {
                        adj[ids[t * per + f[a]]].push(ids[t * per + f[b]]);
                    }
                }
            }
        }
    }
    let roots = (0..k).map(|t| ids[t * per + faces[0][0]]).collect();
    let leaves = (0..k).map(|t| (1..=1usize << n).map(|j| ids[leaf(t, j)]).collect()).collect();
    PlugGraph { adj, roots, leaves }
}

fn hops(adj: &[Vec<usize>], from: usize) -> Vec<u64> {
    let mut d = vec![u64::MAX; adj.len()];
    d[from] = 0;
    let mut q = VecDeque::from([from]);
    while let Some(v) = q.pop_front() {
        for &w in &adj[v] {
            if d[w] == u64::MAX {
                d[w] = d[v] + 1;
                q.push_back(w);
            }
        }
    }
    d
}

fn check(n: u32, k: usize, r0: f64) -> Result<()> {
    if n == 0 || n > 20 {
        return Err(Error::Invalid(format!("tree depth n must be in 1..=20, got {n}")));
    }
    if k < 2 || k > (1usize << n) + 1 {
        return Err(Error::Invalid(format!("need 2 <= k <= 2^n + 1 = {}, got {k}", (1usize << n) + 1)));
    }
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(Error::Invalid(format!("r0 must be positive, got {r0}")));
    }
    Ok(())
}

/// Pairwise distances between the `k` root components `∂⁰_{(i)}` of the
/// assembled surface, as hop counts times `r0`.
pub fn plug_tree_distances(n: u32, k: usize, r0: f64) -> Result<Vec<Vec<f64>>> {
    check(n, k, r0)?;
    let g = build(n, k);
    Ok(g.roots
        .iter()
        .map(|&a| {
            let d = hops(&g.adj, a);
            g.roots.iter().map(|&b| d[b] as f64 * r0).collect()
        })
        .collect())
}

/// Distances from `∂⁰` to each leaf `∂^j` inside a single tree.
pub fn plug_tree_root_to_leaves(n: u32, r0: f64) -> Result<Vec<f64>> {
    check(n, 2, r0)?;
    let g = build(n, 1);
    let d = hops(&g.adj, g.roots[0]);
    Ok(g.leaves[0].iter().map(|&l| d[l] as f64 * r0).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_plugs() {
        let d = plug_tree_distances(1, 2, 7.5).unwrap();
        assert_eq!(d[0][1], 15.0);
        assert_eq!(d[1][0], 15.0);
        assert_eq!(d[0][0], 0.0);
    }

    #[test]
    fn five_trees_of_depth_three() {
        let r0 = 7.5;
        let d = plug_tree_distances(3, 5, r0).unwrap();
        for (i, row) in d.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(v, if i == j { 0.0 } else { 6.0 * r0 });
            }
        }
    }

    #[test]
    fn leaves_at_depth() {
        let d = plug_tree_root_to_leaves(3, 2.0).unwrap();
        assert_eq!(d.len(), 8);
        assert!(d.iter().all(|&v| v == 6.0));
    }

    #[test]
    fn rejects_too_many_trees() {
        assert!(plug_tree_distances(2, 6, 1.0).is_err());
        assert!(plug_tree_distances(0, 2, 1.0).is_err());
        assert!(plug_tree_distances(2, 1, 1.0).is_err());
    }
}
