use std::cmp::Reverse;
use std::collections::BinaryHeap;

use ordered_float::OrderedFloat;

/// Union–find over `u32` ids with path halving and union by rank.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    pub fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (lo, hi) = if self.rank[ra as usize] < self.rank[rb as usize] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[lo as usize] = hi;
        if self.rank[lo as usize] == self.rank[hi as usize] {
            self.rank[hi as usize] += 1;
        }
    }
}

fn gcd(a: i32, b: i32) -> i32 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Primitive grid offsets with both components in `[-reach, reach]`.
pub fn stencil(reach: i32) -> Vec<(i32, i32)> {
    let mut out = Vec::new();
    for dj in -reach..=reach {
        for di in -reach..=reach {
            if (di, dj) != (0, 0) && gcd(di, dj) == 1 {
                out.push((di, dj));
            }
        }
    }
    out
}

/// Multi-source Dijkstra on an implicit graph with `n` nodes.
///
/// `neighbors(v, out)` appends `(w, weight)` pairs. Nodes farther than
/// `cutoff` keep distance `+∞`. When `targets` is non-empty the search stops
/// once all of them are settled.
pub fn dijkstra<F>(n: usize, sources: &[(u32, f64)], cutoff: f64, targets: &[u32], mut neighbors: F) -> Vec<f64>
where
    F: FnMut(u32, &mut Vec<(u32, f64)>),
{
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    for &(s, d0) in sources {
        if d0 < dist[s as usize] {
            dist[s as usize] = d0;
            heap.push(Reverse((OrderedFloat(d0), s)));
        }
    }
    let mut remaining = targets.len();
    let mut is_target = vec![false; if targets.is_empty() { 0 } else { n }];
    for &t in targets {
        is_target[t as usize] = true;
    }
    let mut buf = Vec::with_capacity(64);
    while let Some(Reverse((OrderedFloat(d), v))) = heap.pop() {
        if done[v as usize] || d > dist[v as usize] {
            continue;
        }
        done[v as usize] = true;
        if !is_target.is_empty() && is_target[v as usize] {
            remaining -= 1;
            if remaining == 0 {
                break;
            }
        }
        buf.clear();
        neighbors(v, &mut buf);
        for &(w, len) in &buf {
            let nd = d + len;
            if nd <= cutoff && nd < dist[w as usize] {
                dist[w as usize] = nd;
                heap.push(Reverse((OrderedFloat(nd), w)));
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stencil_has_32_directions() {
        assert_eq!(stencil(1).len(), 8);
        assert_eq!(stencil(3).len(), 32);
    }

    #[test]
    fn union_find_classes() {
        let mut d = DisjointSets::new(6);
        d.union(0, 3);
        d.union(3, 5);
        assert_eq!(d.find(0), d.find(5));
        assert_ne!(d.find(0), d.find(1));
    }

    #[test]
    fn dijkstra_on_path() {
        let n = 10;
        let dist = dijkstra(n, &[(0, 0.0)], f64::INFINITY, &[], |v, out| {
            if v > 0 {
                out.push((v - 1, 1.5));
            }
            if (v as usize) < n - 1 {
                out.push((v + 1, 1.5));
            }
        });
        assert_eq!(dist[9], 13.5);
        let cut = dijkstra(n, &[(0, 0.0)], 3.0, &[], |v, out| {
            if (v as usize) < n - 1 {
                out.push((v + 1, 1.5));
            }
        });
        assert_eq!(cut[2], 3.0);
        assert!(cut[3].is_infinite());
    }
}
