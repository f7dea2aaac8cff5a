use std::collections::HashMap;
use std::hash::Hash;

/// Lookup structure identifying points up to a tolerance.
pub trait PointIndex<P> {
    fn find(&self, p: &P) -> Option<usize>;
    fn insert(&mut self, p: &P, id: usize);
}

/// Exact identification through hashing.
#[derive(Debug, Default)]
pub struct ExactIndex<P: Hash + Eq + Clone> {
    map: HashMap<P, usize>,
}

impl<P: Hash + Eq + Clone> ExactIndex<P> {
    pub fn new() -> Self {
        ExactIndex {
            map: HashMap::new(),
        }
    }
}

impl<P: Hash + Eq + Clone> PointIndex<P> for ExactIndex<P> {
    fn find(&self, p: &P) -> Option<usize> {
        self.map.get(p).copied()
    }

    fn insert(&mut self, p: &P, id: usize) {
        self.map.insert(p.clone(), id);
    }
}

/// Distance on `R/Z`.
pub fn circle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Cell hash on the torus `R^d / Z^d` with the sup-norm of the circle distance.
#[derive(Debug)]
pub struct TorusIndex {
    dim: usize,
    tol: f64,
    cell: f64,
    ncell: i64,
    cells: HashMap<Vec<i64>, Vec<(Vec<f64>, usize)>>,
}

impl TorusIndex {
    pub fn new(dim: usize, tol: f64) -> Self {
        let cell = tol.max(1e-12);
        let ncell = (1.0 / cell).ceil() as i64;
        TorusIndex {
            dim,
            tol,
            cell,
            ncell,
            cells: HashMap::new(),
        }
    }

    fn key(&self, p: &[f64]) -> Vec<i64> {
        p.iter()
            .map(|x| ((x.rem_euclid(1.0) / self.cell).floor() as i64).rem_euclid(self.ncell))
            .collect()
    }

    fn lookup(&self, p: &[f64]) -> Option<usize> {
        let base = self.key(p);
        let mut offset = vec![-1i64; self.dim];
        loop {
            let key: Vec<i64> = base
                .iter()
                .zip(&offset)
                .map(|(b, o)| (b + o).rem_euclid(self.ncell))
                .collect();
            if let Some(bucket) = self.cells.get(&key) {
                for (q, id) in bucket {
                    if p.iter().zip(q).all(|(a, b)| circle_dist(*a, *b) <= self.tol) {
                        return Some(*id);
                    }
                }
            }
            // odometer over {-1,0,1}^dim
            let mut i = 0;
            loop {
                if i == self.dim {
                    return None;
                }
                offset[i] += 1;
                if offset[i] <= 1 {
                    break;
                }
                offset[i] = -1;
                i += 1;
            }
        }
    }

    fn put(&mut self, p: &[f64], id: usize) {
        let key = self.key(p);
        self.cells.entry(key).or_default().push((p.to_vec(), id));
    }
}

impl PointIndex<Vec<f64>> for TorusIndex {
    fn find(&self, p: &Vec<f64>) -> Option<usize> {
        self.lookup(p)
    }

    fn insert(&mut self, p: &Vec<f64>, id: usize) {
        self.put(p, id)
    }
}

/// One-dimensional torus index for scalar circle points.
#[derive(Debug)]
pub struct CircleIndex(TorusIndex);

impl CircleIndex {
    pub fn new(tol: f64) -> Self {
        CircleIndex(TorusIndex::new(1, tol))
    }
}

impl PointIndex<f64> for CircleIndex {
    fn find(&self, p: &f64) -> Option<usize> {
        self.0.lookup(std::slice::from_ref(p))
    }

    fn insert(&mut self, p: &f64, id: usize) {
        self.0.put(std::slice::from_ref(p), id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_wraps() {
        let mut idx = CircleIndex::new(1e-9);
        idx.insert(&0.9999999999995, 7);
        assert_eq!(idx.find(&0.0), Some(7));
        assert_eq!(idx.find(&0.5), None);
    }

    #[test]
    fn torus_neighbours() {
        let mut idx = TorusIndex::new(2, 1e-6);
        idx.insert(&vec![0.25, 0.9999999], 1);
        assert_eq!(idx.find(&vec![0.2500004, 0.0000003]), Some(1));
        assert_eq!(idx.find(&vec![0.2500004, 0.01]), None);
    }
}
