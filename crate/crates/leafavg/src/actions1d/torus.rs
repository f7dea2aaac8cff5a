use crate::error::{Error, Result};
use crate::group_core::{Gen, GroupAction, PointIndex, TorusIndex};

/// `f(t)(x) = x + Σ t_j α^{(j)} mod Z^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusRotation {
    alpha: Vec<Vec<f64>>,
}

impl TorusRotation {
    pub fn new(alpha: Vec<Vec<f64>>) -> Result<Self> {
        let d = alpha.first().map(Vec::len).unwrap_or(0);
        if alpha.is_empty() || d == 0 {
            return Err(Error::Invalid("torus rotation needs l >= 1 vectors in d >= 1 dimensions".into()));
        }
        if let Some(v) = alpha.iter().find(|v| v.len() != d) {
            return Err(Error::Dimension {
                expected: d,
                got: v.len(),
            });
        }
        Ok(TorusRotation { alpha })
    }

    /// Number of flow parameters.
    pub fn l(&self) -> usize {
        self.alpha.len()
    }

    /// Torus dimension.
    pub fn d(&self) -> usize {
        self.alpha[0].len()
    }

    pub fn alpha(&self, j: usize) -> &[f64] {
        &self.alpha[j]
    }

    pub fn apply(&self, t: &[f64], x: &[f64]) -> Result<Vec<f64>> {
        if t.len() != self.l() {
            return Err(Error::Dimension {
                expected: self.l(),
                got: t.len(),
            });
        }
        if x.len() != self.d() {
            return Err(Error::Dimension {
                expected: self.d(),
                got: x.len(),
            });
        }
        Ok(self.apply_unchecked(t, x))
    }

    pub(crate) fn apply_unchecked(&self, t: &[f64], x: &[f64]) -> Vec<f64> {
        (0..self.d())
            .map(|i| {
                let shift: f64 = t.iter().zip(&self.alpha).map(|(tj, a)| tj * a[i]).sum();
                (x[i] + shift).rem_euclid(1.0) % 1.0
            })
            .collect()
    }
}

pub fn torus_apply(r: &TorusRotation, t: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    r.apply(t, x)
}

/// Integer parameters act as a `Z^l` action with generators `±α^{(j)}`.
impl GroupAction for TorusRotation {
    type Point = Vec<f64>;

    fn rank(&self) -> usize {
        self.l()
    }

    fn act(&self, g: Gen, p: &Vec<f64>) -> Vec<f64> {
        let a = &self.alpha[g.index() - 1];
        let sign = if g.is_inverse() { -1.0 } else { 1.0 };
        p.iter()
            .zip(a)
            .map(|(x, ai)| (x + sign * ai).rem_euclid(1.0) % 1.0)
            .collect()
    }

    fn check_point(&self, p: &Vec<f64>) -> Result<()> {
        if p.len() != self.d() {
            return Err(Error::Dimension {
                expected: self.d(),
                got: p.len(),
            });
        }
        if p.iter().any(|x| !(0.0..1.0).contains(x)) {
            return Err(Error::Domain(format!("{p:?} is not in [0,1)^d")));
        }
        Ok(())
    }

    fn new_index(&self, tol: f64) -> Box<dyn PointIndex<Vec<f64>>> {
        Box::new(TorusIndex::new(self.d(), tol))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_time_is_identity() {
        let r = TorusRotation::new(vec![vec![2f64.sqrt(), 3f64.sqrt()]]).unwrap();
        assert_eq!(r.apply(&[0.0], &[0.25, 0.5]).unwrap(), vec![0.25, 0.5]);
        let v = r.apply(&[1.0], &[0.0, 0.0]).unwrap();
        assert!((v[0] - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!((v[1] - (3f64.sqrt() - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn dimension_checked() {
        let r = TorusRotation::new(vec![vec![0.1, 0.2]]).unwrap();
        assert!(matches!(r.apply(&[1.0, 2.0], &[0.0, 0.0]), Err(Error::Dimension { .. })));
        assert!(TorusRotation::new(vec![vec![0.1], vec![0.1, 0.2]]).is_err());
    }
}
