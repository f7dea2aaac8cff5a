use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One Fourier mode `a cos(2π m·x) + b sin(2π m·x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigTerm {
    pub freq: Vec<i64>,
    #[serde(default)]
    pub cos: f64,
    #[serde(default)]
    pub sin: f64,
}

impl TrigTerm {
    pub fn phase(&self, x: &[f64]) -> f64 {
        TAU * self.freq.iter().zip(x).map(|(&m, &xi)| m as f64 * xi).sum::<f64>()
    }
}

/// Bounded observables on a circle or torus, evaluated on coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Observable {
    Constant {
        value: f64,
    },
    Trig {
        #[serde(default)]
        constant: f64,
        terms: Vec<TrigTerm>,
    },
    /// Periodic bump `height·(1 − (d/width)^2)^2` for circle distance `d < width`.
    Bump {
        center: f64,
        width: f64,
        height: f64,
        #[serde(default)]
        axis: usize,
    },
    /// `+1` on `[0, split)` and `−1` on `[split, 1)`.
    Sign {
        split: f64,
        #[serde(default)]
        axis: usize,
    },
}

impl Observable {
    pub fn constant(value: f64) -> Self {
        Observable::Constant { value }
    }

    /// `scale·cos(2π x_axis)` on a `dim`-torus.
    pub fn cosine(dim: usize, axis: usize, scale: f64) -> Self {
        let mut freq = vec![0; dim];
        freq[axis] = 1;
        Observable::Trig {
            constant: 0.0,
            terms: vec![TrigTerm {
                freq,
                cos: scale,
                sin: 0.0,
            }],
        }
    }

    /// Smallest coordinate dimension the observable reads.
    pub fn min_dim(&self) -> usize {
        match self {
            Observable::Constant { .. } => 0,
            Observable::Trig { terms, .. } => terms.iter().map(|t| t.freq.len()).max().unwrap_or(0),
            Observable::Bump { axis, .. } | Observable::Sign { axis, .. } => axis + 1,
        }
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        match self {
            Observable::Trig { terms, .. } => {
                if let Some(t) = terms.iter().find(|t| t.freq.len() != dim) {
                    return Err(Error::Dimension {
                        expected: dim,
                        got: t.freq.len(),
                    });
                }
            }
            _ if self.min_dim() > dim => {
                return Err(Error::Dimension {
                    expected: dim,
                    got: self.min_dim(),
                })
            }
            _ => {}
        }
        if let Observable::Bump { width, .. } = self {
            if !(*width > 0.0 && *width <= 0.5) {
                return Err(Error::Invalid(format!("bump width {width} outside (0, 1/2]")));
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Observable::Constant { value } => *value,
            Observable::Trig { constant, terms } => {
                constant
                    + terms
                        .iter()
                        .map(|t| {
                            let th = t.phase(x);
                            t.cos * th.cos() + t.sin * th.sin()
                        })
                        .sum::<f64>()
            }
            Observable::Bump {
                center,
                width,
                height,
                axis,
            } => {
                let d = crate::group_core::circle_dist(x[*axis], *center);
                if d >= *width {
                    0.0
                } else {
                    let u = d / width;
                    height * (1.0 - u * u).powi(2)
                }
            }
            Observable::Sign { split, axis } => {
                if x[*axis].rem_euclid(1.0) < *split {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }

    /// Upper bound for `sup |φ|`.
    pub fn sup_norm(&self) -> f64 {
        match self {
            Observable::Constant { value } => value.abs(),
            Observable::Trig { constant, terms } => {
                constant.abs() + terms.iter().map(|t| t.cos.hypot(t.sin)).sum::<f64>()
            }
            Observable::Bump { height, .. } => height.abs(),
            Observable::Sign { .. } => 1.0,
        }
    }

    /// Integral against Lebesgue measure on the torus.
    pub fn lebesgue_mean(&self) -> f64 {
        match self {
            Observable::Constant { value } => *value,
            Observable::Trig { constant, terms } => {
                constant
                    + terms
                        .iter()
                        .filter(|t| t.freq.iter().all(|&m| m == 0))
                        .map(|t| t.cos)
                        .sum::<f64>()
            }
            // ∫_{-w}^{w} (1-(d/w)^2)^2 dd = 16w/15
            Observable::Bump { width, height, .. } => height * 16.0 * width / 15.0,
            Observable::Sign { split, .. } => 2.0 * split - 1.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_mean_matches_riemann_sum() {
        let b = Observable::Bump {
            center: 0.95,
            width: 0.2,
            height: 2.0,
            axis: 0,
        };
        let n = 200_000;
        let s: f64 = (0..n).map(|i| b.eval(&[(i as f64 + 0.5) / n as f64])).sum::<f64>() / n as f64;
        assert!((s - b.lebesgue_mean()).abs() < 1e-8);
    }

    #[test]
    fn json_round_trip() {
        let o = Observable::cosine(2, 0, 1.0);
        let txt = serde_json::to_string(&o).unwrap();
        assert_eq!(serde_json::from_str::<Observable>(&txt).unwrap(), o);
        assert!((o.eval(&[0.5, 0.3]) + 1.0).abs() < 1e-15);
    }
}
