use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `r ↦ inf_{x ∈ ∂} |B_r^X(x)|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BallProfile {
    /// `min(slope·r, volX)`
    Linear { slope: f64 },
    /// Piecewise linear through `(r, volume)` points, constant beyond the ends.
    Tabulated { points: Vec<(f64, f64)> },
}

impl BallProfile {
    pub fn eval(&self, r: f64, vol_x: f64) -> f64 {
        match self {
            BallProfile::Linear { slope } => (slope * r.max(0.0)).min(vol_x),
            BallProfile::Tabulated { points } => {
                let i = points.partition_point(|p| p.0 <= r);
                if i == 0 {
                    points[0].1
                } else if i == points.len() {
                    points[i - 1].1
                } else {
                    let (a, b) = (points[i - 1], points[i]);
                    a.1 + (b.1 - a.1) * (r - a.0) / (b.0 - a.0)
                }
            }
        }
    }
}

/// Scalar geometry of a model plug.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlugSpec {
    /// Common distance between boundary components.
    #[serde(rename = "R")]
    pub r: f64,
    /// Largest distance from a point of the plug to the boundary.
    #[serde(rename = "D")]
    pub d: f64,
    pub m0: f64,
    pub m1: f64,
    pub vol_x: f64,
    pub ball_profile: BallProfile,
}

impl PlugSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Invalid(m));
        if !(self.r > 0.0) {
            return bad(format!("R must be positive, got {}", self.r));
        }
        if !(0.0 < self.m0 && self.m0 <= self.m1 && self.m1 <= self.d) {
            return bad(format!(
                "need 0 < m0 <= m1 <= D, got m0={}, m1={}, D={}",
                self.m0, self.m1, self.d
            ));
        }
        if !(self.vol_x > 0.0) {
            return bad(format!("plug volume must be positive, got {}", self.vol_x));
        }
        if let BallProfile::Tabulated { points } = &self.ball_profile {
            if points.is_empty() {
                return bad("empty ball profile".into());
            }
            if points.windows(2).any(|w| !(w[0].0 < w[1].0) || w[1].1 < w[0].1) {
                return bad("ball profile must be nondecreasing with increasing radii".into());
            }
            if points.iter().any(|p| p.1 > self.vol_x || p.1 < 0.0) {
                return bad("ball profile exceeds the plug volume".into());
            }
        }
        if let BallProfile::Linear { slope } = &self.ball_profile {
            if !(*slope >= 0.0) {
                return bad("ball profile slope must be non-negative".into());
            }
        }
        Ok(())
    }

    /// Thin preset: R=10, D=10.5, m0=4, m1=4.5, volX=1 and a linear profile
    /// giving K = 0.5.
    pub fn thin_preset() -> Self {
        PlugSpec {
            r: 10.0,
            d: 10.5,
            m0: 4.0,
            m1: 4.5,
            vol_x: 1.0,
            // K = profile(R1 − m0)/volX = 7.5·slope
            ball_profile: BallProfile::Linear { slope: 1.0 / 15.0 },
        }
    }

    /// Cylinder-like plug used for the small boundary case.
    pub fn cylinder() -> Self {
        PlugSpec {
            r: 1.0,
            d: 1.0,
            m0: 0.5,
            m1: 0.5,
            vol_x: 1.0,
            ball_profile: BallProfile::Linear { slope: 1.0 },
        }
    }

    /// Same plug with the profile rescaled so that `K` takes the given value.
    pub fn with_k(mut self, k: f64) -> Result<Self> {
        let (_, r1) = radii_constants(&self)?;
        self.ball_profile = BallProfile::Linear {
            slope: k * self.vol_x / (r1 - self.m0),
        };
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThinLegsReport {
    /// `m1 + (D − R) < 2 m0`
    pub ineq1: bool,
    /// `2 m1 < R + m0`
    pub ineq2: bool,
    pub slack1: f64,
    pub slack2: f64,
}

impl ThinLegsReport {
    pub fn thin(&self) -> bool {
        self.ineq1 && self.ineq2
    }
}

pub fn thin_check(p: &PlugSpec) -> ThinLegsReport {
    let slack1 = 2.0 * p.m0 - (p.m1 + (p.d - p.r));
    let slack2 = p.r + p.m0 - 2.0 * p.m1;
    ThinLegsReport {
        ineq1: slack1 > 0.0,
        ineq2: slack2 > 0.0,
        slack1,
        slack2,
    }
}

/// `(R0, R1)`: midpoints of `(m1 + D − R, 2 m0)` and `(2 m1, R + m0)`.
pub fn radii_constants(p: &PlugSpec) -> Result<(f64, f64)> {
    p.validate()?;
    let rep = thin_check(p);
    if !rep.thin() {
        return Err(Error::NotThin(format!(
            "slacks {:.6} and {:.6} must both be positive",
            rep.slack1, rep.slack2
        )));
    }
    let r0 = 0.5 * (p.m1 + (p.d - p.r) + 2.0 * p.m0);
    let r1 = 0.5 * (2.0 * p.m1 + p.r + p.m0);
    Ok((r0, r1))
}

/// `(r_n, s_n) = (R0 + (n−1)R, R1 + (n−2)R)`.
pub fn radii(p: &PlugSpec, n: usize) -> Result<(f64, f64)> {
    let (r0, r1) = radii_constants(p)?;
    let nf = n as f64;
    Ok((r0 + (nf - 1.0) * p.r, r1 + (nf - 2.0) * p.r))
}

/// The four strict inequalities placing `r_n` and `s_n` between the plug
/// distances of level `n`.
pub fn radii_chain_holds(p: &PlugSpec, n: usize) -> Result<bool> {
    let (rn, sn) = radii(p, n)?;
    let nf = n as f64;
    Ok(p.m1 + (nf - 2.0) * p.r + p.d < rn
        && rn < p.m0 + (nf - 1.0) * p.r + p.m0
        && p.m1 + (nf - 2.0) * p.r + p.m1 < sn
        && sn < (nf - 1.0) * p.r + p.m0)
}

/// `K = |X|^{-1} inf_{x ∈ ∂} |B^X_{R1 − m0}(x)|`.
pub fn k_constant(p: &PlugSpec) -> Result<f64> {
    let (_, r1) = radii_constants(p)?;
    Ok(p.ball_profile.eval(r1 - p.m0, p.vol_x) / p.vol_x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thin_preset_arithmetic() {
        let p = PlugSpec::thin_preset();
        let rep = thin_check(&p);
        assert!(rep.thin());
        assert_eq!(rep.slack1, 3.0);
        assert_eq!(rep.slack2, 5.0);
        assert_eq!(radii_constants(&p).unwrap(), (6.5, 11.5));
        assert_eq!(radii(&p, 1).unwrap().0, 6.5);
        assert_eq!(radii(&p, 2).unwrap(), (16.5, 11.5));
        assert_eq!(k_constant(&p).unwrap(), 0.5);
    }

    #[test]
    fn fat_plug_not_thin() {
        let p = PlugSpec {
            r: 1.0,
            d: 3.0,
            m0: 1.0,
            m1: 1.0,
            vol_x: 1.0,
            ball_profile: BallProfile::Linear { slope: 1.0 },
        };
        assert!(!thin_check(&p).ineq1);
        assert!(matches!(radii(&p, 2), Err(Error::NotThin(_))));
    }

    #[test]
    fn boundary_slack_reported() {
        let eps = 1e-3;
        // point window, D = R, so ineq1 reads m0 < 2 m0
        let p = PlugSpec {
            r: 2.0 - eps,
            d: 2.0 - eps,
            m0: 1.0,
            m1: 1.0,
            vol_x: 1.0,
            ball_profile: BallProfile::Linear { slope: 1.0 },
        };
        let rep = thin_check(&p);
        assert!((rep.slack2 - (1.0 - eps)).abs() < 1e-12);
        let q = PlugSpec { m1: 1.5 - 0.5 * eps, d: 2.0, r: 2.0, ..p };
        assert!((thin_check(&q).slack2 - eps).abs() < 1e-12);
    }
}
