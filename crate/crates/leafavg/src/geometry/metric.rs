use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `6t⁵ − 15t⁴ + 10t³` clamped to `[0, 1]`.
pub fn smoothstep5(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * t * (t * (t * 6.0 - 15.0) + 10.0)
}

/// Profile `ρ` of the strip metric `ρ(y)² dx² + dy²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripSpec {
    /// Value for `y ≤ blend_start`.
    pub lower: f64,
    /// Value for `y ≥ blend_end`.
    pub upper: f64,
    pub blend_start: f64,
    pub blend_end: f64,
}

impl Default for StripSpec {
    fn default() -> Self {
        StripSpec {
            lower: 0.25,
            upper: 1.0,
            blend_start: -1.0,
            blend_end: -0.5,
        }
    }
}

/// Validated strip profile.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Strip {
    spec: StripSpec,
}

pub fn build_strip(spec: StripSpec) -> Result<Strip> {
    if spec.lower != 0.25 || spec.upper != 1.0 {
        return Err(Error::Invalid(format!(
            "strip profile must run from 1/4 to 1, got {} to {}",
            spec.lower, spec.upper
        )));
    }
    if !(spec.blend_start >= -1.0 && spec.blend_start < spec.blend_end && spec.blend_end <= -0.5) {
        return Err(Error::Invalid(format!(
            "blend interval [{}, {}] must sit inside [-1, -1/2]",
            spec.blend_start, spec.blend_end
        )));
    }
    Ok(Strip { spec })
}


impl Strip {
    pub fn spec(&self) -> StripSpec {
        self.spec
    }

    pub fn rho(&self, y: f64) -> f64 {
        let s = &self.spec;
        let t = (y - s.blend_start) / (s.blend_end - s.blend_start);
        s.lower + (s.upper - s.lower) * smoothstep5(t)
    }

    /// Metric coefficients `(E, G)` of `E dx² + G dy²`.
    pub fn metric(&self, y: f64) -> (f64, f64) {
        let r = self.rho(y);
        (r * r, 1.0)
    }

    /// Length of the straight coordinate segment `p → q` by composite Simpson.
    pub fn segment_length(&self, p: (f64, f64), q: (f64, f64), panels: usize) -> f64 {
        let (dx, dy) = (q.0 - p.0, q.1 - p.1);
        simpson(panels, |t| {
            let r = self.rho(p.1 + t * dy);
            (r * r * dx * dx + dy * dy).sqrt()
        })
    }
}

/// Composite Simpson on `[0, 1]` with `2·panels` subintervals.
pub(crate) fn simpson<F: Fn(f64) -> f64>(panels: usize, f: F) -> f64 {
    let m = 2 * panels.max(1);
    let step = 1.0 / m as f64;
    let mut s = f(0.0) + f(1.0);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(i as f64 * step);
    }
    s * step / 3.0
}

/// Cone points of the pants chart, where the fold gluing meets the legs.
pub const CONE_POINTS: [(f64, f64); 4] = [(-1.5, 0.0), (-0.5, 0.0), (0.5, 0.0), (1.5, 0.0)];

/// Radius of the discs carrying the conformal bump.
pub const BUMP_RADIUS: f64 = 1.0 / 9.0;

/// Pants metric: the strip metric times a conformal length factor `1 + χ`,
/// with `χ` supported in the discs of radius 1/9 about the cone points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PantsMetric {
    pub strip: Strip,
    /// Peak of `χ`.
    pub delta: f64,
}

impl PantsMetric {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::Invalid(format!("delta must be positive, got {delta}")));
        }
        Ok(PantsMetric {
            strip: Strip::default(),
            delta,
        })
    }

    pub fn chi(&self, x: f64, y: f64) -> f64 {
        let mut best = f64::INFINITY;
        for (cx, cy) in CONE_POINTS {
            best = best.min((x - cx).hypot(y - cy));
        }
        if best >= BUMP_RADIUS {
            0.0
        } else {
            self.delta * smoothstep5(1.0 - best / BUMP_RADIUS)
        }
    }

    /// Whether the segment's bounding box comes within the bump radius of a
    /// cone point.
    fn near_cone(p: (f64, f64), q: (f64, f64)) -> bool {
        let (x0, x1) = (p.0.min(q.0), p.0.max(q.0));
        let (y0, y1) = (p.1.min(q.1), p.1.max(q.1));
        CONE_POINTS.iter().any(|&(cx, cy)| {
            let dx = (x0 - cx).max(cx - x1).max(0.0);
            let dy = (y0 - cy).max(cy - y1).max(0.0);
            dx.hypot(dy) < BUMP_RADIUS
        })
    }

    /// Length of the coordinate segment `p → q`; `with_bump = false` gives
    /// the length for the unperturbed metric.
    pub fn segment_length(&self, p: (f64, f64), q: (f64, f64), with_bump: bool) -> f64 {
        let (dx, dy) = (q.0 - p.0, q.1 - p.1);
        let blend_end = self.strip.spec().blend_end;
        let bump = with_bump && Self::near_cone(p, q);
        if p.1.min(q.1) >= blend_end && !bump {
            return dx.hypot(dy);
        }
        simpson(4, |t| {
            let x = p.0 + t * dx;
            let y = p.1 + t * dy;
            let r = self.strip.rho(y);
            let f = if bump { 1.0 + self.chi(x, y) } else { 1.0 };
            f * (r * r * dx * dx + dy * dy).sqrt()
        })
    }

    /// Area density `√(EG)` with the bump, in coordinates.
    pub fn area_density(&self, x: f64, y: f64) -> f64 {
        let f = 1.0 + self.chi(x, y);
        self.strip.rho(y) * f * f
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strip_values() {
        let s = build_strip(StripSpec::default()).unwrap();
        assert_eq!(s.rho(0.0), 1.0);
        assert_eq!(s.rho(-2.0), 0.25);
        assert!((s.segment_length((-2.0, -2.0), (2.0, -2.0), 4) - 1.0).abs() < 1e-15);
        for i in 0..100 {
            let y = -1.5 + i as f64 * 0.01;
            let r = s.rho(y);
            assert!((0.25..=1.0).contains(&r));
            assert!(s.rho(y + 0.01) >= r);
        }
    }

    #[test]
    fn strip_rejects_bad_profiles() {
        let spec = StripSpec {
            blend_end: 0.0,
            ..StripSpec::default()
        };
        assert!(build_strip(spec).is_err());
        let spec = StripSpec {
            lower: 0.3,
            ..StripSpec::default()
        };
        assert!(build_strip(spec).is_err());
    }

    #[test]
    fn bump_support_and_peak() {
        let m = PantsMetric::new(0.5).unwrap();
        assert_eq!(m.chi(0.5, 0.0), 0.5);
        assert_eq!(m.chi(-1.5, 0.0), 0.5);
        assert_eq!(m.chi(0.5 + BUMP_RADIUS, 0.0), 0.0);
        assert_eq!(m.chi(1.0, 0.0), 0.0);
    }

    #[test]
    fn bump_bounds_lengths() {
        let m = PantsMetric::new(0.3).unwrap();
        let p = (0.45, -0.05);
        let q = (0.55, 0.05);
        let w = m.segment_length(p, q, true);
        let w0 = m.segment_length(p, q, false);
        assert!(w > w0 && w <= 1.3 * w0);
    }
}
