use serde::{Deserialize, Serialize};

use crate::averages::{AverageSeries, BallMode, Observable};
use crate::error::{Error, Result};
use crate::group_core::{lambda_from_sizes, orbit_ball, orbit_sizes, GroupAction, PhasePoint};
use crate::suspension::plug::{k_constant, radii, PlugSpec};
use crate::tolerances::SMALL_BOUNDARY_LAMBDA;

/// Bounds on the leaf ball average of `φ̃` at radius `r`.
///
/// They are rigorous for non-negative `φ̃`; for signed observables they are
/// the same orbit expressions without the inclusion guarantee.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sandwich {
    pub n: usize,
    pub lower: f64,
    pub upper: f64,
    /// `(|G_{n+1}(y)| − |G_{n−1}(y)|) / |G_{n+1}(y)|`
    pub boundary_ratio: f64,
}

pub fn sandwich_bounds<A: GroupAction>(
    action: &A,
    y: &A::Point,
    phi: &Observable,
    p: &PlugSpec,
    r: f64,
    tol: f64,
    cap: usize,
) -> Result<Sandwich> {
    p.validate()?;
    if !(r >= p.r) {
        return Err(Error::Invalid(format!("radius {r} below the plug distance R={}", p.r)));
    }
    let n = (r / p.r).floor() as usize;
    let ball = orbit_ball(action, y, n + 1, tol, cap)?;
    let pts: Vec<f64> = ball
        .classes()
        .iter()
        .map(|c| phi.eval(&c.point.coords()))
        .collect();
    if let Some(c) = ball.classes().first() {
        phi.check_dim(c.point.coords().len())?;
    }
    let (lo, hi) = (ball.size_at(n - 1), ball.size_at(n + 1));
    let sum_lo: f64 = pts[..lo].iter().sum();
    let sum_hi: f64 = pts[..hi].iter().sum();
    // (1/|X|)(1−q)·mean_{G_{n−1}} = Σ_{G_{n−1}} / (|X| |G_{n+1}|), and dually.
    let lower = sum_lo / (p.vol_x * hi as f64);
    let upper = if lo == 0 {
        f64::INFINITY
    } else {
        sum_hi / (p.vol_x * lo as f64)
    };
    Ok(Sandwich {
        n,
        lower,
        upper,
        boundary_ratio: (hi - lo) as f64 / hi as f64,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallBoundaryLimits {
    pub limsup: f64,
    pub liminf: f64,
    pub gap: f64,
    pub lambda_estimate: f64,
    /// False when the windowed λ estimate exceeds the soft threshold.
    pub hypothesis_ok: bool,
    pub series: AverageSeries,
}

/// Windowed limsup/liminf of `(1/|X|) β_n φ̃(y)` for `n = 1..=N`.
#[allow(clippy::too_many_arguments)]
pub fn small_boundary_limits<A: GroupAction>(
    action: &A,
    y: &A::Point,
    phi: &Observable,
    p: &PlugSpec,
    big_n: usize,
    mode: BallMode,
    tol: f64,
    cap: usize,
) -> Result<SmallBoundaryLimits> {
    p.validate()?;
    if big_n < 2 {
        return Err(Error::Invalid("need N >= 2".into()));
    }
    let ball = orbit_ball(action, y, big_n, tol, cap)?;
    if let Some(c) = ball.classes().first() {
        phi.check_dim(c.point.coords().len())?;
    }
    let values: Vec<f64> = ball
        .classes()
        .iter()
        .map(|c| phi.eval(&c.point.coords()))
        .collect();
    let samples: Vec<(f64, f64, f64)> = match mode {
        BallMode::Words => {
            let mut num = 0.0;
            let mut den = 0.0;
            ball.level_word_sums(&values)
                .into_iter()
                .enumerate()
                .map(|(i, (a, b))| {
                    num += a;
                    den += b;
                    ((i + 1) as f64, num / den / p.vol_x, 0.0)
                })
                .collect()
        }
        BallMode::Classes => {
            let mut acc = 0.0;
            let mut prev = 0;
            (1..=big_n)
                .map(|m| {
                    let size = ball.size_at(m);
                    acc += values[prev..size].iter().sum::<f64>();
                    prev = size;
                    (m as f64, acc / size as f64 / p.vol_x, 0.0)
                })
                .collect()
        }
    };
    let series = AverageSeries::with_quarter_window(samples)?;
    let lambda = lambda_from_sizes(&ball.sizes())?;
    let lambda_estimate = lambda.limsup_estimate();
    let (limsup, liminf) = (series.limsup_estimate(), series.liminf_estimate());
    Ok(SmallBoundaryLimits {
        limsup,
        liminf,
        gap: limsup - liminf,
        lambda_estimate,
        hypothesis_ok: lambda_estimate <= SMALL_BOUNDARY_LAMBDA,
        series,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateSample {
    pub n: usize,
    pub r: f64,
    pub avg_r: f64,
    pub s: f64,
    pub avg_s: f64,
    /// `|G_n(y) \ G_{n−1}(y)| / |G_n(y)|`
    pub ratio: f64,
}

/// Non-convergence certificate for a thin plug over an orbit with a large
/// boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillationCertificate {
    #[serde(rename = "K")]
    pub k: f64,
    pub window: usize,
    pub samples: Vec<CertificateSample>,
    #[serde(rename = "limsupLower")]
    pub limsup_lower: f64,
    pub upper: f64,
    pub gap: f64,
    #[serde(rename = "lambdaWindow")]
    pub lambda_window: f64,
    /// `1 / (1 − (1−K) λ)` with λ the windowed estimate.
    #[serde(rename = "asymptoticLower")]
    pub asymptotic_lower: f64,
}

/// Average at `s_n`: `|G_n| / (|G_n| − (1−K)|G_n \ G_{n−1}|)`.
pub fn s_average(k: f64, size: usize, sphere: usize) -> f64 {
    let g = size as f64;
    g / (g - (1.0 - k) * sphere as f64)
}

pub fn large_boundary_certificate<A: GroupAction>(
    action: &A,
    y: &A::Point,
    p: &PlugSpec,
    big_n: usize,
    tol: f64,
    cap: usize,
) -> Result<OscillationCertificate> {
    if big_n < 2 {
        return Err(Error::Invalid("certificate needs N >= 2".into()));
    }
    let k = k_constant(p)?;
    let sizes = orbit_sizes(action, y, big_n, tol, cap)?;
    let samples = (2..=big_n)
        .map(|n| {
            let (r, s) = radii(p, n)?;
            let size = sizes[n];
            let sphere = sizes[n] - sizes[n - 1];
            // ∫_{B_{r_n}} φ = |X||G_n| and |B_{r_n}| >= |X||G_n|; the bound is attained.
            let num = p.vol_x * size as f64;
            let avg_r = num / (p.vol_x * size as f64);
            Ok(CertificateSample {
                n,
                r,
                avg_r,
                s,
                avg_s: s_average(k, size, sphere),
                ratio: sphere as f64 / size as f64,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let window = big_n.div_ceil(4).min(samples.len());
    let tail = &samples[samples.len() - window..];
    let limsup_lower = tail.iter().map(|s| s.avg_s).fold(f64::NEG_INFINITY, f64::max);
    let lambda_window = tail.iter().map(|s| s.ratio).fold(f64::NEG_INFINITY, f64::max);
    let upper = 1.0;
    Ok(OscillationCertificate {
        k,
        window,
        samples,
        limsup_lower,
        upper,
        gap: limsup_lower - upper,
        lambda_window,
        asymptotic_lower: 1.0 / (1.0 - (1.0 - k) * lambda_window),
    })
}
