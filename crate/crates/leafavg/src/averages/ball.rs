use serde::{Deserialize, Serialize};

use crate::averages::observable::Observable;
use crate::error::{Error, Result};
use crate::group_core::{orbit_ball, GroupAction, OrbitBall, PhasePoint};

/// Which measure on `G_n` the average uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BallMode {
    /// Every reduced word counts once, as in the definition of `β_n`.
    #[default]
    Words,
    /// Every orbit class of `G_n(y)` counts once.
    Classes,
}

/// Average of `φ` over the orbit ball of radius `n <= ball.radius()`.
pub fn ball_average_on<P: PhasePoint>(
    ball: &OrbitBall<P>,
    phi: &Observable,
    n: usize,
    mode: BallMode,
) -> Result<f64> {
    let size = ball.size_at(n);
    let classes = &ball.classes()[..size];
    if let Some(c) = classes.first() {
        phi.check_dim(c.point.coords().len())?;
    }
    match mode {
        BallMode::Classes => {
            let s: f64 = classes.iter().map(|c| phi.eval(&c.point.coords())).sum();
            Ok(s / size as f64)
        }
        BallMode::Words => {
            let counts = ball.word_counts(n)?;
            let total: f64 = counts.iter().sum();
            let s: f64 = classes
                .iter()
                .zip(&counts)
                .map(|(c, w)| w * phi.eval(&c.point.coords()))
                .sum();
            Ok(s / total)
        }
    }
}

/// `β_n φ(y)`.
pub fn ball_average<A: GroupAction>(
    action: &A,
    phi: &Observable,
    y: &A::Point,
    n: usize,
    tol: f64,
    mode: BallMode,
    cap: usize,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::Invalid("ball average needs n >= 1".into()));
    }
    let ball = orbit_ball(action, y, n, tol, cap)?;
    ball_average_on(&ball, phi, n, mode)
}
