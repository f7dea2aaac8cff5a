//! Ball averages over orbits, continuous ball averages of torus
//! translations, and series diagnostics.

pub mod ball;
pub mod observable;
pub mod quadrature;
pub mod rotation;
pub mod series;

pub use ball::{ball_average, ball_average_on, BallMode};
pub use observable::{Observable, TrigTerm};
pub use quadrature::{Estimate, GaussLegendre};
pub use rotation::{ball_kernel, bessel_j1, rotation_ball_average, rotation_closed_form, RotationAverage};
pub use series::{oscillation_diagnostic, AverageSeries, Oscillation, Sample};
pub use crate::flows::time_average;
