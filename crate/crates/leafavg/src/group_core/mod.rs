//! Reduced words, balls of the free group and orbit balls of actions.

pub mod ball;
pub mod index;
pub mod orbit;
pub mod word;

pub use ball::{ball_size, enumerate_ball, sphere_size, BallEnumeration};
pub use index::{circle_dist, CircleIndex, ExactIndex, PointIndex, TorusIndex};
pub use orbit::{
    folner_defect, lambda_from_sizes, lambda_series, orbit_ball, orbit_sizes, FreeAction, GroupAction,
    OrbitBall, OrbitClass, PhasePoint,
};
pub use word::{reduce, Gen, Word};
