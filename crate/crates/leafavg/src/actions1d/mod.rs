//! Generator actions on the circle, the interval and the torus.

pub mod circle;
pub mod iet;
pub mod pingpong;
pub mod torus;

pub use circle::{make_rotation, CircleAction, CircleMap, RationalRotation, Rotation};
pub use iet::{iet_apply, IetScalar, IntervalExchange};
pub use pingpong::{check_ping_pong, make_ping_pong, Arc1, PingPongLayout, PingPongReport, PingPongTriple};
pub use torus::{torus_apply, TorusRotation};
