//! Default numerical thresholds, kept in one place so that tests and the CLI
//! agree on them.

/// Circle-metric distance below which two orbit points are identified.
pub const ORBIT_TOL: f64 = 1e-9;

/// Default cap on enumerated words (or orbit states).
pub const WORD_CAP: usize = 10_000_000;

/// Required margin for the ping-pong inclusion conditions.
pub const PINGPONG_MARGIN: f64 = 1e-6;

/// forward(inverse(x)) round trip tolerance for circle maps.
pub const ROUNDTRIP_TOL: f64 = 1e-12;

/// Relative target for adaptive quadrature (times sup |psi|).
pub const QUAD_REL_TOL: f64 = 1e-6;

/// Flow semigroup defect tolerance.
pub const SEMIGROUP_TOL: f64 = 1e-9;

/// Soft threshold on the windowed lambda estimate in the small boundary case.
pub const SMALL_BOUNDARY_LAMBDA: f64 = 0.05;

/// Orbit identification for the ping-pong preset. Inverse letters contract
/// by up to about 1/15, and distinct points of `G_10(y)` come within 2e-13.
pub const PINGPONG_ORBIT_TOL: f64 = 1e-14;

/// Mesh distance error scale: reported bounds are `MESH_ERROR_C · h`.
pub const MESH_ERROR_C: f64 = 2.0;
