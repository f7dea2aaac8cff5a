//! Plug bounds over group orbits: thin-leg checks, sandwich bounds, the
//! small-boundary limits, the large-boundary certificate and product
//! extensions.

pub mod certificate;
pub mod plug;
pub mod product;

pub use certificate::{
    large_boundary_certificate, s_average, sandwich_bounds, small_boundary_limits, CertificateSample,
    OscillationCertificate, Sandwich, SmallBoundaryLimits,
};
pub use plug::{k_constant, radii, radii_chain_holds, radii_constants, thin_check, BallProfile, PlugSpec, ThinLegsReport};
pub use product::{product_extension_check, transferred_gap, ProductReport, ProductRow, ProductSample};
