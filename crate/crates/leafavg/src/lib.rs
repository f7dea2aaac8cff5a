//! Length averages of codimension-one foliations, computed through ball
//! averages of finitely generated group actions.
//!
//! Modules follow the data flow: [`group_core`] enumerates words and orbit
//! balls, [`actions1d`] supplies concrete actions, [`averages`] turns orbits
//! into averages, [`suspension`] assembles plug bounds and certificates,
//! [`geometry`] meshes the explicit surfaces, and [`flows`] handles the
//! suspension flow over interval exchanges. [`cli`] drives all of them.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod actions1d;
pub mod averages;
pub mod cli;
pub mod error;
pub mod flows;
pub mod geometry;
pub mod group_core;
pub mod suspension;
pub mod tolerances;

pub use error::{Error, Result};
