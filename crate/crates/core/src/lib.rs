//! Bennett's spherical 8-bar linkage and its spatial counterpart built from
//! Bennett isograms: construction, motion and verification.

pub mod dual;
pub mod error;
pub mod isogram;
pub mod linkage;
pub mod cli;
pub mod oracle;
pub mod screw_geom;
pub mod sphere_geom;
pub mod tol;

pub use error::{Error, Result};
