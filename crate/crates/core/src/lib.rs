//! Maxwell's equations on compactified Minkowski space `U(2)` and the
//! conformal action of `U(2,2)` on their solutions.

pub mod branching;
pub mod cli;
pub mod conformal;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod linalg;
pub mod pairing;
pub mod par;
pub mod rep_core;

pub use error::{Error, Result};
