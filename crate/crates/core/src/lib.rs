//! Numerical comparison geometry on analytic model spaces.
//!
//! The crate covers constant-curvature trigonometry ([`spaceform`]), model
//! spaces with exact metrics ([`modelspaces`]), turning angles of loops
//! ([`loops`]), volume and packing estimators ([`measure`]), evaluation of
//! volume/length/turning-angle inequalities ([`bounds`]) and a scenario
//! runner with deterministic reports ([`harness`]).

pub mod bounds;
pub mod error;
pub mod harness;
pub mod loops;
pub mod measure;
pub mod modelspaces;
pub mod quad;
pub mod rng;
pub mod spaceform;

pub use error::{Error, Result};
