//! Wrench polytopes for legged robots: per-limb force polytopes, the
//! actuation wrench polytope, the contact wrench cone, their intersection
//! and feasibility queries against it.

pub mod error;
pub mod io;
pub mod kernel;
pub mod limb;
pub mod query;
pub mod wrench;

pub use error::{Error, Result};
