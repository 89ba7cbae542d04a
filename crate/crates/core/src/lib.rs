//! Finite-field point configurations, del Pezzo surface point counts and
//! Weyl group class tables.

pub mod error;
pub mod gf;
pub mod plane;
pub mod lattice;
pub mod search;
pub mod snf;
pub mod classes;
pub mod surfaces;
pub mod selftest;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
