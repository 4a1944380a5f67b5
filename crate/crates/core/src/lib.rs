//! Exact formal reduction of meromorphic connections `d + Γ(t) dt`.

pub mod algebra;
pub mod cohomology;
pub mod connection;
pub mod error;
pub mod json;
pub mod leading;
pub mod random;
pub mod reduction;
pub mod suites;

pub use error::{Error, Result};
