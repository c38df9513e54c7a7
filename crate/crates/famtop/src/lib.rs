//! Finite-model computation of family-open, Scott and Isbell topologies on
//! spaces of continuous maps, with exhaustive splitting / joint-continuity
//! verification against catalogs of small probe spaces.

pub mod bitset;
pub mod cli;
pub mod error;
pub mod family_open;
pub mod finite_space;
pub mod fixtures;
pub mod function_space;
pub mod guards;
pub mod topology_algebra;
pub mod tower;
pub mod verification;

pub use error::{Error, Result};
pub use guards::Guards;
