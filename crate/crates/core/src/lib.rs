//! Finite windows of the graph of divisibility of an integral domain.
//!
//! A [`model::DivisibilityModel`] presents the group of divisibility of a
//! domain computably. From a finite window of it this crate builds the
//! directed graph whose edges are quotients by atoms, classifies
//! factorization properties along its paths, views the window as a finite
//! Alexandrov space, and checks connectivity against the subgroup generated
//! by the atoms. Every path-based verdict can be cross-checked against the
//! brute-force factorization oracle in [`oracle`].

pub mod bundled;
pub mod classify;
pub mod config;
pub mod connectivity;
pub mod error;
pub mod graph;
pub mod lattice;
pub mod model;
pub mod oracle;
pub mod partition;
pub mod poly;
pub mod run;
pub mod topology;
pub mod value;
pub mod verdict;

pub use error::{Error, Result};
