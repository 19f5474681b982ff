//! Perturbative Chern-Simons invariants of knots.
//!
//! * [`graph`]: vertex-oriented Wilson graphs, canonical forms, contraction and enumeration.
//! * [`algebra`]: the diagram space modulo STU/IHX with exact rational arithmetic.
//! * [`knot`]: smooth closed curves, framings and singular-knot families.
//! * [`integrator`]: configuration-space integrals, self-linking, torsion and anomaly integrals.
//! * [`engine`]: assembly of `Z` and the framed invariant `Ẑ`, plus finite-type checks.
//! * [`config`], [`verify`]: run configuration and verification suites behind the `csknot` binary.

pub mod algebra;
pub mod config;
pub mod engine;
pub mod error;
pub mod graph;
pub mod integrator;
pub mod knot;
pub mod verify;

pub use error::{Error, Result};
pub use graph::WilsonGraph;
