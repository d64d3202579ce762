//! Planar birth-and-growth processes built from convex germs, set-valued
//! growth integrals, and lower/upper partition sums.

pub mod cli;
pub mod convex;
pub mod engine;
pub mod growth;
pub mod propositions;
pub mod region;
pub mod scenario;
pub mod svg;
