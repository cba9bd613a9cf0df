//! Rigid meromorphic cocycles for SL2(Z[1/p]).
//!
//! The crate evaluates the p-adic cocycles J_{k,D} and their orbit-series
//! cousins, computes their annular residues at the standard edge, lifts the
//! residue cocycle back through Schneider-Teitelbaum integration and compares
//! the real period polynomials obtained by two independent routes.
//!
//! The runnable programs under `examples/` are the intended entry points.

pub mod archimedean;
pub mod arith;
pub mod bruhat_tits;
pub mod cache;
pub mod cli;
pub mod cocycles;
pub mod error;
pub mod modsym;
pub mod poly;
pub mod quadforms;
pub mod st_lift;
pub mod verify;

pub use error::{Error, Result};
