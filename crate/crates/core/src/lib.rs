//! Entanglement criteria for N-qudit systems built on collective su(d)
//! correlations.
//!
//! The crate computes the correlation matrices C, γ, Q and 𝔘 of a dense
//! N-qudit density matrix, evaluates the su(d)-squeezing parameter ξ and the
//! associated inequality family, compares against spin squeezing, PPT and
//! CCNR, describes the separability polytope, and scans thermal states of
//! collective Hamiltonians for the temperature where detection stops.

pub mod basis;
pub mod error;
pub mod io;
pub mod linalg;
pub mod many_body;
pub mod correlations;
pub mod criteria;
pub mod models;
pub mod polytope;
pub mod report;
pub mod scan;

pub use error::{Error, Result};
