//! Exact computational tools for Moishezon twistor spaces on nCP².
//!
//! * [`lattice`]: Picard lattices of blown-up quadrics, the surface `S` with
//!   its anticanonical cycle, and the minitwistor resolution lattice.
//! * [`linsys`]: divisor-class checks for pluri-anticanonical systems and the
//!   blow-up multiplicity ledger.
//! * [`poly`]: rationals, polynomials, resultants, square-free decomposition.
//! * [`models`]: defining ideals of the projective models and the branch
//!   divisor derivation.
//! * [`branch`]: genus, fiber and moduli analysis of the branch divisor and
//!   the admissible-parameter search.

#![allow(clippy::needless_range_loop)]

pub mod branch;
pub mod lattice;
pub mod linsys;
pub mod models;
pub mod poly;
pub mod report;

pub use lattice::{BlowupSurface, DivisorClass, PointSpec, SurfaceS, SurfaceT};
pub use models::ModelParams;
pub use poly::{MultiPoly, Rational, UniPoly};
pub use report::VerificationReport;
