//! Exact computer algebra for quantum multiplication by divisors on Hilbert
//! schemes of points of elliptic surfaces.
//!
//! The crate is layered bottom-up: [`algebra`] (scalars), [`series`]
//! (truncated `(p, q)` series), [`linalg`] (exact elimination), [`modforms`]
//! (Eisenstein series, theta, the quasi-Jacobi generators), [`surface`]
//! (cohomology models), [`fock`] (Nakajima operators), [`hilbop`] (operator
//! formulas) and [`mgn`] (Hodge integral oracle). [`expr`] parses class
//! expressions and [`verify`] bundles the named check suites.

pub mod algebra;
pub mod error;
pub mod expr;
pub mod fock;
pub mod hilbop;
pub mod linalg;
pub mod mgn;
pub mod modforms;
pub mod report;
pub mod series;
pub mod surface;
pub mod verify;

pub use error::{Error, Result};
