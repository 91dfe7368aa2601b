//! Finite-model workbench for involutive quantales, Hilbert modules over
//! them, and Morita equivalence.
//!
//! Everything is desk-scale and exhaustive: structures are finite tables,
//! laws are checked on all tuples, searches are brute-force with isomorph
//! rejection, and every verdict comes with a witness or a certificate.
//!
//! The crate is organized around the objects it computes with:
//!
//! - [`suplat`] — finite sup-lattices, join-preserving maps, adjoints,
//!   map enumeration and isomorphism search;
//! - [`quantale`] — involutive quantales: validation, residuation, matrix
//!   and endomorphism quantales, opposites, isomorphism search;
//! - [`hilbmod`] — modules and Hilbert modules: inner products, adjointable
//!   maps, compact operators, biproducts, quotients, limits, coequalizers;
//! - [`tensor`] — right Hilbert bimodules and the interior tensor product;
//! - [`morita`] — imprimitivity bimodules, canonical witnesses, centers,
//!   center transport and brute-force equivalence search;
//! - [`parse`] / [`catalog`] / [`report`] / [`cli`] — the `.qlab` text
//!   format, the bundled example catalog, and the command front end.
//!
//! See the `examples/` directory for one runnable walkthrough per major
//! capability; the `qlab` binary exposes the same operations as commands.

pub mod budget;
pub mod catalog;
pub mod cli;
pub mod hilbmod;
pub mod morita;
pub mod parse;
pub mod quantale;
pub mod resolve;
pub mod report;
pub mod suplat;
pub mod tensor;

pub use budget::{Budget, BudgetExceeded};
