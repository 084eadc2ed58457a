//! Executable cyclic-cohomology constructions at desk scale.
//!
//! The crate is organised around the objects that appear when one pairs
//! asymptotic cyclic cocycles with K-theory:
//!
//! - [`growth`]: the asymptotic hierarchy `E(y_n)` of sequences, root-test
//!   profiles, radius-of-convergence estimates and entire-cochain verdicts,
//!   all as finite-prefix decision procedures.
//! - [`cocyclic`]: generic cocyclic modules with their derived operators
//!   `b`, `b'`, `N`, `B`, identity suites, the `(b, B)` and Tsygan totals,
//!   asymptotic normalisation and exact homology of finite mixed complexes.
//! - [`simplex`]: the cocyclic module of geometric simplices with exact
//!   rational coordinates and the universal even index cocycle.
//! - [`charmaps`]: shuffles, diagonal cup products, the polynomial Hopf
//!   cocyclic module, the `ι`/`η` embeddings and the characteristic map `χ`.
//! - [`fredholm`]: finite-dimensional theta-summable Fredholm modules, heat
//!   kernels, JLO brackets, K-theory pairings and spectral flow.
//! - [`io`]: JSON schemas shared with the command-line driver.

pub mod charmaps;
pub mod cocyclic;
pub mod error;
pub mod fredholm;
pub mod growth;
pub mod io;
pub mod linalg;
pub mod rational;
pub mod simplex;

pub use error::{Error, Result};
pub use rational::Rational;
