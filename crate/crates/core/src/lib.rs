//! Extended formulations for the polytopes of binary languages.
//!
//! A language `L ⊆ {0,1}*` induces for every length `n` the 0/1 polytope
//! `conv(L(n))`. This crate compiles language descriptions (explicit sets,
//! 0/1-labeled automata, online Turing machines and combinators) into
//! explicit extended formulations of those polytopes and verifies them
//! against a brute-force oracle with exact rational LPs.
//!
//! The geometric core is generic over [`Scalar`]; the aliases below fix the
//! scalar to [`Rational`], which is what the rest of the crate and the CLI
//! use.

pub mod error;
pub mod closures;
pub mod exactlp;
pub mod langs;
pub mod machines;
pub mod polytope;
pub mod scalar;
pub mod verify;
pub mod walkpoly;
pub mod zoo;

pub use error::{Error, Result};
pub use scalar::{BigRational, Rational, Scalar};

pub type LinSystem = exactlp::LinSystem<Rational>;
pub type LinConstraint = exactlp::LinConstraint<Rational>;
pub type ExtendedFormulation = polytope::ExtendedFormulation<Rational>;
