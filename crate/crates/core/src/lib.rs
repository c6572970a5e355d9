//! Measure-theoretic analysis of k-regular sequences.
//!
//! A k-regular sequence is given by a [`LinearRepresentation`]: digit matrices
//! `B_0, ..., B_{k-1}`, a terminal vector `w` and a selector row. From it this
//! crate builds
//!
//! - exact fundamental-region sums and their linear recursion ([`sums`]),
//! - eigen-structure, primitivity and joint-spectral-radius bounds ([`spectral`]),
//! - the pure point approximant measures, the normalised cocycle `A_n(z)`,
//!   Fourier coefficient products, empirical distribution functions and the
//!   interval-mass scans used to detect divergence ([`measure`]),
//! - the dilation-equation solution and the closed-form distribution function
//!   and partial-sum asymptotics built from it ([`dilation`]).
//!
//! The crate is `no_std` and only needs `alloc`. Exact arithmetic uses
//! arbitrary-precision rationals; floating-point paths use `libm`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dilation;
pub mod error;
pub mod linrep;
pub mod matrix;
pub mod measure;
pub mod poly;
pub mod rational;
pub mod spectral;
pub mod sums;

pub use error::{Error, HypothesisKind, Result};
pub use linrep::{builtin, digits, DigitWord, LinearRepresentation, MatrixPolynomial, BUILTIN_NAMES};
pub use matrix::{CMatrix, Matrix, QMatrix, RMatrix};
pub use rational::{parse_rational, Rational};

pub use num_bigint::{BigInt, BigUint};
pub use num_complex::Complex64;
