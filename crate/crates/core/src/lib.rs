//! Fiedler pencils for rectangular Rosenbrock system matrix polynomials.
//!
//! An RSMP is the block matrix polynomial
//!
//! ```text
//! S(λ) = [ A(λ)  -B   ]
//!        [ C     D(λ) ]
//! ```
//!
//! with `A` square (`n × n`), `D` rectangular (`p × m`) and constant coupling
//! matrices `B`, `C`. This crate builds companion and Fiedler pencils for
//! `S(λ)`, the unimodular transformations that reduce a Fiedler pencil back
//! to `S(λ)` padded with identities, and the spectral tools needed to check
//! eigenvalue and pole relationships numerically.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod block;
pub mod equivalence;
mod error;
pub mod fiedler;
pub mod matrix;
pub mod poly;
pub mod random;
pub mod roots;
pub mod rsmp;
pub mod sigma;
pub mod spectral;

pub use block::{BlockMatrix, DenseBlock, Partitioned, PolyBlockMatrix};
pub use error::{Error, Result};
pub use fiedler::Pencil;
pub use matrix::{ComplexMatrix, C64};
pub use poly::{MatrixPolynomial, ScalarPolynomial};
pub use rsmp::Rsmp;
pub use sigma::{Decision, SigmaSeq};
