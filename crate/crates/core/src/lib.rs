//! Causal structure of the two-dimensional flat almost-commutative spacetime
//! `S(R^{1,1}) ⊗ M2(C)`.
//!
//! The crate decides and certifies causal relations between states of the
//! product geometry. Pure states are pairs (event, point of the Bloch
//! sphere); the class of mixed states handled here pairs an event with a
//! Bloch-ball vector. The building blocks are
//!
//! - [`minkowski`]: events, the classical causal order and proper time;
//! - [`states`]: internal pure and mixed states, Dirac data, unitaries;
//! - [`field`]: a small expression language for scalar fields with exact
//!   first partial derivatives;
//! - [`cone`]: algebra elements and pointwise membership in the causal cone;
//! - [`causality`]: closed-form causal verdicts and feasible paths;
//! - [`witness`]: separating causal elements for non-related pairs;
//! - [`oracle`]: brute-force cross-validation by random causal elements.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod causality;
pub mod cone;
mod error;
pub mod field;
pub mod linalg;
pub mod minkowski;
pub mod oracle;
pub mod states;
pub mod tol;
pub mod witness;

pub use error::{Error, Result};

pub use num_complex::Complex64;
