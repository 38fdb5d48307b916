//! Fourth-moment norm ratios of Fourier-sparse functions on the Boolean cube.
//!
//! For a set `A` of Walsh characters on `{0,1}^n`, `μ(A)` is the largest value of
//! `E f⁴ / (E f²)²` over nonzero `f` whose spectrum lives on `A`. This crate
//! computes certified lower bounds on `μ(A)` by sphere-constrained ascent on the
//! quartic form of the spectrum, assembles the known upper bounds, and evaluates
//! the additive-combinatorial and Hamming-sphere quantities that bracket it, in
//! exact big-rational arithmetic where a claim is exact.
//!
//! Conventions used throughout:
//!
//! * A point of the cube is an `n`-bit mask; bit `i` is coordinate `i + 1`, and
//!   point addition is XOR.
//! * `analyze` carries the `2^{-n}` factor (`f̂(α) = E f·W_α`), `synthesize`
//!   carries none, so expectations are over the uniform measure.

pub mod additive;
pub mod asymptotics;
pub mod bounds;
pub mod cube;
mod error;
pub mod quartic;
pub mod rational;
pub mod report;
pub mod sphere;
pub mod verify;

pub use error::{Error, Result};
