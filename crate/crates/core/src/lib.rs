//! Exact moments, cumulants and unit-circle root structure of probability
//! generating polynomials whose zeros all lie on `|z| = 1`, together with
//! the limit-law diagnostics built on them.
//!
//! Coefficients, moments and cumulants are exact rationals ([`Rational`]).
//! Root angles and the quantities derived from them are multiprecision
//! floats ([`Float`]) at a caller-chosen precision.

pub mod error;
pub mod exactpoly;
pub mod families;
pub mod limitlaw;
pub mod moments;
pub mod par;
pub mod specfun;
pub mod unitroots;

pub use error::{Error, Result};
pub use rug::{Float, Integer, Rational};
