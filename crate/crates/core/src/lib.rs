//! Exact involutive Gröbner-basis machinery for linear difference systems.
//!
//! The crate works in the free module of linear difference polynomials over
//! the field of rational functions in the index variables and parameters.
//! Shift operators act in one direction only; exponent vectors are always
//! nonnegative. The companion `lindiff` crate carries the text grammar, the
//! serializers and the command line interface.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod diffring;
pub mod division;
pub mod engine;
pub mod quotient;
pub mod scalars;

mod error;

pub use error::CoreError;
