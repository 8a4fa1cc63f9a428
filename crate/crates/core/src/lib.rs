//! Exact arithmetic for cyclotomic and modified cyclotomic difference sets in
//! finite fields, the Gauss and Jacobi sums that characterize them, and the
//! polynomial systems whose Gröbner bases rule them out.

pub mod arith;
pub mod charsums;
pub mod config;
pub mod cyclotomic;
pub mod diffsets;
pub mod error;
pub mod ff;
pub mod groebner;
pub mod identities;
pub mod poly;
pub mod polysys;

pub use config::Limits;
pub use cyclotomic::{CycInt, IntPoly, QCyc, RootSum};
pub use error::{Error, Result};
pub use ff::{make_field, FFElement, FiniteField};
