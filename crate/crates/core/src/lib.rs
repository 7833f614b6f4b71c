//! Deep ReLU network calculus, the explicit approximators of a
//! depth-separation construction, Gaussian L² error measurement and numeric
//! certification of the accompanying inequalities.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ann;
pub mod bounds;
pub mod calculus;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod json;
pub mod measures;
pub mod quadrature;
pub mod special;

pub use ann::{Architecture, Layer, Matrix, Network};
pub use error::{Error, Result};
