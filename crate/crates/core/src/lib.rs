//! Spectral and Hardy-type analysis of magnetic momentum operators with
//! complex potentials.

#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod circle;
pub mod error;
pub mod field;
pub mod galerkin;
pub mod hardy;
pub mod quadrature;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use spectral::C64;
