//! Symbolic coding of the limit set of a two-generator Schottky group acting on the
//! Poincaré disc, with searches for concentrating and separating group elements.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod coding;
pub mod dsl;
pub mod error;
pub mod group;
pub mod hyperbolic;
pub mod lab;
pub mod render;
pub mod report;
pub mod sequence;
pub mod symbol;

pub use error::{Error, Result};
