//! Sparse identification of nonlinear dynamics by sequentially thresholded
//! least squares.
//!
//! [`sindy::sindy_solve`] is the solver. [`dictionary`] builds candidate
//! function libraries, [`dynamics`] simulates and perturbs trajectories and
//! [`pipeline`] strings them together into an end-to-end identification.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod error;
pub mod dictionary;
pub mod dynamics;
pub mod numkernel;
pub mod par;
pub mod pipeline;
pub mod reproduce;
pub mod sindy;

pub use error::{Error, Result};
pub use par::Execution;
