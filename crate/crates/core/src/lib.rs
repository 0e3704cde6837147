//! Universal approximation constructions for quantum feature maps.
//!
//! The crate is organised bottom-up:
//!
//! - [`statevector`]: a dense single-register simulator used as the brute-force
//!   oracle for every closed-form basis function.
//! - [`feature_map`]: the parallel (arccos and activation-preprocessed) and the
//!   sequential repeated-rotation encodings, observable enumeration and kernels.
//! - [`approximator`]: least-squares output weights, the explicit Bernstein
//!   approximator, error bounds, the sequential iteration search, the rational
//!   counter-example enumerator and the classification experiment.
//! - [`experiments`]: the config-driven runner behind the `qfm-uap` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approximator;
pub mod error;
pub mod experiments;
pub mod feature_map;
pub mod statevector;
pub mod tolerances;

pub use error::{Error, Result};
