//! Exact algebra for the additive Deligne–Simpson problem with unramified
//! irregular singularities: spectral data, the associated quiver and its
//! root system, the solvability criterion, and the matrix-side operations
//! (normal forms, middle convolution, quiver representations).
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod builder;
pub mod error;
pub mod lift;
pub mod matrixops;
pub mod numeric;
pub mod quiver;
pub mod roots;
pub mod sample;
pub mod sigma;
pub mod spectral;

pub use error::{Error, Result};
pub use numeric::{gauss_parse, GaussRat};
