//! Computational spectral-theory toolkit: Weierstrass elliptic functions,
//! band-edge spectral polynomials, an sl(2, C) quantum Euler top, Krein
//! spectral shift functions for finite self-adjoint pairs, and the
//! distributional Green kernels they feed.

pub mod bh;
pub mod distribution;
pub mod elliptic;
pub mod error;
pub mod euler_top;
pub mod krein;
pub mod lame_green;
pub mod matrix;
pub mod poly;
pub mod quad;
pub mod rng;
pub mod testkit;

pub use error::{Error, Result};
