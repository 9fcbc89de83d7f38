//! Exactly solvable simplex lattices built from the moment dynamics of
//! quadratic bosonic systems.
//!
//! The order-`m` moment matrix `M_m` is the `m`-fold Kronecker sum of a
//! first-order matrix `M_1`; its eigensystem is the tensor power of the
//! eigensystem of `M_1`. Collapsing the slot-permutation degeneracy of `M_m`
//! yields a small effective matrix whose directed graph is a finite simplex
//! lattice with a harmonic spectrum.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the
//! command-line front end live in the `simplexlat` crate.

#![no_std]

extern crate alloc;

pub mod cxmat;
pub mod dfrft;
pub mod epsweep;
mod error;
pub mod lattice;
pub mod moments;
pub mod reduction;

pub use cxmat::{c, CMatrix, Complex, SpectralDecomposition};
pub use error::{Error, Result};
pub use moments::{ExponentVector, ModeSystem, MultiIndex, TensorEigensystem};
pub use reduction::{Mode, PermutationClass, ReducedSystem};
