//! Shell-model nuclei on an emulated quantum register.
//!
//! The crate builds second-quantized shell-model Hamiltonians from a
//! Woods-Saxon mean field plus residual interactions, maps them onto qubit
//! (Pauli-sum) form through the Jordan-Wigner transformation, and finds ground
//! states with a gradient-descent iteration implemented both directly and as a
//! post-selected linear-combination-of-unitaries circuit. An exact
//! sector-diagonalization oracle validates every result.
//!
//! Everything here is `no_std` + `alloc`: pure computation, no IO. File
//! formats, configuration, and the command line live in the companion `qsm`
//! binary crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod constants;
pub mod fitting;
pub mod interactions;
pub mod linalg;
pub mod math;
pub mod meanfield;
pub mod oracle;
pub mod orbits;
pub mod pauli;
pub mod quad;
pub mod resources;
pub mod rng;
pub mod solver;
pub mod statevec;

pub use num_complex::Complex64;
