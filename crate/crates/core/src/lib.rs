//! Basis-independent ("total") quantum coherence.
//!
//! The crate computes coherence measures that are maximized over every
//! orthonormal basis, which reduces them to spectral functions of the state,
//! and cross-checks those closed forms against direct numerical optimization
//! over the unitary group. It also simulates the controlled cyclic-swap
//! circuit that measures `Tr rho^k` on a probe qubit, recovers the spectrum
//! from those moments, and evaluates the coherence cost of DQC1-style probing
//! schemes.
//!
//! Modules:
//!
//! * [`qmat`]: dense complex matrices, density matrices, unitaries, spectra.
//! * [`measures`]: closed-form and fixed-basis coherence measures.
//! * [`sampling`]: seeded Haar unitaries, random states, mixed-unitary channels.
//! * [`basis_opt`]: multi-restart ascent over the unitary group.
//! * [`swapcirc`]: swap-test circuit simulation and moment inversion.
//! * [`probe`]: probe-qubit dynamics and probing cost.
//! * [`verify`]: randomized property suites used by the CLI.
//! * [`io`]: the JSON matrix file format.

pub mod basis_opt;
pub mod error;
pub mod io;
pub mod measures;
pub mod probe;
pub mod qmat;
pub mod sampling;
pub mod swapcirc;
pub mod verify;

pub use error::{Error, Result};
pub use qmat::{ComplexMatrix, DensityMatrix, Spectrum, UnitaryMatrix};
