//! Quantum search with local diffusion operators.
//!
//! This crate implements three flavors of amplitude-amplification search —
//! the textbook global-diffusion search, the GRK-style partial search, and a
//! hardware-efficient variant that replaces every global diffusion with
//! cheap local diffusions on two complementary qubit subsets — at three
//! levels of abstraction:
//!
//! * [`circuit`] — a gate-level IR with oracle/diffusion builders, lowering
//!   of multi-controlled gates to 1q + CNOT, and depth/CNOT metrics.
//! * [`simulator`] — dense state-vector execution, direct amplitude-space
//!   oracle/diffusion transforms, measurement sampling and stochastic Pauli
//!   noise.
//! * [`analytic`] — a closed-form 4-dimensional evolution model that tracks
//!   the target amplitude exactly for any qubit count, plus iteration
//!   planning, design-space sweeps and minimum-expected-depth analysis.
//!
//! [`algorithms`] assembles the step sequences and result metrics, and
//! [`transpile`] maps lowered circuits onto device coupling graphs.
//!
//! Bit convention used everywhere: qubit 0 is the most significant bit of a
//! basis-state index, so the bitstring `"1100"` denotes index 12 on four
//! qubits. See [`bits::BitString`].

pub mod algorithms;
pub mod analytic;
pub mod bits;
pub mod circuit;
pub mod simulator;
pub mod transpile;

mod error;

pub use error::{Error, Result};
