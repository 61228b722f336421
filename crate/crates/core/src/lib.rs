//! Split-step discrete-time quantum walks on a one-dimensional lattice.
//!
//! One time step applies `U = L T C(β) L' T C(α)`: a coin rotation `C(α)`, a
//! coin-conditioned shift `T`, a loss `L'`, a second coin `C(β)`, a second
//! shift and a final loss `L`. With `l1 = l2 = 1` the walk is unitary; with
//! `l1 != l2` it is a PT-symmetric non-unitary walk.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised bottom-up:
//!
//! - [`lattice`]: walker state and position distributions.
//! - [`operators`]: the factors of `U`, time evolution, and a dense-matrix oracle.
//! - [`momentum`]: the 2×2 Bloch operator, quasi-energies and PT classification.
//! - [`topology`]: gap closures, winding numbers and phase diagrams.
//! - [`observables`]: moments, diffusion coefficient and Shannon entropy.
//! - [`scan`]: parameter sweeps producing tabular rows.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod error;
pub mod lattice;
pub mod momentum;
pub mod observables;
pub mod operators;
pub mod scan;
pub mod topology;

pub use error::Error;
pub use lattice::{Coin, ProbDist, WalkerState};
pub use momentum::{MomentumSample, PtPhase, PtTag};
pub use observables::{Measure, ObservableRecord};
pub use operators::WalkParams;
pub use scan::{SweepResult, SweepRow, SweepSpec, WindingCell};
pub use topology::{GapReport, WindingResult};

pub use num_complex::Complex64;

/// Wraps an angle into `[-π, π)`.
pub fn canonical_angle(theta: f64) -> f64 {
    use core::f64::consts::PI;
    let two_pi = 2.0 * PI;
    let mut a = theta - two_pi * libm::floor((theta + PI) / two_pi);
    // floor can land exactly on +π through rounding
    if a >= PI {
        a -= two_pi;
    }
    if a < -PI {
        a = -PI;
    }
    a
}
