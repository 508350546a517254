//! Simulation library for sliding-mode control of single-input multi-output
//! underactuated mechanical systems.
//!
//! The library provides:
//!
//! - [`plants`]: the affine four-state plant form with two concrete
//!   realizations (cart-pole inverted pendulum and TORA), time-varying mass
//!   schedules and windowed disturbance forces;
//! - [`fuzzy`]: normalized Gaussian-product basis functions and linearly
//!   parameterized approximators with norm-projection bounds;
//! - [`controllers`]: the adaptive fuzzy sliding-mode controller (two coupled
//!   sliding surfaces with a saturated surface transfer) and a non-adaptive
//!   decoupled sliding-mode baseline;
//! - [`sim`]: fixed-step RK4 closed-loop integration, trajectory logging, and
//!   scalar performance metrics.

pub mod controllers;
pub mod fuzzy;
pub mod plants;
pub mod sim;

mod error;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
