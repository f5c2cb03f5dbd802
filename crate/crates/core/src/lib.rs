//! Dark states of two multilevel fermions per lattice site.
//!
//! The crate builds the dipolar master equation for doubly-filled lattices of
//! F_g → F_e atoms, constructs and verifies dark states, enumerates dark
//! subspaces numerically and integrates Raman preparation and Ramsey
//! protocols. Rates are in units of Γ, lengths in 1/k_0 and times in 1/Γ.

// NaN-rejecting guards read best as `!(x > 0.0)`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod angular;
pub mod darkstates;
pub mod drive;
pub mod dynamics;
pub mod error;
pub mod fit;
pub mod greens;
pub mod hilbert;
pub mod sparse;

pub use error::{Error, Result};

/// Complex double used throughout.
pub type C64 = nalgebra::Complex<f64>;

/// Library version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
