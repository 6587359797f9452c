//! Franck-Condon physics of a central electron spin coupled to a bath of
//! nuclear spins, treated as one collective spin in the Dicke basis.
//!
//! Module map:
//! - [`collective_spin`]: Dicke basis, collective operators, Wigner d-matrix.
//! - [`model`]: parameters, effective nuclear Hamiltonians, drive.
//! - [`franck_condon`]: overlap factors, favored level, bosonic limit.
//! - [`spectroscopy`]: golden-rule rates and absorption spectra.
//! - [`dynamics`]: collective precession and driven propagation.
//! - [`validation`]: invariant suite.
//! - [`cli`]: scenario runner behind the `spin-fc` binary.

pub mod cli;
pub mod collective_spin;
pub mod dynamics;
pub mod error;
pub mod franck_condon;
pub mod model;
pub mod special;
pub mod spectroscopy;
pub mod validation;

pub use error::{Error, Result};
