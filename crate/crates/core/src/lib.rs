//! Numerical lab for the contact-wave profile of the compressible
//! Navier-Stokes system on the half line, in Lagrangian coordinates.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod experiments;
pub mod heat_kernel;
pub mod io;
pub mod ns_solver;
pub mod profile;
pub mod stencil;
pub mod types;
pub mod verify;

pub use error::{Error, Result};
pub use types::{Delta0, EndStates, FlowState, GasParams, Grid};
