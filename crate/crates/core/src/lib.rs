//! Larmor-clock tunneling times for spin-½ particles crossing a
//! rectangular barrier with a weak magnetic field inside, in both the
//! Schrödinger and the Dirac description.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod barrier;
pub mod error;
pub mod nonrel;
pub mod oracle;
pub mod rel;
pub mod spinlab;
pub mod sweep;
pub mod units;
pub mod verify;

pub use barrier::{BarrierSpec, TimeReport};
pub use error::{Error, Result};
pub use units::{ParticleSpec, PhysicalConstants, CONSTANTS};
