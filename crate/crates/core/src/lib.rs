//! Operator algebra, coupled-well Hamiltonians, dynamics, gate synthesis and
//! a finite-difference continuum solver for qudits built from tunneling
//! between potential wells.

pub mod error;
pub mod operator;
pub mod wells;
pub mod dynamics;
pub mod gates;
pub mod continuum;

pub use error::{Error, Result};
pub use operator::{ComplexMatrix, Spectrum, C64};
