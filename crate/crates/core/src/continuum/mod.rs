//! Finite-difference solver for one-dimensional well potentials, used to
//! check the few-level models against the Schrödinger equation.

pub mod potential;
pub mod reduction;
pub mod solve;
pub mod tridiag;
pub mod wkb;

pub use potential::{
    periodic_d_well, square_box, square_double_well, tilted_double_well, Domain, PiecewisePotential, Segment,
    WellGeometry,
};
pub use reduction::{
    asymmetric_nu, cosine_band_fit, effective_two_level, rabi_transfer, validate_reduction, validate_reduction_with,
    AsymmetricReport, BandFit, ReductionReport, TransferReport, TwoLevelReduction,
};
pub use solve::{grid_operator, grid_positions, solve_grid, GridSolution};
pub use wkb::{barrier_action, square_well_for_action, wkb_tunneling, ActionTarget, WkbFormula, WkbResult};
