//! Ergodicity coefficients of constant row-sum matrices and the eigenvalue
//! bounds they provide.
//!
//! * [`matrix`]: dense matrices, e-matrix validation, shifts, inversion and
//!   overflow-safe powers.
//! * [`coefficients`]: explicit `tau_1` and `tau_inf`.
//! * [`bounds`]: upper bounds on the largest and lower bounds on the smallest
//!   non-trivial eigenvalue modulus, the simplicity certificate and the
//!   constancy probe.
//! * [`graph`]: Laplacians and their closed-form coefficients, spectral radius
//!   and algebraic connectivity bounds.
//! * [`spectrum`]: an independent eigenvalue oracle for checking all of the
//!   above.
//! * [`fixtures`], [`verify`], [`report`], [`cli`]: worked examples, the
//!   regression harness and the command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bounds;
pub mod cli;
pub mod coefficients;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod matrix;
pub mod report;
pub mod spectrum;
pub mod verify;

pub use bounds::{
    all_k_bounds, constancy_probe, doubling_bounds, estimate_largest, estimate_smallest,
    largest_bound, simplicity_check, smallest_bound_nonsingular, smallest_bound_singular,
    BoundMode, BoundSequence, BoundTarget, Estimate, SimplicityReport,
};
pub use coefficients::{column_stat, rho_hat, tau, tau_1, tau_1_minform, tau_inf, ColumnStat};
pub use error::{Error, Result};
pub use graph::{
    connectivity_lower_bound_shift, connectivity_lower_bound_sup, das_bound, is_connected,
    laplacian, spectral_radius_bounds, tau1_laplacian, tau_comparison, tau_inf_laplacian,
    ConnectivityMethod, ConnectivityReport, Graph,
};
pub use matrix::{
    add_diagonal_shift, add_rank_one_shift, induced_norm, invert, multiply, scaled_power,
    validate_ematrix, EMatrix, Matrix, PNorm, ScaledPower,
};
pub use spectrum::{
    characteristic_polynomial, nontrivial_extremes, polynomial_roots, spectrum, Spectrum,
    SpectrumMethod,
};
