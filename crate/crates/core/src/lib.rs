//! Simple equitable divisions of the unit interval.
//!
//! Each of `n` players values `[0, 1]` through a normalized density. For a
//! given player order `sigma`, player `sigma[i]` receives the `i`-th interval
//! and the solver places the `n - 1` cuts so that every player values their
//! own interval equally. A solution always exists; the [`topology`] module
//! provides the odd residual map on the sphere whose zeros are exactly such
//! divisions, and is used here to certify solver output.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod measure;
pub mod oracle;
pub mod sample;
pub mod solver;
pub mod topology;

pub use analysis::{fairness_report, valuation_matrix, FairnessReport, ValuationMatrix};
pub use measure::{Density, DensityKind, MeasureError, RawDensity};
pub use solver::{
    chain_cuts, plateau_refine, solve_equitable, sweep_permutations, CutVector, EquitableSolution,
    Instance, Permutation, SolveOptions, SolveStatus, SolverError, SweepEntry, SweepOptions,
};
pub use topology::{cuts_to_sphere, residual_map, sphere_to_cuts, SpherePoint};
