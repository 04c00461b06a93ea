//! Cut points for simple equitable divisions.
//!
//! For a fixed player order the solver looks for cuts such that every piece
//! is worth the same value `v` to its owner. Given a candidate `v`, the
//! pieces `1 … n-1` are laid out greedily from the left ("the chain"); what
//! is left over for the last owner minus `v` is a nonincreasing function of
//! `v` that is positive at 0 and nonpositive at 1, so `v` can be bracketed
//! by bisection. Zero-density plateaus can make that function jump; those
//! cases are repaired by [`plateau_refine`] and [`plateau_bisect`] and,
//! failing that, by descent on the sphere residual map.

mod refine;
mod sweep;
mod types;

use thiserror::Error;

use crate::topology;

pub use refine::{plateau_bisect, plateau_refine};
pub use sweep::{sweep_permutations, SweepEntry, SweepOptions, DEFAULT_SWEEP_CAP};
pub use types::{
    CutError, CutVector, EquitableSolution, Instance, InstanceError, Permutation, SolveStatus,
};

pub(crate) use types::spread;

/// Bracket width below which bisection stops regardless of the tolerance.
pub const BRACKET_FLOOR: f64 = 1e-16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("common value {0} is outside [0, 1]")]
    InvalidV(f64),
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("{n} players exceeds the permutation sweep cap of {cap}")]
    TooManyPlayers { n: usize, cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Largest acceptable equitability gap.
    pub tol: f64,
    /// Bisection iteration budget.
    pub max_iter: usize,
    /// Sweep budget for the sphere descent fallback.
    pub descent_max_iter: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-9,
            max_iter: 200,
            descent_max_iter: 2000,
        }
    }
}

impl SolveOptions {
    pub fn with_tol(tol: f64) -> Self {
        SolveOptions {
            tol,
            ..Self::default()
        }
    }
}

/// Greedy layout of the first `n - 1` pieces at common value `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    /// `None` when some piece cannot reach `v`.
    pub cuts: Option<CutVector>,
    /// Last owner's leftover value minus `v`; `-v` when infeasible.
    pub residual: f64,
}

impl Chain {
    pub fn is_feasible(&self) -> bool {
        self.cuts.is_some()
    }
}

pub fn chain_cuts(inst: &Instance, v: f64) -> Result<Chain, SolverError> {
    if !(0.0..=1.0).contains(&v) {
        return Err(SolverError::InvalidV(v));
    }
    Ok(chain_at(inst, v))
}

fn chain_at(inst: &Instance, v: f64) -> Chain {
    let n = inst.players();
    let mut cuts = Vec::with_capacity(n - 1);
    let mut x = 0.0;
    for piece in 0..n - 1 {
        match inst.owner_density(piece).inverse_from(x, v) {
            Some(next) => {
                x = next;
                cuts.push(x);
            }
            None => {
                return Chain {
                    cuts: None,
                    residual: -v,
                }
            }
        }
    }
    let last = inst.owner_density(n - 1).mass_between(x, 1.0);
    Chain {
        cuts: Some(CutVector::from_sorted_unchecked(cuts)),
        residual: last - v,
    }
}

/// Computes cuts for which every piece has (nearly) the same value to its owner.
///
/// Bisection keeps `r(lo) ≥ 0 ≥ r(hi)` and runs until the bracket is below
/// [`BRACKET_FLOOR`]; `tol` is the acceptance threshold on the resulting gap.
pub fn solve_equitable(
    inst: &Instance,
    opts: &SolveOptions,
) -> Result<EquitableSolution, SolverError> {
    if !(opts.tol > 0.0) {
        return Err(SolverError::InvalidTolerance(opts.tol));
    }
    if inst.players() == 1 {
        return Ok(EquitableSolution {
            cuts: CutVector::default(),
            value: 1.0,
            gap: 0.0,
            status: SolveStatus::Converged,
            residual_norm: 0.0,
            iterations: 0,
        });
    }

    let (v, chain, iterations) = bisect(inst, opts.max_iter);
    let cuts = chain.cuts.expect("lower bracket end is always feasible");
    let gap = inst.equitability_gap(&cuts);
    if gap <= opts.tol {
        return Ok(finish(inst, cuts, SolveStatus::Converged, iterations));
    }

    let mut best = (gap, cuts);
    let mut current = best.1.clone();
    for _ in 0..inst.players() {
        let next = plateau_refine(inst, &current, v, opts.tol);
        let next_gap = inst.equitability_gap(&next);
        if next_gap < best.0 {
            best = (next_gap, next.clone());
        }
        if next == current {
            break;
        }
        current = next;
    }
    if best.0 > opts.tol {
        if let Some(cuts) = plateau_bisect(inst, v, opts.tol) {
            let g = inst.equitability_gap(&cuts);
            if g < best.0 {
                best = (g, cuts);
            }
        }
    }
    if best.0 <= opts.tol {
        return Ok(finish(
            inst,
            best.1,
            SolveStatus::RefinedConverged,
            iterations,
        ));
    }

    let start = topology::cuts_to_sphere(&best.1);
    let end = topology::descent_refine(inst, &start, opts.tol, opts.descent_max_iter);
    let descended = topology::sphere_to_cuts(&end);
    let descended_gap = inst.equitability_gap(&descended);
    if descended_gap < best.0 {
        best = (descended_gap, descended);
    }
    Ok(finish(inst, best.1, SolveStatus::BestEffort, iterations))
}

/// Returns `(v_lo, chain at v_lo, iterations)`.
fn bisect(inst: &Instance, max_iter: usize) -> (f64, Chain, usize) {
    let top = chain_at(inst, 1.0);
    if top.is_feasible() && top.residual >= 0.0 {
        return (1.0, top, 0);
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut lo_chain = chain_at(inst, 0.0);
    let mut iterations = 0;
    while iterations < max_iter && hi - lo >= BRACKET_FLOOR {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let chain = chain_at(inst, mid);
        if chain.is_feasible() && chain.residual >= 0.0 {
            let exact = chain.residual == 0.0;
            lo = mid;
            lo_chain = chain;
            if exact {
                break;
            }
        } else {
            hi = mid;
        }
    }
    (lo, lo_chain, iterations)
}

fn finish(
    inst: &Instance,
    cuts: CutVector,
    status: SolveStatus,
    iterations: usize,
) -> EquitableSolution {
    let values = inst.owner_values(&cuts);
    let value = (values.iter().sum::<f64>() / values.len() as f64).clamp(0.0, 1.0);
    let gap = spread(&values);
    let residual_norm = topology::residual_norm_at_cuts(inst, &cuts);
    EquitableSolution {
        cuts,
        value,
        gap,
        status,
        residual_norm,
        iterations,
    }
}
