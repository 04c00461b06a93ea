use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use super::{solve_equitable, EquitableSolution, Instance, Permutation, SolveOptions, SolverError};
use crate::measure::Density;

/// 8! = 40320 solves.
pub const DEFAULT_SWEEP_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub solve: SolveOptions,
    pub max_players: usize,
    pub parallel: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            solve: SolveOptions::default(),
            max_players: DEFAULT_SWEEP_CAP,
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepEntry {
    pub sigma: Permutation,
    pub solution: EquitableSolution,
}

/// Solves every player order.
///
/// Entries are sorted by common value, highest first; equal values keep the
/// lexicographic order of `sigma`. The parallel path yields the same list.
pub fn sweep_permutations(
    densities: &[Density],
    opts: &SweepOptions,
) -> Result<Vec<SweepEntry>, SolverError> {
    let n = densities.len();
    if n > opts.max_players {
        return Err(SolverError::TooManyPlayers {
            n,
            cap: opts.max_players,
        });
    }
    if !(opts.solve.tol > 0.0) {
        return Err(SolverError::InvalidTolerance(opts.solve.tol));
    }
    let orders: Vec<Permutation> = (0..n)
        .permutations(n)
        .map(|p| Permutation::new(p).expect("itertools yields permutations"))
        .collect();

    let solve_one = |sigma: &Permutation| -> Result<SweepEntry, SolverError> {
        let inst = Instance::new(densities.to_vec(), sigma.clone())
            .expect("densities and sigma have equal length");
        let solution = solve_equitable(&inst, &opts.solve)?;
        Ok(SweepEntry {
            sigma: sigma.clone(),
            solution,
        })
    };
    let mut entries: Vec<SweepEntry> = if opts.parallel {
        orders.par_iter().map(solve_one).collect::<Result<_, _>>()?
    } else {
        orders.iter().map(solve_one).collect::<Result<_, _>>()?
    };
    entries.sort_by(|a, b| b.solution.value.total_cmp(&a.solution.value));
    Ok(entries)
}
