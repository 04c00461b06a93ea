//! Exhaustive grid search for small instances.
//!
//! Deliberately naive: every nondecreasing cut vector on a uniform grid is
//! scored by its equitability gap. Used to cross-check the solver.

use std::cmp::Ordering;

use rayon::prelude::*;
use thiserror::Error;

use crate::solver::{CutVector, Instance};

pub const MAX_ORACLE_PLAYERS: usize = 4;
pub const FINEST_RESOLUTION: f64 = 1e-4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("grid search supports at most {MAX_ORACLE_PLAYERS} players, got {0}")]
    TooManyPlayers(usize),
    #[error("resolution {0} is finer than {FINEST_RESOLUTION}")]
    ResolutionTooFine(f64),
    #[error("resolution must lie in (0, 1], got {0}")]
    InvalidResolution(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridOptimum {
    pub cuts: CutVector,
    pub gap: f64,
}

/// Grid points `0, res, 2·res, …` closed off with 1.
pub fn grid(resolution: f64) -> Vec<f64> {
    let steps = (1.0 / resolution + 1e-9).floor() as usize;
    let mut points: Vec<f64> = (0..=steps)
        .map(|j| (j as f64 * resolution).min(1.0))
        .collect();
    let last = points[points.len() - 1];
    if 1.0 - last <= 1e-9 {
        let k = points.len() - 1;
        points[k] = 1.0;
    } else {
        points.push(1.0);
    }
    points
}

pub fn grid_search_equitable(inst: &Instance, resolution: f64) -> Result<GridOptimum, OracleError> {
    let n = inst.players();
    if n > MAX_ORACLE_PLAYERS {
        return Err(OracleError::TooManyPlayers(n));
    }
    if !(resolution > 0.0 && resolution <= 1.0) {
        return Err(OracleError::InvalidResolution(resolution));
    }
    if resolution < FINEST_RESOLUTION {
        return Err(OracleError::ResolutionTooFine(resolution));
    }
    if n == 1 {
        return Ok(GridOptimum {
            cuts: CutVector::default(),
            gap: 0.0,
        });
    }

    let points = grid(resolution);
    // cdf of each piece's owner at every grid point.
    let tables: Vec<Vec<f64>> = (0..n)
        .map(|piece| {
            let d = inst.owner_density(piece);
            points.iter().map(|&x| d.cdf(x)).collect()
        })
        .collect();

    let g = points.len();
    let best = (0..g)
        .into_par_iter()
        .map(|first| {
            let mut idx = vec![first; n - 1];
            let mut best: Option<(f64, Vec<usize>)> = None;
            search(&tables, &mut idx, 1, &mut best);
            best.expect("every prefix has at least one completion")
        })
        .reduce_with(pick)
        .expect("grid is never empty");

    let cuts = best.1.iter().map(|&j| points[j]).collect();
    Ok(GridOptimum {
        cuts: CutVector::new(cuts).expect("grid indices are nondecreasing"),
        gap: best.0,
    })
}

fn search(
    tables: &[Vec<f64>],
    idx: &mut Vec<usize>,
    depth: usize,
    best: &mut Option<(f64, Vec<usize>)>,
) {
    if depth == idx.len() {
        let gap = score(tables, idx);
        let better = match best {
            None => true,
            Some((g, cuts)) => cmp_candidate(gap, idx, *g, cuts) == Ordering::Less,
        };
        if better {
            *best = Some((gap, idx.clone()));
        }
        return;
    }
    let g = tables[0].len();
    for j in idx[depth - 1]..g {
        idx[depth] = j;
        search(tables, idx, depth + 1, best);
    }
}

fn score(tables: &[Vec<f64>], idx: &[usize]) -> f64 {
    let last = tables[0].len() - 1;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut prev = 0;
    for (piece, table) in tables.iter().enumerate() {
        let next = if piece < idx.len() { idx[piece] } else { last };
        let v = (table[next] - table[prev]).max(0.0);
        lo = lo.min(v);
        hi = hi.max(v);
        prev = next;
    }
    hi - lo
}

fn cmp_candidate(gap: f64, cuts: &[usize], other_gap: f64, other: &[usize]) -> Ordering {
    gap.total_cmp(&other_gap).then_with(|| cuts.cmp(other))
}

fn pick(a: (f64, Vec<usize>), b: (f64, Vec<usize>)) -> (f64, Vec<usize>) {
    if cmp_candidate(b.0, &b.1, a.0, &a.1) == Ordering::Less {
        b
    } else {
        a
    }
}
