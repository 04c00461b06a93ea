//! Fairness checks for a simple division.
//!
//! Pieces are stored by position along the cake; player `sigma[i]` owns
//! piece `i`, so the piece *player* `p` owns is `sigma⁻¹(p)`.

use serde::Serialize;
use thiserror::Error;

use crate::measure::Density;
use crate::solver::{spread, CutVector, Permutation};

pub const ROW_SUM_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("dimension mismatch: {players} players, {pieces} pieces")]
    DimensionMismatch { players: usize, pieces: usize },
}

/// `rows[i][j] = μ_i(piece j)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValuationMatrix {
    rows: Vec<Vec<f64>>,
}

impl ValuationMatrix {
    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn players(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, player: usize, piece: usize) -> f64 {
        self.rows[player][piece]
    }

    /// Largest deviation of a row sum from 1.
    pub fn row_sum_error(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| (r.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_row_stochastic(&self) -> bool {
        self.row_sum_error() <= ROW_SUM_TOL
    }
}

pub fn valuation_matrix(
    densities: &[Density],
    cuts: &CutVector,
) -> Result<ValuationMatrix, AnalysisError> {
    if densities.len() != cuts.pieces() {
        return Err(AnalysisError::DimensionMismatch {
            players: densities.len(),
            pieces: cuts.pieces(),
        });
    }
    let rows = densities
        .iter()
        .map(|d| {
            (0..cuts.pieces())
                .map(|j| {
                    let (a, b) = cuts.piece(j);
                    d.mass_between(a, b)
                })
                .collect()
        })
        .collect();
    Ok(ValuationMatrix { rows })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FairnessReport {
    /// Value of each player's own piece, indexed by player.
    pub own_values: Vec<f64>,
    pub equitable_gap: f64,
    pub equitable_ok: bool,
    /// `min_i (own_i − 1/n)`.
    pub proportional_margin: f64,
    pub proportional_ok: bool,
    /// `max_{i,j} (μ_i(X_j) − own_i)`; never negative.
    pub worst_envy: f64,
    pub envy_free_ok: bool,
    /// `max_{i,j} |μ_i(X_j) − 1/n|`.
    pub exact_gap: f64,
    pub exact_ok: bool,
}

impl FairnessReport {
    /// Players whose own piece is worth less than `1/n − tol`.
    pub fn proportionality_failures(&self, tol: f64) -> Vec<usize> {
        let share = 1.0 / self.own_values.len() as f64;
        self.own_values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v - share < -tol)
            .map(|(p, _)| p)
            .collect()
    }
}

pub fn fairness_report(
    vm: &ValuationMatrix,
    sigma: &Permutation,
    tol: f64,
) -> Result<FairnessReport, AnalysisError> {
    let n = vm.players();
    if sigma.len() != n {
        return Err(AnalysisError::DimensionMismatch {
            players: n,
            pieces: sigma.len(),
        });
    }
    let share = 1.0 / n as f64;
    let piece_of = sigma.inverse();
    let own_values: Vec<f64> = (0..n).map(|p| vm.get(p, piece_of[p])).collect();

    let equitable_gap = spread(&own_values);
    let proportional_margin = own_values
        .iter()
        .map(|v| v - share)
        .fold(f64::INFINITY, f64::min);
    let worst_envy = vm
        .rows()
        .iter()
        .zip(&own_values)
        .flat_map(|(row, own)| row.iter().map(move |v| v - own))
        .fold(0.0, f64::max);
    let exact_gap = vm
        .rows()
        .iter()
        .flatten()
        .map(|v| (v - share).abs())
        .fold(0.0, f64::max);

    Ok(FairnessReport {
        equitable_ok: equitable_gap <= tol,
        proportional_ok: proportional_margin >= -tol,
        envy_free_ok: worst_envy <= tol,
        exact_ok: exact_gap <= tol,
        own_values,
        equitable_gap,
        proportional_margin,
        worst_envy,
        exact_gap,
    })
}
