use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::measure::Density;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InstanceError {
    #[error("an instance needs at least one player")]
    Empty,
    #[error("{0:?} is not a permutation of 0..{1}")]
    NotAPermutation(Vec<usize>, usize),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CutError {
    #[error("cut {index} = {value} lies outside [0, 1]")]
    OutOfRange { index: usize, value: f64 },
    #[error("cuts are not nondecreasing at position {0}")]
    Unordered(usize),
    #[error("expected {expected} cuts, found {found}")]
    WrongLength { expected: usize, found: usize },
}

/// Player order: `sigma[i]` is the player receiving piece `i` (0-indexed).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(order: Vec<usize>) -> Result<Self, InstanceError> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &p in &order {
            if p >= n || seen[p] {
                return Err(InstanceError::NotAPermutation(order, n));
            }
            seen[p] = true;
        }
        Ok(Permutation(order))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Owner of piece `piece`.
    pub fn owner(&self, piece: usize) -> usize {
        self.0[piece]
    }

    /// `inverse()[player]` is the piece that `player` receives.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.0.len()];
        for (piece, &player) in self.0.iter().enumerate() {
            inv[player] = piece;
        }
        inv
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = InstanceError;

    fn try_from(order: Vec<usize>) -> Result<Self, Self::Error> {
        Permutation::new(order)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Densities of the `n` players together with the order in which they are
/// laid out along the cake.
#[derive(Debug, Clone)]
pub struct Instance {
    densities: Vec<Density>,
    sigma: Permutation,
}

impl Instance {
    pub fn new(densities: Vec<Density>, sigma: Permutation) -> Result<Self, InstanceError> {
        if densities.is_empty() {
            return Err(InstanceError::Empty);
        }
        if sigma.len() != densities.len() {
            return Err(InstanceError::NotAPermutation(sigma.0, densities.len()));
        }
        Ok(Instance { densities, sigma })
    }

    pub fn with_identity(densities: Vec<Density>) -> Result<Self, InstanceError> {
        let n = densities.len();
        Self::new(densities, Permutation::identity(n))
    }

    pub fn players(&self) -> usize {
        self.densities.len()
    }

    pub fn densities(&self) -> &[Density] {
        &self.densities
    }

    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    /// Same densities under another order.
    pub fn reordered(&self, sigma: Permutation) -> Result<Self, InstanceError> {
        Self::new(self.densities.clone(), sigma)
    }

    /// Density of the player who owns piece `piece`.
    pub fn owner_density(&self, piece: usize) -> &Density {
        &self.densities[self.sigma.owner(piece)]
    }

    /// Value of each piece to its owner under `cuts`.
    pub fn owner_values(&self, cuts: &CutVector) -> Vec<f64> {
        (0..self.players())
            .map(|i| {
                let (a, b) = cuts.piece(i);
                self.owner_density(i).mass_between(a, b)
            })
            .collect()
    }

    /// Largest difference between two owners' piece values.
    pub fn equitability_gap(&self, cuts: &CutVector) -> f64 {
        spread(&self.owner_values(cuts))
    }
}

pub(crate) fn spread(values: &[f64]) -> f64 {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if values.is_empty() {
        0.0
    } else {
        hi - lo
    }
}

/// Interior cuts `x_1 ≤ … ≤ x_{n-1}`; `x_0 = 0` and `x_n = 1` are implicit.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
#[serde(transparent)]
pub struct CutVector(Vec<f64>);

impl CutVector {
    pub fn new(cuts: Vec<f64>) -> Result<Self, CutError> {
        for (index, &value) in cuts.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(CutError::OutOfRange { index, value });
            }
        }
        if let Some(k) = cuts.windows(2).position(|w| w[0] > w[1]) {
            return Err(CutError::Unordered(k + 1));
        }
        Ok(CutVector(cuts))
    }

    /// Checks that the cuts split the cake into `players` pieces.
    pub fn for_players(cuts: Vec<f64>, players: usize) -> Result<Self, CutError> {
        if cuts.len() + 1 != players {
            return Err(CutError::WrongLength {
                expected: players.saturating_sub(1),
                found: cuts.len(),
            });
        }
        Self::new(cuts)
    }

    pub(crate) fn from_sorted_unchecked(cuts: Vec<f64>) -> Self {
        debug_assert!(Self::new(cuts.clone()).is_ok(), "invalid cuts {cuts:?}");
        CutVector(cuts)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pieces(&self) -> usize {
        self.0.len() + 1
    }

    /// Boundary `x_i` for `i ∈ 0..=n`, including the implicit ends.
    pub fn boundary(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else if i > self.0.len() {
            1.0
        } else {
            self.0[i - 1]
        }
    }

    /// Endpoints of piece `i` (0-indexed).
    pub fn piece(&self, i: usize) -> (f64, f64) {
        (self.boundary(i), self.boundary(i + 1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolveStatus {
    /// The bisection chain alone met the tolerance.
    Converged,
    /// Plateau repair was needed to meet the tolerance.
    RefinedConverged,
    /// Tolerance not met; the best cuts found are returned.
    BestEffort,
}

impl SolveStatus {
    pub fn is_converged(self) -> bool {
        !matches!(self, SolveStatus::BestEffort)
    }
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquitableSolution {
    pub cuts: CutVector,
    /// Common value of the pieces to their owners (mean of owner values).
    pub value: f64,
    pub gap: f64,
    pub status: SolveStatus,
    /// ∞-norm of the sphere residual map at the nonnegative preimage of `cuts`.
    pub residual_norm: f64,
    pub iterations: usize,
}
