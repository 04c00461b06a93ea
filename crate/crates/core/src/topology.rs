//! Sphere parametrization of cut vectors and the antipodal residual map.
//!
//! A point `e` on the unit sphere in `ℝⁿ` encodes the cuts
//! `x_i = x_{i-1} + e_i²` (`x_0 = 0`). The residual map
//!
//! ```text
//! F_i(e) = sgn(e_{i+1}) · μ_σ(i+1)([s_i, s_i + e_{i+1}²]) − sgn(e_1) · μ_σ(1)([0, e_1²])
//! ```
//!
//! with `s_i = e_1² + … + e_i²`, is continuous and odd, so it has a zero; at a
//! zero with `e ≥ 0` every piece is worth the same to its owner. We use it as
//! an independent certificate for solver output and as a fallback objective.

use thiserror::Error;

use crate::solver::{CutError, CutVector, Instance};

/// Allowed deviation of `Σ e_i²` from 1.
pub const SPHERE_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TopologyError {
    #[error("point is not on the unit sphere (squared norm {0})")]
    NotOnSphere(f64),
    #[error("sphere point has {found} coordinates, instance has {expected} players")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    InvalidCuts(#[from] CutError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint(Vec<f64>);

impl SpherePoint {
    pub fn new(e: Vec<f64>) -> Result<Self, TopologyError> {
        let norm_sq: f64 = e.iter().map(|c| c * c).sum();
        if e.is_empty() || !((norm_sq - 1.0).abs() <= SPHERE_TOL) {
            return Err(TopologyError::NotOnSphere(norm_sq));
        }
        Ok(SpherePoint(e))
    }

    /// Radial projection of a nonzero vector onto the sphere.
    pub fn normalized(e: Vec<f64>) -> Result<Self, TopologyError> {
        let norm = e.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(TopologyError::NotOnSphere(norm * norm));
        }
        Ok(SpherePoint(e.into_iter().map(|c| c / norm).collect()))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn antipode(&self) -> SpherePoint {
        SpherePoint(self.0.iter().map(|c| -c).collect())
    }
}

impl std::ops::Neg for &SpherePoint {
    type Output = SpherePoint;

    fn neg(self) -> SpherePoint {
        self.antipode()
    }
}

/// `x_i = x_{i-1} + e_i²` for `i = 1 … n-1`.
pub fn sphere_to_cuts(e: &SpherePoint) -> CutVector {
    let n = e.dim();
    let mut cuts = Vec::with_capacity(n.saturating_sub(1));
    let mut x = 0.0_f64;
    for c in &e.0[..n - 1] {
        x = (x + c * c).min(1.0);
        cuts.push(x);
    }
    CutVector::from_sorted_unchecked(cuts)
}

/// The nonnegative preimage `e_i = √(x_i − x_{i-1})`.
pub fn cuts_to_sphere(cuts: &CutVector) -> SpherePoint {
    let e = (0..cuts.pieces())
        .map(|i| {
            let (a, b) = cuts.piece(i);
            (b - a).max(0.0).sqrt()
        })
        .collect();
    SpherePoint(e)
}

/// Checked variant of [`cuts_to_sphere`] for raw cut lists.
pub fn try_cuts_to_sphere(cuts: Vec<f64>) -> Result<SpherePoint, TopologyError> {
    Ok(cuts_to_sphere(&CutVector::new(cuts)?))
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `(F_1(e), …, F_{n-1}(e))`, with `sgn(0) = 0`.
pub fn residual_map(inst: &Instance, e: &SpherePoint) -> Result<Vec<f64>, TopologyError> {
    if e.dim() != inst.players() {
        return Err(TopologyError::DimensionMismatch {
            expected: inst.players(),
            found: e.dim(),
        });
    }
    Ok(residual_unchecked(inst, e.as_slice()))
}

fn residual_unchecked(inst: &Instance, e: &[f64]) -> Vec<f64> {
    let n = e.len();
    let first_len = (e[0] * e[0]).min(1.0);
    let first = sgn(e[0]) * inst.owner_density(0).mass_between(0.0, first_len);
    let mut out = Vec::with_capacity(n - 1);
    let mut start = first_len;
    for (i, &c) in e.iter().enumerate().skip(1) {
        let end = (start + c * c).min(1.0);
        let piece = inst.owner_density(i).mass_between(start, end);
        out.push(sgn(c) * piece - first);
        start = end;
    }
    out
}

pub fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `‖F(cuts_to_sphere(cuts))‖∞`.
pub fn residual_norm_at_cuts(inst: &Instance, cuts: &CutVector) -> f64 {
    let e = cuts_to_sphere(cuts);
    sup_norm(&residual_unchecked(inst, e.as_slice()))
}

/// Pattern search for a zero of the residual map.
///
/// Each sweep tries `e_j ± step` for every coordinate, projecting back onto
/// the sphere and keeping any move that lowers `‖F‖²`. A sweep without an
/// accepted move halves the step; a sweep with one grows it slightly. The
/// result is never worse than `start`.
pub fn descent_refine(
    inst: &Instance,
    start: &SpherePoint,
    tol: f64,
    max_iter: usize,
) -> SpherePoint {
    let objective = |e: &[f64]| -> f64 { residual_unchecked(inst, e).iter().map(|f| f * f).sum() };
    let n = start.dim();
    if n < 2 || n != inst.players() {
        return start.clone();
    }
    let stop = 0.25 * tol * tol;
    let mut best = start.0.clone();
    let mut best_obj = objective(&best);
    let mut step = 0.05_f64;
    let mut candidate = vec![0.0; n];

    for _ in 0..max_iter {
        if best_obj <= stop || step < 1e-16 {
            break;
        }
        let mut moved = false;
        for j in 0..n {
            for dir in [1.0, -1.0] {
                candidate.copy_from_slice(&best);
                candidate[j] += dir * step;
                let norm = candidate.iter().map(|c| c * c).sum::<f64>().sqrt();
                if !(norm > 0.0) {
                    continue;
                }
                candidate.iter_mut().for_each(|c| *c /= norm);
                let obj = objective(&candidate);
                if obj < best_obj {
                    best.copy_from_slice(&candidate);
                    best_obj = obj;
                    moved = true;
                    break;
                }
            }
        }
        step = if moved {
            (step * 1.5).min(0.5)
        } else {
            step * 0.5
        };
    }
    SpherePoint(best)
}
