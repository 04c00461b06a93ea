//! Valuation densities on the unit interval.
//!
//! A [`Density`] is either piecewise-constant or piecewise-linear on a
//! partition `0 = b_0 < b_1 < … < b_m = 1`. Both families have closed-form
//! antiderivatives, so interval measures and their inverses are computed
//! exactly up to floating-point rounding, without quadrature.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Slack allowed when deciding that a target mass is out of reach.
pub const INFEASIBLE_SLACK: f64 = 1e-15;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("density has zero total mass")]
    ZeroMass,
    #[error("malformed breakpoints: {0}")]
    MalformedBreakpoints(String),
    #[error("expected {expected} values for {kind} density, found {found}")]
    WrongValueCount {
        kind: DensityKind,
        expected: usize,
        found: usize,
    },
    #[error("value #{index} is negative ({value})")]
    NegativeValue { index: usize, value: f64 },
    #[error("value #{index} is not finite")]
    NonFiniteValue { index: usize },
    #[error("point {0} lies outside [0, 1]")]
    OutOfRange(f64),
    #[error("reversed interval [{a}, {b}]")]
    ReversedInterval { a: f64, b: f64 },
    #[error("negative target mass {0}")]
    NegativeTarget(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityKind {
    PiecewiseConstant,
    PiecewiseLinear,
}

impl std::fmt::Display for DensityKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DensityKind::PiecewiseConstant => "piecewise_constant",
            DensityKind::PiecewiseLinear => "piecewise_linear",
        })
    }
}

/// Unvalidated density description, as read from an instance file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawDensity {
    pub kind: DensityKind,
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
}

impl RawDensity {
    pub fn piecewise_constant(breakpoints: Vec<f64>, heights: Vec<f64>) -> Self {
        RawDensity {
            kind: DensityKind::PiecewiseConstant,
            breakpoints,
            values: heights,
        }
    }

    pub fn piecewise_linear(breakpoints: Vec<f64>, knots: Vec<f64>) -> Self {
        RawDensity {
            kind: DensityKind::PiecewiseLinear,
            breakpoints,
            values: knots,
        }
    }
}

/// A normalized valuation density (total mass 1). Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Density {
    kind: DensityKind,
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    scale: f64,
    /// `cum[k]` is the mass of `[0, b_k]`.
    cum: Vec<f64>,
}

impl Density {
    /// Validates `raw` and rescales it to total mass 1.
    ///
    /// The divisor is kept in [`Density::scale`]. Equitable cuts do not
    /// depend on a positive rescaling of any one player's density, so
    /// unnormalized input is accepted.
    pub fn validate_and_normalize(raw: &RawDensity) -> Result<Self, MeasureError> {
        let bps = &raw.breakpoints;
        if bps.len() < 2 {
            return Err(MeasureError::MalformedBreakpoints(format!(
                "need at least two breakpoints, found {}",
                bps.len()
            )));
        }
        if bps.iter().any(|b| !b.is_finite()) {
            return Err(MeasureError::MalformedBreakpoints(
                "breakpoints must be finite".into(),
            ));
        }
        if bps[0] != 0.0 || bps[bps.len() - 1] != 1.0 {
            return Err(MeasureError::MalformedBreakpoints(format!(
                "breakpoints must start at 0 and end at 1, found {} .. {}",
                bps[0],
                bps[bps.len() - 1]
            )));
        }
        if let Some(k) = bps.windows(2).position(|w| w[0] >= w[1]) {
            return Err(MeasureError::MalformedBreakpoints(format!(
                "breakpoints not strictly increasing at position {}: {} then {}",
                k + 1,
                bps[k],
                bps[k + 1]
            )));
        }

        let pieces = bps.len() - 1;
        let expected = match raw.kind {
            DensityKind::PiecewiseConstant => pieces,
            DensityKind::PiecewiseLinear => pieces + 1,
        };
        if raw.values.len() != expected {
            return Err(MeasureError::WrongValueCount {
                kind: raw.kind,
                expected,
                found: raw.values.len(),
            });
        }
        for (index, &value) in raw.values.iter().enumerate() {
            if !value.is_finite() {
                return Err(MeasureError::NonFiniteValue { index });
            }
            if value < 0.0 {
                return Err(MeasureError::NegativeValue { index, value });
            }
        }

        let mass = cumulative(raw.kind, bps, &raw.values)[pieces];
        if !(mass > 0.0) {
            return Err(MeasureError::ZeroMass);
        }
        let values: Vec<f64> = if mass == 1.0 {
            raw.values.clone()
        } else {
            raw.values.iter().map(|v| v / mass).collect()
        };
        let cum = cumulative(raw.kind, bps, &values);
        Ok(Density {
            kind: raw.kind,
            breakpoints: bps.clone(),
            values,
            scale: mass,
            cum,
        })
    }

    /// The uniform density on `[0, 1]`.
    pub fn uniform() -> Self {
        Self::validate_and_normalize(&RawDensity::piecewise_constant(vec![0.0, 1.0], vec![1.0]))
            .expect("uniform density is valid")
    }

    pub fn kind(&self) -> DensityKind {
        self.kind
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Normalized heights (piecewise-constant) or knot values (piecewise-linear).
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Total mass of the raw input; the normalized values are `raw / scale`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn pieces(&self) -> usize {
        self.breakpoints.len() - 1
    }

    /// Largest value the normalized density takes.
    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn to_raw(&self) -> RawDensity {
        RawDensity {
            kind: self.kind,
            breakpoints: self.breakpoints.clone(),
            values: self.values.clone(),
        }
    }

    /// Density value at `x` (right-continuous at breakpoints for step densities).
    pub fn eval(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        let k = self.piece_of(x);
        match self.kind {
            DensityKind::PiecewiseConstant => self.values[k],
            DensityKind::PiecewiseLinear => {
                let (b0, b1) = (self.breakpoints[k], self.breakpoints[k + 1]);
                let s = (x - b0) / (b1 - b0);
                self.values[k] * (1.0 - s) + self.values[k + 1] * s
            }
        }
    }

    /// Mass of `[0, x]`; `x` is clamped into the unit interval.
    pub fn cdf(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        let k = self.piece_of(x);
        self.cum[k] + self.partial(k, x - self.breakpoints[k])
    }

    /// Mass of `[0, 1]` as represented in floating point (1 up to rounding).
    pub fn total(&self) -> f64 {
        self.cum[self.pieces()]
    }

    /// `μ([a, b])`.
    pub fn integral_on(&self, a: f64, b: f64) -> Result<f64, MeasureError> {
        check_unit(a)?;
        check_unit(b)?;
        if a > b {
            return Err(MeasureError::ReversedInterval { a, b });
        }
        Ok(self.mass_between(a, b))
    }

    /// Unchecked `μ([a, b])` for `a ≤ b` already known to lie in `[0, 1]`.
    pub(crate) fn mass_between(&self, a: f64, b: f64) -> f64 {
        if a >= b {
            return 0.0;
        }
        (self.cdf(b) - self.cdf(a)).clamp(0.0, 1.0)
    }

    /// Smallest `x ∈ [a, 1]` with `μ([a, x]) ≥ t`, or `None` when less than
    /// `t` mass remains to the right of `a`.
    ///
    /// On a zero-density plateau the left end is returned.
    pub fn generalized_inverse(&self, a: f64, t: f64) -> Result<Option<f64>, MeasureError> {
        check_unit(a)?;
        if t.is_nan() || t < 0.0 {
            return Err(MeasureError::NegativeTarget(t));
        }
        Ok(self.inverse_from(a, t))
    }

    pub(crate) fn inverse_from(&self, a: f64, t: f64) -> Option<f64> {
        if t == 0.0 {
            return Some(a);
        }
        let start = self.cdf(a);
        let total = self.total();
        if total - start < t - INFEASIBLE_SLACK {
            return None;
        }
        let target = (start + t).min(total);
        Some(self.quantile_lower(target).unwrap_or(1.0).max(a))
    }

    /// Largest `x ∈ [a, 1]` with `μ([a, x]) ≤ t`; the right end of any plateau.
    pub(crate) fn upper_inverse_from(&self, a: f64, t: f64) -> f64 {
        let c = self.cdf(a) + t;
        self.quantile_upper(c).unwrap_or(a).clamp(a, 1.0)
    }

    /// Smallest `x` with `cdf(x) ≥ c`; `None` if `c` exceeds the total mass.
    pub fn quantile_lower(&self, c: f64) -> Option<f64> {
        if c <= 0.0 {
            return Some(0.0);
        }
        if c > self.total() {
            return None;
        }
        let j = self.cum.partition_point(|&q| q < c);
        let k = j - 1;
        Some(self.solve_in_piece(k, c - self.cum[k]))
    }

    /// Largest `x` with `cdf(x) ≤ c`; `None` if `c` is negative.
    pub fn quantile_upper(&self, c: f64) -> Option<f64> {
        if c < 0.0 {
            return None;
        }
        if c >= self.total() {
            return Some(1.0);
        }
        let j = self.cum.partition_point(|&q| q <= c);
        let k = j - 1;
        Some(self.solve_in_piece(k, c - self.cum[k]))
    }

    fn piece_of(&self, x: f64) -> usize {
        let j = self.breakpoints.partition_point(|&b| b <= x);
        j.saturating_sub(1).min(self.pieces() - 1)
    }

    /// Mass of `[b_k, b_k + t]` inside piece `k`.
    fn partial(&self, k: usize, t: f64) -> f64 {
        match self.kind {
            DensityKind::PiecewiseConstant => self.values[k] * t,
            DensityKind::PiecewiseLinear => {
                let w = self.breakpoints[k + 1] - self.breakpoints[k];
                let y0 = self.values[k];
                let slope = (self.values[k + 1] - y0) / w;
                t * (y0 + 0.5 * slope * t)
            }
        }
    }

    /// Point `x` in piece `k` where the mass of `[b_k, x]` equals `rem`.
    /// Piece `k` must carry positive mass.
    fn solve_in_piece(&self, k: usize, rem: f64) -> f64 {
        let b0 = self.breakpoints[k];
        let b1 = self.breakpoints[k + 1];
        let w = b1 - b0;
        if rem <= 0.0 {
            return b0;
        }
        let t = match self.kind {
            DensityKind::PiecewiseConstant => {
                let h = self.values[k];
                if h > 0.0 {
                    rem / h
                } else {
                    w
                }
            }
            DensityKind::PiecewiseLinear => {
                let y0 = self.values[k];
                let slope = (self.values[k + 1] - y0) / w;
                // Root of y0·t + slope·t²/2 = rem in the cancellation-free form.
                let disc = (y0 * y0 + 2.0 * slope * rem).max(0.0);
                let denom = y0 + disc.sqrt();
                if denom > 0.0 {
                    2.0 * rem / denom
                } else {
                    w
                }
            }
        };
        (b0 + t.min(w)).min(b1)
    }
}

fn check_unit(x: f64) -> Result<(), MeasureError> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(MeasureError::OutOfRange(x))
    }
}

fn cumulative(kind: DensityKind, bps: &[f64], values: &[f64]) -> Vec<f64> {
    let mut cum = Vec::with_capacity(bps.len());
    let mut acc = 0.0;
    cum.push(acc);
    for k in 0..bps.len() - 1 {
        let w = bps[k + 1] - bps[k];
        acc += match kind {
            DensityKind::PiecewiseConstant => values[k] * w,
            DensityKind::PiecewiseLinear => 0.5 * (values[k] + values[k + 1]) * w,
        };
        cum.push(acc);
    }
    cum
}
