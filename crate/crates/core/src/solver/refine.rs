use super::{CutVector, Instance};
use crate::measure::Density;

/// One backward pass of plateau repair over the cuts of a bisection chain.
///
/// Cut `x_i` may slide anywhere its left piece stays within `tol` of `v` for
/// that piece's owner. Inside that window it is moved to bring the right
/// piece's value closest to `v`, then the left piece's value closest to `v`;
/// a remaining interval of equally good positions resolves to its midpoint.
pub fn plateau_refine(inst: &Instance, cuts: &CutVector, v: f64, tol: f64) -> CutVector {
    let n = inst.players();
    let mut x = cuts.as_slice().to_vec();
    if x.len() + 1 != n {
        return cuts.clone();
    }
    for i in (1..n).rev() {
        let left = if i >= 2 { x[i - 2] } else { 0.0 };
        let right = if i < n - 1 { x[i] } else { 1.0 };
        let own_left = inst.owner_density(i - 1);
        let own_right = inst.owner_density(i);

        let base = own_left.cdf(left);
        let lo = match own_left.quantile_lower(base + v - tol) {
            Some(q) => q.max(left),
            None => continue,
        };
        let hi = own_left
            .quantile_upper(base + v + tol)
            .unwrap_or(left)
            .min(right);
        if lo > hi || x[i - 1] < lo || x[i - 1] > hi {
            continue;
        }

        let (a, b) = nearest_cdf_set(own_right, lo, hi, own_right.cdf(right) - v);
        let (a, b) = nearest_cdf_set(own_left, a, b, base + v);
        x[i - 1] = (a + 0.5 * (b - a)).clamp(left, right);
    }
    CutVector::from_sorted_unchecked(x)
}

/// Forward repair of a chain that jumps across zero-density plateaus at `v`.
///
/// Every cut `x_i` may sit anywhere its piece is worth between `v` and
/// `v + tol/2` to the piece's owner, a window that spans the owner's plateau
/// when the chain jumps there. Cuts are fixed
/// left to right, each by bisection on the largest position whose greedy
/// continuation still leaves the last owner at least `v`. The last cut's
/// continuation is continuous, so the final bisection closes the gap.
/// Returns `None` if the chain at `v` is infeasible.
pub fn plateau_bisect(inst: &Instance, v: f64, tol: f64) -> Option<CutVector> {
    let n = inst.players();
    let mut cuts = Vec::with_capacity(n.saturating_sub(1));
    let mut a = 0.0;
    for piece in 0..n.saturating_sub(1) {
        let d = inst.owner_density(piece);
        let mut lo = d.inverse_from(a, v)?;
        let mut hi = d.upper_inverse_from(a, v + 0.5 * tol).max(lo);
        if tail_residual(inst, piece + 1, lo, v) >= 0.0 {
            while hi - lo > BISECT_FLOOR {
                let mid = lo + 0.5 * (hi - lo);
                if mid <= lo || mid >= hi {
                    break;
                }
                if tail_residual(inst, piece + 1, mid, v) >= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        cuts.push(lo);
        a = lo;
    }
    Some(CutVector::from_sorted_unchecked(cuts))
}

const BISECT_FLOOR: f64 = 1e-16;

/// Greedy chain from piece `first` starting at `start`; last owner's value minus `v`.
fn tail_residual(inst: &Instance, first: usize, start: f64, v: f64) -> f64 {
    let n = inst.players();
    let mut x = start;
    for piece in first..n - 1 {
        match inst.owner_density(piece).inverse_from(x, v) {
            Some(next) => x = next,
            None => return -v,
        }
    }
    inst.owner_density(n - 1).mass_between(x, 1.0) - v
}

/// Cumulative values closer than this are treated as equal, so that plateaus
/// survive rounding in the targets.
const CDF_EPS: f64 = 1e-14;

/// Points of `[lo, hi]` where `d.cdf` is closest to `c`, as an interval.
fn nearest_cdf_set(d: &Density, lo: f64, hi: f64, c: f64) -> (f64, f64) {
    let (clo, chi) = (d.cdf(lo), d.cdf(hi));
    let (a, b) = if c <= clo {
        (lo, d.quantile_upper(clo + CDF_EPS).unwrap_or(lo))
    } else if c >= chi {
        (d.quantile_lower(chi - CDF_EPS).unwrap_or(hi), hi)
    } else {
        (
            d.quantile_lower(c - CDF_EPS).unwrap_or(lo),
            d.quantile_upper(c + CDF_EPS).unwrap_or(hi),
        )
    };
    let a = a.clamp(lo, hi);
    (a, b.clamp(a, hi))
}
