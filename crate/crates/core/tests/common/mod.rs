#![allow(dead_code)]

use equicut::{Density, DensityKind, Instance, Permutation, RawDensity};
use proptest::prelude::*;

/// Raw density with 1..=max_pieces pieces, values in [0, max_height], positive mass.
pub fn raw_density(max_pieces: usize, max_height: f64) -> impl Strategy<Value = RawDensity> {
    (
        prop_oneof![
            Just(DensityKind::PiecewiseConstant),
            Just(DensityKind::PiecewiseLinear)
        ],
        prop::collection::btree_set(1u32..10_000, 0..max_pieces),
    )
        .prop_flat_map(move |(kind, interior)| {
            let mut breakpoints = vec![0.0];
            breakpoints.extend(interior.iter().map(|&k| k as f64 / 10_000.0));
            breakpoints.push(1.0);
            let count = match kind {
                DensityKind::PiecewiseConstant => breakpoints.len() - 1,
                DensityKind::PiecewiseLinear => breakpoints.len(),
            };
            let values =
                prop::collection::vec(prop_oneof![1 => Just(0.0), 3 => 0.0..=max_height], count);
            (Just(kind), Just(breakpoints), values)
        })
        .prop_map(|(kind, breakpoints, mut values)| {
            if values.iter().all(|&v| v == 0.0) {
                values[0] = 1.0;
            }
            RawDensity {
                kind,
                breakpoints,
                values,
            }
        })
}

pub fn density() -> impl Strategy<Value = Density> {
    raw_density(6, 4.0).prop_map(|r| Density::validate_and_normalize(&r).unwrap())
}

/// Instance with `players` in the given range and a random order.
pub fn instance(players: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Instance> {
    players
        .prop_flat_map(|n| {
            (
                prop::collection::vec(density(), n),
                Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
            )
        })
        .prop_map(|(ds, order)| Instance::new(ds, Permutation::new(order).unwrap()).unwrap())
}

pub fn step(bps: &[f64], heights: &[f64]) -> Density {
    Density::validate_and_normalize(&RawDensity::piecewise_constant(
        bps.to_vec(),
        heights.to_vec(),
    ))
    .unwrap()
}

/// Density 2x on [0, 1].
pub fn ramp() -> Density {
    Density::validate_and_normalize(&RawDensity::piecewise_linear(
        vec![0.0, 1.0],
        vec![0.0, 2.0],
    ))
    .unwrap()
}

/// Player 0 values only [0, 0.5], player 1 only [0.5, 1].
pub fn disjoint_pair() -> Vec<Density> {
    vec![
        step(&[0.0, 0.5, 1.0], &[2.0, 0.0]),
        step(&[0.0, 0.5, 1.0], &[0.0, 2.0]),
    ]
}

/// Root of x² + x − 1 = 0 in [0, 1]: where μ_ramp([0, x]) = x² meets 1 − x.
pub fn golden_cut() -> f64 {
    (5.0_f64.sqrt() - 1.0) / 2.0
}

/// Brute-force scan for the golden cut using the closed-form antiderivatives
/// x² and 1 − x directly, on a grid of the given step.
pub fn golden_cut_by_scan(step: f64) -> f64 {
    let steps = (1.0 / step).round() as usize;
    (0..=steps)
        .map(|k| k as f64 * step)
        .min_by(|a, b| {
            let fa = (a * a - (1.0 - a)).abs();
            let fb = (b * b - (1.0 - b)).abs();
            fa.total_cmp(&fb)
        })
        .unwrap()
}
