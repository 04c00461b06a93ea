//! Seeded random densities and instances for tests, benchmarks and the CLI.

use rand::seq::index;
use rand::Rng;

use crate::measure::{Density, DensityKind, RawDensity};

/// Breakpoints and values are drawn on this grid so generated files stay readable.
const GRID: u32 = 1000;

/// Random density with `pieces` pieces and values drawn uniformly in `[0, max_height]`.
pub fn random_raw_density<R: Rng + ?Sized>(
    rng: &mut R,
    kind: DensityKind,
    pieces: usize,
    max_height: f64,
) -> RawDensity {
    let pieces = pieces.clamp(1, GRID as usize - 1);
    let mut interior: Vec<u32> = index::sample(rng, GRID as usize - 1, pieces - 1)
        .into_iter()
        .map(|k| k as u32 + 1)
        .collect();
    interior.sort_unstable();
    let mut breakpoints = Vec::with_capacity(pieces + 1);
    breakpoints.push(0.0);
    breakpoints.extend(interior.iter().map(|&k| k as f64 / GRID as f64));
    breakpoints.push(1.0);

    let count = match kind {
        DensityKind::PiecewiseConstant => pieces,
        DensityKind::PiecewiseLinear => pieces + 1,
    };
    let mut values: Vec<f64> = (0..count)
        .map(|_| (rng.gen_range(0.0..=max_height) * GRID as f64).round() / GRID as f64)
        .collect();
    if values.iter().all(|&v| v == 0.0) {
        values[0] = 1.0;
    }
    RawDensity {
        kind,
        breakpoints,
        values,
    }
}

/// `players` normalized piecewise-constant densities with `1..=max_pieces` pieces each.
pub fn random_step_densities<R: Rng + ?Sized>(
    rng: &mut R,
    players: usize,
    max_pieces: usize,
    max_height: f64,
) -> Vec<Density> {
    (0..players)
        .map(|_| {
            let pieces = rng.gen_range(1..=max_pieces);
            let raw = random_raw_density(rng, DensityKind::PiecewiseConstant, pieces, max_height);
            Density::validate_and_normalize(&raw).expect("generated density is valid")
        })
        .collect()
}

/// Like [`random_step_densities`] but mixing both density families.
pub fn random_densities<R: Rng + ?Sized>(
    rng: &mut R,
    players: usize,
    max_pieces: usize,
    max_height: f64,
) -> Vec<Density> {
    (0..players)
        .map(|_| {
            let kind = if rng.gen_bool(0.5) {
                DensityKind::PiecewiseConstant
            } else {
                DensityKind::PiecewiseLinear
            };
            let pieces = rng.gen_range(1..=max_pieces);
            let raw = random_raw_density(rng, kind, pieces, max_height);
            Density::validate_and_normalize(&raw).expect("generated density is valid")
        })
        .collect()
}
