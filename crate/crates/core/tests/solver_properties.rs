mod common;

use equicut::sample::random_raw_density;
use equicut::solver::{chain_cuts, solve_equitable, SolveOptions};
use equicut::topology::{cuts_to_sphere, residual_map, sup_norm};
use equicut::{
    plateau_refine, sweep_permutations, Density, Instance, Permutation, SolveStatus, SweepOptions,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn chain_is_monotone_in_v(inst in common::instance(1..=5)) {
        let mut prev_r = f64::INFINITY;
        let mut prev_cuts: Option<Vec<f64>> = None;
        for k in 0..=1000 {
            let v = k as f64 / 1000.0;
            let chain = chain_cuts(&inst, v).unwrap();
            prop_assert!(chain.residual <= prev_r + 1e-12, "r not nonincreasing at v={}", v);
            prev_r = chain.residual;
            if let Some(cuts) = chain.cuts {
                if let Some(prev) = &prev_cuts {
                    for (a, b) in prev.iter().zip(cuts.as_slice()) {
                        prop_assert!(b >= a);
                    }
                }
                prev_cuts = Some(cuts.as_slice().to_vec());
            }
        }
    }

    #[test]
    fn residual_brackets_a_sign_change(inst in common::instance(1..=6)) {
        prop_assert!(chain_cuts(&inst, 0.0).unwrap().residual >= 0.0);
        prop_assert!(chain_cuts(&inst, 1.0).unwrap().residual <= 0.0);
    }

    #[test]
    fn converged_solutions_satisfy_the_equalities(inst in common::instance(1..=6)) {
        let tol = 1e-9;
        let s = solve_equitable(&inst, &SolveOptions::with_tol(tol)).unwrap();
        prop_assert!(s.gap >= 0.0 && (0.0..=1.0).contains(&s.value));
        if s.status.is_converged() {
            for v in inst.owner_values(&s.cuts) {
                prop_assert!((v - s.value).abs() <= tol);
            }
        }
        // Certificate: the nonnegative sphere preimage is a near-zero of F.
        let f = residual_map(&inst, &cuts_to_sphere(&s.cuts)).unwrap();
        prop_assert_eq!(sup_norm(&f), s.residual_norm);
        prop_assert!(s.residual_norm <= 2.0 * s.gap.max(tol));
        prop_assert!(s.residual_norm <= 2.0 * s.gap + 1e-12);
    }

    #[test]
    fn rescaling_one_player_keeps_cuts(
        raws in prop::collection::vec(common::raw_density(5, 4.0), 2..=4),
        who in any::<prop::sample::Index>(),
        k in 0.05..20.0f64,
    ) {
        let build = |raws: &[equicut::RawDensity]| {
            let ds = raws.iter().map(|r| Density::validate_and_normalize(r).unwrap()).collect();
            Instance::with_identity(ds).unwrap()
        };
        let base = solve_equitable(&build(&raws), &SolveOptions::default()).unwrap();
        let mut scaled = raws.clone();
        let i = who.index(scaled.len());
        scaled[i].values.iter_mut().for_each(|v| *v *= k);
        let other = solve_equitable(&build(&scaled), &SolveOptions::default()).unwrap();
        prop_assume!(base.status.is_converged());
        // Normalization may round by an ulp; cuts follow within the bracket floor.
        for (a, b) in base.cuts.as_slice().iter().zip(other.cuts.as_slice()) {
            prop_assert!((a - b).abs() <= 1e-12, "{:?} vs {:?}", base.cuts, other.cuts);
        }
    }
}

#[test]
fn golden_ratio_pair() {
    let exact = common::golden_cut();
    let scanned = common::golden_cut_by_scan(1e-6);
    assert!((exact - scanned).abs() <= 1e-6);

    let inst = Instance::with_identity(vec![common::ramp(), Density::uniform()]).unwrap();
    let s = solve_equitable(&inst, &SolveOptions::default()).unwrap();
    assert_eq!(s.status, SolveStatus::Converged);
    assert!((s.cuts.as_slice()[0] - exact).abs() <= 1e-9);
    assert!((s.value - (1.0 - exact)).abs() <= 1e-9);
    assert!((s.value - 0.3819660113).abs() <= 1e-9);
}

#[test]
fn disjoint_supports_identity_gets_everything() {
    let inst = Instance::with_identity(common::disjoint_pair()).unwrap();
    let s = solve_equitable(&inst, &SolveOptions::default()).unwrap();
    assert_eq!(s.cuts.as_slice(), &[0.5]);
    assert_eq!(s.value, 1.0);
}

#[test]
fn front_loaded_player_example() {
    // Hand solution of 2x = 1 − x, confirmed by a scan over the grid.
    let hand = 1.0 / 3.0;
    let scan = (0..=1_000_000)
        .map(|k| k as f64 * 1e-6)
        .min_by(|a, b| ((2.0 * a - (1.0 - a)).abs()).total_cmp(&(2.0 * b - (1.0 - b)).abs()))
        .unwrap();
    assert!((hand - scan).abs() <= 1e-6);

    let inst = Instance::with_identity(vec![
        common::step(&[0.0, 0.5, 1.0], &[2.0, 0.0]),
        Density::uniform(),
    ])
    .unwrap();
    let chain = chain_cuts(&inst, 2.0 / 3.0).unwrap();
    let cuts = chain.cuts.unwrap();
    assert!((cuts.as_slice()[0] - hand).abs() <= 1e-15);
    let refined = plateau_refine(&inst, &cuts, 2.0 / 3.0, 1e-9);
    assert!((refined.as_slice()[0] - hand).abs() <= 1e-12);

    let s = solve_equitable(&inst, &SolveOptions::default()).unwrap();
    assert!((s.cuts.as_slice()[0] - hand).abs() <= 1e-9);
    assert!((s.value - 2.0 / 3.0).abs() <= 1e-9);
}

#[test]
fn uniform_players_under_any_order() {
    for n in 1..=8 {
        let inst = Instance::new(
            vec![Density::uniform(); n],
            Permutation::new((0..n).rev().collect()).unwrap(),
        )
        .unwrap();
        let s = solve_equitable(&inst, &SolveOptions::default()).unwrap();
        for (i, x) in s.cuts.as_slice().iter().enumerate() {
            assert!((x - (i + 1) as f64 / n as f64).abs() <= 1e-12);
        }
        assert!((s.value - 1.0 / n as f64).abs() <= 1e-12);
    }
}

#[test]
fn sweep_covers_every_order() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for n in 1..=5 {
        let ds: Vec<Density> = (0..n)
            .map(|_| {
                let raw =
                    random_raw_density(&mut rng, equicut::DensityKind::PiecewiseConstant, 4, 4.0);
                Density::validate_and_normalize(&raw).unwrap()
            })
            .collect();
        let entries = sweep_permutations(&ds, &SweepOptions::default()).unwrap();
        let expected: usize = (1..=n).product();
        assert_eq!(entries.len(), expected);
        let mut seen: Vec<_> = entries.iter().map(|e| e.sigma.clone()).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), expected);
        for w in entries.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            assert!(a.solution.value >= b.solution.value);
            if a.solution.value == b.solution.value {
                assert!(a.sigma < b.sigma);
            }
        }
    }
}

#[test]
fn sweep_of_disjoint_pair() {
    // σ = id: each player takes their whole support (v = 1).
    // σ = swap: the cut at 0.5 leaves both players a worthless piece (v = 0).
    let entries = sweep_permutations(&common::disjoint_pair(), &SweepOptions::default()).unwrap();
    assert_eq!(entries.len(), 2);
    assert_eq!(entries[0].sigma.as_slice(), &[0, 1]);
    assert!((entries[0].solution.value - 1.0).abs() <= 1e-12);
    assert_eq!(entries[1].sigma.as_slice(), &[1, 0]);
    assert!(entries[1].solution.value.abs() <= 1e-12);
    assert!((entries[1].solution.cuts.as_slice()[0] - 0.5).abs() <= 1e-12);
}
