//! Acceptance gate. Each criterion prints one PASS/FAIL line; the run exits
//! nonzero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use equicut::oracle::grid_search_equitable;
use equicut::sample::{random_densities, random_step_densities};
use equicut::solver::{chain_cuts, solve_equitable, SolveOptions};
use equicut::topology::{cuts_to_sphere, residual_map, sup_norm, SpherePoint};
use equicut::{
    fairness_report, sweep_permutations, valuation_matrix, Density, EquitableSolution, Instance,
    Permutation, SolveStatus, SweepOptions,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

struct Gate {
    results: Vec<(usize, bool)>,
}

impl Gate {
    fn record(&mut self, id: usize, name: &str, ok: bool, detail: String) {
        println!(
            "[{}] criterion {id}: {name} ({detail})",
            if ok { "PASS" } else { "FAIL" }
        );
        self.results.push((id, ok));
    }
}

fn random_order(rng: &mut impl Rng, n: usize) -> Permutation {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    Permutation::new(order).unwrap()
}

fn random_instance(rng: &mut impl Rng, max_players: usize) -> Instance {
    let n = rng.gen_range(1..=max_players);
    let ds = random_densities(rng, n, 6, 4.0);
    let sigma = random_order(rng, n);
    Instance::new(ds, sigma).unwrap()
}

/// Solutions collected from criteria 1–3 for the certificate and report checks.
type Solved = Vec<(Instance, EquitableSolution)>;

fn uniform_symmetry(gate: &mut Gate, solved: &mut Solved) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let started = Instant::now();
    let mut worst_cut: f64 = 0.0;
    let mut worst_v: f64 = 0.0;
    for n in 1..=8 {
        for _ in 0..5 {
            let inst =
                Instance::new(vec![Density::uniform(); n], random_order(&mut rng, n)).unwrap();
            let s = solve_equitable(&inst, &SolveOptions::default()).unwrap();
            for (i, x) in s.cuts.as_slice().iter().enumerate() {
                worst_cut = worst_cut.max((x - (i + 1) as f64 / n as f64).abs());
            }
            if s.cuts.len() != n - 1 {
                worst_cut = f64::INFINITY;
            }
            worst_v = worst_v.max((s.value - 1.0 / n as f64).abs());
            solved.push((inst, s));
        }
    }
    let elapsed = started.elapsed();
    let ok = worst_cut <= 1e-12 && worst_v <= 1e-12 && elapsed < Duration::from_secs(1);
    gate.record(
        1,
        "uniform symmetry",
        ok,
        format!("max cut err {worst_cut:.1e}, max v err {worst_v:.1e}, {elapsed:?}"),
    );
}

fn golden_ratio(gate: &mut Gate, solved: &mut Solved) {
    let inst = Instance::with_identity(vec![common::ramp(), Density::uniform()]).unwrap();
    let started = Instant::now();
    let s = solve_equitable(&inst, &SolveOptions::default()).unwrap();
    let elapsed = started.elapsed();
    let golden = common::golden_cut();
    let cut_err = (s.cuts.as_slice()[0] - golden).abs();
    let v_err = (s.value - (1.0 - golden)).abs();
    let ok = cut_err <= 1e-9 && v_err <= 1e-9 && elapsed < Duration::from_millis(10);
    gate.record(
        2,
        "golden-ratio instance",
        ok,
        format!("cut err {cut_err:.1e}, v err {v_err:.1e}, {elapsed:?}"),
    );
    solved.push((inst, s));
}

fn oracle_equivalence(gate: &mut Gate, solved: &mut Solved) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let res = 1e-3;
    let started = Instant::now();
    let mut converged = 0;
    let mut violations = 0;
    let mut worst_excess = f64::NEG_INFINITY;
    for _ in 0..100 {
        let n = rng.gen_range(2..=3);
        let ds = random_step_densities(&mut rng, n, 5, 4.0);
        let inst = Instance::new(ds, random_order(&mut rng, n)).unwrap();
        let s = solve_equitable(&inst, &SolveOptions::default()).unwrap();
        let grid = grid_search_equitable(&inst, res).unwrap();
        let h = inst
            .densities()
            .iter()
            .map(Density::max_value)
            .fold(0.0, f64::max);
        let excess = s.gap - (grid.gap + 2.0 * res * h);
        worst_excess = worst_excess.max(excess);
        if excess > 0.0 {
            violations += 1;
        }
        if s.status.is_converged() {
            converged += 1;
        }
        solved.push((inst, s));
    }
    let elapsed = started.elapsed();
    let ok = violations == 0 && converged >= 95 && elapsed < Duration::from_secs(60);
    gate.record(
        3,
        "oracle equivalence",
        ok,
        format!(
            "{violations} gap violations (worst margin {worst_excess:.2e}), {converged}/100 converged, {elapsed:?}"
        ),
    );
}

fn antipodality(gate: &mut Gate) {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let started = Instant::now();
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let inst = random_instance(&mut rng, 8);
        let raw: Vec<f64> = (0..inst.players())
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        let Ok(e) = SpherePoint::normalized(raw) else {
            continue;
        };
        let f = residual_map(&inst, &e).unwrap();
        let g = residual_map(&inst, &e.antipode()).unwrap();
        let sum: Vec<f64> = f.iter().zip(&g).map(|(a, b)| a + b).collect();
        worst = worst.max(sup_norm(&sum));
    }
    let elapsed = started.elapsed();
    let ok = worst <= 1e-12 && elapsed < Duration::from_secs(5);
    gate.record(
        4,
        "antipodality",
        ok,
        format!("max |F(-e)+F(e)| {worst:.1e}, {elapsed:?}"),
    );
}

fn zero_certificate(gate: &mut Gate, solved: &Solved) {
    let mut failures = 0;
    let mut worst: f64 = f64::NEG_INFINITY;
    for (inst, s) in solved {
        let norm = sup_norm(&residual_map(inst, &cuts_to_sphere(&s.cuts)).unwrap());
        let slack = norm - (2.0 * s.gap + 1e-12);
        worst = worst.max(slack);
        if slack > 0.0 {
            failures += 1;
        }
    }
    gate.record(
        5,
        "zero certificate",
        failures == 0,
        format!(
            "{} solutions, {failures} failures, worst slack {worst:.1e}",
            solved.len()
        ),
    );
}

fn chain_monotonicity(gate: &mut Gate) {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut bad = 0;
    for _ in 0..50 {
        let inst = random_instance(&mut rng, 6);
        let r: Vec<f64> = (0..1000)
            .map(|k| chain_cuts(&inst, k as f64 / 999.0).unwrap().residual)
            .collect();
        let monotone = r.windows(2).all(|w| w[1] <= w[0] + 1e-12);
        if !monotone || r[0] < 0.0 || r[999] > 0.0 {
            bad += 1;
        }
    }
    gate.record(
        6,
        "chain monotonicity",
        bad == 0,
        format!("{bad}/50 instances violate"),
    );
}

fn order_dependence(gate: &mut Gate) {
    let entries = sweep_permutations(&common::disjoint_pair(), &SweepOptions::default()).unwrap();
    let value_of = |order: &[usize]| {
        entries
            .iter()
            .find(|e| e.sigma.as_slice() == order)
            .map(|e| e.solution.value)
    };
    let id = value_of(&[0, 1]).unwrap_or(f64::NAN);
    let swap = value_of(&[1, 0]).unwrap_or(f64::NAN);
    let ok = entries.len() == 2 && (id - 1.0).abs() <= 1e-12 && swap.abs() <= 1e-12;
    gate.record(
        7,
        "order-dependence witness",
        ok,
        format!("v(id) = {id}, v(swap) = {swap}"),
    );
}

fn report_consistency(gate: &mut Gate, solved: &Solved) {
    let mut checked = 0;
    let mut failures = 0;
    for (inst, s) in solved {
        if s.status != SolveStatus::Converged {
            continue;
        }
        checked += 1;
        let vm = valuation_matrix(inst.densities(), &s.cuts).unwrap();
        let report = fairness_report(&vm, inst.sigma(), TOL).unwrap();
        if report.equitable_gap > TOL || !vm.is_row_stochastic() {
            failures += 1;
        }
    }
    gate.record(
        8,
        "fairness-report consistency",
        failures == 0 && checked > 0,
        format!("{checked} converged solutions, {failures} failures"),
    );
}

fn sweep_scale(gate: &mut Gate) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let ds = random_densities(&mut rng, 5, 6, 4.0);
    let started = Instant::now();
    let entries = sweep_permutations(&ds, &SweepOptions::default()).unwrap();
    let elapsed = started.elapsed();
    let mut orders: Vec<_> = entries.iter().map(|e| e.sigma.clone()).collect();
    orders.sort();
    orders.dedup();
    let well_formed = entries.iter().all(|e| {
        let s = &e.solution;
        s.cuts.len() == 4
            && s.cuts.as_slice().windows(2).all(|w| w[0] <= w[1])
            && (0.0..=1.0).contains(&s.value)
            && s.gap.is_finite()
            && s.gap >= 0.0
    });
    let ok = entries.len() == 120
        && orders.len() == 120
        && well_formed
        && elapsed < Duration::from_secs(1);
    gate.record(
        9,
        "sweep scale",
        ok,
        format!(
            "{} rows, {} distinct orders, {elapsed:?}",
            entries.len(),
            orders.len()
        ),
    );
}

fn main() {
    let mut gate = Gate {
        results: Vec::new(),
    };
    let mut solved = Vec::new();
    uniform_symmetry(&mut gate, &mut solved);
    golden_ratio(&mut gate, &mut solved);
    oracle_equivalence(&mut gate, &mut solved);
    antipodality(&mut gate);
    zero_certificate(&mut gate, &solved);
    chain_monotonicity(&mut gate);
    order_dependence(&mut gate);
    report_consistency(&mut gate, &solved);
    sweep_scale(&mut gate);

    let failed: Vec<usize> = gate
        .results
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(id, _)| *id)
        .collect();
    println!(
        "acceptance: {}/{} criteria passed",
        gate.results.len() - failed.len(),
        gate.results.len()
    );
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
