//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (run with `--nocapture` to see them).
//!
//! Run single-threaded for stable timing of criterion 1:
//! `cargo test -p powertsp --test acceptance -- --nocapture --test-threads=1`

mod common;

use std::time::Instant;

use powertsp::analysis;
use powertsp::exact::{self, DistanceMatrix};
use powertsp::geometry::{Alpha, PointSet};
use powertsp::instances::{self, GadgetSpec};
use powertsp::tour::{self, SelectionPolicy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FLEET_SEED: u64 = 0xF1EE7;
const FLEET_SIZE: usize = 1000;

/// The seeded random fleet shared by criteria 1, 2, and 5: planar instances
/// with n in [3, 512].
fn fleet() -> Vec<(usize, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(FLEET_SEED);
    (0..FLEET_SIZE)
        .map(|_| (rng.random_range(3..=512), rng.random::<u64>()))
        .collect()
}

fn alpha_bound(alpha: f64) -> f64 {
    3f64.powf(alpha - 1.0) + 6f64.powf(alpha / 2.0) / 3.0
}

fn universal_bound(alpha: f64) -> f64 {
    2.0 * 3f64.powf(alpha - 1.0)
}

#[test]
fn criterion_01_geometric_tour_within_five_times_mst() {
    let started = Instant::now();
    let mut worst = 0.0f64;
    for &(n, seed) in &fleet() {
        let ps = instances::gen_random(n, 2, Alpha::TWO, seed);
        let report = tour::solve_t3(&ps, SelectionPolicy::Geometric).unwrap();
        worst = worst.max(report.ratio_vs_mst);
        assert!(
            report.total_cost <= 5.0 * report.mst_lower_bound * (1.0 + 1e-6),
            "n={n} seed={seed}: ratio {}",
            report.ratio_vs_mst
        );
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "criterion 1 sweep took {elapsed:.1}s");
    println!(
        "criterion 1 PASS: geometric tour <= 5x MST on {FLEET_SIZE} instances \
         (worst ratio {worst:.4}, {elapsed:.1}s)"
    );
}

#[test]
fn criterion_02_alpha_bound_sweep() {
    let alphas = [2.0, 2.5, 3.0, 4.0];
    let mut worst_slack = f64::INFINITY;
    for &(n, seed) in &fleet() {
        let base = instances::gen_random(n, 2, Alpha::TWO, seed);
        for &a in &alphas {
            let ps = base.with_alpha(Alpha::new(a).unwrap());
            let report = tour::solve_t3(&ps, SelectionPolicy::Geometric).unwrap();
            let bound = alpha_bound(a);
            assert!(
                report.total_cost <= bound * report.mst_lower_bound * (1.0 + 1e-9),
                "n={n} seed={seed} alpha={a}: ratio {} bound {bound}",
                report.ratio_vs_mst
            );
            worst_slack = worst_slack.min(bound - report.ratio_vs_mst);
        }
    }
    println!(
        "criterion 2 PASS: cost <= (3^(a-1) + sqrt(6)^a/3) x MST for a in {{2, 2.5, 3, 4}} \
         (smallest slack {worst_slack:.4})"
    );
}

#[test]
fn criterion_03_universal_bound_for_any_policy() {
    let alphas = [1.0, 2.0, 3.0];
    let classes: Vec<(&str, PointSet)> = vec![
        ("random-2d", instances::gen_random(48, 2, Alpha::TWO, 51)),
        ("random-3d", instances::gen_random(32, 3, Alpha::TWO, 52)),
        (
            "chain",
            instances::gen_collinear_chain(40, 1.0, Alpha::TWO).unwrap(),
        ),
        ("grid", instances::gen_grid(6, 7, Alpha::TWO).unwrap()),
    ];
    for (name, base) in &classes {
        for &a in &alphas {
            let ps = base.with_alpha(Alpha::new(a).unwrap());
            let bound = universal_bound(a);
            let mut policies = vec![SelectionPolicy::Arbitrary];
            policies.extend((0..100).map(|s| SelectionPolicy::Random { seed: s }));
            for policy in policies {
                let report = tour::solve_t3(&ps, policy).unwrap();
                assert!(
                    report.total_cost <= bound * report.mst_lower_bound * (1.0 + 1e-9),
                    "{name} alpha={a} {policy:?}: ratio {}",
                    report.ratio_vs_mst
                );
            }
        }
    }
    println!(
        "criterion 3 PASS: every policy stays within 2*3^(a-1) x MST on {} classes x 101 runs",
        classes.len()
    );
}

#[test]
fn criterion_04_three_shortcut_formula_exactness() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3C4A);
    let mut checked = 0usize;
    while checked < 10_000 {
        let pts: Vec<powertsp::geometry::Point> = (0..4)
            .map(|_| {
                powertsp::geometry::Point::xy(
                    rng.random::<f64>() * 20.0 - 10.0,
                    rng.random::<f64>() * 20.0 - 10.0,
                )
            })
            .collect();
        let Ok(g) = analysis::ShortcutGeometry::from_chain(&pts[0], &pts[1], &pts[2], &pts[3])
        else {
            continue;
        };
        let direct: f64 = pts[0]
            .coords()
            .iter()
            .zip(pts[3].coords())
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        let formula = analysis::three_shortcut_weight_formula(&g);
        assert!(
            (formula - direct).abs() <= 1e-9 * direct.max(1.0),
            "formula {formula} vs direct {direct}"
        );
        assert!(analysis::three_shortcut_upper_bound(&g) >= formula - 1e-9);
        checked += 1;
    }
    // collinear chains make both the formula and its bound tight
    for spacing in [0.5, 1.0, 2.0] {
        let p: Vec<powertsp::geometry::Point> = (0..4)
            .map(|i| powertsp::geometry::Point::xy(i as f64 * spacing, 0.0))
            .collect();
        let g = analysis::ShortcutGeometry::from_chain(&p[0], &p[1], &p[2], &p[3]).unwrap();
        let direct = (3.0 * spacing) * (3.0 * spacing);
        assert!((analysis::three_shortcut_weight_formula(&g) - direct).abs() <= 1e-9 * direct);
        assert!((analysis::three_shortcut_upper_bound(&g) - direct).abs() <= 1e-9 * direct);
    }
    println!("criterion 4 PASS: 3-shortcut formula exact on 10^4 chains, bound dominates, collinear tight");
}

#[test]
fn criterion_05_related_angles_and_no_triple_acute_configuration() {
    let mut qualifying_pairs = 0usize;
    let mut psi_windows = 0usize;
    for &(n, seed) in &fleet() {
        let ps = instances::gen_random(n, 2, Alpha::TWO, seed);
        let run = tour::run_t3(&ps, SelectionPolicy::Geometric).unwrap();
        let pairs = tour::related_angle_pairs(&ps, &run.tree, &run.trace);
        qualifying_pairs += pairs.len();
        psi_windows += run
            .trace
            .picks
            .iter()
            .filter(|chain| chain.len() >= 4)
            .map(|chain| chain.len() - 3)
            .sum::<usize>();
        let angle_violations = tour::related_angle_violations(&ps, &run.tree, &run.trace);
        assert!(
            angle_violations.is_empty(),
            "n={n} seed={seed}: {angle_violations:?}"
        );
        let triples = tour::acute_psi_triple_violations(&ps, &run.tree, &run.trace);
        assert!(triples.is_empty(), "n={n} seed={seed}: {triples:?}");
    }
    assert!(qualifying_pairs > 0, "sweep produced no qualifying shortcut pairs");
    assert!(psi_windows > 0, "sweep produced no high-degree pick chains");
    println!(
        "criterion 5 PASS: psi_ba >= (pi - psi_ad)/2 on {qualifying_pairs} qualifying pairs, \
         no triple-acute pick configuration across {psi_windows} windows"
    );
}

#[test]
fn criterion_06_exact_ratio_stays_below_five() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xE6);
    let mut worst = 0.0f64;
    for _ in 0..300 {
        let n = rng.random_range(3..=14);
        let ps = instances::gen_random(n, 2, Alpha::TWO, rng.random::<u64>());
        let report = tour::solve_t3(&ps, SelectionPolicy::Geometric).unwrap();
        let (opt, _) = exact::held_karp(&DistanceMatrix::from_point_set(&ps)).unwrap();
        let ratio = report.total_cost / opt;
        worst = worst.max(ratio);
        assert!(ratio <= 5.0 + 1e-9, "n={n}: cost/opt {ratio}");
    }
    println!(
        "criterion 6 PASS: geometric tour cost / exact optimum <= 5 on 300 instances \
         (empirical max {worst:.4})"
    );
}

#[test]
fn criterion_07_unit_square_exact_cost_at_most_four() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB0110);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let n = rng.random_range(2..=16);
        let ps = instances::gen_random(n, 2, Alpha::TWO, rng.random::<u64>());
        let (opt, _) = exact::held_karp(&DistanceMatrix::from_point_set(&ps)).unwrap();
        worst = worst.max(opt);
        assert!(opt <= 4.0 + 1e-9, "n={n}: exact cost {opt}");
    }
    println!(
        "criterion 7 PASS: exact squared-distance tour cost <= 4 on 500 unit-square instances \
         (max {worst:.4})"
    );
}

#[test]
fn criterion_08_gabriel_closure_matches_complete_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6AB);
    for trial in 0..300 {
        let n = rng.random_range(3..=7);
        let seed = rng.random::<u64>();
        for a in [2.0, 3.0] {
            let ps = instances::gen_random(n, 2, Alpha::new(a).unwrap(), seed);
            let via_gabriel = exact::rev_tsp_exact(&ps).unwrap().cost;
            let via_complete = exact::rev_tsp_via_complete_closure(&ps).unwrap().cost;
            assert!(
                (via_gabriel - via_complete).abs() <= 1e-9 * via_gabriel.max(1.0),
                "trial {trial} n={n} alpha={a}: gabriel {via_gabriel} complete {via_complete}"
            );
        }
    }
    println!(
        "criterion 8 PASS: Gabriel-graph closure and complete closure agree on 300 instances \
         at alpha in {{2, 3}}"
    );
}

#[test]
fn criterion_09_unlimited_skipping_blows_up_on_chains() {
    let mut n = 8usize;
    while n <= 1024 {
        let ps = instances::gen_collinear_chain(n, 1.0, Alpha::TWO).unwrap();
        let naive = tour::solve_double_tree_naive(&ps).unwrap();
        let expected = n as f64;
        assert!(
            (naive.ratio_vs_mst - expected).abs() <= 1e-9 * expected,
            "n={n}: naive ratio {} != {expected}",
            naive.ratio_vs_mst
        );
        let geo = tour::solve_t3(&ps, SelectionPolicy::Geometric).unwrap();
        assert!(geo.ratio_vs_mst <= 5.0 + 1e-9, "n={n}: geo ratio {}", geo.ratio_vs_mst);
        n *= 2;
    }
    println!(
        "criterion 9 PASS: double-tree ratio equals n on chains up to 1024 while the \
         geometric tour stays <= 5"
    );
}

#[test]
fn criterion_10_gadget_costs_track_the_source_instance() {
    let mut checked_gaps = 0usize;
    let mut check = |spec: &GadgetSpec| {
        let inst = instances::build_gadget(spec).unwrap();
        for gap in &inst.gaps {
            let jump = inst.points.cost(gap.city_a, gap.city_b);
            let w = f64::from(spec.weight(gap.edge));
            assert!(
                (jump - w).abs() <= 1e-12,
                "gap of edge {} jumps at {jump}, weight {w}",
                gap.edge
            );
            checked_gaps += 1;
        }
        let report = instances::gadget_cost_correspondence(spec).unwrap();
        assert!(
            report.gadget_tour_cost <= report.source_opt + report.slack_budget,
            "gadget tour {} vs opt {} + slack {}",
            report.gadget_tour_cost,
            report.source_opt,
            report.slack_budget
        );
        assert!(report.gadget_tour_cost >= report.source_opt - 1e-9);
    };
    // all 8 weight assignments on K_3
    for bits in 0..8u8 {
        let weights: Vec<u8> = (0..3).map(|i| 1 + ((bits >> i) & 1)).collect();
        check(&GadgetSpec::new(3, weights, 8.0).unwrap());
    }
    // random assignments on K_4 and K_5
    let mut rng = ChaCha8Rng::seed_from_u64(0x6AD6E7);
    for n in [4usize, 5] {
        let m = n * (n - 1) / 2;
        for _ in 0..20 {
            let weights: Vec<u8> = (0..m).map(|_| rng.random_range(1..=2)).collect();
            check(&GadgetSpec::new(n, weights, 4.0).unwrap());
        }
    }
    println!(
        "criterion 10 PASS: {checked_gaps} gap jumps equal their source weights and every \
         constructed tour fits opt + 4L/density"
    );
}

#[test]
fn criterion_11_angle_envelope_peaks_at_zero() {
    let mut k = 1.0f64;
    while k <= 8.0 {
        let (argmax, max) = analysis::angle_envelope_argmax(k, 100_000).unwrap();
        assert_eq!(argmax, 0.0, "k={k}: argmax {argmax} (max {max})");
        k += 0.5;
    }
    println!("criterion 11 PASS: envelope argmax is 0 for k in {{1, 1.5, ..., 8}} on a 10^5 grid");
}
