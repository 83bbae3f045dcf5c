//! Cross-module invariants: oracle cross-checks, sampled inequalities, and
//! property tests over randomized instances.

mod common;

use proptest::prelude::*;

use powertsp::analysis;
use powertsp::exact::{self, DistanceMatrix};
use powertsp::geometry::{angle_between, power_dist, Alpha, Point, PointSet};
use powertsp::instances;
use powertsp::spanning::{build_mst, check_angle_property, mst_lower_bound};
use powertsp::tour::{self, SelectionPolicy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn prim_matches_kruskal_on_200_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE);
    for trial in 0..200u64 {
        let n = rng.random_range(2..=60);
        let dim = if trial % 3 == 0 { 3 } else { 2 };
        let ps = instances::gen_random(n, dim, Alpha::TWO, trial);
        let prim = mst_lower_bound(&ps);
        let kruskal = common::kruskal_mst_weight(&ps);
        assert!(
            (prim - kruskal).abs() <= 1e-9 * prim.max(1.0),
            "trial {trial}: prim {prim} kruskal {kruskal}"
        );
    }
}

#[test]
fn mst_bound_sits_below_the_exact_optimum() {
    for seed in 0..50u64 {
        let ps = instances::gen_random(8, 2, Alpha::TWO, 7000 + seed);
        let mst = mst_lower_bound(&ps);
        let (opt, _) = exact::held_karp(&DistanceMatrix::from_point_set(&ps)).unwrap();
        assert!(mst <= opt + 1e-9 * opt.max(1.0));
        // generic instances with n >= 3 are strictly above the bound
        assert!(mst < opt, "seed {seed}: mst {mst} opt {opt}");
    }
}

#[test]
fn mst_angle_property_holds_on_constructed_trees() {
    for seed in 0..100u64 {
        let n = 3 + (seed as usize % 62);
        let ps = instances::gen_random(n, 2, Alpha::TWO, 400 + seed);
        let tree = build_mst(&ps);
        assert!(check_angle_property(&ps, &tree).is_none());
    }
}

#[test]
fn relaxed_triangle_inequality_on_sampled_triples() {
    let alphas = [1.1, 1.5, 2.0, 3.0, 4.0];
    let mut rng = ChaCha8Rng::seed_from_u64(0xBEEF);
    for &a in &alphas {
        let alpha = Alpha::new(a).unwrap();
        let tau = analysis::relaxed_triangle_tau(alpha);
        for _ in 0..100_000 {
            let pts: Vec<Point> = (0..3)
                .map(|_| Point::xy(rng.random::<f64>() * 10.0, rng.random::<f64>() * 10.0))
                .collect();
            let pr = power_dist(&pts[0], &pts[2], alpha).unwrap();
            let via = power_dist(&pts[0], &pts[1], alpha).unwrap()
                + power_dist(&pts[1], &pts[2], alpha).unwrap();
            let scale = pr.max(via).max(1.0);
            assert!(pr <= tau * via + 1e-9 * scale);
        }
    }
}

#[test]
fn relaxed_triangle_inequality_is_tight_at_midpoints() {
    for x in [0.25, 1.0, 3.5] {
        for a in [1.5, 2.0, 3.0] {
            let alpha = Alpha::new(a).unwrap();
            let tau = analysis::relaxed_triangle_tau(alpha);
            let p = Point::xy(0.0, 0.0);
            let q = Point::xy(x, 0.0);
            let r = Point::xy(2.0 * x, 0.0);
            let lhs = power_dist(&p, &r, alpha).unwrap();
            let rhs =
                tau * (power_dist(&p, &q, alpha).unwrap() + power_dist(&q, &r, alpha).unwrap());
            assert!(
                (lhs / rhs - 1.0).abs() <= 1e-12,
                "midpoint triple should be tight"
            );
        }
    }
}

#[test]
fn small_grid_exact_cost_at_alpha_one() {
    // 3x3 integer grid under plain Euclidean lengths: a tour of cost
    // 8 + sqrt(2) exists (snake plus one diagonal), and nothing beats it.
    let ps = instances::gen_grid(3, 3, Alpha::new(1.0).unwrap()).unwrap();
    let (opt, _) = exact::held_karp(&DistanceMatrix::from_point_set(&ps)).unwrap();
    assert!(opt <= 8.0 + std::f64::consts::SQRT_2 + 1e-9);
}

#[test]
fn revisit_tours_sit_between_mst_and_exact() {
    for seed in 0..40u64 {
        let n = 3 + (seed as usize % 8);
        let ps = instances::gen_random(n, 2, Alpha::TWO, 300 + seed);
        let mst = mst_lower_bound(&ps);
        let rev = exact::rev_tsp_exact(&ps).unwrap().cost;
        let (tsp, _) = exact::held_karp(&DistanceMatrix::from_point_set(&ps)).unwrap();
        assert!(mst <= rev + 1e-9 * rev.max(1.0));
        assert!(rev <= tsp + 1e-9 * tsp.max(1.0));
    }
}

#[test]
fn unit_square_exact_cost_stays_bounded_sample() {
    // spot-check of the unit-square cap; the acceptance suite runs the
    // full 500-instance sweep
    for seed in 0..50u64 {
        let n = 2 + (seed as usize % 15);
        let ps = instances::gen_random(n, 2, Alpha::TWO, 4242 + seed);
        let (opt, _) = exact::held_karp(&DistanceMatrix::from_point_set(&ps)).unwrap();
        assert!(opt <= 4.0 + 1e-9, "seed {seed}: opt {opt}");
    }
}

fn planar_points(n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-50.0..50.0f64, -50.0..50.0f64), n)
}

fn to_set(coords: &[(f64, f64)], alpha: f64) -> Option<PointSet> {
    let points: Vec<Point> = coords.iter().map(|&(x, y)| Point::xy(x, y)).collect();
    PointSet::new(points, Alpha::new(alpha).unwrap()).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn power_dist_is_symmetric(
        (ax, ay) in (-50.0..50.0f64, -50.0..50.0f64),
        (bx, by) in (-50.0..50.0f64, -50.0..50.0f64),
        a in 0.5..4.0f64,
    ) {
        let alpha = Alpha::new(a).unwrap();
        let p = Point::xy(ax, ay);
        let q = Point::xy(bx, by);
        let pq = power_dist(&p, &q, alpha).unwrap();
        let qp = power_dist(&q, &p, alpha).unwrap();
        prop_assert_eq!(pq, qp);
        prop_assert!(pq >= 0.0);
    }

    #[test]
    fn angle_is_invariant_under_swap_scale_and_rigid_motion(
        (sx, sy) in (-10.0..10.0f64, -10.0..10.0f64),
        (ux, uy) in (-10.0..10.0f64, -10.0..10.0f64),
        (vx, vy) in (-10.0..10.0f64, -10.0..10.0f64),
        scale in 0.1..10.0f64,
        theta in 0.0..std::f64::consts::TAU,
        (tx, ty) in (-5.0..5.0f64, -5.0..5.0f64),
    ) {
        let shared = Point::xy(sx, sy);
        let u = Point::xy(ux, uy);
        let v = Point::xy(vx, vy);
        let Ok(base) = angle_between(&shared, &u, &v) else { return Ok(()); };

        let swapped = angle_between(&shared, &v, &u).unwrap();
        prop_assert!((base.angle - swapped.angle).abs() <= 1e-9);

        let scaled_pt = |p: &Point| {
            Point::xy(
                sx + scale * (p.coords()[0] - sx),
                sy + scale * (p.coords()[1] - sy),
            )
        };
        let scaled = angle_between(&shared, &scaled_pt(&u), &scaled_pt(&v)).unwrap();
        prop_assert!((base.angle - scaled.angle).abs() <= 1e-9);

        let moved = |p: &Point| {
            let (x, y) = (p.coords()[0], p.coords()[1]);
            Point::xy(
                theta.cos() * x - theta.sin() * y + tx,
                theta.sin() * x + theta.cos() * y + ty,
            )
        };
        let rigid = angle_between(&moved(&shared), &moved(&u), &moved(&v)).unwrap();
        prop_assert!((base.angle - rigid.angle).abs() <= 1e-9);
    }

    #[test]
    fn tours_are_structurally_valid_for_every_policy(
        coords in planar_points(3..28),
        policy_pick in 0..3usize,
    ) {
        let Some(ps) = to_set(&coords, 2.0) else { return Ok(()); };
        let policy = match policy_pick {
            0 => SelectionPolicy::Arbitrary,
            1 => SelectionPolicy::Geometric,
            _ => SelectionPolicy::Random { seed: 11 },
        };
        let run = tour::run_t3(&ps, policy).unwrap();
        prop_assert!(tour::check_tour_structure(&run.tree, &run.tour).is_empty());
        prop_assert!(tour::check_shortcut_limit(&run.tour).is_empty());
        prop_assert!(tour::check_edges_used_twice(&run.tree, &run.tour).is_empty());
        prop_assert!(tour::check_leg_power_bound(&ps, &run.tree, &run.tour).is_empty());
        prop_assert!(tour::check_trace_matches_legs(&run.tour, &run.trace).is_empty());
    }

    #[test]
    fn contributions_sum_to_tour_cost(coords in planar_points(2..24)) {
        let Some(ps) = to_set(&coords, 2.0) else { return Ok(()); };
        let run = tour::run_t3(&ps, SelectionPolicy::Geometric).unwrap();
        let contribs = analysis::edge_contributions(&ps, &run.tree, &run.tour);
        let total: f64 = contribs.iter().map(|c| c.contrib).sum();
        let cost = run.tour.cost(&ps);
        prop_assert!((total - cost).abs() <= 1e-9 * cost.max(1.0));
    }

    #[test]
    fn double_tree_tours_visit_everything(coords in planar_points(2..40)) {
        let Some(ps) = to_set(&coords, 2.0) else { return Ok(()); };
        let (tree, tour) = tour::run_double_tree_naive(&ps).unwrap();
        prop_assert!(tour::check_tour_structure(&tree, &tour).is_empty());
        prop_assert!(tour::check_edges_used_twice(&tree, &tour).is_empty());
    }
}
