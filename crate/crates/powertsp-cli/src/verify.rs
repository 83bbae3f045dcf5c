//! The `verify` command: randomized property suites over the library's
//! inequalities and invariants. Exit code 0 only when every check holds; the
//! first offending instance is dumped to a JSON file for replay.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use powertsp::analysis;
use powertsp::exact::{self, DistanceMatrix};
use powertsp::gabriel;
use powertsp::geometry::{power_dist, Alpha, Point, PointSet};
use powertsp::instances::{self, io::InstanceFile, GadgetSpec};
use powertsp::spanning::{build_mst, check_angle_property, check_tree_invariants};
use powertsp::tour::{self, SelectionPolicy};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Lemmas,
    Bounds,
    Gabriel,
    Gadget,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemmas => "lemmas",
            Suite::Bounds => "bounds",
            Suite::Gabriel => "gabriel",
            Suite::Gadget => "gadget",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub check: &'static str,
    pub detail: String,
    pub instance: Option<InstanceFile>,
}

impl Violation {
    fn plain(check: &'static str, detail: String) -> Self {
        Violation {
            check,
            detail,
            instance: None,
        }
    }

    fn with_instance(check: &'static str, detail: String, points: &PointSet) -> Self {
        Violation {
            check,
            detail,
            instance: Some(InstanceFile::from_point_set(points)),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifySummary {
    pub checks: Vec<(&'static str, usize)>,
    pub violations: Vec<Violation>,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn merge(&mut self, other: VerifySummary) {
        self.checks.extend(other.checks);
        self.violations.extend(other.violations);
    }
}

fn trial_seeds(seed: u64, label: &str, count: usize) -> Vec<u64> {
    let mut h = seed;
    for b in label.bytes() {
        h = h.wrapping_mul(0x100000001b3).wrapping_add(u64::from(b));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(h);
    (0..count).map(|_| rng.random()).collect()
}

pub fn run_suite(suite: Suite, seed: u64, trials: usize) -> VerifySummary {
    let mut summary = VerifySummary::default();
    match suite {
        Suite::Lemmas => summary.merge(lemmas_suite(seed, trials)),
        Suite::Bounds => summary.merge(bounds_suite(seed, trials)),
        Suite::Gabriel => summary.merge(gabriel_suite(seed, trials)),
        Suite::Gadget => summary.merge(gadget_suite(seed)),
        Suite::All => {
            summary.merge(lemmas_suite(seed, trials));
            summary.merge(bounds_suite(seed, trials));
            summary.merge(gabriel_suite(seed, trials));
            summary.merge(gadget_suite(seed));
        }
    }
    summary
        .violations
        .sort_by(|a, b| (a.check, &a.detail).cmp(&(b.check, &b.detail)));
    summary
}

fn lemmas_suite(seed: u64, trials: usize) -> VerifySummary {
    let mut summary = VerifySummary::default();

    // relaxed triangle inequality
    let violations: Vec<Violation> = trial_seeds(seed, "relaxed-triangle", trials)
        .into_par_iter()
        .flat_map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let pts: Vec<Point> = (0..3)
                .map(|_| Point::xy(rng.random::<f64>() * 10.0, rng.random::<f64>() * 10.0))
                .collect();
            let mut bad = Vec::new();
            for a in [1.5, 2.0, 3.0] {
                let alpha = Alpha::new(a).unwrap();
                let tau = analysis::relaxed_triangle_tau(alpha);
                let pr = power_dist(&pts[0], &pts[2], alpha).unwrap();
                let via = power_dist(&pts[0], &pts[1], alpha).unwrap()
                    + power_dist(&pts[1], &pts[2], alpha).unwrap();
                if pr > tau * via + 1e-9 * pr.max(via).max(1.0) {
                    bad.push(Violation::plain(
                        "relaxed-triangle",
                        format!("alpha {a}: {pr} > {tau} * {via} for {pts:?}"),
                    ));
                }
            }
            bad
        })
        .collect();
    summary.checks.push(("relaxed-triangle", trials));
    summary.violations.extend(violations);

    // k-shortcut bound on random chains
    let violations: Vec<Violation> = trial_seeds(seed, "k-shortcut-bound", trials)
        .into_par_iter()
        .flat_map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let k = rng.random_range(1..=6);
            let pts: Vec<Point> = (0..=k)
                .map(|_| Point::xy(rng.random::<f64>() * 5.0, rng.random::<f64>() * 5.0))
                .collect();
            let lengths: Vec<f64> = pts
                .windows(2)
                .map(|w| powertsp::geometry::euclid_dist(&w[0], &w[1]).unwrap())
                .collect();
            if lengths.contains(&0.0) {
                return Vec::new();
            }
            let bound = analysis::k_shortcut_bound(&lengths, Alpha::TWO).unwrap();
            let actual = power_dist(&pts[0], &pts[k], Alpha::TWO).unwrap();
            if actual > bound * (1.0 + 1e-9) + 1e-9 {
                vec![Violation::plain(
                    "k-shortcut-bound",
                    format!("k={k}: {actual} > {bound}"),
                )]
            } else {
                Vec::new()
            }
        })
        .collect();
    summary.checks.push(("k-shortcut-bound", trials));
    summary.violations.extend(violations);

    // exact 3-shortcut cost identity and its upper bound
    let violations: Vec<Violation> = trial_seeds(seed, "three-shortcut-formula", trials)
        .into_par_iter()
        .flat_map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let pts: Vec<Point> = (0..4)
                .map(|_| {
                    Point::xy(
                        rng.random::<f64>() * 20.0 - 10.0,
                        rng.random::<f64>() * 20.0 - 10.0,
                    )
                })
                .collect();
            let Ok(g) = analysis::ShortcutGeometry::from_chain(&pts[0], &pts[1], &pts[2], &pts[3])
            else {
                return Vec::new();
            };
            let direct: f64 = pts[0]
                .coords()
                .iter()
                .zip(pts[3].coords())
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            let formula = analysis::three_shortcut_weight_formula(&g);
            let mut bad = Vec::new();
            if (formula - direct).abs() > 1e-9 * direct.max(1.0) {
                bad.push(Violation::plain(
                    "three-shortcut-formula",
                    format!("formula {formula} vs direct {direct} for {pts:?}"),
                ));
            }
            if analysis::three_shortcut_upper_bound(&g) < formula - 1e-9 {
                bad.push(Violation::plain(
                    "three-shortcut-bound",
                    format!("bound below formula {formula} for {pts:?}"),
                ));
            }
            bad
        })
        .collect();
    summary.checks.push(("three-shortcut-formula", trials));
    summary.violations.extend(violations);

    // Young's inequality support predicate
    let violations: Vec<Violation> = trial_seeds(seed, "young-inequality", trials)
        .into_par_iter()
        .flat_map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let x = rng.random::<f64>() * 20.0 - 10.0;
            let y = rng.random::<f64>() * 20.0 - 10.0;
            let eps = rng.random::<f64>() * 5.0 + 1e-3;
            if x * y > analysis::young_upper_bound(x, y, eps) + 1e-12 {
                vec![Violation::plain(
                    "young-inequality",
                    format!("x={x} y={y} eps={eps}"),
                )]
            } else {
                Vec::new()
            }
        })
        .collect();
    summary.checks.push(("young-inequality", trials));
    summary.violations.extend(violations);

    // contribution envelope peaks at zero
    let grid = trials.max(10_001);
    let mut k = 1.0f64;
    let mut envelope_trials = 0usize;
    while k <= 8.0 {
        envelope_trials += 1;
        let (argmax, max) = analysis::angle_envelope_argmax(k, grid).unwrap();
        if argmax != 0.0 {
            summary.violations.push(Violation::plain(
                "angle-envelope-argmax",
                format!("k={k}: argmax {argmax}, max {max}"),
            ));
        }
        k += 0.5;
    }
    summary.checks.push(("angle-envelope-argmax", envelope_trials));
    summary
}

fn structural_violations(points: &PointSet, run: &tour::T3Run) -> Vec<Violation> {
    let mut bad = Vec::new();
    let mut push = |check: &'static str, msgs: Vec<String>| {
        for m in msgs {
            bad.push(Violation::with_instance(check, m, points));
        }
    };
    push("tree-shape", check_tree_invariants(points, &run.tree));
    if let Some(msg) = check_angle_property(points, &run.tree) {
        push("tree-angle-property", vec![msg]);
    }
    push("tour-structure", tour::check_tour_structure(&run.tree, &run.tour));
    push("tour-shortcut-limit", tour::check_shortcut_limit(&run.tour));
    push(
        "tour-edges-used-twice",
        tour::check_edges_used_twice(&run.tree, &run.tour),
    );
    push(
        "leg-power-bound",
        tour::check_leg_power_bound(points, &run.tree, &run.tour),
    );
    push(
        "trace-consistency",
        tour::check_trace_matches_legs(&run.tour, &run.trace),
    );
    bad
}

fn bounds_suite(seed: u64, trials: usize) -> VerifySummary {
    let mut summary = VerifySummary::default();
    let instance_count = (trials / 10).max(50);

    let violations: Vec<Violation> = trial_seeds(seed, "bounds-instances", instance_count)
        .into_par_iter()
        .flat_map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let n = rng.random_range(3..=128);
            let ps = instances::gen_random(n, 2, Alpha::TWO, rng.random());
            let mut bad = Vec::new();

            let run = match tour::run_t3(&ps, SelectionPolicy::Geometric) {
                Ok(run) => run,
                Err(e) => {
                    bad.push(Violation::with_instance("geo-t3-run", e.to_string(), &ps));
                    return bad;
                }
            };
            bad.extend(structural_violations(&ps, &run));
            if run.report.total_cost > 5.0 * run.report.mst_lower_bound * (1.0 + 1e-6) {
                bad.push(Violation::with_instance(
                    "geo-five-approx",
                    format!("ratio {}", run.report.ratio_vs_mst),
                    &ps,
                ));
            }
            for m in tour::related_angle_violations(&ps, &run.tree, &run.trace) {
                bad.push(Violation::with_instance("related-angles", m, &ps));
            }
            for m in tour::acute_psi_triple_violations(&ps, &run.tree, &run.trace) {
                bad.push(Violation::with_instance("triple-acute-psi", m, &ps));
            }
            let contribs = analysis::edge_contributions(&ps, &run.tree, &run.tour);
            let total: f64 = contribs.iter().map(|c| c.contrib).sum();
            let cost = run.report.total_cost;
            if (total - cost).abs() > 1e-9 * cost.max(1.0) {
                bad.push(Violation::with_instance(
                    "contribution-sum",
                    format!("contributions {total} vs cost {cost}"),
                    &ps,
                ));
            }
            if let Some(worst) = contribs.iter().map(|c| c.ratio).fold(None, |m: Option<f64>, r| {
                Some(m.map_or(r, |m| m.max(r)))
            }) {
                if worst > 5.0 + 1e-6 {
                    bad.push(Violation::with_instance(
                        "per-edge-contribution-cap",
                        format!("max ratio {worst}"),
                        &ps,
                    ));
                }
            }

            for a in [1.0, 2.0, 3.0] {
                let alpha = Alpha::new(a).unwrap();
                let bound = 2.0 * 3f64.powf(a - 1.0);
                let scaled = ps.with_alpha(alpha);
                for policy in [
                    SelectionPolicy::Arbitrary,
                    SelectionPolicy::Random { seed: s },
                ] {
                    match tour::solve_t3(&scaled, policy) {
                        Ok(report) => {
                            if report.total_cost
                                > bound * report.mst_lower_bound * (1.0 + 1e-9)
                            {
                                bad.push(Violation::with_instance(
                                    "universal-t3-bound",
                                    format!(
                                        "alpha {a} {policy:?}: ratio {}",
                                        report.ratio_vs_mst
                                    ),
                                    &scaled,
                                ));
                            }
                        }
                        Err(e) => bad.push(Violation::with_instance(
                            "t3-run",
                            e.to_string(),
                            &scaled,
                        )),
                    }
                }
            }
            bad
        })
        .collect();
    summary.checks.push(("bounds-instances", instance_count));
    summary.violations.extend(violations);

    // the unlimited-skip baseline degrades linearly on chains
    let mut chain_trials = 0usize;
    let mut n = 8usize;
    while n <= 256 {
        chain_trials += 1;
        let ps = instances::gen_collinear_chain(n, 1.0, Alpha::TWO).unwrap();
        let naive = tour::solve_double_tree_naive(&ps).unwrap();
        if (naive.ratio_vs_mst - n as f64).abs() > 1e-9 * n as f64 {
            summary.violations.push(Violation::with_instance(
                "naive-chain-blowup",
                format!("n={n}: ratio {}", naive.ratio_vs_mst),
                &ps,
            ));
        }
        let geo = tour::solve_t3(&ps, SelectionPolicy::Geometric).unwrap();
        if geo.ratio_vs_mst > 5.0 + 1e-9 {
            summary.violations.push(Violation::with_instance(
                "geo-five-approx",
                format!("chain n={n}: ratio {}", geo.ratio_vs_mst),
                &ps,
            ));
        }
        n *= 2;
    }
    summary.checks.push(("naive-chain-blowup", chain_trials));

    // small instances against the exact oracle
    let exact_count = (trials / 40).clamp(10, 100);
    let violations: Vec<Violation> = trial_seeds(seed, "exact-ratio", exact_count)
        .into_par_iter()
        .flat_map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let n = rng.random_range(3..=12);
            let ps = instances::gen_random(n, 2, Alpha::TWO, rng.random());
            let mut bad = Vec::new();
            let report = tour::solve_t3(&ps, SelectionPolicy::Geometric).unwrap();
            let (opt, _) = exact::held_karp(&DistanceMatrix::from_point_set(&ps)).unwrap();
            if report.total_cost > 5.0 * opt * (1.0 + 1e-9) {
                bad.push(Violation::with_instance(
                    "exact-ratio",
                    format!("cost {} vs opt {opt}", report.total_cost),
                    &ps,
                ));
            }
            if opt > 4.0 + 1e-9 {
                bad.push(Violation::with_instance(
                    "unit-square-cap",
                    format!("exact cost {opt}"),
                    &ps,
                ));
            }
            if report.mst_lower_bound > opt * (1.0 + 1e-9) {
                bad.push(Violation::with_instance(
                    "mst-below-opt",
                    format!("mst {} vs opt {opt}", report.mst_lower_bound),
                    &ps,
                ));
            }
            bad
        })
        .collect();
    summary.checks.push(("exact-ratio", exact_count));
    summary.violations.extend(violations);

    summary
}

fn gabriel_suite(seed: u64, trials: usize) -> VerifySummary {
    let mut summary = VerifySummary::default();

    let graph_count = (trials / 20).clamp(10, 200);
    let violations: Vec<Violation> = trial_seeds(seed, "gabriel-graphs", graph_count)
        .into_par_iter()
        .flat_map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let n = rng.random_range(3..=96);
            let ps = instances::gen_random(n, 2, Alpha::TWO, rng.random());
            let mut bad = Vec::new();
            let g = gabriel::build_gabriel(&ps).unwrap();
            let tree = build_mst(&ps);
            for m in gabriel::mst_containment_violations(&tree, &g) {
                bad.push(Violation::with_instance("mst-in-gabriel", m, &ps));
            }
            for m in gabriel::planarity_violations(&ps, &g) {
                bad.push(Violation::with_instance("gabriel-planarity", m, &ps));
            }
            bad
        })
        .collect();
    summary.checks.push(("gabriel-graphs", graph_count));
    summary.violations.extend(violations);

    let violations: Vec<Violation> = trial_seeds(seed, "two-leg-replacement", trials)
        .into_par_iter()
        .flat_map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let pts: Vec<Point> = (0..3)
                .map(|_| Point::xy(rng.random::<f64>() * 2.0, rng.random::<f64>() * 2.0))
                .collect();
            let mut bad = Vec::new();
            for a in [2.0, 3.0] {
                let alpha = Alpha::new(a).unwrap();
                match gabriel::two_leg_replacement_check(&pts[0], &pts[1], &pts[2], alpha) {
                    Ok(true) | Err(_) => {}
                    Ok(false) => bad.push(Violation::plain(
                        "two-leg-replacement",
                        format!("alpha {a}: detour beats the bound for {pts:?}"),
                    )),
                }
            }
            bad
        })
        .collect();
    summary.checks.push(("two-leg-replacement", trials));
    summary.violations.extend(violations);

    let closure_count = (trials / 40).clamp(10, 200);
    let violations: Vec<Violation> = trial_seeds(seed, "revtsp-closure", closure_count)
        .into_par_iter()
        .flat_map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let n = rng.random_range(3..=7);
            let inst_seed = rng.random();
            let mut bad = Vec::new();
            for a in [2.0, 3.0] {
                let ps = instances::gen_random(n, 2, Alpha::new(a).unwrap(), inst_seed);
                let via_gabriel = exact::rev_tsp_exact(&ps).unwrap().cost;
                let via_complete = exact::rev_tsp_via_complete_closure(&ps).unwrap().cost;
                if (via_gabriel - via_complete).abs() > 1e-9 * via_gabriel.max(1.0) {
                    bad.push(Violation::with_instance(
                        "revtsp-closure",
                        format!("gabriel {via_gabriel} vs complete {via_complete}"),
                        &ps,
                    ));
                }
            }
            bad
        })
        .collect();
    summary.checks.push(("revtsp-closure", closure_count));
    summary.violations.extend(violations);

    summary
}

fn gadget_suite(seed: u64) -> VerifySummary {
    let mut summary = VerifySummary::default();
    let mut specs: Vec<GadgetSpec> = Vec::new();
    for bits in 0..8u8 {
        let weights: Vec<u8> = (0..3).map(|i| 1 + ((bits >> i) & 1)).collect();
        specs.push(GadgetSpec::new(3, weights, 8.0).unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6AD6E7);
    for n in [4usize, 5] {
        let m = n * (n - 1) / 2;
        for _ in 0..5 {
            let weights: Vec<u8> = (0..m).map(|_| rng.random_range(1..=2)).collect();
            specs.push(GadgetSpec::new(n, weights, 4.0).unwrap());
        }
    }
    let count = specs.len();
    for spec in &specs {
        let inst = instances::build_gadget(spec).unwrap();
        for gap in &inst.gaps {
            let jump = inst.points.cost(gap.city_a, gap.city_b);
            let w = f64::from(spec.weight(gap.edge));
            if (jump - w).abs() > 1e-12 {
                summary.violations.push(Violation::with_instance(
                    "gadget-gap-cost",
                    format!("edge {}: jump {jump} vs weight {w}", gap.edge),
                    &inst.points,
                ));
            }
        }
        let cap = 2.0 * (spec.n() as f64).powi(4);
        if inst.total_length >= cap {
            summary.violations.push(Violation::plain(
                "gadget-total-length",
                format!("length {} exceeds {cap}", inst.total_length),
            ));
        }
        let budget = 4.0 * inst.total_length / spec.density();
        if instances::double_traversal_cost(&inst) > budget {
            summary.violations.push(Violation::plain(
                "gadget-traversal-budget",
                format!("double traversal exceeds {budget}"),
            ));
        }
        let report = instances::gadget_cost_correspondence(spec).unwrap();
        if report.gadget_tour_cost > report.source_opt + report.slack_budget {
            summary.violations.push(Violation::plain(
                "gadget-cost-correspondence",
                format!(
                    "tour {} vs opt {} + slack {}",
                    report.gadget_tour_cost, report.source_opt, report.slack_budget
                ),
            ));
        }
    }
    summary.checks.push(("gadget-construction", count));
    summary
}
