//! Tour construction inside the cube of the spanning tree.
//!
//! The builder recursively splits the tree at a call edge `e = u1u2`, picks
//! one edge incident to each of `u1`, `u2` in the two components, solves the
//! components, and stitches the two Hamiltonian paths together with `e` and
//! one new edge `w1w2`. Every tour edge therefore replaces a path of at most
//! three tree edges (a k-shortcut with `k <= 3`), and every tree edge is used
//! by exactly two tour edges.
//!
//! The edge picked in each component is a policy decision. The `Arbitrary`
//! policy takes the lowest-numbered neighbor; the `Geometric` policy takes
//! the edge making the smallest angle with the call edge, which keeps the
//! stitched shortcuts short and is what the improved planar cost guarantees
//! are about; `Random` draws uniformly and exists to exercise the
//! policy-independent bound.
//!
//! Recursion depth reaches `n` on path-shaped trees, so the traversal runs on
//! an explicit work stack.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis;
use crate::error::{Error, Result};
use crate::geometry::{angle_between, PointSet, REL_TOL};
use crate::report::{contribution_summary, InstanceDescriptor, RunReport, TourRecord};
use crate::spanning::{build_mst, Tree};

/// How line 4 of the cycle builder picks the incident edge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SelectionPolicy {
    /// Deterministic stand-in for "any edge": smallest neighbor id.
    Arbitrary,
    /// Smallest angle with the call edge; ties fall back to neighbor id.
    Geometric,
    /// Uniform draw among the available edges, seeded for reproducibility.
    Random { seed: u64 },
}

impl SelectionPolicy {
    pub fn algorithm_id(&self) -> &'static str {
        match self {
            SelectionPolicy::Arbitrary => "t3",
            SelectionPolicy::Geometric => "geo-t3",
            SelectionPolicy::Random { .. } => "t3-random",
        }
    }
}

/// One tour edge: travels from `from` to `to`, replacing the tree path
/// `edges` (ids in path order).
#[derive(Clone, Debug, PartialEq)]
pub struct Leg {
    pub from: usize,
    pub to: usize,
    pub edges: Vec<usize>,
}

/// A cyclic tour: `order` is a permutation of the vertices and `legs[i]`
/// connects `order[i]` to `order[(i+1) % n]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tour {
    pub order: Vec<usize>,
    pub legs: Vec<Leg>,
}

impl Tour {
    pub fn cost(&self, points: &PointSet) -> f64 {
        self.legs.iter().map(|l| points.cost(l.from, l.to)).sum()
    }

    pub fn max_shortcut_len(&self) -> usize {
        self.legs.iter().map(|l| l.edges.len()).max().unwrap_or(0)
    }
}

/// What produced a traced leg.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LegKind {
    /// The call edge itself (only the root call contributes one).
    CallEdge,
    /// A two-vertex component traversed by its single edge.
    PairPath,
    /// The stitching edge `w1w2` closing a call.
    Stitch,
}

/// Trace record for one generated leg.
#[derive(Clone, Debug)]
pub struct TraceEntry {
    /// Tree edges the leg uses, in path order; equals the leg's `edges`.
    pub edges: Vec<usize>,
    /// Recursion depth of the generating call (root call is 0).
    pub depth: usize,
    /// Call edge the leg was generated under.
    pub call_edge: usize,
    /// Call edge of the enclosing call, if any.
    pub parent_call: Option<usize>,
    pub kind: LegKind,
}

/// Full instrumentation of one cycle construction: per-leg entries parallel
/// to `Tour::legs`, plus the order in which edges were picked at each vertex.
#[derive(Clone, Debug, Default)]
pub struct ShortcutTrace {
    pub entries: Vec<TraceEntry>,
    /// `picks[v]` lists the edges incident to `v` in the order the recursion
    /// used them (as call edge or picked edge).
    pub picks: Vec<Vec<usize>>,
}

enum Side {
    Single,
    Pair { edge: usize, far: usize },
    Big { edge: usize, far: usize },
}

impl Side {
    fn edge(&self) -> Option<usize> {
        match *self {
            Side::Single => None,
            Side::Pair { edge, .. } | Side::Big { edge, .. } => Some(edge),
        }
    }

    /// Endpoint of the stitch on this side: the picked edge's far vertex, or
    /// the component's only vertex.
    fn stitch_end(&self, near: usize) -> usize {
        match *self {
            Side::Single => near,
            Side::Pair { far, .. } | Side::Big { far, .. } => far,
        }
    }
}

struct LegTask {
    from: usize,
    to: usize,
    edges: Vec<usize>,
    kind: LegKind,
    call_edge: usize,
    parent_call: Option<usize>,
    depth: usize,
}

struct SplitTask {
    edge: usize,
    from: usize,
    to: usize,
    forward: bool,
    parent: Option<usize>,
    depth: usize,
}

enum Task {
    Vertex(usize),
    Leg(LegTask),
    Split(SplitTask),
}

struct Builder<'a> {
    points: &'a PointSet,
    tree: &'a Tree,
    policy: SelectionPolicy,
    rng: Option<ChaCha8Rng>,
    removed: Vec<bool>,
    order: Vec<usize>,
    legs: Vec<Leg>,
    entries: Vec<TraceEntry>,
    picks: Vec<Vec<usize>>,
}

impl<'a> Builder<'a> {
    fn new(points: &'a PointSet, tree: &'a Tree, policy: SelectionPolicy) -> Self {
        let rng = match policy {
            SelectionPolicy::Random { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        Builder {
            points,
            tree,
            policy,
            rng,
            removed: vec![false; tree.edges().len()],
            order: Vec::with_capacity(tree.n()),
            legs: Vec::with_capacity(tree.n()),
            entries: Vec::with_capacity(tree.n()),
            picks: vec![Vec::new(); tree.n()],
        }
    }

    fn available(&self, v: usize) -> usize {
        self.tree
            .adjacency(v)
            .iter()
            .filter(|&&(_, id)| !self.removed[id])
            .count()
    }

    /// Picks the next edge at `v` for the call on `call_edge`, recording the
    /// pick order at both endpoints.
    fn pick(&mut self, v: usize, call_edge: usize) -> Option<(usize, usize)> {
        let candidates: Vec<(usize, usize)> = self
            .tree
            .adjacency(v)
            .iter()
            .copied()
            .filter(|&(_, id)| !self.removed[id])
            .collect();
        if candidates.is_empty() {
            return None;
        }
        let (far, edge) = match self.policy {
            SelectionPolicy::Arbitrary => candidates[0],
            SelectionPolicy::Random { .. } => {
                let rng = self.rng.as_mut().expect("rng for random policy");
                candidates[rng.random_range(0..candidates.len())]
            }
            SelectionPolicy::Geometric => {
                let reference = self.tree.other_endpoint(call_edge, v);
                let mut best = candidates[0];
                let mut best_angle = self.angle_at(v, reference, candidates[0].0);
                for &cand in &candidates[1..] {
                    let a = self.angle_at(v, reference, cand.0);
                    if a < best_angle {
                        best_angle = a;
                        best = cand;
                    }
                }
                best
            }
        };
        self.picks[v].push(edge);
        self.picks[far].push(edge);
        Some((edge, far))
    }

    fn angle_at(&self, shared: usize, u: usize, v: usize) -> f64 {
        angle_between(
            self.points.point(shared),
            self.points.point(u),
            self.points.point(v),
        )
        .expect("distinct instance points")
        .angle
    }

    /// Classifies the component of `v` after removing `call_edge`, picking
    /// the component's edge when it has one.
    fn classify(&mut self, v: usize, call_edge: usize) -> Side {
        match self.pick(v, call_edge) {
            None => Side::Single,
            Some((edge, far)) => {
                if self.available(v) == 1 && self.available(far) == 1 {
                    self.removed[edge] = true;
                    Side::Pair { edge, far }
                } else {
                    Side::Big { edge, far }
                }
            }
        }
    }

    /// Emission tasks for a component path. `near` is the call-edge endpoint
    /// in the component, and the path runs `near -> stitch_end` when
    /// `outward` is true, `stitch_end -> near` otherwise.
    fn side_tasks(
        &self,
        side: &Side,
        near: usize,
        outward: bool,
        call_edge: usize,
        parent: Option<usize>,
        depth: usize,
    ) -> Vec<Task> {
        match *side {
            Side::Single => vec![Task::Vertex(near)],
            Side::Pair { edge, far } => {
                let (from, to) = if outward { (near, far) } else { (far, near) };
                vec![
                    Task::Vertex(from),
                    Task::Leg(LegTask {
                        from,
                        to,
                        edges: vec![edge],
                        kind: LegKind::PairPath,
                        call_edge,
                        parent_call: parent,
                        depth,
                    }),
                    Task::Vertex(to),
                ]
            }
            Side::Big { edge, far } => vec![Task::Split(SplitTask {
                edge,
                from: near,
                to: far,
                forward: outward,
                parent: Some(call_edge),
                depth: depth + 1,
            })],
        }
    }

    fn stitch_edges(&self, a: &Side, call_edge: usize, b: &Side) -> Vec<usize> {
        let mut edges = Vec::with_capacity(3);
        if let Some(e) = a.edge() {
            edges.push(e);
        }
        edges.push(call_edge);
        if let Some(e) = b.edge() {
            edges.push(e);
        }
        edges
    }

    fn process_split(&mut self, task: SplitTask, stack: &mut Vec<Task>) {
        let SplitTask {
            edge,
            from,
            to,
            forward,
            parent,
            depth,
        } = task;
        self.removed[edge] = true;
        let side_a = self.classify(from, edge);
        let side_b = self.classify(to, edge);
        let a_end = side_a.stitch_end(from);
        let b_end = side_b.stitch_end(to);

        let mut emission: Vec<Task> = Vec::with_capacity(7);
        if forward {
            // path from `from` to `to`: A-side outward, stitch, B-side inward
            emission.extend(self.side_tasks(&side_a, from, true, edge, parent, depth));
            emission.push(Task::Leg(LegTask {
                from: a_end,
                to: b_end,
                edges: self.stitch_edges(&side_a, edge, &side_b),
                kind: LegKind::Stitch,
                call_edge: edge,
                parent_call: parent,
                depth,
            }));
            emission.extend(self.side_tasks(&side_b, to, false, edge, parent, depth));
        } else {
            // path from `to` to `from`
            emission.extend(self.side_tasks(&side_b, to, true, edge, parent, depth));
            emission.push(Task::Leg(LegTask {
                from: b_end,
                to: a_end,
                edges: self.stitch_edges(&side_b, edge, &side_a),
                kind: LegKind::Stitch,
                call_edge: edge,
                parent_call: parent,
                depth,
            }));
            emission.extend(self.side_tasks(&side_a, from, false, edge, parent, depth));
        }
        stack.extend(emission.into_iter().rev());
    }

    fn run(mut self, root_edge: usize) -> (Tour, ShortcutTrace) {
        let root = self.tree.edge(root_edge);
        let (u1, u2) = (root.u, root.v);
        self.removed[root_edge] = true;
        self.picks[u1].push(root_edge);
        self.picks[u2].push(root_edge);
        let side1 = self.classify(u1, root_edge);
        let side2 = self.classify(u2, root_edge);
        let w1 = side1.stitch_end(u1);
        let w2 = side2.stitch_end(u2);

        let mut emission: Vec<Task> = Vec::new();
        // path of the u1-component from w1 to u1
        emission.extend(self.side_tasks(&side1, u1, false, root_edge, None, 0));
        emission.push(Task::Leg(LegTask {
            from: u1,
            to: u2,
            edges: vec![root_edge],
            kind: LegKind::CallEdge,
            call_edge: root_edge,
            parent_call: None,
            depth: 0,
        }));
        // path of the u2-component from u2 to w2
        emission.extend(self.side_tasks(&side2, u2, true, root_edge, None, 0));
        // stitch closing the cycle: w2 back to w1
        emission.push(Task::Leg(LegTask {
            from: w2,
            to: w1,
            edges: self.stitch_edges(&side2, root_edge, &side1),
            kind: LegKind::Stitch,
            call_edge: root_edge,
            parent_call: None,
            depth: 0,
        }));

        let mut stack: Vec<Task> = emission.into_iter().rev().collect();
        while let Some(task) = stack.pop() {
            match task {
                Task::Vertex(v) => self.order.push(v),
                Task::Leg(leg) => {
                    debug_assert_eq!(self.order.last(), Some(&leg.from), "leg emission order");
                    self.entries.push(TraceEntry {
                        edges: leg.edges.clone(),
                        depth: leg.depth,
                        call_edge: leg.call_edge,
                        parent_call: leg.parent_call,
                        kind: leg.kind,
                    });
                    self.legs.push(Leg {
                        from: leg.from,
                        to: leg.to,
                        edges: leg.edges,
                    });
                }
                Task::Split(split) => self.process_split(split, &mut stack),
            }
        }
        debug_assert_eq!(self.order.len(), self.tree.n());
        debug_assert_eq!(self.legs.len(), self.tree.n());
        debug_assert!(self.removed.iter().all(|&r| r));
        (
            Tour {
                order: self.order,
                legs: self.legs,
            },
            ShortcutTrace {
                entries: self.entries,
                picks: self.picks,
            },
        )
    }
}

/// Builds a Hamiltonian cycle of the tree cube that contains the tree edge
/// `root_edge`, recording how every leg was generated.
pub fn cycle_in_cube(
    points: &PointSet,
    tree: &Tree,
    root_edge: usize,
    policy: SelectionPolicy,
) -> Result<(Tour, ShortcutTrace)> {
    if tree.n() < 2 {
        return Err(Error::SizeOutOfRange {
            what: "cycle_in_cube",
            n: tree.n(),
            min: 2,
            max: usize::MAX,
        });
    }
    if root_edge >= tree.edges().len() {
        return Err(Error::NotATreeEdge(root_edge));
    }
    Ok(Builder::new(points, tree, policy).run(root_edge))
}

/// Everything one tree-cube solve produces.
pub struct T3Run {
    pub tree: Tree,
    pub tour: Tour,
    pub trace: ShortcutTrace,
    pub report: RunReport,
}

/// Runs the tree-cube tour construction end to end: MST, root call on the
/// lexicographically smallest tree edge, cycle construction, scoring.
pub fn run_t3(points: &PointSet, policy: SelectionPolicy) -> Result<T3Run> {
    let started = Instant::now();
    let tree = build_mst(points);
    let (tour, trace) = if points.len() == 1 {
        (
            Tour {
                order: vec![0],
                legs: Vec::new(),
            },
            ShortcutTrace {
                entries: Vec::new(),
                picks: vec![Vec::new()],
            },
        )
    } else {
        // Edges are stored sorted, so edge 0 is the lexicographically
        // smallest; any root choice preserves the cost bounds, a fixed one
        // makes runs reproducible.
        cycle_in_cube(points, &tree, 0, policy)?
    };
    let report = score_tour(points, &tree, &tour, policy.algorithm_id(), started);
    Ok(T3Run {
        tree,
        tour,
        trace,
        report,
    })
}

/// MST-based tour construction with the given selection policy.
pub fn solve_t3(points: &PointSet, policy: SelectionPolicy) -> Result<RunReport> {
    Ok(run_t3(points, policy)?.report)
}

/// The classical double-spanning-tree heuristic: walk an Euler tour of the
/// doubled MST and skip every vertex already seen, with no limit on how many
/// consecutive vertices a shortcut may skip. Under powered distances this
/// baseline degrades arbitrarily badly (a chain of equally spaced points
/// yields one giant closing shortcut).
pub fn run_double_tree_naive(points: &PointSet) -> Result<(Tree, Tour)> {
    let tree = build_mst(points);
    let n = tree.n();
    if n == 1 {
        return Ok((
            tree,
            Tour {
                order: vec![0],
                legs: Vec::new(),
            },
        ));
    }
    let mut visited = vec![false; n];
    let mut order = vec![0usize];
    let mut legs: Vec<Leg> = Vec::with_capacity(n);
    let mut walk: Vec<usize> = Vec::with_capacity(2 * (n - 1));
    let mut cut = 0usize;
    let mut last = 0usize;
    visited[0] = true;
    // (vertex, next adjacency slot, edge back to parent)
    let mut stack: Vec<(usize, usize, Option<usize>)> = vec![(0, 0, None)];
    while let Some((v, idx, parent_edge)) = stack.pop() {
        if idx < tree.adjacency(v).len() {
            let (w, eid) = tree.adjacency(v)[idx];
            stack.push((v, idx + 1, parent_edge));
            if !visited[w] {
                visited[w] = true;
                walk.push(eid);
                legs.push(Leg {
                    from: last,
                    to: w,
                    edges: walk[cut..].to_vec(),
                });
                order.push(w);
                last = w;
                cut = walk.len();
                stack.push((w, 0, Some(eid)));
            }
        } else if let Some(eid) = parent_edge {
            walk.push(eid);
        }
    }
    legs.push(Leg {
        from: last,
        to: 0,
        edges: walk[cut..].to_vec(),
    });
    Ok((tree, Tour { order, legs }))
}

/// Double-tree baseline wrapped into a scored report.
pub fn solve_double_tree_naive(points: &PointSet) -> Result<RunReport> {
    let started = Instant::now();
    let (tree, tour) = run_double_tree_naive(points)?;
    Ok(score_tour(points, &tree, &tour, "double-tree", started))
}

fn score_tour(
    points: &PointSet,
    tree: &Tree,
    tour: &Tour,
    algorithm: &str,
    started: Instant,
) -> RunReport {
    let cost = tour.cost(points);
    let mst = tree.total_alpha_weight();
    let contribs = analysis::edge_contributions(points, tree, tour);
    RunReport {
        schema_version: crate::report::REPORT_SCHEMA_VERSION,
        instance: InstanceDescriptor {
            source: "points".to_string(),
            n: points.len(),
            dim: points.dim(),
            alpha: points.alpha().value(),
            seed: None,
        },
        algorithm: algorithm.to_string(),
        tour: TourRecord {
            order: tour.order.clone(),
            legs: Some(tour.legs.iter().map(|l| l.edges.clone()).collect()),
            revisited: Vec::new(),
        },
        total_cost: cost,
        mst_lower_bound: mst,
        exact_opt: None,
        ratio_vs_mst: if mst > 0.0 { cost / mst } else { 1.0 },
        ratio_vs_opt: None,
        contributions: Some(contribution_summary(&contribs)),
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    }
}

// ---------------------------------------------------------------------------
// Structural and angle checks used by the test suites and the verify command.
// ---------------------------------------------------------------------------

/// Basic tour validity: a permutation, one leg per vertex, legs consistent
/// with the cyclic order, and every leg's edge list an actual tree path
/// between its endpoints.
pub fn check_tour_structure(tree: &Tree, tour: &Tour) -> Vec<String> {
    let mut bad = Vec::new();
    let n = tree.n();
    if tour.order.len() != n {
        bad.push(format!("order has {} entries, expected {n}", tour.order.len()));
        return bad;
    }
    let mut seen = vec![false; n];
    for &v in &tour.order {
        if v >= n || seen[v] {
            bad.push(format!("order is not a permutation (vertex {v})"));
            return bad;
        }
        seen[v] = true;
    }
    if n == 1 {
        if !tour.legs.is_empty() {
            bad.push("single-vertex tour must have no legs".into());
        }
        return bad;
    }
    if tour.legs.len() != n {
        bad.push(format!("{} legs, expected {n}", tour.legs.len()));
        return bad;
    }
    for (i, leg) in tour.legs.iter().enumerate() {
        let from = tour.order[i];
        let to = tour.order[(i + 1) % n];
        if leg.from != from || leg.to != to {
            bad.push(format!("leg {i} connects {}->{}, order says {from}->{to}", leg.from, leg.to));
        }
        if leg.edges.is_empty() {
            bad.push(format!("leg {i} uses no tree edges"));
            continue;
        }
        // follow the edge list from `from`; it must be a simple path to `to`
        let mut at = leg.from;
        let mut ok = true;
        for &eid in &leg.edges {
            let e = tree.edge(eid);
            at = if e.u == at {
                e.v
            } else if e.v == at {
                e.u
            } else {
                ok = false;
                break;
            };
        }
        if !ok || at != leg.to {
            bad.push(format!("leg {i} edge list is not a tree path from {} to {}", leg.from, leg.to));
        }
    }
    bad
}

/// The tree-cube property: no leg uses more than three tree edges.
pub fn check_shortcut_limit(tour: &Tour) -> Vec<String> {
    tour.legs
        .iter()
        .enumerate()
        .filter(|(_, l)| l.edges.len() > 3)
        .map(|(i, l)| format!("leg {i} uses {} > 3 tree edges", l.edges.len()))
        .collect()
}

/// Every tree edge is used by exactly two legs.
pub fn check_edges_used_twice(tree: &Tree, tour: &Tour) -> Vec<String> {
    let mut uses = vec![0usize; tree.edges().len()];
    for leg in &tour.legs {
        for &e in &leg.edges {
            uses[e] += 1;
        }
    }
    uses.iter()
        .enumerate()
        .filter(|&(_, &c)| c != 2)
        .map(|(e, c)| format!("tree edge {e} used {c} times, expected 2"))
        .collect()
}

/// The k-shortcut cost bound, checked for every leg of a constructed tour:
/// `|leg|^alpha <= k^(alpha-1) * sum(|e_i|^alpha)`.
pub fn check_leg_power_bound(points: &PointSet, tree: &Tree, tour: &Tour) -> Vec<String> {
    let mut bad = Vec::new();
    for (i, leg) in tour.legs.iter().enumerate() {
        let lengths: Vec<f64> = leg.edges.iter().map(|&e| tree.edge(e).euclid_len).collect();
        let bound = analysis::k_shortcut_bound(&lengths, points.alpha())
            .expect("alpha >= 1 for tour bound checks");
        let actual = points.cost(leg.from, leg.to);
        if actual > bound * (1.0 + REL_TOL) + REL_TOL {
            bad.push(format!("leg {i}: cost {actual} exceeds k-shortcut bound {bound}"));
        }
    }
    bad
}

/// The trace mirrors the tour leg for leg.
pub fn check_trace_matches_legs(tour: &Tour, trace: &ShortcutTrace) -> Vec<String> {
    let mut bad = Vec::new();
    if tour.legs.len() != trace.entries.len() {
        bad.push(format!(
            "{} trace entries for {} legs",
            trace.entries.len(),
            tour.legs.len()
        ));
        return bad;
    }
    for (i, (leg, entry)) in tour.legs.iter().zip(&trace.entries).enumerate() {
        if leg.edges != entry.edges {
            bad.push(format!("trace entry {i} does not reconstruct leg {i}"));
        }
    }
    bad
}

/// A pair of related angles produced by two consecutive 3-shortcuts sharing
/// an edge: `psi_ba` between the parent call edge and the shared edge, and
/// `psi_ad` between the shared edge and the deeper call's pick, all measured
/// at their common vertex.
#[derive(Clone, Copy, Debug)]
pub struct RelatedAngles {
    pub vertex: usize,
    pub psi_ba: f64,
    pub psi_ad: f64,
}

fn shared_vertex(tree: &Tree, e1: usize, e2: usize) -> Option<usize> {
    let a = tree.edge(e1);
    let b = tree.edge(e2);
    if a.u == b.u || a.u == b.v {
        Some(a.u)
    } else if a.v == b.u || a.v == b.v {
        Some(a.v)
    } else {
        None
    }
}

fn psi_at(points: &PointSet, tree: &Tree, v: usize, e1: usize, e2: usize) -> f64 {
    angle_between(
        points.point(v),
        points.point(tree.other_endpoint(e1, v)),
        points.point(tree.other_endpoint(e2, v)),
    )
    .expect("distinct instance points")
    .psi
}

/// Extracts every qualifying pair of consecutive 3-shortcuts from a trace:
/// the parent call stitched `s(a,b,c)` and the recursive call on `a`
/// stitched `s(e,a,d)` with `d` incident to both `a` and `b`.
pub fn related_angle_pairs(
    points: &PointSet,
    tree: &Tree,
    trace: &ShortcutTrace,
) -> Vec<RelatedAngles> {
    let mut stitch_len = std::collections::HashMap::new();
    for entry in &trace.entries {
        if entry.kind == LegKind::Stitch {
            stitch_len.insert(entry.call_edge, entry.edges.len());
        }
    }
    let mut pairs = Vec::new();
    for entry in &trace.entries {
        if entry.kind != LegKind::Stitch || entry.edges.len() != 3 {
            continue;
        }
        let a = entry.call_edge;
        let Some(b) = entry.parent_call else { continue };
        if stitch_len.get(&b) != Some(&3) {
            continue;
        }
        let Some(v) = shared_vertex(tree, a, b) else { continue };
        debug_assert_eq!(entry.edges[1], a, "call edge is the middle of its stitch");
        let flanks = [entry.edges[0], entry.edges[2]];
        let Some(&d) = flanks
            .iter()
            .find(|&&f| tree.edge(f).u == v || tree.edge(f).v == v)
        else {
            continue;
        };
        pairs.push(RelatedAngles {
            vertex: v,
            psi_ba: psi_at(points, tree, v, b, a),
            psi_ad: psi_at(points, tree, v, a, d),
        });
    }
    pairs
}

/// Geometric-policy invariant: for every qualifying pair,
/// `psi_ba >= (pi - psi_ad) / 2` up to tolerance.
pub fn related_angle_violations(
    points: &PointSet,
    tree: &Tree,
    trace: &ShortcutTrace,
) -> Vec<String> {
    related_angle_pairs(points, tree, trace)
        .into_iter()
        .filter(|p| p.psi_ba < (std::f64::consts::PI - p.psi_ad) / 2.0 - 1e-9)
        .map(|p| {
            format!(
                "at vertex {}: psi_ba {} < (pi - psi_ad)/2 with psi_ad {}",
                p.vertex, p.psi_ba, p.psi_ad
            )
        })
        .collect()
}

/// Geometric-policy invariant: the pick order at a vertex never produces
/// three consecutive supplement angles all below `pi/2` (the configuration
/// the planar cost analysis rules out).
pub fn acute_psi_triple_violations(
    points: &PointSet,
    tree: &Tree,
    trace: &ShortcutTrace,
) -> Vec<String> {
    let limit = std::f64::consts::FRAC_PI_2 - 1e-9;
    let mut bad = Vec::new();
    for (v, chain) in trace.picks.iter().enumerate() {
        if chain.len() < 4 {
            continue;
        }
        let psis: Vec<f64> = chain
            .windows(2)
            .map(|w| psi_at(points, tree, v, w[0], w[1]))
            .collect();
        for j in 1..psis.len() - 1 {
            if psis[j - 1] < limit && psis[j] < limit && psis[j + 1] < limit {
                bad.push(format!(
                    "at vertex {v}: consecutive psi {} {} {} all below pi/2",
                    psis[j - 1],
                    psis[j],
                    psis[j + 1]
                ));
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Alpha, Point, PointSet};
    use crate::instances;

    fn collinear(n: usize) -> PointSet {
        instances::gen_collinear_chain(n, 1.0, Alpha::TWO).unwrap()
    }

    fn all_checks(points: &PointSet, tree: &Tree, tour: &Tour, trace: &ShortcutTrace) {
        assert!(check_tour_structure(tree, tour).is_empty());
        assert!(check_shortcut_limit(tour).is_empty());
        assert!(check_edges_used_twice(tree, tour).is_empty());
        assert!(check_leg_power_bound(points, tree, tour).is_empty());
        assert!(check_trace_matches_legs(tour, trace).is_empty());
    }

    #[test]
    fn path_with_middle_root_edge_matches_hand_trace() {
        let ps = collinear(4);
        let tree = build_mst(&ps);
        // root call on the middle edge bc = (1,2)
        let (tour, trace) = cycle_in_cube(&ps, &tree, 1, SelectionPolicy::Arbitrary).unwrap();
        assert_eq!(tour.order, vec![0, 1, 2, 3]);
        let ks: Vec<usize> = tour.legs.iter().map(|l| l.edges.len()).collect();
        assert_eq!(ks, vec![1, 1, 1, 3]);
        assert_eq!(tour.cost(&ps), 12.0);
        all_checks(&ps, &tree, &tour, &trace);
    }

    #[test]
    fn star_tour_is_valid() {
        let ps = PointSet::new(
            vec![
                Point::xy(0.0, 0.0),
                Point::xy(1.0, 0.0),
                Point::xy(0.0, 1.0),
                Point::xy(-1.0, 0.0),
            ],
            Alpha::TWO,
        )
        .unwrap();
        let tree = build_mst(&ps);
        // root call on the center->(1,0) edge, which is edge (0,1)
        let root = tree
            .edges()
            .iter()
            .position(|e| (e.u, e.v) == (0, 1))
            .unwrap();
        let (tour, trace) = cycle_in_cube(&ps, &tree, root, SelectionPolicy::Arbitrary).unwrap();
        all_checks(&ps, &tree, &tour, &trace);
    }

    #[test]
    fn two_point_tour_uses_the_edge_twice() {
        let ps = PointSet::new(vec![Point::xy(0.0, 0.0), Point::xy(2.0, 0.0)], Alpha::TWO).unwrap();
        let tree = build_mst(&ps);
        let (tour, trace) = cycle_in_cube(&ps, &tree, 0, SelectionPolicy::Geometric).unwrap();
        assert_eq!(tour.order, vec![0, 1]);
        assert_eq!(tour.legs.len(), 2);
        for leg in &tour.legs {
            assert_eq!(leg.edges, vec![0]);
        }
        assert_eq!(tour.cost(&ps), 8.0);
        all_checks(&ps, &tree, &tour, &trace);
    }

    #[test]
    fn invalid_root_edge_is_rejected() {
        let ps = collinear(3);
        let tree = build_mst(&ps);
        assert!(matches!(
            cycle_in_cube(&ps, &tree, 9, SelectionPolicy::Arbitrary),
            Err(Error::NotATreeEdge(9))
        ));
    }

    #[test]
    fn solve_on_chain_with_lexicographic_root() {
        // Root call lands on edge (0,1); hand-tracing the recursion gives the
        // tour 0,1,3,2 with leg costs 1,4,1,4 at alpha = 2.
        let report = solve_t3(&collinear(4), SelectionPolicy::Geometric).unwrap();
        assert_eq!(report.tour.order, vec![0, 1, 3, 2]);
        assert!((report.total_cost - 10.0).abs() < 1e-12);
        assert!((report.ratio_vs_mst - 10.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn trivial_sizes() {
        let one = PointSet::new(vec![Point::xy(0.5, 0.5)], Alpha::TWO).unwrap();
        let report = solve_t3(&one, SelectionPolicy::Geometric).unwrap();
        assert_eq!(report.total_cost, 0.0);
        assert_eq!(report.ratio_vs_mst, 1.0);

        let two = PointSet::new(vec![Point::xy(0.0, 0.0), Point::xy(3.0, 0.0)], Alpha::TWO).unwrap();
        let report = solve_t3(&two, SelectionPolicy::Arbitrary).unwrap();
        assert_eq!(report.total_cost, 18.0);
    }

    #[test]
    fn double_tree_on_chain_walks_out_and_shortcuts_back() {
        for n in [3usize, 10, 100] {
            let ps = collinear(n);
            let (_, tour) = run_double_tree_naive(&ps).unwrap();
            let expected = (n - 1) as f64 + ((n - 1) as f64).powi(2);
            assert_eq!(tour.cost(&ps), expected);
            assert_eq!(tour.order, (0..n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn double_tree_on_triangle_is_the_perimeter() {
        let ps = PointSet::new(
            vec![Point::xy(0.0, 0.0), Point::xy(2.0, 0.0), Point::xy(1.0, 1.5)],
            Alpha::TWO,
        )
        .unwrap();
        let (_, tour) = run_double_tree_naive(&ps).unwrap();
        let perimeter = ps.cost(0, 1) + ps.cost(1, 2) + ps.cost(2, 0);
        assert!((tour.cost(&ps) - perimeter).abs() < 1e-12);
    }

    #[test]
    fn double_tree_on_unit_square_costs_four() {
        let ps = PointSet::new(
            vec![
                Point::xy(0.0, 0.0),
                Point::xy(1.0, 0.0),
                Point::xy(1.0, 1.0),
                Point::xy(0.0, 1.0),
            ],
            Alpha::TWO,
        )
        .unwrap();
        let report = solve_double_tree_naive(&ps).unwrap();
        assert_eq!(report.total_cost, 4.0);
    }

    #[test]
    fn deep_path_does_not_overflow_the_stack() {
        let ps = collinear(50_000);
        let report = solve_t3(&ps, SelectionPolicy::Arbitrary).unwrap();
        assert_eq!(report.tour.order.len(), 50_000);
    }

    #[test]
    fn policies_produce_valid_tours_on_random_instances() {
        for seed in 0..10u64 {
            let ps = instances::gen_random(60, 2, Alpha::TWO, seed);
            for policy in [
                SelectionPolicy::Arbitrary,
                SelectionPolicy::Geometric,
                SelectionPolicy::Random { seed: 99 },
            ] {
                let run = run_t3(&ps, policy).unwrap();
                all_checks(&ps, &run.tree, &run.tour, &run.trace);
            }
        }
    }

    #[test]
    fn random_policy_is_reproducible() {
        let ps = instances::gen_random(40, 2, Alpha::TWO, 5);
        let a = run_t3(&ps, SelectionPolicy::Random { seed: 7 }).unwrap();
        let b = run_t3(&ps, SelectionPolicy::Random { seed: 7 }).unwrap();
        assert_eq!(a.tour.order, b.tour.order);
    }
}
