//! Command implementations behind the `powertsp` binary.

pub mod svg;
pub mod verify;

use std::fmt;
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, Context};
use powertsp::exact::{self, DistanceMatrix};
use powertsp::geometry::{Alpha, PointSet};
use powertsp::instances::{self, io::InstanceFile, GadgetSpec};
use powertsp::report::{InstanceDescriptor, RunReport, TourRecord, REPORT_SCHEMA_VERSION};
use powertsp::spanning::build_mst;
use powertsp::tour::{self, SelectionPolicy};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Flag combinations and malformed parameters; maps to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

/// Exit code for a failed command.
pub fn classify_error(err: &anyhow::Error) -> i32 {
    if err.downcast_ref::<UsageError>().is_some() {
        return EXIT_USAGE;
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return EXIT_IO;
    }
    match err.downcast_ref::<powertsp::Error>() {
        Some(powertsp::Error::Io(_))
        | Some(powertsp::Error::Json(_))
        | Some(powertsp::Error::Parse(_)) => EXIT_IO,
        Some(_) => EXIT_USAGE,
        None => EXIT_USAGE,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    GeoT3,
    T3,
    DoubleTree,
    Exact,
    RevtspExact,
}

impl Algorithm {
    pub fn id(self) -> &'static str {
        match self {
            Algorithm::GeoT3 => "geo-t3",
            Algorithm::T3 => "t3",
            Algorithm::DoubleTree => "double-tree",
            Algorithm::Exact => "exact",
            Algorithm::RevtspExact => "revtsp-exact",
        }
    }
}

#[derive(Clone, Debug)]
pub enum GenerateKind {
    Random { n: usize, d: usize, seed: u64 },
    Chain { n: usize, spacing: f64 },
    Grid { rows: usize, cols: usize },
    Gadget { n: usize, weights: Vec<u8>, density: f64 },
}

/// Generates an instance and writes it as CSV (bare points) or JSON
/// (envelope with alpha, labels, and generator metadata), chosen by the
/// output extension.
pub fn cmd_generate(kind: &GenerateKind, alpha: f64, out: &Path) -> anyhow::Result<usize> {
    let alpha = Alpha::new(alpha).map_err(|e| usage(e.to_string()))?;
    let json_out = match out.extension().and_then(|e| e.to_str()) {
        Some("json") => true,
        Some("csv") => false,
        other => {
            return Err(usage(format!(
                "output extension must be .csv or .json, got {other:?}"
            )))
        }
    };
    let (points, labels, meta) = match kind {
        GenerateKind::Random { n, d, seed } => {
            if *n < 1 || *d < 1 {
                return Err(usage("random generator needs --n >= 1 and --d >= 1"));
            }
            let ps = instances::gen_random(*n, *d, alpha, *seed);
            let meta = serde_json::json!({"kind": "random", "n": n, "d": d, "seed": seed});
            (ps, None, meta)
        }
        GenerateKind::Chain { n, spacing } => {
            let ps = instances::gen_collinear_chain(*n, *spacing, alpha)?;
            let meta = serde_json::json!({"kind": "chain", "n": n, "spacing": spacing});
            (ps, None, meta)
        }
        GenerateKind::Grid { rows, cols } => {
            let ps = instances::gen_grid(*rows, *cols, alpha)?;
            let meta = serde_json::json!({"kind": "grid", "rows": rows, "cols": cols});
            (ps, None, meta)
        }
        GenerateKind::Gadget { n, weights, density } => {
            if !json_out {
                return Err(usage(
                    "gadget instances carry labels and metadata; write them to a .json file",
                ));
            }
            let spec = GadgetSpec::new(*n, weights.clone(), *density)?;
            let inst = instances::build_gadget(&spec)?;
            let gaps: Vec<serde_json::Value> = inst
                .gaps
                .iter()
                .map(|g| {
                    serde_json::json!({
                        "edge": g.edge,
                        "city_a": g.city_a,
                        "city_b": g.city_b,
                        "delta": g.delta,
                    })
                })
                .collect();
            let meta = serde_json::json!({
                "kind": "gadget",
                "n": n,
                "weights": weights,
                "density": density,
                "total_length": inst.total_length,
                "gaps": gaps,
            });
            (inst.points, Some(inst.cluster), meta)
        }
    };
    let n = points.len();
    if json_out {
        let mut file = InstanceFile::from_point_set(&points);
        file.labels = labels;
        file.meta = Some(meta);
        instances::io::write_instance_json(out, &file)?;
    } else {
        instances::io::write_points_csv(out, &points)?;
    }
    Ok(n)
}

/// Loads an instance file. CSV files get `alpha_flag` (default 2); JSON
/// envelopes provide their own alpha unless overridden.
pub fn load_instance(
    path: &Path,
    alpha_flag: Option<f64>,
) -> anyhow::Result<(PointSet, Option<u64>)> {
    let ext = path.extension().and_then(|e| e.to_str());
    match ext {
        Some("csv") => {
            let alpha = Alpha::new(alpha_flag.unwrap_or(2.0)).map_err(|e| usage(e.to_string()))?;
            let ps = instances::io::read_points_csv(path, alpha)
                .with_context(|| format!("reading {}", path.display()))?;
            Ok((ps, None))
        }
        Some("json") => {
            let file = instances::io::read_instance_json(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let mut ps = file.to_point_set()?;
            if let Some(a) = alpha_flag {
                ps = ps.with_alpha(Alpha::new(a).map_err(|e| usage(e.to_string()))?);
            }
            let seed = file
                .meta
                .as_ref()
                .and_then(|m| m.get("seed"))
                .and_then(|s| s.as_u64());
            Ok((ps, seed))
        }
        other => Err(usage(format!(
            "instance extension must be .csv or .json, got {other:?}"
        ))),
    }
}

pub struct SolveArgs<'a> {
    pub instance: &'a Path,
    pub alg: Algorithm,
    pub alpha: Option<f64>,
    pub with_opt: bool,
    pub report: Option<&'a Path>,
    pub svg: Option<&'a Path>,
}

/// Runs a solver on an instance file, optionally attaches the exact optimum,
/// writes the JSON report and the SVG drawing.
pub fn cmd_solve(args: &SolveArgs) -> anyhow::Result<RunReport> {
    let (points, seed) = load_instance(args.instance, args.alpha)?;
    if args.alg == Algorithm::GeoT3 && points.dim() != 2 {
        return Err(usage(format!(
            "geo-t3 needs planar instances, got dimension {}",
            points.dim()
        )));
    }

    let mut report = match args.alg {
        Algorithm::GeoT3 => tour::solve_t3(&points, SelectionPolicy::Geometric)?,
        Algorithm::T3 => tour::solve_t3(&points, SelectionPolicy::Arbitrary)?,
        Algorithm::DoubleTree => tour::solve_double_tree_naive(&points)?,
        Algorithm::Exact => {
            let started = Instant::now();
            let tree = build_mst(&points);
            let (cost, order) = exact::held_karp(&DistanceMatrix::from_point_set(&points))?;
            let mst = tree.total_alpha_weight();
            RunReport {
                schema_version: REPORT_SCHEMA_VERSION,
                instance: descriptor(&points),
                algorithm: "exact".into(),
                tour: TourRecord {
                    order,
                    legs: None,
                    revisited: Vec::new(),
                },
                total_cost: cost,
                mst_lower_bound: mst,
                exact_opt: Some(cost),
                ratio_vs_mst: if mst > 0.0 { cost / mst } else { 1.0 },
                ratio_vs_opt: Some(1.0),
                contributions: None,
                wall_clock_seconds: started.elapsed().as_secs_f64(),
            }
        }
        Algorithm::RevtspExact => {
            let started = Instant::now();
            let tree = build_mst(&points);
            let sol = exact::rev_tsp_exact(&points)?;
            let mst = tree.total_alpha_weight();
            RunReport {
                schema_version: REPORT_SCHEMA_VERSION,
                instance: descriptor(&points),
                algorithm: "revtsp-exact".into(),
                tour: TourRecord {
                    order: sol.walk,
                    legs: None,
                    revisited: sol.revisited,
                },
                total_cost: sol.cost,
                mst_lower_bound: mst,
                exact_opt: Some(sol.cost),
                ratio_vs_mst: if mst > 0.0 { sol.cost / mst } else { 1.0 },
                ratio_vs_opt: Some(1.0),
                contributions: None,
                wall_clock_seconds: started.elapsed().as_secs_f64(),
            }
        }
    };

    report.instance.source = args.instance.display().to_string();
    report.instance.seed = seed;

    if args.with_opt && report.exact_opt.is_none() {
        let (opt, _) = exact::held_karp(&DistanceMatrix::from_point_set(&points))?;
        report.exact_opt = Some(opt);
        report.ratio_vs_opt = Some(report.total_cost / opt);
    }

    let rescored = report.rescore(&points);
    if (rescored - report.total_cost).abs() > 1e-9 * report.total_cost.max(1.0) {
        return Err(anyhow!(
            "internal scoring mismatch: reported {} recomputed {rescored}",
            report.total_cost
        ));
    }

    if let Some(path) = args.report {
        std::fs::write(path, report.to_json())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = args.svg {
        let mst = build_mst(&points);
        let drawing = svg::render(
            &points,
            Some(&mst),
            &report.tour.order,
            &report.tour.revisited,
        )
        .map_err(usage)?;
        std::fs::write(path, drawing).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(report)
}

fn descriptor(points: &PointSet) -> InstanceDescriptor {
    InstanceDescriptor {
        source: "points".into(),
        n: points.len(),
        dim: points.dim(),
        alpha: points.alpha().value(),
        seed: None,
    }
}

/// Parses a `--weights 1,2,1` list.
pub fn parse_weights(text: &str) -> anyhow::Result<Vec<u8>> {
    text.split(',')
        .map(|w| {
            w.trim()
                .parse::<u8>()
                .map_err(|e| usage(format!("bad weight {w:?}: {e}")))
        })
        .collect()
}
