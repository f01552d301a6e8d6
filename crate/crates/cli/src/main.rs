use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use qctree::freespace::{
    constrained_dual_norm, exact_norm, exact_quotient_duality, free_norm, RationalSpace,
};
use qctree::light::{
    build_arc_map, quotient_tree_map, tree_map, union_map, wreath_map, Audit, UnionTree,
};
use qctree::metric::{doubling_constant, validate_metric, DoublingReport, ValidationReport};
use qctree::quotient::{quotient, sum};
use qctree::tree::{bounded_turning_constant, gen_tree, Profile, TurningReport};
use qctree::{FiniteMetricSpace, FreeVector, LightnessReport, MetricTree, ScalarMap};
use qctree_cli::doc::{emit, read_document, to_document};
use qctree_cli::suite::{self, Report, TrialRecord, Witness};
use qctree_cli::{CliError, ExperimentConfig};

#[derive(Parser)]
#[command(name = "qctree", version, about = "Quasiconformal trees, quotients and Lipschitz light maps")]
struct Cli {
    /// Default isometry tolerance.
    #[arg(long, global = true, env = "QCTREE_TOL")]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Geodesic,
    Snowflake,
    Comb,
    VicsekStep,
}

impl ProfileArg {
    fn profile(self, s: f64) -> Profile {
        match self {
            ProfileArg::Geodesic => Profile::Geodesic,
            ProfileArg::Snowflake => Profile::Snowflake { s },
            ProfileArg::Comb => Profile::Comb,
            ProfileArg::VicsekStep => Profile::VicsekStep,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MapKind {
    Arc,
    Tree,
    Wreath,
    Union,
    Quotient,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random tree.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "geodesic")]
        profile: ProfileArg,
        #[arg(long, default_value_t = 0.6)]
        snowflake_s: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a space or tree and report its constants.
    Analyze {
        #[arg(long, conflicts_with = "tree", required_unless_present = "tree")]
        space: Option<PathBuf>,
        #[arg(long)]
        tree: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Collapse a subset of a space, or form the pointed sum of spaces.
    Quotient {
        #[arg(long, conflicts_with = "sum", required_unless_present = "sum")]
        space: Option<PathBuf>,
        /// Indices to collapse.
        #[arg(long, value_delimiter = ',', requires = "space")]
        collapse: Vec<usize>,
        /// Pointed spaces to glue at their basepoints.
        #[arg(long, num_args = 1..)]
        sum: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a Lipschitz light map.
    BuildMap {
        #[arg(long, value_enum)]
        kind: MapKind,
        /// Input tree (every kind but union).
        #[arg(long)]
        tree: Option<PathBuf>,
        /// Union input: an ambient space and trees over its indices.
        #[arg(long)]
        union: Option<PathBuf>,
        /// Arc end values; default 0 and the arc diameter.
        #[arg(long, num_args = 2, allow_negative_numbers = true)]
        ends: Vec<f64>,
        /// The two leaves glued by the wreath.
        #[arg(long, value_delimiter = ',')]
        leaves: Vec<usize>,
        /// Vertices collapsed by the quotient kind.
        #[arg(long, value_delimiter = ',')]
        collapse: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Free-space norm of a vector on a pointed space.
    Freenorm {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        mu: PathBuf,
        /// Also require test functions to vanish on these indices.
        #[arg(long, value_delimiter = ',')]
        subset: Vec<usize>,
        /// Solve in rational arithmetic.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run lemma suites over seeded random instances.
    VerifyLemma {
        tags: Vec<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        min_n: Option<usize>,
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long, value_enum)]
        profile: Vec<ProfileArg>,
        #[arg(long, default_value_t = 0.6)]
        snowflake_s: f64,
        /// Write each failure witness to this directory.
        #[arg(long)]
        witness_dir: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the suites of a config file, or summarize a saved report.
    Report {
        #[arg(long, conflicts_with = "input", required_unless_present = "input")]
        config: Option<PathBuf>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        witness_dir: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rerun the trial recorded in a witness file.
    Replay {
        witness: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize, Deserialize)]
struct SpaceAnalysis {
    validation: ValidationReport,
    diameter: f64,
    doubling: DoublingReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    tree: Option<TreeAnalysis>,
}

#[derive(Serialize, Deserialize)]
struct TreeAnalysis {
    leaves: Vec<usize>,
    branch_points: Vec<usize>,
    turning: TurningReport,
}

#[derive(Serialize, Deserialize)]
struct UnionInput {
    space: FiniteMetricSpace,
    trees: Vec<UnionTree>,
}

#[derive(Serialize, Deserialize)]
struct MapOutput {
    map: ScalarMap,
    report: LightnessReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    audit: Option<Audit>,
}

#[derive(Serialize, Deserialize)]
struct NormOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dual: Option<f64>,
    /// Exact value as a reduced fraction.
    #[serde(skip_serializing_if = "Option::is_none")]
    rational: Option<String>,
}

fn checked(space: FiniteMetricSpace) -> Result<FiniteMetricSpace, CliError> {
    let v = validate_metric(&space);
    if v.is_valid() {
        return Ok(space);
    }
    let mut parts = Vec::new();
    if !v.diagonal.is_empty() {
        parts.push(format!("nonzero diagonal at {:?}", v.diagonal));
    }
    if !v.asymmetric.is_empty() {
        parts.push(format!("asymmetric pairs {:?}", v.asymmetric));
    }
    if !v.nonpositive.is_empty() {
        parts.push(format!("nonpositive or non-finite distances at {:?}", v.nonpositive));
    }
    if v.triangle_count > 0 {
        parts.push(format!(
            "{} triangle inequality violations, first (i, j, k) = {:?}",
            v.triangle_count, v.triangle[0]
        ));
    }
    Err(CliError::InvalidMetric(parts.join("; ")))
}

fn load_space(path: &Path) -> Result<FiniteMetricSpace, CliError> {
    checked(read_document("space", path)?)
}

fn load_tree(path: Option<&Path>) -> Result<MetricTree, CliError> {
    let path = path.ok_or_else(|| CliError::Input("--tree is required for this kind".into()))?;
    let tree: MetricTree = read_document("tree", path)?;
    checked(tree.space().clone())?;
    Ok(tree)
}

fn analyze_space(space: &FiniteMetricSpace, tree: Option<&MetricTree>) -> SpaceAnalysis {
    SpaceAnalysis {
        validation: validate_metric(space),
        diameter: space.diameter(),
        doubling: doubling_constant(space),
        tree: tree.map(|t| TreeAnalysis {
            leaves: t.leaves(),
            branch_points: t.branch_points(),
            turning: bounded_turning_constant(t),
        }),
    }
}

fn map_output(space: &FiniteMetricSpace, map: ScalarMap, audit: Option<Audit>) -> MapOutput {
    MapOutput {
        report: map.measure(space),
        map,
        audit,
    }
}

fn build_map(
    kind: MapKind,
    tree: Option<&Path>,
    union: Option<&Path>,
    ends: &[f64],
    leaves: &[usize],
    collapse: &[usize],
) -> Result<MapOutput, CliError> {
    if let MapKind::Union = kind {
        let path = union.ok_or_else(|| CliError::Input("--union is required for kind union".into()))?;
        let input: UnionInput = read_document("union", path)?;
        let space = checked(input.space)?;
        let u = union_map(&space, &input.trees)?;
        return Ok(map_output(&space, u.built.map, Some(u.built.audit)));
    }
    let t = load_tree(tree)?;
    match kind {
        MapKind::Arc => {
            let (a, b) = match ends {
                [a, b] => (*a, *b),
                _ => (0.0, t.space().diameter()),
            };
            let map = build_arc_map(&t, a, b)?;
            Ok(map_output(t.space(), map, None))
        }
        MapKind::Tree => {
            let b = tree_map(&t)?;
            Ok(map_output(t.space(), b.map, Some(b.audit)))
        }
        MapKind::Wreath => {
            let [a, b] = leaves else {
                return Err(CliError::Input("--leaves needs exactly two leaves".into()));
            };
            let w = wreath_map(&t, *a, *b)?;
            Ok(map_output(&w.quotient.space, w.built.map, Some(w.built.audit)))
        }
        MapKind::Quotient => {
            if collapse.is_empty() {
                return Err(CliError::Input("--collapse is required for kind quotient".into()));
            }
            let q = quotient_tree_map(&t, collapse)?;
            Ok(map_output(&q.quotient.space, q.built.map, Some(q.built.audit)))
        }
        MapKind::Union => unreachable!(),
    }
}

fn freenorm(space: &Path, mu: &Path, subset: &[usize], exact: bool) -> Result<NormOutput, CliError> {
    let s = load_space(space)?;
    let mu: FreeVector = read_document("vector", mu)?;
    s.check_indices(&mu.support)?;
    if exact {
        let value = if subset.is_empty() {
            let x0 = s.basepoint().ok_or(qctree::Error::MissingBasepoint)?;
            exact_norm(&RationalSpace::from_space(&s)?, &[x0], &mu)?.value
        } else {
            exact_quotient_duality(&s, subset, &mu)?.left.value
        };
        return Ok(NormOutput {
            value: None,
            dual: None,
            rational: Some(value.to_string()),
        });
    }
    let r = if subset.is_empty() {
        free_norm(&s, &mu)?
    } else {
        constrained_dual_norm(&s, &mu, subset)?
    };
    Ok(NormOutput {
        value: Some(r.value),
        dual: Some(r.dual),
        rational: None,
    })
}

fn write_witnesses(dir: Option<&Path>, report: &Report) -> Result<(), CliError> {
    let Some(dir) = dir else { return Ok(()) };
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    for s in &report.suites {
        for w in &s.witnesses {
            let path = dir.join(format!("{}-{}.json", w.tag, w.params.trial));
            emit(&to_document("witness", w), Some(&path))?;
        }
    }
    Ok(())
}

fn summary(report: &Report) -> String {
    let mut out = format!(
        "qctree {} seed {} config {}\n",
        report.tool_version, report.seed, report.config_hash
    );
    for s in &report.suites {
        out.push_str(&format!(
            "{:<18} {:>4}/{:<4} {}\n",
            s.tag,
            s.passed,
            s.trials,
            if s.ok() { "pass" } else { "FAIL" }
        ));
        for w in &s.worst {
            out.push_str(&format!("    {:<28} worst {} (limit {}, trial {})\n", w.name, w.value, w.limit, w.trial));
        }
    }
    out.push_str(if report.passed { "all suites passed\n" } else { "some suites failed\n" });
    out
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let tol = cli.tol;
    match cli.command {
        Command::Gen {
            n,
            seed,
            profile,
            snowflake_s,
            out,
        } => {
            let t = gen_tree(n, seed, profile.profile(snowflake_s))?;
            emit(&to_document("tree", &t), out.as_deref())?;
        }
        Command::Analyze { space, tree, out } => {
            let a = match (space, tree) {
                (Some(p), _) => analyze_space(&load_space(&p)?, None),
                (None, Some(p)) => {
                    let t = load_tree(Some(&p))?;
                    analyze_space(t.space(), Some(&t))
                }
                (None, None) => unreachable!(),
            };
            emit(&to_document("analysis", &a), out.as_deref())?;
        }
        Command::Quotient {
            space,
            collapse,
            sum: parts,
            out,
        } => {
            if let Some(p) = space {
                if collapse.is_empty() {
                    return Err(CliError::Input("--collapse is required with --space".into()));
                }
                let q = quotient(&load_space(&p)?, &collapse)?;
                emit(&to_document("quotient", &q), out.as_deref())?;
            } else {
                let spaces = parts.iter().map(|p| load_space(p)).collect::<Result<Vec<_>, _>>()?;
                emit(&to_document("sum", &sum(&spaces)?), out.as_deref())?;
            }
        }
        Command::BuildMap {
            kind,
            tree,
            union,
            ends,
            leaves,
            collapse,
            out,
        } => {
            let m = build_map(kind, tree.as_deref(), union.as_deref(), &ends, &leaves, &collapse)?;
            emit(&to_document("map", &m), out.as_deref())?;
        }
        Command::Freenorm {
            space,
            mu,
            subset,
            exact,
            out,
        } => {
            let r = freenorm(&space, &mu, &subset, exact)?;
            emit(&to_document("norm", &r), out.as_deref())?;
        }
        Command::VerifyLemma {
            tags,
            config,
            seed,
            trials,
            min_n,
            max_n,
            profile,
            snowflake_s,
            witness_dir,
            out,
        } => {
            let mut c: ExperimentConfig = match config {
                Some(p) => read_document("config", &p)?,
                None => ExperimentConfig::default(),
            };
            if !tags.is_empty() {
                c.tags = tags;
            }
            c.seed = seed.unwrap_or(c.seed);
            c.trial_count = trials.or(c.trial_count);
            c.min_n = min_n.unwrap_or(c.min_n);
            c.max_n = max_n.or(c.max_n);
            if !profile.is_empty() {
                c.profiles = profile.iter().map(|p| p.profile(snowflake_s)).collect();
            }
            if let Some(t) = tol {
                c.tolerances.isometry = t;
            }
            let report = suite::run_suite(&c)?;
            write_witnesses(witness_dir.as_deref(), &report)?;
            emit(&to_document("report", &report), out.as_deref())?;
            eprint!("{}", summary(&report));
            return Ok(report.exit_code());
        }
        Command::Report {
            config,
            input,
            witness_dir,
            out,
        } => {
            let report: Report = match (config, input) {
                (Some(p), _) => {
                    let mut c: ExperimentConfig = read_document("config", &p)?;
                    if let Some(t) = tol {
                        c.tolerances.isometry = t;
                    }
                    let r = suite::run_suite(&c)?;
                    write_witnesses(witness_dir.as_deref(), &r)?;
                    emit(&to_document("report", &r), out.as_deref())?;
                    r
                }
                (None, Some(p)) => {
                    let r: Report = read_document("report", &p)?;
                    emit(&summary(&r), out.as_deref())?;
                    r
                }
                (None, None) => unreachable!(),
            };
            return Ok(report.exit_code());
        }
        Command::Replay { witness, out } => {
            let w: Witness = read_document("witness", &witness)?;
            let tolerances = tol.map(|t| {
                let mut x = w.tolerances;
                x.isometry = t;
                x
            });
            let r: TrialRecord = suite::replay(&w, tolerances)?;
            emit(&to_document("trial", &r), out.as_deref())?;
            return Ok(if r.passed { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(CliError::EXIT_CODE as u8)
        }
    }
}
