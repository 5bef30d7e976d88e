//! The `homcount` command line.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::json;
use thiserror::Error;

use crate::decomposition::{
    path_decomposition_from_uncle_tree, pathwidth_bound, treedepth_bound, treedepth_forest, uncle_tree,
    PathDecomposition, RootedForest,
};
use crate::dp::dp_solve_by_components;
use crate::error::SolveError;
use crate::graph::{
    check_common_neighbourhood_condition, connected_components, longest_induced_path_order, GraphError, Instance,
    ListAssignment, SimpleGraph, TargetGraph, WeightTable,
};
use crate::hcol::{hcol, recursion_bound, recursion_bound_constant, HColConfig};
use crate::io::{self, ParseError};
use crate::oracle::{brute_force_solve, OracleError, DEFAULT_CAP};
use crate::semiring::{Cost, CountSemiring, DecisionSemiring, MinCostSemiring, PolynomialSemiring, Semiring};

pub const DEBUG_ENV: &str = "HOMCOUNT_DEBUG";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("brute force: {0}")]
    Oracle(OracleError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("{0}")]
    Usage(String),
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::Oracle(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Graph(_) | CliError::Usage(_) => 2,
            CliError::Oracle(OracleError::CapExceeded { .. }) => 3,
            CliError::Oracle(_) => 2,
            CliError::Solve(SolveError::UnknownColour { .. }) => 2,
            CliError::Solve(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "homcount", version, about = "Exact list H-colouring partition functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the partition polynomial of list H-colourings
    Partition(PartitionArgs),
    /// Count (weighted) list H-colourings; --k counts proper k-colourings
    Count(CountArgs),
    /// Minimum total weight of a list H-colouring
    Mincost(MincostArgs),
    /// Independence polynomial of a graph
    IndepPoly(IndepArgs),
    /// Uncle-tree path-decomposition as JSON
    Decomp(DecompArgs),
    /// Tree-depth forest (parent array) as JSON
    Treedepth(TreedepthArgs),
    /// Structural report on a graph and/or target
    Check(CheckArgs),
    /// Brute-force reference value (exit 3 when the enumeration cap is exceeded)
    Brute(BruteArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Hcol,
    Dp,
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Partition,
    Count,
    Mincost,
    Decision,
}

#[derive(Debug, Args)]
pub struct SolveOpts {
    /// Path parameter t (only moves the low-degree threshold)
    #[arg(long, default_value_t = 6)]
    pub t: usize,
    /// Exhaustive-enumeration cutoff
    #[arg(long, default_value_t = 10)]
    pub n0: usize,
    /// Multiplier on the low-degree threshold sqrt(n ln n / t)
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    #[arg(long, value_enum, default_value_t = Engine::Hcol)]
    pub engine: Engine,
    /// Report recursion statistics on stderr (hcol engine)
    #[arg(long)]
    pub stats: bool,
    /// Enable invariant checks and per-node tracing (also HOMCOUNT_DEBUG=1)
    #[arg(long)]
    pub debug: bool,
    #[arg(long)]
    pub json: bool,
    /// Warn when H violates the common-neighbourhood condition or G contains an induced P_t
    #[arg(long)]
    pub check_structure: bool,
    /// Enumeration cap for --engine brute
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: u64,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    pub graph: PathBuf,
    pub target: PathBuf,
    #[arg(long)]
    pub lists: Option<PathBuf>,
    #[arg(long)]
    pub weights: Option<PathBuf>,
    #[command(flatten)]
    pub opts: SolveOpts,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    pub graph: PathBuf,
    /// Count proper k-colourings (H = K_k with colours 1..k)
    #[arg(long, conflicts_with = "target", required_unless_present = "target")]
    pub k: Option<usize>,
    #[arg(long)]
    pub target: Option<PathBuf>,
    #[arg(long)]
    pub lists: Option<PathBuf>,
    #[arg(long)]
    pub weights: Option<PathBuf>,
    #[command(flatten)]
    pub opts: SolveOpts,
}

#[derive(Debug, Args)]
pub struct MincostArgs {
    pub graph: PathBuf,
    pub target: PathBuf,
    pub weights: PathBuf,
    #[arg(long)]
    pub lists: Option<PathBuf>,
    #[command(flatten)]
    pub opts: SolveOpts,
}

#[derive(Debug, Args)]
pub struct IndepArgs {
    pub graph: PathBuf,
    /// Also print the maximum independent set size (the polynomial's degree)
    #[arg(long)]
    pub mis: bool,
    #[command(flatten)]
    pub opts: SolveOpts,
}

#[derive(Debug, Args)]
pub struct DecompArgs {
    pub graph: PathBuf,
    /// Root of the uncle tree for the component containing it
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    /// Report the width bound (Δ-1)(t-2)+1 for this t
    #[arg(long)]
    pub t: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TreedepthArgs {
    pub graph: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    /// Report the height bound (t-2)(Δ-1)+1 for this t
    #[arg(long)]
    pub t: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub target: Option<PathBuf>,
    /// Stop the induced-path search at this many vertices
    #[arg(long)]
    pub cap: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BruteArgs {
    pub graph: PathBuf,
    pub target: PathBuf,
    #[arg(long)]
    pub lists: Option<PathBuf>,
    #[arg(long)]
    pub weights: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Kind::Partition)]
    pub kind: Kind,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: u64,
    #[arg(long)]
    pub json: bool,
}

/// Runs one command and returns what belongs on standard output.
pub fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Partition(a) => {
            let target = read_target(&a.target)?;
            let inst = read_instance(&a.graph, &target, a.lists.as_deref(), a.weights.as_deref())?;
            structure_warnings(&inst.graph, &target, &a.opts);
            let semiring = PolynomialSemiring { vars: target.k() };
            let p = solve(&inst, &target, &a.opts, &semiring)?;
            Ok(if a.opts.json {
                serde_json::to_string_pretty(&p.to_json(target.names())).expect("json")
            } else {
                p.to_text(target.names())
            })
        }
        Command::Count(a) => {
            let target = match (&a.k, &a.target) {
                (Some(k), _) => TargetGraph::complete(*k),
                (None, Some(path)) => read_target(path)?,
                (None, None) => return Err(CliError::Usage("either --k or --target is required".into())),
            };
            let inst = read_instance(&a.graph, &target, a.lists.as_deref(), a.weights.as_deref())?;
            structure_warnings(&inst.graph, &target, &a.opts);
            let n = solve(&inst, &target, &a.opts, &CountSemiring)?;
            Ok(if a.opts.json { json!({ "count": n.to_string() }).to_string() } else { n.to_string() })
        }
        Command::Mincost(a) => {
            let target = read_target(&a.target)?;
            let inst = read_instance(&a.graph, &target, a.lists.as_deref(), Some(&a.weights))?;
            structure_warnings(&inst.graph, &target, &a.opts);
            let cost = solve(&inst, &target, &a.opts, &MinCostSemiring)?;
            Ok(if a.opts.json {
                match &cost {
                    Cost::Finite(c) => json!({ "feasible": true, "min_cost": c.to_string() }),
                    Cost::Infinite => json!({ "feasible": false, "min_cost": null }),
                }
                .to_string()
            } else {
                cost.to_string()
            })
        }
        Command::IndepPoly(a) => {
            let graph = io::parse_graph(&io::read_file(&a.graph)?)?;
            let target = TargetGraph::independent_set_target();
            structure_warnings(&graph, &target, &a.opts);
            let inst = Instance::unweighted(graph, 2);
            let p = solve(&inst, &target, &a.opts, &PolynomialSemiring { vars: 2 })?;
            let coeffs = p.substitute_one(1).univariate(0).map_err(|e| CliError::Usage(e.to_string()))?;
            let alpha = coeffs.len().saturating_sub(1);
            Ok(if a.opts.json {
                json!({
                    "coefficients": coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "max_independent_set": alpha,
                })
                .to_string()
            } else if a.mis {
                format!("{}\nmax independent set: {alpha}", format_univariate(&coeffs))
            } else {
                format_univariate(&coeffs)
            })
        }
        Command::Decomp(a) => {
            let graph = io::parse_graph(&io::read_file(&a.graph)?)?;
            let pd = decompose(&graph, a.root)?;
            let mut out = json!({ "bags": pd.bags, "width": pd.width() });
            if let Some(t) = a.t {
                let bound = pathwidth_bound(graph.max_degree(), t);
                out["width_bound"] = json!(bound);
                out["within_bound"] = json!(pd.width() <= bound);
            }
            Ok(out.to_string())
        }
        Command::Treedepth(a) => {
            let graph = io::parse_graph(&io::read_file(&a.graph)?)?;
            let forest = forest(&graph, a.root)?;
            let height = forest.height().unwrap_or(0);
            let mut out = json!({ "roots": forest.roots, "parent": forest.parent, "height": height });
            if let Some(t) = a.t {
                let bound = treedepth_bound(graph.max_degree(), t);
                out["height_bound"] = json!(bound);
                out["within_bound"] = json!(height <= bound);
            }
            Ok(out.to_string())
        }
        Command::Check(a) => check(&a),
        Command::Brute(a) => {
            let target = read_target(&a.target)?;
            let inst = read_instance(&a.graph, &target, a.lists.as_deref(), a.weights.as_deref())?;
            let text = match a.kind {
                Kind::Partition => {
                    let p = brute_force_solve(&inst, &target, &PolynomialSemiring { vars: target.k() }, a.cap)?;
                    if a.json {
                        return Ok(serde_json::to_string_pretty(&p.to_json(target.names())).expect("json"));
                    }
                    p.to_text(target.names())
                }
                Kind::Count => brute_force_solve(&inst, &target, &CountSemiring, a.cap)?.to_string(),
                Kind::Mincost => brute_force_solve(&inst, &target, &MinCostSemiring, a.cap)?.to_string(),
                Kind::Decision => brute_force_solve(&inst, &target, &DecisionSemiring, a.cap)?.to_string(),
            };
            Ok(text)
        }
    }
}

fn read_target(path: &Path) -> Result<TargetGraph, CliError> {
    Ok(io::parse_target(&io::read_file(path)?)?)
}

fn read_instance(
    graph: &Path,
    target: &TargetGraph,
    lists: Option<&Path>,
    weights: Option<&Path>,
) -> Result<Instance, CliError> {
    let graph = io::parse_graph(&io::read_file(graph)?)?;
    let n = graph.n();
    let lists = match lists {
        Some(p) => io::parse_lists(&io::read_file(p)?, n, target)?,
        None => ListAssignment::full(n, target.k()),
    };
    let weights = match weights {
        Some(p) => io::parse_weights(&io::read_file(p)?, n, target)?,
        None => WeightTable::new(),
    };
    Ok(Instance::new(graph, lists, weights)?)
}

fn debug_enabled(opts: &SolveOpts) -> bool {
    opts.debug || std::env::var(DEBUG_ENV).is_ok_and(|v| !v.is_empty() && v != "0")
}

fn structure_warnings(g: &SimpleGraph, target: &TargetGraph, opts: &SolveOpts) {
    if !opts.check_structure {
        return;
    }
    if let Some((a, b, shared)) = target.common_neighbourhood_violation() {
        eprintln!(
            "warning: colours {} and {} share {} common neighbours; the subexponential bound does not apply",
            target.name(a),
            target.name(b),
            shared.len()
        );
    }
    if longest_induced_path_order(g, opts.t) >= opts.t {
        eprintln!("warning: graph contains an induced path on {} vertices", opts.t);
    }
}

fn solve<S: Semiring>(inst: &Instance, target: &TargetGraph, opts: &SolveOpts, s: &S) -> Result<S::Elem, CliError> {
    match opts.engine {
        Engine::Brute => Ok(brute_force_solve(inst, target, s, opts.cap)?),
        Engine::Dp => Ok(dp_solve_by_components(inst, target, s)?),
        Engine::Hcol => {
            let debug = debug_enabled(opts);
            let cfg = HColConfig {
                n0: opts.n0,
                t: opts.t,
                degree_threshold_scale: opts.scale,
                debug_checks: debug,
                trace: debug,
            };
            let (value, stats) = hcol(inst, target, &cfg, s)?;
            if opts.stats {
                let w = inst.weight();
                let c = recursion_bound_constant(opts.t, target.k());
                eprintln!("nodes: {}", stats.nodes);
                eprintln!("max depth: {}", stats.max_depth);
                let rules: Vec<String> =
                    stats.rule_counts.iter().enumerate().map(|(i, n)| format!("{}={n}", i + 1)).collect();
                eprintln!("rules: {}", rules.join(" "));
                eprintln!("instance weight: {w}");
                match recursion_bound(w, c) {
                    Ok(b) => eprintln!("recursion bound 2^(c sqrt(w ln w)) with c = {c:.3}: {b:.6e}"),
                    Err(_) => eprintln!("recursion bound: undefined for weight {w}"),
                }
            }
            Ok(value)
        }
    }
}

/// `1 + 3x + x^2`; unit coefficients are dropped in front of `x`.
pub fn format_univariate(coeffs: &[BigRational]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(d, c)| {
            let coeff = if d > 0 && c.is_one() { String::new() } else { c.to_string() };
            match d {
                0 => coeff,
                1 => format!("{coeff}x"),
                _ => format!("{coeff}x^{d}"),
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Concatenated uncle-tree decompositions of the components, in original ids.
pub fn decompose(g: &SimpleGraph, root: usize) -> Result<PathDecomposition, CliError> {
    if g.n() > 0 && root >= g.n() {
        return Err(CliError::Usage(format!("root {root} out of range for {} vertices", g.n())));
    }
    let mut bags = Vec::new();
    for comp in connected_components(g) {
        let (sub, map) = g.induced_subgraph(&comp);
        let local_root = map.get(root).copied().flatten().unwrap_or(0);
        let tree = uncle_tree(&sub, local_root).map_err(SolveError::from)?;
        let pd = path_decomposition_from_uncle_tree(&sub, &tree).map_err(SolveError::from)?;
        bags.extend(pd.relabel(&comp).bags);
    }
    Ok(PathDecomposition::new(bags))
}

/// Union of the per-component tree-depth forests, in original ids.
pub fn forest(g: &SimpleGraph, root: usize) -> Result<RootedForest, CliError> {
    if g.n() > 0 && root >= g.n() {
        return Err(CliError::Usage(format!("root {root} out of range for {} vertices", g.n())));
    }
    let mut parent = vec![None; g.n()];
    let mut roots = Vec::new();
    for comp in connected_components(g) {
        let (sub, map) = g.induced_subgraph(&comp);
        let local_root = map.get(root).copied().flatten().unwrap_or(0);
        let tree = uncle_tree(&sub, local_root).map_err(SolveError::from)?;
        let f = treedepth_forest(&sub, &tree).map_err(SolveError::from)?;
        for (local, p) in f.parent.iter().enumerate() {
            parent[comp[local]] = p.map(|p| comp[p]);
        }
        roots.extend(f.roots.iter().map(|&r| comp[r]));
    }
    Ok(RootedForest { roots, parent })
}

struct GraphReport {
    vertices: usize,
    edges: usize,
    max_degree: usize,
    components: usize,
    longest_induced_path: usize,
}

fn check(a: &CheckArgs) -> Result<String, CliError> {
    if a.graph.is_none() && a.target.is_none() {
        return Err(CliError::Usage("pass --graph and/or --target".into()));
    }
    let mut lines = Vec::new();
    if let Some(path) = &a.graph {
        let g = io::parse_graph(&io::read_file(path)?)?;
        let cap = a.cap.unwrap_or(g.n().max(1));
        let report = GraphReport {
            vertices: g.n(),
            edges: g.edge_count(),
            max_degree: g.max_degree(),
            components: connected_components(&g).len(),
            longest_induced_path: longest_induced_path_order(&g, cap),
        };
        lines.push(format!("vertices: {}", report.vertices));
        lines.push(format!("edges: {}", report.edges));
        lines.push(format!("max degree: {}", report.max_degree));
        lines.push(format!("components: {}", report.components));
        if report.longest_induced_path >= cap && cap < g.n() {
            lines.push(format!("longest induced path: at least {cap} vertices (search capped)"));
        } else {
            lines.push(format!("longest induced path: {} vertices", report.longest_induced_path));
            lines.push(format!("P_t-free for every t > {}", report.longest_induced_path));
        }
    }
    if let Some(path) = &a.target {
        let h = read_target(path)?;
        match h.common_neighbourhood_violation() {
            None => lines.push("common-neighbourhood condition: PASS".into()),
            Some((x, y, shared)) => {
                let names: Vec<&str> = shared.iter().map(|&c| h.name(c)).collect();
                lines.push(format!(
                    "common-neighbourhood condition: FAIL (pair {},{} shares {{{}}})",
                    h.name(x),
                    h.name(y),
                    names.join(",")
                ));
            }
        }
        debug_assert_eq!(check_common_neighbourhood_condition(&h), lines.last().is_some_and(|l| l.ends_with("PASS")));
    }
    Ok(lines.join("\n"))
}
