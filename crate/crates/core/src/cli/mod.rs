//! Command-line front end. [`run`] parses arguments, executes one subcommand
//! and returns the exit status with the text destined for stdout and stderr.
//!
//! Exit status: 0 on success, 1 on usage or validation errors (and on failed
//! checks), 2 when an input exceeds a solver capacity.

pub mod format;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Number, Value};

use crate::bounds::{
    classical_bound, classify, random_decomposition_trials, verify_realization, wheel7_demo_rays,
    RealizabilityPolicy, DEFAULT_WHEEL7_DELTA,
};
use crate::error::Error;
use crate::expansion::{
    brute_force_max, expand, ks_propagate, mis_oracle, BruteForceConfig, ExpandedGraph, PropagationOutcome,
    StepReason, Violation,
};
use crate::hypergraph::{build_from_rays, closed_form_independence, generate, Family, FamilySpec, HyperGraph, Weights};
use crate::linalg3::Ray;
use crate::mis::{MisConfig, DEFAULT_MIS_LIMIT};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    File { path: PathBuf, source: Error },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::File { source, .. } | CliError::Core(source) if source.is_capacity() => 2,
            _ => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Exit status plus captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Parser)]
#[command(name = "kshg", version, about = "Kochen-Specker hyper-graph inequalities for qutrits")]
struct Cli {
    /// Emit the report as a JSON object instead of key = value lines.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest graph accepted by the exact independent-set search.
    #[arg(long, global = true, default_value_t = DEFAULT_MIS_LIMIT)]
    mis_limit: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a family member and write it as a hyper-graph file.
    Gen(GenArgs),
    /// Classical bound 2*sum(n) + |U| with an exact maximum independent set.
    Bound { file: PathBuf },
    /// Maximum of the expanded expression by exhaustive enumeration.
    Brute { file: PathBuf },
    /// Maximum of the expanded expression via the independence number.
    Mis { file: PathBuf },
    /// Expand every hyper-edge into its auxiliary bases.
    Expand {
        file: PathBuf,
        /// Write the expanded graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Quantum expectation range and violation class.
    Quantum {
        file: PathBuf,
        #[arg(long)]
        rays: PathBuf,
        #[arg(long)]
        normalize: bool,
        /// Report weights below the overlap minimum as warnings.
        #[arg(long)]
        allow_unrealizable: bool,
    },
    /// Build the hyper-graph of minimal weights between every pair of rays.
    Weights {
        rays: PathBuf,
        #[arg(long)]
        cap: Option<u32>,
        #[arg(long)]
        normalize: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    #[command(subcommand)]
    Demo(Demo),
    #[command(subcommand)]
    Check(Check),
    /// Check user-supplied coordinates of an expanded graph.
    Verify {
        file: PathBuf,
        /// One ray per hyper-graph vertex.
        #[arg(long)]
        rays: PathBuf,
        /// The auxiliary rays in expansion order.
        #[arg(long)]
        aux: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        normalize: bool,
    },
}

#[derive(Debug, Subcommand)]
enum Demo {
    /// Value-assignment propagation with both endpoints of one hyper-edge at 1.
    Clifton {
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=1000))]
        n: u32,
    },
}

#[derive(Debug, Subcommand)]
enum Check {
    /// One-vertex-removal identity on random hyper-graphs.
    Decomposition {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyName {
    Complete,
    Linear,
    Cyclic,
    FractalTree,
    FractalCyclic,
    SquareLattice,
    TorusLattice,
    Wheel7,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(value_enum)]
    family: FamilyName,
    /// Vertex count, or depth for the fractal families.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    mx: Option<usize>,
    #[arg(long)]
    my: Option<usize>,
    /// Uniform hyper-edge weight (default 1).
    #[arg(long, conflicts_with_all = ["weights", "rays", "demo_rays"])]
    weight: Option<u32>,
    /// Comma-separated weights in generation order.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["rays", "demo_rays"])]
    weights: Option<Vec<u32>>,
    /// Derive weights from one ray per vertex.
    #[arg(long, conflicts_with = "demo_rays")]
    rays: Option<PathBuf>,
    /// Derive weights from the built-in wheel ray set.
    #[arg(long)]
    demo_rays: bool,
    /// Rotation angle of the built-in ray set.
    #[arg(long, default_value_t = DEFAULT_WHEEL7_DELTA, requires = "demo_rays")]
    delta: f64,
    #[arg(long)]
    cap: Option<u32>,
    #[arg(long)]
    normalize: bool,
    /// Also write the rays bound to the vertices.
    #[arg(long)]
    emit_rays: Option<PathBuf>,
    #[arg(short, long)]
    output: PathBuf,
}

/// Ordered report fields, rendered as `key = value` lines or one JSON object.
#[derive(Debug, Default)]
struct Report {
    fields: Map<String, Value>,
    failure: Option<String>,
}

impl Report {
    fn put(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.fields.insert(key.into(), value.into());
    }

    /// Floats are rounded to 12 decimals in both renderings.
    fn float(&mut self, key: impl Into<String>, value: f64) {
        self.put(key, round12(value));
    }

    fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(&self.fields).expect("report serializes");
            s.push('\n');
            return s;
        }
        let mut s = String::new();
        for (k, v) in &self.fields {
            s.push_str(&format!("{k} = {}\n", render_value(v)));
        }
        s
    }
}

fn round12(x: f64) -> Value {
    let r: f64 = format!("{x:.12}").parse().expect("formatted float parses");
    let r = if r == 0.0 { 0.0 } else { r };
    Number::from_f64(r).map(Value::Number).unwrap_or(Value::Null)
}

fn render_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_f64() => format!("{:.12}", n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(items) => items.iter().map(render_value).collect::<Vec<_>>().join(", "),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}

/// Runs one command line (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { status: 1, stdout: String::new(), stderr: text }
            } else {
                Outcome { status: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let stdout = report.render(cli.json);
            match report.failure {
                Some(msg) => Outcome { status: 1, stdout, stderr: format!("error: {msg}\n") },
                None => Outcome { status: 0, stdout, stderr: String::new() },
            }
        }
        Err(e) => Outcome { status: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn in_file<T>(path: &Path, r: crate::error::Result<T>) -> CliResult<T> {
    r.map_err(|source| CliError::File { path: path.to_path_buf(), source })
}

fn load_hypergraph(path: &Path) -> CliResult<HyperGraph> {
    in_file(path, format::parse_hypergraph(&read(path)?))
}

fn load_rays(path: &Path, normalize: bool) -> CliResult<Vec<Ray>> {
    in_file(path, format::parse_rays(&read(path)?, normalize))
}

fn execute(cli: &Cli) -> CliResult<Report> {
    let mis = MisConfig::with_limit(cli.mis_limit);
    match &cli.command {
        Command::Gen(args) => gen(args),
        Command::Bound { file } => {
            let h = load_hypergraph(file)?;
            let mut r = summary(&h);
            let b = classical_bound(&h, &mis)?;
            r.put("weight_term", b.weight_term);
            r.put("independence", b.independence_term);
            r.put("witness", one_based(&b.witness));
            r.put("classical_bound", b.total);
            Ok(r)
        }
        Command::Brute { file } => {
            let h = load_hypergraph(file)?;
            let g = expand(&h);
            let max = brute_force_max(&g, &BruteForceConfig::from_env())?;
            oracle_report(&h, &g, "brute_force_max", max, &mis)
        }
        Command::Mis { file } => {
            let h = load_hypergraph(file)?;
            let g = expand(&h);
            let max = mis_oracle(&g, &mis)?;
            oracle_report(&h, &g, "mis_max", max, &mis)
        }
        Command::Expand { file, dot } => {
            let h = load_hypergraph(file)?;
            let g = expand(&h);
            let mut r = summary(&h);
            expansion_summary(&mut r, &g);
            if let Some(path) = dot {
                write(path, &format::write_dot(&g))?;
                r.put("dot", path.display().to_string());
            }
            Ok(r)
        }
        Command::Quantum { file, rays, normalize, allow_unrealizable } => {
            let h = load_hypergraph(file)?;
            let rays = load_rays(rays, *normalize)?;
            let h = h.with_rays(rays)?;
            let policy = if *allow_unrealizable { RealizabilityPolicy::Warn } else { RealizabilityPolicy::Enforce };
            let v = classify(&h, &mis, policy)?;
            let mut r = summary(&h);
            r.put("weight_term", v.quantum.weight_term);
            r.put("eigenvalues", v.quantum.eigen.values.iter().map(|&x| round12(x)).collect::<Vec<_>>());
            r.float("lambda_min", v.quantum.lambda_min);
            r.float("lambda_max", v.quantum.lambda_max);
            r.float("quantum_min", v.quantum.lo);
            r.float("quantum_max", v.quantum.hi);
            r.put("independence", v.classical.independence_term);
            r.put("classical_bound", v.classical.total);
            r.put("classification", v.classification.as_str());
            r.float("margin", v.margin);
            if !v.quantum.warnings.is_empty() {
                r.put("warnings", v.quantum.warnings.clone());
            }
            Ok(r)
        }
        Command::Weights { rays, cap, normalize, output } => {
            let rays = load_rays(rays, *normalize)?;
            let h = build_from_rays(&rays, *cap)?;
            write(output, &format::write_hypergraph(&h))?;
            let mut r = summary(&h);
            r.put("cap", cap.map_or(Value::Null, Value::from));
            r.put("output", output.display().to_string());
            Ok(r)
        }
        Command::Demo(Demo::Clifton { n }) => clifton(*n),
        Command::Check(Check::Decomposition { trials }) => {
            let s = random_decomposition_trials(cli.seed, *trials)?;
            let mut r = Report::default();
            r.put("seed", cli.seed);
            r.put("trials", s.trials);
            r.put("failures", s.failures);
            if s.failures > 0 {
                r.failure = Some(format!("{} of {} decomposition trials failed", s.failures, s.trials));
            }
            Ok(r)
        }
        Command::Verify { file, rays, aux, tol, normalize } => {
            let h = load_hypergraph(file)?;
            let mut coords = load_rays(rays, *normalize)?;
            if coords.len() != h.vertex_count() {
                return Err(CliError::File {
                    path: rays.clone(),
                    source: Error::RayCountMismatch { rays: coords.len(), vertices: h.vertex_count() },
                });
            }
            coords.extend(load_rays(aux, *normalize)?);
            let g = expand(&h);
            let report = verify_realization(&g, &coords, *tol)?;
            let mut r = summary(&h);
            r.put("expanded_vertices", g.vertices().len());
            for c in &report.checks {
                r.put(c.name, if c.passed { "pass" } else { "fail" });
                r.float(format!("{}.worst_deviation", c.name), c.worst_deviation);
                if let Some(o) = &c.offender {
                    r.put(format!("{}.offender", c.name), o.clone());
                }
            }
            r.put("realized", report.passed());
            if !report.passed() {
                let failed: Vec<_> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
                r.failure = Some(format!("realization check failed: {}", failed.join(", ")));
            }
            Ok(r)
        }
    }
}

fn one_based(vertices: &[usize]) -> Vec<usize> {
    vertices.iter().map(|v| v + 1).collect()
}

fn summary(h: &HyperGraph) -> Report {
    let mut r = Report::default();
    r.put("vertices", h.vertex_count());
    r.put("hyper_edges", h.edges().len());
    r.put("weight_sum", h.weight_sum());
    r
}

fn expansion_summary(r: &mut Report, g: &ExpandedGraph) {
    r.put("expanded_vertices", g.vertices().len());
    r.put("expanded_edges", g.edges().len());
    r.put("bases", g.bases().len());
}

fn oracle_report(h: &HyperGraph, g: &ExpandedGraph, key: &str, max: i64, mis: &MisConfig) -> CliResult<Report> {
    let bound = classical_bound(h, mis)?;
    let mut r = summary(h);
    expansion_summary(&mut r, g);
    r.put(key, max);
    r.put("classical_bound", bound.total);
    r.put("attains_bound", max == bound.total as i64);
    Ok(r)
}

fn family_of(args: &GenArgs) -> CliResult<Family> {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| CliError::Usage(format!("family {:?} needs --{flag}", args.family)))
    };
    let depth = |v: Option<usize>| -> CliResult<u32> {
        let k = need(v, "k")?;
        u32::try_from(k).map_err(|_| CliError::Core(Error::InvalidFamily(format!("depth {k} too large"))))
    };
    Ok(match args.family {
        FamilyName::Complete => Family::Complete { k: need(args.k, "k")? },
        FamilyName::Linear => Family::Linear { k: need(args.k, "k")? },
        FamilyName::Cyclic => Family::Cyclic { k: need(args.k, "k")? },
        FamilyName::FractalTree => Family::FractalTree { depth: depth(args.k)? },
        FamilyName::FractalCyclic => Family::FractalCyclic { depth: depth(args.k)? },
        FamilyName::SquareLattice => Family::SquareLattice { mx: need(args.mx, "mx")?, my: need(args.my, "my")? },
        FamilyName::TorusLattice => Family::TorusLattice { mx: need(args.mx, "mx")?, my: need(args.my, "my")? },
        FamilyName::Wheel7 => Family::Wheel7,
    })
}

fn gen(args: &GenArgs) -> CliResult<Report> {
    let family = family_of(args)?;
    let weights = if let Some(list) = &args.weights {
        Weights::PerEdge(list.clone())
    } else if let Some(path) = &args.rays {
        Weights::FromRays { rays: load_rays(path, args.normalize)?, cap: args.cap }
    } else if args.demo_rays {
        Weights::FromRays { rays: wheel7_demo_rays(args.delta), cap: args.cap }
    } else {
        Weights::Uniform(args.weight.unwrap_or(1))
    };
    let spec = FamilySpec { family, weights };
    let h = generate(&spec)?;
    write(&args.output, &format::write_hypergraph(&h))?;
    let mut r = Report::default();
    r.put("family", family.name());
    r.put("vertices", h.vertex_count());
    r.put("hyper_edges", h.edges().len());
    r.put("weight_sum", h.weight_sum());
    let independence = closed_form_independence(&spec)?;
    r.put("closed_form_independence", independence);
    r.put("family_bound", 2 * h.weight_sum() + independence as u64);
    r.put("output", args.output.display().to_string());
    if let Some(path) = &args.emit_rays {
        let rays = h
            .rays()
            .ok_or_else(|| CliError::Usage("--emit-rays needs --rays or --demo-rays".into()))?;
        write(path, &format::write_rays(rays))?;
        r.put("rays", path.display().to_string());
    }
    Ok(r)
}

fn clifton(n: u32) -> CliResult<Report> {
    let h = HyperGraph::new(2, [(0, 1, n)])?;
    let g = expand(&h);
    let outcome = ks_propagate(&g, &[(0, 1), (1, 1)])?;
    let label = |v: usize| g.vertices()[v].to_string();
    let mut r = Report::default();
    r.put("weight", n);
    expansion_summary(&mut r, &g);
    for (k, step) in outcome.trace().iter().enumerate() {
        let why = match step.reason {
            StepReason::Given => "given".to_string(),
            StepReason::Neighbor(u) => format!("orthogonal to {}", label(u)),
            StepReason::Basis(b) => format!("basis {} {} {}", label(b[0]), label(b[1]), label(b[2])),
        };
        r.put(format!("step_{}", k + 1), format!("{} = {} ({why})", label(step.vertex), u8::from(step.value)));
    }
    r.put("steps", outcome.trace().len());
    match &outcome {
        PropagationOutcome::Contradiction { violation, .. } => {
            let v = match violation {
                Violation::Edge(a, b) => format!("edge {} -- {} both 1", label(*a), label(*b)),
                Violation::EmptyBasis(b) => format!("basis {} {} {} all 0", label(b[0]), label(b[1]), label(b[2])),
            };
            r.put("violation", v);
            r.put("outcome", "CONTRADICTION");
        }
        PropagationOutcome::Consistent { .. } => r.put("outcome", "CONSISTENT"),
    }
    Ok(r)
}
