//! Command-line front end.
//!
//! [`run`] parses arguments, executes one subcommand and returns the exit
//! code together with everything that would be written to stdout and stderr,
//! so the binary is a thin wrapper and tests can drive the CLI in-process.

use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::bounds::{
    all_k_bounds, constancy_probe, default_alpha, doubling_bounds, estimate_largest,
    estimate_smallest, simplicity_check, smallest_all_k_bounds, smallest_doubling_bounds,
    BoundSequence, DEFAULT_MAX_LEVEL, DEFAULT_REL_TOL, MAX_DOUBLING_LEVEL,
};
use crate::coefficients::tau;
use crate::error::{Error, Result};
use crate::fixtures::Fixtures;
use crate::graph::{
    connectivity_lower_bound_shift, connectivity_lower_bound_sup,
    connectivity_lower_bound_sup_default, das_bound, is_connected, laplacian,
    spectral_radius_bounds, tau1_laplacian, tau_inf_laplacian, Graph, DEFAULT_ALPHA_GRID,
};
use crate::matrix::{invert, EMatrix, Matrix, PNorm};
use crate::report::{canonicalize, number, AnalysisReport};
use crate::spectrum::nontrivial_extremes;
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "ergocoef",
    version,
    about = "Ergodicity coefficients and eigenvalue bounds for constant row-sum matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// tau_1 / tau_inf, the trivial eigenvalue and the simplicity certificate.
    Tau(TauArgs),
    /// Bounds on the largest or smallest non-trivial eigenvalue modulus.
    Bounds(BoundsArgs),
    /// Laplacian coefficients and spectral bounds of a simple graph.
    Graph(GraphArgs),
    /// Tabulates tau_p(A^k) for k = 1..K and tests it for constancy.
    Probe(ProbeArgs),
    /// Recomputes every worked example and reports mismatches.
    VerifyPaper(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PChoice {
    #[value(name = "1")]
    One,
    Inf,
    Both,
}

impl PChoice {
    fn norms(self) -> Vec<PNorm> {
        match self {
            PChoice::One => vec![PNorm::One],
            PChoice::Inf => vec![PNorm::Infinity],
            PChoice::Both => PNorm::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    Largest,
    Smallest,
}

#[derive(Args, Debug)]
struct Common {
    /// Input file, or `-` for standard input.
    input: PathBuf,
    /// Which coefficient to use.
    #[arg(long, value_enum, default_value = "both")]
    p: PChoice,
    /// Emit a JSON report instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct TauArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value = "largest")]
    target: Target,
    /// Largest k of the per-k sequence.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..=1_000_000))]
    k: u64,
    /// Deepest doubling level (k = 2^level).
    #[arg(long, default_value_t = DEFAULT_MAX_LEVEL, value_parser = clap::value_parser!(u32).range(0..=MAX_DOUBLING_LEVEL as i64))]
    max_level: u32,
    /// Relative stopping tolerance of the doubling estimate.
    #[arg(long, default_value_t = DEFAULT_REL_TOL)]
    rel_tol: f64,
    /// Rank-one shift `A + alpha J` for singular inputs.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Append the true extremes from the eigenvalue oracle.
    #[arg(long)]
    oracle: bool,
}

#[derive(Args, Debug)]
struct GraphArgs {
    #[command(flatten)]
    common: Common,
    /// Largest power used for the spectral radius and connectivity bounds.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=1_000_000))]
    k: u64,
    /// Shift of the rank-one connectivity bound.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    alpha: f64,
    /// Comma-separated diagonal shifts for the sup method; by default a fixed
    /// grid refined by golden-section search.
    #[arg(long, value_delimiter = ',')]
    alpha_grid: Option<Vec<f64>>,
    /// Vertex labels start at 1.
    #[arg(long)]
    one_based: bool,
    /// Append the true extremes from the eigenvalue oracle.
    #[arg(long)]
    oracle: bool,
}

#[derive(Args, Debug)]
struct ProbeArgs {
    #[command(flatten)]
    common: Common,
    /// Largest power probed.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..=crate::bounds::MAX_PROBE_K))]
    k: u64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    json: bool,
}

/// Result of one CLI invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn failure(code: i32, message: String) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: message,
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_precondition() {
        EXIT_PRECONDITION
    } else {
        EXIT_USAGE
    }
}

/// Runs the CLI. `args` includes the program name; `stdin` is read only when
/// the input path is `-`.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::failure(EXIT_USAGE, text)
            } else {
                Outcome::ok(text)
            };
        }
    };
    match cli.command {
        Command::VerifyPaper(args) => verify_paper(args.json),
        command => match execute(command, stdin) {
            Ok((report, json)) => Outcome::ok(if json {
                report.to_json() + "\n"
            } else {
                render_text(&report)
            }),
            Err(e) => Outcome::failure(exit_code(&e), format!("error: {e}\n")),
        },
    }
}

fn execute(command: Command, stdin: &mut dyn Read) -> Result<(AnalysisReport, bool)> {
    match command {
        Command::Tau(a) => Ok((
            cmd_tau(&a, &read_input(&a.common.input, stdin)?)?,
            a.common.json,
        )),
        Command::Bounds(a) => Ok((
            cmd_bounds(&a, &read_input(&a.common.input, stdin)?)?,
            a.common.json,
        )),
        Command::Graph(a) => Ok((
            cmd_graph(&a, &read_input(&a.common.input, stdin)?)?,
            a.common.json,
        )),
        Command::Probe(a) => Ok((
            cmd_probe(&a, &read_input(&a.common.input, stdin)?)?,
            a.common.json,
        )),
        Command::VerifyPaper(_) => unreachable!("handled by run"),
    }
}

fn read_input(path: &Path, stdin: &mut dyn Read) -> Result<String> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        stdin
            .read_to_string(&mut text)
            .map_err(|e| Error::InvalidArgument(format!("cannot read standard input: {e}")))?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    }
    Ok(text)
}

fn descriptor(path: &Path) -> String {
    if path.as_os_str() == "-" {
        "<stdin>".into()
    } else {
        path.display().to_string()
    }
}

fn new_report(command: &str, common: &Common) -> AnalysisReport {
    let mut r = AnalysisReport::new(command, descriptor(&common.input));
    r.p = common
        .p
        .norms()
        .iter()
        .map(|p| p.label().to_string())
        .collect();
    r
}

fn sequence_json(seq: &BoundSequence, alpha: Option<f64>) -> Value {
    Value::Array(
        seq.entries
            .iter()
            .map(|e| {
                json!({
                    "k": e.k,
                    "alpha": alpha.map(number),
                    "bound": number(e.bound),
                })
            })
            .collect(),
    )
}

fn cmd_tau(args: &TauArgs, text: &str) -> Result<AnalysisReport> {
    let m = Matrix::parse(text)?;
    let mut report = new_report("tau", &args.common);
    let ematrix = match EMatrix::new(m.clone()) {
        Ok(a) => Some(a),
        Err(e @ Error::NotConstantRowSum { .. }) => {
            report.warnings.push(format!(
                "not an e-matrix ({e}); trivial eigenvalue and certificate omitted"
            ));
            None
        }
        Err(e) => return Err(e),
    };
    let mut results = Map::new();
    results.insert("n".into(), json!(m.dim()));
    if let Some(a) = &ematrix {
        results.insert("trivial_eigenvalue".into(), number(a.trivial_eigenvalue()));
    }
    for p in args.common.p.norms() {
        let mut entry = Map::new();
        entry.insert("k".into(), json!(1));
        entry.insert("alpha".into(), Value::Null);
        entry.insert("tau".into(), number(tau(&m, p)));
        if let Some(a) = &ematrix {
            let s = simplicity_check(a, p);
            entry.insert("certified_simple".into(), json!(s.is_certified_simple));
            entry.insert("gap_lower_bound".into(), number(s.gap_lower_bound));
        }
        results.insert(p.label().into(), Value::Object(entry));
    }
    report.results = Value::Object(results);
    Ok(report)
}

fn cmd_bounds(args: &BoundsArgs, text: &str) -> Result<AnalysisReport> {
    if !(args.rel_tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "--rel-tol must be positive, got {}",
            args.rel_tol
        )));
    }
    let a = EMatrix::new(Matrix::parse(text)?)?;
    let mut report = new_report("bounds", &args.common);
    let mut results = Map::new();
    results.insert("n".into(), json!(a.dim()));
    results.insert("trivial_eigenvalue".into(), number(a.trivial_eigenvalue()));
    results.insert(
        "target".into(),
        json!(match args.target {
            Target::Largest => "largest",
            Target::Smallest => "smallest",
        }),
    );

    let alpha = match args.target {
        Target::Largest => None,
        Target::Smallest => smallest_shift(&a, args.alpha, &mut report.warnings)?,
    };
    results.insert("alpha".into(), json!(alpha.map(number)));

    for p in args.common.p.norms() {
        let (per_k, doubling, estimate) = match args.target {
            Target::Largest => (
                all_k_bounds(&a, p, args.k),
                doubling_bounds(&a, p, args.max_level),
                estimate_largest(&a, p, args.rel_tol, args.max_level)?,
            ),
            Target::Smallest => (
                smallest_all_k_bounds(&a, p, args.k, alpha)?,
                smallest_doubling_bounds(&a, p, args.max_level, alpha)?,
                estimate_smallest(&a, p, args.rel_tol, args.max_level, alpha)?,
            ),
        };
        if !estimate.converged {
            report.warnings.push(format!(
                "p={}: doubling estimate did not converge within {} levels",
                p.label(),
                args.max_level
            ));
        }
        results.insert(
            p.label().into(),
            json!({
                "per_k": sequence_json(&per_k, alpha),
                "doubling": sequence_json(&doubling, alpha),
                "estimate": {
                    "k": 1u64 << estimate.levels_used,
                    "alpha": alpha.map(number),
                    "value": number(estimate.estimate),
                    "levels_used": estimate.levels_used,
                    "converged": estimate.converged,
                },
            }),
        );
    }

    if args.oracle {
        results.insert("oracle".into(), oracle_json(&a, &mut report.warnings));
    }
    report.results = Value::Object(results);
    Ok(report)
}

/// Chooses the rank-one shift for the smallest-modulus bounds: none for a
/// nonsingular input, the given or default shift otherwise.
fn smallest_shift(
    a: &EMatrix,
    requested: Option<f64>,
    warnings: &mut Vec<String>,
) -> Result<Option<f64>> {
    if let Some(alpha) = requested {
        warnings.push(format!(
            "using A + {alpha} J: assumes the trivial eigenvalue 0 is simple"
        ));
        return Ok(Some(alpha));
    }
    match invert(a) {
        Ok(_) => Ok(None),
        Err(Error::SingularMatrix { .. }) if a.has_zero_trivial_eigenvalue() => {
            let alpha = default_alpha(a);
            warnings.push(format!(
                "input is singular; using A + {alpha} J, which assumes the trivial eigenvalue 0 is simple"
            ));
            Ok(Some(alpha))
        }
        Err(e) => Err(e),
    }
}

fn oracle_json(a: &EMatrix, warnings: &mut Vec<String>) -> Value {
    match nontrivial_extremes(a) {
        Ok((min, max)) => json!({
            "smallest_nontrivial_modulus": number(min),
            "largest_nontrivial_modulus": number(max),
        }),
        Err(e) => {
            warnings.push(format!("oracle unavailable: {e}"));
            Value::Null
        }
    }
}

fn connectivity_entry(result: Result<crate::graph::ConnectivityReport>) -> Value {
    match result {
        Ok(c) => json!({
            "k": c.k,
            "alpha": number(c.alpha_used),
            "lower_bound": number(c.lower_bound),
        }),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn cmd_graph(args: &GraphArgs, text: &str) -> Result<AnalysisReport> {
    let g = Graph::parse(text, args.one_based)?;
    if let Some(grid) = &args.alpha_grid {
        if grid.is_empty() || grid.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
            return Err(Error::InvalidArgument(
                "--alpha-grid needs positive finite shifts".into(),
            ));
        }
    }
    if args.alpha == 0.0 || !args.alpha.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "--alpha must be a nonzero finite real, got {}",
            args.alpha
        )));
    }
    let mut report = new_report("graph", &args.common);
    let connected = is_connected(&g);
    if !connected {
        report
            .warnings
            .push("graph is disconnected; connectivity bounds are not available".into());
    }
    let mut results = Map::new();
    results.insert("n".into(), json!(g.n()));
    results.insert("edges".into(), json!(g.edge_count()));
    results.insert("max_degree".into(), json!(g.max_degree()));
    results.insert("connected".into(), json!(connected));
    results.insert(
        "closed_form".into(),
        json!({"tau_1": tau1_laplacian(&g), "tau_inf": tau_inf_laplacian(&g)}),
    );
    results.insert(
        "edge_bound".into(),
        match das_bound(&g) {
            Ok(d) => json!(d),
            Err(e) => json!({ "error": e.to_string() }),
        },
    );

    for p in args.common.p.norms() {
        let radius = spectral_radius_bounds(&g, p, args.k);
        let mut shift = Vec::new();
        let mut sup = Vec::new();
        for k in 1..=args.k {
            shift.push(connectivity_entry(connectivity_lower_bound_shift(
                &g, p, k, args.alpha,
            )));
            sup.push(connectivity_entry(match &args.alpha_grid {
                Some(grid) => connectivity_lower_bound_sup(&g, p, k, grid),
                None => connectivity_lower_bound_sup_default(&g, p, k),
            }));
        }
        results.insert(
            p.label().into(),
            json!({
                "spectral_radius": sequence_json(&radius, None),
                "connectivity_rank_one": shift,
                "connectivity_diagonal_sup": sup,
            }),
        );
    }
    if args.alpha_grid.is_none() {
        results.insert(
            "alpha_grid".into(),
            Value::Array(DEFAULT_ALPHA_GRID.iter().map(|&a| number(a)).collect()),
        );
    }
    if args.oracle {
        results.insert(
            "oracle".into(),
            oracle_json(&laplacian(&g), &mut report.warnings),
        );
    }
    report.results = Value::Object(results);
    Ok(report)
}

fn cmd_probe(args: &ProbeArgs, text: &str) -> Result<AnalysisReport> {
    let a = EMatrix::new(Matrix::parse(text)?)?;
    let mut report = new_report("probe", &args.common);
    let mut results = Map::new();
    for p in args.common.p.norms() {
        let probe = constancy_probe(&a, p, args.k);
        results.insert(
            p.label().into(),
            json!({
                "values": probe
                    .values
                    .iter()
                    .map(|&(k, v)| json!({"k": k, "alpha": null, "tau": number(v)}))
                    .collect::<Vec<_>>(),
                "constant_all": probe.constant_all,
                "first_two_equal": probe.first_two_equal,
            }),
        );
    }
    report.results = Value::Object(results);
    Ok(report)
}

fn verify_paper(json: bool) -> Outcome {
    let outcome = verify::run(&Fixtures::worked());
    let code = if outcome.passed() {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    };
    let stdout = if json {
        let v = canonicalize(serde_json::to_value(&outcome).expect("serializable"));
        serde_json::to_string_pretty(&v).expect("serializable") + "\n"
    } else {
        outcome.to_table()
    };
    Outcome {
        code,
        stdout,
        stderr: String::new(),
    }
}

fn render_value(out: &mut String, prefix: &str, v: &Value) {
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                render_value(out, &key, v);
            }
        }
        Value::Array(items) if items.iter().all(|i| i.get("k").is_some()) && !items.is_empty() => {
            for item in items {
                let mut fields = Vec::new();
                if let Value::Object(map) = item {
                    for (k, v) in map {
                        if k != "k" {
                            fields.push(format!("{k}={}", scalar(v)));
                        }
                    }
                }
                let _ = writeln!(
                    out,
                    "{prefix}[k={}]: {}",
                    scalar(&item["k"]),
                    fields.join(" ")
                );
            }
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            let _ = writeln!(out, "{prefix}: [{}]", parts.join(", "));
        }
        other => {
            let _ = writeln!(out, "{prefix}: {}", scalar(other));
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            if x != 0.0 && (x.abs() >= 1e6 || x.abs() < 1e-4) {
                format!("{x:.4e}")
            } else {
                format!("{x:.4}")
            }
        }
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Object(_) => serde_json::to_string(v).unwrap_or_default(),
        other => other.to_string(),
    }
}

/// Plain-text rendering of a report: one `key: value` line per result.
pub fn render_text(report: &AnalysisReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "command: {}", report.command);
    let _ = writeln!(out, "input: {}", report.input_descriptor);
    let _ = writeln!(out, "p: {}", report.p.join(", "));
    render_value(&mut out, "", &report.to_value()["results"]);
    for w in &report.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}
