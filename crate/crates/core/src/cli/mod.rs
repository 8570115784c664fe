//! Command-line front end: `closure`, `verify` and `sample`.

mod expr;
mod spec;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::exact_numbers::AlgebraicNumber;
use crate::flats_and_varieties::{BaseSetDescriptor, Coordinate};
use crate::flow_engine::{closure_from_flow, flow_set, FlowDescription, FlowError, Provenance, SpanCondition};
use crate::lattice_algebra::{FieldMarker, KVector, Subspace};
use crate::numeric_verifier::{verify, write_samples_csv, PredictedSet, SampleConfig, VerificationReport, VerifyError};

pub use expr::{parse, parse_scalar, Expr, ExprError};
pub use spec::{BaseSpec, ComponentSpec, CoordSpec, FieldSpec, LatticeSpec, PieceSpec, PredictedSpec, Problem, ProblemSpec, SpecError, VarietySpec};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_SYMBOLIC: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;
pub const EXIT_VERIFY_FAILED: i32 = 5;
pub const EXIT_STARVED: i32 = 6;

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "FLOWSET_THREADS";

#[derive(Parser, Debug)]
#[command(name = "flowset", version, about = "Flow sets and closures of varieties in torus quotients")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the flow set symbolically.
    Closure { spec: PathBuf },
    /// Sample far points and compare against the predicted (or computed) flow set.
    Verify {
        spec: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Dump reduced far points as CSV.
    Sample {
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Outcome of one command: exit code, JSON on stdout, text on stderr.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub json: Option<String>,
    pub text: String,
}

impl Outcome {
    fn fail(code: i32, text: impl Into<String>) -> Self {
        Outcome { code, json: None, text: text.into() }
    }
}

#[derive(Serialize)]
struct BaseJson {
    #[serde(rename = "type")]
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    points: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    directions: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coords: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ranges: Option<Vec<[Option<f64>; 2]>>,
}

#[derive(Serialize)]
struct ComponentJson {
    #[serde(rename = "C")]
    base: BaseJson,
    #[serde(rename = "V")]
    v: Vec<Vec<String>>,
    #[serde(rename = "W")]
    w: Vec<Vec<String>>,
    lattice_points: Vec<Vec<String>>,
    #[serde(rename = "dim_C")]
    dim_c: usize,
    compact: bool,
}

#[derive(Serialize)]
struct ClosureJson {
    schema_version: u32,
    command: &'static str,
    mode: FieldMarker,
    /// Vectors are realified, `(Re z₁, Im z₁, …)`, in complex mode.
    span_condition: SpanCondition,
    pi_x_closed: bool,
    components: Vec<ComponentJson>,
    diagnostics: Vec<String>,
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    schema_version: u32,
    command: &'static str,
    mode: FieldMarker,
    provenance: Provenance,
    predicted_components: usize,
    #[serde(flatten)]
    report: &'a VerificationReport,
}

fn strings(v: &[AlgebraicNumber]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn rows(vs: &[KVector]) -> Vec<Vec<String>> {
    vs.iter().map(|v| strings(v)).collect()
}

fn basis(s: &Subspace) -> Vec<Vec<String>> {
    rows(s.basis())
}

fn coordinate_string(c: &Coordinate) -> String {
    let poly = |cs: &[crate::exact_numbers::ComplexScalar]| {
        let parts: Vec<String> =
            cs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| format!("({c})*t^{k}")).collect();
        if parts.is_empty() { "0".to_string() } else { parts.join(" + ") }
    };
    match c {
        Coordinate::Rational { num, den } => format!("({}) / ({})", poly(num), poly(den)),
        Coordinate::Monomials(terms) => {
            let parts: Vec<String> = terms.iter().map(|(c, e)| format!("({c})*t^({e})")).collect();
            if parts.is_empty() { "0".to_string() } else { parts.join(" + ") }
        }
    }
}

fn base_json(b: &BaseSetDescriptor) -> BaseJson {
    let finite = |x: f64| x.is_finite().then_some(x);
    match b {
        BaseSetDescriptor::Points(ps) => {
            BaseJson { kind: "points", points: Some(rows(ps)), directions: None, coords: None, ranges: None }
        }
        BaseSetDescriptor::Affine(f) => BaseJson {
            kind: "affine",
            points: Some(vec![strings(f.base_point())]),
            directions: Some(basis(f.directions())),
            coords: None,
            ranges: None,
        },
        BaseSetDescriptor::Curve(c) => BaseJson {
            kind: "curve",
            points: None,
            directions: Some(basis(&c.thickening)),
            coords: Some(c.curve.coords().iter().map(coordinate_string).collect()),
            ranges: Some(c.ranges.iter().map(|&(a, b)| [finite(a), finite(b)]).collect()),
        },
    }
}

fn closure_json(flow: FlowDescription) -> (String, String) {
    let mode = flow.lattice.marker();
    let report = closure_from_flow(flow);
    let components: Vec<ComponentJson> = report
        .flow
        .components
        .iter()
        .map(|c| ComponentJson {
            base: base_json(&c.base),
            v: basis(&c.v),
            w: basis(c.w()),
            lattice_points: c.torus.summary().lattice_points,
            dim_c: c.dim_c,
            compact: c.torus.is_compact(),
        })
        .collect();
    let mut text = String::new();
    let _ = writeln!(text, "span condition: {:?}", report.flow.span_condition);
    for (k, c) in report.flow.components.iter().enumerate() {
        let s = c.summary();
        let _ = writeln!(text, "component {k}: base {} (dim {}), dim V = {}, dim W = {}", s.base_kind, s.dim_c, s.dim_v, s.dim_w);
    }
    for n in &report.notes {
        let _ = writeln!(text, "{n}");
    }
    let json = ClosureJson {
        schema_version: SCHEMA_VERSION,
        command: "closure",
        mode,
        span_condition: report.flow.span_condition,
        pi_x_closed: report.pi_x_closed,
        components,
        diagnostics: report.notes,
    };
    (serde_json::to_string_pretty(&json).expect("report serializes"), text)
}

fn load(path: &Path) -> Result<Problem, Outcome> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| Outcome::fail(EXIT_PARSE, format!("cannot read {}: {e}\n", path.display())))?;
    ProblemSpec::from_toml(&src)
        .and_then(ProblemSpec::build)
        .map_err(|e| Outcome::fail(EXIT_PARSE, format!("{}: {e}\n", path.display())))
}

fn flow_error(e: FlowError) -> Outcome {
    match e {
        FlowError::SymbolicUnsupported(m) => Outcome::fail(EXIT_SYMBOLIC, format!("{m}\n")),
        other => Outcome::fail(EXIT_INVARIANT, format!("{other}\n")),
    }
}

fn prediction(p: &Problem) -> Result<FlowDescription, Outcome> {
    match &p.predicted {
        Some(f) => Ok(f.clone()),
        None => flow_set(&p.variety, &p.lattice).map_err(flow_error),
    }
}

fn verify_error(e: VerifyError) -> Outcome {
    match e {
        VerifyError::ShellStarved { .. } => Outcome::fail(EXIT_STARVED, format!("{e}\n")),
        VerifyError::Io(_) | VerifyError::Csv(_) => Outcome::fail(EXIT_IO, format!("{e}\n")),
        _ => Outcome::fail(EXIT_PARSE, format!("{e}\n")),
    }
}

pub fn cmd_closure(path: &Path) -> Outcome {
    let p = match load(path) {
        Ok(p) => p,
        Err(o) => return o,
    };
    match flow_set(&p.variety, &p.lattice) {
        Ok(flow) => {
            let (json, text) = closure_json(flow);
            Outcome { code: EXIT_OK, json: Some(json), text }
        }
        Err(e) => flow_error(e),
    }
}

/// Path of the report written by `verify`: `<spec>.verify.json`.
pub fn report_path(spec: &Path) -> PathBuf {
    let mut s = spec.as_os_str().to_owned();
    s.push(".verify.json");
    PathBuf::from(s)
}

pub fn cmd_verify(path: &Path, seed: Option<u64>, count: Option<usize>, eps: Option<f64>, tol: Option<f64>) -> Outcome {
    let p = match load(path) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let flow = match prediction(&p) {
        Ok(f) => f,
        Err(o) => return o,
    };
    let mut cfg: SampleConfig = p.spec.verify.clone();
    cfg.seed = seed.unwrap_or(cfg.seed);
    cfg.count = count.unwrap_or(cfg.count);
    cfg.eps = eps.unwrap_or(cfg.eps);
    cfg.tol = tol.unwrap_or(cfg.tol);
    let run = match verify(&p.variety, &flow, &cfg) {
        Ok(r) => r,
        Err(e) => return verify_error(e),
    };
    let r = &run.report;
    let json = serde_json::to_string_pretty(&VerifyJson {
        schema_version: SCHEMA_VERSION,
        command: "verify",
        mode: p.variety.marker(),
        provenance: flow.provenance,
        predicted_components: flow.components.len(),
        report: r,
    })
    .expect("report serializes");
    if let Err(e) = std::fs::write(report_path(path), format!("{json}\n")) {
        return Outcome::fail(EXIT_IO, format!("cannot write report: {e}"));
    }
    let mut text = String::new();
    let _ = writeln!(
        text,
        "containment: {} (max distance {}, tol {})",
        if r.containment_passed { "pass" } else { "FAIL" },
        r.max_containment_distance.map_or("n/a".to_string(), |d| format!("{d:.3e}")),
        cfg.tol
    );
    for (k, c) in r.coverage.iter().enumerate() {
        let f = c.fraction.map_or("n/a".to_string(), |f| format!("{f:.3}"));
        let _ = writeln!(text, "coverage component {k}: {f} ({}/{} cells{})", c.hit_cells, c.predicted_cells, if c.skipped { ", skipped" } else { "" });
    }
    if let Some(w) = &r.worst_sample {
        let _ = writeln!(text, "worst sample #{} (piece {}, shell {}): reduced {:?}", w.index, w.piece, w.shell, w.reduced);
    }
    if r.coverage_undefined {
        let _ = writeln!(text, "prediction is empty but samples accumulate inside the window");
    }
    let code = if r.passed { EXIT_OK } else { EXIT_VERIFY_FAILED };
    Outcome { code, json: Some(json), text }
}

pub fn cmd_sample(path: &Path, out: &Path) -> Outcome {
    let p = match load(path) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let cfg = &p.spec.verify;
    if let Err(e) = cfg.validate() {
        return Outcome::fail(EXIT_PARSE, e);
    }
    let reducer = crate::lattice_algebra::LatticeReducer::new(&p.lattice);
    let samples = match crate::numeric_verifier::sample_far_points(&p.variety, &reducer, cfg) {
        Ok(s) => s,
        Err(e) => return verify_error(e),
    };
    // Distances are only available when a prediction exists or can be computed.
    let distances: Vec<f64> = match prediction(&p) {
        Ok(flow) => {
            let set = PredictedSet::new(&flow, cfg.curve_nodes);
            samples.iter().map(|s| set.distance(&s.reduced)).collect()
        }
        Err(_) => vec![f64::NAN; samples.len()],
    };
    let file = match std::fs::File::create(out) {
        Ok(f) => f,
        Err(e) => return Outcome::fail(EXIT_IO, format!("cannot create {}: {e}", out.display())),
    };
    if let Err(e) = write_samples_csv(std::io::BufWriter::new(file), &samples, &distances) {
        return verify_error(e);
    }
    Outcome { code: EXIT_OK, json: None, text: format!("wrote {} samples to {}\n", samples.len(), out.display()) }
}

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Closure { spec } => cmd_closure(&spec),
        Command::Verify { spec, seed, count, eps, tol } => cmd_verify(&spec, seed, count, eps, tol),
        Command::Sample { spec, out } => cmd_sample(&spec, &out),
    }
}
