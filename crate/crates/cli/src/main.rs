//! `sigcurve` command-line front end.
//!
//! Exit codes: 0 success or congruent, 1 not congruent, 2 I/O or malformed
//! input, 3 math-domain error (error name on stderr), 4 undecidable.

use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sigcurve::congruence::{congruence_closed, congruence_open, find_partition, Decision};
use sigcurve::curve::{
    euclidean_curvature, resample_by_arclength, CurvatureFunction, CurvatureProfile, GroupElement, GroupKind,
    PlanarCurve,
};
use sigcurve::io::{curve_to_json, parse_curve};
use sigcurve::reconstruction::{affine_curve_from_mu, curve_from_curvature, reconstruct_from_signature};
use sigcurve::robustness::{explicit_bound, perturbation_experiment, ExperimentRow};
use sigcurve::signature::{affine_signature, euclidean_signature, PhasePortrait, SignatureKind};
use sigcurve::{AffineExponent, Config, Mat2, OutputFormat, SigError, Vec2};

#[derive(Parser)]
#[command(name = "sigcurve", version, about = "Differential invariant signatures of planar curves")]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

/// Config file and per-flag overrides; flags win over the file, the file over defaults.
#[derive(Args)]
struct Overrides {
    /// JSON config file.
    #[arg(long, global = true, env = "SIGCURVE_CONFIG")]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    integrator_steps: Option<usize>,
    #[arg(long, global = true)]
    resample_nodes: Option<usize>,
    #[arg(long, global = true)]
    differentiation_tol: Option<f64>,
    #[arg(long, global = true)]
    quadrature_tol: Option<f64>,
    #[arg(long, global = true)]
    comparison_tol: Option<f64>,
    #[arg(long, global = true)]
    vertex_tol: Option<f64>,
    #[arg(long, global = true)]
    injectivity_tol: Option<f64>,
    #[arg(long, global = true)]
    affine_exponent: Option<Exponent>,
    #[arg(long, global = true)]
    output_format: Option<Format>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Exponent {
    #[value(name = "1/2")]
    Half,
    #[value(name = "1/3")]
    Third,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Euclid,
    Affine,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Source {
    Curvature,
    Signature,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the signature of a curve.
    Signature {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Kind::Euclid)]
        kind: Kind,
        /// Output path; a `.meta.json` sidecar is written next to it. Stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebuild a curve from a curvature or signature CSV (`s,k0[,k1,...]`).
    Reconstruct {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Euclid)]
        kind: Kind,
        #[arg(long, value_enum, default_value_t = Source::Curvature)]
        from: Source,
        /// Starting point as `x,y`.
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        x0: String,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta0: f64,
        /// Treat the input as one period of a closed curve.
        #[arg(long)]
        closed: bool,
        /// Total length; defaults to the sidecar value or the last `s`.
        #[arg(long)]
        length: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide congruence of two curves; prints a verdict.
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Euclid)]
        kind: Kind,
        /// Use the closed-curve test (default: when both inputs are closed).
        #[arg(long)]
        closed: bool,
        /// Force the open-curve test.
        #[arg(long, conflicts_with = "closed")]
        open: bool,
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Seeded perturbation trials over a sweep of noise amplitudes.
    Experiment {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated amplitudes.
        #[arg(long, value_delimiter = ',', default_value = "1e-2,1e-3,1e-4")]
        sweep: Vec<f64>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long)]
        allow_vertices: bool,
        /// Table path; bounds go to a `.bounds.json` sidecar. Stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Constants of the explicit closeness bound at one delta.
    Bound {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Input(String),
    Math(SigError),
}

impl From<SigError> for Failure {
    fn from(e: SigError) -> Self {
        match e {
            SigError::InvalidCurve(_) | SigError::InvalidConfig(_) => Failure::Input(e.to_string()),
            e => Failure::Math(e),
        }
    }
}

fn input_err(context: impl Display, e: impl Display) -> Failure {
    Failure::Input(format!("{context}: {e}"))
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = load_config(&cli.overrides).and_then(|cfg| run(cli.command, &cfg));
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Math(e)) => {
            eprintln!("{}: {e}", e.name());
            ExitCode::from(3)
        }
    }
}

fn load_config(o: &Overrides) -> Result<Config, Failure> {
    let mut cfg = match &o.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| input_err(path.display(), e))?;
            serde_json::from_str(&text).map_err(|e| input_err(path.display(), e))?
        }
        None => Config::default(),
    };
    macro_rules! set {
        ($($field:ident),*) => { $(if let Some(v) = o.$field { cfg.$field = v; })* };
    }
    set!(seed, integrator_steps, resample_nodes, differentiation_tol, quadrature_tol, comparison_tol, vertex_tol, injectivity_tol);
    if let Some(e) = o.affine_exponent {
        cfg.affine_exponent = match e {
            Exponent::Half => AffineExponent::Half,
            Exponent::Third => AffineExponent::Third,
        };
    }
    if let Some(f) = o.output_format {
        cfg.output_format = match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        };
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(command: Command, cfg: &Config) -> Outcome {
    match command {
        Command::Signature { input, order, kind, out } => cmd_signature(&input, order, kind, out.as_deref(), cfg),
        Command::Reconstruct { input, kind, from, x0, theta0, closed, length, out } => {
            let x0 = parse_point(&x0)?;
            cmd_reconstruct(&input, kind, from, x0, theta0, closed, length, out.as_deref(), cfg)
        }
        Command::Compare { a, b, kind, closed, open, threshold } => cmd_compare(&a, &b, kind, closed, open, threshold, cfg),
        Command::Experiment { input, sweep, trials, allow_vertices, out } => {
            cmd_experiment(&input, &sweep, trials, allow_vertices, out.as_deref(), cfg)
        }
        Command::Bound { input, delta, out } => cmd_bound(&input, delta, out.as_deref(), cfg),
    }
}

fn parse_point(text: &str) -> Result<Vec2, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [x, y] => {
            let x: f64 = x.parse().map_err(|e| input_err("--x0", e))?;
            let y: f64 = y.parse().map_err(|e| input_err("--x0", e))?;
            Ok(Vec2::new(x, y))
        }
        _ => Err(Failure::Input(format!("--x0 expects x,y, got {text:?}"))),
    }
}

fn read_curve(path: &Path) -> Result<PlanarCurve, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| input_err(path.display(), e))?;
    parse_curve(&text).map_err(|e| input_err(path.display(), e))
}

fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    path.with_extension(suffix)
}

/// Writes `text` to `path`, or to stdout when no path is given.
fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| input_err(p.display(), e)),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| input_err("stdout", e)),
    }
}

fn pretty(value: &impl serde::Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}

fn table(header: &[String], rows: impl Iterator<Item = Vec<String>>) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| input_err("csv", e))?;
    for r in rows {
        w.write_record(&r).map_err(|e| input_err("csv", e))?;
    }
    let bytes = w.into_inner().map_err(|e| input_err("csv", e))?;
    Ok(String::from_utf8(bytes).expect("utf8 csv"))
}

fn cmd_signature(input: &Path, order: usize, kind: Kind, out: Option<&Path>, cfg: &Config) -> Outcome {
    let curve = read_curve(input)?;
    let arc = resample_by_arclength(&curve, cfg.resample_nodes)?;
    let sig = match kind {
        Kind::Euclid => euclidean_signature(&arc, order)?,
        Kind::Affine => {
            let full = affine_signature(&arc, cfg)?;
            if order > full.order() {
                return Err(Failure::Input(format!("affine signatures have order <= {}", full.order())));
            }
            full.with_order(order)?
        }
    };
    let meta = json!({
        "kind": sig.kind().as_str(),
        "order": sig.order(),
        "closed": sig.closed(),
        "L": sig.length(),
    });
    let mut header = vec!["s".to_string()];
    header.extend((0..=sig.order()).map(|j| format!("k{j}")));
    match cfg.output_format {
        OutputFormat::Csv => {
            let rows = sig.s().iter().zip(sig.rows()).map(|(s, r)| {
                std::iter::once(s).chain(r).map(|v| v.to_string()).collect()
            });
            emit(out, &table(&header, rows)?)?;
            if let Some(p) = out {
                emit(Some(&sidecar(p, "meta.json")), &pretty(&meta))?;
            }
        }
        OutputFormat::Json => {
            let doc = json!({"meta": meta, "columns": header, "s": sig.s(), "rows": sig.rows()});
            emit(out, &pretty(&doc))?;
        }
    }
    Ok(0)
}

/// Columns of a `s,k0[,k1,...]` CSV.
fn read_columns(path: &Path) -> Result<(Vec<f64>, Vec<Vec<f64>>), Failure> {
    let mut r = csv::Reader::from_path(path).map_err(|e| input_err(path.display(), e))?;
    let header = r.headers().map_err(|e| input_err(path.display(), e))?.clone();
    let width = header.len();
    let expected: Vec<String> = std::iter::once("s".to_string()).chain((0..width.saturating_sub(1)).map(|j| format!("k{j}"))).collect();
    if width < 2 || header.iter().zip(&expected).any(|(h, e)| h.trim() != e) {
        return Err(Failure::Input(format!("{}: header must be s,k0[,k1,...]", path.display())));
    }
    let mut s = Vec::new();
    let mut cols = vec![Vec::new(); width - 1];
    for rec in r.records() {
        let rec = rec.map_err(|e| input_err(path.display(), e))?;
        for (j, field) in rec.iter().enumerate() {
            let v: f64 = field.trim().parse().map_err(|e| input_err(path.display(), e))?;
            if j == 0 {
                s.push(v);
            } else {
                cols[j - 1].push(v);
            }
        }
    }
    Ok((s, cols))
}

#[allow(clippy::too_many_arguments)]
fn cmd_reconstruct(
    input: &Path,
    kind: Kind,
    from: Source,
    x0: Vec2,
    theta0: f64,
    closed_flag: bool,
    length: Option<f64>,
    out: Option<&Path>,
    cfg: &Config,
) -> Outcome {
    let (mut s, mut cols) = read_columns(input)?;
    let meta: Option<Value> = std::fs::read_to_string(sidecar(input, "meta.json"))
        .ok()
        .and_then(|t| serde_json::from_str(&t).ok());
    let closed = closed_flag || meta.as_ref().and_then(|m| m["closed"].as_bool()).unwrap_or(false);
    let last = *s.last().ok_or_else(|| Failure::Input(format!("{}: no rows", input.display())))?;
    let length = length.or_else(|| meta.as_ref().and_then(|m| m["L"].as_f64())).unwrap_or(last);
    if closed && (last - length).abs() <= 1e-12 * length.abs().max(1.0) {
        // The periodic copy of the first row is implied.
        s.pop();
        for c in &mut cols {
            c.pop();
        }
    }
    let rotation = Mat2::new(theta0.cos(), -theta0.sin(), theta0.sin(), theta0.cos());
    let curve = match from {
        Source::Curvature => {
            let profile = CurvatureProfile::new(s, cols, length, closed)?;
            match kind {
                Kind::Euclid => curve_from_curvature(&profile, x0, theta0, cfg)?.to_planar(),
                Kind::Affine => affine_curve_from_mu(&profile, &rotation, x0, cfg.integrator_steps)?,
            }
        }
        Source::Signature => {
            let sig_kind = match kind {
                Kind::Euclid => SignatureKind::Euclidean,
                Kind::Affine => SignatureKind::Affine,
            };
            let rows = (0..s.len()).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
            let sig = PhasePortrait::new(sig_kind, s, rows, length, closed)?;
            let partition = if sig.order() >= 2 { find_partition(&sig, cfg).ok() } else { None };
            let g = match kind {
                Kind::Euclid => GroupElement::rotation(theta0, x0),
                Kind::Affine => GroupElement::affine(rotation, x0)?,
            };
            reconstruct_from_signature(&sig, &g, partition.as_ref(), cfg)?
        }
    };
    emit(out, &format!("{}\n", curve_to_json(&curve)))?;
    if let Some(p) = out {
        let mut meta = json!({
            "kind": match kind { Kind::Euclid => "euclidean", Kind::Affine => "affine" },
            "from": match from { Source::Curvature => "curvature", Source::Signature => "signature" },
            "x0": [x0.x, x0.y],
            "theta0": theta0,
            "closed": curve.closed(),
            "integrator_steps": cfg.integrator_steps,
            "round_trip": "the curvature of this curve, as a function of arc length, reproduces the input up to a shift of the start point and the integration error",
        });
        if kind == Kind::Euclid {
            if let Ok(arc) = resample_by_arclength(&curve, cfg.resample_nodes) {
                meta["length"] = json!(arc.length());
            }
        }
        emit(Some(&sidecar(p, "meta.json")), &pretty(&meta))?;
    }
    Ok(0)
}

fn cmd_compare(a: &Path, b: &Path, kind: Kind, closed: bool, open: bool, threshold: Option<f64>, cfg: &Config) -> Outcome {
    let (ca, cb) = (read_curve(a)?, read_curve(b)?);
    let group = match kind {
        Kind::Euclid => GroupKind::SE2,
        Kind::Affine => GroupKind::Affine,
    };
    let use_closed = closed || (!open && ca.closed() && cb.closed() && kind == Kind::Euclid);
    if use_closed && kind == Kind::Affine {
        return Err(Failure::Input("the closed-curve test is Euclidean only".into()));
    }
    let verdict = if use_closed {
        congruence_closed(&ca, &cb, threshold, cfg)?
    } else {
        congruence_open(&ca, &cb, group, threshold, cfg)?
    };
    emit(None, &pretty(&verdict.to_json()))?;
    Ok(match verdict.decision {
        Decision::Congruent => 0,
        Decision::NotCongruent => 1,
        Decision::Undecidable => 4,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

fn cmd_experiment(input: &Path, sweep: &[f64], trials: usize, allow_vertices: bool, out: Option<&Path>, cfg: &Config) -> Outcome {
    let curve = read_curve(input)?;
    if sweep.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
        return Err(Failure::Input("sweep amplitudes must be positive".into()));
    }
    let mut rows: Vec<ExperimentRow> = Vec::new();
    let mut bounds = Vec::new();
    for (j, &amp) in sweep.iter().enumerate() {
        let offset = j * trials;
        let batch = perturbation_experiment(&curve, amp, trials, cfg.seed.wrapping_add(offset as u64), allow_vertices, cfg)?;
        rows.extend(batch.into_iter().map(|r| ExperimentRow { trial: r.trial + offset, ..r }));
        let open = PlanarCurve::new(curve.samples().to_vec(), false)?;
        let kappa = euclidean_curvature(&resample_by_arclength(&open, cfg.resample_nodes)?, 1)?.interpolant()?;
        bounds.push(match explicit_bound(&kappa, amp) {
            Ok(report) => serde_json::to_value(report).expect("serializable"),
            Err(e) => json!({"delta": amp, "error": e.name(), "L": kappa.length()}),
        });
    }
    let header: Vec<String> = ["trial", "delta_measured", "d_curves", "eps_bound", "in_hypothesis", "pass"]
        .iter()
        .map(|h| h.to_string())
        .collect();
    let text = table(
        &header,
        rows.iter().map(|r| {
            vec![
                r.trial.to_string(),
                r.delta_measured.to_string(),
                r.d_curves.to_string(),
                opt(r.eps_bound),
                r.in_hypothesis.to_string(),
                r.pass.to_string(),
            ]
        }),
    )?;
    emit(out, &text)?;
    if let Some(p) = out {
        emit(Some(&sidecar(p, "bounds.json")), &pretty(&bounds))?;
    }
    let passed = rows.iter().filter(|r| r.pass).count();
    eprintln!("{passed}/{} trials within bound", rows.len());
    Ok(0)
}

fn cmd_bound(input: &Path, delta: f64, out: Option<&Path>, cfg: &Config) -> Outcome {
    let curve = read_curve(input)?;
    let open = PlanarCurve::new(curve.samples().to_vec(), false)?;
    let kappa = euclidean_curvature(&resample_by_arclength(&open, cfg.resample_nodes)?, 1)?.interpolant()?;
    let report = explicit_bound(&kappa, delta)?;
    debug_assert!(report.length == kappa.length());
    emit(out, &pretty(&report))?;
    Ok(0)
}
