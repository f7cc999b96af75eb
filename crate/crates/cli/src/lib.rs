//! Command-line front end: argument parsing, dispatch and rendering.
//!
//! Every command reads a vector list from `--input` (JSON of the form
//! `{"dim": s, "vectors": [[..], ..]}`) and prints either readable text or a
//! single JSON document (`--format structured`).

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num::{BigInt, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use vpart::chambers::{pave_box, Arrangement};
use vpart::exactcore::{format_rational, parse_rational};
use vpart::matroid::{d, delta, hilbert_series, nbc_bases};
use vpart::partition::{torus_points, PartitionFunction};
use vpart::spline::Spline;
use vpart::{Rational, VectorList};

mod verify;

pub use verify::{verify, Check};

#[derive(Debug, Parser)]
#[command(name = "vpart", version, about = "Exact splines and vector partition functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON file holding the vector list.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Point as comma-separated exact rationals, e.g. "1/2,3".
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub point: Option<String>,
    /// Override the series truncation order used by residues.
    #[arg(long, global = true)]
    pub truncation: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Residue classes to expand, separated by ';' ("0;1", "0,0;1,0"), or "all".
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub modulus_cosets: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Bases, NBC bases, Hilbert series, δ(X) and torus points.
    Analyze,
    /// The multivariate spline T_X at a point.
    SplineEval,
    /// The box spline B_X at a point.
    BoxEval,
    /// Paving of the zonotope by parallelepipeds.
    Pave,
    /// The partition function at a lattice point.
    PartitionEval,
    /// The quasi-polynomial of the cell containing a point.
    Quasipoly,
    /// Run every oracle and invariant check on the list.
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] vpart::Error),
    #[error("{0} verification check(s) failed")]
    Verification(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Core(vpart::Error::Internal(_)) => 2,
            CliError::Core(_) => 1,
            CliError::Verification(_) => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Reads and validates a vector list.
pub fn parse_input(path: &Path) -> CliResult<VectorList> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(VectorList::from_json(&text)?)
}

pub fn parse_point(text: &str, dim: usize) -> CliResult<Vec<Rational>> {
    let p: Vec<Rational> = text.split(',').map(|t| parse_rational(t.trim())).collect::<vpart::Result<_>>()?;
    if p.len() != dim {
        return Err(CliError::Input(format!("point has {} coordinates, expected {dim}", p.len())));
    }
    Ok(p)
}

fn lattice_point(p: &[Rational]) -> CliResult<Vec<i64>> {
    p.iter()
        .map(|q| {
            if !q.is_integer() {
                return Err(CliError::Input(format!("{} is not an integer", format_rational(q))));
            }
            i64::try_from(q.to_integer()).map_err(|_| CliError::Input("coordinate out of range".into()))
        })
        .collect()
}

fn parse_cosets(text: &str, dim: usize, modulus: u32) -> CliResult<Vec<Vec<i64>>> {
    if text.trim() == "all" {
        return Ok(all_classes(dim, modulus));
    }
    text.split(';')
        .map(|class| {
            let r: Vec<i64> = class
                .split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|_| CliError::Input(format!("bad residue class {class:?}"))))
                .collect::<CliResult<_>>()?;
            if r.len() != dim {
                return Err(CliError::Input(format!("residue class {class:?} needs {dim} entries")));
            }
            Ok(r.into_iter().map(|k| k.rem_euclid(modulus as i64)).collect())
        })
        .collect()
}

fn all_classes(dim: usize, modulus: u32) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|r: Vec<i64>| (0..modulus as i64).map(move |k| [r.clone(), vec![k]].concat()))
            .collect();
    }
    out
}

/// Exact decimal expansion truncated to `digits` places, for display only.
pub fn decimal(q: &Rational, digits: usize) -> String {
    let neg = q.is_negative();
    let q = q.abs();
    let int = q.numer() / q.denom();
    let mut rem = q.numer() % q.denom();
    let mut out = format!("{}{int}", if neg { "-" } else { "" });
    if !rem.is_zero() {
        out.push('.');
        for _ in 0..digits {
            rem *= 10;
            out.push_str(&(&rem / q.denom()).to_string());
            rem %= q.denom();
            if rem.is_zero() {
                break;
            }
        }
    }
    out
}

/// Output of one command: the text rendering and the structured document.
pub struct Report {
    pub text: String,
    pub value: Value,
    pub failed: usize,
}

impl Report {
    fn ok(text: String, value: Value) -> Self {
        Report { text, value, failed: 0 }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Structured => serde_json::to_string_pretty(&self.value).expect("json") + "\n",
        }
    }
}

pub fn execute(cli: &Cli) -> CliResult<Report> {
    let path = cli.input.as_deref().ok_or_else(|| CliError::Input("--input is required".into()))?;
    let x = parse_input(path)?;
    let point = cli.point.as_deref().map(|p| parse_point(p, x.dim())).transpose()?;
    let need_point = || point.clone().ok_or_else(|| CliError::Input("--point is required for this command".into()));
    match cli.command {
        Command::Analyze => analyze(&x),
        Command::SplineEval => {
            let p = need_point()?;
            let (v, inside) = Spline::new(&x)?.eval_flagged(&p)?;
            Ok(value_report("T_X", &p, &v, inside))
        }
        Command::BoxEval => {
            let p = need_point()?;
            let v = Spline::new(&x)?.box_eval(&p)?;
            Ok(value_report("B_X", &p, &v, true))
        }
        Command::Pave => pave(&x),
        Command::PartitionEval => {
            let v = lattice_point(&need_point()?)?;
            let n = PartitionFunction::with_truncation(&x, cli.truncation)?.eval(&v)?;
            let text = format!("P_X({}) = {n}\n", join(&v));
            Ok(Report::ok(text, json!({ "point": v, "value": n.to_string() })))
        }
        Command::Quasipoly => quasipoly(&x, point, cli.truncation, cli.modulus_cosets.as_deref()),
        Command::Verify => {
            let checks = verify(&x, cli.truncation);
            let failed = checks.iter().filter(|c| !c.passed).count();
            let text: String = checks.iter().map(|c| format!("{c}\n")).collect();
            let value = json!({
                "passed": failed == 0,
                "checks": checks.iter().map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail })).collect::<Vec<_>>(),
            });
            Ok(Report { text, value, failed })
        }
    }
}

/// Parses `args`, runs the command, writes the rendering to `out` and
/// returns the process exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = write!(if code == 0 { out as &mut dyn Write } else { err as &mut dyn Write }, "{e}");
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let _ = out.write_all(report.render(cli.format).as_bytes());
            if report.failed > 0 {
                let _ = writeln!(err, "error: {}", CliError::Verification(report.failed));
                2
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn rationals(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn value_report(name: &str, p: &[Rational], v: &Rational, inside: bool) -> Report {
    let mut text = format!("{name}({}) = {} ≈ {}\n", rationals(p).join(","), format_rational(v), decimal(v, 12));
    if !inside {
        text.push_str("point lies outside C(X)\n");
    }
    let value = json!({
        "point": rationals(p),
        "value": format_rational(v),
        "decimal": decimal(v, 12),
        "in_cone": inside,
    });
    Report::ok(text, value)
}

fn analyze(x: &VectorList) -> CliResult<Report> {
    let dx = d(x)?;
    let dl = delta(x)?;
    let h = hilbert_series(x)?;
    let nbc = nbc_bases(x)?;
    let points = torus_points(x)?;
    let mut text = format!("list: {x}\nd(X) = {dx}\nδ(X) = {dl}\nH_X(q) = {h}\n");
    text.push_str(&format!(
        "NBC bases ({}): {}\n",
        nbc.len(),
        nbc.iter().map(|b| format!("{}[det {}]", b.label(), b.det)).collect::<Vec<_>>().join(" ")
    ));
    text.push_str(&format!(
        "torus points ({}): {}\n",
        points.len(),
        points.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
    ));
    let value = json!({
        "dim": x.dim(),
        "vectors": x.vectors(),
        "d": dx,
        "delta": dl,
        "hilbert": h.coeffs,
        "nbc_bases": nbc.iter().map(|b| json!({ "indices": b.indices, "det": b.det })).collect::<Vec<_>>(),
        "torus_points": points.iter().map(|p| p.to_strings()).collect::<Vec<_>>(),
    });
    Ok(Report::ok(text, value))
}

fn pave(x: &VectorList) -> CliResult<Report> {
    let paving = pave_box(x)?;
    let mut text = format!("{} pieces, total volume {}\n", paving.pieces.len(), paving.volume());
    for piece in &paving.pieces {
        text.push_str(&format!(
            "λ = ({})  {}  |det| = {}\n",
            join(&piece.lambda),
            piece.basis.label(),
            piece.basis.det.abs()
        ));
    }
    let value = json!({
        "volume": paving.volume(),
        "pieces": paving
            .pieces
            .iter()
            .map(|p| json!({ "lambda": p.lambda, "basis": p.basis.indices, "det": p.basis.det }))
            .collect::<Vec<_>>(),
    });
    Ok(Report::ok(text, value))
}

fn quasipoly(
    x: &VectorList,
    point: Option<Vec<Rational>>,
    truncation: Option<u32>,
    cosets: Option<&str>,
) -> CliResult<Report> {
    let pf = PartitionFunction::with_truncation(x, truncation)?;
    let p = point.unwrap_or_else(|| Arrangement::probe(pf.arrangement()));
    let qp = pf.quasipoly_at(&p)?;
    let classes = cosets.map(|c| parse_cosets(c, x.dim(), qp.modulus)).transpose()?;
    let value = qp.to_json(classes.as_deref())?;
    let mut text = format!("cell witness ({}), modulus {}\n", rationals(&qp.witness).join(","), qp.modulus);
    for (phi, q) in &qp.terms {
        text.push_str(&format!("φ = {phi} (order {}): {q}\n", phi.order()));
    }
    for r in classes.iter().flatten() {
        text.push_str(&format!("coset {} mod {}: {}\n", join(r), qp.modulus, qp.coset_polynomial(r)?));
    }
    Ok(Report::ok(text, value))
}

/// Evaluates a structured quasi-polynomial document at a lattice point.
pub fn eval_quasipoly_json(doc: &Value, v: &[i64]) -> CliResult<BigInt> {
    let qp = vpart::partition::QuasiPolynomial::from_json(doc)?;
    let value = qp.eval(v);
    let q = value.to_rational().ok_or_else(|| CliError::Input(format!("value {value} is not rational")))?;
    if !q.is_integer() {
        return Err(CliError::Input(format!("value {} is not an integer", format_rational(&q))));
    }
    Ok(q.to_integer())
}
