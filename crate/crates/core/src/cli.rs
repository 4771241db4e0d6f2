//! Command-line front end.

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::diff::directional_derivative_lipschitz;
use crate::distribution::{empirical_cdf, DistributionSpec};
use crate::envelopes::{pasch_hausdorff, ubhaya_envelopes};
use crate::error::{Result, TrimError};
use crate::gaussian::gaussian_trimmed_distance;
use crate::grid::{union_nodes, GridFunction};
use crate::trimming::{min_contamination_level, mixture_cdf, oracle_distance, trimmed_distance, TrimParams};

#[derive(Parser, Debug)]
#[command(name = "trimdist", version, about = "Trimmed Kolmogorov distances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Distance from F0 to the alpha-trimmings of F.
    Distance {
        #[arg(long)]
        f0: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        alpha: f64,
        #[arg(long, env = "TRIMDIST_GRID", default_value_t = 100_000)]
        grid: usize,
        /// Write h_alpha to this CSV, and the shifted h~_alpha next to it
        /// with a `_tilde` suffix.
        #[arg(long)]
        emit_h: Option<PathBuf>,
    },
    /// Smallest alpha whose distance is at most the threshold.
    AlphaMin {
        #[arg(long)]
        f0: String,
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 0.0)]
        threshold: f64,
        #[arg(long, env = "TRIMDIST_GRID", default_value_t = 100_000)]
        grid: usize,
    },
    /// Envelopes of a curve given as `t,value` rows.
    Envelope {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        lip: Option<f64>,
        #[arg(long, value_enum, default_value_t = Mode::Ph)]
        mode: Mode,
    },
    /// Closed-form distance from N(mu, sigma^2) to N(0, 1).
    Gaussian {
        #[arg(long, allow_hyphen_values = true)]
        mu: f64,
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        alpha: f64,
    },
    /// Directional derivative of the Lipschitz-box distance.
    Deriv {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        perturb: PathBuf,
        #[arg(long)]
        lip: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Bisection oracle on the step heights F0(x_(1)), ..., F0(x_(n)).
    Oracle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        alpha: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Ph,
    Ubhaya,
}

#[derive(Serialize)]
struct DistanceOut {
    distance: f64,
    alpha: f64,
    grid: Option<usize>,
    n: Option<usize>,
}

#[derive(Serialize)]
struct AlphaMinOut {
    alpha_hat: f64,
    iterations: usize,
    distance: f64,
}

#[derive(Serialize)]
struct GaussianOut {
    distance: f64,
    regime: &'static str,
    t_a: Option<f64>,
    t_b: Option<f64>,
    delta: Option<f64>,
}

#[derive(Serialize)]
struct DerivOut {
    derivative: f64,
    t1: Vec<f64>,
    t2: Vec<f64>,
    t3: Vec<(f64, f64)>,
}

#[derive(Serialize)]
struct OracleOut {
    distance: f64,
}

#[derive(Serialize)]
struct ErrorOut<'a> {
    error: &'a str,
    detail: String,
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> TrimError {
    TrimError::InvalidInput(format!("{}: {e}", path.display()))
}

fn parse_number(s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| TrimError::InvalidInput(format!("'{s}' is not a number")))
}

/// Reads one number per line, with an optional `value` header.
pub fn read_values(path: &Path) -> Result<Vec<f64>> {
    let mut reader =
        csv::ReaderBuilder::new().has_headers(false).flexible(true).from_path(path).map_err(|e| io_error(path, e))?;
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| io_error(path, e))?;
        if record.len() != 1 {
            return Err(io_error(path, format!("line {}: expected one value per line", i + 1)));
        }
        let field = record[0].trim();
        if i == 0 && field == "value" {
            continue;
        }
        out.push(parse_number(field)?);
    }
    Ok(out)
}

/// Reads `t,value` rows (optional header). A repeated `t` gives the left
/// limit first and the right limit second.
pub fn read_curve(path: &Path) -> Result<GridFunction> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).from_path(path).map_err(|e| io_error(path, e))?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| io_error(path, e))?;
        if record.len() != 2 {
            return Err(io_error(path, format!("line {}: expected t,value", i + 1)));
        }
        if i == 0 && record[0].trim() == "t" {
            continue;
        }
        rows.push((parse_number(&record[0])?, parse_number(&record[1])?));
    }
    GridFunction::from_rows(&rows)
}

/// Writes `t,value` rows with both one-sided values at jumps.
pub fn write_curve(path: &Path, f: &GridFunction) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_error(path, e))?;
    w.write_record(["t", "value"]).map_err(|e| io_error(path, e))?;
    for (t, v) in f.samples() {
        w.write_record([t.to_string(), v.to_string()]).map_err(|e| io_error(path, e))?;
    }
    w.flush().map_err(|e| io_error(path, e))
}

/// Parses `normal:<mu>,<sigma>`, `uniform:<a>,<b>`, `csv:<path>` or
/// `mixture:<spec>,<spec>,<alpha>` (nesting allowed).
pub fn parse_spec(text: &str) -> Result<DistributionSpec> {
    let mut tokens: Vec<String> = text.split(',').map(|s| s.trim().to_string()).collect();
    tokens.reverse();
    let spec = parse_tokens(&mut tokens)?;
    if !tokens.is_empty() {
        return Err(TrimError::InvalidInput(format!("trailing input in '{text}'")));
    }
    Ok(spec)
}

// `tokens` is a stack: the next token is at the end.
fn parse_tokens(tokens: &mut Vec<String>) -> Result<DistributionSpec> {
    let bad = |m: String| TrimError::InvalidInput(m);
    let head = tokens.pop().ok_or_else(|| bad("unexpected end of distribution spec".into()))?;
    let (kind, rest) = head.split_once(':').ok_or_else(|| bad(format!("'{head}' should look like kind:arguments")))?;
    let mut next_number = |first: Option<&str>| -> Result<f64> {
        match first {
            Some(s) => parse_number(s),
            None => parse_number(&tokens.pop().ok_or_else(|| bad(format!("{kind} needs more arguments")))?),
        }
    };
    match kind {
        "normal" => {
            let mu = next_number(Some(rest))?;
            let sigma = next_number(None)?;
            DistributionSpec::normal(mu, sigma)
        }
        "uniform" => {
            let a = next_number(Some(rest))?;
            let b = next_number(None)?;
            DistributionSpec::uniform(a, b)
        }
        "csv" => empirical_cdf(&read_values(Path::new(rest))?),
        "mixture" => {
            tokens.push(rest.to_string());
            let base = parse_tokens(tokens)?;
            let other = parse_tokens(tokens)?;
            let alpha = parse_number(&tokens.pop().ok_or_else(|| bad("mixture needs a weight".into()))?)?;
            mixture_cdf(&base, &other, alpha)
        }
        _ => Err(bad(format!("unknown distribution kind '{kind}'"))),
    }
}

fn tilde_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_tilde.{}", ext.to_string_lossy()),
        None => format!("{stem}_tilde"),
    };
    path.with_file_name(name)
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain structs always serialize")
}

/// Envelope curves on a common node set, one row per node plus a second
/// row where any curve jumps.
fn envelope_table(names: [&str; 3], curves: [&GridFunction; 3]) -> Result<String> {
    let mut nodes = curves[0].nodes().to_vec();
    for c in &curves[1..] {
        nodes = union_nodes(&nodes, c.nodes());
    }
    let on: Vec<GridFunction> = curves.iter().map(|c| c.refine(&nodes)).collect::<Result<_>>()?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = ["t", names[0], names[1], names[2]];
    let fail = |e: csv::Error| TrimError::InvalidInput(e.to_string());
    w.write_record(header).map_err(fail)?;
    for (i, t) in nodes.iter().enumerate() {
        let left: Vec<f64> = on.iter().map(|c| c.values()[i]).collect();
        let right: Vec<f64> = on.iter().map(|c| c.right_limits()[i]).collect();
        let row = |v: &[f64]| [t.to_string(), v[0].to_string(), v[1].to_string(), v[2].to_string()];
        w.write_record(row(&left)).map_err(fail)?;
        if left != right {
            w.write_record(row(&right)).map_err(fail)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| TrimError::InvalidInput(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn execute(command: Command) -> Result<String> {
    match command {
        Command::Distance { f0, f, alpha, grid, emit_h } => {
            let params = TrimParams::new(alpha)?;
            let r = trimmed_distance(&parse_spec(&f0)?, &parse_spec(&f)?, params, grid)?;
            if let Some(path) = emit_h {
                write_curve(&path, &r.h_opt)?;
                write_curve(&tilde_path(&path), &r.h_tilde)?;
            }
            Ok(json(&DistanceOut { distance: r.distance, alpha, grid: r.grid_size, n: r.n }))
        }
        Command::AlphaMin { f0, f, threshold, grid } => {
            let r = min_contamination_level(&parse_spec(&f0)?, &parse_spec(&f)?, threshold, grid)?;
            Ok(json(&AlphaMinOut { alpha_hat: r.alpha_hat, iterations: r.iterations, distance: r.distance }))
        }
        Command::Envelope { input, lip, mode } => {
            let f = read_curve(&input)?;
            match mode {
                Mode::Ph => {
                    let lip = lip.ok_or_else(|| TrimError::InvalidInput("--lip is required in ph mode".into()))?;
                    let e = pasch_hausdorff(&f, lip)?;
                    envelope_table(["lower", "upper", "mid"], [&e.lower, &e.upper, &e.mid])
                }
                Mode::Ubhaya => {
                    let e = ubhaya_envelopes(&f);
                    envelope_table(["upper", "lower", "mid"], [&e.upper_env, &e.lower_env, &e.mid])
                }
            }
        }
        Command::Gaussian { mu, sigma, alpha } => {
            let (distance, case) = gaussian_trimmed_distance(mu, sigma, alpha)?;
            Ok(json(&GaussianOut {
                distance,
                regime: case.regime.name(),
                t_a: case.t_a,
                t_b: case.t_b,
                delta: case.delta,
            }))
        }
        Command::Deriv { input, perturb, lip, tol } => {
            let f = read_curve(&input)?;
            let j = read_curve(&perturb)?;
            let d = directional_derivative_lipschitz(&f, &j, lip, tol)?;
            Ok(json(&DerivOut { derivative: d.value, t1: d.sets.t1, t2: d.sets.t2, t3: d.sets.t3 }))
        }
        Command::Oracle { input, alpha } => {
            let heights = read_values(&input)?;
            if heights.is_empty() {
                return Err(TrimError::InvalidInput("no step heights given".into()));
            }
            let mut values = vec![0.0];
            values.extend(heights.iter().copied());
            let gamma = GridFunction::step_left(crate::grid::uniform_nodes(values.len()), values)?;
            let distance = oracle_distance(&gamma, TrimParams::new(alpha)?)?;
            Ok(json(&OracleOut { distance }))
        }
    }
}

/// Exit status for an error kind.
pub fn exit_code(e: &TrimError) -> i32 {
    match e {
        TrimError::InvalidInput(_) | TrimError::UnsupportedDistribution(_) | TrimError::UnsupportedCase(_) => 2,
        TrimError::BoundaryDegenerate(_) | TrimError::DegenerateCase(_) | TrimError::NotAttained { .. } => 3,
    }
}

/// Parses the process arguments, runs the command and returns the exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            let _ = writeln!(stdout, "{}", out.trim_end());
            0
        }
        Err(e) => {
            let detail = match &e {
                TrimError::InvalidInput(m)
                | TrimError::UnsupportedDistribution(m)
                | TrimError::UnsupportedCase(m)
                | TrimError::BoundaryDegenerate(m)
                | TrimError::DegenerateCase(m) => m.clone(),
                other => other.to_string(),
            };
            eprintln!("{}", json(&ErrorOut { error: e.kind(), detail }));
            exit_code(&e)
        }
    }
}
