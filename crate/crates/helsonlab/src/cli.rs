//! Batch front-end: bound tabulations, blow-up experiments, projection
//! application, and the self-check suite, with CSV/JSON reports.
//!
//! Configuration comes from an optional TOML file plus flags; flags win.
//! Reports are built in memory and emitted in one ordered write, so a
//! given configuration always produces byte-identical output.  Every
//! number is printed with 12 significant digits, locale-independent.
//!
//! Exit codes: 0 = success, 2 = partial (some rows skipped or marked as
//! errors), 1 = failure.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::bounds::{blowup_experiment, solve_uniform_bound, BlowupMode};
use crate::io::{read_matrix_file, write_matrix_file, write_symbol_file};
use crate::projections::{
    hankel_weighted_average, helson_weighted_average, projection_output_matrix, WeightFunction,
};
use crate::schatten::{schatten_norm, IndexOrigin, SymbolKind};
use crate::verify::run_all;
use crate::{Error, Result};

/// Numerical laboratory for Hankel and Helson matrices: Schatten norms,
/// averaging projections, and certified lower bounds.
#[derive(Debug, Parser)]
#[command(name = "helsonlab", version, max_term_width = 100)]
pub struct Cli {
    /// TOML file with default values for the flags (flags win).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the weight-independent projection lower bound 1+delta_q.
    Bounds {
        /// Comma-separated Schatten exponents, each >= 1 (q = 2 yields an
        /// error row: the bound degenerates there).
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        q: Vec<f64>,
        /// Residual tolerance for the branch-equation solver.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Run the tensor blow-up experiment over the first n primes.
    Blowup {
        /// Comma-separated Schatten exponents, each >= 1 and != 2.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        q: Vec<f64>,
        /// First parameter of the weight family.
        #[arg(long)]
        alpha: Option<f64>,
        /// Second parameter of the weight family.
        #[arg(long)]
        beta: Option<f64>,
        /// Number of primes to absorb.
        #[arg(long)]
        n_max: Option<usize>,
        /// How to accumulate the total ratio.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Apply a weighted averaging projection to a matrix file.
    Project {
        /// Matrix file to project (its index origin selects the
        /// anti-diagonal or the divisor-fiber projection).
        #[arg(long, value_name = "PATH")]
        input: Option<PathBuf>,
        /// Weight: `uniform`, `alpha_beta:A,B`, or `table:PATH`.
        #[arg(long, value_name = "SPEC")]
        weight: Option<String>,
        /// Comma-separated Schatten exponents for the norm report
        /// (q = 2 and `inf` are allowed here).
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        q: Vec<f64>,
        /// Where to write the projected symbol (default: INPUT.symbol).
        #[arg(long, value_name = "PATH")]
        output_symbol: Option<PathBuf>,
        /// Where to write the realized projected matrix
        /// (default: INPUT.projected).
        #[arg(long, value_name = "PATH")]
        output_matrix: Option<PathBuf>,
    },
    /// Run the full invariant suite and emit a JSON report.
    Verify {
        /// Seed for the reproducible random cases.
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Product,
    Direct,
}

/// Defaults read from `--config`; every key mirrors a flag.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    q: Option<Vec<f64>>,
    tol: Option<f64>,
    alpha: Option<f64>,
    beta: Option<f64>,
    n_max: Option<usize>,
    mode: Option<String>,
    input: Option<PathBuf>,
    output: Option<PathBuf>,
    output_symbol: Option<PathBuf>,
    output_matrix: Option<PathBuf>,
    weight: Option<String>,
    seed: Option<u64>,
}

fn load_config(path: Option<&Path>) -> Result<FileConfig> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", p.display())))
        }
    }
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::Config(format!("missing `--{flag}` (flag or config key)")))
}

fn merged_q(flag: Vec<f64>, file: Option<Vec<f64>>) -> Result<Vec<f64>> {
    let list = if flag.is_empty() { file.unwrap_or_default() } else { flag };
    if list.is_empty() {
        return Err(Error::Config("missing `--q` (flag or config key)".into()));
    }
    for &q in &list {
        if q.is_nan() || q < 1.0 {
            return Err(Error::Config(format!("q values must be >= 1, got {q}")));
        }
    }
    Ok(list)
}

/// Formats with 12 significant digits, locale-independent.
fn sig(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.11e}")
    }
}

const EXIT_OK: i32 = 0;
const EXIT_FAILURE: i32 = 1;
const EXIT_PARTIAL: i32 = 2;

/// Runs a parsed command line: builds the report, writes it to the
/// `--output` path or stdout, and returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    let config = load_config(cli.config.as_deref())?;
    let (report, code) = dispatch(cli.command, &config)?;
    match cli.output.or(config.output) {
        Some(path) => std::fs::write(path, report)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(report.as_bytes())?;
        }
    }
    Ok(code)
}

fn dispatch(command: Command, config: &FileConfig) -> Result<(String, i32)> {
    match command {
        Command::Bounds { q, tol } => {
            let q_list = merged_q(q, config.q.clone())?;
            let tol = tol.or(config.tol).unwrap_or(1e-12);
            Ok(cmd_bounds(&q_list, tol))
        }
        Command::Blowup { q, alpha, beta, n_max, mode } => {
            let q_list = merged_q(q, config.q.clone())?;
            let alpha = require(alpha.or(config.alpha), "alpha")?;
            let beta = require(beta.or(config.beta), "beta")?;
            let n_max = require(n_max.or(config.n_max), "n-max")?;
            let mode = match mode {
                Some(ModeArg::Product) => BlowupMode::Product,
                Some(ModeArg::Direct) => BlowupMode::Direct,
                None => match config.mode.as_deref() {
                    Some("product") => BlowupMode::Product,
                    Some("direct") => BlowupMode::Direct,
                    Some(other) => {
                        return Err(Error::Config(format!(
                            "mode must be `product` or `direct`, got `{other}`"
                        )))
                    }
                    None => return Err(Error::Config("missing `--mode` (flag or config key)".into())),
                },
            };
            cmd_blowup(&q_list, alpha, beta, n_max, mode)
        }
        Command::Project { input, weight, q, output_symbol, output_matrix } => {
            let q_list = merged_q(q, config.q.clone())?;
            let input = require(input.or(config.input.clone()), "input")?;
            let weight = require(weight.or(config.weight.clone()), "weight")?;
            let output_symbol = output_symbol
                .or(config.output_symbol.clone())
                .unwrap_or_else(|| with_suffix(&input, "symbol"));
            let output_matrix = output_matrix
                .or(config.output_matrix.clone())
                .unwrap_or_else(|| with_suffix(&input, "projected"));
            cmd_project(&input, &weight, &q_list, &output_symbol, &output_matrix)
        }
        Command::Verify { seed } => Ok(cmd_verify(seed.or(config.seed).unwrap_or(0))),
    }
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_os_string();
    name.push(".");
    name.push(suffix);
    PathBuf::from(name)
}

/// One row per requested exponent; unsolvable exponents (q = 2, infinite
/// q) become `error` rows and turn the exit code partial.
fn cmd_bounds(q_list: &[f64], tol: f64) -> (String, i32) {
    let mut out = String::from("q,branch,x_q,bound\n");
    let mut solved = 0usize;
    for &q in q_list {
        match solve_uniform_bound(q, tol) {
            Ok(r) => {
                let _ = writeln!(out, "{},{},{},{}", sig(q), r.branch, sig(r.x_q), sig(r.uniform_bound));
                solved += 1;
            }
            Err(e) => {
                eprintln!("bounds: q = {q}: {e}");
                let _ = writeln!(out, "{},error,,", sig(q));
            }
        }
    }
    let code = if solved == q_list.len() {
        EXIT_OK
    } else if solved > 0 {
        EXIT_PARTIAL
    } else {
        EXIT_FAILURE
    };
    (out, code)
}

fn cmd_blowup(
    q_list: &[f64],
    alpha: f64,
    beta: f64,
    n_max: usize,
    mode: BlowupMode,
) -> Result<(String, i32)> {
    let weight = crate::projections::multiplicative_weight_family(alpha, beta)?;
    let mut out = String::from("q,alpha,beta,N,prime,tag,t,ratio_p,total_ratio,floor\n");
    let mut solved = 0usize;
    let mut skipped_rows = false;
    for &q in q_list {
        match blowup_experiment(q, &weight, n_max, mode) {
            Ok(outcome) => {
                solved += 1;
                skipped_rows |= outcome.has_skips();
                for (i, step) in outcome.steps.iter().enumerate() {
                    let total = step
                        .total_ratio
                        .map(sig)
                        .unwrap_or_else(|| "skipped".into());
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{},{},{},{}",
                        sig(q),
                        sig(alpha),
                        sig(beta),
                        i + 1,
                        step.prime,
                        step.tag,
                        sig(step.t),
                        sig(step.ratio),
                        total,
                        sig(step.floor),
                    );
                }
            }
            Err(e) => eprintln!("blowup: q = {q}: {e}"),
        }
    }
    let code = if solved == 0 {
        EXIT_FAILURE
    } else if solved < q_list.len() || skipped_rows {
        EXIT_PARTIAL
    } else {
        EXIT_OK
    };
    Ok((out, code))
}

/// `uniform`, `alpha_beta:A,B`, or `table:PATH`.
fn build_weight(spec: &str, kind: SymbolKind) -> Result<WeightFunction> {
    if spec == "uniform" {
        return Ok(WeightFunction::uniform(kind));
    }
    if let Some(params) = spec.strip_prefix("alpha_beta:") {
        let parts: Vec<&str> = params.split(',').collect();
        if parts.len() != 2 {
            return Err(Error::Config(format!(
                "expected `alpha_beta:A,B`, got `{spec}`"
            )));
        }
        let alpha: f64 = parts[0]
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("cannot parse alpha from `{}`", parts[0])))?;
        let beta: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("cannot parse beta from `{}`", parts[1])))?;
        return WeightFunction::alpha_beta(kind, alpha, beta);
    }
    if let Some(path) = spec.strip_prefix("table:") {
        return read_weight_table(Path::new(path), kind);
    }
    Err(Error::Config(format!(
        "weight must be `uniform`, `alpha_beta:A,B`, or `table:PATH`, got `{spec}`"
    )))
}

/// Weight table file: header `weights <kind> <bound>`, then `a b w` lines.
/// The declared bound states how far the table covers; pairs beyond it
/// (or missing) evaluate to 0 and fail unit-sum validation downstream.
fn read_weight_table(path: &Path, kind: SymbolKind) -> Result<WeightFunction> {
    let text = std::fs::read_to_string(path)?;
    let mut table: BTreeMap<(u64, u64), f64> = BTreeMap::new();
    let mut declared: Option<SymbolKind> = None;
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if declared.is_none() {
            if tokens.len() != 3 || tokens[0] != "weights" {
                return Err(Error::Parse {
                    line: no + 1,
                    msg: "expected header `weights <additive|multiplicative> <bound>`".into(),
                });
            }
            declared = Some(match tokens[1] {
                "additive" => SymbolKind::Additive,
                "multiplicative" => SymbolKind::Multiplicative,
                other => {
                    return Err(Error::Parse {
                        line: no + 1,
                        msg: format!("unknown weight kind `{other}`"),
                    })
                }
            });
            tokens[2].parse::<u64>().map_err(|_| Error::Parse {
                line: no + 1,
                msg: format!("cannot parse declared bound from `{}`", tokens[2]),
            })?;
            continue;
        }
        if tokens.len() != 3 {
            return Err(Error::Parse { line: no + 1, msg: "expected entry line `a b w`".into() });
        }
        let a: u64 = tokens[0].parse().map_err(|_| Error::Parse {
            line: no + 1,
            msg: format!("cannot parse index from `{}`", tokens[0]),
        })?;
        let b: u64 = tokens[1].parse().map_err(|_| Error::Parse {
            line: no + 1,
            msg: format!("cannot parse index from `{}`", tokens[1]),
        })?;
        let w: f64 = tokens[2].parse().map_err(|_| Error::Parse {
            line: no + 1,
            msg: format!("cannot parse weight from `{}`", tokens[2]),
        })?;
        if table.insert((a, b), w).is_some() {
            return Err(Error::DuplicateEntry { m: a, n: b });
        }
    }
    match declared {
        None => Err(Error::Parse { line: 0, msg: "empty weight table".into() }),
        Some(k) if k != kind => Err(Error::SymbolKindMismatch { expected: kind, found: k }),
        Some(_) => Ok(WeightFunction::from_table(kind, table)),
    }
}

/// Projects the input matrix with the weighted average matching its index
/// origin, writes the symbol and its realization, and reports norms.
fn cmd_project(
    input: &Path,
    weight_spec: &str,
    q_list: &[f64],
    output_symbol: &Path,
    output_matrix: &Path,
) -> Result<(String, i32)> {
    let matrix = read_matrix_file(input)?;
    let kind = match matrix.origin() {
        IndexOrigin::Zero => SymbolKind::Additive,
        IndexOrigin::One => SymbolKind::Multiplicative,
    };
    let weight = build_weight(weight_spec, kind)?;
    let symbol = match kind {
        SymbolKind::Additive => hankel_weighted_average(&matrix, &weight)?,
        SymbolKind::Multiplicative => helson_weighted_average(&matrix, &weight)?,
    };
    let realized = projection_output_matrix(&symbol)?;
    write_symbol_file(output_symbol, &symbol)?;
    write_matrix_file(output_matrix, &realized)?;

    let mut out = String::from("q,input_norm,projected_norm\n");
    for &q in q_list {
        let input_norm = schatten_norm(&matrix, q)?;
        let projected_norm = schatten_norm(&realized, q)?;
        let _ = writeln!(out, "{},{},{}", sig(q), sig(input_norm), sig(projected_norm));
    }
    Ok((out, EXIT_OK))
}

fn json_escape(s: &str) -> String {
    let mut escaped = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => escaped.push_str("\\\""),
            '\\' => escaped.push_str("\\\\"),
            c if (c as u32) < 0x20 => {
                let _ = write!(escaped, "\\u{:04x}", c as u32);
            }
            c => escaped.push(c),
        }
    }
    escaped
}

/// JSON float: 12 significant digits; non-finite values become null
/// (`passed` carries the verdict).
fn json_number(x: f64) -> String {
    if x.is_finite() { sig(x) } else { "null".into() }
}

fn cmd_verify(seed: u64) -> (String, i32) {
    let checks = run_all(seed);
    let failed = checks.iter().filter(|c| !c.passed).count();
    let mut out = String::new();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"seed\": {seed},");
    let _ = writeln!(out, "  \"passed\": {},", checks.len() - failed);
    let _ = writeln!(out, "  \"failed\": {failed},");
    let _ = writeln!(out, "  \"checks\": [");
    for (i, check) in checks.iter().enumerate() {
        let comma = if i + 1 < checks.len() { "," } else { "" };
        let _ = writeln!(
            out,
            "    {{\"name\": \"{}\", \"passed\": {}, \"deviation\": {}, \"tolerance\": {}, \"cases\": {}, \"detail\": \"{}\"}}{comma}",
            json_escape(check.name),
            check.passed,
            json_number(check.deviation),
            json_number(check.tolerance),
            check.cases,
            json_escape(&check.detail),
        );
    }
    let _ = writeln!(out, "  ]");
    let _ = writeln!(out, "}}");
    (out, if failed == 0 { EXIT_OK } else { EXIT_FAILURE })
}
