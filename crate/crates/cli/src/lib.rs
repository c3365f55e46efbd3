//! Command implementations for the `moishezon` binary.
//!
//! Exit codes: 0 all checks pass, 1 verification failure, 2 input error,
//! 3 search exhausted.

pub mod params;
pub mod suite;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use moishezon_core::branch::{find_admissible_g_with, AdmissibleCandidate, SearchOptions};
use moishezon_core::lattice::{build_surface_S, validate_configuration};
use moishezon_core::models::{branch_ideal, fiber_model, minitwistor_ideal, model_X_ideal, Ideal};
use moishezon_core::poly::{fmt_rational, parse_rational};
use moishezon_core::{ModelParams, Rational};
use serde_json::{json, Value};

pub use params::{ParamsError, ParamsFile};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "moishezon",
    version,
    about = "Exact checks for Moishezon twistor spaces on nCP^2"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Minitwistor,
    ModelX,
    Fiber,
    Branch,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the surface S, print its curves, intersection matrix and checks.
    BuildSurface {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Print defining equations in canonical form.
    EmitIdeal {
        #[arg(long)]
        params: PathBuf,
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long)]
        json: bool,
    },
    /// Run every verification suite.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        params: Option<PathBuf>,
        /// Also run the slicing degree oracle (n <= 4 only).
        #[arg(long)]
        deep: bool,
        #[arg(long)]
        json: bool,
    },
    /// Search seeds 0..K for a rational g_hat with a rational branch curve.
    FindAdmissible {
        #[arg(long)]
        n: usize,
        /// λ₃..λ_{n+1} as `p/q`, comma or space separated.
        #[arg(long, num_args = 1.., value_delimiter = ',', allow_negative_numbers = true)]
        lambdas: Vec<String>,
        #[arg(long, default_value_t = 32)]
        seeds: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Write the first candidate as a params file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Do not fall back to split covers.
        #[arg(long)]
        no_split: bool,
        #[arg(long)]
        json: bool,
    },
}

/// Captured result of one command.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn input_error(msg: impl std::fmt::Display) -> Self {
        Outcome {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json") + "\n"
}

fn load_params(path: &Path) -> Result<ModelParams, Outcome> {
    ParamsFile::read(path)
        .and_then(|f| f.to_params())
        .map_err(Outcome::input_error)
}

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::BuildSurface { n, json } => build_surface(n, json),
        Command::EmitIdeal {
            params,
            which,
            json,
        } => emit_ideal(&params, which, json),
        Command::Verify {
            n,
            params,
            deep,
            json,
        } => verify(n, params.as_ref(), deep, json),
        Command::FindAdmissible {
            n,
            lambdas,
            seeds,
            tol,
            out,
            no_split,
            json,
        } => find_admissible(n, &lambdas, seeds, tol, out.as_ref(), !no_split, json),
    }
}

pub fn build_surface(n: usize, json: bool) -> Outcome {
    let s = match build_surface_S(n) {
        Ok(s) => s,
        Err(e) => return Outcome::input_error(e),
    };
    let report = validate_configuration(&s);
    let names = s.named_curves();
    let matrix: Vec<Vec<i64>> = names
        .iter()
        .map(|a| {
            names
                .iter()
                .map(|b| s.dot(s.curve(a).unwrap(), s.curve(b).unwrap()))
                .collect()
        })
        .collect();
    let code = if report.all_pass() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    };
    let stdout = if json {
        let curves: serde_json::Map<String, Value> = names
            .iter()
            .map(|c| (c.clone(), json!(s.curve(c).unwrap().coeffs())))
            .collect();
        pretty(&json!({
            "n": n,
            "rank": s.rank(),
            "basis": s.surface.basis_names(),
            "K": s.canonical().coeffs(),
            "K^2": s.dot(s.canonical(), s.canonical()),
            "curves": curves,
            "curve_order": names,
            "intersection_matrix": matrix,
            "report": report.to_json(),
            "failures": report.fail_count(),
        }))
    } else {
        let mut out = String::new();
        writeln!(
            out,
            "S for n = {n}: rank {}, K^2 = {}",
            s.rank(),
            s.dot(s.canonical(), s.canonical())
        )
        .unwrap();
        writeln!(out, "basis: {}", s.surface.basis_names().join(" ")).unwrap();
        for c in &names {
            writeln!(out, "{c}: {:?}", s.curve(c).unwrap().coeffs()).unwrap();
        }
        writeln!(out, "intersection matrix ({}):", names.join(" ")).unwrap();
        for row in &matrix {
            writeln!(
                out,
                "{}",
                row.iter()
                    .map(|x| format!("{x:>3}"))
                    .collect::<Vec<_>>()
                    .join("")
            )
            .unwrap();
        }
        out.push_str(&report.to_text());
        out
    };
    Outcome {
        code,
        stdout,
        stderr: String::new(),
    }
}

pub fn ideal_for(p: &ModelParams, which: Which) -> Result<Ideal, String> {
    match which {
        Which::Minitwistor => Ok(minitwistor_ideal(p)),
        Which::ModelX => model_X_ideal(p).map_err(|e| e.to_string()),
        Which::Fiber => fiber_model(p).map_err(|e| e.to_string()),
        Which::Branch => Ok(branch_ideal(p)),
    }
}

pub fn emit_ideal(path: &Path, which: Which, json: bool) -> Outcome {
    let p = match load_params(path) {
        Ok(p) => p,
        Err(o) => return o,
    };
    match ideal_for(&p, which) {
        Ok(ideal) => Outcome {
            code: EXIT_PASS,
            stdout: if json {
                pretty(&ideal.to_json())
            } else {
                ideal.to_text()
            },
            stderr: String::new(),
        },
        Err(e) => Outcome::input_error(e),
    }
}

pub fn verify(n: usize, params: Option<&PathBuf>, deep: bool, json: bool) -> Outcome {
    let p = match params.map(|p| load_params(p)).transpose() {
        Ok(p) => p,
        Err(o) => return o,
    };
    if let Some(p) = &p {
        if p.n != n {
            return Outcome::input_error(format!(
                "--n {n} disagrees with n = {} in the params file",
                p.n
            ));
        }
    }
    let report = match suite::full_report(n, p.as_ref(), deep) {
        Ok(r) => r,
        Err(e) => return Outcome::input_error(e),
    };
    let code = if report.all_pass() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    };
    let stdout = if json {
        pretty(&report.to_json())
    } else {
        report.to_text()
    };
    Outcome {
        code,
        stdout,
        stderr: String::new(),
    }
}

fn candidate_json(c: &AdmissibleCandidate) -> Value {
    json!({
        "seed": c.seed,
        "method": c.method.as_str(),
        "residual": c.residual,
        "iterations": c.iterations,
        "g_hat": (0..c.params.n).map(|k| fmt_rational(&c.params.g_hat.coeff(k))).collect::<Vec<_>>(),
        "g_hat_canonical": c.params.g_hat.to_canonical("lambda"),
        "g_hat^2-q": c.analysis.p.to_canonical("lambda"),
        "certificate": c.analysis.to_json(),
    })
}

pub fn find_admissible(
    n: usize,
    lambdas: &[String],
    seeds: u64,
    tol: f64,
    out: Option<&PathBuf>,
    allow_split: bool,
    json: bool,
) -> Outcome {
    let lambdas: Vec<Rational> = match lambdas
        .iter()
        .flat_map(|s| s.split_whitespace())
        .map(parse_rational)
        .collect::<Result<_, _>>()
    {
        Ok(v) => v,
        Err(e) => return Outcome::input_error(e),
    };
    if let Err(e) = ModelParams::new(n, lambdas.clone(), Default::default()) {
        return Outcome::input_error(e);
    }
    let opts = SearchOptions {
        allow_split,
        ..SearchOptions::default()
    };
    let mut found = Vec::new();
    let mut misses = Vec::new();
    for seed in 0..seeds {
        match find_admissible_g_with(n, &lambdas, seed, tol, &opts) {
            Ok(c) => found.push(c),
            Err(e) => misses.push((seed, e.to_string())),
        }
    }
    let mut stderr = String::new();
    if let (Some(path), Some(c)) = (out, found.first()) {
        if let Err(e) = std::fs::write(path, ParamsFile::from_params(&c.params).to_json_string()) {
            return Outcome::input_error(format!("cannot write {}: {e}", path.display()));
        }
    }
    let code = if found.is_empty() {
        EXIT_EXHAUSTED
    } else {
        EXIT_PASS
    };
    if found.is_empty() {
        writeln!(
            stderr,
            "search exhausted: no exactly verified candidate in {seeds} seeds"
        )
        .unwrap();
    }
    let stdout = if json {
        pretty(&json!({
            "candidates": found.iter().map(candidate_json).collect::<Vec<_>>(),
            "misses": misses.iter().map(|(s, e)| json!({ "seed": s, "error": e })).collect::<Vec<_>>(),
        }))
    } else {
        let mut o = String::new();
        for c in &found {
            writeln!(
                o,
                "seed {}: {} g_hat = {} ; g_hat^2 - q = {} ; genus {} ; odd part degree {} ; split {}",
                c.seed,
                c.method.as_str(),
                c.params.g_hat.to_canonical("lambda"),
                c.analysis.p.to_canonical("lambda"),
                c.analysis.genus(),
                c.analysis.data.odd_part_degree,
                c.analysis.split()
            )
            .unwrap();
        }
        for (_, e) in &misses {
            writeln!(o, "{e}").unwrap();
        }
        o
    };
    Outcome {
        code,
        stdout,
        stderr,
    }
}
