//! Command-line front end. The `herm2` binary is a thin wrapper around [`run`].
//!
//! Exit codes: 0 success, 1 parse or usage error, 2 math-stage failure (stage named on
//! stderr), 3 verification mismatch or failed self-test.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::density::local_density;
use crate::error::Error;
use crate::io::{matrix_to_json, read_lattice, with_schema, SCHEMA};
use crate::jordan::{canonicalize, jordan_split};
use crate::oracle::{budget_from_env, compare, normalized_density, DEFAULT_BUDGET};
use crate::selftest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_MATH: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

const DEFAULT_MAX_DEPTH: u32 = 6;

#[derive(Parser, Debug)]
#[command(name = "herm2", version, about = "Local densities of hermitian lattices over ramified 2-adic quadratic extensions")]
struct Cli {
    /// Replace the 2-adic precision given in the lattice file.
    #[arg(long, global = true)]
    precision_override: Option<u32>,
    /// Emit JSON (default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Emit a human-readable summary instead of JSON.
    #[arg(long, global = true)]
    text: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute β_L and every intermediate quantity.
    Density {
        path: PathBuf,
        /// Check the result against the counting oracle.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        oracle: OracleArgs,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Jordan splitting with type flags and the splitting basis.
    Jordan { path: PathBuf },
    /// Normalized congruence counts at increasing depth.
    Oracle {
        path: PathBuf,
        #[command(flatten)]
        oracle: OracleArgs,
        /// Also write the full count profile to this file.
        #[arg(long)]
        emit_profile: Option<PathBuf>,
    },
    /// Run the built-in invariant suites.
    Selftest,
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// Largest 2-adic depth d to count at.
    #[arg(long, default_value_t = DEFAULT_MAX_DEPTH, value_parser = clap::value_parser!(u32).range(1..=32))]
    max_depth: u32,
    /// State budget; defaults to HERM2_BUDGET, then 2^24.
    #[arg(long)]
    budget: Option<u64>,
}

impl OracleArgs {
    fn budget(&self) -> u64 {
        self.budget.unwrap_or_else(|| budget_from_env(DEFAULT_BUDGET))
    }
}

/// Outcome of one command before it is printed.
struct Output {
    code: i32,
    json: Value,
    text: String,
}

/// Parse `args` (including the program name) and run the command, writing to `out` and `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Density { path, verify, oracle, out: dest } => density(&cli, path, *verify, oracle, dest.as_ref()),
        Command::Jordan { path } => jordan(&cli, path),
        Command::Oracle { path, oracle, emit_profile } => oracle_cmd(&cli, path, oracle, emit_profile.as_ref()),
        Command::Selftest => Ok(selftest_cmd()),
    };
    match result {
        Ok(o) => {
            if !o.text.is_empty() || !o.json.is_null() {
                let body = if cli.text { o.text } else { pretty(&o.json) };
                let _ = writeln!(out, "{body}");
            }
            o.code
        }
        Err(e) => report_error(&e, err),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values print")
}

fn report_error(e: &Error, err: &mut dyn Write) -> i32 {
    match e.stage() {
        None => {
            let _ = writeln!(err, "error: {e}");
            EXIT_PARSE
        }
        Some(stage) => {
            let _ = writeln!(err, "error in stage {stage}: {e}");
            if let Error::BudgetExceeded { partial, .. } = e {
                let _ = writeln!(err, "{}", pretty(&with_schema(partial.as_ref())));
            }
            EXIT_MATH
        }
    }
}

fn io_error(path: &std::path::Path, e: std::io::Error) -> Error {
    Error::Parse(format!("{}: {e}", path.display()))
}

fn density(cli: &Cli, path: &PathBuf, verify: bool, oracle: &OracleArgs, dest: Option<&PathBuf>) -> Result<Output, Error> {
    let l = read_lattice(path, cli.precision_override)?;
    let report = local_density(&l)?;
    let mut json = with_schema(&report);
    let mut text = format!(
        "{}, f = {}, rank {}\nblocks: {}\nN = {}, β = {}\n|G̃(κ)| = {}\nβ_L = {}",
        report.case,
        report.f,
        report.n,
        report.blocks.iter().map(|b| format!("L_{} rank {} {:?}", b.i, b.rank, b.block_type)).collect::<Vec<_>>().join(", "),
        report.exponents.n,
        report.beta,
        report.order_gtilde,
        report.beta_l,
    );
    let mut code = EXIT_OK;
    if verify {
        let cmp = compare(&l, &report.beta_l, oracle.max_depth, oracle.budget())?;
        text.push_str(&match &cmp.profile.stabilized_value {
            Some(v) => format!("\noracle: {v} at d = {} (c = {})", cmp.profile.stabilized_at.unwrap_or(0), cmp.calibration_constant),
            None => format!("\noracle: no stabilization by d = {}", oracle.max_depth),
        });
        text.push_str(if cmp.agrees { "\nverification: agree" } else { "\nverification: MISMATCH" });
        if !cmp.agrees {
            code = EXIT_MISMATCH;
        }
        json["verification"] = serde_json::to_value(&cmp).expect("comparison serializes");
    }
    if let Some(dest) = dest {
        let body = if cli.text { text.clone() } else { pretty(&json) };
        std::fs::write(dest, body + "\n").map_err(|e| io_error(dest, e))?;
        return Ok(Output { code, json: Value::Null, text: String::new() });
    }
    Ok(Output { code, json, text })
}

fn jordan(cli: &Cli, path: &PathBuf) -> Result<Output, Error> {
    let l = read_lattice(path, cli.precision_override)?;
    let dec = jordan_split(&l)?;
    let blocks = &dec.classification.blocks;
    let json = json!({
        "schema": SCHEMA,
        "case": dec.case(),
        "blocks": blocks,
        "witness": matrix_to_json(dec.ring(), &dec.witness),
        // matched residual presentation per block; null when no normal form was reached
        "normal_forms": canonicalize(&dec).ok().map(|cf| {
            cf.blocks
                .iter()
                .map(|nf| json!({"i": nf.i, "hyperbolic": nf.hyperbolic, "residual": nf.residual.tag()}))
                .collect::<Vec<_>>()
        }),
    });
    let text = blocks
        .iter()
        .map(|b| {
            format!(
                "L_{}: rank {}, type {:?}, {}, {}",
                b.i,
                b.rank,
                b.block_type,
                serde_json::to_value(b.rank_parity).expect("serializes").as_str().unwrap_or(""),
                serde_json::to_value(b.boundness).expect("serializes").as_str().unwrap_or(""),
            )
        })
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Output { code: EXIT_OK, json, text })
}

fn oracle_cmd(cli: &Cli, path: &PathBuf, oracle: &OracleArgs, emit: Option<&PathBuf>) -> Result<Output, Error> {
    let l = read_lattice(path, cli.precision_override)?;
    let p = normalized_density(&l, oracle.max_depth, oracle.budget())?;
    let json = with_schema(&p);
    if let Some(dest) = emit {
        std::fs::write(dest, pretty(&json) + "\n").map_err(|e| io_error(dest, e))?;
    }
    let mut text: String = p
        .depths
        .iter()
        .zip(&p.raw_counts)
        .zip(&p.normalized)
        .map(|((d, c), v)| format!("d = {d}: {c} solutions, normalized {v}\n"))
        .collect();
    text.push_str(&match (&p.stabilized_value, p.stabilized_at) {
        (Some(v), Some(d)) => format!("stabilized at d = {d}: {v}"),
        _ => "not stabilized".into(),
    });
    Ok(Output { code: EXIT_OK, json, text })
}

fn selftest_cmd() -> Output {
    let results = selftest::run_all();
    let failed = results.iter().any(|(_, r)| r.is_err());
    let suites: Vec<Value> = results
        .iter()
        .map(|(name, r)| json!({ "name": name, "passed": r.is_ok(), "detail": r.as_ref().err() }))
        .collect();
    let text = results
        .iter()
        .map(|(name, r)| match r {
            Ok(()) => format!("PASS {name}"),
            Err(msg) => format!("FAIL {name}: {msg}"),
        })
        .collect::<Vec<_>>()
        .join("\n");
    Output { code: if failed { EXIT_MISMATCH } else { EXIT_OK }, json: json!({ "schema": SCHEMA, "suites": suites }), text }
}
