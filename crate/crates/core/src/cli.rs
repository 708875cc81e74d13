//! Command-line frontend. Every subcommand is a thin wrapper over a library
//! call; reals are printed as shortest round-trip decimals in text output and
//! at 15 significant digits in JSON and CSV.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::asymptotic::{
    minimize_u, ratio_limit_u, record_constants, region_classify, limit_l4_normalized, LimitPoint,
    RECORD_UPPER_BOUND,
};
use crate::convergence::{export_records, round_sig15, run_convergence, write_records, RecordFormat};
use crate::error::Error;
use crate::sequence::{
    fekete_coeffs, l2_norm_pow2, l4_norm_pow4_with, littlewoodize, merit_factor_from_norms,
    FeketeSpec, Kernel,
};
use crate::verify::Suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_BAD_ARGS: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;
pub const EXIT_INCONSISTENT: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "fekete",
    version,
    about = "Exact L4 norms of generalized Fekete and Littlewood polynomials and their asymptotic limits"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact norms and merit factor of f_p^(r,t) or g_p^(r,t)
    Norm(NormArgs),
    /// Asymptotic limit Phi(R,T) and ratio u(R,T)
    Limit(LimitArgs),
    /// Record constants T0, R0, c as JSON
    Constants,
    /// Global minimization of u over [0,1/2] x [1/2,3/2]
    Optimize(OptimizeArgs),
    /// Exact norms along a prime ladder, exported as CSV or JSON
    Scan(ScanArgs),
    /// Run verification suites
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct NormArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, allow_hyphen_values = true)]
    r: i64,
    #[arg(long)]
    t: usize,
    /// Spectral autocorrelation (default)
    #[arg(long, conflicts_with = "naive")]
    fast: bool,
    /// Direct O(t^2) autocorrelation
    #[arg(long)]
    naive: bool,
    /// Replace zero coefficients by +1 (default)
    #[arg(long, conflicts_with = "raw")]
    littlewood: bool,
    /// Keep the Legendre coefficients as they are
    #[arg(long)]
    raw: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct LimitArgs {
    #[arg(long = "R", allow_hyphen_values = true)]
    r: f64,
    #[arg(long = "T")]
    t: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct OptimizeArgs {
    #[arg(long = "grid-step", default_value_t = 1.0 / 512.0)]
    grid_step: f64,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExportFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long = "R", allow_hyphen_values = true)]
    r: f64,
    #[arg(long = "T")]
    t: f64,
    #[arg(long)]
    pmin: u64,
    #[arg(long)]
    pmax: u64,
    #[arg(long, default_value_t = 8)]
    count: usize,
    /// Output file; records go to stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Defaults to json for a .json output path, csv otherwise
    #[arg(long, value_enum)]
    format: Option<ExportFormat>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all", value_parser = clap::builder::PossibleValuesParser::new(Suite::NAMES))]
    suite: String,
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Precision { .. } => EXIT_PRECISION,
        _ => EXIT_BAD_ARGS,
    }
}

/// Parse `args` (including the program name) and run the command, writing
/// to `out` and `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Norm(a) => cmd_norm(&a, out),
        Command::Limit(a) => cmd_limit(&a, out),
        Command::Constants => cmd_constants(out, err),
        Command::Optimize(a) => cmd_optimize(&a, out),
        Command::Scan(a) => cmd_scan(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

type CmdResult = Result<i32, Error>;

fn io_err(source: std::io::Error) -> Error {
    Error::Io {
        path: "<stdout>".into(),
        source,
    }
}

fn cmd_norm(a: &NormArgs, out: &mut dyn Write) -> CmdResult {
    let spec = FeketeSpec::new(a.p, a.r, a.t)?;
    let kernel = if a.naive { Kernel::Naive } else { Kernel::Fast };
    let raw = fekete_coeffs(&spec);
    let seq = if a.raw { raw } else { littlewoodize(&raw) };
    let l2 = l2_norm_pow2(&seq);
    let l4 = l4_norm_pow4_with(&seq, kernel)?;
    let ratio = (l4 as f64).powf(0.25) / (l2 as f64).sqrt();
    let merit = merit_factor_from_norms(l2, l4).ok();
    let sequence = if a.raw { "raw" } else { "littlewood" };
    let kernel_name = if a.naive { "naive" } else { "fast" };
    if a.json {
        let doc = json!({
            "p": a.p,
            "r": a.r,
            "t": a.t,
            "sequence": sequence,
            "kernel": kernel_name,
            "l2_pow2": l2,
            "l4_pow4": l4,
            "l4_over_l2": round_sig15(ratio),
            "merit_factor": merit.map(round_sig15),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc)?).map_err(io_err)?;
    } else {
        let merit_text = merit.map_or_else(|| "undefined".to_string(), |m| m.to_string());
        writeln!(
            out,
            "p = {}\nr = {}\nt = {}\nsequence = {sequence}\nkernel = {kernel_name}\nl2_pow2 = {l2}\nl4_pow4 = {l4}\nl4_over_l2 = {ratio}\nmerit_factor = {merit_text}",
            a.p, a.r, a.t
        )
        .map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

fn cmd_limit(a: &LimitArgs, out: &mut dyn Write) -> CmdResult {
    let pt = LimitPoint::new(a.r, a.t)?;
    let phi = limit_l4_normalized(&pt);
    let u = ratio_limit_u(&pt);
    let region = region_classify(&pt);
    if a.json {
        let doc = json!({
            "R": a.r,
            "T": a.t,
            "region": region.to_string(),
            "phi": round_sig15(phi),
            "u": round_sig15(u),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc)?).map_err(io_err)?;
    } else {
        writeln!(
            out,
            "R = {}\nT = {}\nregion = {region}\nphi = {phi}\nu = {u}\nl4_over_l2 = {}",
            a.r,
            a.t,
            u.powf(0.25)
        )
        .map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

fn cmd_constants(out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let k = record_constants();
    let residual = (ratio_limit_u(&k.point()) - k.c).abs();
    if !(k.c < RECORD_UPPER_BOUND && residual < 1e-10 && k.merit_factor_limit > 6.34) {
        let _ = writeln!(
            err,
            "error: record constants inconsistent (c = {}, |u(R0,T0) - c| = {residual:e})",
            k.c
        );
        return Ok(EXIT_INCONSISTENT);
    }
    let doc = json!({
        "T0": round_sig15(k.t0),
        "R0": round_sig15(k.r0),
        "c": round_sig15(k.c),
        "merit_factor_limit": round_sig15(k.merit_factor_limit),
        "u_residual": round_sig15(residual),
    });
    writeln!(out, "{}", serde_json::to_string_pretty(&doc)?).map_err(io_err)?;
    Ok(EXIT_OK)
}

fn cmd_optimize(a: &OptimizeArgs, out: &mut dyn Write) -> CmdResult {
    let m = minimize_u(a.grid_step, a.tol)?;
    let k = record_constants();
    if a.json {
        let doc = json!({
            "R": round_sig15(m.r),
            "T": round_sig15(m.t),
            "u": round_sig15(m.u),
            "grid_u": round_sig15(m.grid_u),
            "grid_points": m.grid_points,
            "sweeps": m.sweeps,
            "u_minus_c": round_sig15(m.u - k.c),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc)?).map_err(io_err)?;
    } else {
        writeln!(
            out,
            "R = {}\nT = {}\nu = {}\ngrid_u = {}\ngrid_points = {}\nsweeps = {}\nu_minus_c = {:e}",
            m.r,
            m.t,
            m.u,
            m.grid_u,
            m.grid_points,
            m.sweeps,
            m.u - k.c
        )
        .map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

fn cmd_scan(a: &ScanArgs, out: &mut dyn Write) -> CmdResult {
    let records = run_convergence(a.r, a.t, a.pmin, a.pmax, a.count)?;
    let format = match a.format {
        Some(ExportFormat::Csv) => RecordFormat::Csv,
        Some(ExportFormat::Json) => RecordFormat::Json,
        None => match &a.out {
            Some(path) if path.extension().is_some_and(|e| e == "json") => RecordFormat::Json,
            _ => RecordFormat::Csv,
        },
    };
    match &a.out {
        Some(path) => {
            export_records(&records, format, path)?;
            writeln!(out, "wrote {} records to {}", records.len(), path.display()).map_err(io_err)?;
        }
        None => write_records(&records, format, out)?,
    }
    Ok(EXIT_OK)
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> CmdResult {
    let suite = Suite::parse(&a.suite)?;
    let checks = suite.run();
    let mut failed = 0;
    for check in &checks {
        let status = if check.passed { "PASS" } else { "FAIL" };
        if !check.passed {
            failed += 1;
        }
        writeln!(out, "{status} {}: {}", check.name, check.detail).map_err(io_err)?;
    }
    writeln!(out, "{} checks, {failed} failed", checks.len()).map_err(io_err)?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("fekete").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn norm_littlewood_example() {
        let (code, out, _) = run_str(&["norm", "--p", "3", "--r", "0", "--t", "3", "--littlewood"]);
        assert_eq!(code, 0);
        assert!(out.contains("l4_pow4 = 11\n"), "{out}");
        assert!(out.contains("merit_factor = 4.5\n"));
    }

    #[test]
    fn norm_raw_example() {
        let (code, out, _) = run_str(&["norm", "--p", "7", "--r", "1", "--t", "7", "--raw", "--naive"]);
        assert_eq!(code, 0);
        assert!(out.contains("l4_pow4 = 50\n"));
        assert!(out.contains("l2_pow2 = 6\n"));
    }

    #[test]
    fn norm_negative_rotation() {
        let (code, out, _) = run_str(&["norm", "--p", "7", "--r", "-6", "--t", "7", "--raw"]);
        assert_eq!(code, 0);
        assert!(out.contains("l4_pow4 = 50\n"));
    }

    #[test]
    fn norm_rejects_composite() {
        let (code, _, err) = run_str(&["norm", "--p", "4", "--r", "0", "--t", "3"]);
        assert_eq!(code, EXIT_BAD_ARGS);
        assert!(err.contains("not an odd prime"));
        assert_eq!(run_str(&["norm", "--p", "7", "--r", "0", "--t", "0"]).0, EXIT_BAD_ARGS);
    }

    #[test]
    fn norm_degenerate_merit() {
        let (code, out, _) = run_str(&["norm", "--p", "5", "--r", "1", "--t", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("merit_factor = undefined"));
    }

    #[test]
    fn unknown_flags_and_subcommands_rejected() {
        assert_eq!(run_str(&["frobnicate"]).0, EXIT_BAD_ARGS);
        assert_eq!(run_str(&["limit", "--R", "0.25", "--T", "1", "--bogus"]).0, EXIT_BAD_ARGS);
        assert_eq!(run_str(&["norm", "--p", "7", "--r", "0", "--t", "3", "--fast", "--naive"]).0, EXIT_BAD_ARGS);
        assert_eq!(run_str(&["verify", "--suite", "nope"]).0, EXIT_BAD_ARGS);
    }

    #[test]
    fn limit_example() {
        let (code, out, _) = run_str(&["limit", "--R", "0.25", "--T", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("u = 1.1666666666666667\n"), "{out}");
        assert!(out.contains("region = D3\n"));
        assert_eq!(run_str(&["limit", "--R", "0.25", "--T", "0"]).0, EXIT_BAD_ARGS);
        let (_, neg, _) = run_str(&["limit", "--R", "-0.25", "--T", "1"]);
        assert!(neg.contains("u = 1.1666666666666667\n"), "{neg}");
    }

    #[test]
    fn constants_json() {
        let (code, out, _) = run_str(&["constants"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let c = v["c"].as_f64().unwrap();
        assert!(c < 22.0 / 19.0 && (c - 1.1577).abs() < 1e-4);
        assert!(v["merit_factor_limit"].as_f64().unwrap() > 6.34);
        assert!(v["u_residual"].as_f64().unwrap() < 1e-10);
        assert!(v["T0"].is_f64() && v["R0"].is_f64());
    }

    #[test]
    fn optimize_reports_minimum() {
        let (code, out, _) = run_str(&["optimize", "--grid-step", "0.0078125", "--tol", "1e-10", "--json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v["u_minus_c"].as_f64().unwrap().abs() < 1e-8);
        assert_eq!(run_str(&["optimize", "--grid-step", "0.5"]).0, EXIT_BAD_ARGS);
    }

    #[test]
    fn scan_to_stdout_and_file() {
        let (code, out, _) = run_str(&["scan", "--R", "0.25", "--T", "1", "--pmin", "11", "--pmax", "200", "--count", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 4);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("runs.json");
        let (code, _, _) = run_str(&[
            "scan", "--R", "0.25", "--T", "1", "--pmin", "11", "--pmax", "200", "--count", "3",
            "--out", path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let parsed: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(parsed.as_array().unwrap().len(), 3);
    }

    #[test]
    fn verify_regions_passes() {
        let (code, out, _) = run_str(&["verify", "--suite", "regions"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("PASS global_optimizer"));
    }
}
