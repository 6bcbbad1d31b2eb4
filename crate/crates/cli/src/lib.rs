//! Batch command-line front end: parameter parsing, JSON/CSV output,
//! diagnostic reports. Exit codes: 0 success, 2 parse errors, 3 domain
//! errors, each with a one-line machine-readable error object on stderr.
//!
//! The logic lives in this library so the wire-format helpers stay
//! testable; the binary is a thin wrapper around [`run_main`].

use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;

use num_complex::Complex64;
use serde_json::{json, Value};

use lame_spectra::bh::{bh_table_check, green_bh, ssf_bh, BhParams};
use lame_spectra::elliptic::{invariants_from_roots, roots_from_invariants, EllipticParams};
use lame_spectra::euler_top::{
    build_euler_top, spectral_poly_diagnostic, trace_log_det_check, Spin,
};
use lame_spectra::krein::{counting_ssf, ssf_via_arg, OperatorPair, SsfMethod, SsfSample};
use lame_spectra::lame_green::{green_kernel, lame_solution, lame_ssf, LameSolutionParams, SsfExpr};
use lame_spectra::matrix::charpoly;
use lame_spectra::poly::band_edges;
use lame_spectra::rng::SplitMix64;
use lame_spectra::testkit;

pub mod io;

use io::{
    bh_params_from_json, bh_params_json, complex_json, distribution_json, fmt_f64, matrix_from_json,
    matrix_json, params_echo_json, parse_complex, parse_grid, parse_half_integer, parse_ladder,
    parse_real, parse_u32,
};

const DEFAULT_SEED: u64 = 20_260_808;

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Domain(String),
}

impl CliError {
    pub fn parse(msg: String) -> Self {
        CliError::Parse(msg)
    }

    pub fn domain(err: lame_spectra::Error) -> Self {
        CliError::Domain(err.to_string())
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Domain(_) => "domain",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Domain(m) => m,
        }
    }

    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Parse(_) => ExitCode::from(2),
            CliError::Domain(_) => ExitCode::from(3),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

/// Parsed invocation: command, key-value parameters, output target.
struct CommandSpec {
    command: String,
    params: BTreeMap<String, String>,
    out: Option<String>,
    format: Option<Format>,
}

enum Output {
    Json(Value),
    Csv { comments: Vec<String>, header: String, rows: Vec<String> },
}

/// Entry point used by the binary: returns the process exit code.
pub fn run_main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let obj = json!({"error": {"kind": e.kind(), "message": e.message()}});
            eprintln!("{obj}");
            e.exit_code()
        }
    }
}

pub fn run(args: &[String]) -> Result<(), CliError> {
    let spec = parse_args(args)?;
    let output = dispatch(&spec)?;
    let text = render(&spec, output)?;
    match &spec.out {
        None => {
            let mut stdout = std::io::stdout();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Parse(format!("cannot write output: {e}")))?;
        }
        Some(path) => {
            std::fs::write(path, text)
                .map_err(|e| CliError::Parse(format!("cannot write {path}: {e}")))?;
        }
    }
    Ok(())
}

fn parse_args(args: &[String]) -> Result<CommandSpec, CliError> {
    let Some(command) = args.first() else {
        return Err(CliError::Parse(USAGE.trim().into()));
    };
    if command == "--help" || command == "-h" || command == "help" {
        return Err(CliError::Parse(USAGE.trim().into()));
    }
    let mut params = BTreeMap::new();
    let mut out = None;
    let mut format = None;
    let mut i = 1;
    while i < args.len() {
        let key = &args[i];
        let Some(name) = key.strip_prefix("--") else {
            return Err(CliError::Parse(format!("expected --key, got {key:?}")));
        };
        let Some(value) = args.get(i + 1) else {
            return Err(CliError::Parse(format!("missing value for --{name}")));
        };
        match name {
            "out" => out = Some(value.clone()),
            "format" => {
                format = Some(match value.as_str() {
                    "json" => Format::Json,
                    "csv" => Format::Csv,
                    other => {
                        return Err(CliError::Parse(format!(
                            "format must be json or csv, got {other:?}"
                        )))
                    }
                })
            }
            _ => {
                if params.insert(name.to_string(), value.clone()).is_some() {
                    return Err(CliError::Parse(format!("duplicate key --{name}")));
                }
            }
        }
        i += 2;
    }
    Ok(CommandSpec { command: command.clone(), params, out, format })
}

const USAGE: &str = "
usage: lame-spectra <command> [--key value ...] [--format json|csv] [--out PATH]

commands:
  elliptic        --op wp|wp-prime|sigma|zeta|wp-inverse|roots|invariants|params
                  with --g2 --g3 (and --z, --e-val, or --e1 --e2 --e3 as the op needs)
  band-edges      --s N --g2 C [--g3 C]
  euler-top       --s N --g2 C --g3 C [--j HALF_INTEGER]
  ssf-krein       --pair PATH --grid start:stop:step [--method counting|arg]
                  [--eps-ladder 1e-2,1e-3,1e-4]
  lame-green      --op solution|green|ssf --eps C --k1 C --k2 C --g2 C --g3 C
                  [--z C] [--w C] [--kappa C] [--lambda R]
  bh-green        --params PATH --w-grid start:stop:step [--lambda R]
  bh-table-check  --params PATH
  diagnostics     --s N --g2 C --g3 C [--j HALF_INTEGER] [--seed N]

complex values C are re or re,im; LAME_SPECTRA_SEED overrides --seed.
";

fn expect_keys(spec: &CommandSpec, allowed: &[&str]) -> Result<(), CliError> {
    for key in spec.params.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(CliError::Parse(format!(
                "unknown key --{key} for command {}",
                spec.command
            )));
        }
    }
    Ok(())
}

fn required<'a>(spec: &'a CommandSpec, key: &str) -> Result<&'a str, CliError> {
    spec.params
        .get(key)
        .map(|s| s.as_str())
        .ok_or_else(|| CliError::Parse(format!("missing required --{key}")))
}

fn dispatch(spec: &CommandSpec) -> Result<Output, CliError> {
    match spec.command.as_str() {
        "elliptic" => cmd_elliptic(spec),
        "band-edges" => cmd_band_edges(spec),
        "euler-top" => cmd_euler_top(spec),
        "ssf-krein" => cmd_ssf_krein(spec),
        "lame-green" => cmd_lame_green(spec),
        "bh-green" => cmd_bh_green(spec),
        "bh-table-check" => cmd_bh_table_check(spec),
        "diagnostics" => cmd_diagnostics(spec),
        other => Err(CliError::Parse(format!("unknown command {other:?}"))),
    }
}

fn render(spec: &CommandSpec, output: Output) -> Result<String, CliError> {
    match output {
        Output::Json(value) => {
            if spec.format == Some(Format::Csv) {
                return Err(CliError::Parse(
                    "this command emits JSON; csv is not available".into(),
                ));
            }
            Ok(format!("{}\n", serde_json::to_string_pretty(&value).unwrap()))
        }
        Output::Csv { comments, header, rows } => {
            if spec.format == Some(Format::Json) {
                return Err(CliError::Parse(
                    "this command emits CSV; json is not available".into(),
                ));
            }
            let mut text = String::new();
            for line in comments {
                text.push_str(&format!("# {line}\n"));
            }
            text.push_str(&header);
            text.push('\n');
            for row in rows {
                text.push_str(&row);
                text.push('\n');
            }
            Ok(text)
        }
    }
}

fn json_output(spec: &CommandSpec, mut payload: Value) -> Output {
    let obj = payload.as_object_mut().expect("payload is an object");
    obj.insert("command".into(), Value::String(spec.command.clone()));
    obj.insert("params".into(), params_echo_json(&spec.params));
    Output::Json(payload)
}

fn csv_comments(spec: &CommandSpec) -> Vec<String> {
    let mut lines = vec![format!("command={}", spec.command)];
    for (k, v) in &spec.params {
        lines.push(format!("{k}={v}"));
    }
    lines
}

fn elliptic_params_from(spec: &CommandSpec) -> Result<EllipticParams, CliError> {
    let g2 = parse_complex(required(spec, "g2")?)?;
    let g3 = parse_complex(required(spec, "g3")?)?;
    EllipticParams::from_invariants(g2, g3).map_err(CliError::domain)
}

fn cmd_elliptic(spec: &CommandSpec) -> Result<Output, CliError> {
    expect_keys(spec, &["op", "g2", "g3", "z", "e-val", "e1", "e2", "e3"])?;
    let op = required(spec, "op")?;
    let payload = match op {
        "wp" | "wp-prime" | "sigma" | "zeta" => {
            let p = elliptic_params_from(spec)?;
            let z = parse_complex(required(spec, "z")?)?;
            let value = match op {
                "wp" => p.wp(z),
                "wp-prime" => p.wp_prime(z),
                "sigma" => p.sigma(z),
                _ => p.zeta(z),
            }
            .map_err(CliError::domain)?;
            json!({"op": op, "value": complex_json(value)})
        }
        "wp-inverse" => {
            let p = elliptic_params_from(spec)?;
            let e_val = parse_complex(required(spec, "e-val")?)?;
            let eps = p.wp_inverse(e_val).map_err(CliError::domain)?;
            let back = p.wp(eps).map_err(CliError::domain)?;
            let residual = (back - e_val).norm() / e_val.norm().max(1.0);
            json!({
                "op": op,
                "value": complex_json(eps),
                "roundtrip_relative_residual": residual,
            })
        }
        "roots" => {
            let g2 = parse_complex(required(spec, "g2")?)?;
            let g3 = parse_complex(required(spec, "g3")?)?;
            let r = roots_from_invariants(g2, g3);
            json!({
                "op": op,
                "roots": r.roots.iter().map(|&e| complex_json(e)).collect::<Vec<_>>(),
                "degenerate": r.degenerate,
            })
        }
        "invariants" => {
            let e1 = parse_complex(required(spec, "e1")?)?;
            let e2 = parse_complex(required(spec, "e2")?)?;
            let e3 = parse_complex(required(spec, "e3")?)?;
            let inv = invariants_from_roots(e1, e2, e3).map_err(CliError::domain)?;
            if (inv.g2_pair_sum - inv.g2_vieta).norm() > 1e-12 * (1.0 + inv.g2_vieta.norm()) {
                eprintln!(
                    "warning: pair-sum g2 = {} differs from the cubic-consistent g2 = {}; downstream defaults use the latter",
                    inv.g2_pair_sum, inv.g2_vieta
                );
            }
            json!({
                "op": op,
                "g2_pair_sum": complex_json(inv.g2_pair_sum),
                "g3": complex_json(inv.g3),
                "g2_vieta": complex_json(inv.g2_vieta),
            })
        }
        "params" => {
            let p = elliptic_params_from(spec)?;
            json!({
                "op": op,
                "roots": p.roots.iter().map(|&e| complex_json(e)).collect::<Vec<_>>(),
                "half_periods": p.half_periods.iter().map(|&o| complex_json(o)).collect::<Vec<_>>(),
            })
        }
        other => {
            return Err(CliError::Parse(format!("unknown elliptic op {other:?}")));
        }
    };
    Ok(json_output(spec, payload))
}

fn cmd_band_edges(spec: &CommandSpec) -> Result<Output, CliError> {
    // --g3 is accepted and echoed though the spectral factors are
    // g3-independent; the euler-top diagnostic surfaces that comparison.
    expect_keys(spec, &["s", "g2", "g3"])?;
    let s = parse_u32(required(spec, "s")?)?;
    if s < 1 {
        return Err(CliError::Parse("gap count --s must be >= 1".into()));
    }
    let g2 = parse_complex(required(spec, "g2")?)?;
    if let Some(g3) = spec.params.get("g3") {
        parse_complex(g3)?; // validated, echoed via params
    }
    let be = band_edges(s, g2).map_err(CliError::domain)?;
    let payload = json!({
        "s": be.s,
        "edges": be.edges.iter().map(|&e| complex_json(e)).collect::<Vec<_>>(),
        "residuals": be.residuals,
        "clustered": be.clustered,
    });
    Ok(json_output(spec, payload))
}

fn spin_from(spec: &CommandSpec, s: u32) -> Result<Spin, CliError> {
    match spec.params.get("j") {
        Some(text) => {
            let j = parse_half_integer(text)?;
            Spin::from_f64(j).map_err(CliError::domain)
        }
        None => Ok(Spin(2 * s)),
    }
}

fn cmd_euler_top(spec: &CommandSpec) -> Result<Output, CliError> {
    expect_keys(spec, &["s", "g2", "g3", "j"])?;
    let s = parse_u32(required(spec, "s")?)?;
    if s < 1 {
        return Err(CliError::Parse("gap count --s must be >= 1".into()));
    }
    let g2 = parse_complex(required(spec, "g2")?)?;
    let g3 = parse_complex(required(spec, "g3")?)?;
    let spin = spin_from(spec, s)?;
    let top = build_euler_top(s, spin, g2, g3);
    let poly = charpoly(&top.matrix).map_err(CliError::domain)?;
    let payload = json!({
        "s": s,
        "j": spin.value(),
        "g2": complex_json(g2),
        "g3": complex_json(g3),
        "matrix": matrix_json(&top.matrix),
        "charpoly_ascending": poly
            .coeffs()
            .iter()
            .map(|&c| complex_json(c))
            .collect::<Vec<_>>(),
    });
    Ok(json_output(spec, payload))
}

fn cmd_ssf_krein(spec: &CommandSpec) -> Result<Output, CliError> {
    expect_keys(spec, &["pair", "grid", "method", "eps-ladder"])?;
    let path = required(spec, "pair")?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {path}: {e}")))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("invalid JSON in {path}: {e}")))?;
    let h0 = matrix_from_json(&value["h0"])?;
    let h = matrix_from_json(&value["h"])?;
    let pair = OperatorPair::new(h0, h).map_err(CliError::domain)?;
    let grid = parse_grid(required(spec, "grid")?)?;
    let method = spec.params.get("method").map(|s| s.as_str()).unwrap_or("counting");
    let sample: SsfSample = match method {
        "counting" => counting_ssf(&pair, &grid).map_err(CliError::domain)?,
        "arg" => {
            let ladder = match spec.params.get("eps-ladder") {
                Some(text) => parse_ladder(text)?,
                None => vec![1e-2, 1e-3, 1e-4],
            };
            ssf_via_arg(&pair, &grid, &ladder).map_err(CliError::domain)?
        }
        other => return Err(CliError::Parse(format!("unknown method {other:?}"))),
    };
    let method_name = match sample.method {
        SsfMethod::Counting => "counting",
        SsfMethod::ArgLimit => "arg_limit",
    };
    let mut comments = csv_comments(spec);
    comments.push(format!("trace_v={}", fmt_f64(pair.trace_v())));
    let rows = sample
        .grid
        .iter()
        .zip(&sample.xi)
        .map(|(&lambda, &xi)| format!("{},{},{}", fmt_f64(lambda), fmt_f64(xi), method_name))
        .collect();
    Ok(Output::Csv { comments, header: "lambda,xi,method".into(), rows })
}

fn lame_params_from(spec: &CommandSpec) -> Result<LameSolutionParams, CliError> {
    let elliptic = elliptic_params_from(spec)?;
    let eps = parse_complex(required(spec, "eps")?)?;
    let k1 = parse_complex(required(spec, "k1")?)?;
    let k2 = parse_complex(required(spec, "k2")?)?;
    LameSolutionParams::new(eps, k1, k2, elliptic).map_err(CliError::domain)
}

fn cmd_lame_green(spec: &CommandSpec) -> Result<Output, CliError> {
    expect_keys(
        spec,
        &["op", "eps", "k1", "k2", "g2", "g3", "z", "w", "kappa", "lambda"],
    )?;
    let op = required(spec, "op")?;
    let p = lame_params_from(spec)?;
    let payload = match op {
        "solution" => {
            let z = parse_complex(required(spec, "z")?)?;
            let value = lame_solution(z, &p).map_err(CliError::domain)?;
            json!({"op": op, "value": complex_json(value)})
        }
        "green" => {
            let w = parse_complex(required(spec, "w")?)?;
            let kappa = parse_complex(required(spec, "kappa")?)?;
            let g = green_kernel(w, &p, kappa).map_err(CliError::domain)?;
            json!({"op": op, "kernel": distribution_json(&g, false)})
        }
        "ssf" => {
            let w = parse_complex(required(spec, "w")?)?;
            let kappa = parse_complex(required(spec, "kappa")?)?;
            let lambda = parse_real(required(spec, "lambda")?)?;
            let v = lame_ssf(lambda, w, &p, kappa).map_err(CliError::domain)?;
            let (dist, infinite) = match &v.value {
                SsfExpr::Infinite => (Default::default(), true),
                SsfExpr::Expr(e) => (e.clone(), false),
            };
            json!({
                "op": op,
                "halfplane": match v.halfplane {
                    lame_spectra::lame_green::HalfPlane::Upper => "upper",
                    lame_spectra::lame_green::HalfPlane::Lower => "lower",
                },
                "ssf": distribution_json(&dist, infinite),
            })
        }
        other => return Err(CliError::Parse(format!("unknown lame-green op {other:?}"))),
    };
    Ok(json_output(spec, payload))
}

fn bh_params_from_spec(spec: &CommandSpec) -> Result<BhParams, CliError> {
    let path = required(spec, "params")?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {path}: {e}")))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("invalid JSON in {path}: {e}")))?;
    bh_params_from_json(&value)
}

fn cmd_bh_green(spec: &CommandSpec) -> Result<Output, CliError> {
    expect_keys(spec, &["params", "w-grid", "lambda"])?;
    let p = bh_params_from_spec(spec)?;
    let w_grid = parse_grid(required(spec, "w-grid")?)?;
    let lambda = spec.params.get("lambda").map(|s| parse_real(s)).transpose()?;
    let mut comments = csv_comments(spec);
    comments.push(format!(
        "params_json={}",
        serde_json::to_string(&bh_params_json(&p)).unwrap()
    ));
    let mut header = "w,re_g_plus,im_g_plus,re_g_minus,im_g_minus".to_string();
    if lambda.is_some() {
        header.push_str(",re_xi_plus,im_xi_plus,re_xi_minus,im_xi_minus");
    }
    let mut rows = Vec::with_capacity(w_grid.len());
    for &wr in &w_grid {
        let w = Complex64::new(wr, 0.0);
        let (gp, gm) = green_bh(w, &p).map_err(CliError::domain)?;
        let mut row = format!(
            "{},{},{},{},{}",
            fmt_f64(wr),
            fmt_f64(gp.re),
            fmt_f64(gp.im),
            fmt_f64(gm.re),
            fmt_f64(gm.im)
        );
        if let Some(lambda) = lambda {
            let (xp, xm) = ssf_bh(lambda, w, &p).map_err(CliError::domain)?;
            row.push_str(&format!(
                ",{},{},{},{}",
                fmt_f64(xp.re),
                fmt_f64(xp.im),
                fmt_f64(xm.re),
                fmt_f64(xm.im)
            ));
        }
        rows.push(row);
    }
    Ok(Output::Csv { comments, header, rows })
}

fn cmd_bh_table_check(spec: &CommandSpec) -> Result<Output, CliError> {
    expect_keys(spec, &["params"])?;
    let p = bh_params_from_spec(spec)?;
    let report = bh_table_check(&p).map_err(CliError::domain)?;
    let payload = json!({
        "input": bh_params_json(&p),
        "consolidated": {
            "x2": complex_json(report.consolidated.x2),
            "x1": complex_json(report.consolidated.x1),
            "x0": complex_json(report.consolidated.x0),
            "a_plus": complex_json(report.consolidated.a_plus),
            "a_minus": complex_json(report.consolidated.a_minus),
            "discriminant": complex_json(report.consolidated.discriminant),
        },
        "table_variant": {
            "x1": complex_json(report.table_x1),
            "x0": complex_json(report.table_x0),
            "x1_difference": complex_json(report.x1_difference),
            "x0_difference": complex_json(report.x0_difference),
        },
        "weight_rows": report
            .weight_rows
            .iter()
            .map(|row| {
                json!({
                    "mnq": [row.key.0, row.key.1, row.key.2],
                    "binomial": complex_json(row.binomial_form),
                    "factorial": complex_json(row.factorial_form),
                    "diff": row.diff,
                })
            })
            .collect::<Vec<_>>(),
    });
    Ok(json_output(spec, payload))
}

fn cmd_diagnostics(spec: &CommandSpec) -> Result<Output, CliError> {
    expect_keys(spec, &["s", "g2", "g3", "j", "seed"])?;
    let s = parse_u32(required(spec, "s")?)?;
    if s < 1 {
        return Err(CliError::Parse("gap count --s must be >= 1".into()));
    }
    let g2 = parse_complex(required(spec, "g2")?)?;
    let g3 = parse_complex(required(spec, "g3")?)?;
    let spin = spin_from(spec, s)?;
    let seed = match std::env::var("LAME_SPECTRA_SEED") {
        Ok(text) => text
            .parse::<u64>()
            .map_err(|_| CliError::Parse("LAME_SPECTRA_SEED must be a u64".into()))?,
        Err(_) => match spec.params.get("seed") {
            Some(text) => text
                .parse::<u64>()
                .map_err(|_| CliError::Parse("--seed must be a u64".into()))?,
            None => DEFAULT_SEED,
        },
    };
    let d = spectral_poly_diagnostic(s, spin, g2, g3).map_err(CliError::domain)?;
    // Seeded spot check of the trace/log-det identity alongside the
    // polynomial comparison; findings, not assertions.
    let mut rng = SplitMix64::new(seed);
    let mut trace_checks = Vec::new();
    for _ in 0..5 {
        let m = testkit::random_bounded(&mut rng, 4, 1.5);
        let r = trace_log_det_check(&m).map_err(CliError::domain)?;
        trace_checks.push(json!({
            "lhs": complex_json(r.lhs),
            "rhs": complex_json(r.rhs),
            "diff_mod_2pi": r.diff_mod_2pi,
        }));
    }
    let payload = json!({
        "seed": seed,
        "spectral_poly": {
            "s": s,
            "j": spin.value(),
            "matrix_degree": d.matrix_degree,
            "product_degree": d.product_degree,
            "degree_mismatch": d.degree_mismatch,
            "coeff_diffs": d.coeff_diffs,
            "matrix_roots": d.matrix_roots.iter().map(|&r| complex_json(r)).collect::<Vec<_>>(),
            "product_roots": d.product_roots.iter().map(|&r| complex_json(r)).collect::<Vec<_>>(),
            "root_distance_forward": d.root_distance_forward,
            "root_distance_backward": d.root_distance_backward,
        },
        "trace_log_det_spot_checks": trace_checks,
    });
    Ok(json_output(spec, payload))
}
