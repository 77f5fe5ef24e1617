//! The `hecke` command line.
//!
//! Exit codes: 0 on success, 2 on a usage error (the message names the
//! offending flag), 1 on a domain error (the message starts with the error
//! name, e.g. `NotPrime`). Output is deterministic: JSON objects have
//! sorted keys and every rational is printed as `num/den`.

pub mod args;
pub mod config;
pub mod expr;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::Parser;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::bttree::{self, BTVertex, BtError};
use crate::equidist::{self, EquidistError, EquidistReport};
use crate::hecke::{self, HeckeError, Multiset};
use crate::modsurface::{self, HPoint, IntMatrix2, ModSurfaceError, TestFunction};
use crate::padic::{self, PAdicError, PAdicValue};
use crate::rational::{self, fmt_rational, parse_rational};
use crate::solenoid::{self, SolenoidError, SolenoidPoint};

use args::{Cli, Command, Format, Method, PadicCommand, SolenoidCommand, TreeCommand};
use config::Config;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain { name: &'static str, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain { .. } => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Domain { name, message } => write!(f, "error: {name}: {message}"),
        }
    }
}

macro_rules! domain_errors {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Domain { name: e.name(), message: e.to_string() }
            }
        }
    )*};
}

domain_errors!(
    PAdicError,
    ModSurfaceError,
    HeckeError,
    BtError,
    SolenoidError,
    EquidistError
);

impl From<expr::ExprError> for CliError {
    fn from(e: expr::ExprError) -> Self {
        match e {
            expr::ExprError::DivisionByZero => PAdicError::DivisionByZero.into(),
            other => CliError::Usage(format!("eval: {other}")),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

type CliResult<T> = Result<T, CliError>;

// ---- argument parsing helpers ----

fn rational_arg(flag: &str, s: &str) -> CliResult<BigRational> {
    parse_rational(s.trim()).map_err(|e| usage(format!("{flag}: {e}")))
}

fn point_arg(flag: &str, s: &str) -> CliResult<HPoint> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| usage(format!("{flag}: expected x,y, got '{s}'")))?;
    Ok(HPoint::new(rational_arg(flag, x)?, rational_arg(flag, y)?)?)
}

fn vertex_arg(p: u64, flag: &str, s: &str) -> CliResult<BTVertex> {
    let (m, u) = s
        .split_once(',')
        .ok_or_else(|| usage(format!("{flag}: expected m,u, got '{s}'")))?;
    let m: i64 = m
        .trim()
        .parse()
        .map_err(|_| usage(format!("{flag}: scale '{m}' is not an integer")))?;
    Ok(BTVertex::new(p, m, rational_arg(flag, u)?)?)
}

fn prime_arg(p: Option<u64>, cfg: &Config) -> CliResult<u64> {
    p.or(cfg.default_prime)
        .ok_or_else(|| usage("--p: required (or set `prime` in the config file)"))
}

/// Radii from `a,b,c`, `primes:MAX` or `powers:P:MAX` (`P^j <= MAX`, `j >= 1`).
pub fn parse_radius_list(s: &str) -> Result<Vec<u64>, String> {
    let num = |t: &str| -> Result<u64, String> {
        t.trim()
            .parse::<u64>()
            .map_err(|_| format!("'{t}' is not a non-negative integer"))
    };
    let list = if let Some(max) = s.strip_prefix("primes:") {
        let max = num(max)?;
        (2..=max).filter(|&n| rational::is_prime(n)).collect()
    } else if let Some(rest) = s.strip_prefix("powers:") {
        let (p, max) = rest
            .split_once(':')
            .ok_or_else(|| "expected powers:P:MAX".to_string())?;
        let (p, max) = (num(p)?, num(max)?);
        if p < 2 {
            return Err(format!("base {p} must be at least 2"));
        }
        std::iter::successors(Some(p), |&q| q.checked_mul(p))
            .take_while(|&q| q <= max)
            .collect()
    } else {
        s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if list.is_empty() {
        return Err(format!("'{s}' names no radii"));
    }
    if list.contains(&0) {
        return Err("radii must be positive".into());
    }
    Ok(list)
}

/// Test functions from `ystrip:c`, `box:x0,x1,y0,y1` or `whole`.
pub fn parse_test_function(s: &str) -> Result<TestFunction, String> {
    let rat = |t: &str| parse_rational(t.trim()).map_err(|e| e.to_string());
    if let Some(c) = s.strip_prefix("ystrip:") {
        Ok(TestFunction::YStrip { c: rat(c)? })
    } else if let Some(rest) = s.strip_prefix("box:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 4 {
            return Err(format!("box needs four bounds, got {}", parts.len()));
        }
        Ok(TestFunction::Box {
            x0: rat(parts[0])?,
            x1: rat(parts[1])?,
            y0: rat(parts[2])?,
            y1: rat(parts[3])?,
        })
    } else if s == "whole" {
        Ok(TestFunction::WholeDomain)
    } else {
        Err(format!("unknown test function '{s}'"))
    }
}

// ---- rendering ----

fn point_json(z: &HPoint) -> Value {
    json!({ "x": fmt_rational(&z.x()), "y": fmt_rational(&z.y()) })
}

fn multiset_json(m: &Multiset) -> Value {
    Value::Array(
        m.iter()
            .map(
                |(z, k)| json!({ "x": fmt_rational(&z.x()), "y": fmt_rational(&z.y()), "mult": k }),
            )
            .collect(),
    )
}

fn multiset_csv(m: &Multiset, out: &mut String, prefix: &str) {
    for (z, k) in m {
        out.push_str(&format!(
            "{prefix}{},{},{k}\n",
            fmt_rational(&z.x()),
            fmt_rational(&z.y())
        ));
    }
}

fn matrix_json(m: &IntMatrix2) -> Value {
    json!({
        "a": m.a.to_string(),
        "b": m.b.to_string(),
        "c": m.c.to_string(),
        "d": m.d.to_string(),
    })
}

fn digits_string(digits: &[u64]) -> String {
    digits
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

// ---- commands ----

struct Ctx<'a> {
    cfg: &'a Config,
    precision: u32,
    format: Format,
}

fn cmd_padic(ctx: &Ctx, a: &args::PadicArgs) -> CliResult<String> {
    match &a.command {
        PadicCommand::Eval { expr: text } => {
            let p = prime_arg(a.p, ctx.cfg)?;
            let value = expr::evaluate(text)?;
            let x = PAdicValue::from_rational(&value, p, ctx.precision)?;
            let digits = x.unit_digits();
            let abs = x.abs();
            Ok(match ctx.format {
                Format::Json => pretty(&json!({
                    "prime": p,
                    "precision": x.precision(),
                    "value": fmt_rational(&value),
                    "valuation": x.valuation(),
                    "unit_digits": digits,
                    "abs": fmt_rational(&abs),
                })),
                Format::Csv => format!(
                    "prime,precision,value,valuation,unit_digits,abs\n{p},{},{},{},{},{}\n",
                    x.precision(),
                    fmt_rational(&value),
                    x.valuation().map(|v| v.to_string()).unwrap_or_default(),
                    digits_string(&digits),
                    fmt_rational(&abs)
                ),
            })
        }
        PadicCommand::ProductFormula { value } => {
            let r = expr::evaluate(value)?;
            let terms = padic::product_formula_terms(&r)?;
            let product = padic::product_formula_check(&r)?;
            Ok(match ctx.format {
                Format::Json => pretty(&json!({
                    "value": fmt_rational(&r),
                    "places": terms
                        .iter()
                        .map(|(pl, a)| json!({ "place": pl.to_string(), "abs": fmt_rational(a) }))
                        .collect::<Vec<_>>(),
                    "product": fmt_rational(&product),
                })),
                Format::Csv => {
                    let mut s = String::from("place,abs\n");
                    for (pl, a) in &terms {
                        s.push_str(&format!("{pl},{}\n", fmt_rational(a)));
                    }
                    s.push_str(&format!("product,{}\n", fmt_rational(&product)));
                    s
                }
            })
        }
    }
}

fn cmd_reduce(ctx: &Ctx, point: &str) -> CliResult<String> {
    let z = point_arg("--point", point)?;
    let (w, g) = modsurface::reduce(&z);
    Ok(match ctx.format {
        Format::Json => pretty(&json!({
            "input": point_json(&z),
            "point": point_json(&w),
            "matrix": matrix_json(&g),
        })),
        Format::Csv => format!(
            "x,y,a,b,c,d\n{},{},{},{},{},{}\n",
            fmt_rational(&w.x()),
            fmt_rational(&w.y()),
            g.a,
            g.b,
            g.c,
            g.d
        ),
    })
}

fn render_multiset(format: Format, m: &Multiset) -> String {
    match format {
        Format::Json => pretty(&multiset_json(m)),
        Format::Csv => {
            let mut s = String::from("x,y,mult\n");
            multiset_csv(m, &mut s, "");
            s
        }
    }
}

fn cmd_neighbors(ctx: &Ctx, p: Option<u64>, point: &str, raw: bool) -> CliResult<String> {
    let p = prime_arg(p, ctx.cfg)?;
    let z = point_arg("--point", point)?;
    let m = if raw {
        let mut m = Multiset::new();
        for w in hecke::neighbors(&z, p)? {
            *m.entry(w).or_insert(0) += 1;
        }
        m
    } else {
        hecke::neighbors_reduced(&z, p)?
    };
    Ok(render_multiset(ctx.format, &m))
}

fn cmd_sphere(ctx: &Ctx, a: &args::SphereArgs) -> CliResult<String> {
    let z = point_arg("--point", &a.point)?;
    if a.raw && a.method != Method::Coset {
        return Err(usage("--raw: only available with --method coset"));
    }
    if a.order.is_some() && a.method == Method::Coset {
        return Err(usage("--order: only applies to the tree method"));
    }
    let order = a
        .order
        .as_deref()
        .map(|s| {
            s.split(',')
                .map(|t| t.trim().parse::<u64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| {
                    usage(format!(
                        "--order: expected comma-separated primes, got '{s}'"
                    ))
                })
        })
        .transpose()?;
    let tree = || -> CliResult<Multiset> {
        Ok(match &order {
            Some(o) => hecke::sphere_tree_ordered(&z, a.n, o)?.points,
            None => hecke::sphere_tree(&z, a.n)?.points,
        })
    };
    let coset = || -> CliResult<Multiset> { Ok(hecke::sphere_coset(&z, a.n)?.points) };
    match a.method {
        Method::Tree => Ok(render_multiset(ctx.format, &tree()?)),
        Method::Coset if a.raw => {
            let mut m = Multiset::new();
            for w in hecke::coset_images(&z, a.n, true)? {
                *m.entry(w).or_insert(0) += 1;
            }
            Ok(render_multiset(ctx.format, &m))
        }
        Method::Coset => Ok(render_multiset(ctx.format, &coset()?)),
        Method::Both => {
            let (t, c) = (tree()?, coset()?);
            Ok(match ctx.format {
                Format::Json => pretty(&json!({
                    "tree": multiset_json(&t),
                    "coset": multiset_json(&c),
                    "equal": t == c,
                })),
                Format::Csv => {
                    let mut s = String::from("method,x,y,mult\n");
                    multiset_csv(&t, &mut s, "tree,");
                    multiset_csv(&c, &mut s, "coset,");
                    s
                }
            })
        }
    }
}

fn cmd_tree(ctx: &Ctx, a: &args::TreeArgs) -> CliResult<String> {
    let p = prime_arg(a.p, ctx.cfg)?;
    match &a.command {
        TreeCommand::Sphere { n, center } => {
            let c = match center {
                Some(s) => vertex_arg(p, "--center", s)?,
                None => BTVertex::root(p)?,
            };
            let mut vs = bttree::bt_sphere(&c, *n);
            vs.sort();
            Ok(match ctx.format {
                Format::Json => pretty(&json!({
                    "prime": p,
                    "center": c.to_string(),
                    "n": n,
                    "count": vs.len(),
                    "vertices": vs.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                })),
                Format::Csv => {
                    let mut s = String::from("scale,shift\n");
                    for v in &vs {
                        s.push_str(&format!("{},{}\n", v.scale(), fmt_rational(v.shift())));
                    }
                    s
                }
            })
        }
        TreeCommand::Distance { v, w } => {
            let (v, w) = (vertex_arg(p, "--v", v)?, vertex_arg(p, "--w", w)?);
            let d = bttree::bt_distance(&v, &w)?;
            Ok(match ctx.format {
                Format::Json => pretty(&json!({
                    "prime": p,
                    "v": v.to_string(),
                    "w": w.to_string(),
                    "distance": d,
                })),
                Format::Csv => format!("v,w,distance\n\"{v}\",\"{w}\",{d}\n"),
            })
        }
    }
}

fn cmd_solenoid(ctx: &Ctx, a: &args::SolenoidArgs) -> CliResult<String> {
    let p = prime_arg(a.p, ctx.cfg)?;
    let SolenoidCommand::Orbit {
        steps,
        depth,
        base,
        fiber,
        period,
    } = &a.command;
    let pt = SolenoidPoint::canonicalize_with_level(
        &rational_arg("--base", base)?,
        &rational_arg("--fiber", fiber)?,
        p,
        ctx.precision,
        *period,
    )?;
    let hist = solenoid::cylinder_histogram(&pt, *depth, *steps)?;
    let uniform = solenoid::is_uniform(&hist, p, *depth);
    let orbit = pt.orbit(*steps);
    Ok(match ctx.format {
        Format::Json => pretty(&json!({
            "prime": p,
            "precision": ctx.precision,
            "period": fmt_rational(&pt.period()),
            "depth": depth,
            "steps": steps,
            "start": { "base": fmt_rational(pt.base()), "fiber": fmt_rational(pt.fiber_exact()) },
            "histogram": hist
                .iter()
                .map(|(k, c)| json!({ "cylinder": k.to_string(), "count": c }))
                .collect::<Vec<_>>(),
            "uniform": uniform,
            "orbit": orbit
                .iter()
                .map(|(t, q)| json!({
                    "time": fmt_rational(t),
                    "base": fmt_rational(q.base()),
                    "fiber": fmt_rational(q.fiber_exact()),
                    "fiber_digits": q.fiber_digits(),
                }))
                .collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = String::from("cylinder,count\n");
            for (k, c) in &hist {
                s.push_str(&format!("{k},{c}\n"));
            }
            s.push_str("\ntime,base,fiber_digits\n");
            for (t, q) in &orbit {
                s.push_str(&format!(
                    "{},{},{}\n",
                    fmt_rational(t),
                    fmt_rational(q.base()),
                    digits_string(&q.fiber_digits())
                ));
            }
            s
        }
    })
}

fn render_report(format: Format, r: &EquidistReport) -> String {
    match format {
        Format::Json => pretty(&json!({
            "center": point_json(&r.center),
            "test": r.test.to_string(),
            "max_abs_error": r.max_abs_error(),
            "rows": r.rows.iter().map(|row| json!({
                "N": row.n,
                "size": row.size,
                "hits": row.hits,
                "boundary_hits": row.boundary_hits,
                "empirical": fmt_rational(&row.empirical),
                "empirical_f64": row.empirical_f64(),
                "target": row.target,
                "abs_error": row.abs_error,
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = String::from("N,size,empirical,target,abs_error\n");
            for row in &r.rows {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.n,
                    row.size,
                    row.empirical_f64(),
                    row.target,
                    row.abs_error
                ));
            }
            s
        }
    }
}

fn cmd_equidist(ctx: &Ctx, a: &args::EquidistArgs) -> CliResult<String> {
    let z = point_arg("--point", &a.point)?;
    let radii = parse_radius_list(&a.n_list).map_err(|e| usage(format!("--N-list: {e}")))?;
    let f = parse_test_function(&a.test).map_err(|e| usage(format!("--test: {e}")))?;
    let report = equidist::convergence_table(&z, &radii, &f)?;
    Ok(render_report(ctx.format, &report))
}

fn dispatch(cli: &Cli, cfg: &Config) -> CliResult<String> {
    let ctx = Ctx {
        cfg,
        precision: cli.precision.unwrap_or(cfg.default_precision),
        format: cli.format.unwrap_or(cfg.default_format),
    };
    match &cli.command {
        Command::Padic(a) => cmd_padic(&ctx, a),
        Command::Reduce { point } => cmd_reduce(&ctx, point),
        Command::Neighbors { p, point, raw, .. } => cmd_neighbors(&ctx, *p, point, *raw),
        Command::Sphere(a) => cmd_sphere(&ctx, a),
        Command::Tree(a) => cmd_tree(&ctx, a),
        Command::Solenoid(a) => cmd_solenoid(&ctx, a),
        Command::Equidist(a) => cmd_equidist(&ctx, a),
    }
}

fn execute(
    cli: &Cli,
    env: &dyn Fn(&str) -> Option<String>,
) -> CliResult<(String, Option<std::path::PathBuf>)> {
    let cfg =
        Config::load(cli.config.as_deref(), env).map_err(|e| usage(format!("config: {e}")))?;
    let text = match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build()
            .map_err(|e| usage(format!("--threads: {e}")))?
            .install(|| dispatch(cli, &cfg))?,
        None => dispatch(cli, &cfg)?,
    };
    Ok((text, cli.out.as_deref().map(|p| cfg.resolve_output(p))))
}

fn write_file(path: &Path, text: &str) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)
}

/// Runs the command line with an explicit environment and output streams.
pub fn run_with<I, T>(
    argv: I,
    env: &dyn Fn(&str) -> Option<String>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    2
                }
            };
        }
    };
    match execute(&cli, env) {
        Ok((text, None)) => {
            let _ = stdout.write_all(text.as_bytes());
            0
        }
        Ok((text, Some(path))) => match write_file(&path, &text) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(stderr, "error: IoError: {}: {e}", path.display());
                1
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}

/// Runs the command line against the process environment and stdio.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env = |k: &str| std::env::var(k).ok();
    run_with(
        argv,
        &env,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(argv: &[&str]) -> (i32, String, String) {
        let env = |_: &str| None;
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["hecke"];
        full.extend_from_slice(argv);
        let code = run_with(full, &env, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn radius_lists() {
        assert_eq!(parse_radius_list("1,2, 6").unwrap(), vec![1, 2, 6]);
        assert_eq!(
            parse_radius_list("primes:12").unwrap(),
            vec![2, 3, 5, 7, 11]
        );
        assert_eq!(parse_radius_list("powers:2:20").unwrap(), vec![2, 4, 8, 16]);
        assert_eq!(parse_radius_list("powers:3:3").unwrap(), vec![3]);
        assert!(parse_radius_list("powers:1:9").is_err());
        assert!(parse_radius_list("primes:1").is_err());
        assert!(parse_radius_list("0,3").is_err());
        assert!(parse_radius_list("a").is_err());
    }

    #[test]
    fn test_functions() {
        assert_eq!(
            parse_test_function("ystrip:3/2").unwrap(),
            TestFunction::YStrip {
                c: rational::ratio(3, 2)
            }
        );
        assert!(matches!(
            parse_test_function("box:-1/2,1/2,1,2").unwrap(),
            TestFunction::Box { .. }
        ));
        assert!(parse_test_function("box:1,2").is_err());
        assert!(parse_test_function("disc:1").is_err());
    }

    #[test]
    fn exit_codes() {
        let (code, out, _) = call(&["reduce", "--point", "5/2,3/1"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"x\": \"-1/2\"") && out.contains("\"y\": \"3/1\""));

        let (code, _, err) = call(&["reduce", "--point", "5/2"]);
        assert_eq!(code, 2);
        assert!(err.contains("--point"));

        let (code, _, err) = call(&["neighbors", "--p", "4", "--point", "0,1"]);
        assert_eq!(code, 1);
        assert!(err.contains("NotPrime"));

        let (code, _, err) = call(&["reduce", "--point", "0,-1"]);
        assert_eq!(code, 1);
        assert!(err.contains("NotInUpperHalfPlane"));

        let (code, _, err) = call(&["sphere", "--point", "0,1"]);
        assert_eq!(code, 2);
        assert!(err.contains("--N"));

        let (code, _, err) = call(&["tree", "sphere", "--n", "2"]);
        assert_eq!(code, 2);
        assert!(err.contains("--p"));
    }

    #[test]
    fn product_formula_output() {
        let (code, out, _) = call(&["padic", "product-formula", "6/1"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["product"], "1/1");
        assert_eq!(v["places"].as_array().unwrap().len(), 3);
    }
}
