//! Command-line front end: build splines, verify properties, run convergence
//! sweeps, emit JSON/CSV artifacts.
//!
//! Exit codes: 0 success, 1 admissibility or verification failure, 2 usage or
//! parse errors. All randomized commands take `--seed` and default to a fixed
//! seed, and every artifact is written with 17 significant digits, so a given
//! configuration reproduces byte-identical output.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::error::{Error, Result};
use crate::funcs::FunctionSpec;
use crate::mono_builder::{build_spline, error_report, global_report, knot_geometry_report};
use crate::partition::Partition;
use crate::s3_builder::{build_s3, report_to_csv, s3_error_report};
use crate::verify::{check_3monotone_spline, check_function_3monotone, window_inequality_fuzz};

pub const DEFAULT_SEED: u64 = 20240915;

/// Round-trip-safe float formatting: 17 significant digits, '.' decimal.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Parser, Debug)]
#[command(
    name = "monospline",
    about = "Shape-preserving cubic spline approximation of 3-monotone functions",
    after_help = "FUNCTION SYNTAX:\n  Builtins: exp | sinh | x2sign | xplus3 | quartic | cubic(c3,c2,c1,c0)\n  \
                  Expressions over x with + - * / ^ (right-assoc), unary minus,\n  \
                  and calls exp, abs, sign, sinh, min, max. Example: \"x^2*sign(x)\"."
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Function to approximate (builtin name or expression in x).
    #[arg(short = 'f', long = "function", allow_hyphen_values = true)]
    function: String,

    /// Left endpoint.
    #[arg(short = 'a', default_value_t = -1.0, allow_hyphen_values = true)]
    a: f64,

    /// Right endpoint.
    #[arg(short = 'b', default_value_t = 1.0, allow_hyphen_values = true)]
    b: f64,

    /// Evaluation grid density.
    #[arg(long, default_value_t = 256)]
    grid: usize,

    /// Monotonicity tolerance (relative to max(1, ||s''||)).
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,

    /// Seed for randomized checks.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Report format for files written to the output directory.
    #[arg(long, value_parser = ["json", "csv"], default_value = "csv")]
    format: String,

    /// Output directory for artifacts; nothing is written without it.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the shape-preserving spline and report its errors.
    Build {
        #[command(flatten)]
        common: Common,
        /// Number of partition intervals.
        #[arg(short = 'n')]
        n: usize,
    },
    /// Run the full verification battery on one configuration.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'n')]
        n: usize,
    },
    /// Convergence sweep over several n values.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated n values, e.g. 8,16,32,64.
        #[arg(long = "n-list", value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
    },
    /// Fuzz the divided-difference window inequalities.
    Lemma1 {
        #[command(flatten)]
        common: Common,
        /// Number of random equidistant windows.
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
    },
    /// Contrast the constrained spline with plain interpolation.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'n')]
        n: usize,
    },
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::InvalidArgument(_) => 2,
        _ => 1,
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Build { common, n } => cmd_build(&common, n),
        Command::Verify { common, n } => cmd_verify(&common, n),
        Command::Sweep { common, n_list } => cmd_sweep(&common, &n_list),
        Command::Lemma1 { common, trials } => cmd_lemma1(&common, trials),
        Command::Compare { common, n } => cmd_compare(&common, n),
    }
}

fn setup(common: &Common, n: usize) -> Result<(FunctionSpec, Partition)> {
    let spec = FunctionSpec::parse(&common.function)?;
    let p = Partition::equidistant(common.a, common.b, n)?;
    if common.grid < 32 {
        return Err(Error::invalid("--grid must be at least 32"));
    }
    Ok((spec, p))
}

fn write_artifact(common: &Common, name: &str, contents: &str) -> Result<()> {
    if let Some(dir) = &common.output {
        fs::create_dir_all(dir)?;
        fs::write(dir.join(name), contents)?;
    }
    Ok(())
}

fn cmd_build(common: &Common, n: usize) -> Result<i32> {
    let (spec, p) = setup(common, n)?;
    let f = spec.evaluator();
    let s = build_spline(&f, &p)?;

    let report = check_3monotone_spline(&s.third_diff_form, common.tol);
    let verdict = if report.pass { "PASS" } else { "FAIL" };
    let (sup, omega, ratio) = global_report(&f, &s, common.grid.max(1024))?;
    let rows = error_report(&f, &s, common.grid)?;

    // artifacts first: a consumer closing stdout early must not lose them
    let mut grid_csv = String::from("x,f,s,err\n");
    for i in 0..=common.grid {
        let x = p.a() + (p.b() - p.a()) * i as f64 / common.grid as f64;
        let (fx, sx) = (f(x), s.eval_unchecked(x));
        grid_csv.push_str(&format!(
            "{},{},{},{}\n",
            fmt_float(x),
            fmt_float(fx),
            fmt_float(sx),
            fmt_float(fx - sx)
        ));
    }
    write_artifact(common, "grid.csv", &grid_csv)?;
    let spline_json = json!({
        "function": spec.describe(),
        "spline": s.to_json(),
        "verdict": verdict,
        "sup_error": sup,
        "omega4": omega,
    });
    write_artifact(
        common,
        "spline.json",
        &serde_json::to_string_pretty(&spline_json).expect("serializable"),
    )?;
    if common.format == "csv" {
        write_artifact(common, "report.csv", &report_to_csv(&rows))?;
    } else {
        let rows_json: Vec<_> = rows
            .iter()
            .map(|r| {
                json!({"j": r.j, "x_j": r.x_j, "sup_error": r.sup_error,
                       "omega4": r.omega4, "ratio": r.ratio})
            })
            .collect();
        write_artifact(
            common,
            "report.json",
            &serde_json::to_string_pretty(&json!(rows_json)).expect("serializable"),
        )?;
    }

    println!("function: {}", spec.describe());
    println!(
        "interval: [{}, {}], n = {}, knots = {}",
        p.a(),
        p.b(),
        n,
        s.plan.k() + 1
    );
    println!("max |f - s| = {sup:.3e}   omega4(f, h) = {omega:.3e}   ratio = {ratio:.3}");
    println!("3-monotonicity: {verdict}");
    println!("per-interval report (j, x_j, sup_error, omega4, ratio):");
    for r in &rows {
        println!(
            "  {:3} {:>10.6} {:.3e} {:.3e} {:>8.3}",
            r.j, r.x_j, r.sup_error, r.omega4, r.ratio
        );
    }

    Ok(if report.pass { 0 } else { 1 })
}

fn cmd_verify(common: &Common, n: usize) -> Result<i32> {
    let (spec, p) = setup(common, n)?;
    let f = spec.evaluator();
    let mut failures = 0usize;
    let mut line = |name: &str, pass: bool, detail: String| {
        println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            failures += 1;
        }
    };

    let screen = check_function_3monotone(&f, (p.a(), p.b()), 1024, common.seed);
    line(
        "input-3-monotone",
        screen,
        "randomized third-divided-difference screen".into(),
    );

    let s = build_spline(&f, &p)?;
    let report = check_3monotone_spline(&s.third_diff_form, common.tol);
    line(
        "spline-3-monotone",
        report.pass,
        format!(
            "worst jump {:?}, worst slope {:?}",
            report.worst_jump.map(|(k, l, r)| (k, r - l)),
            report.worst_slope.map(|(_, sl)| sl)
        ),
    );

    let mut worst = 0.0f64;
    for i in 0..=common.grid {
        let x = p.a() + (p.b() - p.a()) * i as f64 / common.grid as f64;
        let (v23, v24) = (
            s.fourth_diff_form.eval_unchecked(x),
            s.third_diff_form.eval_unchecked(x),
        );
        worst = worst.max((v23 - v24).abs() / v24.abs().max(1.0));
    }
    line(
        "representation-identity",
        worst <= 1e-9,
        format!("max relative gap {worst:.3e}"),
    );

    if p.is_equidistant() {
        let h = p.nominal_h();
        let rows = knot_geometry_report(&s, &p)?;
        let ok = rows.iter().all(|r| {
            r.distance_to_partition <= 1.5 * h + 1e-12
                && r.gap_prev.is_none_or(|g| g >= 0.5 * h - 1e-12)
        });
        line(
            "knot-geometry",
            ok,
            format!("{} knots within 3h/2, gaps >= h/2", rows.len()),
        );
    }

    let endpoints_ok = (s.eval_unchecked(p.a()) - f(p.a())).abs() <= 1e-9
        && (s.eval_unchecked(p.b()) - f(p.b())).abs() <= 1e-9;
    line(
        "endpoint-interpolation",
        endpoints_ok,
        "s(a) = f(a), s(b) = f(b)".into(),
    );

    Ok(if failures == 0 { 0 } else { 1 })
}

/// One row of a convergence sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub n: usize,
    pub h: f64,
    pub sup_error: f64,
    pub omega4: f64,
    pub ratio: f64,
    /// Empirical order against the previous row; `None` for the first row,
    /// NaN-free "exact" rows are flagged separately.
    pub order: Option<f64>,
    pub exact: bool,
}

/// Builds the spline for every `n` (fanned out per n) and measures errors.
/// Rows come back in the order of `ns` regardless of completion order.
pub fn sweep_rows(
    spec: &FunctionSpec,
    a: f64,
    b: f64,
    ns: &[usize],
    grid: usize,
) -> Result<Vec<SweepRow>> {
    let measured: Vec<Result<(f64, f64, f64)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = ns
            .iter()
            .map(|&n| {
                scope.spawn(move || {
                    let p = Partition::equidistant(a, b, n)?;
                    let f = spec.evaluator();
                    let s = build_spline(&f, &p)?;
                    global_report(&f, &s, grid)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep thread panicked"))
            .collect()
    });

    let mut rows: Vec<SweepRow> = Vec::with_capacity(ns.len());
    for (&n, m) in ns.iter().zip(measured) {
        let (sup, omega, ratio) = m?;
        let h = (b - a) / n as f64;
        let exact = sup <= 1e-13;
        let order = rows.last().and_then(|prev: &SweepRow| {
            if exact || prev.exact {
                None
            } else {
                Some((prev.sup_error / sup).ln() / (prev.h / h).ln())
            }
        });
        rows.push(SweepRow {
            n,
            h,
            sup_error: sup,
            omega4: omega,
            ratio,
            order,
            exact,
        });
    }
    Ok(rows)
}

pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("n,h,sup_error,omega4,ratio,order\n");
    for r in rows {
        let order = if r.exact {
            "exact".to_string()
        } else {
            r.order.map(fmt_float).unwrap_or_default()
        };
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.n,
            fmt_float(r.h),
            fmt_float(r.sup_error),
            fmt_float(r.omega4),
            fmt_float(r.ratio),
            order
        ));
    }
    out
}

fn cmd_sweep(common: &Common, ns: &[usize]) -> Result<i32> {
    if ns.len() < 2 {
        return Err(Error::invalid("sweep needs at least two n values"));
    }
    let spec = FunctionSpec::parse(&common.function)?;
    if !(common.a < common.b) {
        return Err(Error::invalid("need a < b"));
    }
    let rows = sweep_rows(&spec, common.a, common.b, ns, common.grid.max(2048))?;
    println!("function: {}", spec.describe());
    println!(
        "{:>6} {:>12} {:>12} {:>12} {:>8} {:>8}",
        "n", "h", "sup_err", "omega4", "ratio", "order"
    );
    for r in &rows {
        let order = if r.exact {
            "exact".to_string()
        } else {
            r.order.map(|o| format!("{o:.2}")).unwrap_or_default()
        };
        println!(
            "{:>6} {:>12.4e} {:>12.4e} {:>12.4e} {:>8.3} {:>8}",
            r.n, r.h, r.sup_error, r.omega4, r.ratio, order
        );
    }
    write_artifact(common, "sweep.csv", &sweep_to_csv(&rows))?;
    Ok(0)
}

fn cmd_lemma1(common: &Common, trials: usize) -> Result<i32> {
    if trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    let spec = FunctionSpec::parse(&common.function)?;
    let f = spec.evaluator();
    if !(common.a < common.b) {
        return Err(Error::invalid("need a < b"));
    }
    if !check_function_3monotone(&f, (common.a, common.b), 1024, common.seed) {
        eprintln!(
            "refused: {} does not pass the 3-monotonicity screen on [{}, {}]",
            spec.describe(),
            common.a,
            common.b
        );
        return Ok(1);
    }
    let (violations, min_slack) =
        window_inequality_fuzz(&f, (common.a, common.b), trials, common.seed)?;
    println!(
        "{} windows checked, {} violations, minimum slack {:.3e}",
        trials, violations, min_slack
    );
    Ok(if violations == 0 { 0 } else { 1 })
}

fn cmd_compare(common: &Common, n: usize) -> Result<i32> {
    let (spec, p) = setup(common, n)?;
    let f = spec.evaluator();

    let s3 = build_s3(&f, &p)?;
    let mono = build_spline(&f, &p)?;

    let grid = common.grid.max(1024);
    let mut sup_s3 = 0.0f64;
    let mut sup_mono = 0.0f64;
    for i in 0..=grid {
        let x = p.a() + (p.b() - p.a()) * i as f64 / grid as f64;
        sup_s3 = sup_s3.max((f(x) - s3.piecewise.eval_unchecked(x)).abs());
        sup_mono = sup_mono.max((f(x) - mono.eval_unchecked(x)).abs());
    }
    let s3_pass = check_3monotone_spline(&s3.third_diff_form, common.tol).pass;
    let mono_pass = check_3monotone_spline(&mono.third_diff_form, common.tol).pass;

    println!("function: {}, n = {}", spec.describe(), n);
    println!("{:<16} {:>12} {:>12}", "spline", "sup error", "3-monotone");
    println!(
        "{:<16} {:>12.4e} {:>12}",
        "interpolatory",
        sup_s3,
        if s3_pass { "PASS" } else { "FAIL" }
    );
    println!(
        "{:<16} {:>12.4e} {:>12}",
        "constrained",
        sup_mono,
        if mono_pass { "PASS" } else { "FAIL" }
    );

    let csv = format!(
        "spline,sup_error,monotone\ninterpolatory,{},{}\nconstrained,{},{}\n",
        fmt_float(sup_s3),
        s3_pass,
        fmt_float(sup_mono),
        mono_pass
    );
    write_artifact(common, "compare.csv", &csv)?;
    // also make the per-interval interpolation report available
    if common.output.is_some() {
        let rows = s3_error_report(&f, &p, common.grid)?;
        write_artifact(common, "s3_report.csv", &report_to_csv(&rows))?;
    }
    Ok(0)
}
