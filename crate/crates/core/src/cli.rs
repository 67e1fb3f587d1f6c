//! The `aromatic` command line.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage error, 3 unreadable or
//! malformed input file, 4 evaluation error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::ark::{self, AromaticTableau};
use crate::checks::{self, CheckReport, EquivarianceTarget, Problem};
use crate::eldiff;
use crate::graph::{enumerate_trees, AromaticForest};
use crate::polyfield::PolyVectorField;
use crate::series::{self, BSeriesCoefficients};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BAD_FILE: i32 = 3;
pub const EXIT_EVAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "aromatic",
    version,
    about = "Aromatic trees, elementary differentials and aromatic Runge-Kutta methods"
)]
pub struct CommandConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the aromatic trees of one order in canonical order.
    Enumerate {
        #[arg(long)]
        order: usize,
    },
    /// Evaluate the elementary differential of an aromatic tree.
    Eldiff {
        #[arg(long)]
        tree: String,
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        point: String,
    },
    /// Evaluate a rootless forest (a product of aromas) to a scalar.
    Aroma {
        #[arg(long)]
        tree: String,
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        point: String,
    },
    /// Evaluate a truncated aromatic B-series.
    Series {
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 1.0)]
        h: f64,
        /// Truncation order; defaults to the largest tree in the coefficients.
        #[arg(long)]
        order: Option<usize>,
    },
    /// Integrate with a builtin method or a tableau JSON file; prints the trajectory.
    Integrate {
        #[arg(long)]
        method: String,
        #[arg(long)]
        field: PathBuf,
        /// Initial value.
        #[arg(long)]
        point: String,
        #[arg(long)]
        h: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Run randomized property checks.
    Check {
        #[arg(value_enum)]
        which: CheckKind,
        #[command(flatten)]
        opts: CheckOptions,
    },
    /// Print the Einstein-summation expression of a forest.
    PrintIndex {
        #[arg(long)]
        tree: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Equivariance,
    Collapse1d,
    Degeneracy2d,
    Divfree,
    Table3,
    Order,
    All,
}

#[derive(Debug, Clone, clap::Args)]
pub struct CheckOptions {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long)]
    pub tree: Option<String>,
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub h: Option<f64>,
}

/// A failure with its exit code and one-line diagnostic.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn file(path: &Path, message: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_BAD_FILE,
            message: format!("{}: {message}", path.display()),
        }
    }

    fn eval(message: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_EVAL,
            message: message.to_string(),
        }
    }
}

type CliResult = Result<i32, Failure>;

/// Runs the command line `args` (including the program name), writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let config = match CommandConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&config.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Space-separated shortest round-trip decimals.
pub fn format_vector(v: &[f64]) -> String {
    v.iter()
        .map(|x| format!("{x}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn parse_point(csv: &str) -> Result<Vec<f64>, String> {
    csv.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| format!("invalid coordinate {:?} in --point", s.trim()))
        })
        .collect()
}

fn point(csv: &str) -> Result<Vec<f64>, Failure> {
    parse_point(csv).map_err(Failure::usage)
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::file(path, e))
}

fn load_field(path: &Path) -> Result<PolyVectorField, Failure> {
    PolyVectorField::from_json(&read_file(path)?).map_err(|e| Failure::file(path, e))
}

fn forest(text: &str) -> Result<AromaticForest, Failure> {
    text.parse()
        .map_err(|e| Failure::usage(format!("--tree {text:?}: {e}")))
}

/// Builtin name, or a path to a tableau JSON file.
fn resolve_method(name: &str, alpha: Option<f64>) -> Result<AromaticTableau, Failure> {
    let name = name.trim();
    if let Some(a) = alpha {
        if name != "aromatic-euler" {
            let why = if name.starts_with("aromatic-euler(") {
                "the method name already carries α"
            } else {
                "it only applies to aromatic-euler"
            };
            return Err(Failure::usage(format!(
                "--alpha conflicts with --method {name}: {why}"
            )));
        }
        return Ok(ark::aromatic_euler(a));
    }
    match ark::builtin(name) {
        Ok(t) => Ok(t),
        Err(_) if Path::new(name).is_file() => {
            let path = Path::new(name);
            AromaticTableau::from_json(&read_file(path)?).map_err(|e| Failure::file(path, e))
        }
        Err(e) => Err(Failure::usage(format!(
            "{e}; builtins are {}",
            ark::BUILTIN_METHODS.join(", ")
        ))),
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_EVAL,
        message: format!("write failed: {e}"),
    }
}

fn execute(cmd: &Command, out: &mut dyn Write) -> CliResult {
    match cmd {
        Command::Enumerate { order } => {
            let trees = enumerate_trees(*order).map_err(|e| Failure::usage(e.to_string()))?;
            for t in trees {
                writeln!(out, "{t}").map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Eldiff {
            tree,
            field,
            point: p,
        } => {
            let t = forest(tree)?;
            let f = load_field(field)?;
            let x = point(p)?;
            let v = eldiff::eval_vector(&t, &f, &x).map_err(Failure::eval)?;
            writeln!(out, "{}", format_vector(&v)).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Aroma {
            tree,
            field,
            point: p,
        } => {
            let t = forest(tree)?;
            let f = load_field(field)?;
            let x = point(p)?;
            let v = eldiff::eval_scalar(&t, &f, &x).map_err(Failure::eval)?;
            writeln!(out, "{v}").map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Series {
            coeffs,
            field,
            point: p,
            h,
            order,
        } => {
            let b = BSeriesCoefficients::parse_text(&read_file(coeffs)?)
                .map_err(|e| Failure::file(coeffs, e))?;
            let f = load_field(field)?;
            let x = point(p)?;
            let order = order.unwrap_or_else(|| b.max_order());
            let v = series::eval_series(&b, &f, &x, *h, order).map_err(Failure::eval)?;
            writeln!(out, "{}", format_vector(&v)).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Integrate {
            method,
            field,
            point: p,
            h,
            steps,
            alpha,
        } => {
            let t = resolve_method(method, *alpha)?;
            let f = load_field(field)?;
            let y0 = point(p)?;
            let traj = ark::integrate(&t, &f, &y0, *h, *steps).map_err(Failure::eval)?;
            for y in traj {
                writeln!(out, "{}", format_vector(&y)).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Check { which, opts } => run_checks(*which, opts, out),
        Command::PrintIndex { tree } => {
            let t = forest(tree)?;
            writeln!(out, "{}", eldiff::index_string(&t)).map_err(io)?;
            Ok(EXIT_OK)
        }
    }
}

fn dims(opts: &CheckOptions, default: &[usize]) -> Result<Vec<usize>, Failure> {
    match opts.dim {
        Some(0) => Err(Failure::usage("--dim must be at least 1")),
        Some(d) => Ok(vec![d]),
        None => Ok(default.to_vec()),
    }
}

fn trials(opts: &CheckOptions, default: usize) -> Result<usize, Failure> {
    match opts.trials {
        Some(0) => Err(Failure::usage("--trials must be at least 1")),
        Some(t) => Ok(t),
        None => Ok(default),
    }
}

fn reject(flag: &str, set: bool, which: CheckKind) -> Result<(), Failure> {
    if set {
        Err(Failure::usage(
            format!("{flag} is not used by check {which:?}").to_lowercase(),
        ))
    } else {
        Ok(())
    }
}

fn run_checks(which: CheckKind, opts: &CheckOptions, out: &mut dyn Write) -> CliResult {
    let seed = opts.seed;
    if opts.alpha.is_some() && opts.method.is_none() {
        return Err(Failure::usage("--alpha requires --method aromatic-euler"));
    }
    let mut reports: Vec<CheckReport> = Vec::new();
    match which {
        CheckKind::Equivariance => {
            if opts.tree.is_some() && opts.method.is_some() {
                return Err(Failure::usage("--tree and --method are mutually exclusive"));
            }
            let tol = opts.tol.unwrap_or(checks::EQUIVARIANCE_TOL);
            let ds = dims(opts, &[1, 2, 3])?;
            let n = trials(opts, 50)?;
            if let Some(m) = &opts.method {
                reject("--order", opts.order.is_some(), which)?;
                let tableau = resolve_method(m, opts.alpha)?;
                let target = EquivarianceTarget::Method {
                    name: m.clone(),
                    tableau,
                    h: opts.h.unwrap_or(checks::METHOD_EQUIVARIANCE_H),
                };
                reports.push(checks::check_equivariance(&target, &ds, n, tol, seed));
            } else {
                reject("--h", opts.h.is_some(), which)?;
                let target = match &opts.tree {
                    Some(t) => {
                        reject("--order", opts.order.is_some(), which)?;
                        EquivarianceTarget::Forests(vec![forest(t)?])
                    }
                    None => {
                        let order = opts.order.unwrap_or(4);
                        series::trees_up_to(order).map_err(|e| Failure::usage(e.to_string()))?;
                        EquivarianceTarget::trees_up_to(order)
                    }
                };
                reports.push(checks::check_equivariance(&target, &ds, n, tol, seed));
                reports.push(checks::check_equivariance_negative_control(
                    &target, &ds, n, tol, seed,
                ));
            }
        }
        CheckKind::Collapse1d => {
            let order = opts.order.unwrap_or(5);
            series::trees_up_to(order).map_err(|e| Failure::usage(e.to_string()))?;
            reports.push(retol(
                checks::check_collapse_1d(order, trials(opts, 20)?, seed),
                opts.tol,
            ));
        }
        CheckKind::Degeneracy2d => {
            let n = trials(opts, 50)?;
            reports.push(retol(checks::check_degeneracy_2d(n, seed), opts.tol));
            reports.push(retol(
                checks::check_degeneracy_3d_control(n.min(10), seed),
                opts.tol,
            ));
        }
        CheckKind::Divfree => {
            let ds = dims(opts, &[2, 3])?;
            reports.push(retol(
                checks::check_divfree(trials(opts, 20)?, 20, &ds, seed),
                opts.tol,
            ));
        }
        CheckKind::Table3 => {
            for line in checks::table3_lines() {
                writeln!(out, "{line}").map_err(io)?;
            }
            reports.push(checks::check_table3());
            reports.push(checks::check_surjectivity(opts.order.unwrap_or(5)));
        }
        CheckKind::Order => {
            let methods: Vec<String> = match &opts.method {
                Some(m) => vec![m.clone()],
                None => ["euler", "aromatic-euler(1)", "rk4", "implicit-midpoint"]
                    .map(String::from)
                    .to_vec(),
            };
            for m in methods {
                // validates --alpha against the name
                resolve_method(&m, opts.alpha)?;
                let name = match opts.alpha {
                    Some(a) => format!("aromatic-euler({a})"),
                    None => m,
                };
                let exps = checks::default_exponents(&name);
                reports.push(retol(
                    checks::check_order(&name, Problem::Linear, exps),
                    opts.tol,
                ));
            }
        }
        CheckKind::All => {
            reports = checks::check_all(seed);
            if let Some(t) = opts.tol {
                reports = reports.into_iter().map(|r| retol(r, Some(t))).collect();
            }
        }
    }
    let mut all_pass = true;
    for r in &reports {
        all_pass &= r.pass;
        writeln!(out, "{r}").map_err(io)?;
    }
    Ok(if all_pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn retol(r: CheckReport, tol: Option<f64>) -> CheckReport {
    match tol {
        Some(t) => CheckReport::with_expect(r.name, r.trials, r.max_residual, t, r.seed, r.expect),
        None => r,
    }
}
