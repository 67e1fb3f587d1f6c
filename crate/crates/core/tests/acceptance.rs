//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Tolerances and time budgets are fixed constants below.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use aromatic::ark;
use aromatic::checks::{self, EquivarianceTarget, Problem};
use aromatic::eldiff;
use aromatic::graph::{enumerate_trees, tree_compositions, Composition};
use aromatic::polyfield::{random_field_with, PolyVectorField};
use aromatic::series;

const SEED: u64 = 20240917;

const EQUIVARIANCE_TOL: f64 = 1e-8;
const COLLAPSE_TOL: f64 = 1e-9;
const DEGENERACY_TOL: f64 = 1e-8;
const DEGENERACY_LINEAR_TOL: f64 = 1e-10;
const DIVFREE_TOL: f64 = 1e-6;
const EULER_STEP_TOL: f64 = 1e-12;
const ORDER_TOL: f64 = 0.1;
const ORACLE_TOL: f64 = 1e-10;

const CENSUS_BUDGET: Duration = Duration::from_secs(1);
const EQUIVARIANCE_BUDGET: Duration = Duration::from_secs(30);
const COLLAPSE_BUDGET: Duration = Duration::from_secs(10);
const SURJECTIVITY_BUDGET: Duration = Duration::from_secs(60);

/// Name, runner and optional time budget.
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

/// Compositions of the aromatic trees of each order and how many trees
/// share each one, as listed in the census of trees up to order four.
fn census_table() -> BTreeMap<usize, Vec<(&'static str, usize)>> {
    BTreeMap::from([
        (1, vec![("(1)", 1)]),
        (2, vec![("(1,1)", 2)]),
        (3, vec![("(1,2)", 4), ("(2,0,1)", 2)]),
        (4, vec![("(1,3)", 7), ("(2,1,1)", 7), ("(3,0,0,1)", 2)]),
    ])
}

fn census() -> Outcome {
    let mut problems = Vec::new();
    let counts: Vec<usize> = (1..=4).map(|n| enumerate_trees(n).unwrap().len()).collect();
    if counts != [1, 2, 6, 16] {
        problems.push(format!("counts {counts:?}"));
    }
    for (order, rows) in census_table() {
        let mut seen: BTreeMap<Composition, usize> = BTreeMap::new();
        for t in enumerate_trees(order).unwrap() {
            let kappa = t.to_forest().composition();
            let derived = kappa.derived();
            let expected_derived: Vec<usize> = kappa
                .counts()
                .iter()
                .enumerate()
                .map(|(j, c)| j * c)
                .collect();
            if derived != Composition::new(expected_derived) {
                problems.push(format!("{t}: derived {derived}"));
            }
            *seen.entry(kappa).or_default() += 1;
        }
        let expected: BTreeMap<Composition, usize> =
            rows.iter().map(|(k, n)| (k.parse().unwrap(), *n)).collect();
        if seen != expected {
            problems.push(format!("order {order}: {seen:?}"));
        }
    }
    let two_one_one: usize = enumerate_trees(4)
        .unwrap()
        .iter()
        .filter(|t| {
            t.to_forest().composition() == "(2,1,1)".parse().unwrap()
                && t.to_forest().cycle_nodes().iter().all(|c| !c)
        })
        .count();
    if two_one_one != 2 {
        problems.push(format!("(2,1,1) classical trees {two_one_one}"));
    }
    let example: Composition = "(3,1,2)".parse().unwrap();
    if example.derived().to_string() != "(0,1,4)" {
        problems.push(format!("(3,1,2)' = {}", example.derived()));
    }
    Outcome::new(
        problems.is_empty(),
        if problems.is_empty() {
            "counts 1,2,6,16; compositions match; (3,1,2)' = (0,1,4)".to_string()
        } else {
            problems.join("; ")
        },
    )
}

fn equivariance() -> Outcome {
    let target = EquivarianceTarget::trees_up_to(4);
    let n_trees = match &target {
        EquivarianceTarget::Forests(f) => f.len(),
        EquivarianceTarget::Method { .. } => 0,
    };
    let ok = checks::check_equivariance(&target, &[1, 2, 3], 50, EQUIVARIANCE_TOL, SEED);
    let control = checks::check_equivariance_negative_control(
        &target,
        &[1, 2, 3],
        50,
        EQUIVARIANCE_TOL,
        SEED,
    );
    Outcome::new(
        n_trees == 25 && ok.pass && control.pass,
        format!(
            "{n_trees} trees, max residual {:e}; negative control residual {:e}",
            ok.max_residual, control.max_residual
        ),
    )
}

fn collapse() -> Outcome {
    let r = checks::check_collapse_1d(5, 20, SEED);
    Outcome::new(
        r.pass && r.tol == COLLAPSE_TOL,
        format!("max residual {:e}", r.max_residual),
    )
}

fn degeneracy() -> Outcome {
    let r = checks::check_degeneracy_2d(50, SEED);
    let mut linear_max = 0.0f64;
    for trial in 0..20 {
        let mut rng = checks::trial_rng(SEED, 1000 + trial);
        let f = random_field_with(2, 1, &mut rng);
        let x = checks::random_point(2, &mut rng);
        let (res, scale) = series::degeneracy_combination(&f, &x).unwrap();
        let m = res.iter().map(|v| v.abs()).fold(0.0, f64::max);
        linear_max = linear_max.max(m / (1.0 + scale));
    }
    let control = checks::check_degeneracy_3d_control(1, SEED);
    Outcome::new(
        r.pass && r.tol == DEGENERACY_TOL && linear_max <= DEGENERACY_LINEAR_TOL && control.pass,
        format!(
            "d=2 residual {:e}, linear {:e}, d=3 residual {:e}",
            r.max_residual, linear_max, control.max_residual
        ),
    )
}

fn divfree() -> Outcome {
    let r = checks::check_divfree(20, 20, &[2, 3], SEED);
    Outcome::new(
        r.pass && r.tol == DIVFREE_TOL,
        format!("max scaled divergence {:e}", r.max_residual),
    )
}

fn orbit_table() -> Outcome {
    let r = checks::check_table3();
    let lines: Vec<String> = checks::table3_lines()
        .iter()
        .map(|l| l.replace('\t', " -> "))
        .collect();
    Outcome::new(r.pass, lines.join(", "))
}

fn surjectivity() -> Outcome {
    let compositions: usize = (1..=5).map(|n| tree_compositions(n).len()).sum();
    let r = checks::check_surjectivity(5);
    Outcome::new(
        r.pass && r.trials == compositions,
        format!("{} compositions, {} mismatches", r.trials, r.max_residual),
    )
}

fn aromatic_euler() -> Outcome {
    let mut problems = Vec::new();
    let euler = ark::builtin("euler").unwrap();
    let zero = ark::builtin("aromatic-euler(0)").unwrap();
    let mut rng = checks::trial_rng(SEED, 7);
    for d in 1..=3 {
        for _ in 0..10 {
            let f = random_field_with(d, 3, &mut rng);
            let y = checks::random_point(d, &mut rng);
            let a = ark::ark_step(&euler, &f, &y, 0.1).unwrap();
            let b = ark::ark_step(&zero, &f, &y, 0.1).unwrap();
            if a.iter().zip(&b).any(|(p, q)| p.to_bits() != q.to_bits()) {
                problems.push(format!("α=0 differs from Euler at d={d}"));
            }
        }
    }
    let square = Problem::Riccati.field();
    let y1 = ark::ark_step(&ark::aromatic_euler(1.0), &square, &[1.0], 0.1).unwrap()[0];
    if (y1 - 1.12).abs() > EULER_STEP_TOL {
        problems.push(format!("hand step {y1}"));
    }
    let slope = checks::observed_order(&ark::aromatic_euler(1.0), Problem::Linear, 3..=9).unwrap();
    if (slope - 1.0).abs() > ORDER_TOL {
        problems.push(format!("slope {slope}"));
    }
    let target =
        EquivarianceTarget::method("aromatic-euler(1)", checks::METHOD_EQUIVARIANCE_H).unwrap();
    let eq = checks::check_equivariance(&target, &[1, 2, 3], 50, EQUIVARIANCE_TOL, SEED);
    if !eq.pass {
        problems.push(format!("method equivariance {:e}", eq.max_residual));
    }
    Outcome::new(
        problems.is_empty(),
        if problems.is_empty() {
            format!(
                "bitwise α=0; step {y1}; slope {slope:.4}; equivariance {:e}",
                eq.max_residual
            )
        } else {
            problems.join("; ")
        },
    )
}

/// Hand-written `f`, `f'f`, `f''(f,f)` and `f'f'f` from polynomial partials.
fn oracle(tree: &str, f: &PolyVectorField, x: &[f64]) -> Vec<f64> {
    let d = f.dim();
    let fx = f.eval(x).unwrap();
    let jac = |k: usize, i: usize| f.partial(k, &[i]).unwrap().eval(x).unwrap();
    let hess = |k: usize, i: usize, j: usize| f.partial(k, &[i, j]).unwrap().eval(x).unwrap();
    let jf: Vec<f64> = (0..d)
        .map(|k| (0..d).map(|i| jac(k, i) * fx[i]).sum())
        .collect();
    match tree {
        "[]" => fx,
        "[[]]" => jf,
        "[[][]]" => (0..d)
            .map(|k| {
                let mut s = 0.0;
                for i in 0..d {
                    for j in 0..d {
                        s += hess(k, i, j) * fx[i] * fx[j];
                    }
                }
                s
            })
            .collect(),
        "[[[]]]" => (0..d)
            .map(|k| (0..d).map(|i| jac(k, i) * jf[i]).sum())
            .collect(),
        _ => unreachable!(),
    }
}

fn oracle_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    for d in [2, 3] {
        for trial in 0..50 {
            let mut rng = checks::trial_rng(SEED, (100 * d + trial) as u64);
            let f = random_field_with(d, 3, &mut rng);
            let x = checks::random_point(d, &mut rng);
            for tree in ["[]", "[[]]", "[[][]]", "[[[]]]"] {
                let got = eldiff::eval_vector(&tree.parse().unwrap(), &f, &x).unwrap();
                let want = oracle(tree, &f, &x);
                worst = worst.max(checks::relative_residual(&got, &want));
            }
        }
    }
    Outcome::new(worst <= ORACLE_TOL, format!("max residual {worst:e}"))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("tree census", census, Some(CENSUS_BUDGET)),
        (
            "affine equivariance",
            equivariance,
            Some(EQUIVARIANCE_BUDGET),
        ),
        ("collapse over R", collapse, Some(COLLAPSE_BUDGET)),
        ("planar degeneracy", degeneracy, None),
        ("divergence-free combination", divfree, None),
        ("orbit table for (2,0,1)", orbit_table, None),
        (
            "permutation surjectivity",
            surjectivity,
            Some(SURJECTIVITY_BUDGET),
        ),
        ("aromatic Euler", aromatic_euler, None),
        ("elementary differential oracles", oracle_equivalence, None),
    ];
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = budget.map_or(true, |b| elapsed <= b);
        let pass = outcome.pass && in_time;
        if !pass {
            failures += 1;
        }
        let budget_note = budget.map_or(String::new(), |b| format!(" / {:.0?}", b));
        println!(
            "ACCEPTANCE {} {} {name}: {} [{:.3?}{budget_note}]",
            i + 1,
            if pass { "pass" } else { "fail" },
            outcome.detail,
            elapsed,
        );
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
