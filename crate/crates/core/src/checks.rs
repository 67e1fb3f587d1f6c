//! Randomized property checks producing reproducible pass/fail reports.
//!
//! Each trial draws from its own ChaCha stream selected by `(seed, trial)`,
//! so a report depends only on its parameters.

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ark::{self, AromaticTableau};
use crate::eldiff;
use crate::graph::{
    enumerate_trees, tree_compositions, trees_by_composition, AromaticForest, Composition,
};
use crate::polyfield::{random_field_with, AffineMap, PolyVectorField};
use crate::series::{self, BSeriesCoefficients};
use crate::tensormap::{orbit_classes, Permutation};

pub const EQUIVARIANCE_TOL: f64 = 1e-8;
pub const COLLAPSE_TOL: f64 = 1e-9;
pub const DEGENERACY_TOL: f64 = 1e-8;
pub const DIVFREE_TOL: f64 = 1e-6;
pub const FD_STEP: f64 = 1e-5;
/// Random affine maps are redrawn until their condition number is at most this.
pub const MAX_AFFINE_CONDITION: f64 = 10.0;

/// What a report asserts about its residual.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expect {
    /// The identity holds: residual at most the tolerance.
    WithinTol,
    /// Negative control: the residual must exceed the tolerance.
    AboveTol,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub trials: usize,
    pub max_residual: f64,
    pub tol: f64,
    pub pass: bool,
    pub seed: u64,
    pub expect: Expect,
}

impl CheckReport {
    pub fn new(
        name: impl Into<String>,
        trials: usize,
        max_residual: f64,
        tol: f64,
        seed: u64,
    ) -> Self {
        Self::with_expect(name, trials, max_residual, tol, seed, Expect::WithinTol)
    }

    pub fn with_expect(
        name: impl Into<String>,
        trials: usize,
        max_residual: f64,
        tol: f64,
        seed: u64,
        expect: Expect,
    ) -> Self {
        // NaN residuals fail either way
        let pass = match expect {
            Expect::WithinTol => max_residual <= tol,
            Expect::AboveTol => max_residual > tol,
        };
        Self {
            name: name.into(),
            trials,
            max_residual,
            tol,
            pass,
            seed,
            expect,
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CHECK {} {} {:e} {:e} {}",
            self.name,
            if self.pass { "pass" } else { "fail" },
            self.max_residual,
            self.tol,
            self.seed
        )
    }
}

/// RNG for one trial: stream `stream` of the ChaCha generator seeded by `seed`.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn random_point<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}

/// Entries of `A` and `b` uniform in `[-1, 1]`, rejecting cond(A) > 10.
pub fn random_affine<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> AffineMap {
    loop {
        let rows: Vec<Vec<f64>> = (0..dim).map(|_| random_point(dim, rng)).collect();
        let b = random_point(dim, rng);
        if let Ok(g) = AffineMap::new(&rows, &b) {
            if g.condition_number() <= MAX_AFFINE_CONDITION {
                return g;
            }
        }
    }
}

/// `‖a − b‖∞ / (1 + ‖b‖∞)`.
pub fn relative_residual(a: &[f64], reference: &[f64]) -> f64 {
    let diff = a
        .iter()
        .zip(reference)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let scale = reference.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if a.len() != reference.len() {
        return f64::INFINITY;
    }
    diff / (1.0 + scale)
}

/// NaN-propagating maximum, so a NaN residual cannot be silently dropped.
fn worst(acc: f64, r: f64) -> f64 {
    if acc.is_nan() || r.is_nan() {
        f64::NAN
    } else {
        acc.max(r)
    }
}

/// The object whose affine equivariance is checked.
#[derive(Debug, Clone)]
pub enum EquivarianceTarget {
    /// Elementary differentials: one-root forests give vectors, rootless
    /// forests give invariant scalars.
    Forests(Vec<AromaticForest>),
    /// One step of a method with step size `h`.
    Method {
        name: String,
        tableau: AromaticTableau,
        h: f64,
    },
}

impl EquivarianceTarget {
    pub fn trees_up_to(order: usize) -> Self {
        let trees = series::trees_up_to(order)
            .expect("order within cap")
            .into_iter()
            .map(|t| t.to_forest())
            .collect();
        Self::Forests(trees)
    }

    pub fn method(name: &str, h: f64) -> Result<Self, ark::ArkError> {
        Ok(Self::Method {
            name: name.to_string(),
            tableau: ark::builtin(name)?,
            h,
        })
    }

    fn label(&self) -> String {
        match self {
            Self::Forests(f) if f.len() == 1 => format!("equivariance:{}", f[0]),
            Self::Forests(f) => format!("equivariance:{}-forests", f.len()),
            Self::Method { name, .. } => format!("equivariance:{name}"),
        }
    }
}

/// How the affine map acts on the evaluation point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PointAction {
    Correct,
    /// `A x + 2b`: the translation applied twice.
    DoubledTranslation,
}

pub fn check_equivariance(
    target: &EquivarianceTarget,
    dims: &[usize],
    trials: usize,
    tol: f64,
    seed: u64,
) -> CheckReport {
    let r = equivariance_residual(target, dims, trials, seed, PointAction::Correct);
    CheckReport::new(target.label(), trials * dims.len(), r, tol, seed)
}

/// The same check with the translation applied twice to the point; the
/// returned report passes when the broken action is detected.
pub fn check_equivariance_negative_control(
    target: &EquivarianceTarget,
    dims: &[usize],
    trials: usize,
    tol: f64,
    seed: u64,
) -> CheckReport {
    let r = equivariance_residual(target, dims, trials, seed, PointAction::DoubledTranslation);
    CheckReport::with_expect(
        format!("{}:negative-control", target.label()),
        trials * dims.len(),
        r,
        tol,
        seed,
        Expect::AboveTol,
    )
}

fn equivariance_residual(
    target: &EquivarianceTarget,
    dims: &[usize],
    trials: usize,
    seed: u64,
    action: PointAction,
) -> f64 {
    let mut max = 0.0f64;
    for (di, &d) in dims.iter().enumerate() {
        for trial in 0..trials {
            let mut rng = trial_rng(seed, (di * trials + trial) as u64);
            let degree = rng.gen_range(1..=3);
            let f = random_field_with(d, degree, &mut rng);
            let g = random_affine(d, &mut rng);
            let x = random_point(d, &mut rng);
            let gx = match action {
                PointAction::Correct => g.apply(&x),
                PointAction::DoubledTranslation => {
                    let once = g.apply(&x);
                    once.iter()
                        .zip(g.translation().iter())
                        .map(|(v, b)| v + b)
                        .collect()
                }
            };
            let r = match f.affine_act(&g) {
                Ok(gf) => trial_residual(target, &f, &gf, &g, &x, &gx),
                Err(_) => f64::INFINITY,
            };
            max = worst(max, r);
        }
    }
    max
}

fn trial_residual(
    target: &EquivarianceTarget,
    f: &PolyVectorField,
    gf: &PolyVectorField,
    g: &AffineMap,
    x: &[f64],
    gx: &[f64],
) -> f64 {
    match target {
        EquivarianceTarget::Forests(forests) => {
            let mut max = 0.0f64;
            for forest in forests {
                let r = if forest.root_count() == 1 {
                    match (
                        eldiff::eval_vector(forest, gf, gx),
                        eldiff::eval_vector(forest, f, x),
                    ) {
                        (Ok(lhs), Ok(rhs)) => relative_residual(&lhs, &g.apply_linear(&rhs)),
                        _ => f64::INFINITY,
                    }
                } else {
                    match (
                        eldiff::eval_scalar(forest, gf, gx),
                        eldiff::eval_scalar(forest, f, x),
                    ) {
                        (Ok(lhs), Ok(rhs)) => relative_residual(&[lhs], &[rhs]),
                        _ => f64::INFINITY,
                    }
                };
                max = worst(max, r);
            }
            max
        }
        EquivarianceTarget::Method { tableau, h, .. } => {
            match (
                ark::ark_step(tableau, gf, gx, *h),
                ark::ark_step(tableau, f, x, *h),
            ) {
                (Ok(lhs), Ok(rhs)) => relative_residual(&lhs, &g.apply(&rhs)),
                _ => f64::INFINITY,
            }
        }
    }
}

/// Every tree of each composition up to `max_order` against the product
/// formula on random fields over R.
pub fn check_collapse_1d(max_order: usize, trials: usize, seed: u64) -> CheckReport {
    let name = format!("collapse1d:order<={max_order}");
    let groups: Vec<(Composition, Vec<_>)> = match (1..=max_order)
        .map(trees_by_composition)
        .collect::<Result<Vec<_>, _>>()
    {
        Ok(maps) => maps.into_iter().flatten().collect(),
        Err(_) => return CheckReport::new(name, 0, f64::INFINITY, COLLAPSE_TOL, seed),
    };
    let mut max = 0.0f64;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial as u64);
        let f = random_field_with(1, max_order as u32, &mut rng);
        let x = rng.gen_range(-1.0..=1.0);
        for (kappa, trees) in &groups {
            let r = match (
                series::collapse_1d(trees, &f, x),
                series::product_formula_1d(kappa, &f, x),
            ) {
                (Ok(vals), Ok(p)) => vals
                    .iter()
                    .map(|v| relative_residual(&[*v], &[p]))
                    .fold(0.0, worst),
                _ => f64::INFINITY,
            };
            max = worst(max, r);
        }
    }
    CheckReport::new(name, trials, max, COLLAPSE_TOL, seed)
}

/// Residual of the four-tree identity relative to the size of its terms.
fn degeneracy_residual(f: &PolyVectorField, x: &[f64]) -> f64 {
    match series::degeneracy_combination(f, x) {
        Ok((res, scale)) => {
            let r = res.iter().map(|v| v.abs()).fold(0.0, f64::max);
            r / (1.0 + scale)
        }
        Err(_) => f64::INFINITY,
    }
}

pub fn check_degeneracy_2d(trials: usize, seed: u64) -> CheckReport {
    let mut max = 0.0f64;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial as u64);
        let degree = 1 + (trial % 3) as u32;
        let f = random_field_with(2, degree, &mut rng);
        let x = random_point(2, &mut rng);
        max = worst(max, degeneracy_residual(&f, &x));
    }
    CheckReport::new("degeneracy2d", trials, max, DEGENERACY_TOL, seed)
}

/// The two-dimensional identity evaluated on fields over R³, where it is
/// expected to fail.
pub fn check_degeneracy_3d_control(trials: usize, seed: u64) -> CheckReport {
    let mut max = 0.0f64;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial as u64);
        let f = random_field_with(3, 2, &mut rng);
        let x = random_point(3, &mut rng);
        max = worst(max, degeneracy_residual(&f, &x));
    }
    CheckReport::with_expect(
        "degeneracy2d:d3-control",
        trials,
        max,
        DEGENERACY_TOL,
        seed,
        Expect::AboveTol,
    )
}

/// Finite-difference divergence of the divergence-free combination, over
/// `points` random points for each of `trials` random fields per dimension.
pub fn check_divfree(trials: usize, points: usize, dims: &[usize], seed: u64) -> CheckReport {
    let b = series::divfree_combination();
    let dim_label: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
    let mut max = 0.0f64;
    for (di, &d) in dims.iter().enumerate() {
        for trial in 0..trials {
            let mut rng = trial_rng(seed, (di * trials + trial) as u64);
            let f = random_field_with(d, 3, &mut rng);
            for _ in 0..points {
                let x = random_point(d, &mut rng);
                max = worst(max, divergence_residual(&b, &f, &x));
            }
        }
    }
    CheckReport::new(
        format!("divfree:d={}", dim_label.join(",")),
        trials * points * dims.len(),
        max,
        DIVFREE_TOL,
        seed,
    )
}

/// `|div G(x)| / (1 + max_τ ‖b(τ) F(τ)(x)‖∞)` for `G = Σ b(τ) F(τ)`.
pub fn divergence_residual(b: &BSeriesCoefficients, f: &PolyVectorField, x: &[f64]) -> f64 {
    let order = b.max_order();
    let g = |p: &[f64]| series::eval_series(b, f, p, 1.0, order);
    let div = match series::fd_divergence(g, x, FD_STEP) {
        Ok(v) => v,
        Err(_) => return f64::INFINITY,
    };
    let mut scale = 0.0f64;
    for (tree, w) in b.support() {
        match eldiff::eval_vector(&tree.to_forest(), f, x) {
            Ok(v) => scale = v.iter().fold(scale, |m, c| m.max((w * c).abs())),
            Err(_) => return f64::INFINITY,
        }
    }
    div.abs() / (1.0 + scale)
}

/// Orbit classes for κ = (2,0,1): two classes of sizes 4 and 2, with the
/// permutation (2,3,1) landing on the two-children tree.
pub fn check_table3() -> CheckReport {
    let kappa = Composition::new(vec![2, 0, 1]);
    let ok = orbit_classes(&kappa)
        .map(|classes| {
            let mut sizes: Vec<usize> = classes.values().map(Vec::len).collect();
            sizes.sort_unstable();
            let target = Permutation::new(vec![2, 3, 1]).expect("valid");
            let cherry = classes
                .iter()
                .find(|(_, perms)| perms.contains(&target))
                .map(|(tree, _)| tree.as_str() == "[[][]]")
                .unwrap_or(false);
            sizes == [2, 4] && cherry
        })
        .unwrap_or(false);
    CheckReport::new("table3", 1, if ok { 0.0 } else { 1.0 }, 0.0, 0)
}

/// Lines of the κ = (2,0,1) orbit table: `<permutation>\t<tree>`, grouped
/// by class.
pub fn table3_lines() -> Vec<String> {
    let kappa = Composition::new(vec![2, 0, 1]);
    let classes = orbit_classes(&kappa).expect("κ = (2,0,1) is a tree composition");
    let mut out = Vec::new();
    for (tree, perms) in &classes {
        for p in perms {
            out.push(format!("{p}\t{tree}"));
        }
    }
    out
}

/// Residual counts compositions whose orbit keys differ from the enumerated
/// trees of that composition.
pub fn check_surjectivity(max_size: usize) -> CheckReport {
    let mut mismatches = 0usize;
    let mut checked = 0usize;
    for n in 1..=max_size {
        let Ok(by_kappa) = trees_by_composition(n) else {
            return CheckReport::new("surjectivity", checked, f64::INFINITY, 0.0, 0);
        };
        for kappa in tree_compositions(n) {
            checked += 1;
            let expected = by_kappa.get(&kappa).cloned().unwrap_or_default();
            let got: Vec<_> = match orbit_classes(&kappa) {
                Ok(c) => c.into_keys().collect(),
                Err(_) => {
                    mismatches += 1;
                    continue;
                }
            };
            if got != expected {
                mismatches += 1;
            }
        }
    }
    CheckReport::new(
        format!("surjectivity:size<={max_size}"),
        checked,
        mismatches as f64,
        0.0,
        0,
    )
}

/// Test problems with known flows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    /// `y' = y`, `y(0) = 1`, solved to `t = 1`.
    Linear,
    /// `y' = y²`, `y(0) = 1/2`, solved to `t = 1` where `y = 1`.
    Riccati,
}

impl Problem {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "linear" => Some(Self::Linear),
            "riccati" => Some(Self::Riccati),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Linear => "linear",
            Self::Riccati => "riccati",
        }
    }

    pub fn field(self) -> PolyVectorField {
        use crate::polyfield::Polynomial;
        let power = match self {
            Self::Linear => 1,
            Self::Riccati => 2,
        };
        PolyVectorField::new(vec![
            Polynomial::from_terms(1, [(vec![power], 1.0)]).expect("1d")
        ])
        .expect("1d")
    }

    pub fn initial(self) -> f64 {
        match self {
            Self::Linear => 1.0,
            Self::Riccati => 0.5,
        }
    }

    pub fn exact_at_one(self) -> f64 {
        match self {
            Self::Linear => std::f64::consts::E,
            Self::Riccati => 1.0,
        }
    }
}

/// Expected global order of the builtin methods on the scalar test
/// problems. Over R the aroma `Div(hf)` equals `h f'`, so `α = 1/2` picks up
/// the second Taylor term and the method is of order 2 there.
pub fn expected_order(method: &str) -> Option<f64> {
    match method {
        "euler" | "aromatic-euler" => Some(1.0),
        "rk4" => Some(4.0),
        "implicit-midpoint" => Some(2.0),
        m => {
            let alpha: f64 = m
                .strip_prefix("aromatic-euler(")?
                .strip_suffix(')')?
                .trim()
                .parse()
                .ok()?;
            Some(if alpha == 0.5 { 2.0 } else { 1.0 })
        }
    }
}

/// Default `h = 2^-k` exponents for the order fit, kept above round-off.
pub fn default_exponents(method: &str) -> std::ops::RangeInclusive<i32> {
    if method == "rk4" {
        2..=6
    } else {
        3..=9
    }
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Observed order of global error at `t = 1` for `h = 2^-k`, `k` in `exponents`.
pub fn observed_order(
    tableau: &AromaticTableau,
    problem: Problem,
    exponents: impl IntoIterator<Item = i32>,
) -> Result<f64, ark::ArkError> {
    let f = problem.field();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in exponents {
        let h = 2f64.powi(-k);
        let steps = 1usize << k;
        let traj = ark::integrate(tableau, &f, &[problem.initial()], h, steps)?;
        let err = (traj[steps][0] - problem.exact_at_one()).abs();
        xs.push(h.ln());
        ys.push(err.ln());
    }
    Ok(fit_slope(&xs, &ys))
}

pub fn check_order(
    method: &str,
    problem: Problem,
    exponents: std::ops::RangeInclusive<i32>,
) -> CheckReport {
    let name = format!("order:{method}/{}", problem.name());
    let trials = exponents.clone().count();
    let Some(expected) = expected_order(method) else {
        return CheckReport::new(name, 0, f64::INFINITY, 0.1, 0);
    };
    let tol = if expected >= 4.0 { 0.2 } else { 0.1 };
    let r = ark::builtin(method)
        .and_then(|t| observed_order(&t, problem, exponents))
        .map(|slope| (slope - expected).abs())
        .unwrap_or(f64::INFINITY);
    CheckReport::new(name, trials, r, tol, 0)
}

/// Slope of `|step_α=1 − step_α=0|` against `h` on `y' = y`: the aroma
/// enters at second order.
pub fn check_aromatic_local_difference() -> CheckReport {
    let f = Problem::Linear.field();
    let a0 = ark::aromatic_euler(0.0);
    let a1 = ark::aromatic_euler(1.0);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut failed = false;
    for k in 3..=9 {
        let h = 2f64.powi(-k);
        match (
            ark::ark_step(&a1, &f, &[1.0], h),
            ark::ark_step(&a0, &f, &[1.0], h),
        ) {
            (Ok(p), Ok(q)) => {
                xs.push(h.ln());
                ys.push((p[0] - q[0]).abs().ln());
            }
            _ => failed = true,
        }
    }
    let r = if failed {
        f64::INFINITY
    } else {
        (fit_slope(&xs, &ys) - 2.0).abs()
    };
    CheckReport::new("order:aromatic-euler-local-difference", 7, r, 0.1, 0)
}

/// Builtin methods covered by the method-level equivariance check, and the
/// step size used there.
pub const EQUIVARIANCE_METHODS: &[&str] = &[
    "euler",
    "aromatic-euler(0.5)",
    "aromatic-euler(1)",
    "rk4",
    "implicit-midpoint",
];
pub const METHOD_EQUIVARIANCE_H: f64 = 1e-2;

/// Every check with its default parameters.
pub fn check_all(seed: u64) -> Vec<CheckReport> {
    let mut out = Vec::new();
    let trees = EquivarianceTarget::trees_up_to(4);
    out.push(check_equivariance(
        &trees,
        &[1, 2, 3],
        50,
        EQUIVARIANCE_TOL,
        seed,
    ));
    out.push(check_equivariance_negative_control(
        &trees,
        &[1, 2, 3],
        50,
        EQUIVARIANCE_TOL,
        seed,
    ));
    let aromas: Vec<AromaticForest> = ["({})", "({}{})", "({[]})", "({}) ({})", "({}{}{})"]
        .iter()
        .map(|s| s.parse().expect("valid aroma"))
        .collect();
    out.push(check_equivariance(
        &EquivarianceTarget::Forests(aromas),
        &[1, 2, 3],
        50,
        EQUIVARIANCE_TOL,
        seed,
    ));
    for m in EQUIVARIANCE_METHODS {
        let target = EquivarianceTarget::method(m, METHOD_EQUIVARIANCE_H).expect("builtin");
        out.push(check_equivariance(
            &target,
            &[1, 2, 3],
            50,
            EQUIVARIANCE_TOL,
            seed,
        ));
    }
    out.push(check_collapse_1d(5, 20, seed));
    out.push(check_degeneracy_2d(50, seed));
    out.push(check_degeneracy_3d_control(10, seed));
    out.push(check_divfree(20, 20, &[2, 3], seed));
    out.push(check_table3());
    out.push(check_surjectivity(5));
    for m in [
        "euler",
        "aromatic-euler(0)",
        "aromatic-euler(1)",
        "rk4",
        "implicit-midpoint",
    ] {
        out.push(check_order(m, Problem::Linear, default_exponents(m)));
    }
    out.push(check_aromatic_local_difference());
    out
}

/// Enumeration census used by the `enumerate` sanity checks.
pub fn tree_counts(max_order: usize) -> Vec<usize> {
    (1..=max_order)
        .map(|n| enumerate_trees(n).map(|t| t.len()).unwrap_or(0))
        .collect()
}
