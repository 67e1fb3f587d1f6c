//! Aromatic Runge–Kutta methods.
//!
//! Tableau entries are polynomials in aromas. A step of size `h` applies the
//! method to the scaled field `h f`; every aroma coefficient is evaluated on
//! `h f` at the base point `y0`, so an aroma with `m` nodes carries `h^m`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eldiff::{self, EvalError};
use crate::graph::{AromaticForest, CanonicalString, ParseError};
use crate::polyfield::{FieldError, PolyVectorField};

/// Stage solve tolerance in the max-norm.
pub const FIXED_POINT_TOL: f64 = 1e-12;
pub const FIXED_POINT_MAX_ITER: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArkError {
    #[error("aroma {0} has a root; aromatic coefficients must be rootless")]
    RootedAroma(String),
    #[error(
        "stage equations did not converge after {iterations} iterations (residual {residual:e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("non-finite value encountered in step")]
    NonFinite,
    #[error("step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<ArkError>,
    },
    #[error("inconsistent tableau: {0}")]
    Shape(String),
    #[error("unknown method {0:?}")]
    UnknownMethod(String),
    #[error("invalid tableau file: {0}")]
    Format(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// One product `coeff · ∏ aromas`.
#[derive(Debug, Clone, PartialEq)]
pub struct AromaTerm {
    pub coeff: f64,
    /// Rootless forests, canonical and sorted. Empty means a constant.
    pub aromas: Vec<CanonicalString>,
}

/// An element of the ring of aromas with real coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AromaticScalar {
    terms: Vec<AromaTerm>,
}

impl AromaticScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        let mut s = Self::zero();
        s.push(c, &[]).expect("no aromas");
        s
    }

    /// Adds `coeff · ∏ aromas`. Zero coefficients are dropped.
    pub fn push(&mut self, coeff: f64, aromas: &[&str]) -> Result<&mut Self, ArkError> {
        let mut canon = Vec::with_capacity(aromas.len());
        for a in aromas {
            let forest: AromaticForest = a.parse()?;
            if forest.root_count() != 0 {
                return Err(ArkError::RootedAroma((*a).to_string()));
            }
            canon.push(forest.canonicalize());
        }
        canon.sort();
        if coeff != 0.0 {
            self.terms.push(AromaTerm {
                coeff,
                aromas: canon,
            });
        }
        Ok(self)
    }

    pub fn terms(&self) -> &[AromaTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value on the scaled field `h f` at `y`.
    pub fn eval(&self, f: &PolyVectorField, y: &[f64], h: f64) -> Result<f64, ArkError> {
        let mut total = 0.0;
        for term in &self.terms {
            let mut v = term.coeff;
            for aroma in &term.aromas {
                let forest = aroma.to_forest();
                let nodes = forest.node_count() as i32;
                v *= eldiff::eval_scalar(&forest, f, y)? * h.powi(nodes);
            }
            total += v;
        }
        Ok(total)
    }
}

impl fmt::Display for AromaticScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}", t.coeff)?;
            for a in &t.aromas {
                write!(f, "·{a}")?;
            }
        }
        Ok(())
    }
}

pub fn eval_scalar_coeff(
    c: &AromaticScalar,
    f: &PolyVectorField,
    y: &[f64],
    h: f64,
) -> Result<f64, ArkError> {
    c.eval(f, y, h)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AromaticTableau {
    a: Vec<Vec<AromaticScalar>>,
    b: Vec<AromaticScalar>,
    explicit: bool,
}

impl AromaticTableau {
    pub fn new(a: Vec<Vec<AromaticScalar>>, b: Vec<AromaticScalar>) -> Result<Self, ArkError> {
        let s = b.len();
        if s == 0 {
            return Err(ArkError::Shape("a method needs at least one stage".into()));
        }
        if a.len() != s || a.iter().any(|row| row.len() != s) {
            return Err(ArkError::Shape(format!("a must be {s}x{s} to match b")));
        }
        let explicit = (0..s).all(|j| (j..s).all(|l| a[j][l].is_zero()));
        Ok(Self { a, b, explicit })
    }

    /// A tableau with real coefficients.
    pub fn classical(a: &[Vec<f64>], b: &[f64]) -> Result<Self, ArkError> {
        Self::new(
            a.iter()
                .map(|row| row.iter().map(|&v| AromaticScalar::constant(v)).collect())
                .collect(),
            b.iter().map(|&v| AromaticScalar::constant(v)).collect(),
        )
    }

    pub fn stages(&self) -> usize {
        self.b.len()
    }

    pub fn is_explicit(&self) -> bool {
        self.explicit
    }

    pub fn a(&self, j: usize, l: usize) -> &AromaticScalar {
        &self.a[j][l]
    }

    pub fn b(&self, l: usize) -> &AromaticScalar {
        &self.b[l]
    }

    /// Largest aroma node count appearing in any coefficient.
    pub fn max_aroma_order(&self) -> usize {
        self.a
            .iter()
            .flatten()
            .chain(&self.b)
            .flat_map(|s| s.terms.iter())
            .map(|t| t.aromas.iter().map(|a| a.node_count()).sum::<usize>())
            .max()
            .unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&TableauFile::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, ArkError> {
        let file: TableauFile =
            serde_json::from_str(text).map_err(|e| ArkError::Format(e.to_string()))?;
        file.try_into()
    }
}

/// One step of size `h` from `y0`.
pub fn ark_step(
    t: &AromaticTableau,
    f: &PolyVectorField,
    y0: &[f64],
    h: f64,
) -> Result<Vec<f64>, ArkError> {
    let d = f.dim();
    if y0.len() != d {
        return Err(FieldError::DimensionMismatch {
            expected: d,
            got: y0.len(),
        }
        .into());
    }
    if !h.is_finite() {
        return Err(ArkError::NonFinite);
    }
    let s = t.stages();
    let a_hat: Vec<Vec<f64>> =
        t.a.iter()
            .map(|row| row.iter().map(|c| c.eval(f, y0, h)).collect())
            .collect::<Result<_, _>>()?;
    let b_hat: Vec<f64> =
        t.b.iter()
            .map(|c| c.eval(f, y0, h))
            .collect::<Result<_, _>>()?;

    let stage = |j: usize, k: &[Vec<f64>]| -> Result<Vec<f64>, ArkError> {
        let mut arg = y0.to_vec();
        for (l, kl) in k.iter().enumerate() {
            let w = a_hat[j][l];
            if w != 0.0 {
                for (x, v) in arg.iter_mut().zip(kl) {
                    *x += w * v;
                }
            }
        }
        Ok(f.eval(&arg)?.into_iter().map(|v| h * v).collect())
    };

    let k: Vec<Vec<f64>> = if t.explicit {
        let mut k: Vec<Vec<f64>> = vec![vec![0.0; d]; s];
        for j in 0..s {
            k[j] = stage(j, &k[..j])?;
        }
        k
    } else {
        let start = f.eval(y0)?.into_iter().map(|v| h * v).collect::<Vec<_>>();
        let mut k = vec![start; s];
        let mut iterations = 0;
        loop {
            iterations += 1;
            let next: Vec<Vec<f64>> = (0..s).map(|j| stage(j, &k)).collect::<Result<_, _>>()?;
            let residual = next
                .iter()
                .flatten()
                .zip(k.iter().flatten())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            k = next;
            if !residual.is_finite() {
                return Err(ArkError::NonFinite);
            }
            if residual <= FIXED_POINT_TOL {
                break;
            }
            if iterations >= FIXED_POINT_MAX_ITER {
                return Err(ArkError::NoConvergence {
                    iterations,
                    residual,
                });
            }
        }
        k
    };

    let mut y1 = y0.to_vec();
    for (l, kl) in k.iter().enumerate() {
        for (y, v) in y1.iter_mut().zip(kl) {
            *y += b_hat[l] * v;
        }
    }
    if y1.iter().any(|v| !v.is_finite()) {
        return Err(ArkError::NonFinite);
    }
    Ok(y1)
}

/// `steps` steps from `y0`; the trajectory has `steps + 1` points.
pub fn integrate(
    t: &AromaticTableau,
    f: &PolyVectorField,
    y0: &[f64],
    h: f64,
    steps: usize,
) -> Result<Vec<Vec<f64>>, ArkError> {
    let mut out = Vec::with_capacity(steps + 1);
    out.push(y0.to_vec());
    for step in 0..steps {
        let next =
            ark_step(t, f, out.last().expect("non-empty"), h).map_err(|e| ArkError::AtStep {
                step,
                source: Box::new(e),
            })?;
        out.push(next);
    }
    Ok(out)
}

/// Names accepted by [`builtin`].
pub const BUILTIN_METHODS: &[&str] =
    &["euler", "aromatic-euler(alpha)", "rk4", "implicit-midpoint"];

/// Forward Euler with weight `1 + α·Div(hf)(y0)`.
pub fn aromatic_euler(alpha: f64) -> AromaticTableau {
    let mut b = AromaticScalar::constant(1.0);
    b.push(alpha, &["({})"]).expect("valid aroma");
    AromaticTableau::new(vec![vec![AromaticScalar::zero()]], vec![b]).expect("1 stage")
}

/// Looks up a builtin method. `aromatic-euler(α)` takes its parameter
/// inline; bare `aromatic-euler` means `α = 1`.
pub fn builtin(name: &str) -> Result<AromaticTableau, ArkError> {
    let name = name.trim();
    match name {
        "euler" => AromaticTableau::classical(&[vec![0.0]], &[1.0]),
        "aromatic-euler" => Ok(aromatic_euler(1.0)),
        "rk4" => AromaticTableau::classical(
            &[
                vec![0.0, 0.0, 0.0, 0.0],
                vec![0.5, 0.0, 0.0, 0.0],
                vec![0.0, 0.5, 0.0, 0.0],
                vec![0.0, 0.0, 1.0, 0.0],
            ],
            &[1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0],
        ),
        "implicit-midpoint" => AromaticTableau::classical(&[vec![0.5]], &[1.0]),
        _ => {
            let alpha = name
                .strip_prefix("aromatic-euler(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|a| a.trim().parse::<f64>().ok())
                .ok_or_else(|| ArkError::UnknownMethod(name.to_string()))?;
            Ok(aromatic_euler(alpha))
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct TermFile {
    coeff: f64,
    #[serde(default)]
    aromas: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TableauFile {
    s: usize,
    a: Vec<Vec<Vec<TermFile>>>,
    b: Vec<Vec<TermFile>>,
}

fn scalar_to_file(s: &AromaticScalar) -> Vec<TermFile> {
    s.terms
        .iter()
        .map(|t| TermFile {
            coeff: t.coeff,
            aromas: t.aromas.iter().map(|a| a.to_string()).collect(),
        })
        .collect()
}

fn scalar_from_file(terms: Vec<TermFile>) -> Result<AromaticScalar, ArkError> {
    let mut s = AromaticScalar::zero();
    for t in terms {
        let aromas: Vec<&str> = t.aromas.iter().map(String::as_str).collect();
        s.push(t.coeff, &aromas)?;
    }
    Ok(s)
}

impl From<&AromaticTableau> for TableauFile {
    fn from(t: &AromaticTableau) -> Self {
        TableauFile {
            s: t.stages(),
            a: t.a
                .iter()
                .map(|row| row.iter().map(scalar_to_file).collect())
                .collect(),
            b: t.b.iter().map(scalar_to_file).collect(),
        }
    }
}

impl TryFrom<TableauFile> for AromaticTableau {
    type Error = ArkError;

    fn try_from(file: TableauFile) -> Result<Self, ArkError> {
        if file.b.len() != file.s {
            return Err(ArkError::Format(format!(
                "s is {} but b has {} entries",
                file.s,
                file.b.len()
            )));
        }
        let a = file
            .a
            .into_iter()
            .map(|row| row.into_iter().map(scalar_from_file).collect())
            .collect::<Result<Vec<Vec<_>>, _>>()?;
        let b = file
            .b
            .into_iter()
            .map(scalar_from_file)
            .collect::<Result<Vec<_>, _>>()?;
        AromaticTableau::new(a, b)
    }
}
