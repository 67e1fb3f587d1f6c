//! Truncated aromatic B-series and the linear identities between elementary
//! differentials that hold in low dimension.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::eldiff::{self, EvalError};
use crate::graph::{
    enumerate_trees, max_order_from_env, AromaticForest, CanonicalString, Composition, GraphError,
    ParseError,
};
use crate::polyfield::{FieldError, PolyVectorField};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("order {order} exceeds the enumeration cap {cap}")]
    OrderTooLarge { order: usize, cap: usize },
    #[error("{key} is not an aromatic tree ({roots} roots)")]
    NotATree { key: String, roots: usize },
    #[error("this identity needs dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("trees passed to the collapse have different compositions: {0} vs {1}")]
    MixedCompositions(String, String),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Coefficients `b(τ)` of an aromatic B-series; absent trees have weight 0.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BSeriesCoefficients {
    coeffs: BTreeMap<CanonicalString, f64>,
}

impl BSeriesCoefficients {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets `b(tree)`; the key is canonicalized and must have one root.
    pub fn set(&mut self, tree: &str, value: f64) -> Result<(), SeriesError> {
        let forest: AromaticForest = tree.parse()?;
        if forest.root_count() != 1 {
            return Err(SeriesError::NotATree {
                key: tree.to_string(),
                roots: forest.root_count(),
            });
        }
        self.coeffs.insert(forest.canonicalize(), value);
        Ok(())
    }

    pub fn from_pairs<'a>(
        pairs: impl IntoIterator<Item = (&'a str, f64)>,
    ) -> Result<Self, SeriesError> {
        let mut b = Self::new();
        for (t, v) in pairs {
            b.set(t, v)?;
        }
        Ok(b)
    }

    pub fn get(&self, tree: &CanonicalString) -> f64 {
        self.coeffs.get(tree).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CanonicalString, f64)> {
        self.coeffs.iter().map(|(k, v)| (k, *v))
    }

    /// Entries with a nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = (&CanonicalString, f64)> {
        self.iter().filter(|(_, v)| *v != 0.0)
    }

    pub fn max_order(&self) -> usize {
        self.coeffs
            .keys()
            .map(|k| k.node_count())
            .max()
            .unwrap_or(0)
    }

    /// Reads `<tree> TAB <coefficient>` lines; blank lines and `#` comments
    /// are skipped.
    pub fn parse_text(text: &str) -> Result<Self, SeriesError> {
        let mut b = Self::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (tree, value) = line.rsplit_once('\t').ok_or_else(|| SeriesError::Format {
                line: line_no,
                message: "expected <tree>\\t<coefficient>".into(),
            })?;
            let value: f64 = value.trim().parse().map_err(|e| SeriesError::Format {
                line: line_no,
                message: format!("bad coefficient {:?}: {e}", value.trim()),
            })?;
            b.set(tree, value).map_err(|e| SeriesError::Format {
                line: line_no,
                message: e.to_string(),
            })?;
        }
        Ok(b)
    }

    pub fn to_text(&self) -> String {
        self.coeffs
            .iter()
            .map(|(k, v)| format!("{k}\t{v}\n"))
            .collect()
    }
}

/// `Σ_{|τ| ≤ max_order} h^|τ| b(τ) F(τ)(f)(x)`, summed in canonical order.
pub fn eval_series(
    b: &BSeriesCoefficients,
    f: &PolyVectorField,
    x: &[f64],
    h: f64,
    max_order: usize,
) -> Result<Vec<f64>, SeriesError> {
    let cap = max_order_from_env();
    if max_order > cap {
        return Err(SeriesError::OrderTooLarge {
            order: max_order,
            cap,
        });
    }
    if x.len() != f.dim() {
        return Err(FieldError::DimensionMismatch {
            expected: f.dim(),
            got: x.len(),
        }
        .into());
    }
    let mut out = vec![0.0; f.dim()];
    for (tree, coeff) in b.support() {
        let order = tree.node_count();
        if order > max_order {
            continue;
        }
        let weight = coeff * h.powi(order as i32);
        let value = eldiff::eval_vector(&tree.to_forest(), f, x)?;
        for (o, v) in out.iter_mut().zip(value) {
            *o += weight * v;
        }
    }
    Ok(out)
}

/// `∏_j (f^(j)(x))^κ(j)` for a scalar field on R.
pub fn product_formula_1d(
    kappa: &Composition,
    f: &PolyVectorField,
    x: f64,
) -> Result<f64, SeriesError> {
    if f.dim() != 1 {
        return Err(SeriesError::WrongDimension {
            expected: 1,
            got: f.dim(),
        });
    }
    let mut out = 1.0;
    for (j, &count) in kappa.counts().iter().enumerate() {
        if count == 0 {
            continue;
        }
        let deriv = f.partial(0, &vec![0; j])?.eval(&[x])?;
        out *= deriv.powi(count as i32);
    }
    Ok(out)
}

/// Values of `F(τ)` at `x` for trees sharing one composition, on a field
/// over R. All of them coincide with [`product_formula_1d`].
pub fn collapse_1d(
    trees: &[CanonicalString],
    f: &PolyVectorField,
    x: f64,
) -> Result<Vec<f64>, SeriesError> {
    if f.dim() != 1 {
        return Err(SeriesError::WrongDimension {
            expected: 1,
            got: f.dim(),
        });
    }
    let mut kappa: Option<Composition> = None;
    let mut out = Vec::with_capacity(trees.len());
    for t in trees {
        let forest = t.to_forest();
        let k = forest.composition();
        match &kappa {
            None => kappa = Some(k),
            Some(first) if *first != k => {
                return Err(SeriesError::MixedCompositions(
                    first.to_string(),
                    k.to_string(),
                ))
            }
            _ => {}
        }
        out.push(eldiff::eval_vector(&forest, f, &[x])?[0]);
    }
    Ok(out)
}

/// The four trees of the two-dimensional identity, with their weights:
/// two loops beside the root, the tall tree, one loop beside a two-node
/// path, and the 2-cycle beside the root.
pub const DEGENERACY_2D: [(&str, f64); 4] = [
    ("({}) ({}) []", 1.0),
    ("[[[]]]", 2.0),
    ("({}) [[]]", -2.0),
    ("({}{}) []", -1.0),
];

/// Terms of the two-dimensional identity evaluated in any dimension.
/// Returns the residual and the largest max-norm among the weighted terms.
pub fn degeneracy_combination(
    f: &PolyVectorField,
    x: &[f64],
) -> Result<(Vec<f64>, f64), SeriesError> {
    let mut residual = vec![0.0; f.dim()];
    let mut scale = 0.0f64;
    for (tree, w) in DEGENERACY_2D {
        let value = eldiff::eval_vector(&tree.parse()?, f, x)?;
        for (r, v) in residual.iter_mut().zip(&value) {
            *r += w * v;
        }
        scale = scale.max(value.iter().fold(0.0f64, |m, v| m.max((w * v).abs())));
    }
    Ok((residual, scale))
}

/// Residual of the identity that holds for every field on R².
pub fn degeneracy_2d(f: &PolyVectorField, x: &[f64]) -> Result<Vec<f64>, SeriesError> {
    if f.dim() != 2 {
        return Err(SeriesError::WrongDimension {
            expected: 2,
            got: f.dim(),
        });
    }
    Ok(degeneracy_combination(f, x)?.0)
}

/// The order-3 combination whose B-series field has zero divergence for
/// every `f`:
///
/// ```text
/// ({}) [[]]   +1    f'f · Div f
/// [[][]]      +1    f''(f, f)
/// ({[]}) []   -1    f · (f^i_{ij} f^j)
/// ({}{}) []   -1    f · Tr(f'^2)
/// ```
pub fn divfree_combination() -> BSeriesCoefficients {
    BSeriesCoefficients::from_pairs([
        ("({}) [[]]", 1.0),
        ("[[] []]", 1.0),
        ("({[]}) []", -1.0),
        ("({}{}) []", -1.0),
    ])
    .expect("fixed trees are valid")
}

/// Central-difference divergence of a vector-valued map.
pub fn fd_divergence<F>(g: F, x: &[f64], step: f64) -> Result<f64, SeriesError>
where
    F: Fn(&[f64]) -> Result<Vec<f64>, SeriesError>,
{
    let mut div = 0.0;
    let mut p = x.to_vec();
    for k in 0..x.len() {
        p[k] = x[k] + step;
        let plus = g(&p)?[k];
        p[k] = x[k] - step;
        let minus = g(&p)?[k];
        p[k] = x[k];
        div += (plus - minus) / (2.0 * step);
    }
    Ok(div)
}

/// All enumerated trees up to `max_order`, in canonical order.
pub fn trees_up_to(max_order: usize) -> Result<Vec<CanonicalString>, SeriesError> {
    let mut out = Vec::new();
    for n in 1..=max_order {
        out.extend(enumerate_trees(n)?);
    }
    Ok(out)
}
