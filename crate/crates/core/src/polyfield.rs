//! Polynomial vector fields on R^d with exact differentiation and the affine
//! group action `((A, b) · f)(x) = A f(A⁻¹ (x − b))`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest condition number accepted when building an [`AffineMap`].
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("matrix is singular or too ill-conditioned (condition number {condition:e})")]
    Singular { condition: f64 },
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("invalid field file: {0}")]
    Format(String),
}

/// Exponent multi-index of a monomial.
pub type Exponents = Vec<u32>;

/// A real polynomial in `dim` variables. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Exponents, f64>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    /// The coordinate function `x_i`.
    pub fn variable(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        let mut p = Self::zero(dim);
        p.add_term(e, 1.0);
        p
    }

    pub fn from_terms(
        dim: usize,
        terms: impl IntoIterator<Item = (Exponents, f64)>,
    ) -> Result<Self, FieldError> {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            if e.len() != dim {
                return Err(FieldError::DimensionMismatch {
                    expected: dim,
                    got: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponents, c: f64) {
        if c == 0.0 {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0.0 {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, f64)> {
        self.terms.iter().map(|(e, c)| (e, *c))
    }

    pub fn coefficient(&self, e: &[u32]) -> f64 {
        self.terms.get(e).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Smallest total degree of a stored monomial; `None` for zero.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64, FieldError> {
        if x.len() != self.dim {
            return Err(FieldError::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .fold(*c, |acc, (&k, &xi)| acc * xi.powi(k as i32))
            })
            .sum()
    }

    /// Partial derivative with respect to `x_var`.
    pub fn derivative(&self, var: usize) -> Result<Self, FieldError> {
        if var >= self.dim {
            return Err(FieldError::IndexOutOfRange {
                index: var,
                dim: self.dim,
            });
        }
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[var] -= 1;
            out.add_term(d, c * f64::from(e[var]));
        }
        Ok(out)
    }

    /// Iterated partial derivative; the order of `vars` does not matter.
    pub fn partial(&self, vars: &[usize]) -> Result<Self, FieldError> {
        if let Some(&bad) = vars.iter().find(|&&v| v >= self.dim) {
            return Err(FieldError::IndexOutOfRange {
                index: bad,
                dim: self.dim,
            });
        }
        let mut p = self.clone();
        for &v in vars {
            if p.is_zero() {
                break;
            }
            p = p.derivative(v)?;
        }
        Ok(p)
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.dim, 1.0);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension mismatch");
        let mut out = Polynomial::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

/// A vector field on R^d with polynomial components.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyVectorField {
    dim: usize,
    components: Vec<Polynomial>,
}

impl PolyVectorField {
    pub fn new(components: Vec<Polynomial>) -> Result<Self, FieldError> {
        let dim = components.len();
        if dim == 0 {
            return Err(FieldError::ZeroDimension);
        }
        for c in &components {
            if c.dim != dim {
                return Err(FieldError::DimensionMismatch {
                    expected: dim,
                    got: c.dim,
                });
            }
        }
        Ok(Self { dim, components })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            components: vec![Polynomial::zero(dim); dim],
        }
    }

    /// The linear field `x ↦ M x`, with `matrix` given row by row.
    pub fn linear(matrix: &[Vec<f64>]) -> Result<Self, FieldError> {
        let dim = matrix.len();
        let mut comps = Vec::with_capacity(dim);
        for row in matrix {
            if row.len() != dim {
                return Err(FieldError::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            let mut p = Polynomial::zero(dim);
            for (j, &a) in row.iter().enumerate() {
                p = &p + &Polynomial::variable(dim, j).scale(a);
            }
            comps.push(p);
        }
        Self::new(comps)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, k: usize) -> Result<&Polynomial, FieldError> {
        self.components.get(k).ok_or(FieldError::IndexOutOfRange {
            index: k,
            dim: self.dim,
        })
    }

    pub fn degree(&self) -> Option<u32> {
        self.components.iter().filter_map(Polynomial::degree).max()
    }

    fn check_point(&self, x: &[f64]) -> Result<(), FieldError> {
        if x.len() != self.dim {
            return Err(FieldError::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>, FieldError> {
        self.check_point(x)?;
        Ok(self
            .components
            .iter()
            .map(|p| p.eval_unchecked(x))
            .collect())
    }

    /// `∂^n f^k / ∂x_{vars[0]} … ∂x_{vars[n-1]}`.
    pub fn partial(&self, k: usize, vars: &[usize]) -> Result<Polynomial, FieldError> {
        self.component(k)?.partial(vars)
    }

    /// `Σ_k ∂f^k/∂x_k`.
    pub fn divergence(&self) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (k, p) in self.components.iter().enumerate() {
            out = &out + &p.derivative(k).expect("k < dim");
        }
        out
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            dim: self.dim,
            components: self.components.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// `x ↦ A f(A⁻¹ (x − b))`, by exact substitution of affine forms.
    pub fn affine_act(&self, g: &AffineMap) -> Result<Self, FieldError> {
        if g.dim() != self.dim {
            return Err(FieldError::DimensionMismatch {
                expected: self.dim,
                got: g.dim(),
            });
        }
        let d = self.dim;
        // y_i = Σ_j (A⁻¹)_{ij} x_j − (A⁻¹ b)_i
        let shift = &g.inverse * &g.translation;
        let ys: Vec<Polynomial> = (0..d)
            .map(|i| {
                let mut p = Polynomial::constant(d, -shift[i]);
                for j in 0..d {
                    p = &p + &Polynomial::variable(d, j).scale(g.inverse[(i, j)]);
                }
                p
            })
            .collect();
        let mut powers: Vec<Vec<Polynomial>> = ys
            .iter()
            .map(|y| vec![Polynomial::constant(d, 1.0), y.clone()])
            .collect();
        let mut power = |i: usize, k: u32| -> Polynomial {
            let k = k as usize;
            while powers[i].len() <= k {
                let next = &powers[i][powers[i].len() - 1] * &ys[i];
                powers[i].push(next);
            }
            powers[i][k].clone()
        };
        let substituted: Vec<Polynomial> = self
            .components
            .iter()
            .map(|p| {
                let mut out = Polynomial::zero(d);
                for (e, c) in &p.terms {
                    let mut mono = Polynomial::constant(d, *c);
                    for (i, &k) in e.iter().enumerate() {
                        if k > 0 {
                            mono = &mono * &power(i, k);
                        }
                    }
                    out = &out + &mono;
                }
                out
            })
            .collect();
        let components = (0..d)
            .map(|k| {
                let mut out = Polynomial::zero(d);
                for (j, s) in substituted.iter().enumerate() {
                    let a = g.matrix[(k, j)];
                    if a != 0.0 {
                        out = &out + &s.scale(a);
                    }
                }
                out
            })
            .collect();
        Ok(Self { dim: d, components })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&FieldFile::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, FieldError> {
        let file: FieldFile =
            serde_json::from_str(text).map_err(|e| FieldError::Format(e.to_string()))?;
        file.try_into()
    }
}

/// Deterministic random field with integer coefficients in `[-3, 3]` on every
/// monomial of total degree at most `degree`.
pub fn random_field(dim: usize, degree: u32, seed: u64) -> PolyVectorField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_field_with(dim, degree, &mut rng)
}

pub fn random_field_with<R: Rng + ?Sized>(dim: usize, degree: u32, rng: &mut R) -> PolyVectorField {
    assert!(dim >= 1, "dimension must be positive");
    let monomials = monomials_up_to(dim, degree);
    let components = (0..dim)
        .map(|_| {
            let mut p = Polynomial::zero(dim);
            for e in &monomials {
                let c: i32 = rng.gen_range(-3..=3);
                p.add_term(e.clone(), f64::from(c));
            }
            p
        })
        .collect();
    PolyVectorField { dim, components }
}

/// Exponent vectors of total degree at most `degree`, in graded order.
pub fn monomials_up_to(dim: usize, degree: u32) -> Vec<Exponents> {
    let mut out = Vec::new();
    for total in 0..=degree {
        monomials_of_degree(dim, total, &mut vec![], &mut out);
    }
    out
}

fn monomials_of_degree(dim: usize, left: u32, cur: &mut Exponents, out: &mut Vec<Exponents>) {
    if cur.len() + 1 == dim {
        cur.push(left);
        out.push(cur.clone());
        cur.pop();
        return;
    }
    for k in (0..=left).rev() {
        cur.push(k);
        monomials_of_degree(dim, left - k, cur, out);
        cur.pop();
    }
}

/// An invertible affine map `x ↦ A x + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    matrix: DMatrix<f64>,
    inverse: DMatrix<f64>,
    translation: DVector<f64>,
}

impl AffineMap {
    /// `rows` is the matrix in row-major order.
    pub fn new(rows: &[Vec<f64>], translation: &[f64]) -> Result<Self, FieldError> {
        let d = rows.len();
        if d == 0 {
            return Err(FieldError::ZeroDimension);
        }
        if translation.len() != d {
            return Err(FieldError::DimensionMismatch {
                expected: d,
                got: translation.len(),
            });
        }
        for r in rows {
            if r.len() != d {
                return Err(FieldError::DimensionMismatch {
                    expected: d,
                    got: r.len(),
                });
            }
        }
        let matrix = DMatrix::from_fn(d, d, |i, j| rows[i][j]);
        Self::from_parts(matrix, DVector::from_column_slice(translation))
    }

    pub fn from_parts(matrix: DMatrix<f64>, translation: DVector<f64>) -> Result<Self, FieldError> {
        let condition = condition_number(&matrix);
        if condition.is_nan() || condition > MAX_CONDITION {
            return Err(FieldError::Singular { condition });
        }
        let inverse = matrix
            .clone()
            .try_inverse()
            .ok_or(FieldError::Singular { condition })?;
        Ok(Self {
            matrix,
            inverse,
            translation,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: DMatrix::identity(dim, dim),
            inverse: DMatrix::identity(dim, dim),
            translation: DVector::zeros(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn translation(&self) -> &DVector<f64> {
        &self.translation
    }

    pub fn condition_number(&self) -> f64 {
        condition_number(&self.matrix)
    }

    /// `A x + b`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let v = &self.matrix * DVector::from_column_slice(x) + &self.translation;
        v.iter().copied().collect()
    }

    /// `A v`, the action on tangent vectors.
    pub fn apply_linear(&self, v: &[f64]) -> Vec<f64> {
        let v = &self.matrix * DVector::from_column_slice(v);
        v.iter().copied().collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            matrix: &self.matrix * &other.matrix,
            inverse: &other.inverse * &self.inverse,
            translation: &self.matrix * &other.translation + &self.translation,
        }
    }
}

/// Ratio of extreme singular values; infinite for singular matrices.
pub fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = m.clone().singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min == 0.0 || !min.is_finite() {
        f64::INFINITY
    } else {
        max / min
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct TermFile {
    coeff: f64,
    exponents: Vec<u32>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FieldFile {
    dim: usize,
    components: Vec<Vec<TermFile>>,
}

impl From<&PolyVectorField> for FieldFile {
    fn from(f: &PolyVectorField) -> Self {
        FieldFile {
            dim: f.dim,
            components: f
                .components
                .iter()
                .map(|p| {
                    p.terms
                        .iter()
                        .map(|(e, c)| TermFile {
                            coeff: *c,
                            exponents: e.clone(),
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

impl TryFrom<FieldFile> for PolyVectorField {
    type Error = FieldError;

    fn try_from(file: FieldFile) -> Result<Self, FieldError> {
        if file.components.len() != file.dim {
            return Err(FieldError::Format(format!(
                "dim is {} but {} components were given",
                file.dim,
                file.components.len()
            )));
        }
        let comps = file
            .components
            .into_iter()
            .map(|terms| {
                Polynomial::from_terms(file.dim, terms.into_iter().map(|t| (t.exponents, t.coeff)))
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| FieldError::Format(e.to_string()))?;
        PolyVectorField::new(comps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn poly(dim: usize, terms: &[(&[u32], f64)]) -> Polynomial {
        Polynomial::from_terms(dim, terms.iter().map(|(e, c)| (e.to_vec(), *c))).unwrap()
    }

    #[test]
    fn eval_examples() {
        let f = PolyVectorField::new(vec![poly(2, &[(&[2, 0], 1.0)]), poly(2, &[(&[0, 1], 1.0)])])
            .unwrap();
        assert_eq!(f.eval(&[1.0, 1.0]).unwrap(), vec![1.0, 1.0]);
        assert_eq!(
            PolyVectorField::zero(2).eval(&[3.0, -1.0]).unwrap(),
            vec![0.0, 0.0]
        );
        let g =
            PolyVectorField::new(vec![poly(2, &[(&[1, 1], 1.0)]), Polynomial::zero(2)]).unwrap();
        assert_eq!(g.eval(&[2.0, 3.0]).unwrap(), vec![6.0, 0.0]);
        assert!(matches!(
            g.eval(&[1.0]),
            Err(FieldError::DimensionMismatch {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn partial_examples() {
        let f = PolyVectorField::new(vec![poly(1, &[(&[2], 1.0)])]).unwrap();
        assert_eq!(f.partial(0, &[0]).unwrap(), poly(1, &[(&[1], 2.0)]));
        assert_eq!(f.partial(0, &[]).unwrap(), f.components()[0]);
        assert!(f.partial(0, &[0, 0, 0]).unwrap().is_zero());
        assert!(f.partial(1, &[]).is_err());
        assert!(f.partial(0, &[1]).is_err());
        assert!(f.partial(0, &[0, 0, 0, 5]).is_err());
    }

    #[test]
    fn partials_commute() {
        let f = random_field(3, 4, 11);
        for k in 0..3 {
            assert_eq!(
                f.partial(k, &[0, 2, 1]).unwrap(),
                f.partial(k, &[1, 0, 2]).unwrap()
            );
        }
    }

    #[test]
    fn divergence_examples() {
        let f = PolyVectorField::new(vec![poly(2, &[(&[2, 0], 1.0)]), poly(2, &[(&[0, 1], 1.0)])])
            .unwrap();
        assert_eq!(f.divergence(), poly(2, &[(&[1, 0], 2.0), (&[0, 0], 1.0)]));
        let c = PolyVectorField::new(vec![
            poly(2, &[(&[0, 0], 4.0)]),
            poly(2, &[(&[0, 0], -1.0)]),
        ])
        .unwrap();
        assert!(c.divergence().is_zero());
        let sq = PolyVectorField::new(vec![poly(1, &[(&[2], 1.0)])]).unwrap();
        assert_eq!(sq.divergence(), poly(1, &[(&[1], 2.0)]));
    }

    #[test]
    fn affine_examples() {
        let f = random_field(2, 3, 5);
        assert_eq!(f.affine_act(&AffineMap::identity(2)).unwrap(), f);

        let sq = PolyVectorField::new(vec![poly(1, &[(&[2], 1.0)])]).unwrap();
        let g = AffineMap::new(&[vec![2.0]], &[0.0]).unwrap();
        assert_eq!(
            sq.affine_act(&g).unwrap().components()[0],
            poly(1, &[(&[2], 0.5)])
        );

        let c = PolyVectorField::new(vec![
            poly(2, &[(&[0, 0], 4.0)]),
            poly(2, &[(&[0, 0], -1.0)]),
        ])
        .unwrap();
        let t = AffineMap::new(&[vec![1.0, 0.0], vec![0.0, 1.0]], &[3.0, -7.5]).unwrap();
        assert_eq!(c.affine_act(&t).unwrap(), c);
    }

    #[test]
    fn affine_preserves_degree() {
        let f = random_field(3, 3, 2);
        let g = AffineMap::new(
            &[
                vec![1.0, 0.5, 0.0],
                vec![0.0, 1.0, -0.25],
                vec![0.5, 0.0, 1.0],
            ],
            &[0.1, 0.2, 0.3],
        )
        .unwrap();
        assert_eq!(f.affine_act(&g).unwrap().degree(), f.degree());
    }

    #[test]
    fn affine_pointwise() {
        let f = random_field(2, 3, 9);
        let g = AffineMap::new(&[vec![1.0, 2.0], vec![-0.5, 1.0]], &[0.3, -0.2]).unwrap();
        let gf = f.affine_act(&g).unwrap();
        let x = [0.7, -0.4];
        let lhs = gf.eval(&g.apply(&x)).unwrap();
        let rhs = g.apply_linear(&f.eval(&x).unwrap());
        for (a, b) in lhs.iter().zip(&rhs) {
            assert_relative_eq!(a, b, epsilon = 1e-12, max_relative = 1e-12);
        }
    }

    #[test]
    fn singular_rejected() {
        let err = AffineMap::new(&[vec![1.0, 2.0], vec![2.0, 4.0]], &[0.0, 0.0]).unwrap_err();
        assert!(matches!(err, FieldError::Singular { .. }));
        assert!(AffineMap::new(&[vec![1.0]], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn random_field_is_deterministic() {
        assert_eq!(random_field(2, 2, 1), random_field(2, 2, 1));
        assert_ne!(random_field(2, 2, 1), random_field(2, 2, 2));
        let c = random_field(3, 0, 4);
        assert!(c.degree().unwrap_or(0) == 0);
        for p in c.components() {
            for (_, v) in p.terms() {
                assert!(v.fract() == 0.0 && v.abs() <= 3.0);
            }
        }
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_up_to(1, 3).len(), 4);
        assert_eq!(monomials_up_to(2, 2).len(), 6);
        assert_eq!(monomials_up_to(3, 3).len(), 20);
    }

    #[test]
    fn json_roundtrip_and_format() {
        let f = random_field(2, 2, 3);
        assert_eq!(PolyVectorField::from_json(&f.to_json()).unwrap(), f);

        let text = r#"{"dim": 1, "components": [[{"coeff": 1.0, "exponents": [2]}]]}"#;
        let g = PolyVectorField::from_json(text).unwrap();
        assert_eq!(g.eval(&[3.0]).unwrap(), vec![9.0]);

        let bad = r#"{"dim": 2, "components": [[{"coeff": 1.0, "exponents": [2]}]]}"#;
        assert!(matches!(
            PolyVectorField::from_json(bad),
            Err(FieldError::Format(_))
        ));
        assert!(PolyVectorField::from_json("not json").is_err());
    }

    #[test]
    fn like_terms_collect() {
        let p = poly(1, &[(&[1], 2.0), (&[1], -2.0), (&[0], 1.0)]);
        assert_eq!(p.terms().count(), 1);
        let x = Polynomial::variable(1, 0);
        let sq = &(&x + &Polynomial::constant(1, 1.0)).pow(2) - &x.pow(2);
        assert_eq!(sq, poly(1, &[(&[1], 2.0), (&[0], 1.0)]));
    }
}
