//! Elementary differentials of aromatic forests on polynomial vector fields.
//!
//! Every node `v` with label `j` contributes the factor `f^j_{i_1…i_m}(x)`
//! where `i_1…i_m` are the labels of the nodes pointing at `v`; the product is
//! summed over all labelings in `0..d`. A root keeps its label free, so a
//! forest with one root gives a vector and a rootless forest gives a scalar.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::AromaticForest;
use crate::polyfield::{FieldError, PolyVectorField};

/// Largest node count accepted by the evaluators; the cost is `d^n`.
pub const MAX_EVAL_NODES: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("expected a forest with {expected} root(s), found {found}")]
    RootCount { expected: usize, found: usize },
    #[error("{nodes} nodes exceed the evaluation cap of {cap}")]
    TooManyNodes { nodes: usize, cap: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Values of all partial derivatives of `f` at `x`, grouped by order.
///
/// `tables[m][k * d^m + Σ_r i_r d^(m-1-r)]` holds `∂^m f^k/∂x_{i_1}…∂x_{i_m}`.
struct JetTables {
    dim: usize,
    tables: Vec<Vec<f64>>,
}

impl JetTables {
    fn new(f: &PolyVectorField, x: &[f64], max_order: usize) -> Self {
        let d = f.dim();
        let mut cache: HashMap<(usize, Vec<usize>), f64> = HashMap::new();
        let mut tables = Vec::with_capacity(max_order + 1);
        for m in 0..=max_order {
            let len = d.pow(m as u32 + 1);
            let mut table = Vec::with_capacity(len);
            let mut idx = vec![0usize; m];
            for flat in 0..len {
                let k = flat / d.pow(m as u32);
                let mut rest = flat % d.pow(m as u32);
                for r in (0..m).rev() {
                    idx[r] = rest % d;
                    rest /= d;
                }
                let mut key = idx.clone();
                key.sort_unstable();
                let v = *cache.entry((k, key)).or_insert_with_key(|(k, key)| {
                    f.partial(*k, key)
                        .expect("indices are in range")
                        .eval_unchecked(x)
                });
                table.push(v);
            }
            tables.push(table);
        }
        Self { dim: d, tables }
    }
}

/// The forest in canonical numbering with its in-neighbour lists.
struct Contraction {
    forest: AromaticForest,
    preds: Vec<Vec<usize>>,
}

impl Contraction {
    fn new(forest: &AromaticForest) -> Result<Self, EvalError> {
        let nodes = forest.node_count();
        if nodes > MAX_EVAL_NODES {
            return Err(EvalError::TooManyNodes {
                nodes,
                cap: MAX_EVAL_NODES,
            });
        }
        let forest = forest.canonical_form();
        let preds = forest.predecessors();
        Ok(Self { forest, preds })
    }

    fn max_in_degree(&self) -> usize {
        self.preds.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Sums the node products over all labelings, with `fixed` nodes held at
    /// the given labels. Labelings are visited in lexicographic order.
    fn sum(&self, jets: &JetTables, fixed: &[(usize, usize)]) -> f64 {
        let d = jets.dim;
        let n = self.forest.node_count();
        let mut labels = vec![0usize; n];
        let mut free = vec![true; n];
        for &(v, l) in fixed {
            labels[v] = l;
            free[v] = false;
        }
        let free_nodes: Vec<usize> = (0..n).filter(|&v| free[v]).collect();
        let mut total = 0.0;
        loop {
            let mut prod = 1.0;
            for v in 0..n {
                let p = &self.preds[v];
                let mut flat = labels[v];
                for &u in p {
                    flat = flat * d + labels[u];
                }
                prod *= jets.tables[p.len()][flat];
                if prod == 0.0 {
                    break;
                }
            }
            total += prod;

            // odometer over free nodes, last node fastest
            let mut i = free_nodes.len();
            loop {
                if i == 0 {
                    return total;
                }
                i -= 1;
                let v = free_nodes[i];
                labels[v] += 1;
                if labels[v] < d {
                    break;
                }
                labels[v] = 0;
            }
        }
    }
}

/// `F(γ)(f)(x)` for an aromatic tree `γ` (exactly one root).
pub fn eval_vector(
    tree: &AromaticForest,
    f: &PolyVectorField,
    x: &[f64],
) -> Result<Vec<f64>, EvalError> {
    if tree.root_count() != 1 {
        return Err(EvalError::RootCount {
            expected: 1,
            found: tree.root_count(),
        });
    }
    check_point(f, x)?;
    let c = Contraction::new(tree)?;
    let root = c.forest.roots().next().expect("one root");
    let jets = JetTables::new(f, x, c.max_in_degree());
    Ok((0..f.dim()).map(|k| c.sum(&jets, &[(root, k)])).collect())
}

/// Full contraction of a rootless forest. The empty forest gives 1.
pub fn eval_scalar(
    forest: &AromaticForest,
    f: &PolyVectorField,
    x: &[f64],
) -> Result<f64, EvalError> {
    if forest.root_count() != 0 {
        return Err(EvalError::RootCount {
            expected: 0,
            found: forest.root_count(),
        });
    }
    check_point(f, x)?;
    let c = Contraction::new(forest)?;
    let jets = JetTables::new(f, x, c.max_in_degree());
    Ok(c.sum(&jets, &[]))
}

fn check_point(f: &PolyVectorField, x: &[f64]) -> Result<(), EvalError> {
    if x.len() != f.dim() {
        return Err(FieldError::DimensionMismatch {
            expected: f.dim(),
            got: x.len(),
        }
        .into());
    }
    Ok(())
}

/// Returns `(F(γ)(c f)(x), c^n F(γ)(f)(x))` with `n` the node count.
pub fn eval_homogeneity_check(
    tree: &AromaticForest,
    f: &PolyVectorField,
    x: &[f64],
    c: f64,
) -> Result<(Vec<f64>, Vec<f64>), EvalError> {
    let scaled = eval_vector(tree, &f.scale(c), x)?;
    let factor = c.powi(tree.node_count() as i32);
    let base = eval_vector(tree, f, x)?
        .into_iter()
        .map(|v| factor * v)
        .collect();
    Ok((scaled, base))
}

const INDEX_LETTERS: &[&str] = &[
    "i", "j", "m", "n", "p", "q", "r", "s", "t", "u", "v", "w", "l", "a", "b", "c", "d", "e", "g",
    "h", "o", "x", "y", "z",
];

/// Einstein-notation contraction string such as `f^k_{ij} f^i_m f^m f^j`.
///
/// The first root is labelled `k`; other nodes get letters breadth-first
/// within each component, and factors are listed depth-first in canonical
/// order.
pub fn index_string(forest: &AromaticForest) -> String {
    let forest = forest.canonical_form();
    let n = forest.node_count();
    let preds = forest.predecessors();
    let on_cycle = forest.cycle_nodes();

    // component starts in canonical order: roots (trees) come after aromas in
    // the string, but trees are printed first
    let roots: Vec<usize> = forest.roots().collect();
    let mut cycle_starts = Vec::new();
    let mut seen = vec![false; n];
    for v in 0..n {
        if on_cycle[v] && !seen[v] {
            let mut u = v;
            loop {
                seen[u] = true;
                u = forest.successor(u).expect("cycle node");
                if u == v {
                    break;
                }
            }
            cycle_starts.push(v);
        }
    }

    let mut names: Vec<Option<String>> = vec![None; n];
    let mut next_letter = 0usize;
    let mut fresh = |names: &mut Vec<Option<String>>, v: usize| {
        let name = match INDEX_LETTERS.get(next_letter) {
            Some(l) => (*l).to_string(),
            None => format!("i{}", next_letter - INDEX_LETTERS.len() + 1),
        };
        next_letter += 1;
        names[v] = Some(name);
    };

    let mut order: Vec<Vec<usize>> = roots.iter().map(|&r| vec![r]).collect();
    for &c in &cycle_starts {
        let mut cycle = vec![c];
        let mut u = forest.successor(c).expect("cycle node");
        while u != c {
            cycle.push(u);
            u = forest.successor(u).expect("cycle node");
        }
        order.push(cycle);
    }
    // each component is named in full, breadth-first, before the next
    for (idx, start) in order.iter().enumerate() {
        for &v in start {
            if idx == 0 && !roots.is_empty() {
                names[v] = Some("k".to_string());
            } else {
                fresh(&mut names, v);
            }
        }
        let mut queue: std::collections::VecDeque<usize> = start.iter().copied().collect();
        while let Some(v) = queue.pop_front() {
            for &u in &preds[v] {
                if names[u].is_none() {
                    fresh(&mut names, u);
                    queue.push_back(u);
                }
            }
        }
    }

    let factor = |v: usize| -> String {
        let upper = names[v].as_deref().expect("named");
        let lower: Vec<&str> = preds[v]
            .iter()
            .map(|&u| names[u].as_deref().expect("named"))
            .collect();
        let wrap = |s: &str| {
            if s.chars().count() == 1 {
                s.to_string()
            } else {
                format!("{{{s}}}")
            }
        };
        let mut out = format!("f^{}", wrap(upper));
        if !lower.is_empty() {
            out.push('_');
            out.push_str(&wrap(&lower.concat()));
        }
        out
    };

    // depth-first listing: hanging trees follow their node, cycles in order
    fn visit(v: usize, preds: &[Vec<usize>], on_cycle: &[bool], out: &mut Vec<usize>) {
        out.push(v);
        for &u in &preds[v] {
            if !on_cycle[u] {
                visit(u, preds, on_cycle, out);
            }
        }
    }
    let mut listing = Vec::with_capacity(n);
    for start in &order {
        for &v in start {
            visit(v, &preds, &on_cycle, &mut listing);
        }
    }
    listing
        .into_iter()
        .map(factor)
        .collect::<Vec<_>>()
        .join(" ")
}
