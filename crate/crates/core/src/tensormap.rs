//! Aromatic trees from permutations.
//!
//! Given a composition `κ` with `|κ| = |κ'| + 1`, nodes are numbered `1..=|κ|`
//! in ascending in-degree order and arrows `2..=|κ|` are handed out to the
//! incoming slots of the nodes in that order. This fixes the target map `τ`.
//! A permutation `σ` then supplies the source map `s(a) = σ⁻¹(a)`, and every
//! aromatic tree of composition `κ` arises from some `σ`.
//!
//! Ids here are 1-based to match the usual presentation; the forests produced
//! use 0-based node indices (`id - 1`).

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::graph::{AromaticForest, CanonicalString, Composition};

/// Default limit on `|κ|` for the `|κ|!` scan.
pub const MAX_ORBIT_SIZE: usize = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TensorMapError {
    #[error("composition {0} does not describe aromatic trees (|κ| != |κ'| + 1)")]
    NotATreeComposition(String),
    #[error("permutation acts on {perm} points but the numbering has {nodes} nodes")]
    SizeMismatch { perm: usize, nodes: usize },
    #[error("{0:?} is not a permutation of 1..=n")]
    InvalidPermutation(Vec<usize>),
    #[error("|κ| = {size} exceeds the permutation scan cap {cap}")]
    TooLarge { size: usize, cap: usize },
}

/// A bijection of `{1, …, n}` stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self, TensorMapError> {
        let n = image.len();
        let mut seen = vec![false; n + 1];
        for &i in &image {
            if i == 0 || i > n || seen[i] {
                return Err(TensorMapError::InvalidPermutation(image));
            }
            seen[i] = true;
        }
        Ok(Self(image))
    }

    pub fn identity(n: usize) -> Self {
        Self((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `σ(i)` for `i` in `1..=n`.
    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn image(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &s) in self.0.iter().enumerate() {
            inv[s - 1] = i + 1;
        }
        Self(inv)
    }

    /// All permutations of `1..=n` in lexicographic order of their images.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cur = Self::identity(n).0;
        loop {
            out.push(Self(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                return out;
            };
            let j = (i..n)
                .rev()
                .find(|&j| cur[j] > cur[i - 1])
                .expect("pivot exists");
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// Node numbering by in-degree blocks together with the target map `τ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockNumbering {
    composition: Composition,
    /// In-degree of node `id`, at index `id - 1`.
    in_degree: Vec<usize>,
    /// `τ(a)` for arrow `a`, at index `a - 2`.
    target: Vec<usize>,
}

impl BlockNumbering {
    pub fn composition(&self) -> &Composition {
        &self.composition
    }

    pub fn node_count(&self) -> usize {
        self.in_degree.len()
    }

    /// Arrow ids, `2..=|κ|`.
    pub fn arrows(&self) -> std::ops::RangeInclusive<usize> {
        2..=self.node_count()
    }

    /// `τ(arrow)` for `arrow` in `2..=|κ|`.
    pub fn target(&self, arrow: usize) -> usize {
        self.target[arrow - 2]
    }

    pub fn in_degree(&self, node: usize) -> usize {
        self.in_degree[node - 1]
    }
}

/// The deterministic numbering for `κ`: node ids ascend with in-degree, and
/// arrow ids fill incoming slots in node order.
pub fn target_map(kappa: &Composition) -> Result<BlockNumbering, TensorMapError> {
    if !kappa.is_tree_composition() {
        return Err(TensorMapError::NotATreeComposition(kappa.to_string()));
    }
    let mut in_degree = Vec::with_capacity(kappa.size());
    for (j, &count) in kappa.counts().iter().enumerate() {
        in_degree.extend(std::iter::repeat(j).take(count));
    }
    let mut target = Vec::with_capacity(kappa.derived_size());
    for (node, &j) in in_degree.iter().enumerate() {
        target.extend(std::iter::repeat(node + 1).take(j));
    }
    Ok(BlockNumbering {
        composition: kappa.clone(),
        in_degree,
        target,
    })
}

/// The aromatic tree with arrows `a ∈ 2..=|κ|`, `s(a) = σ⁻¹(a)` and `t(a) = τ(a)`.
pub fn perm_to_tree(
    sigma: &Permutation,
    numbering: &BlockNumbering,
) -> Result<AromaticForest, TensorMapError> {
    let n = numbering.node_count();
    if sigma.len() != n {
        return Err(TensorMapError::SizeMismatch {
            perm: sigma.len(),
            nodes: n,
        });
    }
    let inv = sigma.inverse();
    let arrows: Vec<(usize, usize)> = numbering
        .arrows()
        .map(|a| (inv.apply(a) - 1, numbering.target(a) - 1))
        .collect();
    Ok(AromaticForest::from_arrows(n, &arrows).expect("σ⁻¹ is injective on arrows"))
}

/// Groups all `|κ|!` permutations by the canonical string of their tree.
pub fn orbit_classes(
    kappa: &Composition,
) -> Result<BTreeMap<CanonicalString, Vec<Permutation>>, TensorMapError> {
    orbit_classes_with_cap(kappa, MAX_ORBIT_SIZE)
}

pub fn orbit_classes_with_cap(
    kappa: &Composition,
    cap: usize,
) -> Result<BTreeMap<CanonicalString, Vec<Permutation>>, TensorMapError> {
    let numbering = target_map(kappa)?;
    let n = numbering.node_count();
    if n > cap {
        return Err(TensorMapError::TooLarge { size: n, cap });
    }
    let mut classes: BTreeMap<CanonicalString, Vec<Permutation>> = BTreeMap::new();
    for sigma in Permutation::all(n) {
        let tree = perm_to_tree(&sigma, &numbering)?.canonicalize();
        classes.entry(tree).or_default().push(sigma);
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kappa(s: &str) -> Composition {
        s.parse().unwrap()
    }

    fn perm(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn target_map_examples() {
        let t = target_map(&kappa("(2,0,1)")).unwrap();
        assert_eq!((t.target(2), t.target(3)), (3, 3));
        assert_eq!(t.node_count(), 3);

        let t = target_map(&kappa("(1)")).unwrap();
        assert_eq!(t.arrows().count(), 0);

        let t = target_map(&kappa("(1,1)")).unwrap();
        assert_eq!(t.target(2), 2);

        assert!(matches!(
            target_map(&kappa("(2,1)")),
            Err(TensorMapError::NotATreeComposition(_))
        ));
    }

    #[test]
    fn each_node_receives_its_in_degree() {
        let t = target_map(&kappa("(3,1,2)")).unwrap();
        let mut received = vec![0; t.node_count()];
        for a in t.arrows() {
            received[t.target(a) - 1] += 1;
        }
        for node in 1..=t.node_count() {
            assert_eq!(received[node - 1], t.in_degree(node));
        }
    }

    #[test]
    fn perm_to_tree_examples() {
        let t = target_map(&kappa("(2,0,1)")).unwrap();
        let c = |p: &[usize]| {
            perm_to_tree(&perm(p), &t)
                .unwrap()
                .canonicalize()
                .into_string()
        };
        assert_eq!(c(&[1, 2, 3]), "({[]}) []");
        assert_eq!(c(&[2, 3, 1]), "[[][]]");
        assert_eq!(c(&[3, 2, 1]), "[[][]]");
    }

    #[test]
    fn root_is_preimage_of_one() {
        let t = target_map(&kappa("(3,1,2)")).unwrap();
        for sigma in Permutation::all(6) {
            let tree = perm_to_tree(&sigma, &t).unwrap();
            let roots: Vec<usize> = tree.roots().collect();
            assert_eq!(roots, vec![sigma.inverse().apply(1) - 1]);
            assert_eq!(tree.composition(), kappa("(3,1,2)"));
        }
    }

    #[test]
    fn size_mismatch() {
        let t = target_map(&kappa("(2,0,1)")).unwrap();
        assert!(matches!(
            perm_to_tree(&Permutation::identity(2), &t),
            Err(TensorMapError::SizeMismatch { perm: 2, nodes: 3 })
        ));
    }

    #[test]
    fn orbit_examples() {
        let classes = orbit_classes(&kappa("(2,0,1)")).unwrap();
        let mut sizes: Vec<usize> = classes.values().map(Vec::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 4]);

        let classes = orbit_classes(&kappa("(1)")).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes.values().next().unwrap().len(), 1);

        let classes = orbit_classes(&kappa("(1,1)")).unwrap();
        let keys: Vec<&str> = classes.keys().map(|k| k.as_str()).collect();
        assert_eq!(keys, vec!["({}) []", "[[]]"]);
        assert!(classes.values().all(|v| v.len() == 1));
    }

    #[test]
    fn orbit_cap() {
        assert!(matches!(
            orbit_classes_with_cap(&kappa("(3,1,2)"), 5),
            Err(TensorMapError::TooLarge { size: 6, cap: 5 })
        ));
    }

    #[test]
    fn permutations() {
        assert_eq!(Permutation::all(3).len(), 6);
        assert_eq!(Permutation::all(5).len(), 120);
        assert_eq!(Permutation::all(0).len(), 1);
        let p = perm(&[2, 3, 1]);
        assert_eq!(p.inverse(), perm(&[3, 1, 2]));
        assert_eq!(p.to_string(), "(2,3,1)");
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
    }
}
