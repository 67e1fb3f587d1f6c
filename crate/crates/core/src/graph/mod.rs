//! Aromatic forests: directed graphs in which every node has at most one
//! outgoing arrow.
//!
//! A forest is stored as a successor map over `0..node_count`. Nodes without a
//! successor are roots. Connected components are either rooted trees (one root)
//! or aromas (a single directed cycle with rooted trees hanging off it).
//!
//! Isomorphism classes are represented by [`CanonicalString`], built from the
//! bracket grammar:
//!
//! ```text
//! tree      ::= '[' tree* ']'
//! cyclenode ::= '{' tree* '}'
//! aroma     ::= '(' cyclenode+ ')'
//! forest    ::= component (' ' component)*
//! ```

mod canonical;
mod composition;
mod enumerate;
mod parse;

pub use canonical::{CanonicalString, ComponentKind, Decomposition};
pub use composition::Composition;
pub use enumerate::{
    enumerate_trees, enumerate_trees_with_cap, max_order_from_env, tree_compositions,
    trees_by_composition, DEFAULT_MAX_ORDER, MAX_ORDER_ENV,
};
pub use parse::ParseError;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("successor {target} of node {node} is out of range for {count} nodes")]
    SuccessorOutOfRange {
        node: usize,
        target: usize,
        count: usize,
    },
    #[error("order {order} exceeds the enumeration cap {cap}")]
    OrderTooLarge { order: usize, cap: usize },
    #[error("order must be at least 1")]
    ZeroOrder,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A directed graph with at most one outgoing arrow per node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AromaticForest {
    successor: Vec<Option<usize>>,
}

impl AromaticForest {
    pub fn new(successor: Vec<Option<usize>>) -> Result<Self, GraphError> {
        let count = successor.len();
        for (node, s) in successor.iter().enumerate() {
            if let Some(target) = *s {
                if target >= count {
                    return Err(GraphError::SuccessorOutOfRange {
                        node,
                        target,
                        count,
                    });
                }
            }
        }
        Ok(Self { successor })
    }

    /// Builds a forest from an explicit arrow list `(source, target)`.
    ///
    /// Fails if a source appears twice, since that would give a node two
    /// outgoing arrows.
    pub fn from_arrows(node_count: usize, arrows: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut successor = vec![None; node_count];
        for &(s, t) in arrows {
            if s >= node_count || t >= node_count {
                return Err(GraphError::SuccessorOutOfRange {
                    node: s,
                    target: t,
                    count: node_count,
                });
            }
            if successor[s].is_some() {
                return Err(GraphError::Parse(ParseError::new(
                    0,
                    format!("node {s} has two outgoing arrows"),
                )));
            }
            successor[s] = Some(t);
        }
        Ok(Self { successor })
    }

    /// The empty forest. Its elementary differential is the empty product.
    pub fn empty() -> Self {
        Self {
            successor: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.successor.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.successor.iter().filter(|s| s.is_some()).count()
    }

    pub fn root_count(&self) -> usize {
        self.node_count() - self.arrow_count()
    }

    pub fn is_tree(&self) -> bool {
        self.root_count() == 1
    }

    pub fn successor(&self, node: usize) -> Option<usize> {
        self.successor[node]
    }

    pub fn successors(&self) -> &[Option<usize>] {
        &self.successor
    }

    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        self.successor
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_none())
            .map(|(v, _)| v)
    }

    /// In-neighbours of every node, each list in increasing node order.
    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut preds = vec![Vec::new(); self.node_count()];
        for (v, s) in self.successor.iter().enumerate() {
            if let Some(t) = *s {
                preds[t].push(v);
            }
        }
        preds
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.node_count()];
        for t in self.successor.iter().flatten() {
            deg[*t] += 1;
        }
        deg
    }

    /// Marks the nodes that lie on a directed cycle.
    pub fn cycle_nodes(&self) -> Vec<bool> {
        let n = self.node_count();
        // 0 = unvisited, 1 = on the current walk, 2 = finished
        let mut state = vec![0u8; n];
        let mut on_cycle = vec![false; n];
        let mut walk = Vec::new();
        for start in 0..n {
            if state[start] != 0 {
                continue;
            }
            walk.clear();
            let mut v = Some(start);
            while let Some(u) = v {
                match state[u] {
                    0 => {
                        state[u] = 1;
                        walk.push(u);
                        v = self.successor[u];
                    }
                    1 => {
                        // closed a new cycle: everything on the walk from u onwards
                        let pos = walk.iter().position(|&w| w == u).expect("u is on walk");
                        for &w in &walk[pos..] {
                            on_cycle[w] = true;
                        }
                        break;
                    }
                    _ => break,
                }
            }
            for &w in &walk {
                state[w] = 2;
            }
        }
        on_cycle
    }

    /// Applies a relabeling: node `v` becomes node `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.node_count(), "permutation size mismatch");
        let mut successor = vec![None; self.node_count()];
        for (v, s) in self.successor.iter().enumerate() {
            successor[perm[v]] = s.map(|t| perm[t]);
        }
        Self { successor }
    }

    pub fn composition(&self) -> Composition {
        Composition::of_forest(self)
    }

    pub fn canonicalize(&self) -> CanonicalString {
        canonical::canonicalize(self)
    }

    pub fn decompose(&self) -> Decomposition {
        canonical::decompose(self)
    }

    /// An isomorphic copy whose node numbering follows the order in which
    /// nodes appear in the canonical string.
    pub fn canonical_form(&self) -> Self {
        parse::parse(self.canonicalize().as_str()).expect("canonical strings always parse")
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse::parse(text)
    }

    /// Disjoint union; the nodes of `other` are shifted past those of `self`.
    pub fn union(&self, other: &Self) -> Self {
        let offset = self.node_count();
        let mut successor = self.successor.clone();
        successor.extend(other.successor.iter().map(|s| s.map(|t| t + offset)));
        Self { successor }
    }
}

impl std::str::FromStr for AromaticForest {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse::parse(s)
    }
}

impl std::fmt::Display for AromaticForest {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.canonicalize().as_str())
    }
}
