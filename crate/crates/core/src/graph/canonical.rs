use std::fmt;

use serde::{Deserialize, Serialize};

use super::AromaticForest;

/// Canonical text of an isomorphism class of aromatic forests.
///
/// Two forests are isomorphic iff their canonical strings are equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalString(String);

impl CanonicalString {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    /// Parses and re-canonicalizes arbitrary grammar text.
    pub fn from_text(text: &str) -> Result<Self, super::ParseError> {
        Ok(super::parse::parse(text)?.canonicalize())
    }

    pub fn to_forest(&self) -> AromaticForest {
        super::parse::parse(&self.0).expect("canonical strings always parse")
    }

    /// Number of nodes, read off the bracket structure.
    pub fn node_count(&self) -> usize {
        self.0.bytes().filter(|b| matches!(b, b'[' | b'{')).count()
    }
}

impl fmt::Display for CanonicalString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for CanonicalString {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentKind {
    Tree,
    Aroma,
}

/// Connected components of a forest, split into rooted trees and aromas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub trees: Vec<CanonicalString>,
    pub aromas: Vec<CanonicalString>,
}

impl Decomposition {
    /// Joins the components back into the canonical string of the forest.
    pub fn reassemble(&self) -> CanonicalString {
        let mut parts: Vec<&str> = self
            .trees
            .iter()
            .chain(self.aromas.iter())
            .map(|c| c.as_str())
            .collect();
        parts.sort_unstable();
        CanonicalString(parts.join(" "))
    }
}

struct Canonicalizer<'a> {
    preds: Vec<Vec<usize>>,
    on_cycle: Vec<bool>,
    forest: &'a AromaticForest,
}

impl Canonicalizer<'_> {
    fn hanging_trees(&self, v: usize) -> Vec<String> {
        let mut children: Vec<String> = self.preds[v]
            .iter()
            .filter(|&&u| !self.on_cycle[u])
            .map(|&u| self.tree(u))
            .collect();
        children.sort_unstable();
        children
    }

    fn tree(&self, v: usize) -> String {
        let mut s = String::from("[");
        for c in self.hanging_trees(v) {
            s.push_str(&c);
        }
        s.push(']');
        s
    }

    fn cycle_node(&self, v: usize) -> String {
        let mut s = String::from("{");
        for c in self.hanging_trees(v) {
            s.push_str(&c);
        }
        s.push('}');
        s
    }

    /// Cycle through `start`, listed along the arrows, rotated to the
    /// lexicographically smallest concatenation.
    fn aroma(&self, start: usize) -> (String, Vec<usize>) {
        let mut cycle = vec![start];
        let mut v = self.forest.successor[start].expect("cycle node has a successor");
        while v != start {
            cycle.push(v);
            v = self.forest.successor[v].expect("cycle node has a successor");
        }
        let parts: Vec<String> = cycle.iter().map(|&v| self.cycle_node(v)).collect();
        let best = (0..parts.len())
            .map(|r| {
                let mut s = String::new();
                for i in 0..parts.len() {
                    s.push_str(&parts[(r + i) % parts.len()]);
                }
                s
            })
            .min()
            .expect("cycle is non-empty");
        (format!("({best})"), cycle)
    }

    fn components(&self) -> Vec<(ComponentKind, String)> {
        let n = self.forest.node_count();
        let mut out = Vec::new();
        for v in self.forest.roots() {
            out.push((ComponentKind::Tree, self.tree(v)));
        }
        let mut seen = vec![false; n];
        for v in 0..n {
            if self.on_cycle[v] && !seen[v] {
                let (s, cycle) = self.aroma(v);
                for u in cycle {
                    seen[u] = true;
                }
                out.push((ComponentKind::Aroma, s));
            }
        }
        out
    }
}

fn components(forest: &AromaticForest) -> Vec<(ComponentKind, String)> {
    Canonicalizer {
        preds: forest.predecessors(),
        on_cycle: forest.cycle_nodes(),
        forest,
    }
    .components()
}

pub(super) fn canonicalize(forest: &AromaticForest) -> CanonicalString {
    let mut parts: Vec<String> = components(forest).into_iter().map(|(_, s)| s).collect();
    parts.sort_unstable();
    CanonicalString(parts.join(" "))
}

pub(super) fn decompose(forest: &AromaticForest) -> Decomposition {
    let mut trees = Vec::new();
    let mut aromas = Vec::new();
    for (kind, s) in components(forest) {
        match kind {
            ComponentKind::Tree => trees.push(CanonicalString(s)),
            ComponentKind::Aroma => aromas.push(CanonicalString(s)),
        }
    }
    trees.sort_unstable();
    aromas.sort_unstable();
    Decomposition { trees, aromas }
}
