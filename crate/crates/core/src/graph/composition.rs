use std::fmt;
use std::str::FromStr;

use super::AromaticForest;

/// A finitely supported map `j ↦ κ(j)` counting nodes by in-degree.
///
/// Stored densely with trailing zeros trimmed, so equal maps compare equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Composition(Vec<usize>);

impl Composition {
    pub fn new(mut counts: Vec<usize>) -> Self {
        while counts.last() == Some(&0) {
            counts.pop();
        }
        Self(counts)
    }

    pub fn of_forest(forest: &AromaticForest) -> Self {
        let mut counts = Vec::new();
        for d in forest.in_degrees() {
            if d >= counts.len() {
                counts.resize(d + 1, 0);
            }
            counts[d] += 1;
        }
        Self::new(counts)
    }

    pub fn get(&self, j: usize) -> usize {
        self.0.get(j).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    /// `|κ| = Σ κ(j)`, the node count.
    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// `|κ'| = Σ j κ(j)`, the arrow count.
    pub fn derived_size(&self) -> usize {
        self.0.iter().enumerate().map(|(j, c)| j * c).sum()
    }

    /// `κ'(j) = j κ(j)`.
    pub fn derived(&self) -> Self {
        Self::new(self.0.iter().enumerate().map(|(j, c)| j * c).collect())
    }

    /// True iff `|κ| = |κ'| + 1`, i.e. forests of this composition are trees.
    pub fn is_tree_composition(&self) -> bool {
        self.size() == self.derived_size() + 1
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("(0)");
        }
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for Composition {
    type Err = String;

    /// Accepts `(2,0,1)` or `2,0,1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let counts = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|e| format!("bad composition entry {p:?}: {e}"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(counts))
    }
}
