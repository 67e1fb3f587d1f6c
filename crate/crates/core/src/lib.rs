//! Aromatic B-series made computable.
//!
//! * [`graph`]: aromatic forests, canonical strings, compositions, enumeration.
//! * [`polyfield`]: polynomial vector fields and the affine group action.
//! * [`eldiff`]: elementary differentials of aromatic forests.
//! * [`series`]: truncated aromatic B-series and the known degeneracies.
//! * [`tensormap`]: permutations to aromatic trees through a block numbering.
//! * [`ark`]: aromatic Runge–Kutta methods.
//! * [`checks`]: randomized property checks with reproducible reports.
//! * [`cli`]: the `aromatic` command line.

pub mod ark;
pub mod checks;
pub mod cli;
pub mod eldiff;
pub mod graph;
pub mod polyfield;
pub mod series;
pub mod tensormap;

pub use graph::{AromaticForest, CanonicalString, Composition};
pub use polyfield::{AffineMap, PolyVectorField, Polynomial};
