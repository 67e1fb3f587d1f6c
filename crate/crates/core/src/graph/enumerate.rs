use std::collections::{BTreeMap, BTreeSet};

use super::{AromaticForest, CanonicalString, Composition, GraphError};

pub const DEFAULT_MAX_ORDER: usize = 7;
pub const MAX_ORDER_ENV: &str = "AROMATIC_MAX_ORDER";

/// Enumeration cap, overridable through `AROMATIC_MAX_ORDER`.
pub fn max_order_from_env() -> usize {
    std::env::var(MAX_ORDER_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_ORDER)
}

pub fn enumerate_trees(order: usize) -> Result<Vec<CanonicalString>, GraphError> {
    enumerate_trees_with_cap(order, max_order_from_env())
}

/// All aromatic trees with `order` nodes, sorted by canonical string.
///
/// Node 0 is fixed as the root and every successor assignment of the
/// remaining nodes is visited, so the scan costs `order^(order-1)`
/// canonicalizations.
pub fn enumerate_trees_with_cap(
    order: usize,
    cap: usize,
) -> Result<Vec<CanonicalString>, GraphError> {
    if order == 0 {
        return Err(GraphError::ZeroOrder);
    }
    if order > cap {
        return Err(GraphError::OrderTooLarge { order, cap });
    }
    let mut digits = vec![0usize; order - 1];
    let mut seen = BTreeSet::new();
    loop {
        let successor = std::iter::once(None)
            .chain(digits.iter().map(|&t| Some(t)))
            .collect();
        seen.insert(AromaticForest { successor }.canonicalize());

        // odometer increment over base `order`
        let mut i = 0;
        loop {
            if i == digits.len() {
                return Ok(seen.into_iter().collect());
            }
            digits[i] += 1;
            if digits[i] < order {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Every composition `κ` with `|κ| = order` and `|κ'| = order - 1`.
pub fn tree_compositions(order: usize) -> Vec<Composition> {
    // distribute `arrows` over in-degrees j >= `j`; κ(0) absorbs the rest
    fn rec(j: usize, arrows: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if arrows == 0 {
            out.push(cur.clone());
            return;
        }
        if j > arrows {
            return;
        }
        for c in 0..=arrows / j {
            cur.push(c);
            rec(j + 1, arrows - c * j, cur, out);
            cur.pop();
        }
    }
    if order == 0 {
        return Vec::new();
    }
    let mut raw = Vec::new();
    rec(1, order - 1, &mut Vec::new(), &mut raw);
    let mut out: Vec<Composition> = raw
        .into_iter()
        .map(|upper| {
            let non_leaves: usize = upper.iter().sum();
            let mut counts = vec![order - non_leaves];
            counts.extend(upper);
            Composition::new(counts)
        })
        .collect();
    out.sort();
    out
}

/// Groups the enumerated trees of `order` by composition.
pub fn trees_by_composition(
    order: usize,
) -> Result<BTreeMap<Composition, Vec<CanonicalString>>, GraphError> {
    let mut map: BTreeMap<Composition, Vec<CanonicalString>> = BTreeMap::new();
    for t in enumerate_trees(order)? {
        map.entry(t.to_forest().composition()).or_default().push(t);
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let counts: Vec<usize> = (1..=4)
            .map(|n| enumerate_trees_with_cap(n, 7).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 2, 6, 16]);
    }

    #[test]
    fn order_two_trees() {
        let t = enumerate_trees_with_cap(2, 7).unwrap();
        let t: Vec<&str> = t.iter().map(|c| c.as_str()).collect();
        assert_eq!(t, vec!["({}) []", "[[]]"]);
    }

    #[test]
    fn guards() {
        assert_eq!(enumerate_trees_with_cap(0, 7), Err(GraphError::ZeroOrder));
        assert_eq!(
            enumerate_trees_with_cap(8, 7),
            Err(GraphError::OrderTooLarge { order: 8, cap: 7 })
        );
    }

    #[test]
    fn compositions_of_small_orders() {
        let show = |n| {
            tree_compositions(n)
                .iter()
                .map(|k| k.to_string())
                .collect::<Vec<_>>()
        };
        assert_eq!(show(1), vec!["(1)"]);
        assert_eq!(show(2), vec!["(1,1)"]);
        assert_eq!(show(3), vec!["(1,2)", "(2,0,1)"]);
        for n in 1..=6 {
            for k in tree_compositions(n) {
                assert_eq!(k.size(), n);
                assert!(k.is_tree_composition());
            }
        }
    }

    #[test]
    fn enumerated_compositions_are_exactly_the_tree_compositions() {
        for n in 1..=5 {
            let from_trees: BTreeSet<Composition> =
                trees_by_composition(n).unwrap().into_keys().collect();
            let all: BTreeSet<Composition> = tree_compositions(n).into_iter().collect();
            assert_eq!(from_trees, all, "order {n}");
        }
    }
}
