//! Phylogenetic trees with one internal edge for the splits of Δ(2,n).

use serde::Serialize;

use super::CensusError;
use crate::hypergeom::SplitHyperplane;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeSplit {
    pub n: usize,
    pub pair: (usize, usize),
    /// `[i+1, j]` in increasing order.
    pub left: Vec<usize>,
    /// The complement in cyclic order starting at `j+1`.
    pub right: Vec<usize>,
}

/// The leaf bipartition `([i+1, j], [n] \ [i+1, j])` of the split labelled by
/// the column `{i, j}`.
pub fn tree_split(n: usize, pair: (usize, usize)) -> Result<TreeSplit, CensusError> {
    let (i, j) = pair;
    if !(1 <= i && i < j && j <= n) {
        return Err(CensusError::Usage(format!("pair {{{i},{j}}} must satisfy 1 <= i < j <= {n}")));
    }
    if j == i + 1 || (i == 1 && j == n) {
        return Err(CensusError::FrozenPair { i, j, n });
    }
    let left: Vec<usize> = (i + 1..=j).collect();
    let right: Vec<usize> = (0..n - left.len()).map(|t| (j + t) % n + 1).collect();
    Ok(TreeSplit { n, pair, left, right })
}

impl TreeSplit {
    /// `x_{[i+1, j]} = 1` on Δ(2,n).
    pub fn hyperplane(&self) -> SplitHyperplane {
        let normal = (1..=self.n).map(|x| i64::from(self.left.contains(&x))).collect();
        SplitHyperplane { normal, rhs: 1 }
    }

    /// Caterpillar with two internal vertices joined by one internal edge.
    pub fn to_dot(&self) -> String {
        let (i, j) = self.pair;
        let mut s = format!("graph split_{i}_{j} {{\n");
        s.push_str("  node [shape=circle];\n");
        s.push_str("  u [label=\"\", shape=point];\n");
        s.push_str("  v [label=\"\", shape=point];\n");
        s.push_str("  u -- v;\n");
        for x in &self.left {
            s.push_str(&format!("  u -- \"{x}\";\n"));
        }
        for x in &self.right {
            s.push_str(&format!("  v -- \"{x}\";\n"));
        }
        s.push_str("}\n");
        s
    }

    /// Compatibility of two splits of `[n]` as tree splits: some pair of
    /// blocks is disjoint.
    pub fn compatible_with(&self, other: &TreeSplit) -> bool {
        let blocks = |t: &TreeSplit| [t.left.clone(), t.right.clone()];
        blocks(self)
            .iter()
            .any(|a| blocks(other).iter().any(|b| a.iter().all(|x| !b.contains(x))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let t = tree_split(7, (2, 5)).unwrap();
        assert_eq!(t.left, vec![3, 4, 5]);
        assert_eq!(t.right, vec![6, 7, 1, 2]);
        let t = tree_split(5, (1, 3)).unwrap();
        assert_eq!((t.left.clone(), t.right.clone()), (vec![2, 3], vec![4, 5, 1]));
        assert!(t.to_dot().contains("u -- v;"));
        assert!(matches!(tree_split(4, (1, 2)), Err(CensusError::FrozenPair { .. })));
        assert!(matches!(tree_split(4, (1, 4)), Err(CensusError::FrozenPair { .. })));
        assert!(matches!(tree_split(4, (3, 2)), Err(CensusError::Usage(_))));
    }
}
