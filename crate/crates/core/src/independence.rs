//! Independence numbers on rooted trees.
//!
//! For a rooted tree `T`, `I(T)` is the maximum size of an independent node
//! set, `I1(T)`/`I0(T)` the maxima over sets that do/don't contain the root,
//! and `ι(T) = I(T) − I0(T) ∈ {0,1}` the root's toll. A node is *essential*
//! when it lies in every maximum independent set of its fringe subtree,
//! which happens exactly when `ι = 1` there, i.e. when none of its children
//! is essential. Summing `ι` over all fringe subtrees recovers `I(T)`, so
//! one bottom-up pass computes everything.

use thiserror::Error;

use crate::tree::RootedTree;

/// Exhaustive search is only run on small trees.
pub const ORACLE_NODE_CAP: u32 = 25;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("brute-force oracle handles at most {ORACLE_NODE_CAP} nodes, got {0}")]
    TreeTooLarge(u32),
}

/// Per-node and tree-level independence quantities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceProfile {
    /// Max independent set size of the fringe subtree avoiding its root.
    pub i0: Vec<u64>,
    /// Max independent set size of the fringe subtree containing its root.
    pub i1: Vec<u64>,
    /// Max independent set size of the fringe subtree: `max(i0, i1)`.
    pub i: Vec<u64>,
    /// `i − i0` per node; 1 exactly when the node is essential.
    pub iota: Vec<u8>,
    /// Independence number of the whole tree.
    pub tree_i: u64,
    /// Maximum matching size, `|T| − I(T)`.
    pub matching: u64,
    /// Minimum vertex cover size; equals the matching number on trees.
    pub vertex_cover: u64,
    /// Multiplicity of eigenvalue 0 of the adjacency matrix, `2 I(T) − |T|`.
    pub nullity: i64,
}

impl IndependenceProfile {
    pub fn ratio(&self, tree: &RootedTree) -> f64 {
        self.tree_i as f64 / tree.node_count() as f64
    }
}

/// One bottom-up pass over the tree:
/// `i0(v) = Σ_c i(c)`, `i1(v) = 1 + Σ_c i0(c)`, `i = max(i0, i1)`.
pub fn independence_profile(tree: &RootedTree) -> IndependenceProfile {
    let n = tree.node_count() as usize;
    let mut i0 = vec![0u64; n];
    let mut i1 = vec![0u64; n];
    let mut i = vec![0u64; n];
    let mut iota = vec![0u8; n];
    for v in tree.bottom_up_order() {
        let vi = v as usize;
        let mut sum_i = 0u64;
        let mut sum_i0 = 0u64;
        for &c in tree.children(v) {
            sum_i += i[c as usize];
            sum_i0 += i0[c as usize];
        }
        i0[vi] = sum_i;
        i1[vi] = 1 + sum_i0;
        i[vi] = i0[vi].max(i1[vi]);
        iota[vi] = u8::from(i1[vi] > i0[vi]);
    }
    let tree_i = i[tree.root() as usize];
    let matching = n as u64 - tree_i;
    IndependenceProfile {
        i0,
        i1,
        i,
        iota,
        tree_i,
        matching,
        vertex_cover: matching,
        nullity: 2 * tree_i as i64 - n as i64,
    }
}

/// The essential nodes, in index order. The set is independent and has size
/// `I(T)`, so it is itself a maximum independent set.
pub fn essential_set(tree: &RootedTree) -> Vec<u32> {
    let profile = independence_profile(tree);
    (0..tree.node_count())
        .filter(|&v| profile.iota[v as usize] == 1)
        .collect()
}

/// Whether the root is essential (`ι(T) = 1`).
pub fn root_essential(tree: &RootedTree) -> bool {
    independence_profile(tree).iota[tree.root() as usize] == 1
}

/// Exact maximum independent set size by branch-and-bound over subsets,
/// deliberately independent of the bottom-up recursion it validates.
pub fn brute_force_independence(tree: &RootedTree) -> Result<u64, OracleError> {
    let n = tree.node_count();
    if n > ORACLE_NODE_CAP {
        return Err(OracleError::TreeTooLarge(n));
    }
    let n = n as usize;
    let mut adj = vec![0u64; n];
    for v in tree.nodes() {
        for &c in tree.children(v) {
            adj[v as usize] |= 1 << c;
            adj[c as usize] |= 1 << v;
        }
    }
    let all = if n == 64 { !0u64 } else { (1u64 << n) - 1 };
    Ok(u64::from(branch_bound(&adj, all)))
}

fn branch_bound(adj: &[u64], remaining: u64) -> u32 {
    if remaining == 0 {
        return 0;
    }
    // Pick a maximum-degree vertex of the remaining induced subgraph.
    let mut best = 0u32;
    let mut best_deg = 0u32;
    let mut bits = remaining;
    while bits != 0 {
        let v = bits.trailing_zeros();
        bits &= bits - 1;
        let d = (adj[v as usize] & remaining).count_ones();
        if d >= best_deg {
            best_deg = d;
            best = v;
        }
    }
    if best_deg == 0 {
        // Only isolated vertices left; take them all.
        return remaining.count_ones();
    }
    let closed = (adj[best as usize] & remaining) | (1 << best);
    if best_deg == 1 {
        // A vertex of degree <= 1 belongs to some maximum independent set.
        return 1 + branch_bound(adj, remaining & !closed);
    }
    let take = 1 + branch_bound(adj, remaining & !closed);
    let skip = branch_bound(adj, remaining & !(1u64 << best));
    take.max(skip)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree_from(parents: &[i64]) -> RootedTree {
        let opts: Vec<Option<u32>> = parents
            .iter()
            .map(|&p| (p >= 0).then_some(p as u32))
            .collect();
        RootedTree::from_parents(&opts).unwrap()
    }

    #[test]
    fn single_node_is_essential() {
        let t = RootedTree::singleton();
        let p = independence_profile(&t);
        assert_eq!(p.i[0], 1);
        assert_eq!(p.i0[0], 0);
        assert_eq!(p.i1[0], 1);
        assert_eq!(p.iota[0], 1);
        assert_eq!(p.tree_i, 1);
        assert_eq!(p.matching, 0);
        assert_eq!(p.nullity, 1);
        assert_eq!(essential_set(&t), vec![0]);
    }

    #[test]
    fn three_node_path() {
        // root - child - grandchild
        let t = tree_from(&[-1, 0, 1]);
        let p = independence_profile(&t);
        assert_eq!(p.tree_i, 2);
        assert_eq!(p.iota[0], 1);
        assert_eq!(p.iota[1], 0);
        assert_eq!(p.iota[2], 1);
        assert!(root_essential(&t));
    }

    #[test]
    fn star_with_three_leaves() {
        let t = tree_from(&[-1, 0, 0, 0]);
        let p = independence_profile(&t);
        assert_eq!(p.i[0], 3);
        assert_eq!(p.i0[0], 3);
        assert_eq!(p.i1[0], 1);
        assert_eq!(p.iota[0], 0);
        assert_eq!(p.tree_i, 3);
        assert_eq!(essential_set(&t), vec![1, 2, 3]);
    }

    #[test]
    fn complete_binary_tree_depth_two() {
        let t = tree_from(&[-1, 0, 0, 1, 1, 2, 2]);
        let p = independence_profile(&t);
        assert_eq!(p.tree_i, 5);
        assert_eq!(brute_force_independence(&t).unwrap(), 5);
        // Root plus the four leaves.
        assert_eq!(essential_set(&t), vec![0, 3, 4, 5, 6]);
    }

    #[test]
    fn brute_force_small_cases() {
        let p4 = tree_from(&[-1, 0, 1, 2]);
        assert_eq!(brute_force_independence(&p4).unwrap(), 2);
        let single = RootedTree::singleton();
        assert_eq!(brute_force_independence(&single).unwrap(), 1);
    }

    #[test]
    fn brute_force_rejects_large_trees() {
        let mut t = RootedTree::singleton();
        for _ in 0..ORACLE_NODE_CAP {
            t.add_child(0);
        }
        assert!(matches!(
            brute_force_independence(&t),
            Err(OracleError::TreeTooLarge(_))
        ));
    }

    #[test]
    fn essential_set_is_independent_and_maximum() {
        let t = tree_from(&[-1, 0, 0, 1, 1, 2, 4, 4, 5]);
        let p = independence_profile(&t);
        let ess = essential_set(&t);
        assert_eq!(ess.len() as u64, p.tree_i);
        for &v in &ess {
            if let Some(parent) = t.parent(v) {
                assert!(!ess.contains(&parent), "adjacent essentials at {v}");
            }
        }
        assert_eq!(brute_force_independence(&t).unwrap(), p.tree_i);
    }

    #[test]
    fn deep_path_does_not_overflow_stack() {
        let n = 200_000u32;
        let mut t = RootedTree::singleton();
        for v in 1..n {
            t.add_child(v - 1);
        }
        let p = independence_profile(&t);
        assert_eq!(p.tree_i, u64::from(n) / 2);
    }
}
