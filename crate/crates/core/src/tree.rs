//! Index-addressed rooted trees and their line-based text format.

use std::io::{self, Write};

use thiserror::Error;

/// Hard cap on node count; indices always fit in `u32`.
pub const MAX_NODES: u64 = (1 << 31) - 1;

const NO_PARENT: u32 = u32::MAX;

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("tree must have at least one node")]
    Empty,
    #[error("node count {0} exceeds the cap of {MAX_NODES}")]
    TooLarge(u64),
    #[error("node {node}: parent index {parent} is out of range")]
    ParentOutOfRange { node: u32, parent: i64 },
    #[error("node {0} is its own parent")]
    SelfParent(u32),
    #[error("expected exactly one root, found {0}")]
    RootCount(u64),
    #[error("node {0} is not reachable from the root")]
    Unreachable(u32),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A rooted tree on nodes `0..node_count()`.
///
/// Children are kept in birth order, i.e. the order in which they were
/// attached. No quantity computed by this crate depends on that order; tests
/// shuffle children to enforce it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    root: u32,
    parent: Vec<u32>, // NO_PARENT at the root
    children: Vec<Vec<u32>>,
}

impl RootedTree {
    /// A single-node tree (node 0 is the root).
    pub fn singleton() -> Self {
        RootedTree {
            root: 0,
            parent: vec![NO_PARENT],
            children: vec![Vec::new()],
        }
    }

    /// Attaches a new node under `parent` and returns its index. New nodes
    /// get the next free index, so indices follow birth order.
    pub fn add_child(&mut self, parent: u32) -> u32 {
        assert!((parent as usize) < self.parent.len(), "parent out of range");
        assert!(self.parent.len() < MAX_NODES as usize, "node cap exceeded");
        let v = self.parent.len() as u32;
        self.parent.push(parent);
        self.children.push(Vec::new());
        self.children[parent as usize].push(v);
        v
    }

    /// Builds a tree from per-node parents (`None` marks the root). Children
    /// lists come out in index order. Rejects malformed inputs: multiple or
    /// missing roots, out-of-range parents, cycles.
    pub fn from_parents(parents: &[Option<u32>]) -> Result<Self, TreeError> {
        if parents.is_empty() {
            return Err(TreeError::Empty);
        }
        if parents.len() as u64 > MAX_NODES {
            return Err(TreeError::TooLarge(parents.len() as u64));
        }
        let n = parents.len();
        let mut root = None;
        let mut parent = vec![NO_PARENT; n];
        let mut children: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (v, p) in parents.iter().enumerate() {
            match *p {
                None => {
                    if root.is_some() {
                        return Err(TreeError::RootCount(2));
                    }
                    root = Some(v as u32);
                }
                Some(p) => {
                    if p as usize >= n {
                        return Err(TreeError::ParentOutOfRange {
                            node: v as u32,
                            parent: p as i64,
                        });
                    }
                    if p as usize == v {
                        return Err(TreeError::SelfParent(v as u32));
                    }
                    parent[v] = p;
                    children[p as usize].push(v as u32);
                }
            }
        }
        let root = root.ok_or(TreeError::RootCount(0))?;
        let tree = RootedTree {
            root,
            parent,
            children,
        };
        // Reachability doubles as the cycle check: a cycle in the parent
        // links leaves its nodes unreachable from the root.
        let mut seen = vec![false; n];
        let mut stack = vec![root];
        seen[root as usize] = true;
        let mut count = 1usize;
        while let Some(v) = stack.pop() {
            for &c in &tree.children[v as usize] {
                if !seen[c as usize] {
                    seen[c as usize] = true;
                    count += 1;
                    stack.push(c);
                }
            }
        }
        if count != n {
            let bad = seen.iter().position(|s| !s).unwrap() as u32;
            return Err(TreeError::Unreachable(bad));
        }
        Ok(tree)
    }

    /// Used by the simulators, which maintain parent/children consistently.
    pub(crate) fn from_parts(root: u32, parent: Vec<u32>, children: Vec<Vec<u32>>) -> Self {
        debug_assert_eq!(parent.len(), children.len());
        debug_assert_eq!(parent[root as usize], NO_PARENT);
        RootedTree {
            root,
            parent,
            children,
        }
    }

    pub fn node_count(&self) -> u32 {
        self.parent.len() as u32
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn parent(&self, v: u32) -> Option<u32> {
        let p = self.parent[v as usize];
        (p != NO_PARENT).then_some(p)
    }

    pub fn children(&self, v: u32) -> &[u32] {
        &self.children[v as usize]
    }

    pub fn outdegree(&self, v: u32) -> usize {
        self.children[v as usize].len()
    }

    pub fn is_leaf(&self, v: u32) -> bool {
        self.children[v as usize].is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = u32> + '_ {
        0..self.node_count()
    }

    /// Returns every node with its children preceding it, using an explicit
    /// stack; safe on path-like trees of depth ~10^5 and beyond.
    pub fn bottom_up_order(&self) -> Vec<u32> {
        let n = self.parent.len();
        let mut order = Vec::with_capacity(n);
        let mut stack = Vec::with_capacity(64);
        stack.push(self.root);
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend_from_slice(&self.children[v as usize]);
        }
        // In the visit order above a parent always precedes its descendants,
        // so the reverse lists children before parents.
        order.reverse();
        order
    }

    /// Randomly permutes every child list in place. Parent/child relations
    /// are untouched; only birth order is scrambled.
    pub fn shuffle_children<R: rand::Rng + ?Sized>(&mut self, rng: &mut R) {
        use rand::seq::SliceRandom;
        for list in &mut self.children {
            list.shuffle(rng);
        }
    }

    /// Serializes to the text format: first line is the node count, then one
    /// line per node in index order with its parent index (`-1` at the root).
    pub fn write_text<W: Write>(&self, w: &mut W) -> io::Result<()> {
        let mut s = String::with_capacity(self.parent.len() * 4 + 16);
        self.append_text(&mut s);
        w.write_all(s.as_bytes())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.parent.len() * 4 + 16);
        self.append_text(&mut s);
        s
    }

    fn append_text(&self, s: &mut String) {
        use std::fmt::Write as _;
        let _ = writeln!(s, "{}", self.parent.len());
        for &p in &self.parent {
            if p == NO_PARENT {
                s.push_str("-1\n");
            } else {
                let _ = writeln!(s, "{p}");
            }
        }
    }

    /// Parses the text format written by [`RootedTree::write_text`].
    /// `parse_text` and `to_text` round-trip bit-exactly.
    pub fn parse_text(input: &str) -> Result<Self, TreeError> {
        let mut lines = input.lines().enumerate();
        let (_, first) = lines.next().ok_or(TreeError::Parse {
            line: 1,
            msg: "missing node count".into(),
        })?;
        let n: u64 = first.trim().parse().map_err(|_| TreeError::Parse {
            line: 1,
            msg: format!("invalid node count {first:?}"),
        })?;
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if n > MAX_NODES {
            return Err(TreeError::TooLarge(n));
        }
        let mut parents = Vec::with_capacity(n as usize);
        for (idx, line) in lines {
            if parents.len() == n as usize {
                if line.trim().is_empty() {
                    continue;
                }
                return Err(TreeError::Parse {
                    line: idx + 1,
                    msg: format!("unexpected trailing line {line:?}"),
                });
            }
            let p: i64 = line.trim().parse().map_err(|_| TreeError::Parse {
                line: idx + 1,
                msg: format!("invalid parent index {line:?}"),
            })?;
            if p == -1 {
                parents.push(None);
            } else if p >= 0 && (p as u64) < n {
                parents.push(Some(p as u32));
            } else {
                return Err(TreeError::ParentOutOfRange {
                    node: parents.len() as u32,
                    parent: p,
                });
            }
        }
        if parents.len() != n as usize {
            return Err(TreeError::Parse {
                line: parents.len() + 1,
                msg: format!("expected {n} parent lines, found {}", parents.len()),
            });
        }
        Self::from_parents(&parents)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> RootedTree {
        let mut t = RootedTree::singleton();
        for v in 1..n {
            t.add_child(v as u32 - 1);
        }
        t
    }

    #[test]
    fn singleton_shape() {
        let t = RootedTree::singleton();
        assert_eq!(t.node_count(), 1);
        assert_eq!(t.root(), 0);
        assert_eq!(t.parent(0), None);
        assert!(t.is_leaf(0));
    }

    #[test]
    fn from_parents_accepts_arbitrary_root_position() {
        // root at index 2: 2 -> 0 -> 1, 2 -> 3
        let t = RootedTree::from_parents(&[Some(2), Some(0), None, Some(2)]).unwrap();
        assert_eq!(t.root(), 2);
        assert_eq!(t.children(2), &[0, 3]);
        assert_eq!(t.children(0), &[1]);
    }

    #[test]
    fn from_parents_rejects_malformed() {
        assert!(matches!(
            RootedTree::from_parents(&[]),
            Err(TreeError::Empty)
        ));
        assert!(matches!(
            RootedTree::from_parents(&[None, None]),
            Err(TreeError::RootCount(2))
        ));
        assert!(matches!(
            RootedTree::from_parents(&[Some(0)]),
            Err(TreeError::SelfParent(0))
        ));
        assert!(matches!(
            RootedTree::from_parents(&[None, Some(9)]),
            Err(TreeError::ParentOutOfRange { node: 1, parent: 9 })
        ));
        // 1 and 2 form a 2-cycle unreachable from the root.
        assert!(matches!(
            RootedTree::from_parents(&[None, Some(2), Some(1)]),
            Err(TreeError::Unreachable(_))
        ));
    }

    #[test]
    fn bottom_up_order_lists_children_first() {
        let t = path(5);
        let order = t.bottom_up_order();
        assert_eq!(order.len(), 5);
        let pos: Vec<usize> = (0..5u32)
            .map(|v| order.iter().position(|&x| x == v).unwrap())
            .collect();
        for v in t.nodes() {
            for &c in t.children(v) {
                assert!(pos[c as usize] < pos[v as usize]);
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let mut t = RootedTree::singleton();
        t.add_child(0);
        t.add_child(0);
        t.add_child(1);
        let text = t.to_text();
        assert_eq!(text, "4\n-1\n0\n0\n1\n");
        let back = RootedTree::parse_text(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(RootedTree::parse_text("").is_err());
        assert!(RootedTree::parse_text("0\n").is_err());
        assert!(RootedTree::parse_text("2\n-1\n").is_err());
        assert!(RootedTree::parse_text("2\n-1\n5\n").is_err());
        assert!(RootedTree::parse_text("1\n-1\nviolets\n").is_err());
        assert!(RootedTree::parse_text("2\n-1\n-1\n").is_err());
    }
}
