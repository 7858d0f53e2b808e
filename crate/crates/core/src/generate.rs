//! Discrete-time growth rules for the five models.

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::model::ModelSpec;
use crate::rng::stream_rng;
use crate::tree::{RootedTree, MAX_NODES};

#[derive(Debug, Error)]
pub enum GenError {
    #[error("n must be at least 1")]
    ZeroN,
    #[error("requested tree of {0} nodes exceeds the cap of {MAX_NODES}")]
    TooLarge(u64),
}

/// Grows a tree of the given model by its discrete rule, deterministically in
/// `(spec, n, seed)`. The meaning of `n` is per model: node count for RRT,
/// BST and PA; internal node count for XBST (the tree then has `2n+1`
/// nodes); key count for MARY (nodes hold 1..m-1 keys each).
pub fn gen_discrete(spec: &ModelSpec, n: u64, seed: u64) -> Result<RootedTree, GenError> {
    gen_discrete_with_stream(spec, n, seed, 0)
}

/// Same as [`gen_discrete`] but on random stream `stream`; Monte Carlo trial
/// `k` uses stream `k` so that trials are independent yet reproducible.
pub fn gen_discrete_with_stream(
    spec: &ModelSpec,
    n: u64,
    seed: u64,
    stream: u64,
) -> Result<RootedTree, GenError> {
    let mut rng = stream_rng(seed, stream);
    gen_discrete_with_rng(spec, n, &mut rng)
}

pub(crate) fn gen_discrete_with_rng<R: Rng + ?Sized>(
    spec: &ModelSpec,
    n: u64,
    rng: &mut R,
) -> Result<RootedTree, GenError> {
    if n == 0 {
        return Err(GenError::ZeroN);
    }
    let nodes_needed = match spec {
        ModelSpec::Xbst { .. } => 2 * n + 1,
        _ => n,
    };
    if nodes_needed > MAX_NODES {
        return Err(GenError::TooLarge(nodes_needed));
    }
    Ok(match *spec {
        ModelSpec::Rrt => gen_rrt(n as u32, rng),
        ModelSpec::Bst => gen_bst(n as u32, rng).0,
        ModelSpec::Pa {
            chi,
            rho,
            root_rate_lambda,
        } => gen_pa(n as u32, chi, rho, root_rate_lambda, rng),
        ModelSpec::Xbst { .. } => gen_xbst(n as u32, rng),
        ModelSpec::Mary { m } => gen_mary(n, m, rng),
    })
}

/// Node `k` attaches to a uniform node among `0..k`.
fn gen_rrt<R: Rng + ?Sized>(n: u32, rng: &mut R) -> RootedTree {
    let mut tree = RootedTree::singleton();
    for k in 1..n {
        let parent = rng.random_range(0..k);
        tree.add_child(parent);
    }
    tree
}

const NONE: u32 = u32::MAX;

/// Inserts a uniformly random permutation by binary-search-tree rules.
/// Also returns the (left, right) slot tables so the extended variant can
/// fill the empty slots.
fn gen_bst<R: Rng + ?Sized>(n: u32, rng: &mut R) -> (RootedTree, Vec<[u32; 2]>) {
    let mut keys: Vec<u32> = (0..n).collect();
    keys.shuffle(rng);
    let mut tree = RootedTree::singleton();
    // key stored at node v, and its left/right child slots
    let mut key = vec![0u32; 1];
    let mut slots = vec![[NONE, NONE]];
    key[0] = keys[0];
    for &k in &keys[1..] {
        let mut v = 0u32;
        loop {
            let side = usize::from(k > key[v as usize]);
            let next = slots[v as usize][side];
            if next == NONE {
                let c = tree.add_child(v);
                slots[v as usize][side] = c;
                key.push(k);
                slots.push([NONE, NONE]);
                break;
            }
            v = next;
        }
    }
    (tree, slots)
}

/// Node `k+1` picks its parent `v` with probability proportional to
/// `chi * outdeg(v) + base(v)`, where `base` is `lambda` at the root and
/// `rho` elsewhere. Weights live in a Fenwick tree so each step is
/// O(log n); with `chi < 0` a node's weight reaches exactly 0 at outdegree
/// `rho/|chi|` and it can no longer be chosen.
fn gen_pa<R: Rng + ?Sized>(n: u32, chi: f64, rho: f64, lambda: f64, rng: &mut R) -> RootedTree {
    let mut tree = RootedTree::singleton();
    let mut fen = Fenwick::new(n as usize);
    let mut weight = vec![0.0f64; n as usize];
    let base = |v: u32| if v == 0 { lambda } else { rho };
    weight[0] = lambda;
    fen.add(0, lambda);
    for k in 1..n {
        let x = rng.random::<f64>() * fen.total();
        let mut parent = fen.sample(x) as u32;
        if parent >= k || weight[parent as usize] <= 0.0 {
            // only reachable if x rounded up onto the total; take the last
            // node carrying positive weight
            parent = (0..k).rev().find(|&v| weight[v as usize] > 0.0).unwrap();
        }
        let v = tree.add_child(parent);
        weight.push(rho);
        fen.add(v as usize, rho);
        let d = tree.outdegree(parent) as f64;
        let updated = (chi * d + base(parent)).max(0.0);
        let delta = updated - weight[parent as usize];
        weight[parent as usize] = updated;
        fen.add(parent as usize, delta);
    }
    tree
}

/// Binary search tree on `n` internal nodes with external leaves attached at
/// every empty slot; the result has `2n + 1` nodes and every internal node
/// has exactly two children.
fn gen_xbst<R: Rng + ?Sized>(n: u32, rng: &mut R) -> RootedTree {
    let (mut tree, slots) = gen_bst(n, rng);
    for v in 0..n {
        for side in 0..2 {
            if slots[v as usize][side] == NONE {
                tree.add_child(v);
            }
        }
    }
    tree
}

/// Inserts `n` i.i.d. uniform keys by m-ary search-tree rules: a node holds
/// up to `m-1` sorted keys; once full, later keys descend into the child
/// subtree of the gap they fall in, and children materialize on first use.
fn gen_mary<R: Rng + ?Sized>(n: u64, m: u32, rng: &mut R) -> RootedTree {
    let cap = (m - 1) as usize;
    let mut tree = RootedTree::singleton();
    let mut keys: Vec<Vec<f64>> = vec![Vec::with_capacity(cap)];
    let mut child_slots: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..n {
        let x = rng.random::<f64>();
        let mut v = 0usize;
        loop {
            if keys[v].len() < cap {
                let pos = keys[v].partition_point(|&k| k < x);
                keys[v].insert(pos, x);
                if keys[v].len() == cap {
                    child_slots[v] = vec![NONE; m as usize];
                }
                break;
            }
            let gap = keys[v].partition_point(|&k| k < x);
            if child_slots[v][gap] == NONE {
                let c = tree.add_child(v as u32);
                child_slots[v][gap] = c;
                keys.push(Vec::with_capacity(cap));
                child_slots.push(Vec::new());
            }
            v = child_slots[v][gap] as usize;
        }
    }
    tree
}

/// Fenwick (binary indexed) tree over f64 weights, supporting point updates
/// and sampling an index from the weight distribution.
struct Fenwick {
    n: usize,
    bit: Vec<f64>,
    total: f64,
}

impl Fenwick {
    fn new(n: usize) -> Self {
        Fenwick {
            n,
            bit: vec![0.0; n + 1],
            total: 0.0,
        }
    }

    fn add(&mut self, index: usize, delta: f64) {
        self.total += delta;
        let mut i = index + 1;
        while i <= self.n {
            self.bit[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    fn total(&self) -> f64 {
        self.total
    }

    /// Largest index whose prefix weight is at most `x`; with `x` uniform on
    /// [0, total) this draws index `i` with probability `w_i / total`.
    fn sample(&self, mut x: f64) -> usize {
        let mut pos = 0usize;
        let mut step = self.n.next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next <= self.n && self.bit[next] <= x {
                x -= self.bit[next];
                pos = next;
            }
            step >>= 1;
        }
        pos
    }
}
