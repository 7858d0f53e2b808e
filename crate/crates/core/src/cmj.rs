//! Event-driven continuous-time simulation of the five models.
//!
//! Each model is a branching process: individuals are tree nodes, and a
//! node's children are born at the points of the node's own birth clock.
//! Simulation processes birth events in time order from a binary min-heap
//! and tracks a running total weight; `simulate_cmj` stops at the first
//! event where the weight reaches the target, `simulate_to_time` at a fixed
//! time horizon.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::Rng;
use thiserror::Error;

use crate::model::{ModelSpec, SizeMode};
use crate::rng::{exp_sample, stream_rng, StreamRng};
use crate::tree::RootedTree;

/// Default node-count guard: expected sizes grow like e^{alpha t}, so a
/// runaway horizon turns into a clean error instead of an effective hang.
pub const DEFAULT_SIZE_GUARD: u64 = 100_000_000;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("simulation reached {limit} nodes at time {at:.6}; raise the size guard or lower the horizon")]
    SizeGuard { limit: u64, at: f64 },
    #[error("target weight must be >= 1 and finite, got {0}")]
    InvalidTarget(f64),
    #[error("time horizon must be >= 0 and finite, got {0}")]
    InvalidHorizon(f64),
    #[error("event queue exhausted (model produced no further births)")]
    Exhausted,
}

/// A stopped simulation: the tree, per-node birth times (index order), the
/// stopping time, and the total weight at that moment.
#[derive(Clone, Debug)]
pub struct CmjOutcome {
    pub tree: RootedTree,
    pub birth_times: Vec<f64>,
    pub tau: f64,
    pub final_weight: f64,
}

impl CmjOutcome {
    /// Birth-time sidecar: one full-precision decimal per line, node-index
    /// order. The shortest round-trip representation is used, so parsing the
    /// line back yields the identical f64.
    pub fn birth_times_text(&self) -> String {
        let mut s = String::with_capacity(self.birth_times.len() * 20);
        for t in &self.birth_times {
            s.push_str(&format!("{t}"));
            s.push('\n');
        }
        s
    }
}

/// Runs the process until the total weight first reaches `n` (a real
/// target; weights jump by whole atoms, so the stopped weight may overshoot
/// and the tree may hold more than `ceil(n)` nodes). Returns the family tree
/// at that time and the stopping time itself.
pub fn simulate_cmj(spec: &ModelSpec, n: f64, seed: u64) -> Result<CmjOutcome, SimError> {
    simulate_cmj_with_stream(spec, n, seed, 0)
}

pub fn simulate_cmj_with_stream(
    spec: &ModelSpec,
    n: f64,
    seed: u64,
    stream: u64,
) -> Result<CmjOutcome, SimError> {
    let mut rng = stream_rng(seed, stream);
    simulate_cmj_with_rng(spec, n, &mut rng, DEFAULT_SIZE_GUARD)
}

pub(crate) fn simulate_cmj_with_rng(
    spec: &ModelSpec,
    n: f64,
    rng: &mut StreamRng,
    guard: u64,
) -> Result<CmjOutcome, SimError> {
    if !n.is_finite() || n < 1.0 {
        return Err(SimError::InvalidTarget(n));
    }
    let mut sim = Sim::start(spec, rng, guard);
    if sim.weight >= n {
        return Ok(sim.finish(0.0));
    }
    loop {
        let t = sim.step()?;
        if sim.weight >= n {
            return Ok(sim.finish(t));
        }
    }
}

/// The family tree of all individuals born up to time `t`.
pub fn simulate_to_time(spec: &ModelSpec, t: f64, seed: u64) -> Result<CmjOutcome, SimError> {
    simulate_to_time_with_stream(spec, t, seed, 0)
}

pub fn simulate_to_time_with_stream(
    spec: &ModelSpec,
    t: f64,
    seed: u64,
    stream: u64,
) -> Result<CmjOutcome, SimError> {
    let mut rng = stream_rng(seed, stream);
    simulate_to_time_with_rng(spec, t, &mut rng, DEFAULT_SIZE_GUARD)
}

pub(crate) fn simulate_to_time_with_rng(
    spec: &ModelSpec,
    t: f64,
    rng: &mut StreamRng,
    guard: u64,
) -> Result<CmjOutcome, SimError> {
    if !t.is_finite() || t < 0.0 {
        return Err(SimError::InvalidHorizon(t));
    }
    let mut sim = Sim::start(spec, rng, guard);
    while let Some(next) = sim.peek_time() {
        if next > t {
            break;
        }
        sim.step()?;
    }
    Ok(sim.finish(t))
}

/// Stops the process at an independent Exp(alpha) time. The root of the
/// resulting tree is essential with probability nu, and the tree itself is
/// the distributional limit of a uniformly random fringe subtree.
pub fn sample_fringe_tree(spec: &ModelSpec, seed: u64) -> Result<CmjOutcome, SimError> {
    sample_fringe_tree_with_stream(spec, seed, 0)
}

pub fn sample_fringe_tree_with_stream(
    spec: &ModelSpec,
    seed: u64,
    stream: u64,
) -> Result<CmjOutcome, SimError> {
    let mut rng = stream_rng(seed, stream);
    let tau = exp_sample(&mut rng, spec.alpha());
    simulate_to_time_with_rng(spec, tau, &mut rng, DEFAULT_SIZE_GUARD)
}

#[derive(Clone, Copy, Debug)]
enum Action {
    /// One child is born; the parent schedules nothing further.
    Birth,
    /// One child is born and the parent reschedules its next birth
    /// (RRT: constant rate; PA: rate from the updated outdegree).
    BirthAndReschedule,
    /// Two children are born at the same instant.
    Twins,
    /// The node's weight grows by one key; no child is born.
    GainWeight,
}

#[derive(Clone, Copy, Debug)]
struct Event {
    time: f64,
    node: u32,
    seq: u32,
    action: Action,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Later events sort smaller so the max-heap pops the earliest event; ties
/// (probability zero, but representable) break on node index, then on
/// scheduling order, keeping replay deterministic.
impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.node.cmp(&self.node))
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

struct Sim<'a, 'r> {
    spec: &'a ModelSpec,
    rng: &'r mut StreamRng,
    parent: Vec<u32>,
    children: Vec<Vec<u32>>,
    birth: Vec<f64>,
    queue: BinaryHeap<Event>,
    seq: u32,
    weight: f64,
    guard: u64,
}

impl<'a, 'r> Sim<'a, 'r> {
    fn start(spec: &'a ModelSpec, rng: &'r mut StreamRng, guard: u64) -> Self {
        let mut sim = Sim {
            spec,
            rng,
            parent: vec![u32::MAX],
            children: vec![Vec::new()],
            birth: vec![0.0],
            queue: BinaryHeap::new(),
            seq: 0,
            weight: initial_weight(spec),
            guard,
        };
        sim.schedule_newborn(0, 0.0);
        sim
    }

    fn peek_time(&self) -> Option<f64> {
        self.queue.peek().map(|e| e.time)
    }

    fn push(&mut self, time: f64, node: u32, action: Action) {
        let seq = self.seq;
        self.seq = self.seq.wrapping_add(1);
        self.queue.push(Event {
            time,
            node,
            seq,
            action,
        });
    }

    /// Schedules the events a newborn node will generate, drawing all its
    /// clock increments now so the random stream is consumed in the
    /// deterministic order of node births.
    fn schedule_newborn(&mut self, v: u32, t: f64) {
        match *self.spec {
            ModelSpec::Rrt => {
                let dt = exp_sample(self.rng, 1.0);
                self.push(t + dt, v, Action::BirthAndReschedule);
            }
            ModelSpec::Bst => {
                for _ in 0..2 {
                    let dt = exp_sample(self.rng, 1.0);
                    self.push(t + dt, v, Action::Birth);
                }
            }
            ModelSpec::Pa { .. } => {
                let rate = self.pa_rate(v, 0);
                if rate > 0.0 {
                    let dt = exp_sample(self.rng, rate);
                    self.push(t + dt, v, Action::BirthAndReschedule);
                }
            }
            ModelSpec::Xbst { .. } => {
                let dt = exp_sample(self.rng, 1.0);
                self.push(t + dt, v, Action::Twins);
            }
            ModelSpec::Mary { m } => {
                // Key i arrives after an Exp(i) wait, i = 2..m-1; the node is
                // then fertile and births m children at independent Exp(1)
                // delays from that moment.
                let mut s = t;
                for i in 2..m {
                    s += exp_sample(self.rng, f64::from(i));
                    self.push(s, v, Action::GainWeight);
                }
                for _ in 0..m {
                    let dt = exp_sample(self.rng, 1.0);
                    self.push(s + dt, v, Action::Birth);
                }
            }
        }
    }

    /// Birth rate of node `v` once it has `k` children: `chi k + base`,
    /// where the root uses its own rate offset. Rates that vanish (within
    /// rounding, for negative `chi` at the outdegree cap) schedule nothing.
    fn pa_rate(&self, v: u32, k: usize) -> f64 {
        let ModelSpec::Pa {
            chi,
            rho,
            root_rate_lambda,
        } = *self.spec
        else {
            unreachable!()
        };
        let base = if v == 0 { root_rate_lambda } else { rho };
        let rate = chi * k as f64 + base;
        if rate <= rho * 1e-12 {
            0.0
        } else {
            rate
        }
    }

    fn spawn(&mut self, parent: u32, t: f64) -> Result<u32, SimError> {
        if self.parent.len() as u64 >= self.guard {
            return Err(SimError::SizeGuard {
                limit: self.guard,
                at: t,
            });
        }
        let v = self.parent.len() as u32;
        self.parent.push(parent);
        self.children.push(Vec::new());
        self.children[parent as usize].push(v);
        self.birth.push(t);
        self.schedule_newborn(v, t);
        Ok(v)
    }

    /// Pops and applies one event; returns its time.
    fn step(&mut self) -> Result<f64, SimError> {
        let ev = self.queue.pop().ok_or(SimError::Exhausted)?;
        let t = ev.time;
        match ev.action {
            Action::Birth => {
                self.spawn(ev.node, t)?;
                self.weight += birth_weight(self.spec);
            }
            Action::BirthAndReschedule => {
                self.spawn(ev.node, t)?;
                self.weight += birth_weight(self.spec);
                match *self.spec {
                    ModelSpec::Rrt => {
                        let dt = exp_sample(self.rng, 1.0);
                        self.push(t + dt, ev.node, Action::BirthAndReschedule);
                    }
                    ModelSpec::Pa { .. } => {
                        let k = self.children[ev.node as usize].len();
                        let rate = self.pa_rate(ev.node, k);
                        if rate > 0.0 {
                            let dt = exp_sample(self.rng, rate);
                            self.push(t + dt, ev.node, Action::BirthAndReschedule);
                        }
                    }
                    _ => unreachable!(),
                }
            }
            Action::Twins => {
                self.spawn(ev.node, t)?;
                self.spawn(ev.node, t)?;
                let ModelSpec::Xbst { size_mode } = *self.spec else {
                    unreachable!()
                };
                // all nodes: two new externals; internal count: the parent
                // just became internal; external count: parent left (-1),
                // twins arrived (+2).
                self.weight += match size_mode {
                    SizeMode::AllNodes => 2.0,
                    SizeMode::InternalNodes | SizeMode::ExternalNodes => 1.0,
                };
            }
            Action::GainWeight => {
                self.weight += 1.0;
            }
        }
        Ok(t)
    }

    fn finish(self, tau: f64) -> CmjOutcome {
        CmjOutcome {
            tree: RootedTree::from_parts(0, self.parent, self.children),
            birth_times: self.birth,
            tau,
            final_weight: self.weight,
        }
    }
}

/// Weight carried by the root at time 0.
fn initial_weight(spec: &ModelSpec) -> f64 {
    match *spec {
        ModelSpec::Xbst {
            size_mode: SizeMode::InternalNodes,
        } => 0.0, // the root starts as an external node
        _ => 1.0,
    }
}

/// Weight added by one ordinary birth.
fn birth_weight(spec: &ModelSpec) -> f64 {
    match *spec {
        // a newborn node holds one key
        ModelSpec::Mary { .. } => 1.0,
        ModelSpec::Xbst { .. } => unreachable!("XBST births go through Twins"),
        _ => 1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::independence::independence_profile;

    #[test]
    fn target_one_is_a_single_node() {
        for spec in [
            ModelSpec::rrt(),
            ModelSpec::bst(),
            ModelSpec::pa(1.0, 1.0).unwrap(),
            ModelSpec::xbst(SizeMode::AllNodes),
            ModelSpec::xbst(SizeMode::ExternalNodes),
            ModelSpec::mary(3).unwrap(),
        ] {
            let out = simulate_cmj(&spec, 1.0, 42).unwrap();
            assert_eq!(out.tree.node_count(), 1, "{}", spec.name());
            assert_eq!(out.tau, 0.0);
        }
    }

    #[test]
    fn xbst_internal_mode_needs_a_birth_for_weight_one() {
        // The root starts external, so weight 1 is only reached at the first
        // twin birth: three nodes at a strictly positive time.
        let out = simulate_cmj(&ModelSpec::xbst(SizeMode::InternalNodes), 1.0, 42).unwrap();
        assert_eq!(out.tree.node_count(), 3);
        assert!(out.tau > 0.0);
    }

    #[test]
    fn horizon_zero_is_a_single_node() {
        let out = simulate_to_time(&ModelSpec::bst(), 0.0, 7).unwrap();
        assert_eq!(out.tree.node_count(), 1);
    }

    #[test]
    fn birth_times_increase_along_edges_and_children_are_in_birth_order() {
        for spec in [
            ModelSpec::rrt(),
            ModelSpec::bst(),
            ModelSpec::pa(-1.0, 2.0).unwrap(),
            ModelSpec::mary(4).unwrap(),
        ] {
            let out = simulate_cmj(&spec, 300.0, 11).unwrap();
            let tree = &out.tree;
            for v in tree.nodes().skip(1) {
                let p = tree.parent(v).unwrap();
                assert!(out.birth_times[v as usize] > out.birth_times[p as usize]);
            }
            for v in tree.nodes() {
                let times: Vec<f64> = tree
                    .children(v)
                    .iter()
                    .map(|&c| out.birth_times[c as usize])
                    .collect();
                assert!(times.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }

    #[test]
    fn xbst_node_count_is_always_odd() {
        for seed in 0..50 {
            let out = simulate_cmj(&ModelSpec::xbst(SizeMode::AllNodes), 40.0, seed).unwrap();
            assert_eq!(out.tree.node_count() % 2, 1);
            let out = simulate_to_time(&ModelSpec::xbst(SizeMode::AllNodes), 2.0, seed).unwrap();
            assert_eq!(out.tree.node_count() % 2, 1);
        }
    }

    #[test]
    fn degree_caps_hold_in_simulation() {
        let out = simulate_cmj(&ModelSpec::bst(), 500.0, 3).unwrap();
        assert!(out.tree.nodes().all(|v| out.tree.outdegree(v) <= 2));
        let out = simulate_cmj(&ModelSpec::xbst(SizeMode::AllNodes), 501.0, 3).unwrap();
        assert!(out
            .tree
            .nodes()
            .all(|v| matches!(out.tree.outdegree(v), 0 | 2)));
        let out = simulate_cmj(&ModelSpec::mary(3).unwrap(), 500.0, 3).unwrap();
        assert!(out
            .tree
            .nodes()
            .all(|v| matches!(out.tree.outdegree(v), 0 | 3)));
        let out = simulate_cmj(&ModelSpec::pa(-1.0, 2.0).unwrap(), 500.0, 3).unwrap();
        assert!(out.tree.nodes().all(|v| out.tree.outdegree(v) <= 2));
    }

    #[test]
    fn mary_weight_counts_keys() {
        // Weight n means n keys; nodes hold 1..m-1 keys so the node count
        // lies in [n/(m-1), n].
        let out = simulate_cmj(&ModelSpec::mary(4).unwrap(), 600.0, 9).unwrap();
        assert!(out.final_weight >= 600.0);
        let nodes = u64::from(out.tree.node_count());
        assert!(nodes >= 200 && nodes <= 600);
    }

    #[test]
    fn size_guard_reports_cleanly() {
        let err = simulate_to_time_with_rng(
            &ModelSpec::rrt(),
            30.0,
            &mut crate::rng::stream_rng(1, 0),
            2_000,
        )
        .unwrap_err();
        assert!(matches!(err, SimError::SizeGuard { limit: 2_000, .. }));
    }

    #[test]
    fn invalid_arguments_are_rejected() {
        assert!(matches!(
            simulate_cmj(&ModelSpec::rrt(), 0.5, 1),
            Err(SimError::InvalidTarget(_))
        ));
        assert!(matches!(
            simulate_to_time(&ModelSpec::rrt(), -1.0, 1),
            Err(SimError::InvalidHorizon(_))
        ));
    }

    #[test]
    fn determinism_bit_for_bit() {
        let spec = ModelSpec::mary(5).unwrap();
        let a = simulate_cmj(&spec, 400.0, 123).unwrap();
        let b = simulate_cmj(&spec, 400.0, 123).unwrap();
        assert_eq!(a.tree, b.tree);
        assert_eq!(a.birth_times, b.birth_times);
        assert_eq!(a.tau, b.tau);
    }

    #[test]
    fn fringe_sample_runs_and_profiles() {
        let out = sample_fringe_tree(&ModelSpec::bst(), 5).unwrap();
        let profile = independence_profile(&out.tree);
        assert!(profile.tree_i >= 1);
    }
}
