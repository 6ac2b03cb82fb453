//! Second phase: enumeration of hybrid paths (a window-feasible prefix plus
//! the best window-relaxed tail under `V + δ·R`) in decreasing aggregated
//! value, with bound pruning and per-vertex dominance.
//!
//! The instance handed in is in oriented coordinates (see
//! [`crate::phase1::Orientation`]); arc ids are shared with the original.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::time::Instant;

use num_traits::Zero;
use thiserror::Error;

use crate::graph::{ArcId, Path, VertexId, WindowedDag};
use crate::longest::{all_tails, Tails};
use crate::nmckp::UbProvider;
use crate::phase1::Orientation;
use crate::scalar::Scalar;

/// A hybrid path: feasible prefix to `anchor`, continued by the anchor's tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Label {
    pub prefix: Vec<ArcId>,
    pub anchor: VertexId,
    pub prefix_value: Scalar,
    pub prefix_resource: Scalar,
    /// Value of the full hybrid path.
    pub value: Scalar,
    /// Resource of the full hybrid path.
    pub resource: Scalar,
    pub mu: Scalar,
    /// Completion bound for the prefix; `None` when no feasible completion exists.
    pub ub: Option<Scalar>,
}

impl Label {
    /// Vertices of the prefix, anchor included.
    pub fn prefix_vertices(&self, dag: &WindowedDag) -> Vec<VertexId> {
        let mut out = vec![dag.source()];
        out.extend(self.prefix.iter().map(|&a| dag.arc(a).to));
        out
    }

    /// Arc list of the full hybrid path.
    pub fn hybrid_arcs(&self, dag: &WindowedDag, tails: &Tails) -> Vec<ArcId> {
        let mut arcs = self.prefix.clone();
        arcs.extend(tails.arcs(dag, self.anchor).expect("anchor reaches the sink"));
        arcs
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct HeapKey {
    mu: Scalar,
    value: Scalar,
    seq: Reverse<usize>,
}

/// Max-μ priority queue with lazy deletion; ties go to the larger value,
/// then to the earlier insertion.
#[derive(Debug, Default)]
pub struct LabelStore {
    labels: Vec<Label>,
    alive: Vec<bool>,
    heap: BinaryHeap<HeapKey>,
    live: usize,
}

impl LabelStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    pub fn push(&mut self, label: Label) {
        let seq = self.labels.len();
        self.heap.push(HeapKey {
            mu: label.mu.clone(),
            value: label.value.clone(),
            seq: Reverse(seq),
        });
        self.labels.push(label);
        self.alive.push(true);
        self.live += 1;
    }

    pub fn pop(&mut self) -> Option<Label> {
        while let Some(top) = self.heap.pop() {
            let k = top.seq.0;
            if self.alive[k] {
                self.alive[k] = false;
                self.live -= 1;
                return Some(self.labels[k].clone());
            }
        }
        None
    }

    /// Removes every live label matching `pred`, returning them.
    pub fn purge(&mut self, mut pred: impl FnMut(&Label) -> bool) -> Vec<Label> {
        let mut out = Vec::new();
        for (k, label) in self.labels.iter().enumerate() {
            if self.alive[k] && pred(label) {
                self.alive[k] = false;
                self.live -= 1;
                out.push(label.clone());
            }
        }
        out
    }
}

/// Best prefix value seen per exact resource, for one vertex.
#[derive(Debug, Clone, Default)]
pub struct VertexFrontier {
    best: HashMap<Scalar, Scalar>,
}

impl VertexFrontier {
    /// Records `(resource, value)` unless an entry with the same resource and
    /// at least that value exists; returns whether it was recorded.
    pub fn insert(&mut self, resource: &Scalar, value: &Scalar) -> bool {
        match self.best.get_mut(resource) {
            Some(v) if &*v >= value => false,
            Some(v) => {
                *v = value.clone();
                true
            }
            None => {
                self.best.insert(resource.clone(), value.clone());
                true
            }
        }
    }

    pub fn len(&self) -> usize {
        self.best.len()
    }

    pub fn is_empty(&self) -> bool {
        self.best.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PruneRule {
    /// Aggregated value at most the incumbent's lower bound.
    LowerBound,
    /// Completion bound at most the incumbent value.
    UpperBound,
    /// Same prefix resource at the anchor, no better prefix value.
    Dominance,
}

impl fmt::Display for PruneRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PruneRule::LowerBound => "mu-bound",
            PruneRule::UpperBound => "ub",
            PruneRule::Dominance => "dominance",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    Pop {
        iteration: usize,
        mu: Scalar,
        anchor: VertexId,
        path: Vec<VertexId>,
        /// First tail vertex whose window is violated.
        violation: Option<VertexId>,
    },
    Incumbent {
        value: Scalar,
        path: Vec<VertexId>,
    },
    /// A label removed from the store after an incumbent update, or
    /// rejected when created (`at_creation`).
    Pruned {
        rule: PruneRule,
        at_creation: bool,
        mu: Scalar,
        prefix: Vec<VertexId>,
    },
}

impl TraceEvent {
    pub fn render(&self, dag: &WindowedDag) -> String {
        let names = |p: &[VertexId]| p.iter().map(|&v| dag.label(v)).collect::<Vec<_>>().join(",");
        match self {
            TraceEvent::Pop { iteration, mu, anchor, path, violation } => format!(
                "pop {iteration}: mu={mu} anchor={} path={} {}",
                dag.label(*anchor),
                names(path),
                match violation {
                    None => "feasible".to_string(),
                    Some(v) => format!("violates at {}", dag.label(*v)),
                }
            ),
            TraceEvent::Incumbent { value, path } => format!("incumbent value={value} path={}", names(path)),
            TraceEvent::Pruned { rule, at_creation, mu, prefix } => format!(
                "{} by {rule}: mu={mu} prefix={}",
                if *at_creation { "rejected" } else { "purged" },
                names(prefix)
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Phase2Stats {
    /// Label pops.
    pub phase2_iterations: usize,
    pub labels_created: usize,
    pub labels_pruned_bound: usize,
    pub labels_pruned_dominance: usize,
    pub labels_pruned_ub: usize,
}

#[derive(Debug, Clone)]
pub struct Phase2Options {
    pub dominance: bool,
    pub prune_mu: bool,
    pub prune_ub: bool,
    pub trace: bool,
    /// Checked once per pop.
    pub deadline: Option<Instant>,
    /// Orientation of the instance passed in; knapsack bounds are queried in
    /// original coordinates.
    pub orientation: Orientation,
}

impl Default for Phase2Options {
    fn default() -> Self {
        Phase2Options {
            dominance: true,
            prune_mu: true,
            prune_ub: true,
            trace: false,
            deadline: None,
            orientation: Orientation::Lid,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase2Status {
    Optimal,
    Infeasible,
    /// Deadline hit; `best` is the incumbent so far.
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Phase2Error {
    #[error("no window-feasible source-to-sink path")]
    NoFeasiblePath,
    #[error("deadline reached before optimality was proven")]
    Timeout,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: Phase2Status,
    /// Best path found, in the arc ids of the instance.
    pub best: Option<Path>,
    pub stats: Phase2Stats,
    pub trace: Vec<TraceEvent>,
}

impl SolveResult {
    pub fn value(&self) -> Option<&Scalar> {
        self.best.as_ref().map(|p| &p.value)
    }

    pub fn into_result(self) -> Result<Path, Phase2Error> {
        match self.status {
            Phase2Status::Optimal => self.best.ok_or(Phase2Error::NoFeasiblePath),
            Phase2Status::Infeasible => Err(Phase2Error::NoFeasiblePath),
            Phase2Status::Timeout => Err(Phase2Error::Timeout),
        }
    }
}

/// `V + δ·β`: no label whose aggregated value is at most this can beat an
/// incumbent of value `v`. With no lower bound only `δ = 0` gives a bound.
pub fn lower_bound_mu(v: &Scalar, delta: &Scalar, beta: Option<&Scalar>) -> Option<Scalar> {
    match beta {
        Some(b) => Some(v + delta * b),
        None if delta.is_zero() => Some(v.clone()),
        None => None,
    }
}

/// Checks the label's tail windows, starting from the prefix resource.
/// Returns the first violating tail vertex.
pub fn feasible_hybrid(dag: &WindowedDag, tails: &Tails, label: &Label) -> Result<(), VertexId> {
    let mut r = label.prefix_resource.clone();
    let mut at = label.anchor;
    while let Some(a) = tails.get(at).and_then(|t| t.next) {
        let arc = dag.arc(a);
        r += &arc.resource;
        at = arc.to;
        if !dag.window(at).contains(&r) {
            return Err(at);
        }
    }
    Ok(())
}

pub fn run_phase2(dag: &WindowedDag, delta: &Scalar, ub: &UbProvider) -> SolveResult {
    run_phase2_with(dag, delta, ub, &Phase2Options::default())
}

struct Search<'a> {
    dag: &'a WindowedDag,
    delta: &'a Scalar,
    tails: Tails,
    value_tails: Option<Tails>,
    provider: &'a UbProvider,
    opts: &'a Phase2Options,
    beta: Option<Scalar>,
    store: LabelStore,
    frontiers: Vec<VertexFrontier>,
    best: Option<Label>,
    floor_mu: Option<Scalar>,
    stats: Phase2Stats,
    trace: Vec<TraceEvent>,
}

impl<'a> Search<'a> {
    fn completion_bound(&self, anchor: VertexId, prefix_value: &Scalar, prefix_resource: &Scalar) -> Option<Scalar> {
        match self.provider {
            UbProvider::Disabled => None,
            UbProvider::Trivial => {
                let t = self.value_tails.as_ref()?.get(anchor)?;
                Some(prefix_value + &t.value)
            }
            UbProvider::Nmckp(p) => {
                let r = self.opts.orientation.orient(prefix_resource);
                p.bound(anchor, &r, prefix_value).ok().flatten()
            }
        }
    }

    fn make_label(&mut self, prefix: Vec<ArcId>, anchor: VertexId, pv: Scalar, pr: Scalar) -> Option<Label> {
        let tail = self.tails.get(anchor)?;
        let value = &pv + &tail.value;
        let resource = &pr + &tail.resource;
        let mu = &pv + self.delta * &pr + &tail.mu;
        let ub = if matches!(self.provider, UbProvider::Disabled) {
            None
        } else {
            self.completion_bound(anchor, &pv, &pr)
        };
        self.stats.labels_created += 1;
        Some(Label {
            prefix,
            anchor,
            prefix_value: pv,
            prefix_resource: pr,
            value,
            resource,
            mu,
            ub,
        })
    }

    /// Whether `label` is pruned against the incumbent, and by which rule.
    fn prune_rule(&self, label: &Label) -> Option<PruneRule> {
        if self.opts.prune_mu {
            if let Some(floor) = &self.floor_mu {
                if &label.mu <= floor {
                    return Some(PruneRule::LowerBound);
                }
            }
        }
        if self.opts.prune_ub && !matches!(self.provider, UbProvider::Disabled) {
            match (&label.ub, &self.best) {
                (None, _) => return Some(PruneRule::UpperBound),
                (Some(ub), Some(best)) if ub <= &best.value => return Some(PruneRule::UpperBound),
                _ => {}
            }
        }
        None
    }

    fn count(&mut self, rule: PruneRule, at_creation: bool, label: &Label) {
        match rule {
            PruneRule::LowerBound => self.stats.labels_pruned_bound += 1,
            PruneRule::UpperBound => self.stats.labels_pruned_ub += 1,
            PruneRule::Dominance => self.stats.labels_pruned_dominance += 1,
        }
        if self.opts.trace {
            self.trace.push(TraceEvent::Pruned {
                rule,
                at_creation,
                mu: label.mu.clone(),
                prefix: label.prefix_vertices(self.dag),
            });
        }
    }

    fn offer(&mut self, label: Label) {
        if let Some(rule) = self.prune_rule(&label) {
            self.count(rule, true, &label);
        } else {
            self.store.push(label);
        }
    }

    fn adopt_incumbent(&mut self, label: Label) {
        let improves = self.best.as_ref().is_none_or(|b| label.value > b.value);
        if !improves {
            return;
        }
        if self.opts.trace {
            let arcs = label.hybrid_arcs(self.dag, &self.tails);
            let path = self.dag.path(self.dag.source(), &arcs).expect("hybrid is contiguous");
            self.trace.push(TraceEvent::Incumbent {
                value: label.value.clone(),
                path: path.vertices,
            });
        }
        self.floor_mu = lower_bound_mu(&label.value, self.delta, self.beta.as_ref());
        self.best = Some(label);
        let (prune_mu, prune_ub) = (self.opts.prune_mu, self.opts.prune_ub);
        let floor = self.floor_mu.clone();
        let best_v = self.best.as_ref().map(|b| b.value.clone()).expect("just set");
        let ub_active = prune_ub && !matches!(self.provider, UbProvider::Disabled);
        let removed = self.store.purge(|l| {
            (prune_mu && floor.as_ref().is_some_and(|f| &l.mu <= f))
                || (ub_active && l.ub.as_ref().is_none_or(|u| u <= &best_v))
        });
        for l in removed {
            let rule = if prune_mu && floor.as_ref().is_some_and(|f| &l.mu <= f) {
                PruneRule::LowerBound
            } else {
                PruneRule::UpperBound
            };
            self.count(rule, false, &l);
        }
    }

    /// Branches off the label's tail wherever adopting the tail so far keeps
    /// every window satisfied.
    fn extend(&mut self, label: &Label) {
        let dag = self.dag;
        let mut prefix = label.prefix.clone();
        let mut pv = label.prefix_value.clone();
        let mut pr = label.prefix_resource.clone();
        let mut u = label.anchor;
        loop {
            let own = self.tails.get(u).and_then(|t| t.next);
            let Some(own) = own else { break };
            for &a in dag.out_arcs(u) {
                if a == own {
                    continue;
                }
                let arc = dag.arc(a);
                let v = arc.to;
                let r = &pr + &arc.resource;
                if !dag.window(v).contains(&r) || self.tails.get(v).is_none() {
                    continue;
                }
                let value = &pv + &arc.value;
                if self.opts.dominance && !self.frontiers[v.0].insert(&r, &value) {
                    let mut p = prefix.clone();
                    p.push(a);
                    if let Some(child) = self.make_label(p, v, value, r) {
                        self.count(PruneRule::Dominance, true, &child);
                    }
                    continue;
                }
                let mut p = prefix.clone();
                p.push(a);
                if let Some(child) = self.make_label(p, v, value, r) {
                    self.offer(child);
                }
            }
            // adopt the tail's own arc and move on
            let arc = dag.arc(own);
            pr += &arc.resource;
            pv += &arc.value;
            prefix.push(own);
            u = arc.to;
            if u == dag.sink() || !dag.window(u).contains(&pr) {
                break;
            }
            if self.opts.dominance {
                // the adopted prefix is itself a prefix to u; record it so
                // later equal-resource prefixes with no more value are dropped
                self.frontiers[u.0].insert(&pr, &pv);
            }
        }
    }
}

/// Runs the second phase on an (oriented) instance with multiplier `delta`.
pub fn run_phase2_with(dag: &WindowedDag, delta: &Scalar, ub: &UbProvider, opts: &Phase2Options) -> SolveResult {
    let tails = all_tails(dag, delta);
    let value_tails = matches!(ub, UbProvider::Trivial).then(|| all_tails(dag, &Scalar::zero()));
    let mut s = Search {
        dag,
        delta,
        tails,
        value_tails,
        provider: ub,
        opts,
        beta: dag.window(dag.sink()).lo.clone(),
        store: LabelStore::new(),
        frontiers: vec![VertexFrontier::default(); dag.vertex_count()],
        best: None,
        floor_mu: None,
        stats: Phase2Stats::default(),
        trace: Vec::new(),
    };
    let root = s.make_label(Vec::new(), dag.source(), Scalar::zero(), Scalar::zero());
    if let Some(root) = root {
        s.offer(root);
    }
    let mut status = Phase2Status::Optimal;
    while let Some(label) = s.store.pop() {
        if opts.deadline.is_some_and(|d| Instant::now() >= d) {
            status = Phase2Status::Timeout;
            break;
        }
        s.stats.phase2_iterations += 1;
        let check = feasible_hybrid(dag, &s.tails, &label);
        if opts.trace {
            let arcs = label.hybrid_arcs(dag, &s.tails);
            let path = dag.path(dag.source(), &arcs).expect("hybrid is contiguous");
            s.trace.push(TraceEvent::Pop {
                iteration: s.stats.phase2_iterations,
                mu: label.mu.clone(),
                anchor: label.anchor,
                path: path.vertices,
                violation: check.err(),
            });
        }
        if check.is_ok() {
            s.adopt_incumbent(label.clone());
        }
        s.extend(&label);
    }
    let best = s.best.as_ref().map(|l| {
        let arcs = l.hybrid_arcs(dag, &s.tails);
        dag.path(dag.source(), &arcs).expect("hybrid is contiguous")
    });
    if status == Phase2Status::Optimal && best.is_none() {
        status = Phase2Status::Infeasible;
    }
    SolveResult {
        status,
        best,
        stats: s.stats,
        trace: s.trace,
    }
}
