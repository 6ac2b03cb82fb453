//! Completion bounds from a nested multiple-choice knapsack view of the
//! instance: one item per stage, with a window on the cumulative weight after
//! each stage.
//!
//! Only the upper side of each window is kept in the LP bound; dropping the
//! lower sides relaxes the problem, so the bound stays admissible.

use std::cmp::Ordering;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::graph::{VertexId, Window};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Item {
    pub value: Scalar,
    pub weight: Scalar,
}

impl Item {
    pub fn new(value: Scalar, weight: Scalar) -> Self {
        Item { value, weight }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    pub items: Vec<Item>,
    /// Window on the cumulative weight once this stage is decided.
    pub window: Window,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NmckpError {
    #[error("stage {stage} has no items")]
    EmptyStage { stage: usize },
    #[error("stage {stage} has an inverted window")]
    InvertedWindow { stage: usize },
    #[error("stage index {index} outside 0..={stages}")]
    StageOutOfRange { index: usize, stages: usize },
}

/// A state reached after deciding the first `stage` stages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixState {
    pub stage: usize,
    pub weight: Scalar,
    pub value: Scalar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NmckpBound {
    /// Sum of each remaining stage's best item value; windows ignored.
    Trivial,
    /// Fractional relaxation of the remaining stages under the window caps.
    Lp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestedMckp {
    stages: Vec<Stage>,
    /// Per stage: the lightest item then the increments of the upper concave
    /// frontier, as (Δweight, Δvalue) with strictly decreasing efficiency.
    frontiers: Vec<(Item, Vec<(Scalar, Scalar)>)>,
}

impl NestedMckp {
    pub fn new(stages: Vec<Stage>) -> Result<Self, NmckpError> {
        for (k, s) in stages.iter().enumerate() {
            if s.items.is_empty() {
                return Err(NmckpError::EmptyStage { stage: k });
            }
            if let (Some(lo), Some(hi)) = (&s.window.lo, &s.window.hi) {
                if lo > hi {
                    return Err(NmckpError::InvertedWindow { stage: k });
                }
            }
        }
        let frontiers = stages.iter().map(|s| efficiency_frontier(&s.items)).collect();
        Ok(NestedMckp { stages, frontiers })
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    /// Upper bound on `value + best completion value` from `state`.
    ///
    /// `Ok(None)` means the LP relaxation proves no completion can respect the
    /// remaining caps.
    pub fn ub_for_prefix(&self, mode: NmckpBound, state: &PrefixState) -> Result<Option<Scalar>, NmckpError> {
        if state.stage > self.stages.len() {
            return Err(NmckpError::StageOutOfRange {
                index: state.stage,
                stages: self.stages.len(),
            });
        }
        Ok(match mode {
            NmckpBound::Trivial => Some(
                self.stages[state.stage..]
                    .iter()
                    .map(|s| s.items.iter().map(|i| &i.value).max().expect("non-empty stage").clone())
                    .fold(state.value.clone(), |acc, v| acc + v),
            ),
            NmckpBound::Lp => self.lp_bound(state),
        })
    }

    fn lp_bound(&self, state: &PrefixState) -> Option<Scalar> {
        let rest = state.stage;
        let count = self.stages.len() - rest;
        // residual capacity of every remaining cumulative cap, after the
        // mandatory lightest items
        let mut residual: Vec<Option<Scalar>> = Vec::with_capacity(count);
        let mut value = state.value.clone();
        let mut used = state.weight.clone();
        for t in rest..self.stages.len() {
            let (base, _) = &self.frontiers[t];
            used += &base.weight;
            value += &base.value;
            let cap = match &self.stages[t].window.hi {
                Some(hi) => {
                    let r = hi - &used;
                    if r < Scalar::zero() {
                        return None;
                    }
                    Some(r)
                }
                None => None,
            };
            residual.push(cap);
        }
        // suffix minimum of residuals is what a stage-t increment may use
        let mut increments: Vec<(usize, usize, &Scalar, &Scalar)> = Vec::new();
        for t in rest..self.stages.len() {
            for (k, (dw, dv)) in self.frontiers[t].1.iter().enumerate() {
                increments.push((t - rest, k, dw, dv));
            }
        }
        increments.sort_by(|a, b| {
            // efficiency dv/dw descending, compared without division
            let lhs = b.3 * a.2;
            let rhs = a.3 * b.2;
            lhs.cmp(&rhs).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1))
        });
        for (t, _, dw, dv) in increments {
            let avail = residual[t..].iter().flatten().min().cloned();
            let fraction = match &avail {
                None => Scalar::one(),
                Some(a) if a >= dw => Scalar::one(),
                Some(a) => a / dw,
            };
            if fraction.is_zero() {
                continue;
            }
            let take = dw * &fraction;
            value += dv * &fraction;
            for r in residual[t..].iter_mut().flatten() {
                *r -= &take;
            }
        }
        Some(value)
    }

    /// Best total value over every item tuple completing `state` that meets
    /// every remaining window, by exhaustive enumeration.
    pub fn exhaustive_completion(&self, state: &PrefixState) -> Option<Scalar> {
        fn go(p: &NestedMckp, t: usize, w: &Scalar, v: &Scalar, best: &mut Option<Scalar>) {
            if t == p.stages.len() {
                if best.as_ref().is_none_or(|b| v > b) {
                    *best = Some(v.clone());
                }
                return;
            }
            for item in &p.stages[t].items {
                let w2 = w + &item.weight;
                if p.stages[t].window.contains(&w2) {
                    go(p, t + 1, &w2, &(v + &item.value), best);
                }
            }
        }
        let mut best = None;
        go(self, state.stage, &state.weight, &state.value, &mut best);
        best
    }
}

fn efficiency_frontier(items: &[Item]) -> (Item, Vec<(Scalar, Scalar)>) {
    let mut sorted: Vec<&Item> = items.iter().collect();
    sorted.sort_by(|a, b| a.weight.cmp(&b.weight).then_with(|| b.value.cmp(&a.value)));
    let base = sorted[0].clone();
    let mut hull: Vec<&Item> = vec![sorted[0]];
    for item in &sorted[1..] {
        let last = hull.last().expect("non-empty hull");
        if item.value <= last.value || item.weight == last.weight {
            continue;
        }
        while hull.len() >= 2 {
            let (p, q) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop q when slope(p,q) <= slope(q,item)
            let left = (&q.value - &p.value) * (&item.weight - &q.weight);
            let right = (&item.value - &q.value) * (&q.weight - &p.weight);
            if left.cmp(&right) != Ordering::Greater {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(item);
    }
    let increments = hull
        .windows(2)
        .map(|w| (&w[1].weight - &w[0].weight, &w[1].value - &w[0].value))
        .collect();
    (base, increments)
}

/// Admissible completion bound consulted by the second phase's second
/// pruning rule.
#[derive(Debug, Clone, Default)]
pub enum UbProvider {
    /// Never prunes.
    Disabled,
    /// Prefix value plus the best window-relaxed value from the anchor.
    #[default]
    Trivial,
    Nmckp(NmckpProvider),
}

/// A nested knapsack bound together with how graph vertices map onto stages.
#[derive(Debug, Clone)]
pub struct NmckpProvider {
    pub problem: NestedMckp,
    /// Number of stages already decided on arrival at each vertex.
    pub stage_of_vertex: Vec<usize>,
    pub mode: NmckpBound,
}

impl NmckpProvider {
    /// Bound for a prefix ending at `anchor` with resource (original
    /// coordinates) `weight` and value `value`.
    pub fn bound(&self, anchor: VertexId, weight: &Scalar, value: &Scalar) -> Result<Option<Scalar>, NmckpError> {
        let state = PrefixState {
            stage: self.stage_of_vertex[anchor.0],
            weight: weight.clone(),
            value: value.clone(),
        };
        self.problem.ub_for_prefix(self.mode, &state)
    }
}
