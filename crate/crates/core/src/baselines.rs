//! Reference solvers: exhaustive enumeration, a label-setting resource
//! constrained longest path, and the window-relaxed longest path.

use std::time::Instant;

use num_traits::Zero;
use thiserror::Error;

use crate::graph::{check_windows, ArcId, Path, VertexId, WindowedDag};
use crate::longest::longest_path;
use crate::scalar::{Multiplier, Scalar};

pub const DEFAULT_PATH_CAP: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BaselineError {
    #[error("more than {cap} source-to-sink paths")]
    TooLarge { cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// Best window-feasible path, `None` when there is none.
    pub best: Option<Path>,
    /// Number of window-feasible source-to-sink paths seen.
    pub feasible_paths: usize,
    /// Number of source-to-sink paths seen (only complete in strict mode).
    pub total_paths: usize,
}

impl OracleResult {
    pub fn value(&self) -> Option<&Scalar> {
        self.best.as_ref().map(|p| &p.value)
    }

    pub fn is_feasible(&self) -> bool {
        self.best.is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BruteMode {
    /// Every source-to-sink path, windows checked only at the end.
    Strict,
    /// Abandons a prefix as soon as it leaves a window.
    Fast,
}

/// Every source-to-sink arc list, in depth-first order.
pub fn enumerate_paths(dag: &WindowedDag, cap: usize) -> Result<Vec<Vec<ArcId>>, BaselineError> {
    let alive = dag.reaches_sink();
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn go(
        dag: &WindowedDag,
        alive: &[bool],
        at: VertexId,
        stack: &mut Vec<ArcId>,
        out: &mut Vec<Vec<ArcId>>,
        cap: usize,
    ) -> Result<(), BaselineError> {
        if at == dag.sink() {
            if out.len() >= cap {
                return Err(BaselineError::TooLarge { cap });
            }
            out.push(stack.clone());
            return Ok(());
        }
        for &a in dag.out_arcs(at) {
            let to = dag.arc(a).to;
            if alive[to.0] {
                stack.push(a);
                go(dag, alive, to, stack, out, cap)?;
                stack.pop();
            }
        }
        Ok(())
    }
    if alive[dag.source().0] {
        go(dag, &alive, dag.source(), &mut stack, &mut out, cap)?;
    }
    Ok(out)
}

pub fn brute_force(dag: &WindowedDag) -> Result<OracleResult, BaselineError> {
    brute_force_with(dag, BruteMode::Strict, DEFAULT_PATH_CAP)
}

pub fn brute_force_with(dag: &WindowedDag, mode: BruteMode, cap: usize) -> Result<OracleResult, BaselineError> {
    struct Dfs<'a> {
        dag: &'a WindowedDag,
        alive: Vec<bool>,
        mode: BruteMode,
        cap: usize,
        stack: Vec<ArcId>,
        best: Option<(Scalar, Vec<ArcId>)>,
        feasible: usize,
        total: usize,
    }
    impl Dfs<'_> {
        fn go(&mut self, at: VertexId, v: &Scalar, r: &Scalar, ok: bool) -> Result<(), BaselineError> {
            let ok = ok && self.dag.window(at).contains(r);
            if !ok && self.mode == BruteMode::Fast {
                return Ok(());
            }
            if at == self.dag.sink() {
                self.total += 1;
                if self.total > self.cap {
                    return Err(BaselineError::TooLarge { cap: self.cap });
                }
                if ok {
                    self.feasible += 1;
                    if self.best.as_ref().is_none_or(|(b, _)| v > b) {
                        self.best = Some((v.clone(), self.stack.clone()));
                    }
                }
                return Ok(());
            }
            for &a in self.dag.out_arcs(at) {
                let arc = self.dag.arc(a);
                if !self.alive[arc.to.0] {
                    continue;
                }
                self.stack.push(a);
                self.go(arc.to, &(v + &arc.value), &(r + &arc.resource), ok)?;
                self.stack.pop();
            }
            Ok(())
        }
    }
    let mut dfs = Dfs {
        dag,
        alive: dag.reaches_sink(),
        mode,
        cap,
        stack: Vec::new(),
        best: None,
        feasible: 0,
        total: 0,
    };
    if dfs.alive[dag.source().0] {
        dfs.go(dag.source(), &Scalar::zero(), &Scalar::zero(), true)?;
    }
    let best = dfs
        .best
        .map(|(_, arcs)| dag.path(dag.source(), &arcs).expect("enumerated arcs are contiguous"));
    debug_assert!(best.as_ref().is_none_or(|p| check_windows(dag, p).is_feasible()));
    Ok(OracleResult {
        best,
        feasible_paths: dfs.feasible,
        total_paths: dfs.total,
    })
}

/// Per-vertex label counts of a label-setting run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RcspStats {
    pub labels_created: usize,
    pub labels_dominated: usize,
}

#[derive(Debug, Clone)]
struct RLabel {
    value: Scalar,
    resource: Scalar,
    /// (vertex, label index, arc) of the predecessor.
    pred: Option<(VertexId, usize, ArcId)>,
}

pub fn rcsp_label_setting(dag: &WindowedDag) -> OracleResult {
    rcsp_label_setting_stats(dag).0
}

/// Label setting in topological order. A label is discarded when another
/// label at the same vertex has the same resource and at least its value,
/// or (with nonnegative resources only) at most its resource and at least
/// its value while already meeting every lower bound reachable downstream.
pub fn rcsp_label_setting_stats(dag: &WindowedDag) -> (OracleResult, RcspStats) {
    rcsp_label_setting_until(dag, None).expect("no deadline")
}

/// [`rcsp_label_setting_stats`] that gives up (`None`) once `deadline` passes.
pub fn rcsp_label_setting_until(dag: &WindowedDag, deadline: Option<Instant>) -> Option<(OracleResult, RcspStats)> {
    let n = dag.vertex_count();
    let alive = dag.reaches_sink();
    let monotone = dag.all_resources_nonnegative();
    // largest lower bound over vertices reachable from each vertex
    let mut max_lo: Vec<Option<Scalar>> = vec![None; n];
    for &u in dag.topo_order().iter().rev() {
        let mut m = dag.window(u).lo.clone();
        for &a in dag.out_arcs(u) {
            let t = dag.arc(a).to;
            if !alive[t.0] {
                continue;
            }
            if let Some(x) = &max_lo[t.0] {
                if m.as_ref().is_none_or(|y| x > y) {
                    m = Some(x.clone());
                }
            }
        }
        max_lo[u.0] = m;
    }

    let mut stats = RcspStats::default();
    let mut labels: Vec<Vec<RLabel>> = vec![Vec::new(); n];
    labels[dag.source().0].push(RLabel {
        value: Scalar::zero(),
        resource: Scalar::zero(),
        pred: None,
    });
    stats.labels_created += 1;
    for &u in dag.topo_order() {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            return None;
        }
        if labels[u.0].is_empty() || !alive[u.0] {
            continue;
        }
        let before = labels[u.0].len();
        let kept = filter_dominated(std::mem::take(&mut labels[u.0]), monotone, max_lo[u.0].as_ref());
        stats.labels_dominated += before - kept.len();
        labels[u.0] = kept;
        if u == dag.sink() {
            continue;
        }
        for k in 0..labels[u.0].len() {
            for &a in dag.out_arcs(u) {
                let arc = dag.arc(a);
                if !alive[arc.to.0] {
                    continue;
                }
                let r = &labels[u.0][k].resource + &arc.resource;
                if !dag.window(arc.to).contains(&r) {
                    continue;
                }
                let v = &labels[u.0][k].value + &arc.value;
                labels[arc.to.0].push(RLabel {
                    value: v,
                    resource: r,
                    pred: Some((u, k, a)),
                });
                stats.labels_created += 1;
            }
        }
    }
    let sink = dag.sink();
    let feasible = labels[sink.0].len();
    let best_idx = (0..labels[sink.0].len()).fold(None::<usize>, |acc, k| match acc {
        Some(b) if labels[sink.0][b].value >= labels[sink.0][k].value => Some(b),
        _ => Some(k),
    });
    let best = best_idx.map(|mut k| {
        let mut at = sink;
        let mut arcs = Vec::new();
        while let Some((p, pk, a)) = labels[at.0][k].pred {
            arcs.push(a);
            at = p;
            k = pk;
        }
        arcs.reverse();
        dag.path(dag.source(), &arcs).expect("label chain is contiguous")
    });
    Some((
        OracleResult {
            best,
            feasible_paths: feasible,
            total_paths: feasible,
        },
        stats,
    ))
}

fn filter_dominated(mut ls: Vec<RLabel>, monotone: bool, max_lo: Option<&Scalar>) -> Vec<RLabel> {
    // stable: among equal (R, V) the first-created label survives
    ls.sort_by(|a, b| a.resource.cmp(&b.resource).then_with(|| b.value.cmp(&a.value)));
    let mut kept: Vec<RLabel> = Vec::with_capacity(ls.len());
    let mut best_safe: Option<Scalar> = None;
    for l in ls {
        if kept.last().is_some_and(|k| k.resource == l.resource) {
            continue;
        }
        if monotone && best_safe.as_ref().is_some_and(|b| b >= &l.value) {
            continue;
        }
        if max_lo.is_none_or(|lo| &l.resource >= lo) && best_safe.as_ref().is_none_or(|b| &l.value > b) {
            best_safe = Some(l.value.clone());
        }
        kept.push(l);
    }
    kept
}

/// Best value with every window ignored; `None` when the sink is unreachable.
pub fn relaxed_longest(dag: &WindowedDag) -> Option<Scalar> {
    longest_path(dag, &Multiplier::zero(), dag.source()).ok().map(|lp| lp.path.value)
}
