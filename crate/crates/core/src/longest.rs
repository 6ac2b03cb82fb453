//! Window-relaxed longest paths under the aggregated value `V + δ·R`.
//!
//! Both sweeps rank candidates by a two-level key: the aggregated value
//! first, then a secondary objective (`R` when `δ = 0`, `V` otherwise; for
//! `δ = +∞` the key is `(R, V)`). The secondary level makes the returned path
//! a non-dominated point of the bi-objective image. Exact key ties between
//! distinct arcs prefer the arc with the larger value, then the larger
//! resource, then the smaller neighbouring vertex index.

use std::cmp::Ordering;

use num_traits::Zero;

use crate::graph::{ArcId, GraphError, Path, VertexId, WindowedDag};
use crate::scalar::{Multiplier, Scalar};

/// Per-arc ranking key.
pub(crate) type Key = (Scalar, Scalar);

pub(crate) fn multiplier_key(delta: &Multiplier) -> impl Fn(&crate::graph::Arc) -> Key + '_ {
    move |a| match delta {
        Multiplier::Finite(d) if d.is_zero() => (a.value.clone(), a.resource.clone()),
        Multiplier::Finite(d) => (&a.value + d * &a.resource, a.value.clone()),
        Multiplier::Infinite => (a.resource.clone(), a.value.clone()),
    }
}

fn add(a: &Key, b: &Key) -> Key {
    (&a.0 + &b.0, &a.1 + &b.1)
}

fn cmp_key(a: &Key, b: &Key) -> Ordering {
    a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1))
}

/// Whether candidate arc `cand` (with total `cand_key`) beats the incumbent.
fn better(dag: &WindowedDag, cand_key: &Key, cand: ArcId, best_key: &Key, best: ArcId, forward: bool) -> bool {
    match cmp_key(cand_key, best_key) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => {
            let (c, b) = (dag.arc(cand), dag.arc(best));
            let nb = |a: &crate::graph::Arc| if forward { a.from } else { a.to };
            c.value
                .cmp(&b.value)
                .then_with(|| c.resource.cmp(&b.resource))
                .then_with(|| nb(b).cmp(&nb(c)))
                .then_with(|| best.cmp(&cand))
                == Ordering::Greater
        }
    }
}

/// A longest path together with its aggregated value (`None` for `δ = +∞`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LongestPath {
    pub path: Path,
    pub mu: Option<Scalar>,
}

/// Longest `from → sink` path maximising `V + δ·R` with every window ignored.
pub fn longest_path(dag: &WindowedDag, delta: &Multiplier, from: VertexId) -> Result<LongestPath, GraphError> {
    let key = multiplier_key(delta);
    let arcs = forward_sweep(dag, from, &key).ok_or(GraphError::SinkUnreachable(from))?;
    let path = dag.path(from, &arcs)?;
    let mu = delta.aggregate(&path.value, &path.resource);
    Ok(LongestPath { path, mu })
}

/// Forward dynamic programme from `from`, returning the arc list to the sink.
pub(crate) fn forward_sweep(dag: &WindowedDag, from: VertexId, key: &dyn Fn(&crate::graph::Arc) -> Key) -> Option<Vec<ArcId>> {
    let n = dag.vertex_count();
    let mut best: Vec<Option<(Key, Option<ArcId>)>> = vec![None; n];
    best[from.0] = Some(((Scalar::zero(), Scalar::zero()), None));
    let start = dag.topo_position(from);
    for &v in &dag.topo_order()[start..] {
        let Some((here, _)) = best[v.0].clone() else { continue };
        for &a in dag.out_arcs(v) {
            let arc = dag.arc(a);
            let cand = add(&here, &key(arc));
            let slot = &mut best[arc.to.0];
            let replace = match slot {
                None => true,
                Some((k, Some(b))) => better(dag, &cand, a, k, *b, true),
                Some((_, None)) => false,
            };
            if replace {
                *slot = Some((cand, Some(a)));
            }
        }
    }
    best[dag.sink().0].as_ref()?;
    let mut arcs = Vec::new();
    let mut at = dag.sink();
    while at != from {
        let a = best[at.0].as_ref().and_then(|(_, a)| *a)?;
        arcs.push(a);
        at = dag.arc(a).from;
    }
    arcs.reverse();
    Some(arcs)
}

/// Best window-relaxed continuation from a vertex to the sink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tail {
    /// First arc of the tail; `None` at the sink.
    pub next: Option<ArcId>,
    pub mu: Scalar,
    pub value: Scalar,
    pub resource: Scalar,
}

/// Tails for every vertex, from one reverse-topological sweep.
#[derive(Debug, Clone)]
pub struct Tails {
    delta: Scalar,
    entries: Vec<Option<Tail>>,
}

impl Tails {
    pub fn delta(&self) -> &Scalar {
        &self.delta
    }

    /// `None` when the sink cannot be reached from `v`.
    pub fn get(&self, v: VertexId) -> Option<&Tail> {
        self.entries[v.0].as_ref()
    }

    /// Arc list of the tail starting at `v`.
    pub fn arcs(&self, dag: &WindowedDag, v: VertexId) -> Option<Vec<ArcId>> {
        let mut out = Vec::new();
        let mut at = v;
        loop {
            let t = self.entries[at.0].as_ref()?;
            match t.next {
                Some(a) => {
                    out.push(a);
                    at = dag.arc(a).to;
                }
                None => return Some(out),
            }
        }
    }

    pub fn path(&self, dag: &WindowedDag, v: VertexId) -> Option<Path> {
        self.arcs(dag, v).map(|arcs| dag.path(v, &arcs).expect("tail arcs are contiguous"))
    }
}

/// Longest `u → sink` paths under `V + δ·R` for every vertex `u` at once.
pub fn all_tails(dag: &WindowedDag, delta: &Scalar) -> Tails {
    let mult = Multiplier::Finite(delta.clone());
    let key = multiplier_key(&mult);
    let n = dag.vertex_count();
    let mut best: Vec<Option<(Key, Option<ArcId>)>> = vec![None; n];
    best[dag.sink().0] = Some(((Scalar::zero(), Scalar::zero()), None));
    for &u in dag.topo_order().iter().rev() {
        if u == dag.sink() {
            continue;
        }
        let mut here: Option<(Key, ArcId)> = None;
        for &a in dag.out_arcs(u) {
            let arc = dag.arc(a);
            let Some((tail, _)) = &best[arc.to.0] else { continue };
            let cand = add(&key(arc), tail);
            let replace = match &here {
                None => true,
                Some((k, b)) => better(dag, &cand, a, k, *b, false),
            };
            if replace {
                here = Some((cand, a));
            }
        }
        best[u.0] = here.map(|(k, a)| (k, Some(a)));
    }
    let mut entries: Vec<Option<Tail>> = vec![None; n];
    for &u in dag.topo_order().iter().rev() {
        let Some((_, next)) = &best[u.0] else { continue };
        let tail = match next {
            None => Tail {
                next: None,
                mu: Scalar::zero(),
                value: Scalar::zero(),
                resource: Scalar::zero(),
            },
            Some(a) => {
                let arc = dag.arc(*a);
                let rest = entries[arc.to.0].as_ref().expect("successor tail computed first");
                let value = &arc.value + &rest.value;
                let resource = &arc.resource + &rest.resource;
                Tail {
                    next: Some(*a),
                    mu: &value + delta * &resource,
                    value,
                    resource,
                }
            }
        };
        entries[u.0] = Some(tail);
    }
    Tails {
        delta: delta.clone(),
        entries,
    }
}

/// `max over paths of V(π) + λ·(R(π) − β)`, the Lagrangian dual function of
/// the lower-bounded main constraint, ignoring every window.
pub fn lagrangian_value(dag: &WindowedDag, lambda: &Scalar, beta: &Scalar) -> Option<Scalar> {
    let tails = all_tails(dag, lambda);
    tails.get(dag.source()).map(|t| &t.mu - lambda * beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::example_dag;
    use crate::scalar::{int, ratio};

    fn labels(dag: &WindowedDag, p: &Path) -> String {
        dag.format_path(p)
    }

    #[test]
    fn aggregated_graph_first_iteration() {
        let dag = example_dag();
        let lp = longest_path(&dag, &Multiplier::Finite(ratio(7, 24)), dag.source()).unwrap();
        assert_eq!(labels(&dag, &lp.path), "s,1,3,2,p");
        // arc (s,1) under δ = 7/24
        let a = dag.find_arc(dag.source(), dag.vertex_by_label("1").unwrap()).unwrap();
        let arc = dag.arc(a);
        assert_eq!(&arc.value + ratio(7, 24) * &arc.resource, ratio(299, 24));
        assert_eq!(lp.mu.unwrap(), int(32) + ratio(7, 24) * int(35));
    }

    #[test]
    fn extreme_multipliers() {
        let dag = example_dag();
        let v = longest_path(&dag, &Multiplier::zero(), dag.source()).unwrap();
        assert_eq!(labels(&dag, &v.path), "s,1,3,p");
        assert_eq!(v.path.value, int(33));
        let r = longest_path(&dag, &Multiplier::Infinite, dag.source()).unwrap();
        assert_eq!(labels(&dag, &r.path), "s,3,2,p");
        assert_eq!(r.path.resource, int(40));
        assert_eq!(r.mu, None);
    }

    #[test]
    fn tails_after_first_iteration() {
        let dag = example_dag();
        let tails = all_tails(&dag, &ratio(1, 19));
        let v2 = dag.vertex_by_label("2").unwrap();
        let v3 = dag.vertex_by_label("3").unwrap();
        assert_eq!(labels(&dag, &tails.path(&dag, v2).unwrap()), "2,p");
        assert_eq!(tails.get(v2).unwrap().mu, ratio(105, 19));
        // (3,p) and (3,2,p) tie at 234/19; the larger-value arc wins
        assert_eq!(tails.get(v3).unwrap().mu, ratio(234, 19));
        assert_eq!(labels(&dag, &tails.path(&dag, v3).unwrap()), "3,p");
        let sink = tails.get(dag.sink()).unwrap();
        assert_eq!((sink.next, sink.mu.clone()), (None, int(0)));
        assert_eq!(tails.get(dag.source()).unwrap().mu, ratio(643, 19));
    }

    #[test]
    fn unreachable_sink() {
        let dag = WindowedDag::new(
            vec![crate::graph::Window::at_least(int(0)); 3],
            vec![crate::graph::Arc::new(0, 1, int(1), int(1))],
            VertexId(0),
            VertexId(2),
        )
        .unwrap();
        assert_eq!(
            longest_path(&dag, &Multiplier::zero(), dag.source()).unwrap_err(),
            GraphError::SinkUnreachable(VertexId(0))
        );
        assert!(all_tails(&dag, &int(1)).get(VertexId(0)).is_none());
    }

    #[test]
    fn lagrangian_values() {
        let dag = example_dag();
        assert_eq!(lagrangian_value(&dag, &int(0), &int(20)).unwrap(), int(33));
        assert_eq!(lagrangian_value(&dag, &ratio(1, 19), &int(20)).unwrap(), ratio(623, 19));
        assert_eq!(lagrangian_value(&dag, &int(1), &int(20)).unwrap(), int(47));
    }
}
