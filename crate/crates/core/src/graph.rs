//! Window-constrained DAG instances and path arithmetic.

use std::collections::VecDeque;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcId(pub usize);

impl ArcId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Resource window `[lo, hi]` on the cumulative resource at a vertex.
/// A missing bound is unbounded on that side.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Window {
    pub lo: Option<Scalar>,
    pub hi: Option<Scalar>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
}

impl Window {
    pub fn new(lo: Scalar, hi: Scalar) -> Self {
        Window { lo: Some(lo), hi: Some(hi) }
    }

    pub fn unbounded() -> Self {
        Window::default()
    }

    pub fn at_least(lo: Scalar) -> Self {
        Window { lo: Some(lo), hi: None }
    }

    pub fn violation(&self, r: &Scalar) -> Option<Side> {
        if self.lo.as_ref().is_some_and(|lo| r < lo) {
            Some(Side::Lower)
        } else if self.hi.as_ref().is_some_and(|hi| r > hi) {
            Some(Side::Upper)
        } else {
            None
        }
    }

    pub fn contains(&self, r: &Scalar) -> bool {
        self.violation(r).is_none()
    }

    pub fn is_unbounded(&self) -> bool {
        self.lo.is_none() && self.hi.is_none()
    }

    /// Image of the window under `r ↦ -r`.
    pub fn mirrored(&self) -> Window {
        Window {
            lo: self.hi.as_ref().map(|h| -h),
            hi: self.lo.as_ref().map(|l| -l),
        }
    }

    fn is_inverted(&self) -> bool {
        matches!((&self.lo, &self.hi), (Some(lo), Some(hi)) if lo > hi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub from: VertexId,
    pub to: VertexId,
    pub value: Scalar,
    pub resource: Scalar,
}

impl Arc {
    pub fn new(from: usize, to: usize, value: Scalar, resource: Scalar) -> Self {
        Arc {
            from: VertexId(from),
            to: VertexId(to),
            value,
            resource,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("arc {arc} references a vertex outside 0..{vertices}")]
    DanglingArc { arc: usize, vertices: usize },
    #[error("cycle detected through vertex {0}")]
    CycleDetected(VertexId),
    #[error("topological order invalid: {0}")]
    BadTopoOrder(String),
    #[error("window at vertex {0} has lo > hi")]
    InvertedWindow(VertexId),
    #[error("source window must contain resource 0")]
    SourceWindow,
    #[error("arc list is not contiguous at position {0}")]
    NonContiguous(usize),
    #[error("sink is unreachable from vertex {0}")]
    SinkUnreachable(VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationWarning {
    /// A bounded window on a vertex that lies on no source-to-sink path.
    IgnoredWindow(VertexId),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub warnings: Vec<ValidationWarning>,
}

/// Acyclic graph with per-vertex resource windows and per-arc (value, resource).
///
/// Immutable once built; every constructor checks the structural invariants.
#[derive(Debug, Clone)]
pub struct WindowedDag {
    windows: Vec<Window>,
    labels: Vec<String>,
    arcs: Vec<Arc>,
    out: Vec<Vec<ArcId>>,
    inc: Vec<Vec<ArcId>>,
    source: VertexId,
    sink: VertexId,
    topo: Vec<VertexId>,
    topo_pos: Vec<usize>,
}

impl WindowedDag {
    /// Builds the instance, computing a deterministic topological order
    /// (Kahn's algorithm, smallest index first, source forced first).
    pub fn new(
        windows: Vec<Window>,
        arcs: Vec<Arc>,
        source: VertexId,
        sink: VertexId,
    ) -> Result<Self, GraphError> {
        let mut dag = Self::unordered(windows, arcs, source, sink)?;
        let topo = dag.kahn_order()?;
        dag.install_order(topo)?;
        Ok(dag)
    }

    /// Builds the instance with a caller-supplied topological order.
    pub fn with_topo_order(
        windows: Vec<Window>,
        arcs: Vec<Arc>,
        source: VertexId,
        sink: VertexId,
        order: Vec<VertexId>,
    ) -> Result<Self, GraphError> {
        let mut dag = Self::unordered(windows, arcs, source, sink)?;
        dag.install_order(order)?;
        Ok(dag)
    }

    fn unordered(
        windows: Vec<Window>,
        arcs: Vec<Arc>,
        source: VertexId,
        sink: VertexId,
    ) -> Result<Self, GraphError> {
        let n = windows.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if source.0 >= n || sink.0 >= n {
            return Err(GraphError::DanglingArc { arc: usize::MAX, vertices: n });
        }
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for (k, a) in arcs.iter().enumerate() {
            if a.from.0 >= n || a.to.0 >= n {
                return Err(GraphError::DanglingArc { arc: k, vertices: n });
            }
            if a.from == a.to {
                return Err(GraphError::CycleDetected(a.from));
            }
            out[a.from.0].push(ArcId(k));
            inc[a.to.0].push(ArcId(k));
        }
        for (v, w) in windows.iter().enumerate() {
            if w.is_inverted() {
                return Err(GraphError::InvertedWindow(VertexId(v)));
            }
        }
        if !windows[source.0].contains(&Scalar::zero()) {
            return Err(GraphError::SourceWindow);
        }
        Ok(WindowedDag {
            labels: (0..n).map(|v| v.to_string()).collect(),
            windows,
            arcs,
            out,
            inc,
            source,
            sink,
            topo: Vec::new(),
            topo_pos: Vec::new(),
        })
    }

    fn kahn_order(&self) -> Result<Vec<VertexId>, GraphError> {
        let n = self.windows.len();
        let mut indeg: Vec<usize> = self.inc.iter().map(Vec::len).collect();
        let mut ready = std::collections::BTreeSet::new();
        for (v, &d) in indeg.iter().enumerate() {
            if d == 0 && v != self.source.0 {
                ready.insert(v);
            }
        }
        let mut order = Vec::with_capacity(n);
        if indeg[self.source.0] == 0 {
            order.push(self.source);
            for &a in &self.out[self.source.0] {
                let t = self.arcs[a.0].to.0;
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    ready.insert(t);
                }
            }
        }
        while let Some(v) = ready.pop_first() {
            order.push(VertexId(v));
            for &a in &self.out[v] {
                let t = self.arcs[a.0].to.0;
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    ready.insert(t);
                }
            }
        }
        if order.len() < n {
            let stuck = (0..n).find(|&v| indeg[v] > 0).unwrap_or(self.source.0);
            return Err(GraphError::CycleDetected(VertexId(stuck)));
        }
        Ok(order)
    }

    fn install_order(&mut self, order: Vec<VertexId>) -> Result<(), GraphError> {
        let n = self.windows.len();
        if order.len() != n {
            return Err(GraphError::BadTopoOrder(format!(
                "expected {n} vertices, got {}",
                order.len()
            )));
        }
        let mut pos = vec![usize::MAX; n];
        for (k, v) in order.iter().enumerate() {
            if v.0 >= n || pos[v.0] != usize::MAX {
                return Err(GraphError::BadTopoOrder(format!("vertex {v} repeated or out of range")));
            }
            pos[v.0] = k;
        }
        for (k, a) in self.arcs.iter().enumerate() {
            if pos[a.from.0] >= pos[a.to.0] {
                return Err(GraphError::BadTopoOrder(format!("arc {k} points backwards")));
            }
        }
        self.topo = order;
        self.topo_pos = pos;
        Ok(())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.windows.len(), "one label per vertex");
        self.labels = labels;
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.windows.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn sink(&self) -> VertexId {
        self.sink
    }

    pub fn window(&self, v: VertexId) -> &Window {
        &self.windows[v.0]
    }

    pub fn windows(&self) -> &[Window] {
        &self.windows
    }

    pub fn arc(&self, a: ArcId) -> &Arc {
        &self.arcs[a.0]
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn out_arcs(&self, v: VertexId) -> &[ArcId] {
        &self.out[v.0]
    }

    pub fn in_arcs(&self, v: VertexId) -> &[ArcId] {
        &self.inc[v.0]
    }

    pub fn topo_order(&self) -> &[VertexId] {
        &self.topo
    }

    pub fn topo_position(&self, v: VertexId) -> usize {
        self.topo_pos[v.0]
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v.0]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Looks a vertex up by its display label.
    pub fn vertex_by_label(&self, label: &str) -> Option<VertexId> {
        self.labels.iter().position(|l| l == label).map(VertexId)
    }

    /// The sink window bounds `(β, α)` of the main constraint.
    pub fn sink_bounds(&self) -> (Option<&Scalar>, Option<&Scalar>) {
        let w = self.window(self.sink);
        (w.lo.as_ref(), w.hi.as_ref())
    }

    /// Arc from `from` to `to`, the first one if there are parallel arcs.
    pub fn find_arc(&self, from: VertexId, to: VertexId) -> Option<ArcId> {
        self.out[from.0].iter().copied().find(|&a| self.arcs[a.0].to == to)
    }

    pub fn all_resources_nonnegative(&self) -> bool {
        self.arcs.iter().all(|a| a.resource >= Scalar::zero())
    }

    /// Re-checks every structural invariant and reports windows the solver
    /// will never look at.
    pub fn validate(&self) -> Result<ValidationReport, GraphError> {
        let n = self.windows.len();
        for (k, a) in self.arcs.iter().enumerate() {
            if a.from.0 >= n || a.to.0 >= n {
                return Err(GraphError::DanglingArc { arc: k, vertices: n });
            }
            if self.topo_pos[a.from.0] >= self.topo_pos[a.to.0] {
                return Err(GraphError::BadTopoOrder(format!("arc {k} points backwards")));
            }
        }
        for (v, w) in self.windows.iter().enumerate() {
            if w.is_inverted() {
                return Err(GraphError::InvertedWindow(VertexId(v)));
            }
        }
        let fwd = self.reachable_from_source();
        let bwd = self.reaches_sink();
        let warnings = (0..n)
            .filter(|&v| !(fwd[v] && bwd[v]) && !self.windows[v].is_unbounded())
            .map(|v| ValidationWarning::IgnoredWindow(VertexId(v)))
            .collect();
        Ok(ValidationReport { warnings })
    }

    pub fn reachable_from_source(&self) -> Vec<bool> {
        let mut seen = vec![false; self.windows.len()];
        let mut queue = VecDeque::from([self.source]);
        seen[self.source.0] = true;
        while let Some(v) = queue.pop_front() {
            for &a in &self.out[v.0] {
                let t = self.arcs[a.0].to;
                if !seen[t.0] {
                    seen[t.0] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    pub fn reaches_sink(&self) -> Vec<bool> {
        let mut seen = vec![false; self.windows.len()];
        let mut queue = VecDeque::from([self.sink]);
        seen[self.sink.0] = true;
        while let Some(v) = queue.pop_front() {
            for &a in &self.inc[v.0] {
                let f = self.arcs[a.0].from;
                if !seen[f.0] {
                    seen[f.0] = true;
                    queue.push_back(f);
                }
            }
        }
        seen
    }

    /// Copy of the instance with every arc resource negated and every window
    /// mirrored. Paths keep their arc ids.
    pub fn mirrored(&self) -> WindowedDag {
        let mut dag = self.clone();
        for a in &mut dag.arcs {
            a.resource = -&a.resource;
        }
        for w in &mut dag.windows {
            *w = w.mirrored();
        }
        dag
    }

    /// Drops every vertex that is not on a source-to-sink path. Returns the
    /// reduced instance and the old-to-new vertex map.
    pub fn pruned(&self) -> (WindowedDag, Vec<Option<VertexId>>) {
        let fwd = self.reachable_from_source();
        let bwd = self.reaches_sink();
        let mut map = vec![None; self.windows.len()];
        let mut windows = Vec::new();
        let mut labels = Vec::new();
        for v in 0..self.windows.len() {
            if fwd[v] && bwd[v] {
                map[v] = Some(VertexId(windows.len()));
                windows.push(self.windows[v].clone());
                labels.push(self.labels[v].clone());
            }
        }
        // an unreachable sink still needs the two endpoints
        for end in [self.source, self.sink] {
            if map[end.0].is_none() {
                map[end.0] = Some(VertexId(windows.len()));
                windows.push(self.windows[end.0].clone());
                labels.push(self.labels[end.0].clone());
            }
        }
        let arcs = self
            .arcs
            .iter()
            .filter_map(|a| match (map[a.from.0], map[a.to.0]) {
                (Some(f), Some(t)) if fwd[a.from.0] && bwd[a.to.0] => Some(Arc {
                    from: f,
                    to: t,
                    value: a.value.clone(),
                    resource: a.resource.clone(),
                }),
                _ => None,
            })
            .collect();
        let source = map[self.source.0].expect("source kept");
        let sink = map[self.sink.0].expect("sink kept");
        let dag = WindowedDag::new(windows, arcs, source, sink)
            .expect("subgraph of a valid dag is valid")
            .with_labels(labels);
        (dag, map)
    }

    /// Evaluates a contiguous arc list starting at `start`.
    pub fn path(&self, start: VertexId, arcs: &[ArcId]) -> Result<Path, GraphError> {
        path_metrics(self, start, arcs)
    }

    pub fn format_path(&self, path: &Path) -> String {
        path.vertices
            .iter()
            .map(|&v| self.label(v))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// A contiguous arc sequence with cached totals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub arcs: Vec<ArcId>,
    /// Visited vertices, starting vertex included.
    pub vertices: Vec<VertexId>,
    pub value: Scalar,
    pub resource: Scalar,
    /// Cumulative resource on arrival at each entry of `vertices`.
    pub prefix_resources: Vec<Scalar>,
}

impl Path {
    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn end(&self) -> VertexId {
        *self.vertices.last().expect("path has a start vertex")
    }

    pub fn point(&self) -> BiPoint {
        BiPoint {
            v1: self.value.clone(),
            v2: self.resource.clone(),
        }
    }

    pub fn prefix_resource_at(&self, v: VertexId) -> Option<&Scalar> {
        self.vertices
            .iter()
            .position(|&u| u == v)
            .map(|k| &self.prefix_resources[k])
    }
}

/// Value/resource image of a path in the bi-objective space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BiPoint {
    pub v1: Scalar,
    pub v2: Scalar,
}

impl BiPoint {
    pub fn new(v1: Scalar, v2: Scalar) -> Self {
        BiPoint { v1, v2 }
    }

    /// Component-wise equality of both objectives.
    pub fn pareto_equal(&self, other: &BiPoint) -> bool {
        self == other
    }
}

pub fn path_metrics(dag: &WindowedDag, start: VertexId, arcs: &[ArcId]) -> Result<Path, GraphError> {
    let mut vertices = Vec::with_capacity(arcs.len() + 1);
    let mut prefix = Vec::with_capacity(arcs.len() + 1);
    let mut value = Scalar::zero();
    let mut resource = Scalar::zero();
    vertices.push(start);
    prefix.push(resource.clone());
    let mut at = start;
    for (k, &a) in arcs.iter().enumerate() {
        let arc = dag.arcs.get(a.0).ok_or(GraphError::NonContiguous(k))?;
        if arc.from != at {
            return Err(GraphError::NonContiguous(k));
        }
        value += &arc.value;
        resource += &arc.resource;
        at = arc.to;
        vertices.push(at);
        prefix.push(resource.clone());
    }
    Ok(Path {
        arcs: arcs.to_vec(),
        vertices,
        value,
        resource,
        prefix_resources: prefix,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WindowCheck {
    Feasible,
    Violation { vertex: VertexId, side: Side },
}

impl WindowCheck {
    pub fn is_feasible(&self) -> bool {
        matches!(self, WindowCheck::Feasible)
    }
}

/// Checks every visited vertex against its window, reporting the earliest
/// violation.
pub fn check_windows(dag: &WindowedDag, path: &Path) -> WindowCheck {
    for (v, r) in path.vertices.iter().zip(&path.prefix_resources) {
        if let Some(side) = dag.window(*v).violation(r) {
            return WindowCheck::Violation { vertex: *v, side };
        }
    }
    WindowCheck::Feasible
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::example_dag;
    use crate::scalar::int;
    use proptest::prelude::*;

    fn ids(dag: &WindowedDag, labels: &[&str]) -> Vec<ArcId> {
        labels
            .windows(2)
            .map(|w| {
                let f = dag.vertex_by_label(w[0]).unwrap();
                let t = dag.vertex_by_label(w[1]).unwrap();
                dag.find_arc(f, t).unwrap()
            })
            .collect()
    }

    #[test]
    fn example_validates() {
        let dag = example_dag();
        assert_eq!(dag.vertex_count(), 5);
        assert_eq!(dag.arc_count(), 7);
        assert!(dag.validate().unwrap().warnings.is_empty());
        assert_eq!(dag.topo_order()[0], dag.source());
    }

    #[test]
    fn single_vertex_instance() {
        let dag = WindowedDag::new(
            vec![Window::new(int(0), int(0))],
            vec![],
            VertexId(0),
            VertexId(0),
        )
        .unwrap();
        assert!(dag.validate().is_ok());
    }

    #[test]
    fn back_arc_is_a_cycle() {
        let dag = example_dag();
        let mut arcs = dag.arcs().to_vec();
        arcs.push(Arc::new(dag.sink().0, dag.source().0, int(0), int(0)));
        let err = WindowedDag::new(dag.windows().to_vec(), arcs, dag.source(), dag.sink());
        assert!(matches!(err, Err(GraphError::CycleDetected(_))));
    }

    #[test]
    fn structural_errors() {
        let w = vec![Window::at_least(int(0)), Window::unbounded()];
        let dangling = WindowedDag::new(w.clone(), vec![Arc::new(0, 5, int(1), int(1))], VertexId(0), VertexId(1));
        assert!(matches!(dangling, Err(GraphError::DanglingArc { arc: 0, .. })));
        let inverted = WindowedDag::new(
            vec![Window::at_least(int(0)), Window::new(int(3), int(2))],
            vec![],
            VertexId(0),
            VertexId(1),
        );
        assert_eq!(inverted.unwrap_err(), GraphError::InvertedWindow(VertexId(1)));
        let bad_order = WindowedDag::with_topo_order(
            w.clone(),
            vec![Arc::new(0, 1, int(1), int(1))],
            VertexId(0),
            VertexId(1),
            vec![VertexId(1), VertexId(0)],
        );
        assert!(matches!(bad_order, Err(GraphError::BadTopoOrder(_))));
        let source_window = WindowedDag::new(
            vec![Window::at_least(int(1)), Window::unbounded()],
            vec![],
            VertexId(0),
            VertexId(1),
        );
        assert_eq!(source_window.unwrap_err(), GraphError::SourceWindow);
    }

    #[test]
    fn irrelevant_windows_are_warnings() {
        let dag = WindowedDag::new(
            vec![
                Window::at_least(int(0)),
                Window::unbounded(),
                Window::new(int(1), int(2)),
            ],
            vec![Arc::new(0, 1, int(1), int(1)), Arc::new(0, 2, int(1), int(1))],
            VertexId(0),
            VertexId(1),
        )
        .unwrap();
        let report = dag.validate().unwrap();
        assert_eq!(report.warnings, vec![ValidationWarning::IgnoredWindow(VertexId(2))]);
    }

    #[test]
    fn metrics_of_table_paths() {
        let dag = example_dag();
        let p4 = dag.path(dag.source(), &ids(&dag, &["s", "1", "3", "p"])).unwrap();
        assert_eq!((p4.value.clone(), p4.resource.clone()), (int(33), int(16)));
        assert_eq!(p4.prefix_resources, vec![int(0), int(5), int(10), int(16)]);
        let p5 = dag.path(dag.source(), &ids(&dag, &["s", "3", "2", "p"])).unwrap();
        assert_eq!((p5.value, p5.resource), (int(26), int(40)));
        let empty = dag.path(dag.source(), &[]).unwrap();
        assert_eq!((empty.value, empty.resource), (int(0), int(0)));
    }

    #[test]
    fn non_contiguous_rejected() {
        let dag = example_dag();
        let a = ids(&dag, &["s", "1"]);
        let b = ids(&dag, &["3", "p"]);
        let err = dag.path(dag.source(), &[a[0], b[0]]).unwrap_err();
        assert_eq!(err, GraphError::NonContiguous(1));
    }

    #[test]
    fn window_checks_match_table_marks() {
        let dag = example_dag();
        let p = |l: &[&str]| dag.path(dag.source(), &ids(&dag, l)).unwrap();
        let sink = dag.sink();
        assert!(check_windows(&dag, &p(&["s", "1", "2", "p"])).is_feasible());
        assert!(check_windows(&dag, &p(&["s", "3", "p"])).is_feasible());
        assert_eq!(
            check_windows(&dag, &p(&["s", "1", "3", "p"])),
            WindowCheck::Violation { vertex: sink, side: Side::Lower }
        );
        assert_eq!(
            check_windows(&dag, &p(&["s", "1", "3", "2", "p"])),
            WindowCheck::Violation { vertex: sink, side: Side::Upper }
        );
        let two = dag.vertex_by_label("2").unwrap();
        assert_eq!(
            check_windows(&dag, &p(&["s", "3", "2", "p"])),
            WindowCheck::Violation { vertex: two, side: Side::Upper }
        );
    }

    #[test]
    fn mirrored_twice_is_identity() {
        let dag = example_dag();
        let back = dag.mirrored().mirrored();
        assert_eq!(back.arcs(), dag.arcs());
        assert_eq!(back.windows(), dag.windows());
    }

    proptest! {
        #[test]
        fn widening_never_breaks_feasibility(
            seed in 0u64..500,
            widen in proptest::collection::vec((0i64..5, 0i64..5), 5),
        ) {
            let dag = crate::generator::random_dag(&crate::generator::DagParams { vertices: 5, ..Default::default() }, seed);
            let paths = crate::baselines::enumerate_paths(&dag, 10_000).unwrap();
            let windows: Vec<Window> = dag
                .windows()
                .iter()
                .zip(widen.iter().cycle())
                .map(|(w, (a, b))| Window {
                    lo: w.lo.as_ref().map(|l| l - int(*a)),
                    hi: w.hi.as_ref().map(|h| h + int(*b)),
                })
                .collect();
            let wide = WindowedDag::new(windows, dag.arcs().to_vec(), dag.source(), dag.sink()).unwrap();
            for arcs in paths {
                let p = dag.path(dag.source(), &arcs).unwrap();
                if check_windows(&dag, &p).is_feasible() {
                    prop_assert!(check_windows(&wide, &p).is_feasible());
                }
                prop_assert_eq!(p.prefix_resources.last().unwrap(), &p.resource);
            }
        }
    }
}
